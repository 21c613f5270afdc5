#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace sitopt {

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based stream: draw c of stream (seed, index) is
/// splitmix64(key + c * golden) with key = splitmix64(seed ^ splitmix64(index + golden)),
/// so realizations can be generated in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index);
  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double uniform();
  /// Standard normal via Box-Muller (both outputs used).
  double normal();
  /// Circularly symmetric CN(0, 1).
  std::complex<double> complex_normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class ChannelModel { Mwrc, Gic };

struct ChannelRealization {
  std::uint64_t seed = 0;
  long index = 0;
  double snr_db = 0.0;
  /// MWRC: h_1..h_3 (g = conj(h)). GIC: K x K row-major.
  std::vector<std::complex<double>> h;
};

/// n iid CN(0, 1) realizations; `size` coefficients each (3 for the MWRC, K*K for the GIC).
std::vector<ChannelRealization> generate_channels(std::uint64_t master_seed, long n, ChannelModel model,
                                                  int K = 3, double snr_db = 0.0);
ChannelRealization generate_channel(std::uint64_t master_seed, long index, ChannelModel model, int K = 3,
                                    double snr_db = 0.0);

std::string channels_to_json(const std::vector<ChannelRealization>& chs);
/// Throws SchemaError on malformed input.
std::vector<ChannelRealization> channels_from_json(const std::string& text);
void save_channels(const std::string& path, const std::vector<ChannelRealization>& chs);
std::vector<ChannelRealization> load_channels(const std::string& path);

}  // namespace sitopt
