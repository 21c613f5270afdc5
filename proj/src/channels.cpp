#include "sitopt/channels.hpp"

#include "sitopt/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sitopt {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index)
    : key_(splitmix64(seed ^ splitmix64(index + kGolden))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + (counter_++) * kGolden); }

double CounterRng::uniform() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double t = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::complex<double> CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return std::complex<double>(re, im) / std::sqrt(2.0);
}

ChannelRealization generate_channel(std::uint64_t master_seed, long index, ChannelModel model, int K,
                                    double snr_db) {
  if (index < 0) throw Error(ErrorCode::InvalidInput, "realization index must be nonnegative");
  if (model == ChannelModel::Gic && K < 2) throw Error(ErrorCode::InvalidInput, "GIC needs K >= 2");
  const int size = model == ChannelModel::Mwrc ? 3 : K * K;
  ChannelRealization ch;
  ch.seed = master_seed;
  ch.index = index;
  ch.snr_db = snr_db;
  CounterRng rng(master_seed, static_cast<std::uint64_t>(index));
  ch.h.reserve(size);
  for (int i = 0; i < size; ++i) ch.h.push_back(rng.complex_normal());
  return ch;
}

std::vector<ChannelRealization> generate_channels(std::uint64_t master_seed, long n, ChannelModel model, int K,
                                                  double snr_db) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "channel count must be at least 1");
  std::vector<ChannelRealization> out;
  out.reserve(n);
  for (long i = 0; i < n; ++i) out.push_back(generate_channel(master_seed, i, model, K, snr_db));
  return out;
}

std::string channels_to_json(const std::vector<ChannelRealization>& chs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& ch : chs) {
    nlohmann::json h = nlohmann::json::array();
    for (const auto& c : ch.h) h.push_back({c.real(), c.imag()});
    arr.push_back({{"h", h}, {"snr_db", ch.snr_db}, {"seed", ch.seed}, {"index", ch.index}});
  }
  return arr.dump(2);
}

std::vector<ChannelRealization> channels_from_json(const std::string& text) {
  std::vector<ChannelRealization> out;
  try {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw Error(ErrorCode::SchemaError, "channel file must hold a JSON array");
    for (const auto& e : arr) {
      ChannelRealization ch;
      ch.snr_db = e.value("snr_db", 0.0);
      ch.seed = e.value("seed", std::uint64_t{0});
      ch.index = e.value("index", 0L);
      for (const auto& c : e.at("h")) {
        if (!c.is_array() || c.size() != 2) throw Error(ErrorCode::SchemaError, "coefficients must be [re, im] pairs");
        ch.h.emplace_back(c[0].get<double>(), c[1].get<double>());
      }
      out.push_back(std::move(ch));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid channel JSON: ") + e.what());
  }
  return out;
}

void save_channels(const std::string& path, const std::vector<ChannelRealization>& chs) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  f << channels_to_json(chs) << '\n';
}

std::vector<ChannelRealization> load_channels(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return channels_from_json(ss.str());
}

}  // namespace sitopt
