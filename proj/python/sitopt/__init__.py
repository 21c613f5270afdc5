"""Python bindings for the sitopt global optimizer."""

from ._sitopt import *  # noqa: F401,F403
from ._sitopt import __version__  # noqa: F401
