"""Long-memory continuous-time moving averages: simulation, estimators and limit laws."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
