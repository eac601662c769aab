"""Spanning-tree combination heuristics for the symmetric TSP."""

from bomtsp._core import *  # noqa: F401,F403
from bomtsp._core import __version__  # noqa: F401
