"""Finite lenses, symmetric lenses, learners and gradient-descent learners."""

from ._bilearn import *  # noqa: F401,F403
from ._bilearn import Error, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]
