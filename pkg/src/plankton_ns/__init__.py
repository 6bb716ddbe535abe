"""Discrete phytoplankton-zooplankton map with Holling type III grazing.

Submodules: :mod:`model` (the map and closed-form helpers),
:mod:`fixed_points`, :mod:`stability`, :mod:`normal_form`,
:mod:`global_dynamics`, :mod:`simulate` and :mod:`cli`.
"""

from .kernels import BACKEND
from .model import Params, State, step

__version__ = "0.1.0"

__all__ = ["BACKEND", "Params", "State", "step", "__version__"]
