"""Bistable reaction-diffusion cellular automata on the integer lattice.

Submodules: ``kernel`` (diffusion rule and update), ``reactions`` (bistable
maps), ``waves`` (moving fronts), ``pinned`` (stationary fronts),
``higher_order`` ((c, m) waves), ``simulate`` (random runs and sweeps) and
``cli``.
"""
from .errors import RDCAError
from .kernel import LatticeWindow, apply_F, d_delta, h_delta, iterate
from .reactions import ReactionFunction, from_table, maximal, truncated_polynomial
from .waves import WaveProfile, construct_left_tws, construct_right_tws, verify_wave
from .pinned import is_pinned, search_pinned
from .higher_order import HigherOrderWave, characterize_maximal, construct_pm12, detect

__version__ = "0.1.0"
