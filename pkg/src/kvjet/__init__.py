"""Exact verification of the universal symmetric Kashiwara-Vergne jet."""

from .exact_arith import Series1, Series2, phi1_series, psi_series
from .free_lie import LieElement, bch, hall_basis
from .kv_core import KVSolutionJet, beta_series, gamma_series, kv_jet, pi_series

__version__ = "0.1.0"

__all__ = [
    "Series1",
    "Series2",
    "phi1_series",
    "psi_series",
    "LieElement",
    "bch",
    "hall_basis",
    "KVSolutionJet",
    "beta_series",
    "gamma_series",
    "kv_jet",
    "pi_series",
]
