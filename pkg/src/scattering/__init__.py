"""Symplectic Wronskian and scattering on graphs with tails"""

from .wronskian import wronskian, nn_wronskian, require_nearest_neighbor
from .tail_scattering import (
    scatter_problem,
    scatter,
    verify_unitarity,
    tail_wave,
    flux_matrix,
)

__all__ = [
    "wronskian",
    "nn_wronskian",
    "require_nearest_neighbor",
    "scatter_problem",
    "scatter",
    "verify_unitarity",
    "tail_wave",
    "flux_matrix",
]
