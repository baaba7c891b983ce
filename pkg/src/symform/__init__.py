"""Chain-valued 2-form: assembly, closedness and boundary"""

from .omega import (
    assemble_omega,
    omega_on_tangents,
    tail_extension,
    vertex_blocks,
    pair_value,
)
from .verification import (
    ANALYTIC,
    FINITE_DIFFERENCE,
    check_closedness,
    boundary_omega,
)

__all__ = [
    "assemble_omega",
    "omega_on_tangents",
    "tail_extension",
    "vertex_blocks",
    "pair_value",
    "ANALYTIC",
    "FINITE_DIFFERENCE",
    "check_closedness",
    "boundary_omega",
]
