"""Kernels of the linearized operator"""

from typing import List, Sequence

import numpy as np
from scipy.linalg import eigh, null_space

from ..models import LinearizedOperator, TangentField


def _oriented(vectors: np.ndarray) -> np.ndarray:
    # sign fixed so the largest-magnitude entry of each column is positive
    out = vectors.copy()
    for col in range(out.shape[1]):
        pivot = np.argmax(np.abs(out[:, col]))
        if out[pivot, col] < 0:
            out[:, col] = -out[:, col]
    return out


def kernel_basis(op: LinearizedOperator, tol: float = 1e-9) -> List[TangentField]:
    """Orthonormal eigenvectors with |λ| ≤ tol · max|λ|

    Args:
        op: Symmetric linearized operator
        tol: Relative spectral tolerance

    Returns:
        Kernel basis as tangent fields (empty for a trivial kernel)
    """
    if op.layout.size == 0:
        return []
    values, vectors = eigh(op.dense())
    scale = float(np.max(np.abs(values)))
    if scale == 0.0:
        selected = np.eye(op.layout.size)
    else:
        selected = vectors[:, np.abs(values) <= tol * scale]
    return [op.layout.unflatten(col, TangentField) for col in _oriented(selected).T]


def open_kernel_basis(op: LinearizedOperator, open_vertices: Sequence[str], tol: float = 1e-9) -> List[TangentField]:
    """Tangents solving the linearized equation at every vertex except the open ones

    At the attach vertices of coupled tails the equation continues along the
    tail, so those rows are dropped; what remains is the kernel seen by an
    observer of the finite core.

    Args:
        op: Linearized operator of the core system
        open_vertices: Vertices whose rows are not imposed
        tol: Relative singular-value tolerance
    """
    layout = op.layout
    open_set = set(open_vertices)
    rows = [i for i in range(layout.size) if layout.vertex_of(i) not in open_set]
    dense = op.dense()
    if not rows:
        basis = np.eye(layout.size)
    else:
        basis = null_space(dense[rows, :], rcond=tol)
    return [layout.unflatten(col, TangentField) for col in _oriented(basis).T]
