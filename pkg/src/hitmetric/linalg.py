"""Dense Gaussian elimination with partial pivoting."""

from __future__ import annotations

import numpy as np

from .errors import SingularSystem

PIVOT_TOL = 1e-12


def solve(A, B, pivot_tol: float = PIVOT_TOL) -> np.ndarray:
    """Solve ``A X = B`` for square ``A``; ``B`` may be a vector or a matrix.

    Row ``k`` is swapped with the row holding the largest ``|A[i, k]|`` for
    ``i >= k``. Raises :class:`SingularSystem` when that pivot is below
    ``pivot_tol`` in absolute value. Inputs are not modified.
    """
    A = np.array(A, dtype=np.float64, copy=True)
    B = np.array(B, dtype=np.float64, copy=True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"coefficient matrix must be square, got {A.shape}")
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    if B.shape[0] != n:
        raise ValueError("right-hand side has wrong number of rows")

    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) < pivot_tol:
            raise SingularSystem(f"pivot {A[p, k]!r} at column {k} below {pivot_tol}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            B[[k, p]] = B[[p, k]]
        if k + 1 < n:
            f = A[k + 1:, k] / A[k, k]
            A[k + 1:, k:] -= np.outer(f, A[k, k:])
            B[k + 1:] -= np.outer(f, B[k])

    X = np.empty_like(B)
    for k in range(n - 1, -1, -1):
        X[k] = (B[k] - A[k, k + 1:] @ X[k + 1:]) / A[k, k]
    return X[:, 0] if vector else X
