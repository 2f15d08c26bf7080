"""Dense complex linear algebra shared by the rest of the package.

Matrices and vectors are plain ``numpy`` arrays of dtype ``complex128``.
These wrappers add the dimension checks, deterministic eigenvalue ordering
and residual reporting the other modules rely on.
"""
from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-10


class DimensionError(ValueError):
    """Operands do not have conformable shapes."""


class ConvergenceError(RuntimeError):
    """An iterative routine exceeded its iteration cap."""


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def as_vector(v) -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128)
    if x.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {x.shape}")
    return x


def frozen(a: np.ndarray) -> np.ndarray:
    """Return ``a`` marked read-only (values are immutable after construction)."""
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def commutator(a, b) -> np.ndarray:
    return matmul(a, b) - matmul(b, a)


def anticommutator(a, b) -> np.ndarray:
    return matmul(a, b) + matmul(b, a)


def max_norm(a) -> float:
    """Largest entry modulus; the package-wide equality metric."""
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def allclose(a, b, tol: float = DEFAULT_TOL) -> bool:
    return max_norm(np.asarray(a) - np.asarray(b)) <= tol


def solve_linear_least_squares(A, b) -> tuple[np.ndarray, float]:
    """Minimum-norm least-squares solution of ``A x = b``.

    Returns ``(x, residual)`` with ``residual = ||A x - b||_2``. An
    inconsistent system is not an error; the residual reports it.
    """
    A, b = as_matrix(A), as_vector(b)
    if A.shape[0] != b.shape[0]:
        raise DimensionError(f"matrix has {A.shape[0]} rows, rhs has {b.shape[0]}")
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    return x, float(np.linalg.norm(A @ x - b))


def null_space(A, rtol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel of ``A``."""
    A = as_matrix(A)
    _, sv, vh = np.linalg.svd(A)
    rank = int(np.sum(sv > rtol * (sv[0] if sv.size else 0.0)))
    return vh[rank:].conj().T


def eigenvalues(A) -> np.ndarray:
    """Eigenvalues with multiplicity, sorted by (real, imag)."""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"eigenvalues need a square matrix, got {A.shape}")
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    order = np.lexsort((ev.imag, ev.real))
    return ev[order]
