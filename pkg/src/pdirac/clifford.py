"""Gamma and DKP beta matrices, the Minkowski metric, slash and boosts.

Signature is (-+++) throughout, so the fermion algebra reads
``{g^mu, g^nu} = -2 g^{mu nu}``: ``(gamma^0)^2 = +1`` and
``(gamma^j)^2 = -1``. The gamma matrices are in the Dirac-Pauli form with
``gamma^5 = i gamma^0 gamma^1 gamma^2 gamma^3``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import numerics as nm

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])
METRIC.flags.writeable = False

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

SERIES_CUTOFF = 1e-16
_SERIES_MAX_TERMS = 200


def four_vector(v) -> np.ndarray:
    """Validate and return a real 4-vector (contravariant components)."""
    a = np.asarray(v, dtype=float)
    if a.shape != (4,):
        raise ValueError(f"four-vector needs 4 components, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("four-vector components must be finite")
    return a


def minkowski_dot(a, b) -> float:
    a, b = four_vector(a), four_vector(b)
    return float(-a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3])


def lower(v) -> np.ndarray:
    return METRIC @ four_vector(v)


@dataclass(frozen=True, eq=False)
class GammaBasis:
    gamma: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    gamma5: np.ndarray

    def __getitem__(self, mu: int) -> np.ndarray:
        return self.gamma[mu]

    @property
    def dim(self) -> int:
        return self.gamma5.shape[0]


@dataclass(frozen=True, eq=False)
class BetaBasis:
    dim: int
    beta: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]

    def __getitem__(self, mu: int) -> np.ndarray:
        return self.beta[mu]


@dataclass(frozen=True, eq=False)
class LorentzBoost:
    """Pure boost ``omega`` (acting on contravariant vectors) and its spinor
    representative ``spinor_rep``."""

    omega: np.ndarray
    spinor_rep: np.ndarray
    direction: tuple[float, float, float]
    rapidity: float

    def apply(self, v) -> np.ndarray:
        return self.omega @ four_vector(v)


def build_gamma_basis() -> GammaBasis:
    eye, zero = np.eye(2), np.zeros((2, 2))
    g0 = np.block([[eye, zero], [zero, -eye]])
    gj = [np.block([[zero, s], [-s, zero]]) for s in _SIGMA]
    gamma = (g0, *gj)
    g5 = 1j * gamma[0] @ gamma[1] @ gamma[2] @ gamma[3]
    return GammaBasis(tuple(nm.frozen(g) for g in gamma), nm.frozen(g5))


_DEFAULT_GAMMA = build_gamma_basis()


def default_basis() -> GammaBasis:
    return _DEFAULT_GAMMA


def build_beta_basis(dim: int) -> BetaBasis:
    """Irreducible DKP matrices: ``dim=5`` (spin 0) or ``dim=10`` (spin 1).

    Both are built from unit matrices ``E_ab`` with the sign
    ``h_mu = -g^{mu mu}`` on the lowering half, then checked by the caller
    against the meson algebra.
    """
    if dim == 5:
        beta = []
        for mu in range(4):
            b = np.zeros((5, 5))
            b[4, mu] = 1.0
            b[mu, 4] = -METRIC[mu, mu]
            beta.append(b)
    elif dim == 10:
        # basis: vector slots 0..3, then antisymmetric pairs (a<b) at 4..9
        pairs = list(itertools.combinations(range(4), 2))
        slot = {pair: 4 + i for i, pair in enumerate(pairs)}
        beta = []
        for mu in range(4):
            b = np.zeros((10, 10))
            for a in range(4):
                if a != mu:
                    sign = 1.0 if mu < a else -1.0
                    b[slot[tuple(sorted((mu, a)))], a] += sign
            h = -METRIC[mu, mu]
            for (a, c), j in slot.items():
                if mu == a:
                    b[c, j] += h
                if mu == c:
                    b[a, j] -= h
            beta.append(b)
    else:
        raise ValueError(f"unsupported DKP dimension {dim}; use 5 or 10")
    return BetaBasis(dim, tuple(nm.frozen(b) for b in beta))


def slash(v, basis: GammaBasis | None = None) -> np.ndarray:
    """``gamma^mu v_mu`` with the index lowered by the metric."""
    basis = basis or _DEFAULT_GAMMA
    vl = lower(v)
    return sum(basis[mu] * vl[mu] for mu in range(4))


def beta_dot(v, basis: BetaBasis) -> np.ndarray:
    vl = lower(v)
    return sum(basis[mu] * vl[mu] for mu in range(4))


def fermion_algebra_residual(basis: GammaBasis) -> float:
    """Max residual over all 16 relations ``{g^mu, g^nu} + 2 g^{mu nu} I``."""
    eye = np.eye(basis.dim)
    return max(
        nm.max_norm(nm.anticommutator(basis[m], basis[n]) + 2 * METRIC[m, n] * eye)
        for m in range(4)
        for n in range(4)
    )


def gamma5_residual(basis: GammaBasis) -> float:
    eye = np.eye(basis.dim)
    res = nm.max_norm(basis.gamma5 @ basis.gamma5 - eye)
    for mu in range(4):
        res = max(res, nm.max_norm(nm.anticommutator(basis.gamma5, basis[mu])))
    return res


def hermiticity_residual(basis: GammaBasis) -> float:
    """gamma^0 Hermitian, spatial gammas anti-Hermitian."""
    res = nm.max_norm(basis[0] - nm.adjoint(basis[0]))
    for j in (1, 2, 3):
        res = max(res, nm.max_norm(basis[j] + nm.adjoint(basis[j])))
    return res


def meson_algebra_residual(basis: BetaBasis) -> float:
    """Max residual over all 64 relations of the DKP algebra."""
    b, g = basis.beta, METRIC
    worst = 0.0
    for lam, mu, nu in itertools.product(range(4), repeat=3):
        lhs = b[lam] @ b[mu] @ b[nu] + b[nu] @ b[mu] @ b[lam]
        rhs = -b[lam] * g[mu, nu] - b[nu] * g[mu, lam]
        worst = max(worst, nm.max_norm(lhs - rhs))
    return worst


def boost_matrix(direction, rapidity: float) -> np.ndarray:
    n = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(n)
    if n.shape != (3,) or norm == 0.0:
        raise ValueError("boost direction must be a nonzero 3-vector")
    n = n / norm
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    omega = np.eye(4)
    omega[0, 0] = ch
    omega[0, 1:] = sh * n
    omega[1:, 0] = sh * n
    omega[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    return omega


def expm_series(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by its Taylor series, stopped once a term drops
    below ``SERIES_CUTOFF`` in max-norm."""
    a = nm.as_matrix(a)
    total = np.eye(a.shape[0], dtype=complex)
    term = total.copy()
    for k in range(1, _SERIES_MAX_TERMS):
        term = term @ a / k
        total = total + term
        if nm.max_norm(term) < SERIES_CUTOFF:
            return total
    raise nm.ConvergenceError("exponential series did not converge")


def build_boost(direction, rapidity: float, basis: GammaBasis | None = None) -> LorentzBoost:
    basis = basis or _DEFAULT_GAMMA
    omega = boost_matrix(direction, rapidity)
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    generator = sum(n[j] * basis[0] @ basis[j + 1] for j in range(3))
    s = expm_series(generator * (rapidity / 2))
    return LorentzBoost(
        omega=omega,
        spinor_rep=nm.frozen(s),
        direction=tuple(float(x) for x in n),
        rapidity=float(rapidity),
    )


def metric_residual(boost: LorentzBoost) -> float:
    return nm.max_norm(boost.omega.T @ METRIC @ boost.omega - METRIC)


def covariance_residual(boost: LorentzBoost, basis: GammaBasis | None = None) -> float:
    """Max over mu of ``|S^-1 g^mu S - Omega^mu_nu g^nu|``."""
    basis = basis or _DEFAULT_GAMMA
    s = boost.spinor_rep
    s_inv = np.linalg.inv(s)
    return max(
        nm.max_norm(
            s_inv @ basis[mu] @ s - sum(boost.omega[mu, nu] * basis[nu] for nu in range(4))
        )
        for mu in range(4)
    )
