"""Plane-wave modes, particle states, and rotation-eigenstate preparation.

A mode is one term ``w exp[i(p.x + branch*phi_p*m_p*tau)]`` of a free
solution; ``branch=+1`` propagates forward in coordinate time as tau grows,
``branch=-1`` backward, whatever the sign of the energy ``p^0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import numerics as nm
from .clifford import (
    GammaBasis,
    LorentzBoost,
    boost_matrix,
    build_boost,
    default_basis,
    four_vector,
    minkowski_dot,
    slash,
)

PARALLEL_EPS = 1e-8
PURITY_TOL = 1e-9
EIGEN_TOL = 1e-9
HALF_INTEGER_LABELS = (-0.5, 0.5)
INTEGER_LABELS = (-1.0, 0.0, 1.0)


class DegenerateAxisError(ValueError):
    """The rotation axis is parallel to the 3-momentum and the rotation
    constraint has no solution."""


def mass_and_sign(p) -> tuple[float, int, float]:
    """Return ``(m_p, phi_p, E_p)`` for a timelike momentum with ``p^0 != 0``."""
    p = four_vector(p)
    if p[0] == 0.0:
        raise ValueError("momentum has zero energy")
    m2 = -minkowski_dot(p, p)
    if m2 <= 0.0:
        raise ValueError(f"momentum {tuple(p)} is not timelike (-p.p = {m2})")
    return math.sqrt(m2), (1 if p[0] > 0 else -1), abs(float(p[0]))


def energy_projection(p, sign: int, basis: GammaBasis | None = None) -> np.ndarray:
    """``Lambda_sign(p) = (m_p - sign*phi_p*pslash) / (2 m_p)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    m, phi, _ = mass_and_sign(p)
    return (m * np.eye(4) - sign * phi * slash(p, basis)) / (2 * m)


def rotation_axis(s) -> np.ndarray:
    """Validate a pure spacelike unit axis ``s = (0, s_vec)``."""
    s = four_vector(s)
    if s[0] != 0.0:
        raise ValueError("rotation axis must have zero time component")
    if abs(minkowski_dot(s, s) - 1.0) > 1e-12:
        raise ValueError("rotation axis must satisfy s.s = 1")
    return s


def unit_axis(direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    return np.concatenate([[0.0], d / np.linalg.norm(d)])


def rotation_operator(s, basis: GammaBasis | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``R(s) = gamma^0 sslash gamma^5 / 2`` and its eigenprojections
    ``P = R + 1/2``, ``Q = 1 - P``."""
    basis = basis or default_basis()
    s = rotation_axis(s)
    r = 0.5 * basis[0] @ slash(s, basis) @ basis.gamma5
    p = r + 0.5 * np.eye(4)
    return r, p, np.eye(4) - p


def transverse_norm(p, s) -> float:
    """Norm of the 3-momentum component perpendicular to the axis."""
    return float(np.linalg.norm(np.cross(four_vector(p)[1:], four_vector(s)[1:])))


def is_parallel(p, s, eps: float = PARALLEL_EPS) -> bool:
    pv, sv = four_vector(p)[1:], four_vector(s)[1:]
    scale = np.linalg.norm(pv) * np.linalg.norm(sv)
    return bool(transverse_norm(p, s) <= eps * max(scale, 1.0))


def commutator_norm(s, p, basis: GammaBasis | None = None) -> tuple[float, float]:
    r, _, _ = rotation_operator(s, basis)
    return tuple(
        nm.max_norm(nm.commutator(r, energy_projection(p, sign, basis))) for sign in (1, -1)
    )


def branch_residual(w, p, branch: int, basis: GammaBasis | None = None) -> float:
    w = nm.as_vector(w)
    return nm.max_norm(energy_projection(p, branch, basis) @ w - w)


def _half_integer(l: float) -> bool:
    return round(2 * l) % 2 == 1


@dataclass(frozen=True)
class PlaneWaveMode:
    p: tuple[float, float, float, float]
    branch: int
    w: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        p = tuple(float(x) for x in four_vector(self.p))
        w = tuple(complex(x) for x in nm.as_vector(self.w))
        if len(w) != 4:
            raise ValueError("mode spinor must have 4 components")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "w", w)
        mass_and_sign(p)
        scale = max(1.0, float(np.linalg.norm(w)))
        if branch_residual(w, p, self.branch) > PURITY_TOL * scale:
            raise ValueError(f"spinor is not in the branch {self.branch:+d} eigenspace of p={p}")

    @cached_property
    def momentum(self) -> np.ndarray:
        return np.array(self.p)

    @cached_property
    def spinor(self) -> np.ndarray:
        return np.array(self.w, dtype=complex)

    @cached_property
    def mass(self) -> float:
        return mass_and_sign(self.p)[0]

    @cached_property
    def energy_sign(self) -> int:
        return mass_and_sign(self.p)[1]

    @property
    def positive_mass(self) -> bool:
        return self.branch == self.energy_sign

    @property
    def frequency(self) -> float:
        """Rate ``branch * phi_p * m_p`` of the tau phase."""
        return self.branch * self.energy_sign * self.mass


@dataclass(frozen=True)
class ParticleState:
    """Finite superposition of plane-wave modes with optional rotation label
    ``l``, frame angle ``chi`` and the axis the label refers to.

    Modes sharing ``(p, branch)`` are merged and the result is sorted, so
    two states built from the same content compare equal.
    """

    modes: tuple[tuple[complex, PlaneWaveMode], ...]
    l: float | None = None
    chi: float | None = None
    axis: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "modes", _merge_modes(self.modes))
        if self.l is not None:
            l = float(self.l)
            if l not in HALF_INTEGER_LABELS + INTEGER_LABELS:
                raise ValueError(f"unsupported rotation label {self.l}")
            object.__setattr__(self, "l", l)
        if self.chi is not None:
            chi = float(self.chi)
            if not 0.0 <= chi < 2 * math.pi:
                raise ValueError("frame angle must lie in [0, 2pi)")
            object.__setattr__(self, "chi", chi)
        if self.axis is not None:
            object.__setattr__(self, "axis", tuple(float(x) for x in rotation_axis(self.axis)))
            if self.l is not None and _half_integer(self.l):
                res = self.rotation_residual()
                if res > EIGEN_TOL:
                    raise ValueError(f"state is not an R(s) eigenstate with l={self.l} (residual {res:.3g})")

    @property
    def frame_phase(self) -> complex:
        if self.l is None or self.chi is None:
            return 1.0 + 0j
        return complex(np.exp(1j * self.l * self.chi))

    def spinor_at(self, p) -> np.ndarray:
        """Coefficient-weighted sum of the spinors of every mode at momentum ``p``."""
        key = tuple(float(x) for x in four_vector(p))
        total = np.zeros(4, dtype=complex)
        for c, mode in self.modes:
            if mode.p == key:
                total += c * mode.spinor
        return total

    def momenta(self) -> list[tuple[float, ...]]:
        return sorted({mode.p for _, mode in self.modes})

    def rotation_residual(self, basis: GammaBasis | None = None) -> float:
        """Max over momenta of ``|R(s) w - l w|`` for the summed spinor."""
        if self.axis is None or self.l is None:
            raise ValueError("state has no axis/label to check")
        r, _, _ = rotation_operator(self.axis, basis)
        return max(
            (nm.max_norm(r @ w - self.l * w) for w in map(self.spinor_at, self.momenta())),
            default=0.0,
        )

    def has_sharp_mass(self, tol: float = 1e-12) -> bool:
        """True when every mode carries the same ``m_p``; never enforced."""
        masses = [mode.mass for _, mode in self.modes]
        return not masses or max(masses) - min(masses) <= tol * max(masses)

    def with_frame(self, l=None, chi=None, axis=None) -> "ParticleState":
        return ParticleState(self.modes, l=l, chi=chi, axis=axis)

    def scaled(self, factor: complex) -> "ParticleState":
        return ParticleState(tuple((factor * c, m) for c, m in self.modes), self.l, self.chi, self.axis)

    @property
    def is_zero(self) -> bool:
        return not self.modes


def _merge_modes(modes) -> tuple[tuple[complex, PlaneWaveMode], ...]:
    merged: dict[tuple, tuple[complex, PlaneWaveMode]] = {}
    for c, mode in modes:
        c = complex(c)
        key = (mode.p, mode.branch)
        if key not in merged:
            merged[key] = (c, mode)
            continue
        c0, m0 = merged[key]
        if m0.w == mode.w:
            merged[key] = (c0 + c, m0)
        else:
            w = c0 * m0.spinor + c * mode.spinor
            merged[key] = (1.0 + 0j, PlaneWaveMode(mode.p, mode.branch, w))
    return tuple(merged[k] for k in sorted(merged) if merged[k][0] != 0)


def single_mode(p, branch: int, w, coefficient: complex = 1.0, **frame) -> ParticleState:
    return ParticleState(((coefficient, PlaneWaveMode(p, branch, w)),), **frame)


def project_spinor(u, p, branch: int, basis: GammaBasis | None = None) -> np.ndarray:
    return energy_projection(p, branch, basis) @ nm.as_vector(u)


def solve_rotation_constraint(w_plus, p, s, l: float = 0.5, basis: GammaBasis | None = None):
    """Least-squares solve for the backward spinor ``w_minus``.

    For ``l=+1/2`` solves ``Q Lambda_- y = -Q w_plus`` (``P`` for
    ``l=-1/2``) and returns ``(w_minus, residual)`` with
    ``w_minus = Lambda_- y``.
    """
    if l not in HALF_INTEGER_LABELS:
        raise ValueError("rotation label must be +1/2 or -1/2")
    w_plus = nm.as_vector(w_plus)
    _, proj_p, proj_q = rotation_operator(s, basis)
    killer = proj_q if l > 0 else proj_p
    lam_minus = energy_projection(p, -1, basis)
    y, residual = nm.solve_linear_least_squares(killer @ lam_minus, -killer @ w_plus)
    return lam_minus @ y, residual


def prepare_rotation_eigenstate(
    w_plus, p, s, l: float = 0.5, basis: GammaBasis | None = None, tol: float = 1e-10
) -> np.ndarray:
    """Return ``w = w_plus + w_minus`` with ``R(s) w = l w`` and
    ``Lambda_- w_minus = w_minus``.

    ``w_minus`` is unique when the 3-momentum is not parallel to the axis.
    In the parallel case a solution exists only for special ``w_plus``
    (e.g. ``Q w_plus = 0``), and the minimum-norm one is returned.
    """
    w_plus = nm.as_vector(w_plus)
    s = rotation_axis(s)
    scale = max(1.0, float(np.linalg.norm(w_plus)))
    if branch_residual(w_plus, p, 1, basis) > PURITY_TOL * scale:
        raise ValueError("w_plus is not in the range of Lambda_+(p)")
    w_minus, residual = solve_rotation_constraint(w_plus, p, s, l, basis)
    if residual > tol * scale:
        if is_parallel(p, s):
            raise DegenerateAxisError(
                "p x s = 0: R(s) commutes with Lambda(p) and there is no rotation "
                f"eigenstate extending this w_plus (residual {residual:.3g}); "
                "choose an axis with p x s != 0"
            )
        raise nm.ConvergenceError(f"rotation constraint unsolved, residual {residual:.3g}")
    return w_plus + w_minus


def rotation_eigenstate(p, w_plus, s, l: float = 0.5, coefficient: complex = 1.0, chi=None) -> ParticleState:
    """Prepared single-momentum state carrying both branches of ``w``."""
    w = prepare_rotation_eigenstate(w_plus, p, s, l)
    w_plus = nm.as_vector(w_plus)
    modes = [(coefficient, PlaneWaveMode(p, 1, w_plus))]
    w_minus = w - w_plus
    if np.any(w_minus != 0):
        modes.append((coefficient, PlaneWaveMode(p, -1, w_minus)))
    return ParticleState(tuple(modes), l=l, chi=chi, axis=tuple(rotation_axis(s)))


def prepare_two_particle_eigenstate(wA_plus, pA, wB_plus, pB, s, l: float = 0.5, s_b=None):
    """Prepare both factors against the same axis; returns ``(wA, wB)``.

    Passing a different second axis ``s_b`` is rejected: a two-particle
    rotation eigenstate uses a single axis for every particle.
    """
    s = rotation_axis(s)
    if s_b is not None and not np.array_equal(rotation_axis(s_b), s):
        raise ValueError("both particles must be prepared against the same axis")
    return (
        prepare_rotation_eigenstate(wA_plus, pA, s, l),
        prepare_rotation_eigenstate(wB_plus, pB, s, l),
    )


def two_particle_rotation_residual(wA, wB, s, l: float = 0.5) -> float:
    r, _, _ = rotation_operator(s)
    psi = np.kron(wA, wB)
    return nm.max_norm(np.kron(r, r) @ psi - l * l * psi)


_AXIS_RAPIDITY_CAP = 10.0


def _candidate_boosts(eps: float):
    yield (1.0, 0.0, 0.0), 0.0
    start = math.asinh(eps)
    rapidities = []
    z = start
    while z <= _AXIS_RAPIDITY_CAP:
        rapidities.append(z)
        z *= 2
    for direction in ((1.0, 0.0, 0.0), (1.0, 1.0, 0.0)):
        for z in rapidities:
            yield direction, z
    # not part of the documented sweep; only reached for near-null lists
    for direction in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (1.0, 1.0, 0.0)):
        for z in rapidities:
            yield direction, -z


def choose_common_axis(momenta, eps: float = 0.1) -> tuple[LorentzBoost, np.ndarray]:
    """Find a boost after which every momentum has transverse norm
    ``|(p'^1, p'^2)| >= eps``; the common axis is z-hat in the new frame."""
    momenta = [four_vector(p) for p in momenta]
    for p in momenta:
        mass_and_sign(p)
    for direction, z in _candidate_boosts(eps):
        omega = boost_matrix(direction, z)
        omega_p = [omega @ p for p in momenta]
        if all(np.hypot(q[1], q[2]) >= eps for q in omega_p):
            return build_boost(direction, z), np.array([0.0, 0.0, 0.0, 1.0])
    raise RuntimeError("no boost in the search sweep separates every momentum from the axis")


@dataclass(frozen=True)
class TwoParticleState:
    """Sum of coefficient-weighted tensor products ``left (x) right``.

    Identical ``(left, right)`` pairs are merged and zero terms dropped, so
    the empty tuple is the zero state.
    """

    terms: tuple[tuple[complex, ParticleState, ParticleState], ...]

    def __post_init__(self):
        merged: dict[tuple[ParticleState, ParticleState], complex] = {}
        for c, left, right in self.terms:
            if left.is_zero or right.is_zero:
                continue
            merged[(left, right)] = merged.get((left, right), 0j) + complex(c)
        object.__setattr__(
            self, "terms", tuple((c, l, r) for (l, r), c in merged.items() if c != 0)
        )

    @classmethod
    def product(cls, left: ParticleState, right: ParticleState, coefficient: complex = 1.0):
        if left.axis is not None and right.axis is not None and left.axis != right.axis:
            raise ValueError("both particles must refer to the same rotation axis")
        return cls(((coefficient, left, right),))

    def as_dict(self) -> dict[tuple[ParticleState, ParticleState], complex]:
        return {(l, r): c for c, l, r in self.terms}

    def swapped(self) -> "TwoParticleState":
        """Exchange the two particles (wavefunctions together with their labels)."""
        return TwoParticleState(tuple((c, r, l) for c, l, r in self.terms))

    def scaled(self, factor: complex) -> "TwoParticleState":
        return TwoParticleState(tuple((factor * c, l, r) for c, l, r in self.terms))

    def swap_residual(self, sign: int = -1) -> float:
        """``max |swap(state) - sign*state|`` over term coefficients; zero
        for an exactly antisymmetric (``sign=-1``) or symmetric state."""
        own, other = self.as_dict(), self.swapped().as_dict()
        return max(
            (abs(other.get(k, 0j) - sign * own.get(k, 0j)) for k in own.keys() | other.keys()),
            default=0.0,
        )

    @property
    def is_zero(self) -> bool:
        return not self.terms
