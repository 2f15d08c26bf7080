"""Free tau-evolution of plane-wave states, currents and overlaps.

The free influence function acts on a plane-wave mode either as a pure
phase or by removing it: for increasing tau only positive-mass modes
(``branch == phi_p``) survive, for decreasing tau only negative-mass ones.
The ``1/i`` prefactors of the integral kernel are absorbed so that a
surviving mode is multiplied by ``exp(i*branch*phi_p*m_p*dtau)``.

Plane waves are not normalizable, so inner products use a Kronecker
pairing over ``(p, branch)`` in place of the space-time integral.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford import GammaBasis, default_basis, four_vector, minkowski_dot
from .states import ParticleState, PlaneWaveMode, TwoParticleState

DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class EvolutionReport:
    kept_modes: int
    dropped_modes: int
    dtau: float


@dataclass(frozen=True)
class CurrentSample:
    density: float
    j: np.ndarray


def _rephase(state: ParticleState, modes) -> ParticleState:
    return ParticleState(tuple(modes), l=state.l, chi=state.chi)


def evolve_free(state: ParticleState, dtau: float) -> tuple[ParticleState, EvolutionReport]:
    if dtau == 0:
        return state, EvolutionReport(len(state.modes), 0, 0.0)
    want_positive = dtau > 0
    kept = [
        (c * np.exp(1j * mode.frequency * dtau), mode)
        for c, mode in state.modes
        if mode.positive_mass == want_positive
    ]
    report = EvolutionReport(len(kept), len(state.modes) - len(kept), float(dtau))
    return _rephase(state, kept), report


def advance(state: ParticleState, dtau: float) -> ParticleState:
    """Shift the parameter of the full free solution by ``dtau`` with no
    branch selection (every mode keeps its own phase rate)."""
    if dtau == 0:
        return state
    return _rephase(state, ((c * np.exp(1j * mode.frequency * dtau), mode) for c, mode in state.modes))


def evolve_two_particle_free(state: TwoParticleState, dtau: float) -> TwoParticleState:
    """Separable two-particle evolution: each factor evolves on its own."""
    if dtau == 0:
        return state
    return TwoParticleState(
        tuple((c, evolve_free(l, dtau)[0], evolve_free(r, dtau)[0]) for c, l, r in state.terms)
    )


def advance_two_particle(state: TwoParticleState, dtau: float) -> TwoParticleState:
    if dtau == 0:
        return state
    return TwoParticleState(tuple((c, advance(l, dtau), advance(r, dtau)) for c, l, r in state.terms))


def dt_dtau(mode: PlaneWaveMode) -> float:
    return mode.branch * mode.mass / abs(mode.p[0])


def wavefunction_value(state: ParticleState, x, tau: float) -> np.ndarray:
    x = four_vector(x)
    psi = np.zeros(4, dtype=complex)
    for c, mode in state.modes:
        phase = minkowski_dot(mode.p, x) + mode.frequency * tau
        psi += c * mode.spinor * np.exp(1j * phase)
    return psi * state.frame_phase


def two_particle_value(state: TwoParticleState, x, y, tau: float) -> np.ndarray:
    """16-component value of ``sum c * left(x) (x) right(y)``."""
    total = np.zeros(16, dtype=complex)
    for c, left, right in state.terms:
        total += c * np.kron(wavefunction_value(left, x, tau), wavefunction_value(right, y, tau))
    return total


# index permutation exchanging the two tensor factors of a 16-vector
SWAP_PERMUTATION = np.arange(16).reshape(4, 4).T.ravel()


def pointwise_exchange_residual(state: TwoParticleState, x, y, tau: float, sign: int = -1) -> float:
    """``max |Psi(x, y) - sign * swap(Psi(y, x))|``."""
    direct = two_particle_value(state, x, y, tau)
    exchanged = two_particle_value(state, y, x, tau)[SWAP_PERMUTATION]
    return float(np.abs(direct - sign * exchanged).max())


def current_sample(state: ParticleState, x, tau: float, basis: GammaBasis | None = None) -> CurrentSample:
    basis = basis or default_basis()
    psi = wavefunction_value(state, x, tau)
    bar = psi.conj() @ basis[0]
    density = bar @ psi
    j = np.array([(bar @ basis[mu] @ psi).real for mu in range(4)])
    return CurrentSample(float(density.real), j)


def continuity_residual(state: ParticleState, x, tau: float, h: float = DEFAULT_STEP) -> float:
    """Central-difference estimate of ``d(psibar psi)/dtau + d j^mu/dx^mu``."""
    if h <= 0:
        raise ValueError("step must be positive")
    x = four_vector(x)
    res = (
        current_sample(state, x, tau + h).density - current_sample(state, x, tau - h).density
    ) / (2 * h)
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = h
        res += (current_sample(state, x + e, tau).j[mu] - current_sample(state, x - e, tau).j[mu]) / (2 * h)
    return float(res)


def bar_pair(w1, w2, basis: GammaBasis | None = None) -> complex:
    """``w1^dagger gamma^0 w2``."""
    basis = basis or default_basis()
    return complex(np.conj(w1) @ basis[0] @ w2)


def overlap(a: ParticleState, b: ParticleState) -> complex:
    right = {(m.p, m.branch): (c, m) for c, m in b.modes}
    total = 0j
    for ca, ma in a.modes:
        hit = right.get((ma.p, ma.branch))
        if hit is not None:
            cb, mb = hit
            total += np.conj(ca) * cb * bar_pair(ma.spinor, mb.spinor)
    return total * np.conj(a.frame_phase) * b.frame_phase
