"""Exchange of two particles carrying rotation labels and frame angles.

A single-particle wavefunction referred to a common frame picks up
``exp(i l chi)``. Exchanging two particles homotopically (wavefunctions and
frame angles together) multiplies the swapped summand by
``exp(2 pi i l) * kappa`` with ``kappa = exp[i (l - n)(lambda - chi)]``:
``-kappa`` for half-integer labels, ``+kappa`` for integer ones.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .propagation import advance_two_particle, overlap
from .states import ParticleState, TwoParticleState

HALF_INTEGER = "half-integer"
INTEGER = "integer"


class DegenerateAnglesError(ValueError):
    """Coincident frame angles; the exchange path is undefined."""


@dataclass(frozen=True)
class ExchangeOutcome:
    state: TwoParticleState
    kappa: complex
    spin_class: str


def spin_class(label: float) -> str:
    twice = round(2 * label)
    if abs(2 * label - twice) > 1e-12:
        raise ValueError(f"label {label} is not a multiple of 1/2")
    return HALF_INTEGER if twice % 2 else INTEGER


def kappa(l: float, n: float, chi: float, lam: float) -> complex:
    return cmath.exp(1j * (l - n) * (lam - chi))


def exchange_factor(l: float, n: float, chi: float, lam: float) -> complex:
    """Total multiplier on the swapped summand after homotopic exchange."""
    for angle in (chi, lam):
        if not 0.0 <= angle < 2 * math.pi:
            raise ValueError("frame angles must lie in [0, 2pi)")
    if chi == lam:
        raise DegenerateAnglesError("chi == lambda: exchange of coincident frames is undefined")
    cls = spin_class(l)
    if spin_class(n) != cls:
        raise ValueError("both particles must be of the same spin class")
    # exp(2 pi i l) is exactly -1 or +1; avoid the rounding of cmath.exp(i pi)
    sign = -1 if cls == HALF_INTEGER else 1
    return sign * kappa(l, n, chi, lam)


def _single_term(state: TwoParticleState) -> tuple[complex, ParticleState, ParticleState]:
    if len(state.terms) != 1:
        raise ValueError(f"expected a single product term, got {len(state.terms)}")
    return state.terms[0]


def _labels(psi: ParticleState, phi: ParticleState):
    if None in (psi.l, psi.chi, phi.l, phi.chi):
        raise ValueError("both factors need a rotation label and a frame angle")
    return psi.l, phi.l, psi.chi, phi.chi


def exchange_sum(state: TwoParticleState) -> TwoParticleState:
    """``psi(l,chi) (x) phi(n,lam) + phi(n,chi) (x) psi(l,lam)``: the
    wavefunctions trade places, the frame angles stay where they were."""
    c, psi, phi = _single_term(state)
    l, n, chi, lam = _labels(psi, phi)
    swapped = (c, phi.with_frame(n, chi, phi.axis), psi.with_frame(l, lam, psi.axis))
    return TwoParticleState(((c, psi, phi), swapped))


def homotopic_exchange(state: TwoParticleState) -> ExchangeOutcome:
    """``psi(l,chi) (x) phi(n,lam) + F phi(n,lam) (x) psi(l,chi)`` with
    ``F = exchange_factor(l, n, chi, lam)``."""
    c, psi, phi = _single_term(state)
    l, n, chi, lam = _labels(psi, phi)
    factor = exchange_factor(l, n, chi, lam)
    out = TwoParticleState(((c, psi, phi), (factor * c, phi, psi)))
    return ExchangeOutcome(out, kappa(l, n, chi, lam), spin_class(l))


def canonical_antisymmetrize(state: TwoParticleState) -> TwoParticleState:
    """``psi (x) phi - phi (x) psi``: the homotopic form with kappa set to one."""
    c, psi, phi = _single_term(state)
    return TwoParticleState(((c, psi, phi), (-c, phi, psi)))


def canonical_symmetrize(state: TwoParticleState) -> TwoParticleState:
    """Integer-spin counterpart: ``psi (x) phi + phi (x) psi``."""
    c, psi, phi = _single_term(state)
    return TwoParticleState(((c, psi, phi), (c, phi, psi)))


def pairing(a: TwoParticleState, b: TwoParticleState) -> complex:
    """Factor-wise overlap summed over both term lists, conjugate-linear in ``a``."""
    total = 0j
    for ca, la, ra in a.terms:
        for cb, lb, rb in b.terms:
            total += ca.conjugate() * cb * overlap(la, lb) * overlap(ra, rb)
    return total


def amplitude_f(psi_s: TwoParticleState, xi: TwoParticleState, tau: float = 0.0) -> complex:
    """Transition amplitude with only the 'to' state exchanged.

    ``xi`` must be a simple product. Both states are carried to parameter
    ``tau`` by the free solution first; the phases cancel mode by mode.
    """
    _single_term(xi)
    return pairing(advance_two_particle(psi_s, tau), advance_two_particle(xi, tau))


def amplitude_g(psi_s: TwoParticleState, xi_s: TwoParticleState) -> complex:
    """Standard amplitude: both states exchanged, each normalized by 1/sqrt(2)."""
    return pairing(psi_s, xi_s) / 2
