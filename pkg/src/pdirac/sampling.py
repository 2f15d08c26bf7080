"""Seeded random inputs for the verification batteries."""
from __future__ import annotations

import math

import numpy as np

from .states import (
    ParticleState,
    PlaneWaveMode,
    energy_projection,
    rotation_eigenstate,
    transverse_norm,
)


def timelike(rng: np.random.Generator, mass=(0.5, 2.0), spread: float = 2.0, sign: int | None = None) -> np.ndarray:
    m = rng.uniform(*mass)
    pv = rng.uniform(-spread, spread, 3)
    if sign is None:
        sign = 1 if rng.random() < 0.5 else -1
    return np.concatenate([[sign * math.sqrt(m * m + pv @ pv)], pv])


def axis(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return np.concatenate([[0.0], v / np.linalg.norm(v)])


def nonparallel_momentum(rng, s, margin: float = 0.1, sign: int | None = None) -> np.ndarray:
    while True:
        p = timelike(rng, sign=sign)
        if transverse_norm(p, s) >= margin:
            return p


def parallel_momentum(rng, s, sign: int | None = None) -> np.ndarray:
    m = rng.uniform(0.5, 2.0)
    k = rng.uniform(-2.0, 2.0)
    pv = k * np.asarray(s)[1:]
    if sign is None:
        sign = 1 if rng.random() < 0.5 else -1
    return np.concatenate([[sign * math.sqrt(m * m + pv @ pv)], pv])


def complex_vector(rng, dim: int = 4) -> np.ndarray:
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def branch_spinor(rng, p, branch: int) -> np.ndarray:
    """Unit-norm spinor in the range of ``Lambda_branch(p)``."""
    w = energy_projection(p, branch) @ complex_vector(rng)
    return w / np.linalg.norm(w)


def angle(rng) -> float:
    return float(rng.uniform(0.0, 2 * math.pi))


def mixed_state(rng, n_modes: int = 3, **frame) -> ParticleState:
    """Superposition of ``n_modes`` modes with random momenta and branches."""
    modes = []
    for _ in range(n_modes):
        p = timelike(rng)
        branch = 1 if rng.random() < 0.5 else -1
        modes.append((complex(*rng.normal(size=2)), PlaneWaveMode(p, branch, branch_spinor(rng, p, branch))))
    return ParticleState(tuple(modes), **frame)


def eigenstate(rng, s, l: float, p=None, chi=None, positive_energy: bool = True) -> ParticleState:
    """Prepared rotation eigenstate at a random admissible momentum, scaled so
    the full spinor ``w_plus + w_minus`` has unit norm."""
    if p is None:
        p = nonparallel_momentum(rng, s, sign=1 if positive_energy else None)
    state = rotation_eigenstate(p, branch_spinor(rng, p, 1), s, l, chi=chi)
    return state.scaled(1 / np.linalg.norm(state.spinor_at(p)))
