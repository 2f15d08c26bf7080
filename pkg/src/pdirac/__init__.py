"""Algebraic toolkit for the parametrized Dirac equation: gamma and DKP
algebras, energy-momentum and rotation projections, free plane-wave
propagation, rotation-eigenstate preparation and two-particle exchange."""

from .clifford import build_beta_basis, build_boost, build_gamma_basis, minkowski_dot, slash
from .propagation import evolve_free, evolve_two_particle_free, overlap
from .states import (
    ParticleState,
    PlaneWaveMode,
    TwoParticleState,
    choose_common_axis,
    energy_projection,
    prepare_rotation_eigenstate,
    rotation_operator,
)
from .statistics import amplitude_f, amplitude_g, canonical_antisymmetrize, homotopic_exchange

__version__ = "0.1.0"
