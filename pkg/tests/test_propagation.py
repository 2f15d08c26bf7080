import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from pdirac import clifford as cl
from pdirac import propagation as pr
from pdirac import sampling as sm
from pdirac import states as st

G = cl.default_basis()
Z = np.array([0.0, 0.0, 0.0, 1.0])


def forward_mode(p, coefficient=1.0, **frame):
    w = st.energy_projection(p, 1) @ np.array([1, 0, 0, 0], dtype=complex)
    return st.single_mode(p, 1, w, coefficient, **frame)


def test_single_mode_phase_example():
    state = forward_mode((2, 0, 0, 1), 0.7 - 0.2j)
    out, report = pr.evolve_free(state, 1.0)
    assert out.modes[0][0] == pytest.approx((0.7 - 0.2j) * cmath.exp(1j * math.sqrt(3)), abs=1e-15)
    assert (report.kept_modes, report.dropped_modes, report.dtau) == (1, 0, 1.0)


def test_zero_step_is_identity():
    state = sm.mixed_state(np.random.default_rng(31), 4)
    out, report = pr.evolve_free(state, 0.0)
    assert out is state and report.kept_modes == 4 and report.dropped_modes == 0


def test_prepared_state_keeps_forward_part():
    p = np.array([2.0, 1.0, 0.0, 0.0])
    state = st.rotation_eigenstate(p, st.energy_projection(p, 1)[:, 0], Z)
    assert {m.branch for _, m in state.modes} == {1, -1}
    out, report = pr.evolve_free(state, 0.8)
    assert [m.branch for _, m in out.modes] == [1]
    assert out.modes[0][0] == pytest.approx(cmath.exp(1j * math.sqrt(3) * 0.8), abs=1e-15)
    assert report.dropped_modes == 1
    assert out.axis is None and out.l == 0.5


def test_negative_energy_modes():
    p = (-2.0, 0.0, 0.0, 1.0)
    fwd = st.PlaneWaveMode(p, -1, st.energy_projection(p, -1)[:, 0])  # positive mass
    bwd = st.PlaneWaveMode(p, 1, st.energy_projection(p, 1)[:, 0])
    state = st.ParticleState(((1.0, fwd), (1.0, bwd)))
    kept, _ = pr.evolve_free(state, 0.5)
    assert [m.branch for _, m in kept.modes] == [-1]
    assert kept.modes[0][0] == pytest.approx(cmath.exp(1j * math.sqrt(3) * 0.5), abs=1e-15)
    kept, _ = pr.evolve_free(state, -0.5)
    assert [m.branch for _, m in kept.modes] == [1]
    assert kept.modes[0][0] == pytest.approx(cmath.exp(1j * math.sqrt(3) * 0.5), abs=1e-15)


def test_two_particle_phases_multiply():
    a, b = forward_mode((2, 0, 0, 1)), forward_mode((3, 1, 1, 0))
    out = pr.evolve_two_particle_free(st.TwoParticleState.product(a, b), 0.4)
    left, right = out.terms[0][1], out.terms[0][2]
    total = out.terms[0][0] * left.modes[0][0] * right.modes[0][0]
    assert total == pytest.approx(cmath.exp(1j * (math.sqrt(3) + math.sqrt(7)) * 0.4), abs=1e-14)
    same = st.TwoParticleState.product(a, b)
    assert pr.evolve_two_particle_free(same, 0.0) is same


@pytest.mark.parametrize(
    "p, branch, expected",
    [((1, 0, 0, 0), 1, 1.0), ((2, 0, 0, 1), 1, math.sqrt(3) / 2), ((-2, 0, 0, 1), -1, -math.sqrt(3) / 2)],
)
def test_dt_dtau_examples(p, branch, expected):
    mode = st.PlaneWaveMode(p, branch, st.energy_projection(p, branch)[:, 0])
    assert pr.dt_dtau(mode) == pytest.approx(expected, abs=1e-15)


def test_wavefunction_examples():
    w = st.energy_projection((2, 0, 0, 1), 1)[:, 0]
    state = st.single_mode((2, 0, 0, 1), 1, w, 0.3 + 0.1j)
    assert np.allclose(pr.wavefunction_value(state, np.zeros(4), 0.0), (0.3 + 0.1j) * w, atol=1e-15)
    x = (0.1, 0.2, 0.3, 0.4)
    framed = pr.wavefunction_value(state.with_frame(0.5, 1.2), x, 0.7)
    assert np.allclose(framed, cmath.exp(0.6j) * pr.wavefunction_value(state, x, 0.7), atol=1e-15)


def test_opposite_momenta_interfere_constructively():
    # no nonzero spinor is branch pure at both p and its mirror, so each mode
    # carries its own projection of e_1; at x = 0 the values simply add
    p, q = (2.0, 0.0, 0.0, 1.0), (2.0, 0.0, 0.0, -1.0)
    wp, wq = st.energy_projection(p, 1)[:, 0], st.energy_projection(q, 1)[:, 0]
    state = st.ParticleState(((1, st.PlaneWaveMode(p, 1, wp)), (1, st.PlaneWaveMode(q, 1, wq))))
    assert np.allclose(pr.wavefunction_value(state, np.zeros(4), 0.0), wp + wq, atol=1e-15)
    # the shared upper component is doubled
    assert pr.wavefunction_value(state, np.zeros(4), 0.0)[0] == pytest.approx(2 * wp[0])


def test_density_examples():
    rest = st.single_mode((1, 0, 0, 0), 1, (1, 0, 0, 0))
    assert pr.current_sample(rest, np.zeros(4), 0.0).density == pytest.approx(1.0)
    lower = st.single_mode((1, 0, 0, 0), -1, (0, 0, 1, 0))
    assert pr.current_sample(lower, np.zeros(4), 0.0).density == pytest.approx(-1.0)


def expanded_current(state, x, tau):
    """Term-by-term expansion of psibar gamma^mu psi over mode pairs."""
    terms = [(c, m) for c, m in state.modes]
    out = np.zeros(5, dtype=complex)
    mats = [np.eye(4)] + [G[mu] for mu in range(4)]
    for ca, ma in terms:
        for cb, mb in terms:
            ta = cl.minkowski_dot(ma.p, x) + ma.frequency * tau
            tb = cl.minkowski_dot(mb.p, x) + mb.frequency * tau
            weight = np.conj(ca) * cb * cmath.exp(1j * (tb - ta))
            for k, mat in enumerate(mats):
                out[k] += weight * (ma.spinor.conj() @ G[0] @ mat @ mb.spinor)
    return out


def test_current_matches_expansion_oracle():
    rng = np.random.default_rng(32)
    for _ in range(20):
        state = sm.mixed_state(rng, 2)
        x, tau = rng.normal(size=4), rng.normal()
        sample = pr.current_sample(state, x, tau)
        oracle = expanded_current(state, x, tau)
        assert abs(sample.density - oracle[0]) < 1e-12
        assert np.abs(sample.j - oracle[1:]).max() < 1e-12
        assert abs(oracle[0].imag) < 1e-12


def test_continuity_single_mode_is_rounding_only():
    state = forward_mode((2, 0.3, -0.4, 1))
    assert abs(pr.continuity_residual(state, (0.1, 0.2, 0.3, 0.4), 0.5, 1e-3)) < 1e-9


def test_continuity_zero_state_exact():
    assert pr.continuity_residual(st.ParticleState(()), np.zeros(4), 0.0) == 0.0


def test_continuity_rejects_bad_step():
    with pytest.raises(ValueError):
        pr.continuity_residual(forward_mode((1, 0, 0, 0)), np.zeros(4), 0.0, 0.0)


def test_continuity_two_masses_second_order():
    p, q = (2.0, 0.3, 0.0, 1.0), (3.0, -1.0, 0.5, 0.2)
    state = st.ParticleState(
        ((1.0, st.PlaneWaveMode(p, 1, st.energy_projection(p, 1)[:, 0])),
         (0.5j, st.PlaneWaveMode(q, -1, st.energy_projection(q, -1)[:, 2])))
    )
    r1 = pr.continuity_residual(state, (0.1, 0.2, -0.3, 0.4), 0.2, 1e-3)
    r2 = pr.continuity_residual(state, (0.1, 0.2, -0.3, 0.4), 0.2, 5e-4)
    assert 3.5 <= abs(r1 / r2) <= 4.5


def test_overlap_examples():
    a = forward_mode((2, 0, 0, 1))
    b = forward_mode((3, 1, 1, 0))
    assert pr.overlap(a, b) == 0
    w = a.modes[0][1].spinor / np.linalg.norm(a.modes[0][1].spinor)
    unit = st.single_mode((2, 0, 0, 1), 1, w)
    self_pair = pr.overlap(unit, unit)
    assert self_pair.imag == 0 and self_pair.real == pytest.approx(pr.bar_pair(w, w).real)


def test_opposite_labels_orthogonal():
    rng = np.random.default_rng(33)
    for _ in range(20):
        s = sm.axis(rng)
        p = sm.nonparallel_momentum(rng, s)
        up, dn = sm.eigenstate(rng, s, 0.5, p=p), sm.eigenstate(rng, s, -0.5, p=p)
        assert abs(pr.overlap(up, dn)) < 1e-12


def test_overlap_frame_phase():
    a = forward_mode((2, 0, 0, 1), l=0.5, chi=0.4)
    b = forward_mode((2, 0, 0, 1), l=-0.5, chi=1.0)
    plain = pr.overlap(forward_mode((2, 0, 0, 1)), forward_mode((2, 0, 0, 1)))
    assert pr.overlap(a, b) == pytest.approx(plain * cmath.exp(1j * (-0.5 * 1.0 - 0.5 * 0.4)), abs=1e-15)


seeds = hs.integers(0, 2**32 - 1)


@settings(max_examples=50, deadline=None)
@given(seeds, hs.floats(0.01, 3), hs.floats(0.01, 3))
def test_semigroup(seed, d1, d2):
    state = sm.mixed_state(np.random.default_rng(seed), 4)
    twice = pr.evolve_free(pr.evolve_free(state, d1)[0], d2)[0]
    once = pr.evolve_free(state, d1 + d2)[0]
    assert [m for _, m in twice.modes] == [m for _, m in once.modes]
    assert max((abs(a[0] - b[0]) for a, b in zip(twice.modes, once.modes)), default=0.0) < 1e-12


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_overlap_conjugate_symmetric(seed):
    rng = np.random.default_rng(seed)
    a = sm.mixed_state(rng, 3, l=0.5, chi=sm.angle(rng))
    b = st.ParticleState(a.modes[:2] + sm.mixed_state(rng, 2).modes, l=-0.5, chi=sm.angle(rng))
    assert abs(pr.overlap(a, b) - np.conj(pr.overlap(b, a))) < 1e-12


@settings(max_examples=50, deadline=None)
@given(seeds, hs.floats(0.01, 5))
def test_overlap_invariant_under_joint_evolution(seed, dtau):
    rng = np.random.default_rng(seed)
    a = sm.mixed_state(rng, 4)
    a = st.ParticleState(tuple((c, m) for c, m in a.modes if m.positive_mass))
    b = st.ParticleState(a.modes[:2] + tuple((c * 1j, m) for c, m in a.modes[2:]))
    evolved = pr.overlap(pr.evolve_free(a, dtau)[0], pr.evolve_free(b, dtau)[0])
    assert abs(evolved - pr.overlap(a, b)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_dt_dtau_sign_is_branch(seed):
    rng = np.random.default_rng(seed)
    for _, mode in sm.mixed_state(rng, 4).modes:
        assert np.sign(pr.dt_dtau(mode)) == mode.branch


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_evolution_report_counts(seed):
    state = sm.mixed_state(np.random.default_rng(seed), 5)
    for dtau in (1.0, -1.0):
        out, report = pr.evolve_free(state, dtau)
        assert report.kept_modes + report.dropped_modes == len(state.modes)
        assert report.kept_modes == len(out.modes)
