import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

import oracles as o
from pdirac import clifford as cl
from pdirac import numerics as nm

G = cl.build_gamma_basis()
SIGMA = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]


def test_dirac_pauli_layout():
    i2 = np.eye(2)
    assert np.array_equal(G[0], np.kron(np.diag([1, -1]), i2))
    for j, s in enumerate(SIGMA, start=1):
        assert np.array_equal(G[j], np.kron(np.array([[0, 1], [-1, 0]]), s))
    assert np.array_equal(G.gamma5, np.kron(np.array([[0, 1], [1, 0]]), i2))


def test_gamma5_is_i_times_product():
    prod = o.triple_loop_matmul(o.triple_loop_matmul(G[0], G[1]), o.triple_loop_matmul(G[2], G[3]))
    assert nm.max_norm(1j * prod - G.gamma5) < 1e-15


def test_gamma_examples():
    assert nm.max_norm(nm.anticommutator(G[0], G[1])) == 0.0
    assert np.array_equal(G[0] @ G[0], np.eye(4))
    assert np.array_equal(G[2] @ G[2], -np.eye(4))


def test_gamma_invariants():
    assert cl.fermion_algebra_residual(G) < 1e-13
    assert cl.gamma5_residual(G) < 1e-13
    assert cl.hermiticity_residual(G) < 1e-13


def test_gamma_matrices_are_immutable():
    with pytest.raises(ValueError):
        G[0][0, 0] = 5


@pytest.mark.parametrize("dim", [5, 10])
def test_meson_algebra(dim):
    b = cl.build_beta_basis(dim)
    assert b.dim == dim and b[0].shape == (dim, dim)
    assert cl.meson_algebra_residual(b) < 1e-13


@pytest.mark.parametrize("dim", [4, 6, 16])
def test_unsupported_beta_dimension(dim):
    with pytest.raises(ValueError):
        cl.build_beta_basis(dim)


# characteristic polynomials of beta.p at p=(2,0,0,1) from the Faddeev-LeVerrier oracle
BETA_P_CHARPOLY = {
    5: [1, 0, -3, 0, 0, 0],
    10: [1, 0, -9, 0, 27, 0, -27, 0, 0, 0, 0],
}
BETA_P_SPECTRUM = {
    5: [-math.sqrt(3), 0, 0, 0, math.sqrt(3)],
    10: [-math.sqrt(3)] * 3 + [0] * 4 + [math.sqrt(3)] * 3,
}


@pytest.mark.parametrize("dim", [5, 10])
def test_beta_p_spectrum(dim):
    m = cl.beta_dot((2, 0, 0, 1), cl.build_beta_basis(dim))
    assert nm.max_norm(o.charpoly(m) - np.array(BETA_P_CHARPOLY[dim])) < 1e-12
    assert nm.max_norm(nm.eigenvalues(m) - np.array(BETA_P_SPECTRUM[dim])) < 1e-7


def test_slash_examples():
    assert np.array_equal(cl.slash((0, 0, 0, 1)), G[3])
    assert np.array_equal(cl.slash((1, 0, 0, 0)), -G[0])
    p = np.array([2.0, 0.3, -0.4, 1.0])
    ps = cl.slash(p)
    assert nm.max_norm(ps @ ps + cl.minkowski_dot(p, p) * np.eye(4)) < 1e-13


def test_minkowski_examples():
    assert cl.minkowski_dot((1, 0, 0, 0), (1, 0, 0, 0)) == -1
    assert cl.minkowski_dot((0, 0, 0, 1), (0, 0, 0, 1)) == 1
    assert cl.minkowski_dot((2, 0, 0, 1), (2, 0, 0, 1)) == -3


@pytest.mark.parametrize("bad", [(1, 2, 3), (0, 0, np.nan, 0), (1, 1, 1, np.inf)])
def test_four_vector_validation(bad):
    with pytest.raises(ValueError):
        cl.four_vector(bad)


def test_boost_identity_at_zero_rapidity():
    b = cl.build_boost((0.3, -1.0, 2.0), 0.0)
    assert np.array_equal(b.omega, np.eye(4))
    assert nm.max_norm(b.spinor_rep - np.eye(4)) == 0.0


def test_boost_zero_direction_rejected():
    with pytest.raises(ValueError):
        cl.build_boost((0, 0, 0), 1.0)


def closed_form_spinor_boost(direction, rapidity):
    n = np.asarray(direction, float) / np.linalg.norm(direction)
    alpha = sum(n[j] * o.triple_loop_matmul(G[0], G[j + 1]) for j in range(3))
    return math.cosh(rapidity / 2) * np.eye(4) + math.sinh(rapidity / 2) * alpha


def test_boost_random_cases():
    rng = np.random.default_rng(11)
    for _ in range(50):
        direction, z = rng.normal(size=3), rng.uniform(-2, 2)
        b = cl.build_boost(direction, z)
        assert cl.metric_residual(b) < 1e-12
        assert cl.covariance_residual(b) < 1e-11
        assert nm.max_norm(b.spinor_rep - closed_form_spinor_boost(direction, z)) < 1e-13


def test_boost_moves_rest_momentum():
    b = cl.build_boost((1, 0, 0), math.asinh(0.75))
    assert np.allclose(b.apply((1, 0, 0, 0)), (1.25, 0.75, 0, 0))


def test_expm_series_nonconvergence():
    with pytest.raises(nm.ConvergenceError):
        cl.expm_series(np.eye(2) * 1e3)


vectors = hs.lists(hs.floats(-10, 10), min_size=4, max_size=4).map(np.array)
scalars = hs.floats(-5, 5)


@settings(max_examples=100, deadline=None)
@given(vectors, vectors, scalars, scalars)
def test_slash_linear(a, b, x, y):
    assert nm.max_norm(cl.slash(x * a + y * b) - x * cl.slash(a) - y * cl.slash(b)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(hs.lists(hs.floats(-1, 1), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3),
       hs.floats(-2, 2), hs.floats(-2, 2))
def test_boost_rapidities_add(direction, z1, z2):
    joined = cl.boost_matrix(direction, z1) @ cl.boost_matrix(direction, z2)
    assert nm.max_norm(joined - cl.boost_matrix(direction, z1 + z2)) < 1e-11


def test_all_relations_by_loops():
    # the same 16 and 64 relations with products formed entry by entry
    for mu, nu in itertools.product(range(4), repeat=2):
        anti = o.triple_loop_matmul(G[mu], G[nu]) + o.triple_loop_matmul(G[nu], G[mu])
        assert nm.max_norm(anti + 2 * cl.METRIC[mu, nu] * np.eye(4)) == 0.0
