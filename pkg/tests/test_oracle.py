import itertools
import warnings

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from kratzer_spectra import frobenius as fr
from kratzer_spectra import oracle
from kratzer_spectra.model import DomainError, RadialProblem, effective_potential

from conftest import SWEEP


def test_gridspec_validation():
    with pytest.raises(DomainError):
        oracle.GridSpec(0.0, 10)
    with pytest.raises(DomainError):
        oracle.GridSpec(1.0, 2)
    g = oracle.GridSpec(2.0, 3)
    assert g.h == 0.5
    np.testing.assert_array_equal(g.nodes, [0.5, 1.0, 1.5])
    assert g.refined().h == 0.25


def test_kinetic_stencil():
    d, e = oracle.kinetic_matrix(3, 1.0)
    np.testing.assert_array_equal(d, [1, 1, 1])
    np.testing.assert_array_equal(e, [-0.5, -0.5])


def test_discretize_first_diagonal(coulomb):
    d, e = oracle.discretize(coulomb, oracle.GridSpec(2.0, 3))
    assert d[0] == 2.0  # 1/h^2 = 4, V(0.5) = -2
    assert np.all(e == -2.0)


def test_discretize_constant_vector(problem_b1):
    grid = oracle.GridSpec(10.0, 50)
    d, e = oracle.discretize(problem_b1, grid)
    ones = np.ones(grid.M)
    hx = d * ones
    hx[:-1] += e * ones[1:]
    hx[1:] += e * ones[:-1]
    np.testing.assert_allclose(hx[1:-1], effective_potential(problem_b1, grid.nodes[1:-1]),
                               rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("M", [5, 40, 301])
def test_free_particle_spectrum(M):
    h = 0.1
    d, e = oracle.kinetic_matrix(M, h)
    count = min(M, 10)
    got = oracle.tridiagonal_eigenvalues(d, e, count)
    i = np.arange(1, count + 1)
    np.testing.assert_allclose(got, (1 - np.cos(i * np.pi / (M + 1))) / h**2,
                               rtol=0, atol=1e-12 * max(1.0, 2 / h**2))


def test_bisection_matches_lapack():
    rng = np.random.default_rng(3)
    d, e = rng.normal(size=200), rng.normal(size=199)
    np.testing.assert_allclose(oracle.tridiagonal_eigenvalues(d, e),
                               eigh_tridiagonal(d, e, eigvals_only=True), atol=1e-12)


def test_sturm_count_consistency(problem_b1):
    grid = oracle.GridSpec(40.0, 2000)
    d, e = oracle.discretize(problem_b1, grid)
    values = eigh_tridiagonal(d, e, eigvals_only=True)
    all_bisect = oracle.tridiagonal_eigenvalues(d, e)
    rng = np.random.default_rng(7)
    for shift in rng.uniform(values[0] - 1, values[-1] + 1, 100):
        count = oracle.sturm_count(d, e, shift)
        assert count == np.searchsorted(all_bisect, shift)
        assert count == np.searchsorted(values, shift)


def test_inverse_iteration_eigenvector(problem_b1):
    res = oracle.solve(problem_b1, 3, oracle.GridSpec(40.0, 4000))
    d, e = oracle.discretize(problem_b1, res.grid)
    assert all(res.converged)
    for k in range(3):
        v = res.eigenvectors[:, k]
        hv = d * v
        hv[:-1] += e * v[1:]
        hv[1:] += e * v[:-1]
        assert np.linalg.norm(hv - res.eigenvalues[k] * v) < 1e-8
        assert abs(np.linalg.norm(v) - 1) < 1e-12


def test_lowest_eigenpairs_rejects_bad_count():
    d, e = oracle.kinetic_matrix(5, 1.0)
    with pytest.raises(DomainError):
        oracle.lowest_eigenpairs(d, e, 6)


def test_coulomb_raw_grid(coulomb):
    res = oracle.solve(coulomb, 1, oracle.GridSpec(60.0, 6000), vectors=False)
    assert abs(res.eigenvalues[0] + 0.5) < 1e-4


def test_b1_raw_grid(problem_b1):
    res = oracle.solve(problem_b1, 2, oracle.GridSpec(60.0, 6000), vectors=False)
    np.testing.assert_allclose(res.eigenvalues, [-0.125, -1 / 18], atol=1e-4)


def test_unbound_flag(problem_b1):
    res = oracle.solve(problem_b1, 12, oracle.GridSpec(20.0, 400), vectors=False)
    assert res.unbound == [bool(v >= 0) for v in res.eigenvalues]
    assert res.unbound[-1]


@pytest.mark.parametrize("A, B, l, expected", [
    (1, 0, 0, -0.5),
    (1, 1, 0, -0.125),
    (1, 1, 1, -1 / (2 * (np.sqrt(4.25) + 0.5) ** 2)),
])
def test_extrapolate_examples(A, B, l, expected):
    ex = oracle.extrapolate(RadialProblem.from_params(A, B, l), 0)
    assert abs(ex.energy - expected) < 1e-6
    assert ex.error_estimate < 1e-4


def test_extrapolate_budget():
    with pytest.raises(DomainError):
        oracle.extrapolate(RadialProblem.from_params(1, 1, 0), 0, M=150_000)


def test_extrapolate_accuracy_warning(problem_b1):
    with pytest.warns(oracle.AccuracyWarning):
        oracle.extrapolate(problem_b1, 0, M=60)


def test_count_nodes_rules():
    assert oracle.count_nodes([1, 2, 3]) == 0
    assert oracle.count_nodes([1, -1, 1]) == 2
    assert oracle.count_nodes([1, 1e-20, -1e-20, 1]) == 0


def test_node_counts_first_five(problem_b1):
    res = oracle.solve(problem_b1, 5, oracle.default_grid(problem_b1, 4))
    assert res.node_counts == [0, 1, 2, 3, 4]


@pytest.mark.parametrize("A, B, l, n", [(1, 1, 0, 0), (2, 0.5, 1, 1), (0.5, 0, 0, 1)])
def test_grid_convergence_factor_four(A, B, l, n):
    p = RadialProblem.from_params(A, B, l)
    grid = oracle.GridSpec(30 / fr.decay_rate(p, n), 4000)
    ex = oracle.extrapolate(p, n, grid)
    exact = fr.closed_form_energy(p, n)
    # the B = 0.5, l = 0 case has s = 1.618, where the h^(s+1) boundary term pulls the ratio toward 3.9
    ratio = (ex.coarse - exact) / (ex.fine - exact)
    assert 4 * 0.85 < ratio < 4 * 1.15


@pytest.mark.parametrize("A, B, l, n", [(1, 1, 0, 0), (1, 0.5, 1, 1), (2, 0, 0, 0)])
def test_boundary_insensitivity(A, B, l, n):
    p = RadialProblem.from_params(A, B, l)
    R = 30 / fr.decay_rate(p, n)
    g1 = oracle.GridSpec(R, 2999)
    g2 = oracle.GridSpec(1.5 * R, int(round(1.5 * (g1.M + 1))) - 1)
    assert g2.h == pytest.approx(g1.h, rel=1e-12)
    e1 = oracle.solve(p, n + 1, g1, vectors=False).eigenvalues
    e2 = oracle.solve(p, n + 1, g2, vectors=False).eigenvalues
    bound = e1 < -1e-3
    assert np.all(np.abs(e1 - e2)[bound] < 1e-8)


def test_oracle_vs_closed_form_sweep():
    with warnings.catch_warnings():
        warnings.simplefilter("error", oracle.AccuracyWarning)
        for A, B, l, n in SWEEP:
            p = RadialProblem.from_params(A, B, l)
            assert abs(oracle.extrapolate(p, n).energy - fr.closed_form_energy(p, n)) < 1e-6


def test_default_box():
    p = RadialProblem.from_params(1, 1, 0)
    assert oracle.default_box(p, 0) == 60.0
    assert oracle.default_box(RadialProblem.from_params(100, 0, 0), 0) == 20.0
