import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import poisson

from ampcat.errors import InvalidSpecError, TruncationError, ZeroProbabilityError
from ampcat.fock import (FockDensity, coherent_vector, fock_from_p_mixture, fock_macroscopicity,
                         fock_observables, fock_pr_p, fock_pr_x, fock_project_parity, fock_purity,
                         fock_wigner, hermite_functions, parity_probabilities)
from ampcat.measures import wigner
from ampcat.phasespace import Grid1D, Grid2D
from ampcat.projection import pr_p, project
from ampcat.states import AmplifiedCoherentState, CoherentState, SmearingSpec, ThermalCoherentState

BASELINE = AmplifiedCoherentState(2.0, SmearingSpec(1.5, (0.3, 0.7)))


def test_coherent_diagonal_is_poisson():
    rho = fock_from_p_mixture(CoherentState(1.0), 30)
    np.testing.assert_allclose(np.diag(rho.matrix).real, poisson.pmf(np.arange(30), 1.0), atol=1e-14)


def test_thermal_diagonal_is_geometric():
    rho = fock_from_p_mixture(ThermalCoherentState(3.0), 60)
    d = np.diag(rho.matrix).real
    np.testing.assert_allclose(d[1:20] / d[:19], 0.5, rtol=1e-8)
    assert np.max(np.abs(rho.matrix - np.diag(d))) < 1e-12


def test_ideal_amplifier_equals_thermal_matrix():
    g = 1.5
    amp = fock_from_p_mixture(AmplifiedCoherentState(0, SmearingSpec(g)), 60)
    th = fock_from_p_mixture(ThermalCoherentState(2 * g * g - 1), 60)
    assert np.max(np.abs(amp.matrix - th.matrix)) < 1e-8


def test_density_invariants():
    rho = fock_from_p_mixture(BASELINE, 80)
    m = rho.matrix
    assert np.max(np.abs(m - m.conj().T)) < 1e-12
    assert rho.trace == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.eigvalsh(m).min() > -1e-10
    with pytest.raises(ValueError):
        FockDensity(np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_truncation_and_domain_errors():
    with pytest.raises(TruncationError):
        fock_from_p_mixture(BASELINE, 10)
    with pytest.raises(InvalidSpecError):
        fock_from_p_mixture(AmplifiedCoherentState(10, SmearingSpec(10.0)), 200)
    with pytest.raises(ValueError):
        fock_from_p_mixture(BASELINE, 500)


def test_parity_projection():
    vac = fock_from_p_mixture(CoherentState(0), 10)
    _, p = fock_project_parity(vac, "+")
    assert p == pytest.approx(1.0)
    with pytest.raises(ZeroProbabilityError):
        fock_project_parity(vac, "-")
    th = fock_from_p_mixture(ThermalCoherentState(3.0), 80)
    _, p_plus = fock_project_parity(th, "+")
    assert p_plus == pytest.approx(2 / 3, abs=1e-9)
    assert sum(parity_probabilities(th)) == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_parity_probabilities_sum_to_one(alpha):
    rho = fock_from_p_mixture(CoherentState(alpha), 60)
    p_plus = fock_project_parity(rho, "+")[1]
    p_minus = 1.0 - p_plus if p_plus > 1 - 1e-14 else fock_project_parity(rho, "-")[1]
    assert p_plus + p_minus == pytest.approx(1.0, abs=1e-12)
    assert p_plus == pytest.approx(project(CoherentState(alpha), "+").p_sign, abs=1e-12)


def test_hermite_functions_orthonormal_and_stable():
    x = np.linspace(-25, 25, 5001)
    phi = hermite_functions(x, 120)
    gram = phi.T @ phi * (x[1] - x[0])
    assert np.max(np.abs(gram - np.eye(120))) < 1e-10
    far = hermite_functions(np.array([60.0, -60.0]), 200)
    assert np.all(np.isfinite(far)) and np.max(np.abs(far)) < 1e-100


def test_pure_state_purity_and_vacuum_density():
    vac = fock_from_p_mixture(CoherentState(0), 20)
    assert fock_purity(vac) == pytest.approx(1.0)
    grid = Grid1D(-5, 5, 101)
    np.testing.assert_allclose(fock_pr_x(vac, grid), np.exp(-grid.points ** 2) / math.sqrt(math.pi), atol=1e-14)
    cat, _ = fock_project_parity(fock_from_p_mixture(CoherentState(1.7 - 0.4j), 60), "-")
    assert fock_purity(cat) == pytest.approx(1.0)


def test_coherent_vector_normalised():
    v = coherent_vector(np.array([0.5, 2 + 1j]), 80)
    np.testing.assert_allclose(np.sum(np.abs(v) ** 2, axis=-1), 1.0, atol=1e-14)


def test_cat_oracle_matches_quadrature_backend():
    ps = project(CoherentState(2.0), "+")
    rho, p = fock_project_parity(fock_from_p_mixture(CoherentState(2.0), 60), "+")
    assert p == pytest.approx(ps.p_sign, abs=1e-13)
    grid = Grid1D(-6, 6, 601)
    assert np.max(np.abs(fock_pr_p(rho, grid) - pr_p(ps, grid).values)) < 1e-12
    axis = Grid1D(-4, 4, 41)
    w_grid = Grid2D(axis, axis)
    assert np.max(np.abs(fock_wigner(rho, w_grid) - wigner(ps, w_grid).values)) < 1e-8
    assert fock_macroscopicity(rho) == pytest.approx(4 * math.tanh(4), abs=1e-10)


def _observable_change(small_dim, large_dim):
    x_grid = Grid1D(-10, 10, 201)
    axis = Grid1D(-6, 6, 25)
    w_grid = Grid2D(axis, axis)
    out = []
    for dim in (small_dim, large_dim):
        rho, _ = fock_project_parity(fock_from_p_mixture(BASELINE, dim), "+")
        out.append(fock_observables(rho, x_grid, x_grid, w_grid))
    return {k: float(np.max(np.abs(np.asarray(out[0][k]) - np.asarray(out[1][k])))) for k in out[0]}


def test_truncation_monotonicity():
    change = _observable_change(80, 100)
    assert max(change.values()) < 1e-6, change


@pytest.mark.xfail(strict=True, reason="baseline state keeps ~2e-6 of its population above n = 60, "
                                       "so dim = 60 fails the 1e-6 truncation check itself")
def test_truncation_monotonicity_from_60():
    change = _observable_change(60, 100)
    assert max(change.values()) < 1e-6, change
