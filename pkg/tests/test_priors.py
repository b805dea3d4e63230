import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutrit_qsa.errors import DegenerateMarginalError, InvalidParamsError
from qutrit_qsa.priors import (
    Prior,
    default_gaussian_prior,
    grid_centers,
    marginal_density_grid,
    prior_density,
)

from conftest import SQRT3


def flat_marginal_oracle(grid):
    """(rho11 rho22 rho33)^2 on the diagonal triangle, normalised like the estimator."""
    c3, c8 = grid_centers((3, 8), grid)
    X3, X8 = np.meshgrid(c3, c8, indexing="ij")
    r1 = 1 / 3 + X3 / 2 + X8 / (2 * SQRT3)
    r2 = 1 / 3 - X8 / SQRT3
    r3 = 1 / 3 - X3 / 2 + X8 / (2 * SQRT3)
    inside = (r1 >= 0) & (r2 >= 0) & (r3 >= 0)
    dens = np.where(inside, (r1 * r2 * r3) ** 2, 0.0)
    area = (c3[1] - c3[0]) * (c8[1] - c8[0])
    return dens / (dens.sum() * area)


@pytest.fixture(scope="module")
def flat32():
    return marginal_density_grid(Prior.constant(), grid=32, samples_per_cell=8192)


def test_flat_marginal_matches_dirichlet(flat32):
    oracle = flat_marginal_oracle(32)
    area = (2 / 32) * (SQRT3 / 32)
    # L1 distance between the two normalised densities
    assert np.sum(np.abs(flat32 - oracle)) * area < 0.03
    assert np.max(np.abs(flat32 - oracle)) < 0.1 * oracle.max()


def test_flat_marginal_corner_is_empty(flat32):
    assert flat32[0, 0] == 0.0
    assert flat32[-1, 0] == 0.0


def test_flat_marginal_x3_reflection(flat32):
    np.testing.assert_allclose(flat32, flat32[::-1, :], atol=0.1 * flat32.max())


def test_normalisation(flat32):
    area = (2 / 32) * (SQRT3 / 32)
    assert flat32.sum() * area == pytest.approx(1.0)
    assert np.all(flat32 >= 0)


def test_gaussian_marginal_peaks_near_center():
    g = marginal_density_grid(default_gaussian_prior(), grid=16, samples_per_cell=1024)
    c3, c8 = grid_centers((3, 8), 16)
    i, j = np.unravel_index(np.argmax(g), g.shape)
    # the vertex itself carries no volume, so the peak sits just inside it
    assert abs(c3[i]) < 0.2
    assert c8[j] < -0.4
    mean_x8 = np.sum(g.sum(axis=0) * c8) / g.sum()
    # prior mean of rho22 under this prior is about 0.621
    assert mean_x8 == pytest.approx(SQRT3 * (1 / 3 - 0.621), abs=0.03)


def test_density_examples():
    g = default_gaussian_prior()
    assert prior_density(g, np.array(g.center)) == 1.0
    x = np.zeros(8)
    expected = np.exp(-(4 / 3) / (2 * g.breadth**2))
    assert prior_density(g, x) == pytest.approx(expected)
    assert prior_density(Prior.constant(), x) == 1.0
    np.testing.assert_array_equal(prior_density(Prior.constant(), np.zeros((4, 8))), np.ones(4))


@settings(max_examples=100)
@given(st.floats(0, 2 * np.pi), st.floats(0.01, 1.0))
def test_gaussian_spherical(theta, r):
    g = default_gaussian_prior()
    c = np.array(g.center)
    u = np.zeros(8)
    u[0], u[3] = np.cos(theta), np.sin(theta)
    v = np.zeros(8)
    v[5] = 1.0
    assert prior_density(g, c + r * u) == pytest.approx(prior_density(g, c + r * v), rel=1e-12)


def test_prior_validation():
    with pytest.raises(InvalidParamsError):
        Prior("uniform")
    with pytest.raises(InvalidParamsError):
        Prior.gaussian((0.0,) * 8, 0.0)
    with pytest.raises(InvalidParamsError):
        Prior.gaussian((0.0,) * 7, 0.3)
    with pytest.raises(InvalidParamsError):
        Prior.gaussian((1.0,) * 8, 0.3)


def test_marginal_argument_checks():
    with pytest.raises(InvalidParamsError):
        marginal_density_grid(Prior.constant(), grid=8)
    with pytest.raises(InvalidParamsError):
        marginal_density_grid(Prior.constant(), axes=(3, 3))


def test_degenerate_marginal():
    far = Prior.gaussian((0.0,) * 7 + (-2 / SQRT3,), 1e-3)
    with pytest.raises(DegenerateMarginalError):
        marginal_density_grid(far, axes=(1, 2), grid=16, samples_per_cell=16)


def test_marginal_is_deterministic():
    a = marginal_density_grid(Prior.constant(), grid=16, samples_per_cell=256, seed=4)
    b = marginal_density_grid(Prior.constant(), grid=16, samples_per_cell=256, seed=4, threads=1)
    np.testing.assert_array_equal(a, b)
