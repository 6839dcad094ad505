"""Spectral solvers against dense linear solves."""

import numpy as np
import pytest

from varimg import grid, spectral

from dense_ops import axis_normal_matrix, diff_matrix_1d, laplacian_matrix

BOUNDARIES = ("symmetric", "periodic")


@pytest.mark.parametrize("boundary", BOUNDARIES)
@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_eigenvalues_match_dense(n, boundary):
    T = diff_matrix_1d(n, boundary)
    dense = np.sort(np.linalg.eigvalsh(-(T.T @ T)))
    ours = np.sort(spectral.eigenvalues_1d(n, boundary))
    np.testing.assert_allclose(ours, dense, atol=1e-12)


@pytest.mark.parametrize("boundary", BOUNDARIES)
@pytest.mark.parametrize("shape,a,b", [((3, 4), 1.0, 0.5), ((5, 5), 2.0, 3.0),
                                       ((4, 6), 1.0, 0.0)])
def test_screened_laplacian_matches_dense_solve(shape, a, b, boundary):
    rng = np.random.default_rng(3)
    f = rng.standard_normal(shape)
    A = a * np.eye(shape[0] * shape[1]) - b * laplacian_matrix(*shape, boundary)
    want = np.linalg.solve(A, f.ravel()).reshape(shape)
    got = spectral.solve_screened_laplacian(f, a, b, boundary)
    np.testing.assert_allclose(got, want, atol=1e-10)


@pytest.mark.parametrize("boundary", BOUNDARIES)
def test_solve_inverts_operator(boundary):
    # (a*I - b*Lap) applied to the solution reproduces the right-hand side.
    rng = np.random.default_rng(11)
    f = rng.standard_normal((6, 7))
    u = spectral.solve_screened_laplacian(f, 1.5, 2.0, boundary)
    back = 1.5 * u - 2.0 * grid.divergence(grid.gradient(u, boundary), boundary)
    np.testing.assert_allclose(back, f, atol=1e-10)


@pytest.mark.parametrize("boundary", BOUNDARIES)
@pytest.mark.parametrize("axis", ["x", "y"])
def test_axis_screened_matches_dense(axis, boundary):
    rng = np.random.default_rng(5)
    shape = (4, 5)
    f = rng.standard_normal(shape)
    gamma, beta = 1.3, 2.7
    A = gamma * np.eye(shape[0] * shape[1]) + beta * axis_normal_matrix(
        *shape, axis, boundary)
    want = np.linalg.solve(A, f.ravel()).reshape(shape)
    got = spectral.solve_axis_screened(f, axis, gamma, beta, boundary)
    np.testing.assert_allclose(got, want, atol=1e-10)


def test_solver_batches_over_leading_axes():
    rng = np.random.default_rng(9)
    batch = rng.standard_normal((3, 4, 5))
    got = spectral.solve_screened_laplacian(batch, 1.0, 2.0)
    for i in range(3):
        np.testing.assert_allclose(
            got[i], spectral.solve_screened_laplacian(batch[i], 1.0, 2.0),
            atol=1e-12)


def test_unitary_dft_roundtrip_and_norm():
    rng = np.random.default_rng(2)
    u = rng.standard_normal((8, 8))
    m = spectral.unitary_dft_2d(u)
    # Parseval: the transform preserves the Euclidean norm.
    assert np.isclose(np.sum(np.abs(m) ** 2), np.sum(u * u))
    np.testing.assert_allclose(spectral.inverse_unitary_dft_2d(m).real, u,
                               atol=1e-12)


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        spectral.SpectralSolver((4, 4), a=0.0, b=1.0)
    with pytest.raises(ValueError):
        spectral.SpectralSolver((4, 4), a=1.0, b=-1.0)
    with pytest.raises(ValueError):
        spectral.eigenvalues_1d(1)
    with pytest.raises(ValueError):
        spectral.solve_axis_screened(np.zeros((4, 4)), "z", 1.0, 1.0)
    with pytest.raises(ValueError):
        spectral.SpectralSolver((4, 4), 1.0, 1.0).solve(np.zeros((3, 3)))
