import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gsp.errors import DimensionMismatch, NotSymmetric
from gsp.graph import build_from_edges, laplacian, random_weighted_graph
from gsp.spectral import GFTBasis, eigendecompose, gft, igft, split_clusters

from conftest import basis_of, complete_graph, path_graph, random_connected_graph

S2 = 1 / np.sqrt(2)


def k2_basis():
    return basis_of(build_from_edges([("a", "b", 1)]))


class TestEigendecompose:
    def test_k2(self):
        b = k2_basis()
        np.testing.assert_allclose(b.lambdas, [0, 2], atol=1e-14)
        np.testing.assert_allclose(b.U, [[S2, S2], [S2, -S2]], atol=1e-14)

    def test_path3_matches_characteristic_polynomial(self):
        L = laplacian(path_graph(3))
        # oracle: roots of det(xI - L), from the polynomial coefficients
        roots = np.sort(np.roots(np.poly(L)).real)
        np.testing.assert_allclose(roots, [0, 1, 3], atol=1e-12)
        np.testing.assert_allclose(eigendecompose(L).lambdas, [0, 1, 3], atol=1e-12)

    def test_zero_matrix(self):
        b = eigendecompose(np.zeros((4, 4)))
        np.testing.assert_array_equal(b.lambdas, np.zeros(4))
        np.testing.assert_array_equal(b.U, np.eye(4))

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            eigendecompose(np.zeros((2, 3)))

    def test_sign_convention(self, rng):
        b = basis_of(random_weighted_graph(12, 0.5, rng))
        for k in range(b.n):
            col = b.U[:, k]
            assert col[np.flatnonzero(np.abs(col) > 1e-8)[0]] > 0

    def test_invariants_random(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 25))
            L = laplacian(random_weighted_graph(n, 0.4, rng))
            b = eigendecompose(L)
            assert np.max(np.abs(b.U.T @ b.U - np.eye(n))) <= 1e-10
            recon = b.U @ np.diag(b.lambdas) @ b.U.T
            assert np.max(np.abs(L - recon)) <= 1e-8 * (1 + np.max(np.abs(b.lambdas)))
            assert np.all(np.diff(b.lambdas) >= 0)
            assert b.lambdas[0] >= -1e-9

    def test_reproducible(self, rng):
        L = laplacian(random_weighted_graph(30, 0.3, rng))
        a, b = eigendecompose(L), eigendecompose(L)
        np.testing.assert_array_equal(a.lambdas, b.lambdas)
        assert np.max(np.abs(a.U - b.U)) <= 1e-12

    def test_complete_graph_repeated_eigenvalue(self):
        b = basis_of(complete_graph(5))
        np.testing.assert_allclose(b.lambdas, [0, 5, 5, 5, 5], atol=1e-12)
        np.testing.assert_allclose(b.U[:, 0], np.full(5, 1 / np.sqrt(5)), atol=1e-14)


class TestGFT:
    def test_constant_signal(self, rng):
        g = random_connected_graph(9, rng)
        b = basis_of(g)
        c = 2.5
        expected = np.zeros(9)
        expected[0] = c * 3.0
        np.testing.assert_allclose(gft(b, np.full(9, c)), expected, atol=1e-12)

    def test_basis_column(self, rng):
        b = basis_of(random_weighted_graph(7, 0.6, rng))
        for k in range(7):
            np.testing.assert_allclose(gft(b, b.U[:, k]), np.eye(7)[k], atol=1e-12)

    def test_k2_impulse(self):
        # [[s, s], [s, -s]]^T @ [1, 0] = [s, s]
        np.testing.assert_allclose(gft(k2_basis(), [1.0, 0.0]), [S2, S2], atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            gft(k2_basis(), [1.0, 2.0, 3.0])
        with pytest.raises(DimensionMismatch):
            igft(k2_basis(), [1.0])

    def test_igft_zero(self):
        np.testing.assert_array_equal(igft(k2_basis(), [0.0, 0.0]), [0.0, 0.0])

    def test_igft_first_atom(self, rng):
        b = basis_of(random_connected_graph(8, rng))
        np.testing.assert_allclose(igft(b, np.eye(8)[0]), np.full(8, 1 / np.sqrt(8)), atol=1e-12)

    def test_round_trip(self, rng):
        b = basis_of(random_weighted_graph(8, 0.5, rng))
        f = rng.standard_normal(8)
        assert np.max(np.abs(igft(b, gft(b, f)) - f)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 16), seed=st.integers(0, 2**32 - 1))
def test_parseval(n, seed):
    rng = np.random.default_rng(seed)
    b = basis_of(random_weighted_graph(n, 0.5, rng))
    f = rng.standard_normal(n)
    assert np.linalg.norm(gft(b, f)) == pytest.approx(np.linalg.norm(f), rel=1e-10)


def test_split_clusters():
    b = basis_of(complete_graph(5))
    assert split_clusters(b, [0, 1]) == [1]
    assert split_clusters(b, [0]) == []
    assert split_clusters(b, range(5)) == []
