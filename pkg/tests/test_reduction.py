"""Truncated SVD: exactness on small matrices, near-optimality of the
randomized path, and the derived row-vector conventions."""

import numpy as np
import pytest
from scipy import sparse

from lexcontrast.reduction import ReductionError, truncated_svd


def _random_orthonormal(rng, n, k):
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return q


def _spectrum_matrix(rng, n, m, sigmas):
    k = len(sigmas)
    return _random_orthonormal(rng, n, k) @ (np.asarray(sigmas)[:, None] * _random_orthonormal(rng, m, k).T)


class TestExactness:
    def test_identity(self):
        result = truncated_svd(np.eye(4), 3, mode="dense")
        np.testing.assert_allclose(result.singular_values, np.ones(3), atol=1e-12)
        assert result.effective_rank == 3
        # row vectors of an isometry stay orthonormal
        gram = result.row_vectors.T @ result.row_vectors
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)

    def test_rank_one_outer_product(self):
        rng = np.random.default_rng(0)
        a, b = rng.random(6), rng.random(9)
        result = truncated_svd(np.outer(a, b), 4, mode="dense")
        assert result.effective_rank == 1
        assert result.singular_values[0] == pytest.approx(
            np.linalg.norm(a) * np.linalg.norm(b), abs=1e-12
        )
        np.testing.assert_allclose(result.reconstruction(), np.outer(a, b), atol=1e-12)

    def test_matches_dense_reference(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            n, m = int(rng.integers(5, 40)), int(rng.integers(5, 40))
            dense = rng.standard_normal((n, m)) * (rng.random((n, m)) > 0.5)
            dim = int(rng.integers(1, min(n, m) + 1))
            result = truncated_svd(sparse.csr_matrix(dense), dim, mode="dense")
            u, s, vt = np.linalg.svd(dense, full_matrices=False)
            optimum = (u[:, :dim] * s[:dim]) @ vt[:dim]
            err_got = np.linalg.norm(dense - result.reconstruction())
            err_opt = np.linalg.norm(dense - optimum)
            assert err_got <= err_opt + 1e-9
            np.testing.assert_allclose(result.singular_values, s[:dim], atol=1e-9)

    def test_beats_random_low_rank_competitors(self):
        # the rank-k truncation minimizes Frobenius error over rank-k matrices
        rng = np.random.default_rng(2)
        dense = rng.standard_normal((12, 10))
        k = 3
        best = truncated_svd(dense, k, mode="dense")
        err_best = np.linalg.norm(dense - best.reconstruction())
        for _ in range(100):
            competitor = rng.standard_normal((12, k)) @ rng.standard_normal((k, 10))
            assert err_best <= np.linalg.norm(dense - competitor) + 1e-9


class TestRandomized:
    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(3)
        dense = _spectrum_matrix(rng, 40, 30, [2.0 ** -i for i in range(10)])
        one = truncated_svd(dense, 5, mode="randomized", seed=7)
        two = truncated_svd(dense, 5, mode="randomized", seed=7)
        np.testing.assert_array_equal(one.row_vectors, two.row_vectors)
        other = truncated_svd(dense, 5, mode="randomized", seed=8)
        assert not np.array_equal(one.row_vectors, other.row_vectors)

    def test_near_optimal_on_decaying_spectrum(self):
        rng = np.random.default_rng(4)
        sigmas = [2.0 ** -i for i in range(20)]
        dense = _spectrum_matrix(rng, 120, 80, sigmas)
        dim = 8
        got = truncated_svd(sparse.csr_matrix(dense), dim, mode="randomized", seed=0)
        opt = truncated_svd(dense, dim, mode="dense")
        err_got = np.linalg.norm(dense - got.reconstruction())
        err_opt = np.linalg.norm(dense - opt.reconstruction())
        assert err_got <= err_opt * (1 + 1e-6) + 1e-12
        np.testing.assert_allclose(
            got.singular_values, opt.singular_values, rtol=1e-6
        )

    def test_reconstruction_is_sign_invariant(self):
        # individual singular vectors are sign-ambiguous between the two
        # modes, but the reconstruction they span is not
        rng = np.random.default_rng(5)
        dense = _spectrum_matrix(rng, 50, 35, [3.0, 1.5, 0.7, 0.3, 0.1])
        a = truncated_svd(dense, 5, mode="dense")
        b = truncated_svd(dense, 5, mode="randomized", seed=1)
        np.testing.assert_allclose(a.reconstruction(), b.reconstruction(), atol=1e-8)


class TestConventions:
    def test_auto_picks_dense_below_cutoff(self):
        result = truncated_svd(np.eye(5), 2)
        assert result.mode_used == "dense"

    def test_dim_clamps_to_min_shape(self):
        rng = np.random.default_rng(6)
        dense = rng.standard_normal((7, 4))
        result = truncated_svd(dense, 100, mode="dense")
        assert result.dim == 4
        assert result.row_vectors.shape == (7, 4)
        assert result.effective_rank <= 4

    def test_effective_rank_ignores_numerical_zeros(self):
        rng = np.random.default_rng(7)
        dense = _spectrum_matrix(rng, 20, 15, [1.0, 0.5, 0.25])
        result = truncated_svd(dense, 10, mode="dense")
        assert result.effective_rank == 3

    def test_sigma_exponent_zero_gives_bare_left_vectors(self):
        rng = np.random.default_rng(8)
        dense = rng.standard_normal((10, 8))
        result = truncated_svd(dense, 4, mode="dense", sigma_exponent=0.0)
        np.testing.assert_allclose(result.row_vectors, result.left_vectors, atol=1e-15)

    def test_sigma_exponent_half(self):
        rng = np.random.default_rng(9)
        dense = rng.standard_normal((10, 8))
        result = truncated_svd(dense, 4, mode="dense", sigma_exponent=0.5)
        np.testing.assert_allclose(
            result.row_vectors,
            result.left_vectors * np.sqrt(result.singular_values),
            atol=1e-14,
        )

    def test_validation(self):
        with pytest.raises(ReductionError):
            truncated_svd(np.eye(3), 0)
        with pytest.raises(ReductionError):
            truncated_svd(np.eye(3), 2, sigma_exponent=-1.0)
        with pytest.raises(ReductionError):
            truncated_svd(np.eye(3), 2, mode="fast")

    def test_sparse_and_dense_inputs_agree(self):
        rng = np.random.default_rng(10)
        dense = rng.standard_normal((9, 6)) * (rng.random((9, 6)) > 0.4)
        a = truncated_svd(dense, 3, mode="dense")
        b = truncated_svd(sparse.csr_matrix(dense), 3, mode="dense")
        np.testing.assert_array_equal(a.row_vectors, b.row_vectors)
