import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modfactor.errors import DimensionMismatch, NotPSD
from modfactor.numkernel import (
    hs_inner,
    hs_orthonormalize,
    op_norm,
    psd_sqrt_pinv,
    solve_intertwiners,
    subspace_equal,
    subspace_intersection,
    vec,
    unvec,
)
from conftest import matrix_unit


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_vec_is_column_stacking():
    m = np.array([[1.0, 3.0], [2.0, 4.0]], dtype=complex)
    assert np.allclose(vec(m), [1, 2, 3, 4])
    assert np.allclose(unvec(vec(m), 2, 2), m)


class TestHsOrthonormalize:
    def test_dependent_inputs_collapse(self):
        a = np.array([[1, 0], [0, 0]], dtype=complex)
        out = hs_orthonormalize([a, 2 * a])
        assert out.dim == 1

    def test_matrix_units_stay_orthonormal(self):
        out = hs_orthonormalize([matrix_unit(1, 1, 2), matrix_unit(2, 2, 2)])
        assert out.dim == 2
        gram = np.array([[hs_inner(x, y) for y in out.mats] for x in out.mats])
        assert np.allclose(gram, np.eye(2), atol=1e-12)

    def test_rank_matches_svd_oracle(self, rng):
        # five 3x3 matrices drawn from a rank-2 span; the oracle is a direct
        # SVD of the stacked vectorizations, independent of the QR path
        basis = [random_complex(rng, 3, 3) for _ in range(2)]
        mats = [sum(c * b for c, b in zip(random_complex(rng, 2), basis))
                for _ in range(5)]
        stacked = np.stack([m.reshape(-1) for m in mats])
        svd_rank = int((np.linalg.svd(stacked, compute_uv=False) > 1e-9).sum())
        out = hs_orthonormalize(mats)
        assert out.dim == svd_rank == 2
        assert out.gap > 1e4  # the cut is reported and well separated

    def test_mixed_shapes_rejected(self):
        with pytest.raises(DimensionMismatch):
            hs_orthonormalize([np.eye(2), np.eye(3)])

    def test_ambiguous_rank_cut_is_reported(self):
        from modfactor.errors import ToleranceAmbiguity
        a = np.eye(2, dtype=complex)
        noise = np.array([[0.0, 3e-9], [0.0, 0.0]])  # lands inside the cut window
        with pytest.raises(ToleranceAmbiguity):
            hs_orthonormalize([a, a + noise])

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 6), st.integers(2, 4))
    def test_idempotent(self, seed, count, n):
        rng = np.random.default_rng(seed)
        mats = [random_complex(rng, n, n) for _ in range(count)]
        once = hs_orthonormalize(mats)
        twice = hs_orthonormalize(list(once.mats))
        assert twice.dim == once.dim
        eq, dist = subspace_equal(once, twice)
        assert eq and dist <= 1e-9


class TestSolveIntertwiners:
    def test_full_matrix_algebra_gives_scalars(self):
        basis = [matrix_unit(i, j, 3) for i in range(1, 4) for j in range(1, 4)]
        out = solve_intertwiners(basis, basis)
        assert out.dim == 1
        m = out.mats[0]
        assert op_norm(m - m[0, 0] * np.eye(3)) < 1e-10

    def test_identity_constraints_give_everything(self):
        out = solve_intertwiners([np.eye(2)], [np.eye(3)])
        assert out.dim == 6
        assert out.mats.shape == (6, 2, 3)

    def _brute_force_nullspace_dim(self, lefts, rights):
        # independent oracle: apply the map X -> (A X - X B) to every matrix
        # unit and take the kernel of the resulting column-stacked system
        n2 = lefts[0].shape[0]
        n1 = rights[0].shape[0]
        cols = []
        for p in range(n2):
            for q in range(n1):
                X = np.zeros((n2, n1), dtype=complex)
                X[p, q] = 1.0
                images = [a @ X - X @ b for a, b in zip(lefts, rights)]
                cols.append(np.concatenate([im.reshape(-1) for im in images]))
        M = np.stack(cols, axis=1)
        s = np.linalg.svd(M, compute_uv=False)
        return int((s <= 1e-9 * max(1.0, s.max())).sum()) + (n2 * n1 - len(s))

    def test_block_algebra_commutant_against_brute_force(self, block_algebra):
        basis = list(block_algebra.basis)
        out = solve_intertwiners(basis, basis)
        assert out.dim == self._brute_force_nullspace_dim(basis, basis) == 2
        expected = hs_orthonormalize(
            [matrix_unit(1, 1), matrix_unit(2, 2) + matrix_unit(3, 3)])
        eq, dist = subspace_equal(out, expected)
        assert eq, dist

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10_000))
    def test_outputs_satisfy_the_relations(self, seed):
        rng = np.random.default_rng(seed)
        lefts = [random_complex(rng, 3, 3) for _ in range(2)]
        rights = [random_complex(rng, 2, 2) for _ in range(2)]
        out = solve_intertwiners(lefts, rights)
        for X in out.mats:
            for a, b in zip(lefts, rights):
                assert op_norm(a @ X - X @ b) <= 1e-9 * max(1.0, op_norm(X))

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            solve_intertwiners([np.eye(2)], [])


class TestPsdSqrtPinv:
    def test_identity(self):
        s, p, supp = psd_sqrt_pinv(np.eye(3))
        for m in (s, p, supp):
            assert np.allclose(m, np.eye(3), atol=1e-12)

    def test_diagonal(self):
        s, p, supp = psd_sqrt_pinv(np.diag([4.0, 0.0]))
        assert np.allclose(s, np.diag([2.0, 0.0]), atol=1e-12)
        assert np.allclose(p, np.diag([0.5, 0.0]), atol=1e-12)
        assert np.allclose(supp, np.diag([1.0, 0.0]), atol=1e-12)

    def test_random_gram_matrix_against_eigendecomposition(self, rng):
        a = random_complex(rng, 4, 4)
        m = a.conj().T @ a
        s, p, supp = psd_sqrt_pinv(m)
        assert op_norm(s @ s - m) <= 1e-8
        assert op_norm(p @ m @ p - supp) <= 1e-8
        # support reproduces m from both sides
        assert op_norm(supp @ m - m) <= 1e-9
        assert op_norm(m @ supp - m) <= 1e-9

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSD):
            psd_sqrt_pinv(np.diag([1.0, -1.0]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotPSD):
            psd_sqrt_pinv(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestSubspaceEqual:
    def test_self(self):
        s = hs_orthonormalize([matrix_unit(1, 2), matrix_unit(2, 1)])
        eq, d = subspace_equal(s, s)
        assert eq and d <= 1e-12

    def test_orthogonal_spans_are_distance_one(self):
        s1 = hs_orthonormalize([matrix_unit(1, 1, 2)])
        s2 = hs_orthonormalize([matrix_unit(2, 2, 2)])
        eq, d = subspace_equal(s1, s2)
        assert not eq
        assert abs(d - 1.0) <= 1e-12

    def test_rotated_basis_is_the_same_span(self, rng):
        mats = [random_complex(rng, 3, 3) for _ in range(3)]
        s1 = hs_orthonormalize(mats)
        u = np.linalg.qr(random_complex(rng, 3, 3))[0]
        mixed = [sum(u[i, j] * s1.mats[j] for j in range(3)) for i in range(3)]
        s2 = hs_orthonormalize(mixed)
        eq, d = subspace_equal(s1, s2)
        assert eq and d <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            subspace_equal(hs_orthonormalize([np.eye(2)]),
                           hs_orthonormalize([np.eye(3)]))


def test_subspace_intersection(rng):
    a = random_complex(rng, 3, 3)
    b = random_complex(rng, 3, 3)
    c = random_complex(rng, 3, 3)
    s1 = hs_orthonormalize([a, b])
    s2 = hs_orthonormalize([a, c])
    inter = subspace_intersection(s1, s2)
    assert inter.dim == 1
    assert inter.distance(a / np.linalg.norm(a)) <= 1e-9
