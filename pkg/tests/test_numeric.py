import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lomlab.errors import NonFiniteError, ShapeMismatchError
from lomlab.numeric import (
    DEFAULT_TOL,
    Tolerance,
    VectorSpace,
    as_matrix,
    nullspace_of,
    orthonormal_rows,
    rank_of,
    solve_least_squares,
)

small_matrices = arrays(
    float, st.tuples(st.integers(1, 5), st.integers(1, 5)),
    elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False),
)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(rel_eps=0.0)
    with pytest.raises(ValueError):
        Tolerance(abs_eps=-1.0)
    assert Tolerance(rel_eps=1e-6).cutoff(100.0) == pytest.approx(1e-4)


def test_vector_space():
    assert VectorSpace(3).dim == 3
    with pytest.raises(ValueError):
        VectorSpace(0)


def test_rank_examples():
    assert rank_of([[1, 0], [0, 0]]) == 1
    assert rank_of([[0, 0], [0, 0]]) == 0
    assert rank_of([[0, -1], [1, 0]]) == 2


def test_rank_rejects_nonfinite():
    with pytest.raises(NonFiniteError):
        rank_of([[np.nan, 0], [0, 1]])
    with pytest.raises(NonFiniteError):
        rank_of([[np.inf, 0], [0, 1]])


@given(small_matrices)
@settings(max_examples=60, deadline=None)
def test_rank_transpose_invariant(m):
    assert rank_of(m) == rank_of(m.T)


def test_rank_similarity_invariant():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        r = int(rng.integers(0, n + 1))
        m = rng.standard_normal((n, r)) @ rng.standard_normal((r, n)) if r else np.zeros((n, n))
        # invertible factors with condition number well below 1/rel_eps
        def well_conditioned():
            a = rng.standard_normal((n, n))
            u, _, vt = np.linalg.svd(a)
            return u @ np.diag(np.geomspace(1, 50, n)) @ vt
        p, q = well_conditioned(), well_conditioned()
        assert rank_of(p @ m @ q) == r


def test_nullspace_examples():
    ns = nullspace_of([[1, 1], [1, 1]])
    assert ns.shape == (2, 1)
    expected = np.array([1, -1]) / np.sqrt(2)
    assert abs(abs(ns[:, 0] @ expected) - 1) < 1e-12

    assert nullspace_of(np.eye(3)).shape == (3, 0)

    ns2 = nullspace_of([[1, 0], [0, 0]])
    assert ns2.shape == (2, 1)
    assert abs(abs(ns2[1, 0]) - 1) < 1e-12


def test_nullspace_vectors_annihilate():
    rng = np.random.default_rng(1)
    for _ in range(20):
        rows, cols = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        r = int(rng.integers(0, min(rows, cols) + 1))
        m = (rng.standard_normal((rows, r)) @ rng.standard_normal((r, cols))
             if r else np.zeros((rows, cols)))
        ns = nullspace_of(m)
        assert ns.shape[1] == cols - rank_of(m)
        if ns.shape[1]:
            s = np.linalg.svd(m, compute_uv=False)
            cut = DEFAULT_TOL.cutoff(s[0] if s.size else 0.0)
            assert np.linalg.norm(m @ ns, axis=0).max() <= 10 * max(cut, 1e-12)
        # columns orthonormal
        assert np.allclose(ns.T @ ns, np.eye(ns.shape[1]), atol=1e-12)


def test_lstsq_examples():
    x, res = solve_least_squares(np.eye(2), [3, 4])
    assert np.allclose(x, [3, 4]) and res < 1e-12

    x, res = solve_least_squares([[1], [1]], [0, 2])
    assert np.allclose(x, [1.0]) and abs(res - np.sqrt(2)) < 1e-12

    # normal equations by hand: A^T A x = A^T b gives x1 + x2 = 2, and the
    # minimum-norm representative is (1, 1) with zero residual
    x, res = solve_least_squares([[1, 1], [1, 1]], [2, 2])
    assert np.allclose(x, [1, 1]) and res < 1e-12


def test_lstsq_matches_normal_equations():
    rng = np.random.default_rng(2)
    for _ in range(30):
        rows = int(rng.integers(1, 7))
        cols = int(rng.integers(1, 5))
        a = rng.standard_normal((rows, cols))
        b = rng.standard_normal(rows)
        if min(rows, cols) > 4 or rank_of(a) < min(rows, cols):
            continue
        _, res = solve_least_squares(a, b)
        x_ne = np.linalg.solve(a.T @ a, a.T @ b) if cols <= rows else None
        if x_ne is None:
            # underdetermined full-rank: exact solve, residual 0
            assert res < 1e-10
        else:
            res_ne = np.linalg.norm(a @ x_ne - b)
            assert abs(res - res_ne) < 1e-12


def test_lstsq_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        solve_least_squares([[1, 0]], [1, 2])


def test_as_matrix_square_check():
    with pytest.raises(ShapeMismatchError):
        as_matrix([[1, 2, 3]], square=True)


def test_orthonormal_rows():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((3, 6))
    stacked = np.vstack([m, m, 2 * m])
    q = orthonormal_rows(stacked)
    assert q.shape == (3, 6)
    assert np.allclose(q @ q.T, np.eye(3), atol=1e-12)
