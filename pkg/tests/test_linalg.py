import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from froblab.linalg import (free_module, gl_array, identity, inverse_matrix, mat_mul,
                            search_matrices, vec_mat)
from froblab.ring import build_ring


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gl2_order_over_fields(q):
    assert len(gl_array(build_ring(f"gf:{q}"), 2)) == (q * q - 1) * (q * q - q)


def test_gl_orders_over_rings():
    assert len(gl_array(build_ring("zn:4"), 2)) == 96
    assert len(gl_array(build_ring("gf:2"), 3)) == 168
    assert len(gl_array(build_ring("zn:6"), 1)) == 2


def test_gl_is_lexicographic():
    G = gl_array(build_ring("gf:3"), 2)
    flat = [tuple(M.ravel()) for M in G]
    assert flat == sorted(flat)


def test_search_yields_lexicographic_images():
    R = build_ring("zn:4")
    V = free_module(R, 2)
    out = list(search_matrices(R, 2, injective=False))
    assert len(out) == 4**4
    assert [tuple(M.ravel()) for M, _ in out] == sorted(tuple(M.ravel()) for M, _ in out)
    M, image = out[37]
    assert np.array_equal(vec_mat(R, V.vectors, M) @ V.powers, image)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([4, 6, 9]), st.lists(st.integers(0, 100), min_size=8, max_size=8))
def test_mat_mul_matches_integer_matmul(N, entries):
    R = build_ring(f"zn:{N}")
    A = np.array(entries[:4]).reshape(2, 2) % N
    B = np.array(entries[4:]).reshape(2, 2) % N
    assert np.array_equal(mat_mul(R, A, B), (A @ B) % N)


def test_inverse_matrix():
    R = build_ring("zn:4")
    for M in gl_array(R, 2)[::7]:
        B = inverse_matrix(R, M)
        assert np.array_equal(mat_mul(R, M, B), identity(R, 2))
    assert inverse_matrix(R, np.array([[2, 0], [0, 1]])) is None


def test_free_module_ranks_roundtrip():
    V = free_module(build_ring("gf:3"), 3)
    assert V.size == 27
    for r in range(V.size):
        assert V.rank(V.vector(r)) == r
