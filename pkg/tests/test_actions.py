import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from froblab.actions import (MatrixSubring, block_lower_triangular_group, build_group,
                             diagonal_subring, f3_upper_group, full_matrix_subring,
                             group_from_generators, is_constructible, lower_triangular_group,
                             lower_triangular_subring, orbit_partition, subring_closure,
                             units_of_subring, upper_unipotent_unit_group, verify_orbit_duality)
from froblab.characters import find_generating_character
from froblab.errors import InvalidGroupError, SpecError
from froblab.linalg import free_module, gl_array, vec_mat
from froblab.ring import build_ring


@pytest.mark.parametrize("ring,n,spec,order", [
    ("gf:3", 2, "gl", 48), ("gf:3", 2, "sl", 24), ("gf:3", 2, "mon", 8),
    ("zn:4", 2, "gl", 96), ("zn:4", 2, "lt", 16), ("zn:4", 2, "diag", 4),
    ("zn:4", 2, "mon", 8), ("zn:4", 2, "mon:1", 2), ("zn:4", 2, "lt:1", 4),
    ("gf:3", 2, "preset:f3", 6), ("gf:2", 4, "blocktri:[2,2]:mon", 64),
    ("gf:2", 2, "gens:[[[0,1],[1,0]]]", 2), ("gf:2", 3, "lt", 8),
])
def test_group_orders(ring, n, spec, order):
    assert build_group(build_ring(ring), n, spec).order == order


def test_group_elements_are_closed_and_sorted():
    G = build_group(build_ring("zn:4"), 2, "lt")
    flat = [tuple(M.ravel()) for M in G.elements]
    assert flat == sorted(flat)
    G.validate()


def test_bad_group_specs():
    R = build_ring("gf:2")
    with pytest.raises(SpecError):
        build_group(R, 2, "nonsense")
    with pytest.raises(SpecError):
        build_group(R, 3, "blocktri:[2,2]:mon")
    with pytest.raises(InvalidGroupError):
        group_from_generators(R, 2, [np.array([[1, 1], [1, 1]])])


def _bfs_orbits(U, side):
    """Orbits by explicit breadth-first search, one vector at a time."""
    R, n = U.ring, U.n
    V = free_module(R, n)
    seen, orbits = set(), []
    for r in range(V.size):
        if r in seen:
            continue
        orbit, stack = {r}, [r]
        while stack:
            x = V.vectors[stack.pop()]
            for M in U.elements:
                y = vec_mat(R, x[None], M)[0] if side == "right" else vec_mat(R, x[None], M.T)[0]
                k = int(V.rank(y))
                if k not in orbit:
                    orbit.add(k)
                    stack.append(k)
        seen |= orbit
        orbits.append(frozenset(orbit))
    return set(orbits)


@pytest.mark.parametrize("ring,spec", [("zn:4", "lt"), ("gf:3", "preset:f3"), ("zn:6", "mon")])
def test_orbits_match_bfs(ring, spec):
    U = build_group(build_ring(ring), 2, spec)
    for side in ("right", "left"):
        got = {frozenset(b) for b in orbit_partition(U, side).blocks()}
        assert got == _bfs_orbits(U, side)


def test_f2xyq_orbit_counts():
    U = upper_unipotent_unit_group(build_ring("f2xyq"))
    assert U.order == 32
    assert len(orbit_partition(U, "right")) == 18  # 17 nonzero orbits plus {0}
    assert len(orbit_partition(U, "left")) == 21   # 20 nonzero orbits plus {0}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["zn:4", "gf:3", "zn:6"]), st.data())
def test_orbit_duality_for_generated_subgroups(spec, data):
    R = build_ring(spec)
    G = gl_array(R, 2)
    idx = data.draw(st.lists(st.integers(0, len(G) - 1), min_size=1, max_size=2))
    U = group_from_generators(R, 2, [G[i] for i in idx])
    assert verify_orbit_duality(U, find_generating_character(R)).holds


def test_orbit_duality_f3_group():
    R = build_ring("gf:3")
    assert verify_orbit_duality(f3_upper_group(R), find_generating_character(R)).holds


@pytest.mark.parametrize("make", [full_matrix_subring, lower_triangular_subring, diagonal_subring])
def test_standard_subrings_are_constructible(make):
    S = make(build_ring("zn:4"), 2)
    rep = is_constructible(S)
    assert rep.constructible and rep.exhaustive


def test_lower_triangular_units():
    R = build_ring("zn:4")
    units = units_of_subring(lower_triangular_subring(R, 2))
    assert units.inverses_in_subring
    assert np.array_equal(units.group.elements, lower_triangular_group(R, 2).elements)


def test_swap_subring_is_not_constructible():
    R = build_ring("gf:2")
    S = subring_closure(R, 2, [np.array([[0, 1], [1, 0]])])
    assert len(S) == 4
    rep = is_constructible(S)
    assert not rep.constructible
    assert not S.contains(np.array(rep.witness))


def test_block_lower_triangular_group_shape():
    R = build_ring("gf:2")
    L = block_lower_triangular_group(R, [2, 2], "mon")
    for M in L.elements:
        assert not M[:2, 2:].any()


@pytest.mark.parametrize("ring,n,spec", [("zn:4", 3, "lt"), ("gf:4", 3, "lt"), ("zn:8", 2, "mon"),
                                         ("gf:3", 3, "mon"), ("zn:6", 3, "diag")])
def test_stored_generators_generate_the_group(ring, n, spec):
    R = build_ring(ring)
    G = build_group(R, n, spec)
    H = group_from_generators(R, n, G.generators)
    assert np.array_equal(G.elements, H.elements)


def test_hamming_partition_is_monomial_orbits_over_f2():
    from froblab.partitions import hamming_partition
    R = build_ring("gf:2")
    assert orbit_partition(build_group(R, 2, "mon"), "right") == hamming_partition(R, 2)


def test_left_dual_of_orbits_is_transpose_orbits():
    from froblab.partitions import chi_dual
    R = build_ring("zn:4")
    chi = find_generating_character(R)
    for spec in ("mon", "lt"):
        U = build_group(R, 2, spec)
        assert chi_dual(orbit_partition(U, "right"), chi, "left", 2) == orbit_partition(U, "left")
