import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from froblab.actions import build_group
from froblab.errors import BudgetExceeded, IllDefinedMapError, SpecError
from froblab.extension import (LinearMap, code_closure, enumerate_codes, extension_oracle,
                               extension_property, extension_search, first_extension,
                               is_global_u_map, is_local_u_map, isometry_matrices, linear_map,
                               linear_maps, local_global_scan, map_from_matrix,
                               preserves_weight, weight_preserving_maps)
from froblab.linalg import free_module, gl_array
from froblab.posets import enumerate_posets, is_hierarchical
from froblab.ring import build_ring
from froblab.weights import PosetWeight, parse_weight


def _closure_by_iteration(R, n, gens):
    """Grow the set under addition and scalar multiplication until it stops changing."""
    V = free_module(R, n)
    S = {tuple([R.zero] * n)}
    frontier = [tuple(g) for g in gens]
    while frontier:
        x = frontier.pop()
        if x in S:
            continue
        S.add(x)
        for y in list(S):
            frontier.append(tuple(R.add(a, b) for a, b in zip(x, y)))
        for r in range(R.size):
            frontier.append(tuple(R.mul(r, a) for a in x))
    return sorted(int(V.rank(np.array(x))) for x in S)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["zn:4", "gf:3", "zn:6", "f2xyq"]), st.data())
def test_closure_matches_iteration(spec, data):
    R = build_ring(spec)
    n = 2
    gens = data.draw(st.lists(st.lists(st.integers(0, R.size - 1), min_size=n, max_size=n),
                              min_size=1, max_size=2))
    code = code_closure(R, n, gens)
    assert list(code.elements) == _closure_by_iteration(R, n, gens)


def test_small_closures():
    R = build_ring("zn:4")
    assert len(code_closure(R, 2, [[2, 0]])) == 2
    assert len(code_closure(R, 2, [[1, 1]])) == 4
    assert len(code_closure(R, 2, [[1, 0], [0, 1]])) == 16
    assert [0, 0] in code_closure(R, 2, [[2, 2]])


def test_subspace_counts():
    assert len(enumerate_codes(build_ring("gf:2"), 2, 2)) == 4
    assert len(enumerate_codes(build_ring("gf:2"), 4, 4)) == 66
    assert len(enumerate_codes(build_ring("gf:3"), 2, 2)) == 5


def test_ill_defined_map():
    R = build_ring("zn:4")
    with pytest.raises(IllDefinedMapError):
        linear_map(R, 2, [[2, 0]], [[1, 0]])
    f = linear_map(R, 2, [[2, 0]], [[0, 2]])
    assert list(f([2, 0])) == [0, 2]
    with pytest.raises(ValueError):
        f([1, 0])


def test_map_inverse_and_image():
    R = build_ring("gf:3")
    f = linear_map(R, 2, [[1, 0]], [[1, 2]])
    assert f.is_injective
    g = f.inverse()
    assert list(g([2, 1])) == [2, 0]
    assert f.image.key == code_closure(R, 2, [[1, 2]]).key


def test_hom_count():
    R = build_ring("gf:2")
    code = code_closure(R, 2, [[1, 0], [0, 1]])
    assert sum(1 for _ in linear_maps(code)) == 16
    assert sum(1 for _ in linear_maps(code, injective=True)) == 6
    assert sum(1 for _ in weight_preserving_maps(code, parse_weight("hamming", R, 2))) == 2


def test_global_and_local_checks():
    R = build_ring("zn:4")
    U = build_group(R, 2, "mon")
    code = code_closure(R, 2, [[1, 2]])
    M = U.elements[5]
    f = map_from_matrix(code, M)
    assert is_local_u_map(f, U) and is_global_u_map(f, U)
    g = linear_map(R, 2, [[1, 2]], [[1, 1]])  # (1,2) and (1,1) lie in different orbits
    chk = is_local_u_map(g, U)
    assert not chk and chk.failure is not None
    assert not is_global_u_map(g, U)


def test_restriction_extends_to_its_matrix():
    R = build_ring("zn:4")
    w = parse_weight("hamming", R, 2)
    M = np.array([[0, 3], [1, 0]])
    f = map_from_matrix(code_closure(R, 2, [[1, 1]]), M)
    assert preserves_weight(f, w)
    found = extension_search(f, weight=w)
    assert any(np.array_equal(M, X) for X in found)
    assert np.array_equal(first_extension(f, w), found[0])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["zn:4", "gf:3", "zn:6", "f2xyq"]),
       st.sampled_from(["hamming", "rt", "support", "comp:all"]), st.data())
def test_search_methods_agree_with_oracle(spec, wspec, data):
    R = build_ring(spec)
    w = parse_weight(wspec, R, 2)
    G = gl_array(R, 2)
    V = free_module(R, 2)
    g = V.vectors[data.draw(st.integers(1, V.size - 1))]
    M = G[data.draw(st.integers(0, len(G) - 1))]
    f = map_from_matrix(code_closure(R, 2, [g]), M)
    key = lambda Ms: [tuple(X.ravel()) for X in Ms]
    rows = key(extension_search(f, weight=w))
    assert rows == key(extension_search(f, weight=w, method="columns"))
    assert rows == key(extension_oracle(f, w))


def test_group_search_matches_weight_search_for_monomial_hamming():
    R = build_ring("gf:3")
    f = linear_map(R, 2, [[1, 1]], [[2, 1]])
    by_group = extension_search(f, group=build_group(R, 2, "mon"))
    by_weight = extension_search(f, weight=parse_weight("hamming", R, 2))
    assert [X.tolist() for X in by_group] == [X.tolist() for X in by_weight]


def test_search_argument_errors():
    R = build_ring("gf:2")
    f = linear_map(R, 2, [[1, 0]], [[0, 1]])
    w = parse_weight("hamming", R, 2)
    with pytest.raises(SpecError):
        extension_search(f)
    with pytest.raises(SpecError):
        extension_search(f, weight=w, method="diagonal")
    with pytest.raises(SpecError):
        extension_search(f, weight=parse_weight("hamming", R, 3))
    with pytest.raises(BudgetExceeded):
        extension_search(f, weight=w, budget=1)


def test_isometry_group_sizes():
    F2, F3 = build_ring("gf:2"), build_ring("gf:3")
    assert len(isometry_matrices(parse_weight("hamming", F3, 2))) == 8
    assert len(isometry_matrices(parse_weight("nrt:[2,2]", F2, 4))) == 8
    assert len(isometry_matrices(parse_weight("rt", F2, 3))) == 8  # lower triangular


def test_scan_finds_f2xyq_counterexample():
    R = build_ring("f2xyq")
    U = build_group(R, 2, "gl")
    assert local_global_scan(R, 2, U, max_code_generators=1).holds  # cyclic codes are fine
    rep = local_global_scan(R, 2, U, max_code_generators=2)
    assert not rep.holds
    code, f, witnesses = rep.counterexample
    assert len(code.generators) == 2
    assert is_local_u_map(f, U) and not is_global_u_map(f, U)
    assert "not global" in rep.describe()


def test_scan_is_deterministic_across_threads():
    R = build_ring("zn:4")
    U = build_group(R, 2, "lt")
    a = local_global_scan(R, 2, U, threads=1)
    b = local_global_scan(R, 2, U, threads=4)
    assert (a.holds, a.codes_checked, a.maps_checked, a.local_maps) == \
           (b.holds, b.codes_checked, b.maps_checked, b.local_maps)


def test_extension_property_hamming_frobenius():
    assert extension_property(parse_weight("hamming", build_ring("zn:4"), 2)).holds


def test_poset_dichotomy_over_z4():
    R = build_ring("zn:4")
    for n in (2, 3):
        for P in enumerate_posets(n):
            rep = extension_property(PosetWeight(R, P), max_code_generators=1)
            assert rep.holds == is_hierarchical(P), P


RT_RINGS = ["zn:2", "zn:3", "zn:4", "zn:5", "zn:6", "zn:7", "zn:8", "gf:4", "gf:8", "f2xyq",
            "prod:(zn:2,zn:2)", "prod:(zn:2,zn:3)"]


@pytest.mark.parametrize("spec", RT_RINGS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_rt_isometries_are_lower_triangular(spec, n):
    R = build_ring(spec)
    iso = isometry_matrices(parse_weight("rt", R, n))
    LT = build_group(R, n, "lt").elements
    assert len(iso) == len(LT)
    assert all(np.array_equal(a, b) for a, b in zip(iso, LT))
