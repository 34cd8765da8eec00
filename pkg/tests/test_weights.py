from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from froblab.actions import build_group, orbit_partition
from froblab.errors import SpecError
from froblab.linalg import free_module, gl_array, mat_mul
from froblab.ring import build_ring
from froblab.weights import (RankWeight, check_homogeneous_axioms, comp_vector,
                             homogeneous_table, parse_weight, weight_profiles, wt_hamming,
                             wt_rt)


def test_homogeneous_z4():
    assert homogeneous_table(build_ring("zn:4")) == (0, 1, 2, 1)


def test_homogeneous_z8_z9():
    assert homogeneous_table(build_ring("zn:8")) == (0, 1, 1, 1, 2, 1, 1, 1)
    h = homogeneous_table(build_ring("zn:9"))
    assert h[3] == h[6] == Fraction(3, 2) and h[1] == 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_homogeneous_field_is_scaled_hamming(q):
    h = homogeneous_table(build_ring(f"gf:{q}"))
    assert h[0] == 0 and set(h[1:]) == {Fraction(q, q - 1)}


@pytest.mark.parametrize("spec", ["zn:4", "zn:12", "gf:4", "mat:2:(gf:2)", "prod:(zn:2,zn:4)"])
def test_homogeneous_axioms(spec):
    R = build_ring(spec)
    assert check_homogeneous_axioms(R, homogeneous_table(R)) is None


def test_axiom_checker_rejects_hamming_on_z4():
    assert check_homogeneous_axioms(build_ring("zn:4"), (0, 1, 1, 1)) is not None


def test_plain_functions():
    assert wt_hamming([0, 2, 0, 1]) == 2
    assert wt_rt([0, 2, 0, 1, 0]) == 4 and wt_rt([0, 0]) == 0
    assert weight_profiles([2, 1], wt_hamming, [1, 1, 0]) == ((2, 0), (0, 2))


def _rank_by_row_space(R, A):
    """log_q of the number of distinct vectors xA."""
    m = A.shape[0]
    V = free_module(R, m)
    prods = mat_mul(R, V.vectors, A)
    count = len({tuple(r) for r in prods})
    return round(np.log(count) / np.log(R.size))


@pytest.mark.parametrize("spec,m,c", [("gf:2", 2, 3), ("gf:3", 2, 2), ("gf:4", 2, 2)])
def test_rank_weight_matches_row_space(spec, m, c):
    R = build_ring(spec)
    w = RankWeight(R, m, c)
    for r, x in enumerate(w.V.vectors):
        assert w.values[r] == _rank_by_row_space(R, x.reshape(m, c))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_rank_invariant_under_two_sided_multiplication(data):
    R = build_ring("gf:3")
    G = gl_array(R, 2)
    w = parse_weight("rank:[2,2]", R, 4)
    r = data.draw(st.integers(0, 80))
    U, V = G[data.draw(st.integers(0, len(G) - 1))], G[data.draw(st.integers(0, len(G) - 1))]
    A = w.V.vectors[r].reshape(2, 2)
    B = mat_mul(R, mat_mul(R, U, A), V)
    assert w(B.ravel()) == w.values[r]


def test_rankext_weight_one_count():
    w = parse_weight("rankext", build_ring("gf:2^4"), 2)
    assert sum(1 for v in w.values if v == 1) == 45
    assert max(w.values) == 2


@pytest.mark.parametrize("units", ["all", "1"])
def test_composition_constant_on_monomial_orbits(units):
    R = build_ring("zn:4")
    w = parse_weight(f"comp:{units}", R, 2)
    G = build_group(R, 2, f"mon:{units}")
    for block in orbit_partition(G, "right").blocks():
        assert len({w.values[r] for r in block}) == 1
    assert comp_vector(R, None, [0, 2]) == (1, 0, 1)  # orbits {0}, {1,3}, {2}


def test_nrt_single_chain_is_rt():
    R = build_ring("gf:2")
    assert parse_weight("nrt:[1,3]", R, 3).values == parse_weight("rt", R, 3).values


def test_profiles():
    R = build_ring("gf:2")
    prof = parse_weight("profile:(1,1;hamming)", R, 2)
    sym = parse_weight("symprofile:(1,1;hamming)", R, 2)
    assert prof([1, 0]) == (1, 0) and prof([0, 1]) == (0, 1)
    assert sym([1, 0]) == sym([0, 1]) == (0, 1)
    assert parse_weight("symprofile:(2,2;rt)", R, 4)([0, 1, 1, 0]) == (1, 2)


def test_classes_follow_sorted_values():
    w = parse_weight("rt", build_ring("gf:2"), 3)
    assert list(w.classes) == w.values


def test_inline_and_file_poset(tmp_path):
    R = build_ring("gf:2")
    f = tmp_path / "p.poset"
    f.write_text("n=3; 1<2")
    a = parse_weight(f"poset:{f}", R, 3)
    b = parse_weight("poset:n=3; 1<2", R, 3)
    assert a.values == b.values
    assert b([0, 1, 0]) == 2


@pytest.mark.parametrize("spec,n", [("bogus", 2), ("poset:/nonexistent.poset", 2),
                                    ("nrt:[2,2]", 3), ("rank:[2]", 4), ("profile:(1,1)", 2)])
def test_parse_errors(spec, n):
    with pytest.raises(SpecError):
        parse_weight(spec, build_ring("gf:2"), n)


def test_rankext_of_one_and_omega():
    from froblab.weights import wt_rank_ext
    R = build_ring("gf:2^4")
    w = R.index_of("w")
    assert wt_rank_ext(R, [R.one, w]) == 2
    assert wt_rank_ext(R, [w, w]) == 1
    assert wt_rank_ext(R, [R.zero, R.zero]) == 0
