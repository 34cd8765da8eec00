from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from froblab.characters import find_generating_character, generating_characters
from froblab.errors import NotGeneratingError
from froblab.characters import all_characters, additive_decomposition
from froblab.linalg import free_module
from froblab.partitions import (Partition, chi_dual, find_character_dependence_witness,
                                find_left_right_witness, hamming_partition, is_reflexive,
                                set_partitions, verify_bidual_identities)
from froblab.ring import build_ring


def krawtchouk(k, i, n, q):
    return sum((-1) ** j * (q - 1) ** (k - j) * comb(i, j) * comb(n - i, k - j)
               for j in range(k + 1))


@pytest.mark.parametrize("spec,q,n", [("gf:3", 3, 2), ("gf:4", 4, 2), ("zn:5", 5, 2), ("gf:2", 2, 4)])
def test_hamming_dual_table_is_krawtchouk(spec, q, n):
    R = build_ring(spec)
    V = free_module(R, n)
    P = hamming_partition(R, n)
    Q, K = chi_dual(P, find_generating_character(R), "left", n, with_table=True)
    assert Q == P
    wt = (V.vectors != R.zero).sum(axis=1)
    col_weight = [int(wt[np.argmax(P.block_of == j)]) for j in range(len(P))]
    for row, rep in enumerate(K.row_representatives):
        i = int(wt[rep])
        for j, k in enumerate(col_weight):
            coeffs = K.entries[row, j]
            assert not coeffs[1:].any()
            assert coeffs[0] == krawtchouk(k, i, n, q)


@pytest.mark.parametrize("spec", ["zn:4", "zn:6", "gf:4", "mat:2:(gf:2)"])
def test_hamming_self_dual_every_character(spec):
    R = build_ring(spec)
    P = hamming_partition(R, 1)
    for chi in generating_characters(R):
        assert chi_dual(P, chi, "left") == P == chi_dual(P, chi, "right")


def test_non_generating_character_rejected():
    R = build_ring("zn:4")
    trivial = all_characters(additive_decomposition(R))[0]
    with pytest.raises(NotGeneratingError):
        chi_dual(hamming_partition(R, 1), trivial, "left")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["zn:4", "gf:4", "zn:6", "mat:2:(gf:2)"]), st.data())
def test_bidual_identities_random_partitions(spec, data):
    R = build_ring(spec)
    labels = data.draw(st.lists(st.integers(0, 3), min_size=R.size, max_size=R.size))
    P = Partition(labels)
    rep = verify_bidual_identities(P, find_generating_character(R), 1)
    assert rep.holds, rep
    assert is_reflexive(P, find_generating_character(R), 1) == rep.reflexive


def test_partition_algebra():
    P = Partition([0, 0, 1, 1, 2])
    Q = Partition([0, 0, 0, 1, 1])
    assert Partition([5, 5, 2, 2, 7]) == P
    assert list(P.block_sizes()) == [2, 2, 1]
    assert P.meet(Q) == Partition([0, 0, 1, 2, 3])
    assert P.meet(Q).is_finer(P) and not P.is_finer(Q)


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(range(k))) for k in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_left_and_right_duals_can_differ():
    R = build_ring("mat:2:(gf:2)")
    P, L, Rt = find_left_right_witness(R, find_generating_character(R))
    assert L != Rt
    assert chi_dual(P, find_generating_character(R), "left") == L


def test_dual_depends_on_character():
    P, c1, c2, d1, d2 = find_character_dependence_witness(build_ring("gf:4"))
    assert d1 != d2
    assert chi_dual(P, c1, "left") == d1 and chi_dual(P, c2, "left") == d2
