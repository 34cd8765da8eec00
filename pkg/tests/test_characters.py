import math

import numpy as np
import pytest

from froblab.characters import (act, additive_decomposition, all_characters, cyclo_sum,
                                find_generating_character, generating_characters, is_frobenius,
                                is_generating)
from froblab.ring import build_ring


@pytest.mark.parametrize("spec", ["zn:6", "gf:4", "gf:9", "f2xyq", "mat:2:(gf:2)"])
def test_character_group_orthogonality(spec):
    R = build_ring(spec)
    dec = additive_decomposition(R)
    chars = all_characters(dec)
    assert len(chars) == R.size
    z = np.exp(2j * np.pi * np.array([c.table for c in chars]) / dec.exponent)
    assert np.allclose(z @ z.conj().T, R.size * np.eye(R.size))


@pytest.mark.parametrize("N", range(2, 17))
def test_zn_generating_count_is_euler_phi(N):
    phi = sum(math.gcd(a, N) == 1 for a in range(N))
    assert len(generating_characters(build_ring(f"zn:{N}"))) == phi


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_field_generating_characters_are_nontrivial_ones(q):
    assert len(generating_characters(build_ring(f"gf:{q}"))) == q - 1


def test_f2xyq_is_not_frobenius():
    R = build_ring("f2xyq")
    assert not is_frobenius(R)
    assert generating_characters(R) == []
    assert not any(is_generating(c) for c in all_characters(additive_decomposition(R)))


def test_action_is_a_module_action():
    R = build_ring("mat:2:(gf:2)")
    chi = find_generating_character(R)
    for r in range(0, 16, 3):
        for s in range(1, 16, 5):
            rs, sr = R.mul(r, s), R.mul(s, r)
            assert act(r, act(s, chi, "left"), "left") == act(rs, chi, "left")
            assert act(r, act(s, chi, "right"), "right") == act(sr, chi, "right")


def test_cyclotomic_sums():
    assert cyclo_sum([0, 1, 2, 3], 4).is_zero()
    assert cyclo_sum([0, 0, 2], 4).rational_value() == 1
    assert cyclo_sum([1], 4).rational_value() is None
    assert np.isclose(cyclo_sum([1, 1, 0], 3).to_complex(), 1 + 2 * np.exp(2j * np.pi / 3))
