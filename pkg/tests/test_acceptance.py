"""The ten acceptance criteria, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
"""

import time

import numpy as np

from froblab.actions import (block_lower_triangular_group, build_group, f3_upper_group,
                             orbit_partition, upper_unipotent_unit_group, verify_orbit_duality)
from froblab.characters import find_generating_character, generating_characters, is_generating
from froblab.extension import (LinearMap, code_closure, enumerate_codes, extension_oracle,
                               extension_property, extension_search, linear_maps,
                               local_global_scan, preserves_weight)
from froblab.errors import IllDefinedMapError
from froblab.linalg import free_module, gl_array, vec_mat
from froblab.partitions import chi_dual, hamming_partition
from froblab.posets import enumerate_posets, is_hierarchical, nonhier_counterexample
from froblab.ring import build_ring, cached_ring
from froblab.scenarios import M1, M2, run_named_scenario
from froblab.weights import PosetWeight, check_homogeneous_axioms, homogeneous_table, parse_weight


def test_1_orbit_counts(criterion):
    with criterion(1, "f2xyq orbits: 17 right / 20 left (nonzero vectors), < 1 s"):
        t0 = time.perf_counter()
        U = upper_unipotent_unit_group(build_ring("f2xyq"))
        right = orbit_partition(U, "right")
        left = orbit_partition(U, "left")
        elapsed = time.perf_counter() - t0
        # the zero vector is a fixed point; the counts refer to the nonzero orbits
        assert (len(right), len(left)) == (18, 21)
        assert (len(right) - 1, len(left) - 1) == (17, 20)
        assert elapsed < 1.0


FROBENIUS = ["zn:%d" % n for n in range(2, 17)] + ["gf:2", "gf:3", "gf:4", "gf:8", "gf:9",
                                                    "gf:16", "mat:2:(gf:2)", "prod:(zn:2,zn:3)"]


def test_2_frobenius_detection(criterion):
    with criterion(2, "Frobenius detection with generating characters; f2xyq not Frobenius"):
        for spec in FROBENIUS:
            chi = find_generating_character(build_ring(spec))
            assert chi is not None, spec
            assert is_generating(chi), spec
        assert find_generating_character(build_ring("f2xyq")) is None


def test_3_hamming_self_duality(criterion):
    with criterion(3, "Hamming partition is left and right self-dual over Z4, F4 (n <= 2)"):
        for spec in ("zn:4", "gf:4"):
            R = build_ring(spec)
            for n in (1, 2):
                P = hamming_partition(R, n)
                chars = generating_characters(R)
                assert chars
                for chi in chars:
                    assert chi_dual(P, chi, "left", n) == P
                    assert chi_dual(P, chi, "right", n) == P


def test_4_orbit_duality(criterion):
    with criterion(4, "orbit duality and reflexivity for Z4 (GL, Mon, LT, Diag) and the F3 group"):
        t0 = time.perf_counter()
        Z4 = build_ring("zn:4")
        chi = find_generating_character(Z4)
        for spec in ("gl", "mon", "lt", "diag"):
            rep = verify_orbit_duality(build_group(Z4, 2, spec), chi)
            assert rep.holds, (spec, rep)
        F3 = build_ring("gf:3")
        rep = verify_orbit_duality(f3_upper_group(F3), find_generating_character(F3))
        assert rep.holds
        assert time.perf_counter() - t0 < 30


COUNTEREXAMPLES = ["e_f3", "e_gl_nonfrob", "e_nonfrob_hamming", "e_nrt", "e_rt_symm",
                   "e_poset_nonext", "e_rank_matrix", "e_rank_field"]


def test_5_counterexample_suite(criterion):
    with criterion(5, "eight counterexample scenarios reproduce their verdicts"):
        for name in COUNTEREXAMPLES:
            rep = run_named_scenario(name)
            assert rep.passed, (name, rep.failed_checks())
            if "extensions" in rep.counts:
                assert rep.counts["extensions"] == 0, name
            if name == "e_rank_matrix":
                assert rep.runtime_ms < 60_000


def test_6_exactly_two_extensions(criterion):
    with criterion(6, "H(4;2,2) map has exactly the two extensions M1, M2"):
        rep = run_named_scenario("e_hier_two_ext")
        assert rep.passed
        assert sorted(rep.witnesses["extensions"]) == sorted([M1, M2])


def test_7_positive_scans(criterion):
    with criterion(7, "local-global scans pass for LT, Diag, GL, Mon_U over Z4, Mon over F3, L over F2"):
        t0 = time.perf_counter()
        Z4 = build_ring("zn:4")
        for spec in ("lt", "diag", "gl", "mon:1", "mon:all"):
            rep = local_global_scan(Z4, 2, build_group(Z4, 2, spec), max_code_size=64)
            assert rep.holds, (spec, rep.describe())
            assert rep.local_maps > 0
        F3 = build_ring("gf:3")
        assert local_global_scan(F3, 2, build_group(F3, 2, "mon"), max_code_size=64).holds
        F2 = build_ring("gf:2")
        L = block_lower_triangular_group(F2, [2, 2], "mon")
        rep = local_global_scan(F2, 4, L, max_code_generators=4, max_code_size=64)
        assert rep.holds and rep.codes_checked == 66
        assert time.perf_counter() - t0 < 600


def test_8_hierarchical_dichotomy(criterion):
    with criterion(8, "poset dichotomy over F2 for all posets with n <= 4"):
        t0 = time.perf_counter()
        F2 = build_ring("gf:2")
        counts = [len(enumerate_posets(n)) for n in range(1, 5)]
        assert counts == [1, 2, 5, 16]
        for n in range(1, 5):
            for P in enumerate_posets(n):
                hier = is_hierarchical(P)
                rep = extension_property(PosetWeight(F2, P), max_code_size=16,
                                         stop_at_first=not hier)
                assert rep.holds == hier, P
                if not hier:
                    cx = nonhier_counterexample(P, F2)
                    assert cx.extension_count == 0
        assert time.perf_counter() - t0 < 900


def test_9_homogeneous_weight(criterion):
    with criterion(9, "homogeneous weight axioms; omega-preserving iff Hamming-preserving on Z4^2"):
        for spec in ("zn:4", "gf:2", "gf:3", "gf:4", "gf:5", "gf:7", "gf:8", "gf:9"):
            R = build_ring(spec)
            assert check_homogeneous_axioms(R, homogeneous_table(R)) is None, spec
        Z4 = build_ring("zn:4")
        ham, hom = parse_weight("hamming", Z4, 2), parse_weight("homog", Z4, 2)
        maps = 0
        for code in enumerate_codes(Z4, 2, 2, 16):
            for f in linear_maps(code):
                maps += 1
                assert bool(preserves_weight(f, ham)) == bool(preserves_weight(f, hom))
        assert maps > 0


SMALL_RINGS = ["zn:2", "zn:3", "zn:4", "zn:5", "zn:6", "zn:7", "zn:8", "gf:4", "gf:8",
               "f2xyq", "prod:(zn:2,zn:2)"]
WEIGHTS_N1 = ["hamming", "rt", "support", "comp:all", "rightideal", "homog"]
WEIGHTS_N2 = WEIGHTS_N1 + ["symprofile:(1,1;hamming)", "comp:1"]


def _random_scenario(seed):
    rng = np.random.default_rng(seed)
    while True:
        R = cached_ring(SMALL_RINGS[rng.integers(len(SMALL_RINGS))])
        n = int(rng.integers(1, 3))
        pool = WEIGHTS_N1 if n == 1 else WEIGHTS_N2
        wspec = pool[rng.integers(len(pool))]
        if wspec == "homog" and find_generating_character(R) is None:
            continue
        V = free_module(R, n)
        k = int(rng.integers(1, n + 1))
        gens = V.vectors[rng.integers(1, V.size, size=k)]
        if rng.random() < 0.6:
            G = gl_array(R, n)
            images = vec_mat(R, gens, G[rng.integers(len(G))])
        else:
            images = V.vectors[rng.integers(0, V.size, size=k)]
        try:
            f = LinearMap(code_closure(R, n, gens), images)
        except IllDefinedMapError:
            continue
        return R, n, wspec, f


def test_10_oracle_cross_check(criterion):
    with criterion(10, "extension_search equals the GL brute-force oracle on 25 seeded scenarios"):
        nonempty = 0
        for seed in range(25):
            R, n, wspec, f = _random_scenario(seed)
            w = parse_weight(wspec, R, n)
            key = lambda Ms: sorted(tuple(np.asarray(M).ravel().tolist()) for M in Ms)
            got = key(extension_search(f, weight=w))
            assert got == key(extension_search(f, weight=w, method="columns")), seed
            assert got == key(extension_oracle(f, w)), (seed, R.name, n, wspec)
            nonempty += bool(got)
        # the seeds exercise both outcomes
        assert 0 < nonempty < 25
