"""Named, self-checking replays of the worked examples and desk-scale theorem checks.

Each scenario returns a ``ScenarioReport``: a verdict string, witnesses,
counts (search sizes serve as exhausted-search certificates) and the named
boolean checks it asserted.  A report passes when every check holds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .actions import (block_lower_triangular_group, block_monomial, build_group,
                      diagonal_group, f3_upper_group, gl_group, kronecker_group,
                      lower_triangular_group, monomial_group, orbit_partition,
                      special_linear_group, upper_unipotent_unit_group)
from .characters import is_frobenius
from .errors import UnknownScenarioError
from .extension import (code_closure, enumerate_codes, extension_oracle, extension_search,
                        is_global_u_map, is_local_u_map, isometry_matrices, linear_map,
                        linear_maps, local_global_scan, map_from_matrix, preserves_weight,
                        weight_preserving_maps)
from .linalg import dot, free_module
from .posets import Poset, nonhier_counterexample
from .ring import cached_ring
from .weights import parse_weight


@dataclass
class ScenarioReport:
    scenario: str
    verdict: str
    witnesses: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    runtime_ms: float = 0.0

    @property
    def passed(self):
        return all(self.checks.values())

    def failed_checks(self):
        return [k for k, v in self.checks.items() if not v]

    def to_json(self, timing=False):
        out = {"scenario": self.scenario, "passed": self.passed, "verdict": self.verdict,
               "witnesses": self.witnesses, "counts": self.counts,
               "checks": {k: bool(v) for k, v in self.checks.items()}}
        if timing:
            out["runtime_ms"] = round(self.runtime_ms, 1)
        return out


def _mat(ring, M):
    return [[ring.labels[int(v)] for v in row] for row in np.asarray(M)]


def _vec(ring, x):
    return "(" + ",".join(ring.labels[int(v)] for v in x) + ")"


def _mats(ring, Ms):
    return [_mat(ring, M) for M in Ms]


def _same_matrices(A, B):
    key = lambda Ms: sorted(tuple(np.asarray(M).ravel().tolist()) for M in Ms)
    return key(A) == key(B)


def _column_solution_counts(f):
    """For each column j, how many m in R^n satisfy g . m = f(g)_j on all generators."""
    V = f.domain.V
    vals = dot(f.ring, f.domain.generators[None, :, :], V.vectors[:, None, :])
    return [int((vals == f.images[None, :, j]).all(axis=1).sum()) for j in range(f.n)]


# ---------------------------------------------------------------- counterexamples

def e_f3():
    R = cached_ring("gf:3")
    U = f3_upper_group(R)
    A = np.array([[2, 1], [0, 1]])
    f = map_from_matrix(code_closure(R, 2, [[1, 0], [0, 1]]), A)
    listed = {(0, 1): [[1, 0], [0, 1]], (1, 0): [[2, 1], [0, 2]],
              (1, 1): [[2, 0], [0, 2]], (1, 2): [[2, 2], [0, 2]]}
    listed_ok = all(U.contains(np.array(M)) and f(x) == tuple(int(v) for v in np.array(x) @ M % 3)
                    for x, M in listed.items())
    SL = special_linear_group(R, 2)
    loc, glob = is_local_u_map(f, U), is_global_u_map(f, U)
    loc_sl, glob_sl = is_local_u_map(f, SL), is_global_u_map(f, SL)
    return ScenarioReport(
        "e_f3", "local-not-global",
        {"map": _mat(R, A), "listed_local_witnesses": {_vec(R, x): _mat(R, M)
                                                       for x, M in listed.items()}},
        {"group_order": U.order, "sl_order": SL.order, "codewords": len(f.domain)},
        {"listed_witnesses_valid": listed_ok, "local": loc.local, "not_global": not glob,
         "sl_local": loc_sl.local, "sl_not_global": not glob_sl})


def e_gl_nonfrob():
    R = cached_ring("f2xyq")
    x, y, xy = (R.index_of(t) for t in ("x", "y", "x+y"))
    f = linear_map(R, 2, [[x, y], [y, xy]], [[x, xy], [xy, y]])
    G = gl_group(R, 2)
    SL = special_linear_group(R, 2)
    cols = _column_solution_counts(f)
    loc, glob = is_local_u_map(f, G), is_global_u_map(f, G)
    expected_code = {(0, 0), (x, y), (y, xy), (xy, x)}
    return ScenarioReport(
        "e_gl_nonfrob", "local-not-global",
        {"code": f.domain.labels(), "images": [_vec(R, v) for v in f.images],
         "third_codeword_image": _vec(R, f((xy, x)))},
        {"gl_order": G.order, "sl_order": SL.order, "column_solutions": cols,
         "linear_extensions": int(np.prod(cols))},
        {"ring_not_frobenius": not is_frobenius(R),
         "code_matches": {tuple(map(int, v)) for v in f.domain.vectors()} == expected_code,
         "local": loc.local, "not_global": not glob,
         "no_linear_extension": int(np.prod(cols)) == 0,
         "sl_local": is_local_u_map(f, SL).local, "sl_not_global": not is_global_u_map(f, SL)})


def e_nonfrob_hamming():
    R = cached_ring("f2xyq")
    x, y = R.index_of("x"), R.index_of("y")
    f = linear_map(R, 1, [[x]], [[y]])
    units_group = diagonal_group(R, 1)
    w = parse_weight("hamming", R, 1)
    ext = extension_search(f, weight=w)
    mon = extension_search(f, group=monomial_group(R, 1))
    return ScenarioReport(
        "e_nonfrob_hamming", "not-local",
        {"map": "x -> y", "failing_codeword": _vec(R, is_local_u_map(f, units_group).failure)},
        {"units": units_group.order, "hamming_extensions": len(ext), "monomial_extensions": len(mon)},
        {"hamming_preserving": preserves_weight(f, w).preserves,
         "not_local": not is_local_u_map(f, units_group), "injective": f.is_injective,
         "no_extension": not ext and not mon})


def e_rank_matrix():
    R = cached_ring("gf:2")
    w = parse_weight("ranklist:[2,3]", R, 6)
    # vec(A | 0) for the 2x3 matrix rows; E01 <-> E10 realizes A -> A^T
    e = np.eye(6, dtype=np.intp)
    gens = e[[0, 1, 3, 4]]
    f = linear_map(R, 6, gens, e[[0, 3, 1, 4]])
    G = kronecker_group(gl_group(R, 2), gl_group(R, 3), transpose_first=True)
    rows, cols = {}, {}
    ext_rows = extension_search(f, weight=w, stats=rows)
    ext_cols = extension_search(f, weight=w, method="columns", stats=cols)
    iso = isometry_matrices(w)
    return ScenarioReport(
        "e_rank_matrix", "extension count 0",
        {"images": {"E00": "E00", "E01": "E10", "E10": "E01", "E11": "E11"}},
        {"extensions": len(ext_rows), "row_search_nodes": rows.get("nodes", 0),
         "column_candidates": cols.get("candidates", 0), "rank_isometries": len(iso),
         "kronecker_group_order": G.order},
        {"rank_preserving": preserves_weight(f, w).preserves,
         "no_extension_rows": not ext_rows, "no_extension_columns": not ext_cols,
         "isometries_are_kronecker_group": _same_matrices(iso, G.elements),
         "local_for_kronecker_group": is_local_u_map(f, G).local,
         "not_global_for_kronecker_group": not is_global_u_map(f, G)})


def e_rank_field():
    R = cached_ring("gf:2^4:[1,1,0,0,1]")
    w_ = R.index_of("w")
    w5 = w_
    for _ in range(4):
        w5 = int(R.mul_table[w5, w_])
    w = parse_weight("rankext", R, 2)
    f = linear_map(R, 2, [[R.one, w_]], [[R.one, w5]])
    stats = {}
    ext = extension_search(f, weight=w, stats=stats)
    rank_one = int((np.asarray(w.values) == 1).sum())
    return ScenarioReport(
        "e_rank_field", "extension count 0",
        {"omega^5": R.labels[w5], "map": f"(1,w) -> (1,{R.labels[w5]})"},
        {"extensions": len(ext), "row_search_nodes": stats.get("nodes", 0),
         "rank_one_vectors": rank_one},
        {"rank_preserving": preserves_weight(f, w).preserves, "no_extension": not ext,
         "omega5_value": R.labels[w5] == "w^2+w"})


def e_nrt():
    R = cached_ring("gf:2")
    w = parse_weight("nrt:[2,2]", R, 4)
    f = linear_map(R, 4, [[1, 0, 1, 0]], [[0, 0, 0, 1]])
    stats = {}
    ext = extension_search(f, weight=w, stats=stats)
    return ScenarioReport(
        "e_nrt", "extension count 0",
        {"code": f.domain.labels(), "image": f.image.labels()},
        {"extensions": len(ext), "row_search_nodes": stats.get("nodes", 0),
         "nrt_isometries": len(isometry_matrices(w))},
        {"nrt_preserving": preserves_weight(f, w).preserves, "no_extension": not ext})


def e_rt_symm():
    R = cached_ring("gf:2")
    G1 = [[1, 0, 0, 0, 0, 1, 0, 0], [0, 0, 1, 0, 0, 0, 0, 1]]
    G2 = [[0, 1, 0, 0, 1, 0, 0, 0], [0, 0, 1, 0, 0, 0, 0, 1]]
    f = linear_map(R, 8, G1, G2)
    w = parse_weight("symprofile:(4,4;rt)", R, 8)
    nrt = parse_weight("nrt:[2,4]", R, 8)
    U = block_monomial(lower_triangular_group(R, 4), 2)
    s1, s2 = {}, {}
    ext = extension_search(f, weight=w, stats=s1)
    ext_nrt = extension_search(f, weight=nrt, stats=s2)
    iso = isometry_matrices(w)
    return ScenarioReport(
        "e_rt_symm", "extension count 0",
        {"G1": G1, "G2": G2},
        {"extensions": len(ext), "nrt_extensions": len(ext_nrt),
         "row_search_nodes": s1.get("nodes", 0), "nrt_row_search_nodes": s2.get("nodes", 0),
         "group_order": U.order, "weight_isometries": len(iso)},
        {"weight_preserving": preserves_weight(f, w).preserves,
         "local": is_local_u_map(f, U).local, "not_global": not is_global_u_map(f, U),
         "no_extension": not ext, "no_nrt_extension": not ext_nrt,
         "isometries_are_block_monomial": _same_matrices(iso, U.elements)})


def e_poset_nonext():
    R = cached_ring("gf:2")
    P = Poset.parse("n=4; 1<2; 3<4")
    w = parse_weight("poset:n=4; 1<2; 3<4", R, 4)
    f = linear_map(R, 4, [[1, 0, 1, 0]], [[0, 0, 0, 1]])
    stats = {}
    ext = extension_search(f, weight=w, stats=stats)
    cx = nonhier_counterexample(P, R)
    return ScenarioReport(
        "e_poset_nonext", "extension count 0",
        {"code": f.domain.labels(), "image": f.image.labels(),
         "construction": cx.witness.describe()},
        {"extensions": len(ext), "row_search_nodes": stats.get("nodes", 0),
         "weight": int(w((1, 0, 1, 0)))},
        {"weights_equal_2": w((1, 0, 1, 0)) == w((0, 0, 0, 1)) == 2,
         "isometry": preserves_weight(f, w).preserves, "no_extension": not ext,
         "construction_reproduces_codes": cx.code.key == f.domain.key
         and cx.image_code.key == f.image.key})


M1 = [[0, 1, 0, 0], [1, 0, 0, 0], [1, 0, 1, 0], [1, 1, 0, 1]]
M2 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [1, 1, 0, 1]]


def e_hier_two_ext():
    R = cached_ring("gf:2")
    w = parse_weight("poset:n=4; 1<3; 1<4; 2<3; 2<4", R, 4)
    f = linear_map(R, 4, [[1, 0, 1, 0], [0, 1, 1, 1]], [[1, 1, 1, 0], [1, 1, 1, 1]])
    listed = [(1, 1, 0, 1), (0, 0, 0, 1)]
    ext = extension_search(f, weight=w)
    cols = extension_search(f, weight=w, method="columns")
    oracle = extension_oracle(f, w)
    got = [M.tolist() for M in ext]
    return ScenarioReport(
        "e_hier_two_ext", "exactly two extensions",
        {"extensions": got},
        {"extensions": len(ext)},
        {"fourth_codeword_maps_as_listed": f(listed[0]) == listed[1],
         "weight_preserving": preserves_weight(f, w).preserves,
         "exactly_M1_M2": sorted(got) == sorted([M1, M2]),
         "columns_agree": _same_matrices(ext, cols), "oracle_agrees": _same_matrices(ext, oracle)})


# ---------------------------------------------------------------- orbit counts

def orbit_17_20():
    R = cached_ring("f2xyq")
    t0 = time.perf_counter()
    U = upper_unipotent_unit_group(R)
    right = orbit_partition(U, "right")
    left = orbit_partition(U, "left")
    elapsed = time.perf_counter() - t0
    zero = free_module(R, 2).zero_rank
    zero_alone = (right.block_sizes()[right.block_of[zero]] == 1
                  and left.block_sizes()[left.block_of[zero]] == 1)
    return ScenarioReport(
        "orbit_17_20", f"right {len(right) - 1} / left {len(left) - 1} nonzero orbits",
        {"group": "{(1 r; 0 u)}"},
        {"right": len(right) - 1, "left": len(left) - 1,
         "right_with_zero": len(right), "left_with_zero": len(left), "group_order": U.order},
        {"right_17": len(right) - 1 == 17, "left_20": len(left) - 1 == 20,
         "zero_is_own_orbit": bool(zero_alone), "under_one_second": elapsed < 1.0})


# ---------------------------------------------------------------- theorem checks

def _all_codes(ring, n, k=2, size=64):
    return enumerate_codes(ring, n, k, size)


def thm_rho_small():
    checks, counts = {}, {}
    for spec, n in (("zn:4", 2), ("zn:4", 3)):
        R = cached_ring(spec)
        w = parse_weight("rt", R, n)
        LT = lower_triangular_group(R, n)
        checks[f"isometries_are_LT_{spec}_n{n}"] = _same_matrices(isometry_matrices(w), LT.elements)
        if n == 2:
            maps = bad = 0
            for code in _all_codes(R, n):
                for f in weight_preserving_maps(code, w):
                    maps += 1
                    bad += not is_global_u_map(f, LT)
            counts["rt_isometries_checked"] = maps
            checks["every_rt_isometry_global_LT"] = bad == 0
    return ScenarioReport("thm_rho_small", "RT isometries are global LT-maps", {}, counts, checks)


def thm_supp():
    checks, counts = {}, {}
    for spec in ("zn:4", "gf:4"):
        R = cached_ring(spec)
        w = parse_weight("support", R, 2)
        D = diagonal_group(R, 2)
        maps = bad = 0
        for code in _all_codes(R, 2):
            for f in weight_preserving_maps(code, w):
                maps += 1
                bad += not is_global_u_map(f, D)
        counts[f"maps_{spec}"] = maps
        checks[f"support_maps_global_diag_{spec}"] = bad == 0
        checks[f"isometries_are_diag_{spec}"] = _same_matrices(isometry_matrices(w), D.elements)
    return ScenarioReport("thm_supp", "support-preserving maps are global diagonal maps",
                          {}, counts, checks)


def thm_ideal():
    checks, counts = {}, {}
    for spec in ("zn:4", "gf:2", "gf:3"):
        R = cached_ring(spec)
        w = parse_weight("rightideal", R, 2)
        G = gl_group(R, 2)
        maps = mismatch = 0
        for code in _all_codes(R, 2):
            for f in linear_maps(code):
                maps += 1
                mismatch += bool(preserves_weight(f, w)) != bool(is_global_u_map(f, G))
        counts[f"maps_{spec}"] = maps
        checks[f"ideal_preserving_iff_global_GL_{spec}"] = mismatch == 0
    # the equivalence needs the Frobenius property: the non-Frobenius example breaks it
    R = cached_ring("f2xyq")
    x, y, xy = (R.index_of(t) for t in ("x", "y", "x+y"))
    f = linear_map(R, 2, [[x, y], [y, xy]], [[x, xy], [xy, y]])
    w = parse_weight("rightideal", R, 2)
    checks["fails_over_f2xyq"] = (preserves_weight(f, w).preserves
                                  and not is_global_u_map(f, gl_group(R, 2)))
    return ScenarioReport("thm_ideal", "right-ideal preserving iff global GL-map", {}, counts, checks)


def thm_hamming():
    checks, counts = {}, {}
    for spec in ("zn:4", "gf:4", "zn:6"):
        R = cached_ring(spec)
        w = parse_weight("hamming", R, 2)
        M = monomial_group(R, 2)
        maps = bad = 0
        for code in _all_codes(R, 2):
            for f in weight_preserving_maps(code, w):
                maps += 1
                bad += not is_global_u_map(f, M)
        counts[f"maps_{spec}"] = maps
        checks[f"hamming_maps_global_monomial_{spec}"] = bad == 0
    return ScenarioReport("thm_hamming", "Hamming isometries are global monomial maps",
                          {}, counts, checks)


def thm_homog():
    R = cached_ring("zn:4")
    ham = parse_weight("hamming", R, 2)
    hom = parse_weight("homog", R, 2)
    maps = mismatch = codes = 0
    for code in _all_codes(R, 2, 2, 16):
        codes += 1
        for f in linear_maps(code):
            maps += 1
            mismatch += bool(preserves_weight(f, ham)) != bool(preserves_weight(f, hom))
    return ScenarioReport("thm_homog", "homogeneous-preserving iff Hamming-preserving",
                          {"omega": [str(v) for v in hom.table]},
                          {"codes": codes, "maps": maps, "mismatches": mismatch},
                          {"equivalence": mismatch == 0,
                           "omega_Z4": [str(v) for v in hom.table] == ["0", "1", "2", "1"]})


def thm_monu():
    R = cached_ring("zn:4")
    checks, counts = {}, {}
    for label, U in (("U=1", (R.one,)), ("U=units", None)):
        rep = local_global_scan(R, 2, monomial_group(R, 2, U))
        counts[label] = {"codes": rep.codes_checked, "local_maps": rep.local_maps}
        checks[f"local_global_{label}"] = rep.holds
    return ScenarioReport("thm_monu", "Mon_U(2, Z4) has the local-global property",
                          {}, counts, checks)


def remark_prodweight():
    checks, counts = {}, {}
    cases = (("gf:2", "profile:(2,2;rt)", [2, 2], "lt"),
             ("zn:4", "profile:(1,2;hamming)", [1, 2], "mon"))
    for spec, wspec, blocks, kind in cases:
        R = cached_ring(spec)
        n = sum(blocks)
        w = parse_weight(wspec, R, n)
        # block diagonal group from each block's isometry group
        parts = [lower_triangular_group(R, b) if kind == "lt" else monomial_group(R, b)
                 for b in blocks]
        mats = []
        for A in parts[0].elements:
            for B in parts[1].elements:
                M = np.full((n, n), R.zero, dtype=np.intp)
                M[:blocks[0], :blocks[0]] = A
                M[blocks[0]:, blocks[0]:] = B
                mats.append(M)
        from .actions import MatrixGroup
        U = MatrixGroup(R, n, mats, name="blockdiag")
        maps = bad = 0
        for code in _all_codes(R, n, 2, 16):
            for f in weight_preserving_maps(code, w):
                maps += 1
                bad += not is_global_u_map(f, U)
        counts[f"maps_{spec}_{wspec}"] = maps
        checks[f"global_block_diagonal_{spec}_{wspec}"] = bad == 0
    return ScenarioReport("remark_prodweight", "weight-list isometries are block diagonal",
                          {}, counts, checks)


REGISTRY = {
    "e_f3": e_f3,
    "e_gl_nonfrob": e_gl_nonfrob,
    "e_nonfrob_hamming": e_nonfrob_hamming,
    "e_rank_matrix": e_rank_matrix,
    "e_rank_field": e_rank_field,
    "e_nrt": e_nrt,
    "e_rt_symm": e_rt_symm,
    "e_poset_nonext": e_poset_nonext,
    "e_hier_two_ext": e_hier_two_ext,
    "orbit_17_20": orbit_17_20,
    "thm_rho_small": thm_rho_small,
    "thm_supp": thm_supp,
    "thm_ideal": thm_ideal,
    "thm_hamming": thm_hamming,
    "thm_homog": thm_homog,
    "thm_monu": thm_monu,
    "remark_prodweight": remark_prodweight,
}


def run_named_scenario(name):
    if name not in REGISTRY:
        raise UnknownScenarioError(name)
    t0 = time.perf_counter()
    report = REGISTRY[name]()
    report.runtime_ms = (time.perf_counter() - t0) * 1000
    return report
