"""Codes, linear maps on codes, local/global U-maps and extension searches."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .actions import orbit_partition
from .config import check_budget, enumeration_budget
from .errors import BudgetExceeded, IllDefinedMapError, InconsistencyError, SpecError
from .linalg import dot, free_module, gl_array, search_matrices, vec_mat


# ---------------------------------------------------------------- codes

class Code:
    """A left submodule of R^n, enumerated as sorted vector ranks."""

    def __init__(self, ring, n, generators, elements):
        self.ring = ring
        self.n = n
        self.V = free_module(ring, n)
        self.generators = np.asarray(generators, dtype=np.intp).reshape(-1, n)
        self.elements = np.asarray(elements, dtype=np.intp)
        self.elements.setflags(write=False)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        gens = ", ".join(self.V.label(g) for g in self.generators)
        return f"Code(<{gens}>, size={len(self)})"

    @cached_property
    def key(self):
        return tuple(int(r) for r in self.elements)

    @cached_property
    def mask(self):
        m = np.zeros(self.V.size, dtype=bool)
        m[self.elements] = True
        return m

    def __contains__(self, x):
        return bool(self.mask[self.V.rank(x)])

    def vectors(self):
        return self.V.vectors[self.elements]

    def labels(self):
        return [self.V.label(v) for v in self.vectors()]

    def to_json(self):
        return {"n": self.n, "generators": self.generators.tolist(),
                "elements": [list(map(int, v)) for v in self.vectors()]}


def _combinations(ring, vectors, budget=None):
    """All left combinations sum_i c_i v_i; returns (coefficients, results)."""
    k = len(vectors)
    check_budget("code closure", ring.size**k, budget)
    C = free_module(ring, k).vectors if k else np.zeros((1, 0), dtype=np.intp)
    n = vectors.shape[1] if k else 0
    acc = np.full((len(C), n), ring.zero, dtype=np.intp)
    for i in range(k):
        acc = ring.add_table[acc, ring.mul_table[C[:, i, None], vectors[i][None, :]]]
    return C, acc


def code_closure(ring, n, generators, budget=None):
    gens = np.asarray(generators, dtype=np.intp).reshape(-1, n)
    V = free_module(ring, n)
    if len(gens) == 0:
        return Code(ring, n, gens, np.array([V.zero_rank]))
    _, X = _combinations(ring, gens, budget)
    return Code(ring, n, gens, np.unique(X @ V.powers))


# ---------------------------------------------------------------- linear maps

class LinearMap:
    """The linear map on ``domain`` sending its i-th generator to ``images[i]``.

    The full table is built from all generator combinations; two combinations
    naming the same codeword with different images raise IllDefinedMapError.
    """

    def __init__(self, domain, images, validate=True):
        ring, n = domain.ring, domain.n
        self.domain = domain
        self.ring = ring
        self.n = n
        self.images = np.asarray(images, dtype=np.intp).reshape(len(domain.generators), n)
        V = domain.V
        if len(domain.generators):
            C, X = _combinations(ring, domain.generators)
            _, Y = _combinations(ring, self.images)
            src, dst = X @ V.powers, Y @ V.powers
        else:
            src = dst = np.array([V.zero_rank])
        table = np.full(V.size, -1, dtype=np.intp)
        table[src] = dst
        bad = table[src] != dst
        if bad.any():
            i = int(np.argmax(bad))
            raise IllDefinedMapError(V.vector(src[i]), V.vector(table[src[i]]), V.vector(dst[i]))
        self.table = table
        self.table.setflags(write=False)
        self.image_ranks = table[domain.elements]
        if validate:
            self.check_linear()

    def __call__(self, x):
        V = self.domain.V
        r = int(self.table[V.rank(x)])
        if r < 0:
            raise ValueError(f"{V.label(x)} is not in the domain")
        return V.vector(r)

    def __repr__(self):
        V = self.domain.V
        pairs = ", ".join(f"{V.label(g)}->{V.label(y)}"
                          for g, y in zip(self.domain.generators, self.images))
        return f"LinearMap({pairs})"

    def check_linear(self):
        """f(x + y) = f(x) + f(y) and f(r x) = r f(x) over the whole domain."""
        ring, V = self.ring, self.domain.V
        X = V.vectors[self.domain.elements]
        Y = V.vectors[self.image_ranks]
        sums = ring.add_table[X[:, None, :], X[None, :, :]] @ V.powers
        img_sums = ring.add_table[Y[:, None, :], Y[None, :, :]] @ V.powers
        if not np.array_equal(self.table[sums], img_sums):
            raise InconsistencyError("map is not additive")
        s = np.arange(ring.size)
        scaled = ring.mul_table[s[:, None, None], X[None, :, :]] @ V.powers
        img_scaled = ring.mul_table[s[:, None, None], Y[None, :, :]] @ V.powers
        if not np.array_equal(self.table[scaled], img_scaled):
            raise InconsistencyError("map does not commute with scalars")
        return True

    @property
    def is_injective(self):
        return len(np.unique(self.image_ranks)) == len(self.image_ranks)

    @cached_property
    def image(self):
        return code_closure(self.ring, self.n, self.images)

    def inverse(self):
        if not self.is_injective:
            raise ValueError("map is not injective")
        return LinearMap(self.image, self.domain.generators)

    def to_json(self):
        return {"generators": self.domain.generators.tolist(), "images": self.images.tolist()}


def linear_map(ring, n, generators, images, validate=True):
    return LinearMap(code_closure(ring, n, generators), images, validate)


def map_from_matrix(code, M):
    return LinearMap(code, vec_mat(code.ring, code.generators, np.asarray(M)))


# ---------------------------------------------------------------- local / global

@dataclass
class LocalCheck:
    """``witnesses[x_rank]`` is the index in U of a matrix with f(x) = x M."""

    local: bool
    witnesses: dict = field(default_factory=dict)
    failure: tuple | None = None

    def __bool__(self):
        return self.local


@dataclass
class GlobalCheck:
    is_global: bool
    witness: np.ndarray | None = None
    matrices_checked: int = 0

    def __bool__(self):
        return self.is_global


def is_local_u_map(f, U):
    """Every codeword x (in rank order) needs its own M_x in U with f(x) = x M_x."""
    imgs = U.right_images[:, f.domain.elements]
    hits = imgs == f.image_ranks[None, :]
    ok = hits.any(axis=0)
    V = f.domain.V
    if not ok.all():
        i = int(np.argmin(ok))
        return LocalCheck(False, {}, V.vector(f.domain.elements[i]))
    first = hits.argmax(axis=0)
    return LocalCheck(True, {int(x): int(g) for x, g in zip(f.domain.elements, first)})


def is_global_u_map(f, U):
    """A single M in U with f(x) = x M on every codeword; the first in U's order."""
    ok = (U.right_images[:, f.domain.elements] == f.image_ranks[None, :]).all(axis=1)
    if ok.any():
        return GlobalCheck(True, U.elements[int(np.argmax(ok))], U.order)
    return GlobalCheck(False, None, U.order)


@dataclass
class WeightCheck:
    preserves: bool
    failure: tuple | None = None

    def __bool__(self):
        return self.preserves


def preserves_weight(f, w):
    cls = w.classes
    ok = cls[f.domain.elements] == cls[f.image_ranks]
    if ok.all():
        return WeightCheck(True)
    i = int(np.argmin(ok))
    return WeightCheck(False, f.domain.V.vector(f.domain.elements[i]))


# ---------------------------------------------------------------- extension search

def _generator_constraints(f):
    V = f.domain.V
    return [(g, int(V.rank(y))) for g, y in zip(f.domain.generators, f.images)]


def _filter_matrices(ring, n, mats, classes=None):
    """Keep the matrices whose action on R^n is bijective (and class preserving)."""
    V = free_module(ring, n)
    keep = []
    for start in range(0, len(mats), 1024):
        blk = mats[start:start + 1024]
        ranks = vec_mat(ring, V.vectors[None], blk[:, None]) @ V.powers
        bij = (np.sort(ranks, axis=1) == np.arange(V.size)[None]).all(axis=1)
        if classes is not None:
            bij &= (classes[ranks] == classes[None, :]).all(axis=1)
        keep.extend(blk[bij])
    return keep


def _sorted_list(mats, n):
    if not len(mats):
        return []
    arr = np.asarray(mats, dtype=np.intp).reshape(-1, n * n)
    order = np.lexsort(arr.T[::-1])
    return [arr[i].reshape(n, n) for i in order]


def extension_search(f, weight=None, group=None, method="rows", budget=None, stats=None):
    """All invertible M with xM = f(x) on the generators, preserving ``weight``
    on all of R^n (or lying in ``group``), in lexicographic order.

    ``method="rows"`` fixes M row by row and prunes on partial images;
    ``method="columns"`` solves each column's system over all of R^n and
    filters the product of the solution sets.
    """
    if (weight is None) == (group is None):
        raise SpecError("give exactly one of weight or group")
    ring, n = f.ring, f.n
    stats = {} if stats is None else stats
    if group is not None:
        ok = (group.right_images[:, f.domain.elements] == f.image_ranks[None, :]).all(axis=1)
        stats["candidates"] = group.order
        return [M for M in group.elements[ok]]
    if weight.n != n or weight.ring is not ring:
        raise SpecError("weight does not live on the map's ambient space")
    classes = weight.classes
    if method == "rows":
        out = [M for M, _ in search_matrices(ring, n, classes=classes,
                                             constraints=_generator_constraints(f),
                                             budget=budget, stats=stats)]
        return out
    if method == "columns":
        V = free_module(ring, n)
        G = f.domain.generators
        cols = []
        for j in range(n):
            if len(G):
                vals = dot(ring, G[None, :, :], V.vectors[:, None, :])
                ok = (vals == f.images[None, :, j]).all(axis=1)
            else:
                ok = np.ones(V.size, dtype=bool)
            cols.append(V.vectors[ok])
        total = int(np.prod([len(c) for c in cols], dtype=object))
        stats["column_solutions"] = [len(c) for c in cols]
        stats["candidates"] = total
        check_budget("column product", total, budget)
        if total == 0:
            return []
        kept = []
        chunk = []
        for combo in itertools.product(*cols):
            chunk.append(np.stack(combo, axis=1))
            if len(chunk) == 4096:
                kept.extend(_filter_matrices(ring, n, np.array(chunk), classes))
                chunk = []
        if chunk:
            kept.extend(_filter_matrices(ring, n, np.array(chunk), classes))
        return _sorted_list(kept, n)
    raise SpecError(f"unknown extension method {method!r}")


def extension_oracle(f, weight, budget=None):
    """Brute force: filter GL(n, R) by agreement on the generators and by weight."""
    G = gl_array(f.ring, f.n, budget)
    if len(G) == 0:
        return []
    V = f.domain.V
    ranks = vec_mat(f.ring, V.vectors[None], G[:, None]) @ V.powers
    ok = (ranks[:, f.domain.elements] == f.image_ranks[None, :]).all(axis=1)
    ok &= (weight.classes[ranks] == weight.classes[None, :]).all(axis=1)
    return [M for M in G[ok]]


# ---------------------------------------------------------------- local-global scans

def enumerate_codes(ring, n, max_code_generators=2, max_code_size=64, budget=None):
    """Distinct codes with at most k generators, smallest generator tuple kept.

    Generator tuples run over nonzero vectors in increasing rank; a code is
    keyed by its sorted element ranks.
    """
    V = free_module(ring, n)
    nonzero = [r for r in range(V.size) if r != V.zero_rank]
    seen = {}
    count = 0
    limit = enumeration_budget(budget)
    for k in range(1, max_code_generators + 1):
        for tup in itertools.combinations(nonzero, k):
            count += 1
            if count > limit:
                raise BudgetExceeded("code enumeration", count, limit)
            code = code_closure(ring, n, V.vectors[list(tup)])
            if len(code) <= max_code_size and code.key not in seen:
                seen[code.key] = code
    return [seen[k] for k in sorted(seen)]


@dataclass
class LocalGlobalReport:
    holds: bool
    codes_checked: int
    maps_checked: int
    local_maps: int
    counterexample: tuple | None = None  # (code, map, local witnesses)
    stats: dict = field(default_factory=dict)

    def describe(self):
        if self.holds:
            return (f"local-global holds within limits: {self.codes_checked} codes, "
                    f"{self.local_maps} local maps, all global")
        code, f, _ = self.counterexample
        return f"counterexample: {code} with {f} is local but not global"


def _scan_code(code, U, orbit_of, orbits):
    """Every local U-map on ``code``: (maps tried, local maps, first non-global map)."""
    gens = code.generators
    V = code.V
    g_ranks = [int(V.rank(g)) for g in gens]
    choices = [orbits[orbit_of[r]] for r in g_ranks]
    tried = local = 0
    for combo in itertools.product(*choices):
        tried += 1
        try:
            f = LinearMap(code, V.vectors[list(combo)], validate=False)
        except IllDefinedMapError:
            continue
        if not (orbit_of[f.image_ranks] == orbit_of[code.elements]).all():
            continue
        local += 1
        f.check_linear()
        if not f.is_injective:
            raise InconsistencyError(f"local map {f} is not injective")
        finv = f.inverse()
        if not (orbit_of[finv.image_ranks] == orbit_of[finv.domain.elements]).all():
            raise InconsistencyError(f"inverse of local map {f} is not local")
        if not is_global_u_map(f, U):
            return tried, local, f
    return tried, local, None


def local_global_scan(ring, n, U, max_code_generators=2, max_code_size=64, threads=1,
                      stop_at_first=True, budget=None):
    """Check that every local U-map on every small code is a global U-map.

    Codes come from ``enumerate_codes``.  On each code the generators are sent
    into their own U-orbits in every combination; assignments that define a
    linear map local at every codeword are then tested for a global witness.
    """
    codes = enumerate_codes(ring, n, max_code_generators, max_code_size, budget)
    P = orbit_partition(U, "right")
    orbit_of = P.block_of
    orbits = [np.asarray(b, dtype=np.intp) for b in P.blocks()]

    def work(code):
        return _scan_code(code, U, orbit_of, orbits)

    maps = local = checked = 0
    counter = None
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, codes))
    else:
        results = (work(c) for c in codes)
    for code, (tried, loc, bad) in zip(codes, results):
        checked += 1
        maps += tried
        local += loc
        if bad is not None and counter is None:
            counter = (code, bad, is_local_u_map(bad, U).witnesses)
            if stop_at_first:
                break
    return LocalGlobalReport(counter is None, checked, maps, local, counter,
                             {"codes": len(codes), "orbits": len(P)})


# ---------------------------------------------------------------- map enumeration

def linear_maps(code, candidates=None, injective=False):
    """Every well-defined linear map on ``code`` with the i-th generator sent into
    ``candidates[i]`` (all of R^n by default)."""
    V = code.V
    if candidates is None:
        candidates = [np.arange(V.size)] * len(code.generators)
    for combo in itertools.product(*candidates):
        try:
            f = LinearMap(code, V.vectors[list(combo)], validate=False)
        except IllDefinedMapError:
            continue
        if injective and not f.is_injective:
            continue
        yield f


def weight_preserving_maps(code, w):
    """Linear maps on ``code`` preserving ``w`` at every codeword (injective ones only)."""
    cls = w.classes
    V = code.V
    cands = [np.nonzero(cls == cls[V.rank(g)])[0] for g in code.generators]
    for f in linear_maps(code, cands, injective=True):
        if (cls[f.image_ranks] == cls[code.elements]).all():
            yield f


def first_extension(f, weight, budget=None):
    """One weight-preserving invertible extension of f, or None."""
    for M, _ in search_matrices(f.ring, f.n, classes=weight.classes,
                                constraints=_generator_constraints(f), budget=budget):
        return M
    return None


def isometry_matrices(weight, budget=None):
    """All invertible matrices preserving ``weight`` on R^n, lexicographic."""
    return [M for M, _ in search_matrices(weight.ring, weight.n, classes=weight.classes,
                                          budget=budget)]


@dataclass
class ExtensionPropertyReport:
    holds: bool
    codes: int
    isometries: int
    failure: object = None


def extension_property(w, max_code_generators=None, max_code_size=16, stop_at_first=True):
    """Does every w-isometry between small codes extend to a w-isometry of R^n?"""
    k = w.n if max_code_generators is None else max_code_generators
    codes = enumerate_codes(w.ring, w.n, k, max_code_size)
    count = 0
    failure = None
    for code in codes:
        for f in weight_preserving_maps(code, w):
            count += 1
            if first_extension(f, w) is None:
                failure = failure or f
                if stop_at_first:
                    return ExtensionPropertyReport(False, len(codes), count, failure)
    return ExtensionPropertyReport(failure is None, len(codes), count, failure)
