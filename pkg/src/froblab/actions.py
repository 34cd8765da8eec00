"""Finite matrix groups acting on R^n, subrings of R^{n x n} and constructibility."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import check_budget
from .errors import InconsistencyError, InvalidGroupError, SpecError
from .linalg import (RingMatrix, free_module, gl_array, identity, inverse_matrix, mat_mul,
                     mat_vec, vec_mat)
from .partitions import Partition, chi_dual, is_reflexive
from .ring import _side, units

# full product tables are checked up to this many products; larger groups are
# checked for closure under a generating subset instead
CLOSURE_CHECK_LIMIT = 2**22


def _keys(arr):
    """Hashable key per matrix of a (G, n, n) array."""
    arr = np.ascontiguousarray(arr, dtype=np.int16)
    flat = arr.reshape(arr.shape[0], -1)
    return [row.tobytes() for row in flat]


def _sort_mats(arr):
    arr = np.asarray(arr, dtype=np.intp)
    if len(arr) == 0:
        return arr
    flat = arr.reshape(len(arr), -1)
    order = np.lexsort(flat.T[::-1])
    flat = flat[order]
    keep = np.ones(len(flat), dtype=bool)
    keep[1:] = (flat[1:] != flat[:-1]).any(axis=1)
    return flat[keep].reshape(-1, *arr.shape[1:])


class MatrixGroup:
    """A finite subgroup of GL(n, R), stored fully enumerated in lexicographic order."""

    def __init__(self, ring, n, elements, name="U", validate=True, generators=None):
        self.ring = ring
        self.n = n
        self.name = name
        els = _sort_mats(np.asarray(elements, dtype=np.intp).reshape(-1, n, n))
        els.setflags(write=False)
        self.elements = els
        self.order = len(els)
        self.generators = None if generators is None else [np.asarray(g) for g in generators]
        if validate:
            self.validate(generators)

    def __repr__(self):
        return f"MatrixGroup({self.name}, n={self.n}, order={self.order})"

    def __len__(self):
        return self.order

    @cached_property
    def key_index(self):
        return {k: i for i, k in enumerate(_keys(self.elements))}

    def contains(self, M):
        return _keys(np.asarray(M)[None])[0] in self.key_index

    def validate(self, generators=None):
        ring, n = self.ring, self.n
        if self.order == 0 or not self.contains(identity(ring, n)):
            raise InvalidGroupError(f"{self.name}: identity missing")
        els = self.elements
        if self.order**2 <= CLOSURE_CHECK_LIMIT:
            right = els
        else:
            right = els if generators is None else np.asarray(generators).reshape(-1, n, n)
            if len(right) * self.order > CLOSURE_CHECK_LIMIT:
                raise InvalidGroupError(f"{self.name}: too large to validate "
                                        f"({self.order} elements, {len(right)} multipliers)")
        idx = self.key_index
        for start in range(0, self.order, max(1, CLOSURE_CHECK_LIMIT // (4 * len(right)))):
            block = els[start:start + max(1, CLOSURE_CHECK_LIMIT // (4 * len(right)))]
            prods = mat_mul(ring, block[:, None], right[None, :]).reshape(-1, n, n)
            for k in _keys(prods):
                if k not in idx:
                    raise InvalidGroupError(f"{self.name}: not closed under multiplication")
        # a closed finite set of invertible matrices contains all inverses (as powers)
        V = free_module(ring, n)
        for start in range(0, self.order, 4096):
            imgs = vec_mat(ring, V.vectors[None], els[start:start + 4096][:, None]) @ V.powers
            srt = np.sort(imgs, axis=1)
            if not (srt == np.arange(V.size)[None]).all():
                raise InvalidGroupError(f"{self.name}: contains a non-invertible matrix")

    @cached_property
    def right_images(self):
        """right_images[g, rank(x)] = rank(x U_g)."""
        V = free_module(self.ring, self.n)
        out = np.empty((self.order, V.size), dtype=np.intp)
        for start in range(0, self.order, 1024):
            blk = self.elements[start:start + 1024]
            out[start:start + len(blk)] = vec_mat(self.ring, V.vectors[None], blk[:, None]) @ V.powers
        out.setflags(write=False)
        return out

    @cached_property
    def left_images(self):
        """left_images[g, rank(x)] = rank((U_g x^T)^T)."""
        V = free_module(self.ring, self.n)
        out = np.empty((self.order, V.size), dtype=np.intp)
        for start in range(0, self.order, 1024):
            blk = self.elements[start:start + 1024]
            out[start:start + len(blk)] = mat_vec(self.ring, blk[:, None], V.vectors[None]) @ V.powers
        out.setflags(write=False)
        return out

    def images(self, side):
        return self.right_images if _side(side) == "right" else self.left_images

    def matrices(self):
        return [RingMatrix.from_array(self.ring, M) for M in self.elements]

    def transpose(self):
        return MatrixGroup(self.ring, self.n, np.swapaxes(self.elements, 1, 2),
                           name=f"{self.name}^T", validate=False)

    def to_json(self, ring_spec=None):
        return {"ring_spec": ring_spec or getattr(self.ring, "spec", self.ring.name),
                "n": self.n, "elements": self.elements.reshape(self.order, -1).tolist()}


# ---------------------------------------------------------------- constructors

def group_from_generators(ring, n, gens, name="<gens>", budget=None):
    """Closure of a set of invertible matrices under multiplication."""
    gens = [np.asarray(g, dtype=np.intp).reshape(n, n) for g in gens]
    for g in gens:
        if inverse_matrix(ring, g) is None:
            raise InvalidGroupError(f"generator {g.tolist()} is not invertible")
    eye = identity(ring, n)
    found = {_keys(eye[None])[0]: eye}
    frontier = [eye]
    limit = budget
    while frontier:
        F = np.array(frontier)
        nxt = []
        for g in gens:
            prods = mat_mul(ring, F, g[None])
            for k, P in zip(_keys(prods), prods):
                if k not in found:
                    found[k] = P
                    nxt.append(P)
        check_budget(f"closure of {name}", len(found), limit)
        frontier = nxt
    return MatrixGroup(ring, n, np.array(list(found.values())), name=name, generators=gens)


def _unit_subgroup(ring, U):
    if U is None:
        return tuple(units(ring))
    U = tuple(sorted(set(int(u) for u in U)))
    allu = set(units(ring))
    if not set(U) <= allu:
        raise InvalidGroupError("Mon_U/LT_U: U must consist of units")
    M = ring.mul_table
    if ring.one not in U or any(int(M[a, b]) not in U for a in U for b in U):
        raise InvalidGroupError("U is not a subgroup of the unit group")
    return U


def gl_group(ring, n, budget=None):
    return MatrixGroup(ring, n, gl_array(ring, n, budget), name=f"GL({n})", validate=n <= 2)


def _unit_generators(ring, U):
    """A small generating set of the unit subgroup U (greedy)."""
    gens, span = [], {ring.one}
    for u in U:
        if u in span:
            continue
        gens.append(u)
        frontier = list(span)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = int(ring.mul_table[x, g])
                if y not in span:
                    span.add(y)
                    frontier.append(y)
    return gens


def _additive_generators(ring):
    """A small generating set of (R, +) (greedy)."""
    gens, span = [], np.zeros(ring.size, dtype=bool)
    span[ring.zero] = True
    for a in range(ring.size):
        if span[a]:
            continue
        gens.append(a)
        while True:
            grown = span.copy()
            grown[ring.add_table[np.nonzero(span)[0][:, None], gens].ravel()] = True
            if np.array_equal(grown, span):
                break
            span = grown
    return gens


def _diag_generators(ring, n, U):
    gens = []
    for i in range(n):
        for u in _unit_generators(ring, U):
            M = identity(ring, n)
            M[i, i] = u
            gens.append(M)
    return gens


def _swap_generators(ring, n):
    gens = []
    for i in range(n - 1):
        M = identity(ring, n)
        M[[i, i + 1]] = M[[i + 1, i]]
        gens.append(M)
    return gens


def _transvections(ring, n):
    gens = []
    for i in range(n):
        for j in range(i):
            for a in _additive_generators(ring):
                M = identity(ring, n)
                M[i, j] = a
                gens.append(M)
    return gens


def monomial_group(ring, n, U=None):
    """Mon_U(n, R): one entry from U in each row and column."""
    U = _unit_subgroup(ring, U)
    mats = []
    for perm in itertools.permutations(range(n)):
        for vals in itertools.product(U, repeat=n):
            M = np.full((n, n), ring.zero, dtype=np.intp)
            for i in range(n):
                M[i, perm[i]] = vals[i]
            mats.append(M)
    gens = _diag_generators(ring, n, U) + _swap_generators(ring, n)
    return MatrixGroup(ring, n, mats, name=f"Mon({n})", generators=gens)


def lower_triangular_group(ring, n, U=None):
    """LT_U(n, R): lower triangular with diagonal entries in U."""
    U = _unit_subgroup(ring, U)
    below = [(i, j) for i in range(n) for j in range(i)]
    check_budget("LT group", len(U) ** n * ring.size ** len(below))
    mats = []
    for diag in itertools.product(U, repeat=n):
        for low in itertools.product(range(ring.size), repeat=len(below)):
            M = np.full((n, n), ring.zero, dtype=np.intp)
            np.fill_diagonal(M, diag)
            for (i, j), v in zip(below, low):
                M[i, j] = v
            mats.append(M)
    gens = _diag_generators(ring, n, U) + _transvections(ring, n)
    return MatrixGroup(ring, n, mats, name=f"LT({n})", generators=gens)


def diagonal_group(ring, n, U=None):
    U = _unit_subgroup(ring, U)
    mats = []
    for diag in itertools.product(U, repeat=n):
        M = np.full((n, n), ring.zero, dtype=np.intp)
        np.fill_diagonal(M, diag)
        mats.append(M)
    return MatrixGroup(ring, n, mats, name=f"Diag({n})", generators=_diag_generators(ring, n, U))


def _kind_group(ring, size, kind):
    kind = kind.strip()
    if kind == "mon":
        return monomial_group(ring, size)
    if kind == "diag":
        return diagonal_group(ring, size)
    if kind == "gl":
        return gl_group(ring, size)
    if kind == "lt":
        return lower_triangular_group(ring, size)
    raise SpecError(f"unknown block kind {kind!r}")


def block_lower_triangular_group(ring, sizes, kinds, budget=None):
    """Lower block triangular matrices with diagonal blocks from the given groups."""
    if isinstance(kinds, str):
        kinds = [kinds] * len(sizes)
    if len(kinds) != len(sizes):
        raise SpecError("one diagonal kind per block is required")
    n = sum(sizes)
    offs = np.cumsum([0] + list(sizes))
    diag_groups = [_kind_group(ring, s, k) for s, k in zip(sizes, kinds)]
    below = [(i, j) for bi in range(len(sizes)) for bj in range(bi)
             for i in range(offs[bi], offs[bi + 1]) for j in range(offs[bj], offs[bj + 1])]
    total = int(np.prod([len(g) for g in diag_groups])) * ring.size ** len(below)
    check_budget("block triangular group", total, budget)
    mats = []
    for blocks in itertools.product(*(g.elements for g in diag_groups)):
        base = np.full((n, n), ring.zero, dtype=np.intp)
        for bi, B in enumerate(blocks):
            base[offs[bi]:offs[bi + 1], offs[bi]:offs[bi + 1]] = B
        for low in itertools.product(range(ring.size), repeat=len(below)):
            M = base.copy()
            for (i, j), v in zip(below, low):
                M[i, j] = v
            mats.append(M)
    return MatrixGroup(ring, n, mats, name=f"BlockLT({list(sizes)},{list(kinds)})",
                       validate=total <= 4096)


def block_monomial(inner, t):
    """Block matrices with one nonzero block per block row/column, taken from ``inner``."""
    ring, b = inner.ring, inner.n
    n = b * t
    check_budget("block monomial group", len(inner) ** t * int(np.prod(range(1, t + 1))))
    mats = []
    gens = []
    for perm in itertools.permutations(range(t)):
        for blocks in itertools.product(inner.elements, repeat=t):
            M = np.full((n, n), ring.zero, dtype=np.intp)
            for i in range(t):
                j = perm[i]
                M[i * b:(i + 1) * b, j * b:(j + 1) * b] = blocks[i]
            mats.append(M)
    # generating subset for validation: block swap plus single-block elements
    eye = identity(ring, b)
    for perm in itertools.permutations(range(t)):
        M = np.full((n, n), ring.zero, dtype=np.intp)
        for i in range(t):
            j = perm[i]
            M[i * b:(i + 1) * b, j * b:(j + 1) * b] = eye
        gens.append(M)
    for A in inner.elements:
        M = identity(ring, n)
        M[:b, :b] = A
        gens.append(M)
    return MatrixGroup(ring, n, mats, name=f"BlockMon({inner.name},{t})", generators=gens)


def conjugate_group(G, P):
    """P G P^{-1}."""
    P = np.asarray(P, dtype=np.intp)
    Pinv = inverse_matrix(G.ring, P)
    if Pinv is None:
        raise InvalidGroupError("conjugating matrix is not invertible")
    mats = mat_mul(G.ring, mat_mul(G.ring, P[None], G.elements), Pinv[None])
    return MatrixGroup(G.ring, G.n, mats, name=f"{G.name}^P", validate=G.order <= 2048)


def kronecker_group(G1, G2, transpose_first=False):
    """{A (x) B : A in G1, B in G2} (with A^T when ``transpose_first``)."""
    ring = G1.ring
    a, b = G1.n, G2.n
    A = np.swapaxes(G1.elements, 1, 2) if transpose_first else G1.elements
    mats = ring.mul_table[A[:, None, :, None, :, None], G2.elements[None, :, None, :, None, :]]
    mats = mats.reshape(len(A) * len(G2), a * b, a * b)
    return MatrixGroup(ring, a * b, mats, name=f"{G1.name}(x){G2.name}",
                       validate=len(mats) <= 2048)


def upper_unipotent_unit_group(ring):
    """{(1 r; 0 u) : r in R, u in R^x}."""
    mats = []
    for r in range(ring.size):
        for u in units(ring):
            mats.append([[ring.one, r], [ring.zero, u]])
    return MatrixGroup(ring, 2, mats, name="{(1 r; 0 u)}")


def f3_upper_group(ring):
    """{(a b; 0 c) : ac = 1} over a field (the F_3 example group)."""
    mats = []
    for a in units(ring):
        for c in units(ring):
            if ring.mul_table[a, c] != ring.one:
                continue
            for b in range(ring.size):
                mats.append([[a, b], [ring.zero, c]])
    return MatrixGroup(ring, 2, mats, name="{(a b; 0 c): ac=1}")


def special_linear_group(ring, n, budget=None):
    """Determinant-one matrices over a commutative ring (Leibniz formula)."""
    if not ring.is_commutative:
        raise InvalidGroupError("SL needs a commutative ring")
    G = gl_array(ring, n, budget)
    det = np.full(len(G), ring.zero, dtype=np.intp)
    for perm in itertools.permutations(range(n)):
        term = np.full(len(G), ring.one, dtype=np.intp)
        for i in range(n):
            term = ring.mul_table[term, G[:, i, perm[i]]]
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        if inv % 2:
            term = ring.neg_table[term]
        det = ring.add_table[det, term]
    return MatrixGroup(ring, n, G[det == ring.one], name=f"SL({n})", validate=len(G) <= 2048)


# ---------------------------------------------------------------- orbits

def orbit_partition(U, side="right"):
    """Orbits of x -> xU (right) or x -> (U x^T)^T (left) on R^n."""
    return Partition(U.images(side).min(axis=0))


@dataclass
class OrbitDualityReport:
    holds: bool
    right_orbits: int
    left_orbits: int
    left_dual_matches: bool
    right_dual_matches: bool
    right_reflexive: bool
    left_reflexive: bool


def verify_orbit_duality(U, chi):
    PU = orbit_partition(U, "right")
    PUT = orbit_partition(U, "left")
    l_ok = chi_dual(PU, chi, "left", U.n) == PUT
    r_ok = chi_dual(PUT, chi, "right", U.n) == PU
    refl_u = is_reflexive(PU, chi, U.n)
    refl_ut = is_reflexive(PUT, chi, U.n)
    return OrbitDualityReport(l_ok and r_ok and refl_u and refl_ut, len(PU), len(PUT),
                              l_ok, r_ok, refl_u, refl_ut)


# ---------------------------------------------------------------- subrings

class MatrixSubring:
    """A subring of R^{n x n} (contains 0 and I, closed under + and *)."""

    def __init__(self, ring, n, elements, name="S", validate=True):
        self.ring = ring
        self.n = n
        self.name = name
        els = _sort_mats(np.asarray(elements, dtype=np.intp).reshape(-1, n, n))
        els.setflags(write=False)
        self.elements = els
        self.keys = set(_keys(els))
        if validate:
            self.validate()

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"MatrixSubring({self.name}, n={self.n}, size={len(self)})"

    def contains(self, M):
        return _keys(np.asarray(M)[None])[0] in self.keys

    def validate(self):
        ring, n = self.ring, self.n
        zero = np.full((n, n), ring.zero, dtype=np.intp)
        if not (self.contains(zero) and self.contains(identity(ring, n))):
            raise InvalidGroupError(f"{self.name}: must contain 0 and I")
        E = self.elements
        check_budget("subring validation", len(E) ** 2)
        sums = ring.add_table[E[:, None], E[None, :]].reshape(-1, n, n)
        prods = mat_mul(ring, E[:, None], E[None, :]).reshape(-1, n, n)
        for k in _keys(sums) + _keys(prods):
            if k not in self.keys:
                raise InvalidGroupError(f"{self.name}: not closed")

    def intersection(self, other):
        common = [M for M in self.elements if other.contains(M)]
        return MatrixSubring(self.ring, self.n, common, name=f"{self.name}&{other.name}")


def subring_closure(ring, n, gens, budget=None, name="<S>"):
    """Smallest subring of R^{n x n} containing ``gens``."""
    zero = np.full((n, n), ring.zero, dtype=np.intp)
    found = {}
    for M in [zero, identity(ring, n)] + [np.asarray(g, dtype=np.intp).reshape(n, n) for g in gens]:
        found.setdefault(_keys(M[None])[0], M)
    frontier = list(found.values())
    while frontier:
        E = np.array(list(found.values()))
        F = np.array(frontier)
        cand = np.concatenate([
            ring.add_table[F[:, None], E[None, :]].reshape(-1, n, n),
            mat_mul(ring, F[:, None], E[None, :]).reshape(-1, n, n),
            mat_mul(ring, E[:, None], F[None, :]).reshape(-1, n, n),
        ])
        frontier = []
        for k, M in zip(_keys(cand), cand):
            if k not in found:
                found[k] = M
                frontier.append(M)
        check_budget(f"subring closure {name}", len(found), budget)
    return MatrixSubring(ring, n, np.array(list(found.values())), name=name,
                         validate=len(found) <= 1024)


def full_matrix_subring(ring, n):
    check_budget("full matrix ring", ring.size ** (n * n))
    mats = np.array(list(itertools.product(range(ring.size), repeat=n * n))).reshape(-1, n, n)
    return MatrixSubring(ring, n, mats, name=f"R^{n}x{n}", validate=False)


def _pattern_subring(ring, n, allowed, name):
    pos = [(i, j) for i in range(n) for j in range(n) if allowed(i, j)]
    check_budget(name, ring.size ** len(pos))
    mats = []
    for vals in itertools.product(range(ring.size), repeat=len(pos)):
        M = np.full((n, n), ring.zero, dtype=np.intp)
        for (i, j), v in zip(pos, vals):
            M[i, j] = v
        mats.append(M)
    return MatrixSubring(ring, n, mats, name=name, validate=len(mats) <= 1024)


def lower_triangular_subring(ring, n):
    return _pattern_subring(ring, n, lambda i, j: j <= i, "lower")


def diagonal_subring(ring, n):
    return _pattern_subring(ring, n, lambda i, j: i == j, "diag")


@dataclass
class SubringUnits:
    group: MatrixGroup
    inverses_in_subring: bool


def units_of_subring(S):
    """Invertible matrices of S; inverses are found in R^{n x n} and checked in S."""
    inv_in = True
    mats = []
    for M in S.elements:
        B = inverse_matrix(S.ring, M)
        if B is None:
            continue
        mats.append(M)
        if not S.contains(B):
            inv_in = False
    if not inv_in:
        raise InconsistencyError("an inverse of an invertible subring element lies outside S")
    return SubringUnits(MatrixGroup(S.ring, S.n, mats, name=f"U({S.name})"), inv_in)


@dataclass
class ConstructibilityReport:
    constructible: bool
    exhaustive: bool
    tuples_checked: int
    witness: tuple | None = None


def is_constructible(S, mode="auto", samples=100_000, seed=0, budget=None):
    """Check that splicing column j of A_j (A_j invertible in S) always lands in S.

    Only the set of distinct j-th columns of U(S) matters, so the exhaustive
    check runs over the product of these column sets.  ``mode="auto"`` falls
    back to seeded sampling if that product exceeds the budget.
    """
    from .config import enumeration_budget

    U = units_of_subring(S).group.elements
    n = S.n
    cols = [_sort_mats(U[:, :, j][:, :, None])[:, :, 0] for j in range(n)]
    total = int(np.prod([len(c) for c in cols], dtype=float))
    limit = enumeration_budget(budget)
    if mode == "auto":
        mode = "exhaustive" if total <= limit else "sampled"
    if mode == "exhaustive":
        check_budget("constructibility tuples", total, budget)
        checked = 0
        for choice in itertools.product(*(range(len(c)) for c in cols)):
            B = np.stack([cols[j][choice[j]] for j in range(n)], axis=1)
            checked += 1
            if not S.contains(B):
                return ConstructibilityReport(False, True, checked, tuple(B.tolist()))
        return ConstructibilityReport(True, True, checked)
    rng = np.random.default_rng(seed)
    for k in range(samples):
        B = np.stack([cols[j][rng.integers(len(cols[j]))] for j in range(n)], axis=1)
        if not S.contains(B):
            return ConstructibilityReport(False, False, k + 1, tuple(B.tolist()))
    return ConstructibilityReport(True, False, samples)


# ---------------------------------------------------------------- group specs

def _parse_matrix(ring, text, n):
    text = text.strip()
    if text.startswith("[") and text.endswith("]"):
        text = text[1:-1]
    rows = [r for r in text.replace("[", "").split("]") if r.strip(" ,;")]
    if len(rows) == 1 and ";" in rows[0]:
        rows = rows[0].split(";")
    vals = [[ring.index_of(t) for t in r.replace(",", " ").split()] for r in rows]
    M = np.array(vals, dtype=np.intp)
    if M.shape != (n, n):
        raise SpecError(f"expected a {n}x{n} matrix, got {text!r}")
    return M


def _split_args(text):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _parse_units(ring, text):
    text = text.strip()
    if text in ("all", ""):
        return None
    if text in ("1", "{1}", "trivial"):
        return (ring.one,)
    return tuple(ring.index_of(t) for t in text.strip("{}[]").split(","))


def build_group(ring, n, spec):
    """Parse the group-spec grammar:

    ``gl`` | ``mon[:U]`` | ``lt[:U]`` | ``diag[:U]`` | ``sl`` |
    ``blocktri:[n1,...]:kind[,kind...]`` | ``gens:[M1;M2;...]`` |
    ``conj:(spec,P)`` | ``preset:f3`` | ``preset:unipotent``
    where U is ``all``, ``1`` or ``{u1,u2,...}`` and matrices are written
    ``[[a,b],[c,d]]``.
    """
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    if head == "gl":
        return gl_group(ring, n)
    if head == "sl":
        return special_linear_group(ring, n)
    if head == "mon":
        return monomial_group(ring, n, _parse_units(ring, rest))
    if head == "lt":
        return lower_triangular_group(ring, n, _parse_units(ring, rest))
    if head == "diag":
        return diagonal_group(ring, n, _parse_units(ring, rest))
    if head == "blocktri":
        sizes_txt, _, kinds_txt = rest.partition("]:")
        sizes = [int(s) for s in sizes_txt.strip("[]").split(",")]
        kinds = [k.strip() for k in kinds_txt.split(",")]
        if len(kinds) == 1:
            kinds = kinds * len(sizes)
        if sum(sizes) != n:
            raise SpecError(f"block sizes {sizes} do not sum to n={n}")
        return block_lower_triangular_group(ring, sizes, kinds)
    if head == "gens":
        body = rest.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise SpecError("gens: expects [M1;M2;...]")
        mats = [_parse_matrix(ring, m, n) for m in body[1:-1].split(";") if m.strip()]
        return group_from_generators(ring, n, mats, name=spec)
    if head == "conj":
        body = rest.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise SpecError("conj: expects (spec,P)")
        inner, P = _split_args(body[1:-1])
        return conjugate_group(build_group(ring, n, inner), _parse_matrix(ring, P, n))
    if head == "preset":
        if rest == "f3":
            return f3_upper_group(ring)
        if rest == "unipotent":
            return upper_unipotent_unit_group(ring)
    raise SpecError(f"unknown group spec {spec!r}")
