"""Weight functions on R^n.

A ``Weight`` is bound to a ring and a length n.  ``values()`` lists the
weight of every vector of R^n in rank order, and ``classes()`` turns that
into block ids (equal weight, equal id) for the searches in ``extension``.
Values are ints, ``Fraction``s, or tuples (sorted tuples for multisets).
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .characters import _require_generating, cyclo_sum, find_generating_character
from .errors import InconsistencyError, NotGeneratingError, SpecError
from .linalg import free_module
from .posets import Poset
from .ring import left_ideal, right_ideal, units


# ---------------------------------------------------------------- plain functions

def support(x, zero=0):
    return frozenset(i for i, v in enumerate(x) if v != zero)


def wt_hamming(x, zero=0):
    return sum(1 for v in x if v != zero)


def wt_rt(x, zero=0):
    """Largest 1-based index of a nonzero coordinate, 0 for the zero vector."""
    nz = [i + 1 for i, v in enumerate(x) if v != zero]
    return nz[-1] if nz else 0


def wt_poset(P, x, zero=0):
    return len(P.ideal_generated(support(x, zero)))


def homogeneous_table(ring, chi=None):
    """omega(r) = 1 - (1/|R^x|) sum_{u in R^x} chi(r u), exactly."""
    if chi is None:
        chi = find_generating_character(ring)
        if chi is None:
            raise NotGeneratingError(f"{ring.name} has no generating character")
    _require_generating(chi)
    U = list(units(ring))
    out = []
    for r in range(ring.size):
        s = cyclo_sum([chi(ring.mul_table[r, u]) for u in U], chi.m)
        v = s.rational_value()
        if v is None:
            raise InconsistencyError(f"unit sum at {ring.labels[r]} is not rational: {s}")
        out.append(1 - Fraction(v, len(U)))
    return tuple(out)


def wt_homogeneous(ring, chi, x):
    table = homogeneous_table(ring, chi)
    return sum((table[v] for v in x), Fraction(0))


def check_homogeneous_axioms(ring, table):
    """(i) omega constant on generators of the same principal left ideal;
    (ii) the average of omega over every nonzero principal left ideal is 1.
    Returns the first failure as a string, or None."""
    if table[ring.zero] != 0:
        return "omega(0) != 0"
    ideals = [left_ideal(ring, [x]) for x in range(ring.size)]
    for x in range(ring.size):
        for y in range(x + 1, ring.size):
            if ideals[x] == ideals[y] and table[x] != table[y]:
                return f"axiom (i) fails at {ring.labels[x]}, {ring.labels[y]}"
        if x != ring.zero:
            avg = sum((table[y] for y in ideals[x]), Fraction(0)) / len(ideals[x])
            if avg != 1:
                return f"axiom (ii) fails on R{ring.labels[x]}: average {avg}"
    return None


def unit_orbits(ring, U=None):
    """Orbits of r -> r u (u in U) on R, ordered by smallest member."""
    U = units(ring) if U is None else tuple(U)
    seen, orbits = set(), []
    for r in range(ring.size):
        if r not in seen:
            orb = frozenset(int(ring.mul_table[r, u]) for u in U) | {r}
            seen |= orb
            orbits.append(tuple(sorted(orb)))
    return orbits


def comp_vector(ring, U, x):
    """Coordinate counts per right U-orbit of R (orbits ordered by smallest member)."""
    orbits = unit_orbits(ring, U)
    where = {r: k for k, orb in enumerate(orbits) for r in orb}
    counts = [0] * len(orbits)
    for v in x:
        counts[where[int(v)]] += 1
    return tuple(counts)


def weight_profiles(block_sizes, base, x):
    """Per-block weights (the weight list) and their sorted multiset."""
    if sum(block_sizes) != len(x):
        raise ValueError("block sizes do not add up to the vector length")
    out, start = [], 0
    for b in block_sizes:
        out.append(base(tuple(x[start:start + b])))
        start += b
    return tuple(out), tuple(sorted(out))


def _rank_mod_p(A, p):
    """Rank over F_p of an integer matrix (entries reduced mod p)."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == rows:
            break
    return r


def _field_inverses(field):
    inv = {}
    for a in range(field.size):
        hits = np.nonzero(field.mul_table[a] == field.one)[0]
        if len(hits):
            inv[a] = int(hits[0])
    if len(inv) != field.size - 1:
        raise SpecError(f"{field.name} is not a field")
    return inv


def wt_rank(field, A):
    """Rank of a matrix of element indices over a finite field (Gaussian elimination)."""
    add, mul, neg = field.add_table, field.mul_table, field.neg_table
    inv = _field_inverses(field)
    A = np.array(A, dtype=np.intp)
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c] != field.zero), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = mul[inv[int(A[r, c])], A[r]]
        for i in range(rows):
            if i != r and A[i, c] != field.zero:
                A[i] = add[A[i], neg[mul[A[i, c], A[r]]]]
        r += 1
        if r == rows:
            break
    return r


def wt_rank_ext(field, x):
    """dim over the prime field of the span of the entries of x."""
    coords = getattr(field, "coordinates", None)
    if coords is None:
        raise SpecError("rank over the prime field needs a gf: ring")
    M = np.array([coords[int(v)] for v in x], dtype=np.int64).T
    return _rank_mod_p(M, field.characteristic) if len(x) else 0


# ---------------------------------------------------------------- bound weights

class Weight:
    """A weight on R^n; subclasses implement ``_values(vectors)``."""

    kind = "weight"

    def __init__(self, ring, n):
        self.ring = ring
        self.n = n
        self.V = free_module(ring, n)

    def __repr__(self):
        return f"{type(self).__name__}({self.ring.name}, n={self.n})"

    def _values(self, X):
        raise NotImplementedError

    def __call__(self, x):
        return self._values(np.asarray([x], dtype=np.intp))[0]

    @cached_property
    def values(self):
        return self._values(self.V.vectors)

    @cached_property
    def classes(self):
        """Block id per vector rank; ids are the positions of values in sorted order."""
        distinct = sorted(set(self.values), key=_sort_key)
        index = {v: i for i, v in enumerate(distinct)}
        out = np.array([index[v] for v in self.values], dtype=np.intp)
        out.setflags(write=False)
        return out

    def describe(self, value):
        return str(value)


def _sort_key(v):
    return (0, v, ()) if not isinstance(v, tuple) else (1, 0, v)


class HammingWeight(Weight):
    kind = "hamming"

    def _values(self, X):
        return (X != self.ring.zero).sum(axis=1).tolist()


class SupportWeight(Weight):
    kind = "support"

    def _values(self, X):
        return [tuple(int(b) for b in row) for row in (X != self.ring.zero)]


class RTWeight(Weight):
    kind = "rt"

    def _values(self, X):
        nz = X != self.ring.zero
        last = self.n - np.argmax(nz[:, ::-1], axis=1)
        return np.where(nz.any(axis=1), last, 0).tolist()


class PosetWeight(Weight):
    kind = "poset"

    def __init__(self, ring, P):
        super().__init__(ring, P.n)
        self.poset = P

    def _values(self, X):
        bits = 1 << np.arange(self.n, dtype=np.int64)
        masks = (X != self.ring.zero).astype(np.int64) @ bits
        return self.poset.mask_weights[masks].tolist()


class NRTWeight(PosetWeight):
    """Sum of RT weights over t consecutive blocks of the given length."""

    kind = "nrt"

    def __init__(self, ring, t, length):
        super().__init__(ring, Poset.disjoint_chains(t, length))
        self.t, self.length = t, length


class HomogeneousWeight(Weight):
    kind = "homog"

    def __init__(self, ring, n, chi=None, scale=1):
        super().__init__(ring, n)
        self.table = homogeneous_table(ring, chi)
        self.scale = Fraction(scale)

    def _values(self, X):
        t = self.table
        return [self.scale * sum((t[v] for v in row), Fraction(0)) for row in X.tolist()]


class CompositionWeight(Weight):
    kind = "comp"

    def __init__(self, ring, n, U=None):
        super().__init__(ring, n)
        self.orbits = unit_orbits(ring, U)
        where = np.empty(ring.size, dtype=np.intp)
        for k, orb in enumerate(self.orbits):
            where[list(orb)] = k
        self._where = where

    def _values(self, X):
        k = len(self.orbits)
        ids = self._where[X]
        counts = np.stack([(ids == j).sum(axis=1) for j in range(k)], axis=1)
        return [tuple(r) for r in counts.tolist()]


class RankWeight(Weight):
    """Rank of the vector read as an m x c matrix (row-major) over a field."""

    kind = "rank"

    def __init__(self, field, m, c):
        super().__init__(field, m * c)
        self.m, self.c = m, c
        _field_inverses(field)

    def _values(self, X):
        return [wt_rank(self.ring, row.reshape(self.m, self.c)) for row in X]


class RankExtWeight(Weight):
    """dim over the prime subfield of the span of the coordinates."""

    kind = "rankext"

    def _values(self, X):
        return [wt_rank_ext(self.ring, row) for row in X]


class RightIdealWeight(Weight):
    """The right ideal generated by the entries, as a sorted tuple of elements."""

    kind = "rightideal"

    def _values(self, X):
        cache = {}
        out = []
        for row in X.tolist():
            key = frozenset(row)
            if key not in cache:
                cache[key] = tuple(sorted(right_ideal(self.ring, key)))
            out.append(cache[key])
        return out


class ProfileWeight(Weight):
    """Weight list over consecutive blocks, or its sorted multiset when symmetrized."""

    kind = "profile"

    def __init__(self, ring, blocks, base_spec, symmetrized=False):
        super().__init__(ring, sum(blocks))
        self.blocks = tuple(blocks)
        self.base_spec = base_spec
        self.symmetrized = symmetrized
        self.bases = [parse_weight(base_spec, ring, b) for b in blocks]

    def _values(self, X):
        parts, start = [], 0
        for b, w in zip(self.blocks, self.bases):
            sub = X[:, start:start + b] @ free_module(self.ring, b).powers
            parts.append([w.values[int(r)] for r in sub])
            start += b
        rows = list(zip(*parts)) if parts else [() for _ in range(len(X))]
        if self.symmetrized:
            return [tuple(sorted(r, key=_sort_key)) for r in rows]
        return [tuple(r) for r in rows]


# ---------------------------------------------------------------- spec parser

def _load_poset(text):
    text = text.strip()
    if text.startswith("n=") or text.startswith("n ="):
        return Poset.parse(text)
    path = Path(text)
    if not path.exists():
        raise SpecError(f"poset file {text!r} not found")
    return Poset.parse(path.read_text())


def _int_list(text, count):
    try:
        vals = [int(t) for t in text.strip().strip("[]").split(",")]
    except ValueError:
        raise SpecError(f"expected {count} integers in {text!r}") from None
    if len(vals) != count:
        raise SpecError(f"expected {count} integers in {text!r}")
    return vals


def parse_weight(spec, ring, n):
    """Weight-spec grammar:

    ``hamming`` | ``rt`` | ``support`` | ``homog`` | ``rankext`` | ``rightideal`` |
    ``poset:<file or inline n=..;a<b>`` | ``nrt:[t,length]`` | ``comp:<U>`` |
    ``ranklist:[m,c]`` (alias ``rank:[m,c]``) |
    ``profile:(b1,b2,...;base)`` | ``symprofile:(b1,b2,...;base)``
    """
    from .actions import _parse_units

    spec = spec.strip()
    head, _, rest = spec.partition(":")
    head = head.strip().lower()
    if head == "hamming":
        w = HammingWeight(ring, n)
    elif head == "rt":
        w = RTWeight(ring, n)
    elif head == "support":
        w = SupportWeight(ring, n)
    elif head in ("homog", "homogeneous"):
        w = HomogeneousWeight(ring, n)
    elif head == "rankext":
        w = RankExtWeight(ring, n)
    elif head == "rightideal":
        w = RightIdealWeight(ring, n)
    elif head == "poset":
        w = PosetWeight(ring, _load_poset(rest))
    elif head == "nrt":
        t, length = _int_list(rest, 2)
        w = NRTWeight(ring, t, length)
    elif head == "comp":
        w = CompositionWeight(ring, n, _parse_units(ring, rest))
    elif head in ("ranklist", "rank"):
        m, c = _int_list(rest, 2)
        w = RankWeight(ring, m, c)
    elif head in ("profile", "symprofile"):
        body = rest.strip()
        if not (body.startswith("(") and body.endswith(")")) or ";" not in body:
            raise SpecError(f"{head}: expects (b1,b2,...;base)")
        blocks_txt, base = body[1:-1].split(";", 1)
        blocks = [int(b) for b in blocks_txt.split(",")]
        w = ProfileWeight(ring, blocks, base, symmetrized=head == "symprofile")
    else:
        raise SpecError(f"unknown weight spec {spec!r}")
    if w.n != n:
        raise SpecError(f"weight {spec!r} has length {w.n}, expected {n}")
    return w
