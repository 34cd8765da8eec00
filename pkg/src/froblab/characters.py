"""Exact characters of (R^n, +) and generating characters of finite rings.

Character values are kept as exponents e in Z_m, standing for zeta_m^e with
m the exponent of the group.  Sums of such values live in Z[x]/Phi_m(x),
where every element has a unique reduced coefficient vector, so equality of
sums is decided exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import InconsistencyError, NotGeneratingError
from .linalg import dot, free_module
from .ring import _side, left_ideal, right_ideal


# ---------------------------------------------------------------- cyclotomic arithmetic

def _poly_divexact(num, den):
    """Exact quotient of integer polynomials (ascending coefficients), den monic."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise InconsistencyError("cyclotomic division left a remainder")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m):
    """Phi_m as an ascending integer coefficient tuple, via (x^m - 1) / prod Phi_d."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact(num, cyclotomic_polynomial(d))
    return tuple(num)


@lru_cache(maxsize=None)
def reduction_matrix(m):
    """Row e holds the coefficients of x^e mod Phi_m, for 0 <= e < m."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    red = np.zeros((m, deg), dtype=np.int64)
    cur = [1] + [0] * (deg - 1)
    for e in range(m):
        red[e] = cur
        # multiply by x and reduce using the monic relation x^deg = -sum phi_i x^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    red.setflags(write=False)
    return red


@dataclass(frozen=True)
class CyclotomicSum:
    """An element of Z[zeta_m] in its canonical coefficient form mod Phi_m."""

    m: int
    coeffs: tuple

    def __add__(self, other):
        if self.m != other.m:
            raise ValueError("cyclotomic sums of different orders")
        return CyclotomicSum(self.m, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def is_zero(self):
        return not any(self.coeffs)

    def rational_value(self):
        """The integer value if the sum is rational, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def to_complex(self):
        z = np.exp(2j * np.pi / self.m)
        return complex(sum(c * z**i for i, c in enumerate(self.coeffs)))

    def to_json(self):
        return {"m": self.m, "coeffs": list(self.coeffs)}


def cyclo_sum(values, m):
    """Canonical form of sum_e zeta_m^e over a multiset of exponents."""
    counts = np.bincount(np.asarray(list(values), dtype=np.int64) % m, minlength=m)
    return CyclotomicSum(m, tuple(int(c) for c in counts @ reduction_matrix(m)))


# ---------------------------------------------------------------- additive decompositions

def _cyclic_span(add, g, zero):
    out = [zero]
    x = g
    while x != zero:
        out.append(x)
        x = add[x, g]
    return out


def _decompose(add, zero, size):
    """Generators g_i of a direct cyclic decomposition, largest order first.

    Greedy choice of a maximal-order element meeting the span so far only in
    zero, with backtracking in case a greedy choice leads nowhere.
    """
    orders = {}
    cycles = {}
    for a in range(size):
        cycles[a] = _cyclic_span(add, a, zero)
        orders[a] = len(cycles[a])

    def span_add(span, g):
        new = set()
        for s in span:
            for c in cycles[g]:
                new.add(int(add[s, c]))
        return new

    def rec(span, gens):
        if len(span) == size:
            return gens
        cands = sorted((a for a in range(size) if a not in span),
                       key=lambda a: (-orders[a], a))
        tried = set()
        for g in cands:
            if any(c in span for c in cycles[g][1:]):
                continue
            new = span_add(span, g)
            key = frozenset(new)
            if len(new) != len(span) * orders[g] or key in tried:
                continue
            tried.add(key)
            res = rec(new, gens + [g])
            if res is not None:
                return res
        return None

    gens = rec({zero}, [])
    if gens is None:
        raise InconsistencyError("no cyclic decomposition found")
    return gens, [orders[g] for g in gens]


@dataclass(frozen=True, eq=False)
class AbelianDecomposition:
    """(R^n, +) presented as Z_{d_1} x ... x Z_{d_k}.

    ``coordinates[a]`` is the exponent tuple of element rank ``a``;
    ``generators[i]`` is the rank of the i-th generator.
    """

    ring: object
    n: int
    group_size: int
    cyclic_orders: tuple
    generators: tuple
    coordinates: np.ndarray = field(repr=False)

    @property
    def exponent(self):
        m = 1
        for d in self.cyclic_orders:
            m = m * d // gcd(m, d)
        return m

    @property
    def weights(self):
        """m / d_i, turning coordinate c_i into an exponent of zeta_m."""
        m = self.exponent
        return np.array([m // d for d in self.cyclic_orders], dtype=np.int64)

    def exponent_tuples(self):
        """All exponent tuples in mixed-radix order (character index order)."""
        return np.array(list(itertools.product(*(range(d) for d in self.cyclic_orders))),
                        dtype=np.int64).reshape(-1, len(self.cyclic_orders))

    def character_table(self):
        """T[c, a] = exponent of character c at group element a."""
        E = self.exponent_tuples() * self.weights[None, :]
        return (E @ self.coordinates.T) % self.exponent


@lru_cache(maxsize=None)
def additive_decomposition(ring, n=1):
    """Cyclic decomposition of (R^n, +) as the n-fold product of one for (R, +)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    gens, orders = _decompose(ring.add_table, ring.zero, ring.size)
    order_idx = sorted(range(len(gens)), key=lambda i: (orders[i], i))
    gens = [gens[i] for i in order_idx]
    orders = [orders[i] for i in order_idx]
    V = free_module(ring, n)
    # generators of R^n: generator g placed in coordinate j; sorted by order
    full = []
    for gi, (g, d) in enumerate(zip(gens, orders)):
        for j in range(n):
            full.append((d, gi, j, g))
    full.sort()
    all_orders = tuple(d for d, _, _, _ in full)
    gen_ranks = []
    for d, gi, j, g in full:
        vec = np.full(n, ring.zero, dtype=np.intp)
        vec[j] = g
        gen_ranks.append(V.rank(vec))
    # coordinates: enumerate every combination and invert
    k = len(full)
    coords = np.full((V.size, k), -1, dtype=np.int64)
    add = ring.add_table
    multiples = []
    for d, gi, j, g in full:
        mult = [ring.zero]
        for _ in range(d - 1):
            mult.append(int(add[mult[-1], g]))
        multiples.append((j, np.array(mult, dtype=np.intp)))
    combos = np.array(list(itertools.product(*(range(d) for d in all_orders))),
                      dtype=np.int64).reshape(-1, k)
    vecs = np.full((len(combos), n), ring.zero, dtype=np.intp)
    for col, (j, mult) in enumerate(multiples):
        vecs[:, j] = add[vecs[:, j], mult[combos[:, col]]]
    ranks = vecs @ V.powers
    if len(np.unique(ranks)) != V.size or len(ranks) != V.size:
        raise InconsistencyError("decomposition coordinates are not a bijection")
    coords[ranks] = combos
    coords.setflags(write=False)
    return AbelianDecomposition(ring, n, V.size, all_orders, tuple(int(r) for r in gen_ranks),
                                coords)


# ---------------------------------------------------------------- characters

@dataclass(frozen=True, eq=False)
class Character:
    """A character of (R^n, +) given by exponents on the decomposition generators."""

    decomposition: AbelianDecomposition
    exponents: tuple

    @property
    def m(self):
        return self.decomposition.exponent

    @property
    def table(self):
        """Exponent (mod m) of the character value at every element rank."""
        t = self.__dict__.get("_table")
        if t is None:
            dec = self.decomposition
            e = np.asarray(self.exponents, dtype=np.int64) * dec.weights
            t = (dec.coordinates @ e) % dec.exponent
            t.setflags(write=False)
            object.__setattr__(self, "_table", t)
        return t

    def __call__(self, a):
        return int(self.table[a])

    def __eq__(self, other):
        return (isinstance(other, Character) and self.decomposition is other.decomposition
                and self.exponents == other.exponents)

    def __hash__(self):
        return hash((id(self.decomposition), self.exponents))

    def __repr__(self):
        return f"Character(orders={list(self.decomposition.cyclic_orders)}, exponents={list(self.exponents)})"

    def is_trivial(self):
        return not any(self.exponents)

    def to_json(self):
        return {"orders": list(self.decomposition.cyclic_orders), "exponents": list(self.exponents)}


def character_from_values(dec, table):
    """Recover the Character with the given exponent table, verifying it is one."""
    table = np.asarray(table, dtype=np.int64) % dec.exponent
    exps = []
    for g, d, w in zip(dec.generators, dec.cyclic_orders, dec.weights):
        v = int(table[g])
        if v % w:
            raise InconsistencyError("value at a generator is not a d-th root of unity")
        exps.append(v // int(w))
    chi = Character(dec, tuple(exps))
    if not np.array_equal(chi.table, table):
        raise InconsistencyError("table is not a character")
    return chi


def all_characters(dec):
    return [Character(dec, tuple(int(v) for v in e)) for e in dec.exponent_tuples()]


def act(r, chi, side):
    """Left: (r chi)(x) = chi(x r).  Right: (chi r)(x) = chi(r x)."""
    dec = chi.decomposition
    ring = dec.ring
    V = free_module(ring, dec.n)
    r = int(r)
    if _side(side) == "left":
        moved = ring.mul_table[V.vectors, r]
    else:
        moved = ring.mul_table[r, V.vectors]
    return character_from_values(dec, chi.table[moved @ V.powers])


def _injective_rows(M):
    return len(np.unique(M, axis=0)) == M.shape[0]


@dataclass(frozen=True)
class GeneratingCheck:
    left_injective: bool
    right_injective: bool
    kernel_free: bool


def check_generating(chi):
    """Both module maps r -> r chi, r -> chi r, and the kernel ideal criterion."""
    ring = chi.decomposition.ring
    if chi.decomposition.n != 1:
        raise ValueError("generating characters are characters of R itself")
    t = chi.table
    left = _injective_rows(t[ring.mul_table.T])   # row r: x -> chi(x r)
    right = _injective_rows(t[ring.mul_table])    # row r: x -> chi(r x)
    kernel_free = True
    for a in range(ring.size):
        if a == ring.zero:
            continue
        for ideal in (right_ideal(ring, [a]), left_ideal(ring, [a])):
            if all(t[i] == 0 for i in ideal):
                kernel_free = False
                break
        if not kernel_free:
            break
    return GeneratingCheck(left, right, kernel_free)


def is_generating(chi):
    chk = check_generating(chi)
    if not (chk.left_injective == chk.right_injective == chk.kernel_free):
        raise InconsistencyError(f"generating-character criteria disagree: {chk}")
    return chk.left_injective


def generating_characters(ring):
    """All generating characters of R in exponent-tuple order."""
    dec = additive_decomposition(ring, 1)
    out = []
    T = dec.character_table()
    E = dec.exponent_tuples()
    for c in range(len(E)):
        t = T[c]
        if _injective_rows(t[ring.mul_table.T]):
            chi = Character(dec, tuple(int(v) for v in E[c]))
            if not is_generating(chi):
                raise InconsistencyError("left injectivity without the kernel criterion")
            out.append(chi)
    return out


@lru_cache(maxsize=None)
def find_generating_character(ring):
    """The generating character with the smallest exponent tuple, or None."""
    dec = additive_decomposition(ring, 1)
    T = dec.character_table()
    E = dec.exponent_tuples()
    mulT = ring.mul_table.T
    for c in range(len(E)):
        if _injective_rows(T[c][mulT]):
            chi = Character(dec, tuple(int(v) for v in E[c]))
            if not is_generating(chi):
                raise InconsistencyError("left injectivity without the kernel criterion")
            return chi
    # no candidate passed: confirm no character satisfies the kernel criterion either
    for c in range(len(E)):
        chi = Character(dec, tuple(int(v) for v in E[c]))
        if check_generating(chi).kernel_free:
            raise InconsistencyError("kernel criterion holds for a non-generating character")
    return None


def is_frobenius(ring):
    return find_generating_character(ring) is not None


def _require_generating(chi):
    if chi.decomposition.n != 1 or not is_generating(chi):
        raise NotGeneratingError("a generating character of R is required")


def pairing_table(chi, n, side):
    """T[v, w] = exponent of the pairing used by the side's identification.

    Left (alpha_l): row v is the character chi(<-, v>), so T[v, w] = chi(<w, v>).
    Right (alpha_r): row v is chi(<v, ->), so T[v, w] = chi(<v, w>).
    """
    ring = chi.decomposition.ring
    V = free_module(ring, n)
    X = V.vectors
    if _side(side) == "left":
        D = dot(ring, X[None, :, :], X[:, None, :])
    else:
        D = dot(ring, X[:, None, :], X[None, :, :])
    return chi.table[D]


def alpha(chi, x, side):
    """The character chi(<-, x>) (left) or chi(<x, ->) (right) of R^n."""
    _require_generating(chi)
    ring = chi.decomposition.ring
    x = np.asarray(x, dtype=np.intp)
    n = len(x)
    V = free_module(ring, n)
    if _side(side) == "left":
        vals = dot(ring, V.vectors, x[None, :])
    else:
        vals = dot(ring, x[None, :], V.vectors)
    return character_from_values(additive_decomposition(ring, n), chi.table[vals])
