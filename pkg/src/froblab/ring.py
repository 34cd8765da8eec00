"""Table-based finite rings with unity.

Every ring is a pair of ``size x size`` index tables.  Elements are plain
integers in ``range(size)``; everything downstream works on those indices,
so integer residue rings, Galois fields, the local ring
F2[x,y]/(x^2,xy,y^2), matrix rings and direct products all look alike.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InconsistencyError, ReducibleModulusError, RingAxiomError, SpecError

MAX_RING_SIZE = 4096


class FiniteRing:
    """A finite ring with unity given by its addition and multiplication tables.

    The tables are validated exhaustively on construction (abelian group,
    associativity, unity, distributivity); a violation raises
    :class:`RingAxiomError` naming the failing triple.
    """

    def __init__(self, add_table, mul_table, zero=0, one=1, name="R", labels=None,
                 validate=True):
        add = np.array(add_table, dtype=np.intp)
        mul = np.array(mul_table, dtype=np.intp)
        size = add.shape[0]
        if add.shape != (size, size) or mul.shape != (size, size):
            raise SpecError("ring tables must be square and of equal size")
        if size > MAX_RING_SIZE:
            raise SpecError(f"ring of size {size} exceeds the table limit {MAX_RING_SIZE}")
        add.setflags(write=False)
        mul.setflags(write=False)
        self.size = size
        self.add_table = add
        self.mul_table = mul
        self.zero = int(zero)
        self.one = int(one)
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(size))
        if validate:
            validate_ring(self)

    def __repr__(self):
        return f"FiniteRing({self.name!r}, size={self.size})"

    @cached_property
    def neg_table(self):
        neg = np.argmax(self.add_table == self.zero, axis=1)
        neg.setflags(write=False)
        return neg

    @cached_property
    def is_commutative(self):
        return bool(np.array_equal(self.mul_table, self.mul_table.T))

    @cached_property
    def exponent(self):
        """Exponent of the additive group (lcm of additive orders)."""
        from math import lcm

        e = 1
        for a in range(self.size):
            e = lcm(e, self.additive_order(a))
        return e

    def additive_order(self, a):
        k, x = 1, a
        while x != self.zero:
            x = self.add_table[x, a]
            k += 1
        return k

    def add(self, a, b):
        return int(self.add_table[a, b])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def neg(self, a):
        return int(self.neg_table[a])

    def sub(self, a, b):
        return int(self.add_table[a, self.neg_table[b]])

    def element(self, index):
        return RingElement(self, int(index))

    def elements(self):
        return [RingElement(self, i) for i in range(self.size)]

    def index_of(self, token):
        """Resolve a label (e.g. ``"1+x"``) or a decimal index to an element index."""
        token = str(token).strip()
        if token in self._label_index:
            return self._label_index[token]
        try:
            i = int(token)
        except ValueError:
            raise SpecError(f"unknown element {token!r} of {self.name}") from None
        if not 0 <= i < self.size:
            raise SpecError(f"element index {i} out of range for {self.name}")
        return i

    @cached_property
    def _label_index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def to_json(self):
        return {
            "name": self.name,
            "size": self.size,
            "add_table": self.add_table.tolist(),
            "mul_table": self.mul_table.tolist(),
            "zero": self.zero,
            "one": self.one,
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["add_table"], data["mul_table"], data["zero"], data["one"],
                   name=data.get("name", "R"))


@dataclass(frozen=True, eq=True)
class RingElement:
    ring: FiniteRing
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.ring.size:
            raise ValueError(f"index {self.index} out of range")

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise ValueError("elements of different rings")
            return other.index
        return int(other)

    def __add__(self, other):
        return RingElement(self.ring, self.ring.add(self.index, self._coerce(other)))

    def __sub__(self, other):
        return RingElement(self.ring, self.ring.sub(self.index, self._coerce(other)))

    def __mul__(self, other):
        return RingElement(self.ring, self.ring.mul(self.index, self._coerce(other)))

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.index))

    def __int__(self):
        return self.index

    def __repr__(self):
        return self.ring.labels[self.index]


# ---------------------------------------------------------------- validation

def _first_mismatch(mask, offset=0):
    idx = np.argwhere(mask)
    if len(idx) == 0:
        return None
    t = [int(v) for v in idx[0]]
    t[0] += offset
    return t


def validate_ring(ring, chunk=32):
    """Exhaustively check the ring axioms; raise RingAxiomError on the first failure."""
    A, M, n = ring.add_table, ring.mul_table, ring.size
    r = np.arange(n)
    if ring.zero == ring.one:
        raise RingAxiomError("zero != one", (ring.zero, ring.one))
    if A.min() < 0 or A.max() >= n or M.min() < 0 or M.max() >= n:
        raise RingAxiomError("tables closed", (0, 0))
    bad = np.argwhere(A[ring.zero] != r)
    if len(bad):
        raise RingAxiomError("additive identity", (ring.zero, int(bad[0][0])))
    bad = np.argwhere(A != A.T)
    if len(bad):
        raise RingAxiomError("additive commutativity", tuple(int(v) for v in bad[0]))
    has_neg = (A == ring.zero).any(axis=1)
    if not has_neg.all():
        raise RingAxiomError("additive inverse", (int(np.argmin(has_neg)),))
    for side, row in (("left unity", M[ring.one]), ("right unity", M[:, ring.one])):
        bad = np.argwhere(row != r)
        if len(bad):
            raise RingAxiomError(side, (ring.one, int(bad[0][0])))
    for start in range(0, n, chunk):
        a = r[start:start + chunk, None, None]
        b = r[None, :, None]
        c = r[None, None, :]
        checks = (
            ("additive associativity", A[A[a, b], c] != A[a, A[b, c]]),
            ("multiplicative associativity", M[M[a, b], c] != M[a, M[b, c]]),
            ("left distributivity", M[a, A[b, c]] != A[M[a, b], M[a, c]]),
            ("right distributivity", M[A[a, b], c] != A[M[a, c], M[b, c]]),
        )
        for name, mask in checks:
            t = _first_mismatch(mask, start)
            if t is not None:
                raise RingAxiomError(name, t)
    return True


# ---------------------------------------------------------------- builders

def zn_ring(N):
    if N < 2:
        raise SpecError("zn:N needs N >= 2")
    r = np.arange(N)
    return FiniteRing((r[:, None] + r[None, :]) % N, (r[:, None] * r[None, :]) % N,
                      0, 1, name=f"Z_{N}")


def _is_prime(p):
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_divmod(num, den, p):
    """Divide integer-coefficient polynomials (ascending lists) over F_p."""
    num = [c % p for c in num]
    den = [c % p for c in den]
    while den and den[-1] == 0:
        den.pop()
    inv = pow(den[-1], -1, p)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        coef = num[k + len(den) - 1] * inv % p
        q[k] = coef
        if coef:
            for j, d in enumerate(den):
                num[k + j] = (num[k + j] - coef * d) % p
    rem = num[:len(den) - 1]
    return q, rem


def find_factor(modulus, p):
    """Return a monic factor of degree 1..deg/2 of ``modulus`` over F_p, or None.

    Exhaustive: every monic polynomial of each candidate degree is tried.
    """
    k = len(modulus) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            cand = list(low) + [1]
            _, rem = _poly_divmod(list(modulus), cand, p)
            if not any(rem):
                return cand
    return None


def smallest_irreducible(p, k):
    """Monic irreducible of degree k over F_p with the smallest base-p encoding."""
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        cand = low + [1]
        if find_factor(cand, p) is None:
            return cand
    raise InconsistencyError(f"no irreducible polynomial of degree {k} over F_{p}")


def _poly_label(coeffs, var="w"):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if i == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


def gf_ring(p, k, modulus=None):
    """The field F_{p^k} as F_p[w]/(modulus); element index = sum a_i p^i."""
    if not _is_prime(p):
        raise SpecError(f"gf: {p} is not prime")
    if k < 1:
        raise SpecError("gf: degree must be >= 1")
    if modulus is None:
        modulus = smallest_irreducible(p, k)
    modulus = [int(c) % p for c in modulus]
    if len(modulus) != k + 1 or modulus[-1] != 1:
        raise SpecError(f"gf: modulus must be monic of degree {k}, got {modulus}")
    factor = find_factor(modulus, p)
    if factor is not None:
        raise ReducibleModulusError(modulus, factor)
    size = p**k
    digits = np.array([[(i // p**j) % p for j in range(k)] for i in range(size)], dtype=np.int64)
    prod = np.zeros((size, size, 2 * k - 1), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            prod[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
    # x^j mod modulus for j >= k, as length-k coefficient vectors
    low = prod[:, :, :k] % p
    for j in range(k, 2 * k - 1):
        xj = [0] * j + [1]
        _, red = _poly_divmod(xj, modulus, p)
        red = np.array(red + [0] * (k - len(red)), dtype=np.int64)
        low = (low + prod[:, :, j, None] * red[None, None, :]) % p
    powers = p ** np.arange(k)
    mul = low @ powers
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ powers
    if k == 1:
        labels = [str(i) for i in range(size)]
        name = f"F_{p}"
    else:
        labels = [_poly_label(list(digits[i])) for i in range(size)]
        name = f"F_{p}^{k}"
    ring = FiniteRing(add, mul, 0, 1, name=name, labels=labels)
    ring.modulus = tuple(modulus)
    ring.characteristic = p
    ring.degree = k
    ring.coordinates = digits
    return ring


F2XYQ_LABELS = ("0", "x", "y", "x+y", "1", "1+x", "1+y", "1+x+y")


def f2xyq_ring():
    """F2[x,y]/(x^2,xy,y^2): index bit 2 is the F2 part, bits 0/1 the x/y coefficients.

    Built from the rules u^2 = 1, ab = 0, au = a for units u and a, b in
    the maximal ideal {0, x, y, x+y}.
    """
    add = np.array([[i ^ j for j in range(8)] for i in range(8)])
    mul = np.zeros((8, 8), dtype=np.intp)
    for i in range(8):
        for j in range(8):
            ai, aj = i >> 2, j >> 2
            ni, nj = i & 3, j & 3
            mul[i, j] = ((ai & aj) << 2) | ((nj if ai else 0) ^ (ni if aj else 0))
    return FiniteRing(add, mul, 0, 4, name="F2[x,y]/(x^2,xy,y^2)", labels=F2XYQ_LABELS)


def matrix_ring(inner, k):
    """The ring of k x k matrices over ``inner``; row-major mixed-radix indices."""
    from .linalg import mat_mul

    s = inner.size
    size = s ** (k * k)
    if size > MAX_RING_SIZE:
        raise SpecError(f"mat:{k} over a ring of size {s} has {size} elements, too many")
    digits = np.array(list(itertools.product(range(s), repeat=k * k)), dtype=np.intp)
    mats = digits.reshape(size, k, k)
    powers = s ** np.arange(k * k - 1, -1, -1)
    add = inner.add_table[mats[:, None], mats[None, :]].reshape(size, size, k * k) @ powers
    mul = mat_mul(inner, mats[:, None], mats[None, :]).reshape(size, size, k * k) @ powers
    eye = np.full((k, k), inner.zero)
    np.fill_diagonal(eye, inner.one)
    one = int(eye.reshape(-1) @ powers)
    zero = int(np.full(k * k, inner.zero) @ powers)
    labels = []
    for m in mats:
        rows = ",".join("[" + ",".join(inner.labels[v] for v in row) + "]" for row in m)
        labels.append("[" + rows + "]")
    ring = FiniteRing(add, mul, zero, one, name=f"M_{k}({inner.name})", labels=labels)
    ring.base_ring = inner
    ring.matrix_size = k
    ring.matrices = mats
    return ring


def product_ring(*rings):
    if len(rings) < 2:
        raise SpecError("prod needs at least two factors")
    sizes = [r.size for r in rings]
    digits = np.array(list(itertools.product(*(range(s) for s in sizes))), dtype=np.intp)
    size = len(digits)
    if size > MAX_RING_SIZE:
        raise SpecError(f"product ring of size {size} is too large")
    powers = np.array([int(np.prod(sizes[i + 1:])) for i in range(len(sizes))], dtype=np.intp)
    add = np.zeros((size, size), dtype=np.intp)
    mul = np.zeros((size, size), dtype=np.intp)
    for j, r in enumerate(rings):
        add += r.add_table[digits[:, None, j], digits[None, :, j]] * powers[j]
        mul += r.mul_table[digits[:, None, j], digits[None, :, j]] * powers[j]
    zero = int(sum(r.zero * int(w) for r, w in zip(rings, powers)))
    one = int(sum(r.one * int(w) for r, w in zip(rings, powers)))
    labels = ["(" + ",".join(r.labels[v] for r, v in zip(rings, d)) + ")" for d in digits]
    ring = FiniteRing(add, mul, zero, one,
                      name=" x ".join(r.name for r in rings), labels=labels)
    ring.factors = tuple(rings)
    return ring


# ---------------------------------------------------------------- spec parsing

def _split_top(text):
    """Split on commas that are not nested inside brackets."""
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


def _strip_parens(text):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise SpecError(f"expected a parenthesised spec, got {text!r}")
    return text[1:-1]


_GF_RE = re.compile(r"^gf:(\d+)(?:\^(\d+))?(?::\[([\d,\s]*)\])?$")


def build_ring(spec):
    """Build a ring from a spec string.

    Grammar::

        zn:<N> | gf:<p> | gf:<p>^<k> | gf:<p>^<k>:[c0,...,ck] | f2xyq
               | mat:<k>:(<spec>) | prod:(<spec>,<spec>,...)

    A bare ``gf:<p>^<k>`` picks the monic irreducible modulus with the
    smallest base-p encoding (x^4+x+1 for 2^4).
    """
    if not isinstance(spec, str):
        raise SpecError(f"ring spec must be a string, got {type(spec).__name__}")
    text = re.sub(r"\s+", "", spec)
    ring = _build(text)
    ring.spec = text
    return ring


_CACHE = {}


def cached_ring(spec):
    """``build_ring`` memoised on the normalised spec string."""
    key = re.sub(r"\s+", "", spec)
    if key not in _CACHE:
        _CACHE[key] = build_ring(key)
    return _CACHE[key]


def _build(text):
    if text == "f2xyq":
        return f2xyq_ring()
    if text.startswith("zn:"):
        try:
            N = int(text[3:])
        except ValueError:
            raise SpecError(f"bad zn spec {text!r}") from None
        return zn_ring(N)
    if text.startswith("gf:"):
        m = _GF_RE.match(text)
        if not m:
            raise SpecError(f"bad gf spec {text!r}")
        p = int(m.group(1))
        k = int(m.group(2) or 1)
        if p < 2:
            raise SpecError(f"bad gf spec {text!r}")
        if m.group(2) is None and not _is_prime(p):
            # gf:q with q a prime power
            q, p = p, next((d for d in range(2, p + 1) if p % d == 0), p)
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            if q != 1:
                raise SpecError(f"gf: {m.group(1)} is not a prime power")
        modulus = None
        if m.group(3) is not None:
            modulus = [int(c) for c in m.group(3).split(",") if c != ""]
        return gf_ring(p, k, modulus)
    if text.startswith("mat:"):
        m = re.match(r"^mat:(\d+):(\(.*\))$", text)
        if not m:
            raise SpecError(f"bad mat spec {text!r}")
        inner = _build(_strip_parens(m.group(2)))
        return matrix_ring(inner, int(m.group(1)))
    if text.startswith("prod:"):
        inner = _strip_parens(text[5:])
        return product_ring(*(_build(p) for p in _split_top(inner)))
    raise SpecError(f"unknown ring spec {text!r}")


# ---------------------------------------------------------------- ideals and units

def units(ring):
    """Sorted indices of the elements with a two-sided inverse."""
    M = ring.mul_table
    right = M == ring.one
    left = M.T == ring.one
    return tuple(int(a) for a in np.nonzero((right & left).any(axis=1))[0])


def inverse(ring, a):
    M = ring.mul_table
    hits = np.nonzero((M[a] == ring.one) & (M[:, a] == ring.one))[0]
    return int(hits[0]) if len(hits) else None


def _additive_span(ring, seeds):
    """Smallest additive subgroup containing ``seeds`` (a boolean mask)."""
    mask = np.zeros(ring.size, dtype=bool)
    mask[ring.zero] = True
    gens = np.nonzero(seeds)[0]
    if len(gens) == 0:
        return mask
    while True:
        grown = mask.copy()
        grown[ring.add_table[np.ix_(np.nonzero(mask)[0], gens)].ravel()] = True
        if np.array_equal(grown, mask):
            return mask
        mask = grown


def right_ideal(ring, generators):
    """The right ideal sum g_i R, as a frozenset of indices."""
    seeds = np.zeros(ring.size, dtype=bool)
    for g in generators:
        seeds[ring.mul_table[g]] = True
    return frozenset(int(i) for i in np.nonzero(_additive_span(ring, seeds))[0])


def left_ideal(ring, generators):
    """The left ideal sum R g_i, as a frozenset of indices."""
    seeds = np.zeros(ring.size, dtype=bool)
    for g in generators:
        seeds[ring.mul_table[:, g]] = True
    return frozenset(int(i) for i in np.nonzero(_additive_span(ring, seeds))[0])


def annihilator(ring, generators, side):
    """``side="left"``: ann_l of the right ideal generated by ``generators``.
    ``side="right"``: ann_r of the left ideal generated by ``generators``.
    """
    side = _side(side)
    M = ring.mul_table
    if side == "left":
        ideal = sorted(right_ideal(ring, generators))
        mask = (M[:, ideal] == ring.zero).all(axis=1)
    else:
        ideal = sorted(left_ideal(ring, generators))
        mask = (M[ideal, :] == ring.zero).all(axis=0)
    result = frozenset(int(i) for i in np.nonzero(mask)[0])
    opposite = left_ideal if side == "left" else right_ideal
    if opposite(ring, result) != result:
        raise InconsistencyError(f"{side} annihilator is not a {side} ideal")
    return result


def _side(side):
    s = str(getattr(side, "value", side)).lower()
    if s in ("l", "left"):
        return "left"
    if s in ("r", "right"):
        return "right"
    raise ValueError(f"side must be left or right, got {side!r}")


@dataclass
class DoubleAnnihilatorReport:
    holds: bool
    ideals_checked: int
    side: str | None = None
    generators: tuple = ()
    ideal: frozenset = frozenset()
    double_annihilator: frozenset = frozenset()


def double_annihilator_holds(ring, max_ideal_generators=2):
    """Check ann_r(ann_l(I)) = I for right ideals and the mirror for left ideals.

    Every one-sided ideal generated by at most ``max_ideal_generators``
    elements is visited (deduplicated); the first failure is returned as a
    witness, in canonical generator order.
    """
    seen = {"right": set(), "left": set()}
    checked = 0
    for k in range(1, max_ideal_generators + 1):
        for gens in itertools.combinations(range(ring.size), k):
            for side in ("right", "left"):
                ideal = right_ideal(ring, gens) if side == "right" else left_ideal(ring, gens)
                if ideal in seen[side]:
                    continue
                seen[side].add(ideal)
                checked += 1
                if side == "right":
                    back = annihilator(ring, annihilator(ring, gens, "left"), "right")
                else:
                    back = annihilator(ring, annihilator(ring, gens, "right"), "left")
                if back != ideal:
                    return DoubleAnnihilatorReport(False, checked, side, gens, ideal, back)
    return DoubleAnnihilatorReport(True, checked)


def cyclic_unit_witness(ring, x, y):
    """If xS = yS return the smallest unit a with x = y*a, otherwise None."""
    if right_ideal(ring, [x]) != right_ideal(ring, [y]):
        return None
    for a in units(ring):
        if ring.mul_table[y, a] == x:
            return a
    raise InconsistencyError(f"xS = yS but no unit a with x = y*a (x={x}, y={y})")
