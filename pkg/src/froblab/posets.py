"""Posets on {0, ..., n-1}: order ideals, poset weights and the hierarchical test.

Elements are 0-based internally; the text format and printed output are
1-based (``n=4; 1<2; 3<4``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import SpecError


class Poset:
    """A partial order given by its (reflexive) relation matrix ``leq``."""

    def __init__(self, leq, validate=True):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise SpecError("poset relation must be a square matrix")
        self.n = leq.shape[0]
        leq.setflags(write=False)
        self.leq = leq
        if validate:
            self.validate()

    def validate(self):
        L = self.leq
        if not L.diagonal().all():
            raise SpecError("poset relation is not reflexive")
        if (L & L.T & ~np.eye(self.n, dtype=bool)).any():
            raise SpecError("poset relation is not antisymmetric")
        if ((L.astype(int) @ L.astype(int) > 0) & ~L).any():
            raise SpecError("poset relation is not transitive")

    @classmethod
    def from_relations(cls, n, pairs):
        """Transitive closure of strict relations (i, j) meaning i < j (0-based)."""
        L = np.eye(n, dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise SpecError(f"bad relation {i + 1}<{j + 1}")
            L[i, j] = True
        for k in range(n):
            L = L | (L[:, k:k + 1] & L[k:k + 1, :])
        return cls(L)

    @classmethod
    def parse(cls, text):
        """``n=4; 1<2; 3<4`` (covering relations, 1-based; chains like 1<2<3 allowed)."""
        parts = [p.strip() for p in text.replace("\n", ";").split(";") if p.strip()
                 and not p.strip().startswith("#")]
        if not parts or not parts[0].replace(" ", "").startswith("n="):
            raise SpecError("poset text must start with n=<size>")
        try:
            n = int(parts[0].replace(" ", "")[2:])
        except ValueError:
            raise SpecError(f"bad poset size in {parts[0]!r}") from None
        pairs = []
        for p in parts[1:]:
            try:
                chain = [int(t) - 1 for t in p.split("<")]
            except ValueError:
                raise SpecError(f"bad poset relation {p!r}") from None
            if len(chain) < 2:
                raise SpecError(f"bad poset relation {p!r}")
            pairs.extend(zip(chain, chain[1:]))
        return cls.from_relations(n, pairs)

    @classmethod
    def chain(cls, n):
        return cls.from_relations(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def antichain(cls, n):
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def hierarchical(cls, levels):
        """H(n; n_1, ..., n_t) with consecutive blocks of elements as levels."""
        n = sum(levels)
        level = np.repeat(np.arange(len(levels)), levels)
        return cls((level[:, None] < level[None, :]) | np.eye(n, dtype=bool))

    @classmethod
    def disjoint_chains(cls, t, length):
        """t chains 1<..<length, length+1<..<2 length, ... (the NRT poset)."""
        pairs = [(c * length + i, c * length + i + 1) for c in range(t) for i in range(length - 1)]
        return cls.from_relations(t * length, pairs)

    def less(self, i, j):
        return bool(self.leq[i, j]) and i != j

    def to_text(self):
        covers = [(i, j) for i in range(self.n) for j in range(self.n)
                  if self.less(i, j) and not any(self.less(i, k) and self.less(k, j)
                                                 for k in range(self.n))]
        return "; ".join([f"n={self.n}"] + [f"{i + 1}<{j + 1}" for i, j in covers])

    def __repr__(self):
        return f"Poset({self.to_text()})"

    def __eq__(self, other):
        return isinstance(other, Poset) and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash(self.leq.tobytes())

    def ideal_generated(self, S):
        """Downward closure of S."""
        S = list(S)
        if not S:
            return frozenset()
        return frozenset(int(i) for i in np.nonzero(self.leq[:, S].any(axis=1))[0])

    @cached_property
    def mask_weights(self):
        """|<S>| for every subset S encoded as a bitmask (bit i = element i)."""
        n = self.n
        down = [sum(1 << j for j in range(n) if self.leq[j, i]) for i in range(n)]
        ideal = np.zeros(2**n, dtype=np.int64)
        for mask in range(1, 2**n):
            low = (mask & -mask).bit_length() - 1
            ideal[mask] = ideal[mask & (mask - 1)] | down[low]
        out = np.array([bin(int(m)).count("1") for m in ideal], dtype=np.intp)
        out.setflags(write=False)
        return out

    def weight(self, x, zero=0):
        """Poset weight |<supp x>| of a vector of element indices."""
        return len(self.ideal_generated([i for i, v in enumerate(x) if v != zero]))

    def level_sets(self):
        """Gamma^(1) = min(P), Gamma^(2) = min(P minus Gamma^(1)), ..."""
        remaining = set(range(self.n))
        levels = []
        while remaining:
            mins = sorted(i for i in remaining
                          if not any(self.less(j, i) for j in remaining))
            levels.append(tuple(mins))
            remaining -= set(mins)
        return levels


@dataclass(frozen=True)
class HierarchicalShape:
    levels: tuple
    level_of: tuple

    @property
    def sizes(self):
        return tuple(len(lv) for lv in self.levels)

    def describe(self):
        return f"H({sum(self.sizes)}; {', '.join(map(str, self.sizes))})"


@dataclass(frozen=True)
class NonHierarchicalWitness:
    """Level ``level`` (1-based) with alpha in it and beta one level up, alpha not < beta.

    ``B`` is the set of elements of the level below beta; ``B_prime`` adds alpha.
    ``lower`` is the union of all levels strictly below ``level``.  Elements are
    0-based.
    """

    levels: tuple
    level: int
    alpha: int
    beta: int
    B: frozenset
    B_prime: frozenset
    lower: frozenset

    def describe(self):
        one = lambda s: "{" + ",".join(str(i + 1) for i in sorted(s)) + "}"
        return (f"non-hierarchical: level={self.level}, alpha={self.alpha + 1}, "
                f"beta={self.beta + 1}, B={one(self.B)}, B'={one(self.B_prime)}")


def classify_hierarchical(P):
    """HierarchicalShape, or the lexicographically least (level, alpha, beta) witness."""
    levels = P.level_sets()
    level_of = [0] * P.n
    for k, lv in enumerate(levels):
        for i in lv:
            level_of[i] = k
    hier = all(P.less(i, j) == (level_of[i] < level_of[j])
               for i in range(P.n) for j in range(P.n) if i != j)
    if hier:
        return HierarchicalShape(tuple(levels), tuple(level_of))
    for ell in range(len(levels) - 1):
        for alpha in levels[ell]:
            for beta in levels[ell + 1]:
                if not P.less(alpha, beta):
                    B = frozenset(i for i in levels[ell] if P.less(i, beta))
                    lower = frozenset(i for lv in levels[:ell] for i in lv)
                    return NonHierarchicalWitness(tuple(levels), ell + 1, alpha, beta, B,
                                                  B | {alpha}, lower)
    raise AssertionError("non-hierarchical poset without a level witness")


def is_hierarchical(P):
    return isinstance(classify_hierarchical(P), HierarchicalShape)


def enumerate_posets(n):
    """All posets on n elements up to isomorphism (canonical minimal relation form)."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    perms = list(itertools.permutations(range(n)))
    seen = {}
    for bits in range(2 ** len(pairs)):
        rel = np.eye(n, dtype=bool)
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                rel[i, j] = True
        if (rel & rel.T & ~np.eye(n, dtype=bool)).any():
            continue
        if ((rel.astype(int) @ rel.astype(int) > 0) & ~rel).any():
            continue
        key = min(rel[np.ix_(p, p)].tobytes() for p in perms)
        if key not in seen:
            seen[key] = Poset(rel)
    return [seen[k] for k in sorted(seen)]


@dataclass
class NonHierarchicalCounterexample:
    witness: NonHierarchicalWitness
    code: object
    image_code: object
    map: object
    weight: int
    extension_count: int | None


def nonhier_counterexample(P, ring, verify=True):
    """Codes <e_hat> and <e_beta> with e_hat = sum over B' of e_i and the isometry
    e_hat -> e_beta, which has no weight-preserving extension to R^n."""
    from .characters import is_frobenius
    from .extension import code_closure, extension_search, preserves_weight, LinearMap
    from .weights import PosetWeight

    wit = classify_hierarchical(P)
    if isinstance(wit, HierarchicalShape):
        raise SpecError(f"poset {P.to_text()} is hierarchical")
    if not is_frobenius(ring):
        raise SpecError(f"{ring.name} is not Frobenius")
    e_hat = [ring.zero] * P.n
    for i in wit.B_prime:
        e_hat[i] = ring.one
    e_beta = [ring.zero] * P.n
    e_beta[wit.beta] = ring.one
    C = code_closure(ring, P.n, [e_hat])
    f = LinearMap(C, [e_beta])
    w = PosetWeight(ring, P)
    target = len(wit.B) + len(wit.lower) + 1
    if not (w(e_hat) == w(e_beta) == target):
        raise AssertionError("constructed vectors do not have the predicted weight")
    if not (preserves_weight(f, w) and f.is_injective):
        raise AssertionError("constructed map is not an isometry")
    count = None
    if verify:
        count = len(extension_search(f, weight=w))
        if count:
            raise AssertionError("constructed isometry extends, contradicting the construction")
    return NonHierarchicalCounterexample(wit, C, f.image, f, target, count)
