"""Partitions of finite indexed sets and their character-theoretic duals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .characters import (_require_generating, additive_decomposition, generating_characters,
                         pairing_table, reduction_matrix)
from .errors import InconsistencyError
from .linalg import free_module


def _canonical(labels):
    """Relabel blocks 0, 1, ... in order of first occurrence."""
    labels = np.asarray(labels)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    return remap[inv.reshape(-1)].astype(np.intp)


class Partition:
    """A partition of {0, ..., N-1}; ``block_of[i]`` is the block id of i."""

    def __init__(self, labels):
        block_of = _canonical(labels)
        block_of.setflags(write=False)
        self.block_of = block_of
        self.universe_size = len(block_of)
        self.block_count = int(block_of.max()) + 1 if len(block_of) else 0

    @classmethod
    def from_blocks(cls, blocks, universe_size=None):
        if universe_size is None:
            universe_size = sum(len(b) for b in blocks)
        labels = np.full(universe_size, -1, dtype=np.intp)
        for i, b in enumerate(blocks):
            for x in b:
                if labels[x] != -1:
                    raise ValueError(f"element {x} appears in two blocks")
                labels[x] = i
        if (labels < 0).any():
            raise ValueError("blocks do not cover the universe")
        return cls(labels)

    @classmethod
    def singletons(cls, size):
        return cls(np.arange(size))

    @classmethod
    def whole(cls, size):
        return cls(np.zeros(size, dtype=np.intp))

    def __len__(self):
        return self.block_count

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.block_of, other.block_of)

    def __hash__(self):
        return hash(self.block_of.tobytes())

    def __repr__(self):
        return f"Partition(universe={self.universe_size}, blocks={self.block_count})"

    def blocks(self):
        order = np.argsort(self.block_of, kind="stable")
        bounds = np.cumsum(np.bincount(self.block_of, minlength=self.block_count))[:-1]
        return [tuple(int(i) for i in b) for b in np.split(order, bounds)]

    def block_sizes(self):
        return np.bincount(self.block_of, minlength=self.block_count)

    def is_finer(self, other):
        """Every block of self lies inside a block of other."""
        if self.universe_size != other.universe_size:
            raise ValueError("partitions of different universes")
        # the other's block id must be constant on each block of self
        rep = np.full(self.block_count, -1, dtype=np.intp)
        rep[self.block_of] = other.block_of
        finer = bool(np.array_equal(rep[self.block_of], other.block_of))
        if finer and self.block_count < other.block_count:
            raise InconsistencyError("finer partition with fewer blocks")
        return finer

    def meet(self, other):
        return Partition(self.block_of * (other.block_count + 1) + other.block_of)

    def to_json(self):
        return {"universe_size": self.universe_size, "block_of": self.block_of.tolist()}


# ---------------------------------------------------------------- standard partitions

def hamming_partition(ring, n):
    V = free_module(ring, n)
    return Partition((V.vectors != ring.zero).sum(axis=1))


def weight_partition(values):
    """Partition by equal values of an arbitrary hashable per-element weight."""
    keys = {}
    labels = [keys.setdefault(v, len(keys)) for v in values]
    return Partition(labels)


# ---------------------------------------------------------------- duality

@dataclass(frozen=True)
class KrawtchoukTable:
    """entries[i, j] is the coefficient vector of sum_{a in P_j} psi_i(a), one row
    per block of the dual partition (represented by its first member)."""

    m: int
    row_representatives: tuple
    entries: np.ndarray

    def to_json(self):
        return {"m": self.m, "rows": self.entries.tolist()}


def _signatures(T, block_of, block_count, m):
    """Per-row signature: for every block, the reduced cyclotomic block sum."""
    rows, cols = T.shape
    flat = (np.arange(rows, dtype=np.int64)[:, None] * (block_count * m)
            + np.asarray(block_of, dtype=np.int64)[None, :] * m + T)
    counts = np.bincount(flat.ravel(), minlength=rows * block_count * m)
    counts = counts.reshape(rows, block_count, m)
    return counts @ reduction_matrix(m)


def _dual_by_table(T, P, m):
    """Partition of the rows of T (character or vector index) by block sums over P."""
    if T.shape[1] != P.universe_size:
        raise ValueError("partition does not match the table")
    sig = _signatures(T, P.block_of, P.block_count, m)
    flat = sig.reshape(sig.shape[0], -1)
    _, inv = np.unique(flat, axis=0, return_inverse=True)
    Q = Partition(inv.reshape(-1))
    reps = tuple(int(np.argmax(Q.block_of == b)) for b in range(Q.block_count))
    return Q, KrawtchoukTable(m, reps, sig[list(reps)])


def dual_partition_group(P, dec):
    """Dual partition of the character group, characters indexed in exponent-tuple order."""
    return _dual_by_table(dec.character_table(), P, dec.exponent)


def group_bidual(P, dec):
    """The bidual as a partition of the group itself (a(psi) = psi(a))."""
    T = dec.character_table()
    Q, _ = _dual_by_table(T, P, dec.exponent)
    B, _ = _dual_by_table(T.T, Q, dec.exponent)
    return B


def chi_dual(P, chi, side, n=None, with_table=False):
    """Left or right chi-dual of a partition of R^n, again a partition of R^n."""
    _require_generating(chi)
    ring = chi.decomposition.ring
    if n is None:
        n = _infer_n(ring, P.universe_size)
    Q, K = _dual_by_table(pairing_table(chi, n, side), P, chi.m)
    return (Q, K) if with_table else Q


def _infer_n(ring, size):
    n, s = 0, 1
    while s < size:
        s *= ring.size
        n += 1
    if s != size:
        raise ValueError(f"universe of size {size} is not a power of |R| = {ring.size}")
    return n


def is_reflexive(P, chi, n=None):
    """|P| = |left dual|, cross-checked against the right dual of the left dual."""
    L = chi_dual(P, chi, "left", n)
    criterion = len(P) == len(L)
    direct = chi_dual(L, chi, "right", n) == P
    if criterion != direct:
        raise InconsistencyError("reflexivity criterion disagrees with the computed bidual")
    return criterion


@dataclass
class BidualReport:
    holds: bool
    right_of_left_equals_bidual: bool
    left_of_right_equals_bidual: bool
    self_dual_sides_agree: bool
    count_inequality: bool
    bidual_finer: bool
    left_dual_blocks: int
    right_dual_blocks: int
    reflexive: bool


def verify_bidual_identities(P, chi, n=None):
    ring = chi.decomposition.ring
    if n is None:
        n = _infer_n(ring, P.universe_size)
    L = chi_dual(P, chi, "left", n)
    R = chi_dual(P, chi, "right", n)
    B = group_bidual(P, additive_decomposition(ring, n))
    rl = chi_dual(L, chi, "right", n) == B
    lr = chi_dual(R, chi, "left", n) == B
    sides = (P == L) == (P == R)
    ineq = len(P) <= len(L)
    finer = B.is_finer(P)
    return BidualReport(rl and lr and sides and ineq and finer, rl, lr, sides, ineq, finer,
                        len(L), len(R), B == P)


# ---------------------------------------------------------------- witness searches

def set_partitions(items):
    """All set partitions of a list, as lists of blocks (restricted growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in set_partitions(rest):
        yield [[first]] + sub
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]


def find_left_right_witness(ring, chi, n=1, seed=0, tries=2000, max_blocks=3):
    """A partition whose left and right chi-duals differ (seeded random search)."""
    rng = np.random.default_rng(seed)
    V = free_module(ring, n)
    for _ in range(tries):
        labels = rng.integers(0, max_blocks, size=V.size)
        P = Partition(labels)
        L = chi_dual(P, chi, "left", n)
        R = chi_dual(P, chi, "right", n)
        if L != R:
            return P, L, R
    return None


def find_character_dependence_witness(ring, n=1, max_universe=10):
    """A partition whose left dual changes with the generating character.

    Set partitions of R^n are enumerated exhaustively (so |R^n| must be
    small); returns (P, chi1, chi2, dual1, dual2) or None.
    """
    V = free_module(ring, n)
    if V.size > max_universe:
        raise ValueError("universe too large for exhaustive set-partition search")
    chars = generating_characters(ring)
    if len(chars) < 2:
        return None
    for blocks in set_partitions(range(V.size)):
        P = Partition.from_blocks(blocks, V.size)
        duals = [chi_dual(P, c, "left", n) for c in chars]
        for (c1, d1), (c2, d2) in itertools.combinations(zip(chars, duals), 2):
            if d1 != d2:
                return P, c1, c2, d1, d2
    return None
