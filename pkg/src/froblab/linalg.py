"""Matrices and row vectors over table rings.

Vectors of R^n are integer arrays of element indices.  A vector's *rank* is
its mixed-radix number with the first coordinate most significant, so rank
order is lexicographic order of coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import check_budget, enumeration_budget
from .errors import BudgetExceeded, InconsistencyError


def mat_mul(ring, A, B):
    """Batched matrix product over ``ring``; shapes (..., p, q) @ (..., q, r)."""
    A = np.asarray(A)
    B = np.asarray(B)
    add, mul = ring.add_table, ring.mul_table
    acc = None
    for l in range(A.shape[-1]):
        term = mul[A[..., :, l, None], B[..., None, l, :]]
        acc = term if acc is None else add[acc, term]
    return acc


def vec_mat(ring, X, M):
    """Row vectors times matrices: (..., n) @ (..., n, m) -> (..., m)."""
    X = np.asarray(X)
    M = np.asarray(M)
    add, mul = ring.add_table, ring.mul_table
    acc = None
    for i in range(X.shape[-1]):
        term = mul[X[..., i, None], M[..., i, :]]
        acc = term if acc is None else add[acc, term]
    return acc


def mat_vec(ring, M, X):
    """(M x^T)^T for row vectors x: y_i = sum_j M_ij x_j (ring order kept)."""
    X = np.asarray(X)
    M = np.asarray(M)
    add, mul = ring.add_table, ring.mul_table
    acc = None
    for j in range(X.shape[-1]):
        term = mul[M[..., :, j], X[..., j, None]]
        acc = term if acc is None else add[acc, term]
    return acc


def dot(ring, X, Y):
    """Standard inner product <x, y> = sum_i x_i y_i over the last axis."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    add, mul = ring.add_table, ring.mul_table
    acc = None
    for i in range(X.shape[-1]):
        term = mul[X[..., i], Y[..., i]]
        acc = term if acc is None else add[acc, term]
    return acc


def identity(ring, n):
    eye = np.full((n, n), ring.zero, dtype=np.intp)
    np.fill_diagonal(eye, ring.one)
    return eye


class FreeModule:
    """R^n with all vectors enumerated in rank order."""

    def __init__(self, ring, n):
        self.ring = ring
        self.n = n
        s = ring.size
        self.size = s**n
        self.powers = np.array([s ** (n - 1 - i) for i in range(n)], dtype=np.intp)
        r = np.arange(self.size)
        self.vectors = ((r[:, None] // self.powers[None, :]) % s).astype(np.intp)
        self.vectors.setflags(write=False)
        self.zero_rank = self.rank([ring.zero] * n)

    def __repr__(self):
        return f"FreeModule({self.ring.name}, n={self.n})"

    def rank(self, x):
        return np.asarray(x, dtype=np.intp) @ self.powers if np.ndim(x) > 1 else int(
            np.asarray(x, dtype=np.intp) @ self.powers)

    def vector(self, rank):
        return tuple(int(v) for v in self.vectors[rank])

    def add(self, x, y):
        return self.ring.add_table[np.asarray(x), np.asarray(y)]

    def label(self, x):
        lab = self.ring.labels
        return "(" + ",".join(lab[int(v)] for v in x) + ")"

    def unit_vector(self, i, scalar=None):
        e = np.full(self.n, self.ring.zero, dtype=np.intp)
        e[i] = self.ring.one if scalar is None else scalar
        return e

    def support(self, x):
        return frozenset(i for i, v in enumerate(x) if v != self.ring.zero)


@lru_cache(maxsize=None)
def free_module(ring, n):
    return FreeModule(ring, n)


@dataclass(frozen=True)
class RingMatrix:
    ring: object
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_array(cls, ring, arr):
        arr = np.asarray(arr)
        return cls(ring, int(arr.shape[0]), int(arr.shape[1]),
                   tuple(int(v) for v in arr.reshape(-1)))

    @classmethod
    def from_rows(cls, ring, rows):
        return cls.from_array(ring, np.array(rows, dtype=np.intp))

    @property
    def array(self):
        return np.array(self.entries, dtype=np.intp).reshape(self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __matmul__(self, other):
        return RingMatrix.from_array(self.ring, mat_mul(self.ring, self.array, other.array))

    def transpose(self):
        return RingMatrix.from_array(self.ring, self.array.T)

    @property
    def T(self):
        return self.transpose()

    def is_identity(self):
        return self.rows == self.cols and np.array_equal(self.array, identity(self.ring, self.rows))

    def to_list(self):
        return self.array.tolist()

    def pretty(self):
        lab = self.ring.labels
        return "[" + "; ".join(" ".join(lab[v] for v in row) for row in self.array) + "]"

    def __repr__(self):
        return f"RingMatrix({self.pretty()})"


def search_matrices(ring, n, *, classes=None, row_candidates=None, constraints=(),
                    injective=True, budget=None, stats=None):
    """Enumerate n x n matrices M row by row, pruning on partial images.

    After k rows are fixed, every vector x supported on the first k
    coordinates has its image xM fixed.  Branches are cut when

    * ``injective`` and two such vectors share an image,
    * ``classes`` (a block id per vector rank) differs between x and xM,
    * a constraint ``(g, target_rank)`` whose support ends at row k has
      gM != target.

    Candidates for each row are visited in rank order, so matrices come out
    in lexicographic order of their entries.  Yields ``(M, image_ranks)``
    where ``image_ranks[rank(x)] = rank(xM)`` for every x in R^n.
    If ``stats`` is a dict, ``stats["nodes"]`` counts the candidate rows tried.
    """
    V = free_module(ring, n)
    s = ring.size
    add, mul = ring.add_table, ring.mul_table
    scalars = np.arange(s)
    cons_at = [[] for _ in range(n)]
    for g, target in constraints:
        g = np.asarray(g, dtype=np.intp)
        supp = [i for i in range(n) if g[i] != ring.zero]
        last = supp[-1] if supp else 0
        cons_at[last].append((int(V.rank(g)) // int(V.powers[last]), int(target)))

    cands = []
    for k in range(n):
        if row_candidates is not None and row_candidates[k] is not None:
            rows = np.asarray(sorted(int(r) for r in row_candidates[k]), dtype=np.intp)
        else:
            rows = np.arange(V.size)
        if classes is not None:
            # c*r must sit in the class of c*e_k for every scalar c
            rv = V.vectors[rows]
            scaled = mul[scalars[:, None, None], rv[None, :, :]]
            img_cls = classes[scaled @ V.powers]
            src_cls = classes[scalars * V.powers[k] + V.zero_rank - ring.zero * V.powers[k]]
            rows = rows[(img_cls == src_cls[:, None]).all(axis=0)]
        cands.append(rows)
    limit = enumeration_budget(budget)
    visited = [0]

    # source ranks of vectors supported on the first k+1 coordinates, in prefix order
    def src_ranks(k):
        pref = np.arange(s ** (k + 1))
        tail = V.zero_rank % int(V.powers[k]) if k + 1 < n else 0
        return pref * int(V.powers[k]) + tail

    srcs = [src_ranks(k) for k in range(n)]
    rows_sel = np.zeros((n, n), dtype=np.intp)
    zero_img = np.full((1, n), ring.zero, dtype=np.intp)

    def rec(k, imgs):
        visited[0] += len(cands[k])
        if stats is not None:
            stats["nodes"] = visited[0]
        if visited[0] > limit:
            raise BudgetExceeded("matrix search nodes", visited[0], limit)
        for r in cands[k]:
            row = V.vectors[r]
            new = add[imgs[:, None, :], mul[scalars[None, :, None], row[None, None, :]]]
            new = new.reshape(-1, n)
            ranks = new @ V.powers
            if injective and len(np.unique(ranks)) != len(ranks):
                continue
            if classes is not None and not np.array_equal(classes[ranks], classes[srcs[k]]):
                continue
            if any(ranks[p] != t for p, t in cons_at[k]):
                continue
            rows_sel[k] = row
            if k + 1 == n:
                image = np.empty(V.size, dtype=np.intp)
                image[srcs[k]] = ranks
                yield rows_sel.copy(), image
            else:
                yield from rec(k + 1, new)

    if stats is not None:
        stats["nodes"] = 0
    if n == 0:
        return
    yield from rec(0, zero_img)


def invert_from_images(ring, M, image_ranks):
    """Two-sided inverse of M given the permutation x -> xM of R^n."""
    n = M.shape[0]
    V = free_module(ring, n)
    inv_perm = np.empty_like(image_ranks)
    inv_perm[image_ranks] = np.arange(len(image_ranks))
    B = np.array([V.vectors[inv_perm[V.rank(V.unit_vector(i))]] for i in range(n)])
    return B


def is_invertible(ring, M):
    n = M.shape[0]
    V = free_module(ring, n)
    ranks = vec_mat(ring, V.vectors, M) @ V.powers
    return len(np.unique(ranks)) == V.size


def inverse_matrix(ring, M):
    """Inverse of a square matrix, or None when it is singular."""
    M = np.asarray(M, dtype=np.intp)
    n = M.shape[0]
    V = free_module(ring, n)
    ranks = vec_mat(ring, V.vectors, M) @ V.powers
    if len(np.unique(ranks)) != V.size:
        return None
    B = invert_from_images(ring, M, ranks)
    eye = identity(ring, n)
    if not (np.array_equal(mat_mul(ring, M, B), eye) and np.array_equal(mat_mul(ring, B, M), eye)):
        raise InconsistencyError("computed inverse fails AB = BA = I")
    return B


def gl_array(ring, n, budget=None):
    """All invertible n x n matrices as a (count, n, n) array, lexicographic."""
    check_budget(f"GL({n}, {ring.name})", ring.size ** (n * n), budget)
    mats, invs = [], []
    for M, image in search_matrices(ring, n, injective=True, budget=budget):
        mats.append(M)
        invs.append(invert_from_images(ring, M, image))
    if not mats:
        return np.zeros((0, n, n), dtype=np.intp)
    mats = np.array(mats)
    invs = np.array(invs)
    eye = identity(ring, n)
    # right inverse by search, confirmed two-sided in one batch
    if not ((mat_mul(ring, mats, invs) == eye).all() and (mat_mul(ring, invs, mats) == eye).all()):
        raise InconsistencyError("GL enumeration produced a matrix without two-sided inverse")
    return mats


def enumerate_gl(ring, n, budget=None):
    """All invertible n x n matrices over ``ring`` as RingMatrix values."""
    return [RingMatrix.from_array(ring, M) for M in gl_array(ring, n, budget)]
