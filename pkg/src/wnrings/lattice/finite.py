"""Finite modular lattices and their cube rank.

Three characterizations are implemented independently:

* ``meetDrop``: the largest family a_1..a_m where omitting any a_i changes
  the meet (exhaustive search);
* ``joinDrop``: the dual statement for joins;
* ``strictCube``: the largest r admitting a base A and B_1..B_r > A with
  (B_1 ∨ ... ∨ B_i) ∧ B_{i+1} = A.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from ..errors import ConsistencyError, NotModularError, PreconditionError, SizeBoundError

DEFAULT_MAX_SIZE = 64
METHODS = ("strictCube", "meetDrop", "joinDrop")


@dataclass(frozen=True)
class CubeWitness:
    base: int
    independent: tuple

    def check(self, L: "FinLattice") -> bool:
        A = self.base
        acc = None
        for B in self.independent:
            if not L.lt(A, B):
                return False
            if acc is not None and L.meet(acc, B) != A:
                return False
            acc = B if acc is None else L.join(acc, B)
        return True


class FinLattice:
    """A finite lattice given by its order relation.

    ``leq[i][j]`` is True iff element i <= element j.  Meet and join tables
    are derived (an error is raised if some pair lacks a bound) and
    modularity is checked unless ``check_modular=False``.
    """

    def __init__(self, leq, labels: Sequence[Hashable] | None = None, check_modular: bool = True):
        M = np.array(leq, dtype=bool)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
            raise PreconditionError("order relation must be a nonempty square matrix")
        n = M.shape[0]
        if not M.diagonal().all():
            raise PreconditionError("order relation is not reflexive")
        if (M & M.T & ~np.eye(n, dtype=bool)).any():
            raise PreconditionError("order relation is not antisymmetric")
        if ((M.astype(np.int64) @ M.astype(np.int64) > 0) & ~M).any():
            raise PreconditionError("order relation is not transitive")
        self.size = n
        self.leq_matrix = M
        self.labels = list(labels) if labels is not None else list(range(n))
        self._down = [int(sum(1 << j for j in range(n) if M[j, i])) for i in range(n)]
        self._up = [int(sum(1 << j for j in range(n) if M[i, j])) for i in range(n)]
        by_down = {m: i for i, m in enumerate(self._down)}
        by_up = {m: i for i, m in enumerate(self._up)}
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                lo = self._down[a] & self._down[b]
                hi = self._up[a] & self._up[b]
                g = self._greatest(lo, by_down)
                l = self._least(hi, by_up)
                if g is None or l is None:
                    raise PreconditionError(f"elements {a} and {b} lack a meet or join")
                meet[a, b] = meet[b, a] = g
                join[a, b] = join[b, a] = l
        self.meet_table = meet
        self.join_table = join
        # top has every element below it, bottom every element above
        self.top = int(self._greatest(self._down_all(), by_down))
        self.bottom = int(self._least(self._down_all(), by_up))
        self.height = self._heights()
        if check_modular:
            self.check_modular()

    def _down_all(self) -> int:
        return (1 << self.size) - 1

    def _greatest(self, mask: int, by_down: dict):
        # the glb is the member of ``mask`` whose down-set is exactly ``mask``
        return by_down.get(mask)

    def _least(self, mask: int, by_up: dict):
        return by_up.get(mask)

    def _heights(self) -> list[int]:
        order = sorted(range(self.size), key=lambda i: bin(self._down[i]).count("1"))
        h = [0] * self.size
        for i in order:
            below = [j for j in range(self.size) if j != i and self.leq_matrix[j, i]]
            h[i] = 1 + max((h[j] for j in below), default=-1)
        return h

    # --- construction helpers --------------------------------------------

    @classmethod
    def from_covers(cls, n: int, covers, labels=None, check_modular: bool = True) -> "FinLattice":
        """Lattice from ``n`` elements and cover pairs (i, j) meaning i ⋖ j."""
        if n < 1:
            raise PreconditionError("lattice needs at least one element")
        M = np.eye(n, dtype=bool)
        for i, j in covers:
            if not (0 <= i < n and 0 <= j < n):
                raise PreconditionError(f"cover ({i}, {j}) out of range")
            if i == j:
                raise PreconditionError(f"cover ({i}, {j}) is reflexive")
            M[i, j] = True
        for k in range(n):
            M |= np.outer(M[:, k], M[k, :])
        return cls(M, labels, check_modular)

    @classmethod
    def from_order(cls, elements: Sequence, leq, check_modular: bool = True) -> "FinLattice":
        elements = list(elements)
        M = [[bool(leq(a, b)) for b in elements] for a in elements]
        return cls(M, elements, check_modular)

    # --- basic queries ----------------------------------------------------

    def __len__(self):
        return self.size

    def leq(self, a: int, b: int) -> bool:
        return bool(self.leq_matrix[a, b])

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def meet_all(self, items) -> int:
        acc = self.top
        for x in items:
            acc = self.meet(acc, x)
        return acc

    def join_all(self, items) -> int:
        acc = self.bottom
        for x in items:
            acc = self.join(acc, x)
        return acc

    def covers_of(self, a: int) -> list[int]:
        """Upper covers of a."""
        above = [b for b in range(self.size) if self.lt(a, b)]
        return [b for b in above if not any(self.lt(a, c) and self.lt(c, b) for c in above)]

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.size) for b in self.covers_of(a)]

    def check_modular(self) -> None:
        """a <= c implies a ∨ (b ∧ c) = (a ∨ b) ∧ c, checked for all triples."""
        J, Mt = self.join_table, self.meet_table
        for a in range(self.size):
            for c in range(self.size):
                if not self.leq_matrix[a, c]:
                    continue
                lhs = J[a, Mt[:, c]]
                rhs = Mt[J[a, :], c]
                bad = np.nonzero(lhs != rhs)[0]
                if bad.size:
                    raise NotModularError(f"modular law fails at a={a}, b={int(bad[0])}, c={c}")

    def is_distributive(self) -> bool:
        J, Mt = self.join_table, self.meet_table
        for a in range(self.size):
            if not (Mt[a][J] == J[Mt[a][:, None], Mt[a][None, :]]).all():
                return False
        return True

    def dual(self) -> "FinLattice":
        return FinLattice(self.leq_matrix.T, self.labels, check_modular=False)

    def interval(self, lo: int, hi: int) -> "FinLattice":
        if not self.leq(lo, hi):
            raise PreconditionError("interval needs lo <= hi")
        idx = [x for x in range(self.size) if self.leq(lo, x) and self.leq(x, hi)]
        sub = self.leq_matrix[np.ix_(idx, idx)]
        return FinLattice(sub, [self.labels[i] for i in idx], check_modular=False)

    def sublattice(self, seed: Sequence[int]) -> "FinLattice":
        """Sublattice generated by ``seed`` under meet and join."""
        cur = set(seed)
        while True:
            nxt = set(cur)
            for a in cur:
                for b in cur:
                    nxt.add(self.meet(a, b))
                    nxt.add(self.join(a, b))
            if nxt == cur:
                break
            cur = nxt
        idx = sorted(cur)
        sub = self.leq_matrix[np.ix_(idx, idx)]
        return FinLattice(sub, [self.labels[i] for i in idx], check_modular=False)

    def product(self, other: "FinLattice") -> "FinLattice":
        M = np.kron(self.leq_matrix, other.leq_matrix).astype(bool)
        labels = [(a, b) for a in self.labels for b in other.labels]
        return FinLattice(M, labels, check_modular=False)

    __mul__ = product


# ---------------------------------------------------------------------------
# standard families


def chain(k: int) -> FinLattice:
    """The k-element chain 0 < 1 < ... < k-1."""
    return FinLattice([[i <= j for j in range(k)] for i in range(k)])


def boolean(k: int) -> FinLattice:
    """Subsets of {0..k-1} ordered by inclusion (labels are bitmasks)."""
    n = 1 << k
    return FinLattice([[a & b == a for b in range(n)] for a in range(n)])


def diamond(k: int) -> FinLattice:
    """M_k: bottom, k pairwise incomparable atoms, top."""
    n = k + 2
    M = np.eye(n, dtype=bool)
    M[0, :] = True
    M[:, n - 1] = True
    return FinLattice(M)


# ---------------------------------------------------------------------------
# cube rank


def _check_size(L: FinLattice, max_size: int):
    if L.size > max_size:
        raise SizeBoundError(f"lattice has {L.size} elements, bound is {max_size}")


def _drop_rank(L: FinLattice, meet_table: np.ndarray, leq: np.ndarray, top: int, height) -> int:
    """Largest family where dropping any member changes the meet.

    Family members are kept in increasing index order; redundancy is
    hereditary, so the search extends irredundant families one element at a
    time.  A family with meet m can grow by at most height(m) more members.
    """
    n = L.size
    best = 0
    Mt = meet_table.tolist()
    LQ = leq.tolist()

    def extend(family, others, m, start):
        nonlocal best
        best = max(best, len(family))
        for c in range(start, n):
            m2 = Mt[m][c]
            if m2 == m:
                continue
            if len(family) + 1 + height[m2] <= best:
                continue
            new_others = [Mt[o][c] for o in others]
            if any(LQ[o][b] for o, b in zip(new_others, family)):
                continue
            extend(family + [c], new_others + [m], m2, c + 1)

    extend([], [], top, 0)
    return best


def _meet_drop(L: FinLattice) -> int:
    return _drop_rank(L, L.meet_table, L.leq_matrix, L.top, L.height)


def _join_drop(L: FinLattice) -> int:
    # dual lattice: joins become meets, order reverses, bottom becomes top
    depth = _depths(L)
    return _drop_rank(L, L.join_table, L.leq_matrix.T, L.bottom, depth)


def _depths(L: FinLattice) -> list[int]:
    """Longest chain from each element up to the top."""
    order = sorted(range(L.size), key=lambda i: -L.height[i])
    d = [0] * L.size
    for i in order:
        above = [j for j in range(L.size) if L.lt(i, j)]
        d[i] = 1 + max((d[j] for j in above), default=-1)
    return d


def _greedy_cube(L: FinLattice, A: int) -> tuple:
    """Independent covers of A, chosen greedily in index order."""
    chosen = []
    acc = A
    for B in L.covers_of(A):
        if L.meet(acc, B) == A:
            chosen.append(B)
            acc = L.join(acc, B)
    return tuple(chosen)


def strict_cube_rank(L: FinLattice) -> tuple[int, CubeWitness | None]:
    best, wit = 0, None
    for A in range(L.size):
        seq = _greedy_cube(L, A)
        # in a modular lattice the greedy set spans the join of all covers
        span = L.join_all([A] + L.covers_of(A))
        if L.height[span] - L.height[A] != len(seq):
            raise ConsistencyError(f"greedy cube at base {A} does not span the socle")
        if len(seq) > best:
            best, wit = len(seq), CubeWitness(A, seq)
    if wit is not None and not wit.check(L):
        raise ConsistencyError("strict cube witness fails its invariants")
    return best, wit


def cube_rank(L: FinLattice, method: str = "all", max_size: int = DEFAULT_MAX_SIZE) -> int:
    """Cube rank by one characterization, or all three with a consistency check."""
    _check_size(L, max_size)
    if method == "strictCube":
        return strict_cube_rank(L)[0]
    if method == "meetDrop":
        return _meet_drop(L)
    if method == "joinDrop":
        return _join_drop(L)
    if method == "all":
        values = {m: cube_rank(L, m, max_size) for m in METHODS}
        if len(set(values.values())) != 1:
            raise ConsistencyError(f"cube rank characterizations disagree: {values}")
        return values["strictCube"]
    raise PreconditionError(f"unknown cube rank method {method!r}")


def strict_cube_witness(L: FinLattice, r: int, max_size: int = DEFAULT_MAX_SIZE) -> CubeWitness | None:
    """A base with r independent elements above it, or None if the rank is below r."""
    if r < 1:
        raise PreconditionError("r must be >= 1")
    _check_size(L, max_size)
    rank, wit = strict_cube_rank(L)
    if rank < r:
        return None
    out = CubeWitness(wit.base, wit.independent[:r])
    if not out.check(L):
        raise ConsistencyError("truncated cube witness fails")
    return out


# ---------------------------------------------------------------------------
# pseudo-random modular lattices


def subgroup_lattice(orders: Sequence[int]) -> FinLattice:
    from .modules import FinModule

    return FinModule(tuple(orders)).lattice()


def random_modular_lattice(rng: random.Random, max_size: int = 20) -> FinLattice:
    """A modular lattice with at most ``max_size`` elements.

    Drawn from chains, Boolean lattices, diamonds, subgroup lattices of small
    abelian groups, their products, and sublattices generated by random
    subsets of these.
    """
    while True:
        kind = rng.choice(["chain", "boolean", "diamond", "group", "product", "sub", "sub", "interval"])
        if kind == "chain":
            L = chain(rng.randint(1, max_size))
        elif kind == "boolean":
            L = boolean(rng.randint(0, 4))
        elif kind == "diamond":
            L = diamond(rng.randint(3, 6))
        elif kind == "group":
            L = subgroup_lattice(rng.choice([(4, 2), (2, 2), (3, 3), (9,), (8, 2), (4, 4), (6, 2), (12,), (2, 2, 2), (27,)]))
        elif kind == "product":
            L = _small(rng) * _small(rng)
        elif kind == "interval":
            base = _big(rng)
            a, b = sorted(rng.sample(range(base.size), 2)) if base.size > 1 else (0, 0)
            lo, hi = base.meet(a, b), base.join(a, b)
            L = base.interval(lo, hi)
        else:
            base = _big(rng)
            k = rng.randint(1, 4)
            L = base.sublattice(rng.sample(range(base.size), min(k, base.size)))
        if L.size <= max_size:
            L.check_modular()
            return L


def _small(rng) -> FinLattice:
    return rng.choice([chain(2), chain(3), chain(4), diamond(3), boolean(2)])


def _big(rng) -> FinLattice:
    return rng.choice(
        [boolean(4), diamond(4) * chain(3), subgroup_lattice((4, 4)), subgroup_lattice((2, 2, 2)), diamond(3) * diamond(3)]
    )
