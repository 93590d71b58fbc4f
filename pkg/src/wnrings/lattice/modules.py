"""Finite abelian groups as Z-modules: submodule lattices and semisimple subquotients."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..errors import ConsistencyError, PreconditionError, SizeBoundError
from ..exactfield import is_prime
from .finite import DEFAULT_MAX_SIZE, FinLattice, cube_rank

DEFAULT_ORDER_BOUND = 256
DEFAULT_SUBGROUP_BOUND = 5000
FINLATTICE_STRICT_BOUND = 512  # strict-cube only, above the exhaustive cap


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _omega(n: int) -> int:
    """Number of prime factors counted with multiplicity."""
    k, p = 0, 2
    while p * p <= n:
        while n % p == 0:
            n //= p
            k += 1
        p += 1
    return k + (n > 1)


class FinModule:
    """⊕ Z/d_i with its exact submodule lattice.

    Elements are indexed in mixed radix; submodules are bitmasks over the
    element indices.
    """

    def __init__(self, orders: Sequence[int], bound: int = DEFAULT_ORDER_BOUND,
                 subgroup_bound: int = DEFAULT_SUBGROUP_BOUND):
        orders = tuple(int(d) for d in orders if int(d) != 1)
        if any(d < 1 for d in orders):
            raise PreconditionError("cyclic orders must be positive")
        size = 1
        for d in orders:
            size *= d
        if size > bound:
            raise SizeBoundError(f"|M| = {size} exceeds bound {bound}")
        self.orders = orders
        self.size = size
        self.subgroup_bound = subgroup_bound
        self.elements = list(itertools.product(*[range(d) for d in orders]))
        self._index = {x: i for i, x in enumerate(self.elements)}
        self.primes = _prime_factors(size) if size > 1 else []

    def __repr__(self):
        return f"FinModule({self.orders})"

    def add(self, i: int, j: int) -> int:
        a, b = self.elements[i], self.elements[j]
        return self._index[tuple((x + y) % d for x, y, d in zip(a, b, self.orders))]

    def scale(self, k: int, i: int) -> int:
        a = self.elements[i]
        return self._index[tuple((k * x) % d for x, d in zip(a, self.orders))]

    @cached_property
    def _add_table(self) -> list[list[int]]:
        return [[self.add(i, j) for j in range(self.size)] for i in range(self.size)]

    def members(self, mask: int) -> list[int]:
        return [i for i in range(self.size) if mask >> i & 1]

    def order_of(self, mask: int) -> int:
        return bin(mask).count("1")

    def multiply(self, k: int, mask: int) -> int:
        out = 0
        for i in self.members(mask):
            out |= 1 << self.scale(k, i)
        return out

    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def submodules(self) -> list[int]:
        """All subgroups, sorted by (order, mask); each reached by a chain of prime-index steps."""
        T = self._add_table
        mul = {p: [self.scale(p, i) for i in range(self.size)] for p in self.primes}
        seen = {1}
        frontier = [1]
        while frontier:
            nxt = []
            for H in frontier:
                hm = self.members(H)
                for p in self.primes:
                    for g in range(self.size):
                        if H >> g & 1 or not H >> mul[p][g] & 1:
                            continue
                        # p·g ∈ H, so H + <g> = union of H + k·g for k < p
                        K = H
                        c = 0
                        for _ in range(p - 1):
                            c = T[c][g]
                            for h in hm:
                                K |= 1 << T[h][c]
                        if K not in seen:
                            seen.add(K)
                            nxt.append(K)
                            if len(seen) > self.subgroup_bound:
                                raise SizeBoundError(f"more than {self.subgroup_bound} submodules in {self}")
            frontier = nxt
        return sorted(seen, key=lambda m: (self.order_of(m), m))

    def lattice(self, check_modular: bool = True) -> FinLattice:
        subs = self.submodules
        M = [[a & b == a for b in subs] for a in subs]
        return FinLattice(M, subs, check_modular)

    def is_semisimple_quotient(self, A: int, B: int) -> bool:
        """B/A is semisimple iff its exponent is squarefree."""
        q = self.order_of(B) // self.order_of(A)
        e = 1
        for p in _prime_factors(q) if q > 1 else []:
            e *= p
        return self.multiply(e, B) & ~A == 0

    def socle_length(self, A: int) -> int:
        """Length of the socle of M/A: sum over p of dim (M/A)[p]."""
        total = 0
        for p in self.primes:
            k = sum(1 for g in range(self.size) if A >> self.scale(p, g) & 1)
            total += _omega(k // self.order_of(A))
        return total


@dataclass(frozen=True)
class SubquotientResult:
    A: int
    B: int
    length: int
    module: FinModule

    def summands(self) -> list[int]:
        """Prime orders of the simple summands of B/A."""
        q = self.module.order_of(self.B) // self.module.order_of(self.A)
        out, n, p = [], q, 2
        while n > 1:
            while n % p == 0:
                out.append(p)
                n //= p
            p += 1
        return out


def _radical_route(M: FinModule) -> SubquotientResult:
    best = None
    for B in sorted(M.submodules, key=lambda m: (-M.order_of(m), m)):
        order = M.order_of(B)
        e = 1
        for p in _prime_factors(order) if order > 1 else []:
            e *= p
        rad = M.multiply(e, B)
        m = _omega(order // M.order_of(rad))
        if best is None or m > best.length:
            best = SubquotientResult(rad, B, m, M)
    return best


def _socle_route(M: FinModule) -> int:
    return max(M.socle_length(A) for A in M.submodules)


def _pair_route(M: FinModule) -> int:
    """Exhaustive over all pairs A ⊆ B of submodules."""
    subs = M.submodules
    best = 0
    for B in subs:
        for A in subs:
            if A & ~B:
                continue
            if M.is_semisimple_quotient(A, B):
                best = max(best, _omega(M.order_of(B) // M.order_of(A)))
    return best


def submodule_cube_rank(M: FinModule, pair_limit: int = 400) -> int:
    """Cube rank of the submodule lattice, with every applicable cross-check."""
    n_sub = len(M.submodules)
    values = {"socle": _socle_route(M)}
    if n_sub <= DEFAULT_MAX_SIZE:
        values["lattice"] = cube_rank(M.lattice(), "all")
    elif n_sub <= FINLATTICE_STRICT_BOUND:
        values["lattice"] = cube_rank(M.lattice(), "strictCube", max_size=FINLATTICE_STRICT_BOUND)
    if n_sub <= pair_limit:
        values["pairs"] = _pair_route(M)
    if len(set(values.values())) != 1:
        raise ConsistencyError(f"submodule cube rank routes disagree for {M}: {values}")
    return values["socle"]


def semisimple_subquotient(M: FinModule, pair_limit: int = 400) -> SubquotientResult:
    """Submodules A ⊆ B with B/A semisimple of maximal length.

    The maximum is attained at A = rad(B) for some B, which gives the
    witness; the length is compared against the submodule-lattice cube rank.
    """
    if M.size == 1:
        return SubquotientResult(1, 1, 0, M)
    res = _radical_route(M)
    if not M.is_semisimple_quotient(res.A, res.B) or res.A & ~res.B:
        raise ConsistencyError("subquotient witness is not semisimple")
    rank = submodule_cube_rank(M, pair_limit)
    if rank != res.length:
        raise ConsistencyError(f"subquotient length {res.length} differs from cube rank {rank}")
    return res


def abelian_groups(order: int) -> list[tuple[int, ...]]:
    """Invariant-factor-free listing: one tuple of prime powers per isomorphism class."""
    if order == 1:
        return [()]
    per_prime = []
    n = order
    for p in _prime_factors(order):
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        per_prime.append([tuple(p**k for k in part) for part in _partitions(a)])
    return [tuple(x for block in combo for x in block) for combo in itertools.product(*per_prime)]


def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest
