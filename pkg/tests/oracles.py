"""Brute-force references that share no code with the package.

Rationals are plain ``fractions.Fraction``; lattices are leq matrices;
groups are tuples of residues.  Everything here is slow on purpose.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def vp(p: int, x: Fraction) -> float:
    """p-adic valuation by repeated division."""
    if x == 0:
        return math.inf
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def in_ring(primes, x: Fraction) -> bool:
    return all(vp(p, x) >= 0 for p in primes)


def ring_elements(primes, bound: int):
    """Elements a/b of the semilocal ring with |a|, b <= bound."""
    out = set()
    for b in range(1, bound + 1):
        if any(b % p == 0 for p in primes):
            continue
        for a in range(-bound, bound + 1):
            out.add(Fraction(a, b))
    return sorted(out)


def member_sum_search(primes, x: Fraction, gens, bound: int = 12) -> bool:
    """Look for ring coefficients with x = sum c_i g_i (affirmative only)."""
    coeffs = ring_elements(primes, bound)
    if len(gens) == 1:
        g = Fraction(gens[0])
        return g != 0 and in_ring(primes, x / g) or x == 0
    for c in itertools.product(coeffs, repeat=len(gens) - 1):
        rest = x - sum(ci * Fraction(g) for ci, g in zip(c, gens[:-1]))
        g = Fraction(gens[-1])
        if g != 0 and in_ring(primes, rest / g):
            return True
        if g == 0 and rest == 0:
            return True
    return False


def crt_residue_search(moduli_targets, limit: int):
    """Least nonnegative z < limit with z ≡ x (mod m) for each (m, x)."""
    for z in range(limit):
        if all((z - x) % m == 0 for m, x in moduli_targets):
            return z
    return None


# -- posets and lattices ----------------------------------------------------


def max_antichain(rel) -> int:
    n = len(rel)
    best = 0
    for mask in range(1 << n):
        items = [i for i in range(n) if mask >> i & 1]
        if len(items) <= best:
            continue
        if all(not rel[a][b] and not rel[b][a] for a, b in itertools.combinations(items, 2)):
            best = len(items)
    return best


def heights(leq) -> list[int]:
    """Height of each element above the bottom (longest chain length)."""
    n = len(leq)
    order = sorted(range(n), key=lambda i: sum(leq[j][i] for j in range(n)))
    h = [0] * n
    for i in order:
        for j in range(n):
            if j != i and leq[j][i]:
                h[i] = max(h[i], h[j] + 1)
    return h


def join(leq, a: int, b: int) -> int:
    n = len(leq)
    ubs = [c for c in range(n) if leq[a][c] and leq[b][c]]
    return next(c for c in ubs if all(leq[c][d] for d in ubs))


def cube_rank_bruteforce(leq) -> int:
    """Largest k with k covers of one element whose join sits k levels higher."""
    n = len(leq)
    h = heights(leq)
    best = 0
    for a in range(n):
        covers = [b for b in range(n) if leq[a][b] and h[b] == h[a] + 1]
        for k in range(len(covers), best, -1):
            found = False
            for combo in itertools.combinations(covers, k):
                j = combo[0]
                for c in combo[1:]:
                    j = join(leq, j, c)
                if h[j] == h[a] + k:
                    found = True
                    break
            if found:
                best = k
                break
    return best


# -- finite abelian groups ---------------------------------------------------


def group_elements(orders):
    return list(itertools.product(*[range(o) for o in orders]))


def subgroups_bruteforce(orders) -> list[frozenset]:
    """Subgroups as element sets, via closures of generator pairs."""
    elems = group_elements(orders)

    def add(a, b):
        return tuple((x + y) % o for x, y, o in zip(a, b, orders))

    def closure(gens):
        zero = tuple(0 for _ in orders)
        cur = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    s = add(a, g)
                    if s not in cur:
                        cur.add(s)
                        nxt.append(s)
            frontier = nxt
        return frozenset(cur)

    rank = len(orders)
    subs = set()
    for k in range(rank + 1):
        for gens in itertools.product(elems, repeat=k):
            subs.add(closure(gens))
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


def omega(n: int) -> int:
    k, p = 0, 2
    while n > 1:
        while n % p == 0:
            n //= p
            k += 1
        p += 1
    return k


def semisimple_length_bruteforce(orders) -> int:
    """Max Omega(|B/A|) over A <= B with B/A of squarefree exponent."""
    subs = subgroups_bruteforce(orders)

    def add(a, b):
        return tuple((x + y) % o for x, y, o in zip(a, b, orders))

    def times(k, a):
        return tuple((k * x) % o for x, o in zip(a, orders))

    best = 0
    for A in subs:
        for B in subs:
            if not A <= B:
                continue
            q = len(B) // len(A)
            rad = 1
            for p in range(2, q + 1):
                if q % p == 0 and all(q % d for d in range(2, p) if p % d == 0):
                    rad *= p
            # squarefree exponent: rad * b in A for every b in B
            if all(times(rad, b) in A for b in B):
                best = max(best, omega(q))
    return best


def p_rank_sum(orders) -> int:
    """Sum over primes of the number of cyclic factors divisible by p."""
    total = 0
    for o in orders:
        ps = {p for p in range(2, o + 1) if o % p == 0 and all(p % d for d in range(2, p))}
        total += len(ps)
    return total
