"""Minimum chain decompositions of finite posets (Dilworth via matching)."""

from __future__ import annotations

import itertools
from typing import Callable, Hashable, Sequence

from ..errors import ConsistencyError, PreconditionError

BRUTE_FORCE_LIMIT = 12


def _order_matrix(elements: Sequence, leq) -> list[list[bool]]:
    n = len(elements)
    if callable(leq):
        rel = [[bool(leq(a, b)) for b in elements] for a in elements]
    else:
        pairs = set(leq)
        index = {e: i for i, e in enumerate(elements)}
        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in pairs:
            if a not in index or b not in index:
                raise PreconditionError(f"relation mentions unknown element in {(a, b)!r}")
            rel[index[a]][index[b]] = True
    return rel


def check_partial_order(rel: list[list[bool]]) -> None:
    n = len(rel)
    for i in range(n):
        if not rel[i][i]:
            raise PreconditionError(f"relation is not reflexive at element {i}")
        for j in range(n):
            if i != j and rel[i][j] and rel[j][i]:
                raise PreconditionError(f"relation is not antisymmetric at {i}, {j}")
            if rel[i][j]:
                for k in range(n):
                    if rel[j][k] and not rel[i][k]:
                        raise PreconditionError(f"relation is not transitive at {i}, {j}, {k}")


def _max_matching(n: int, adj: list[list[int]]) -> list[int]:
    """Kuhn's augmenting paths; returns match_right[j] = i or -1."""
    match_right = [-1] * n

    def augment(i, seen):
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if match_right[j] == -1 or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    for i in range(n):
        augment(i, set())
    return match_right


def max_antichain_bruteforce(rel: list[list[bool]]) -> tuple:
    """Largest antichain by exhaustive search over subsets (small posets only)."""
    n = len(rel)
    for size in range(n, 0, -1):
        for combo in itertools.combinations(range(n), size):
            if all(not rel[a][b] and not rel[b][a] for a, b in itertools.combinations(combo, 2)):
                return combo
    return ()


def dilworth_chains(elements: Sequence[Hashable], leq: Callable | Sequence) -> list[list]:
    """Partition ``elements`` into the minimum number of chains.

    ``leq`` is either a predicate ``leq(a, b)`` or an iterable of pairs
    ``(a, b)`` meaning a <= b (reflexive pairs are implied).  Chains are listed
    bottom-up.  For posets of at most 12 elements the chain count is checked
    against an exhaustive maximum-antichain search.
    """
    elements = list(elements)
    rel = _order_matrix(elements, leq)
    if not callable(leq):
        # close the given pairs transitively before checking
        n = len(rel)
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    for j in range(n):
                        if rel[k][j]:
                            rel[i][j] = True
    check_partial_order(rel)
    n = len(elements)
    adj = [[j for j in range(n) if j != i and rel[i][j]] for i in range(n)]
    match_right = _max_matching(n, adj)
    succ = [-1] * n
    for j, i in enumerate(match_right):
        if i != -1:
            succ[i] = j
    has_pred = {j for j, i in enumerate(match_right) if i != -1}
    chains = []
    for start in range(n):
        if start in has_pred:
            continue
        chain, cur = [], start
        while cur != -1:
            chain.append(elements[cur])
            cur = succ[cur]
        chains.append(chain)
    if n <= BRUTE_FORCE_LIMIT:
        width = len(max_antichain_bruteforce(rel))
        if width != len(chains):
            raise ConsistencyError(f"{len(chains)} chains but maximum antichain has {width}")
    return chains
