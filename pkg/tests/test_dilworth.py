import random

import pytest

from oracles import max_antichain
from wnrings.errors import PreconditionError
from wnrings.multival import dilworth_chains


def random_poset(rng: random.Random, n: int, p: float):
    """Random order on range(n): a DAG on index order, transitively closed."""
    rel = [[i == j or (i < j and rng.random() < p) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if rel[i][k]:
                for j in range(n):
                    if rel[k][j]:
                        rel[i][j] = True
    return rel


def check_chains(elements, rel, chains):
    flat = [x for c in chains for x in c]
    assert sorted(flat) == sorted(elements)
    for c in chains:
        for a, b in zip(c, c[1:]):
            assert rel[a][b]


def test_antichain():
    chains = dilworth_chains(["a", "b", "c"], [])
    assert sorted(chains) == [["a"], ["b"], ["c"]]


def test_chain():
    assert dilworth_chains([1, 2, 3], lambda a, b: a <= b) == [[1, 2, 3]]


def test_n_poset():
    chains = dilworth_chains("abcd", [("a", "c"), ("b", "c"), ("b", "d")])
    assert len(chains) == 2
    assert sorted(x for c in chains for x in c) == list("abcd")


def test_divisibility_poset():
    els = list(range(1, 13))
    chains = dilworth_chains(els, lambda a, b: b % a == 0)
    # 7..12 are pairwise non-dividing
    assert len(chains) == 6


def test_rejects_non_order():
    with pytest.raises(PreconditionError):
        dilworth_chains([0, 1], [(0, 1), (1, 0)])
    with pytest.raises(PreconditionError):
        dilworth_chains([0, 1], lambda a, b: a < b)
    with pytest.raises(PreconditionError):
        dilworth_chains([0], [(0, 5)])


@pytest.mark.parametrize("seed", range(30))
def test_random_posets_against_bruteforce(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 11)
    rel = random_poset(rng, n, rng.choice([0.15, 0.3, 0.5]))
    els = list(range(n))
    chains = dilworth_chains(els, lambda a, b: rel[a][b])
    check_chains(els, rel, chains)
    assert len(chains) == max_antichain(rel)


def test_larger_poset_skips_bruteforce_but_stays_valid():
    rng = random.Random(99)
    rel = random_poset(rng, 25, 0.2)
    els = list(range(25))
    chains = dilworth_chains(els, lambda a, b: rel[a][b])
    check_chains(els, rel, chains)
