import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cube_rank_bruteforce
from wnrings.errors import NotModularError, PreconditionError, SizeBoundError
from wnrings.lattice import (
    FinLattice,
    boolean,
    chain,
    cube_rank,
    diamond,
    random_modular_lattice,
    strict_cube_witness,
    subgroup_lattice,
)


def test_cube_rank_examples():
    assert cube_rank(boolean(2)) == 2
    assert cube_rank(chain(3)) == 1
    assert cube_rank(chain(1)) == 0


@pytest.mark.parametrize(
    "L,r",
    [(boolean(k), k) for k in range(5)]
    + [(chain(k), min(1, k - 1)) for k in range(1, 9)]
    + [(diamond(3), 2), (diamond(5), 2), (subgroup_lattice((2, 2, 2)), 3), (subgroup_lattice((9,)), 1)],
)
def test_families(L, r):
    assert cube_rank(L, "all") == r
    assert cube_rank_bruteforce(L.leq_matrix.tolist()) == r


def test_methods_individually():
    L = diamond(3) * chain(3)
    assert {m: cube_rank(L, m) for m in ("strictCube", "meetDrop", "joinDrop")} == {
        "strictCube": 3,
        "meetDrop": 3,
        "joinDrop": 3,
    }


def test_witness_examples():
    w = strict_cube_witness(boolean(2), 2)
    assert w.base == 0 and set(w.independent) == {1, 2}
    assert strict_cube_witness(chain(5), 2) is None
    w3 = strict_cube_witness(boolean(3), 3)
    assert w3.base == 0 and set(w3.independent) == {1, 2, 4} and w3.check(boolean(3))
    with pytest.raises(PreconditionError):
        strict_cube_witness(boolean(2), 0)


def test_errors():
    pentagon = FinLattice.from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], check_modular=False)
    with pytest.raises(NotModularError):
        pentagon.check_modular()
    with pytest.raises(SizeBoundError):
        cube_rank(chain(65))
    with pytest.raises(PreconditionError):
        cube_rank(chain(2), "bogus")
    with pytest.raises(PreconditionError):
        FinLattice([[True, True], [True, True]])
    with pytest.raises(PreconditionError):
        # two maximal elements, no join
        FinLattice.from_covers(3, [(0, 1), (0, 2)])


def test_lattice_laws():
    L = diamond(3) * chain(2)
    n = L.size
    for a, b, c in itertools.product(range(n), repeat=3):
        assert L.meet(a, L.meet(b, c)) == L.meet(L.meet(a, b), c)
        assert L.join(a, L.join(b, c)) == L.join(L.join(a, b), c)
    for a, b in itertools.product(range(n), repeat=2):
        assert L.meet(a, b) == L.meet(b, a) and L.join(a, a) == a
        assert L.meet(a, L.join(a, b)) == a and L.join(a, L.meet(a, b)) == a


SMALL = [chain(1), chain(2), chain(3), chain(4), boolean(1), boolean(2), diamond(3)]


@pytest.mark.parametrize("A,B", list(itertools.combinations_with_replacement(range(len(SMALL)), 2)))
def test_product_additivity(A, B):
    L1, L2 = SMALL[A], SMALL[B]
    P = L1 * L2
    assert cube_rank(P) == cube_rank(L1) + cube_rank(L2)


@pytest.mark.parametrize("seed", range(20))
def test_random_lattices_against_bruteforce(seed):
    L = random_modular_lattice(random.Random(seed), 20)
    assert L.size <= 20
    assert cube_rank(L, "all") == cube_rank_bruteforce(L.leq_matrix.tolist())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.data())
def test_interval_monotonicity(seed, data):
    L = random_modular_lattice(random.Random(seed), 20)
    a = data.draw(st.integers(0, L.size - 1))
    b = data.draw(st.integers(0, L.size - 1))
    lo, hi = L.meet(a, b), L.join(a, b)
    assert cube_rank(L.interval(lo, hi)) <= cube_rank(L)


def test_dual_rank():
    L = diamond(4) * chain(3)
    assert cube_rank(L.dual()) == cube_rank(L)
