import pytest

from oracles import p_rank_sum, semisimple_length_bruteforce, subgroups_bruteforce
from wnrings.errors import SizeBoundError
from wnrings.lattice import FinModule, abelian_groups, cube_rank, semisimple_subquotient, submodule_cube_rank


def test_cyclic_four():
    M = FinModule((4,))
    res = semisimple_subquotient(M)
    assert res.length == 1
    assert M.order_of(res.B) == 4 and M.order_of(res.A) == 2


def test_klein_four():
    M = FinModule((2, 2))
    res = semisimple_subquotient(M)
    assert res.length == 2 and M.order_of(res.A) == 1 and res.B == M.full()
    assert res.summands() == [2, 2]


def test_trivial():
    assert semisimple_subquotient(FinModule(())).length == 0


def test_group_listing():
    # numbers of abelian groups of order n
    assert [len(abelian_groups(n)) for n in (1, 8, 12, 16, 32, 36, 64)] == [1, 3, 2, 5, 7, 4, 11]


@pytest.mark.parametrize("orders", [(2,), (4,), (2, 2), (6,), (3, 3), (2, 4), (2, 2, 2), (9,), (2, 6), (4, 4)])
def test_submodules_match_bruteforce(orders):
    M = FinModule(orders)
    ref = subgroups_bruteforce(orders)
    assert len(M.submodules) == len(ref)


@pytest.mark.parametrize("orders", [(2,), (4,), (2, 2), (6,), (2, 4), (2, 2, 2), (3, 3), (2, 6), (12,)])
def test_length_against_bruteforce(orders):
    M = FinModule(orders)
    assert semisimple_subquotient(M).length == semisimple_length_bruteforce(orders)


def test_all_groups_up_to_32():
    for n in range(1, 33):
        for orders in abelian_groups(n):
            M = FinModule(orders)
            res = semisimple_subquotient(M)
            assert res.length == p_rank_sum(orders) == submodule_cube_rank(M)
            assert M.is_semisimple_quotient(res.A, res.B)


def test_lattice_route_agrees():
    M = FinModule((2, 4))
    assert cube_rank(M.lattice()) == semisimple_subquotient(M).length == 2


def test_bound():
    with pytest.raises(SizeBoundError):
        FinModule((512,))
