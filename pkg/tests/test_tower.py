import pytest

from braidkit.fields import GF, RATIONALS as Q
from braidkit.braided import BraidedSpace
from braidkit.tower import (
    GradedPresentation,
    TowerError,
    combinatorial_rank,
    free_presentation,
    ideal_closure,
    nichols_dims_symmetrizer,
    nichols_dims_tower,
    nichols_presentation,
    primitives_of_degree,
    tower_step,
)


KHARCHENKO = BraidedSpace.diagonal(Q, [[-1, 1], [-1, -1]])
STUMBO = BraidedSpace.diagonal(Q, [[2, 1], [1, 1]])


def test_free_presentation_dims():
    pres = free_presentation(STUMBO, 4)
    assert pres.dims() == [1, 2, 4, 8, 16]
    pres.verify()


def test_primitives_degree2_stumbo():
    # only x2 x1 - x1 x2 is primitive in degree 2
    pres = free_presentation(STUMBO, 4)
    prim = primitives_of_degree(pres, 2)
    assert prim.dim == 1
    assert prim.contains({2: Q.one(), 1: Q.coerce(-1)})


def test_primitives_degree2_kharchenko():
    # sign braiding on both letters: the two squares are primitive
    pres = free_presentation(KHARCHENKO, 4)
    prim = primitives_of_degree(pres, 2)
    assert prim.dim == 2
    assert prim.contains({0: Q.one()})
    assert prim.contains({3: Q.one()})


def test_tower_step_and_verify():
    pres = tower_step(free_presentation(KHARCHENKO, 5))
    assert pres.dims() == [1, 2, 2, 2, 2, 2]
    pres.verify()


def test_kharchenko_rank_two():
    rank, trace = combinatorial_rank(KHARCHENKO, 6)
    assert rank == 2
    assert trace[0] == [1, 2, 4, 8, 16, 32, 64]
    assert trace[1] == [1, 2, 2, 2, 2, 2, 2]
    assert trace[2] == [1, 2, 2, 2, 1, 0, 0]
    assert trace[3] == trace[2]


def test_stumbo_rank_one():
    assert combinatorial_rank(STUMBO, 5)[0] == 1


@pytest.mark.parametrize(
    "space,max_degree,expected",
    [
        (KHARCHENKO, 6, [1, 2, 2, 2, 1, 0, 0]),
        (STUMBO, 6, [1, 2, 3, 4, 5, 6, 7]),
        (BraidedSpace.flip(Q, 2), 6, [1, 2, 3, 4, 5, 6, 7]),
        (BraidedSpace.flip(Q, 3), 5, [1, 3, 6, 10, 15, 21]),
        (BraidedSpace.flip(GF(2), 2), 6, [1, 2, 1, 0, 0, 0, 0]),
        (BraidedSpace.flip(GF(3), 2), 6, [1, 2, 3, 2, 1, 0, 0]),
    ],
)
def test_nichols_dims_both_routes(space, max_degree, expected):
    assert nichols_dims_tower(space, max_degree) == expected
    assert nichols_dims_symmetrizer(space, max_degree) == expected


def test_nichols_presentation_is_fixed_point():
    pres = nichols_presentation(KHARCHENKO, 5)
    pres.verify()
    assert tower_step(pres).same_quotient(pres)
    # no primitives of degree >= 2 outside the ideal
    for n in range(2, 6):
        assert primitives_of_degree(pres, n).dim == pres.ideal[n].rank


def test_ideal_closure_is_ideal():
    gens = {2: [{1: Q.one(), 2: Q.coerce(-1)}]}
    ideal = ideal_closure(STUMBO, 5, gens)
    GradedPresentation(STUMBO, 5, ideal).verify()
    assert [e.rank for e in ideal] == [0, 0, 1, 4, 11, 26]


def test_rank_raises_without_stabilization_budget():
    with pytest.raises(TowerError):
        combinatorial_rank(KHARCHENKO, 6, max_steps=0)
