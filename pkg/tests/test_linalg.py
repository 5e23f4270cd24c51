import pytest
from hypothesis import given, settings, strategies as st

from braidkit.fields import GF, RATIONALS, FieldError
from braidkit.linalg import Echelon, LinalgError, Matrix, Subspace


Q = RATIONALS
F2 = GF(2)
F5 = GF(5)


def test_rref_rank_one():
    m = Matrix.from_entries(Q, [[1, 2], [2, 4]])
    ech, pivots, rank = m.rref()
    assert rank == 1
    assert pivots == (0,)
    assert ech.rows[0] == {0: Q.one(), 1: Q.coerce(2)}
    assert ech.rows[1] == {}


def test_kernel_gf2():
    m = Matrix.from_entries(F2, [[1, 1]])
    k = m.kernel()
    assert k.dim == 1
    assert k.contains({0: 1, 1: 1})
    assert not k.contains({0: 1})


def test_intersect_example():
    # span{e1+e2, e2} ∩ span{e1} = span{e1}
    a = Subspace.from_vectors(Q, 2, [{0: Q.one(), 1: Q.one()}, {1: Q.one()}])
    b = Subspace.from_vectors(Q, 2, [{0: Q.one()}])
    assert a.intersect(b) == b


def test_subspace_canonical_equality():
    a = Subspace.from_vectors(Q, 3, [{0: Q.one(), 1: Q.one()}, {1: Q.one(), 2: Q.one()}])
    b = Subspace.from_vectors(
        Q, 3, [{0: Q.one(), 2: Q.coerce(-1)}, {0: Q.one(), 1: Q.coerce(2), 2: Q.one()}]
    )
    assert a == b
    assert hash(a) == hash(b)


def test_quotient_dim():
    a = Subspace.full(Q, 4)
    b = Subspace.from_vectors(Q, 4, [{0: Q.one()}, {3: Q.one()}])
    assert a.quotient_dim(b) == 2
    with pytest.raises(LinalgError):
        b.quotient_dim(a)


def test_quotient_dim_requires_containment():
    a = Subspace.from_vectors(Q, 2, [{0: Q.one()}])
    b = Subspace.from_vectors(Q, 2, [{1: Q.one()}])
    with pytest.raises(LinalgError):
        a.quotient_dim(b)


def test_operator_conventions():
    # rows are images: e0 -> e1, e1 -> e0 composed with doubling
    swap = Matrix.from_entries(Q, [[0, 1], [1, 0]])
    double = Matrix.from_entries(Q, [[2, 0], [0, 2]])
    comp = swap.then(double)
    assert comp.apply({0: Q.one()}) == {1: Q.coerce(2)}
    assert swap.then(swap) == Matrix.identity(Q, 2)
    assert swap.is_invertible()


def test_operator_kernel():
    # e0 -> e0, e1 -> e0 : kernel is span{e0 - e1}
    m = Matrix.from_entries(Q, [[1], [1]])
    k = m.operator_kernel()
    assert k.dim == 1
    assert k.contains({0: Q.one(), 1: Q.coerce(-1)})


def test_field_mismatch_rejected():
    a = Subspace.from_vectors(Q, 2, [{0: Q.one()}])
    b = Subspace.from_vectors(F2, 2, [{0: 1}])
    with pytest.raises(FieldError):
        a.sum(b)


def _entries(field, dim=4, rows=4):
    scalar = st.integers(min_value=-3, max_value=3).map(field.coerce)
    vec = st.lists(scalar, min_size=dim, max_size=dim)
    return st.lists(vec, min_size=0, max_size=rows)


@settings(max_examples=60, deadline=None)
@given(_entries(F5))
def test_rref_idempotent(grid):
    m = Matrix.from_entries(F5, grid) if grid else Matrix(F5, 0, 4)
    ech, pivots, rank = m.rref()
    ech2, pivots2, rank2 = ech.rref()
    assert (ech2, pivots2, rank2) == (ech, pivots, rank)


@settings(max_examples=60, deadline=None)
@given(_entries(F5))
def test_rank_nullity(grid):
    m = Matrix.from_entries(F5, grid) if grid else Matrix(F5, 0, 4)
    m.ncols = 4
    assert m.rank() + m.kernel().dim == 4


@settings(max_examples=60, deadline=None)
@given(_entries(F5), _entries(F5))
def test_grassmann_identity(ga, gb):
    a = Subspace.from_vectors(F5, 4, [dict(enumerate(r)) for r in ga])
    b = Subspace.from_vectors(F5, 4, [dict(enumerate(r)) for r in gb])
    a = Subspace.from_vectors(F5, 4, [{c: s for c, s in row.items() if s} for row in a.rows])
    b = Subspace.from_vectors(F5, 4, [{c: s for c, s in row.items() if s} for row in b.rows])
    assert a.sum(b).dim + a.intersect(b).dim == a.dim + b.dim


@settings(max_examples=60, deadline=None)
@given(_entries(F5), _entries(F5))
def test_equality_iff_mutual_containment(ga, gb):
    a = Subspace.from_vectors(F5, 4, [{i: s for i, s in enumerate(r) if s} for r in ga])
    b = Subspace.from_vectors(F5, 4, [{i: s for i, s in enumerate(r) if s} for r in gb])
    assert (a == b) == (a.contains_space(b) and b.contains_space(a))


@settings(max_examples=60, deadline=None)
@given(_entries(Q, dim=3, rows=3), _entries(Q, dim=3, rows=3))
def test_composition_associativity_rationals(ga, gb):
    a = Matrix.from_entries(Q, ga) if ga else Matrix(Q, 0, 3)
    a.ncols = 3
    b = Matrix.from_entries(Q, gb) if gb else Matrix(Q, 3, 3)
    if b.nrows != 3:
        rows = b.rows + [dict() for _ in range(3 - b.nrows)]
        b = Matrix(Q, 3, 3, rows[:3])
    b.ncols = 3
    i3 = Matrix.identity(Q, 3)
    assert a.then(i3) == a
    assert a.then(b).then(i3) == a.then(b.then(i3))
