import itertools

import pytest

from braidkit.fields import GF, RATIONALS as Q
from braidkit.braided import (
    BraidedSpace,
    BraidingError,
    TupleBasis,
    braid_lift,
    check_qybe,
    ct_component,
    delta_component,
    delta_recursive,
    quantum_symmetrizer,
    sigma,
)
from braidkit.linalg import Matrix


FLIP2 = BraidedSpace.flip(Q, 2)
STUMBO = BraidedSpace.diagonal(Q, [[2, 1], [1, 1]])
KHARCHENKO = BraidedSpace.diagonal(Q, [[-1, 1], [-1, -1]])


def test_flip_and_diagonal_satisfy_qybe():
    assert check_qybe(FLIP2)
    assert check_qybe(STUMBO)
    assert check_qybe(KHARCHENKO)
    assert check_qybe(BraidedSpace.flip(GF(2), 2))


def test_non_qybe_braiding_rejected():
    # invertible on V (x) V but fails the braid relation on V^(x)3
    grid = [
        [1, 0, 0, 1],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ]
    m = Matrix.from_entries(Q, grid)
    assert m.is_invertible()
    with pytest.raises(BraidingError):
        BraidedSpace.from_matrix(Q, 2, grid)


def test_non_invertible_braiding_rejected():
    grid = [
        [1, 0, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
    ]
    with pytest.raises(BraidingError):
        BraidedSpace.from_matrix(Q, 2, grid)


@pytest.mark.parametrize("space", [STUMBO, KHARCHENKO])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_braid_relations(space, n):
    basis = TupleBasis(space, n)
    sig = {i: sigma(basis, i) for i in range(1, n)}
    for i in range(1, n - 1):
        assert sig[i].then(sig[i + 1]).then(sig[i]) == sig[i + 1].then(sig[i]).then(sig[i + 1])
    for i in range(1, n):
        for j in range(i + 2, n):
            assert sig[i].then(sig[j]) == sig[j].then(sig[i])


def test_lift_reduced_word_independence():
    # longest element of S_3: s1 s2 s1 = s2 s1 s2
    basis = TupleBasis(STUMBO, 3)
    s1, s2 = sigma(basis, 1), sigma(basis, 2)
    w0 = (2, 1, 0)
    assert braid_lift(basis, w0) == s1.then(s2).then(s1)
    assert braid_lift(basis, w0) == s2.then(s1).then(s2)


def test_lift_multiplicative_on_length_additive_products():
    basis = TupleBasis(KHARCHENKO, 4)
    # (1,0,3,2) = s1 * s3, disjoint supports
    assert braid_lift(basis, (1, 0, 3, 2)) == sigma(basis, 1).then(sigma(basis, 3))


def test_ct_component_examples():
    one = Q.one()
    basis = TupleBasis(STUMBO, 2)
    assert ct_component(STUMBO, 1, 1) == sigma(basis, 1)
    # diagonal braiding: block swap picks up the product of the q's
    c21 = ct_component(STUMBO, 2, 1)
    b3 = TupleBasis(STUMBO, 3)
    img = c21.apply({b3.index[(0, 0, 1)]: one})
    assert img == {b3.index[(1, 0, 0)]: one}
    img = c21.apply({b3.index[(0, 0, 0)]: one})
    assert img == {b3.index[(0, 0, 0)]: Q.coerce(4)}


def test_ct_component_recursion():
    # c^{n,m} = (Id^(n-1) (x) c^{1,m}) then (c^{n-1,m} (x) Id)
    space = STUMBO
    n, m = 2, 2
    basis = TupleBasis(space, n + m)
    whole = ct_component(space, n, m)
    inner = TupleBasis(space, 1 + m)
    outer = TupleBasis(space, (n - 1) + m)
    c1m = ct_component(space, 1, m)
    cn1m = ct_component(space, n - 1, m)
    one = Q.one()
    for w in basis.words:
        # apply c^{1,m} on the last 1+m letters
        mid = {}
        img = c1m.apply({inner.index[w[n - 1 :]]: one})
        for col, s in img.items():
            mid[w[: n - 1] + inner.words[col]] = s
        # then c^{n-1,m} on the first (n-1)+m letters
        out = {}
        for word, s in mid.items():
            img2 = cn1m.apply({outer.index[word[: n - 1 + m]]: s})
            for col, t in img2.items():
                key = outer.words[col] + word[n - 1 + m :]
                out[key] = Q.add(out.get(key, Q.zero()), t)
        out = {k: v for k, v in out.items() if v}
        direct = {
            basis.words[c]: s for c, s in whole.apply({basis.index[w]: one}).items()
        }
        assert out == direct


def test_delta_11_is_id_plus_braiding():
    basis = TupleBasis(STUMBO, 2)
    assert delta_component(STUMBO, 1, 1) == Matrix.identity(Q, len(basis)).add(sigma(basis, 1))


@pytest.mark.parametrize("space", [STUMBO, KHARCHENKO, BraidedSpace.flip(GF(3), 2)])
def test_delta_shuffle_matches_recursive_oracle(space):
    for n in (2, 3, 4):
        full = {}
        basis = TupleBasis(space, n)
        for p in range(n + 1):
            op = delta_component(space, p, n - p)
            for word in basis.words:
                img = op.apply({basis.index[word]: space.field.one()})
                got = {
                    (basis.words[c][:p], basis.words[c][p:]): s for c, s in img.items()
                }
                full.setdefault(word, {}).update(got)
        for word in basis.words:
            assert full[word] == delta_recursive(space, word)


def test_oracle_coassociative():
    space = STUMBO
    field = space.field
    for word in itertools.product(range(2), repeat=3):
        left = {}
        for (u, v), s in delta_recursive(space, word).items():
            for (a, b), t in delta_recursive(space, u).items():
                key = (a, b, v)
                left[key] = field.add(left.get(key, field.zero()), field.mul(s, t))
        right = {}
        for (u, v), s in delta_recursive(space, word).items():
            for (a, b), t in delta_recursive(space, v).items():
                key = (u, a, b)
                right[key] = field.add(right.get(key, field.zero()), field.mul(s, t))
        left = {k: v for k, v in left.items() if v}
        right = {k: v for k, v in right.items() if v}
        assert left == right


def test_symmetrizer_small_ranks():
    # symmetric flip: rank of degree-2 symmetrizer is dim S^2 V = 3
    assert quantum_symmetrizer(FLIP2, 2).rank() == 3
    # sign-braided pair: degree-2 rank 2
    assert quantum_symmetrizer(KHARCHENKO, 2).rank() == 2
    # char 2 flip: x (x) x and x1 x2 + x2 x1 die
    assert quantum_symmetrizer(BraidedSpace.flip(GF(2), 2), 2).rank() == 1


def test_symmetrizer_degree_budget():
    with pytest.raises(BraidingError):
        quantum_symmetrizer(FLIP2, 8)


def test_symmetrizer_matches_explicit_sum():
    space = STUMBO
    n = 3
    basis = TupleBasis(space, n)
    memo = {}
    total = Matrix(Q, len(basis), len(basis))
    for perm in itertools.permutations(range(n)):
        total = total.add(braid_lift(basis, perm, memo))
    assert quantum_symmetrizer(space, n) == total


def test_weighted_basis_cap_is_exact():
    # give letters weights (1, 2); capped operators are restrictions
    space = BraidedSpace.diagonal(Q, [[2, 1], [1, 1]], labels=("a", "b"))
    weighted = BraidedSpace(Q, 2, space.pair_action, weights=(1, 2))
    full = TupleBasis(weighted, 3)
    capped = TupleBasis(weighted, 3, cap=4)
    assert set(capped.words) == {w for w in full.words if weighted.word_weight(w) <= 4}
    sym_full = quantum_symmetrizer(weighted, 3)
    sym_cap = quantum_symmetrizer(weighted, 3, cap=4)
    for w in capped.words:
        img_full = sym_full.apply({full.index[w]: Q.one()})
        img_cap = sym_cap.apply({capped.index[w]: Q.one()})
        assert {full.words[c]: s for c, s in img_full.items()} == {
            capped.words[c]: s for c, s in img_cap.items()
        }
