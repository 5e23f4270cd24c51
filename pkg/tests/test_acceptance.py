"""Acceptance gate: one test (and one pass/fail line under pytest -v)
per criterion, computed on the built-in corpus with exact expectations.

Expensive objects (envelopes, crosscheck reports) are built once per
module and shared across criteria.
"""

from math import comb

import pytest

from braidkit.braided import (
    BraidedSpace,
    TupleBasis,
    braid_lift,
    delta_component,
    delta_recursive,
    sigma,
)
from braidkit.cli import build_envelope, parse_spec
from braidkit.corpus import CORPUS
from braidkit.enveloping import (
    khacosym_consistency,
    pbw_basis,
    pbw_check,
    teopbw_crosscheck,
)
from braidkit.fields import GF, RATIONALS
from braidkit.linalg import Matrix
from braidkit.tower import (
    combinatorial_rank,
    nichols_dims_symmetrizer,
    nichols_dims_tower,
)


def _announce(num: int, text: str) -> None:
    print(f"criterion {num}: PASS — {text}")


@pytest.fixture(scope="module")
def specs():
    return {name: parse_spec(entry["spec"]) for name, entry in CORPUS.items()}


@pytest.fixture(scope="module")
def envelopes(specs):
    return {name: build_envelope(spec) for name, spec in specs.items()}


@pytest.fixture(scope="module")
def crosschecks(envelopes, specs):
    return {
        name: teopbw_crosscheck(env, margin=specs[name].margin)
        for name, env in envelopes.items()
    }


def test_criterion_1_nichols_oracle_agreement(specs):
    for name, spec in specs.items():
        tower = nichols_dims_tower(spec.space, spec.N)
        sym = nichols_dims_symmetrizer(spec.space, spec.N)
        assert tower == sym, f"{name}: tower {tower} != symmetrizer {sym}"
        assert tower == CORPUS[name]["expect"]["nichols"]["tower"], name
    _announce(1, "tower and symmetrizer Nichols dimensions agree on all 8 entries")


def test_criterion_2_combinatorial_rank(specs):
    rank, _ = combinatorial_rank(specs["kharchenko"].space, 6)
    assert rank == 2
    for name in ("flip-d2-char0", "flip-d3-char0", "stumbo",
                 "restricted-gf2-abelian", "restricted-gf3"):
        spec = specs[name]
        r, _ = combinatorial_rank(spec.space, spec.N)
        assert r <= 1, f"{name}: rank {r}"
    _announce(2, "Kharchenko braiding rank 2 certified at degree 6; others rank <= 1")


def test_criterion_3_stumbo_pbw(envelopes):
    env = envelopes["stumbo"]
    assert env.graded_dims() == [1, 2, 3, 4, 5, 6, 7]
    assert pbw_check(env)["pbw_type"] is True
    words = pbw_basis(env)
    for n, layer in enumerate(words):
        assert len(layer) == n + 1
        for word in layer:
            # x_1^{t_1} x_2^{t_2}: letters sorted, so no descent anywhere
            assert list(word) == sorted(word), word
    _announce(3, "one-relation quotient has dims 1..7 and basis x1^a x2^b")


def test_criterion_4_sl2_pbw(envelopes):
    env = envelopes["sl2"]
    assert env.graded_dims() == [comb(n + 2, 2) for n in range(6)]
    words = pbw_basis(env)
    for n, layer in enumerate(words):
        assert len(layer) == comb(n + 2, 2)
        for word in layer:
            assert list(word) == sorted(word), word  # e <= h <= f monomials
    _announce(4, "sl2 envelope has dims C(n+2,2) and ordered-monomial basis")


def test_criterion_5_restricted_envelopes(envelopes):
    for name, p, dims in (
        ("restricted-gf2-abelian", 2, [1, 2, 1, 0, 0, 0, 0]),
        ("restricted-gf3", 3, [1, 2, 3, 2, 1, 0, 0]),
    ):
        env = envelopes[name]
        graded = env.graded_dims()
        assert graded == dims, name
        assert sum(graded) == p * p, name
        for layer in pbw_basis(env):
            for word in layer:
                assert list(word) == sorted(word)
                for letter in set(word):
                    assert word.count(letter) <= p - 1, (name, word)
    _announce(5, "restricted envelopes over GF(2)/GF(3) have dims p^2 "
                 "with exponents below p")


def test_criterion_6_pbw_equivalence(crosschecks):
    for name, report in crosschecks.items():
        expected = CORPUS[name]["expect"]["crosscheck"]["pbw_type"]
        verdicts = report.verdicts()
        assert len(set(verdicts)) == 1, f"{name}: split verdicts {verdicts}"
        assert verdicts[0] is expected, f"{name}: {verdicts}"
    _announce(6, "PBW type = strictly generated = cosymmetric = lifting on "
                 "every entry; all false on the primitive-envelope fixture")


def test_criterion_7_headroom_stabilization(specs, envelopes):
    for name, spec in specs.items():
        env2 = envelopes[name]
        assert env2.stable, name
        bumped = dict(CORPUS[name]["spec"])
        bumped["headroom"] = 3
        env3 = build_envelope(parse_spec(bumped))
        rows2 = {p: dict(r) for p, r in env2.ech.rows.items()}
        rows3 = {p: dict(r) for p, r in env3.ech.rows.items()}
        assert rows2 == rows3, f"{name}: ideal differs between headroom 2 and 3"
    _announce(7, "defining ideals identical for headroom 2 and 3 on every entry")


def test_criterion_8_structural_suites(specs):
    q = RATIONALS
    spaces = [specs["kharchenko"].space, specs["stumbo"].space,
              BraidedSpace.flip(GF(3), 2)]
    for space in spaces:
        # braid relations on tensor cubes and quartics
        for n in (3, 4):
            basis = TupleBasis(space, n)
            sig = {i: sigma(basis, i) for i in range(1, n)}
            for i in range(1, n - 1):
                a, b = sig[i], sig[i + 1]
                assert a.then(b).then(a) == b.then(a).then(b)
            for i in range(1, n):
                for j in range(i + 2, n):
                    assert sig[i].then(sig[j]) == sig[j].then(sig[i])
        # reduced-word independence of the braid lift
        basis3 = TupleBasis(space, 3)
        s1s2s1 = sigma(basis3, 1).then(sigma(basis3, 2)).then(sigma(basis3, 1))
        assert braid_lift(basis3, (2, 1, 0)) == s1s2s1
        # bialgebra compatibility: shuffle components match the
        # multiplicative comultiplication up to degree 4
        for n in range(2, 5):
            for word in TupleBasis(space, n).words:
                expected = delta_recursive(space, word)
                for p in range(n + 1):
                    comp = delta_component(space, p, n - p)
                    row = comp.rows[TupleBasis(space, n).words.index(word)]
                    got = {}
                    basis_p = TupleBasis(space, p)
                    basis_q = TupleBasis(space, n - p)
                    for col, s in row.items():
                        left = basis_p.words[col // len(basis_q)]
                        right = basis_q.words[col % len(basis_q)]
                        got[(left, right)] = s
                    want = {pair: s for pair, s in expected.items()
                            if len(pair[0]) == p}
                    assert got == want, (word, p)
    # rank-nullity and Grassmann identity on a fixed exact matrix
    m = Matrix.from_entries(q, [["1", "2", "0", "1"],
                                ["0", "1", "1", "1"],
                                ["1", "3", "1", "2"]])
    assert m.rank() + m.kernel().dim == 4
    # tower-stage splitting axioms are asserted inside the stagewise
    # construction; cosymmetry of a stage bounds the rank by stage + 1
    for name in ("kharchenko", "flip-d2-char0"):
        reports = khacosym_consistency(specs[name].space, specs[name].N)
        assert any(r["cosymmetric"] for r in reports)
        for r in reports:
            if r["cosymmetric"]:
                rank, _ = combinatorial_rank(specs[name].space, specs[name].N)
                assert rank <= r["implied_rank_bound"]
    _announce(8, "QYBE/braid relations, comultiplication compatibility to "
                 "degree 4, rank-nullity, lift independence, stage splitting "
                 "and cosymmetry-rank consistency all hold")
