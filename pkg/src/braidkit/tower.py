"""Graded quotients of the braided tensor algebra and the Nichols tower.

Everything is truncated at a fixed tensor degree.  A graded presentation
stores, for each degree, the span of the ideal inside V^(x)n over the
word basis; quotient data (dimensions, normal forms, primitives) is read
off from those echelons.
"""

from __future__ import annotations

from .braided import BraidedSpace, TupleBasis, delta_component, quantum_symmetrizer
from .fields import Field
from .linalg import Echelon, Matrix, Subspace


class TowerError(ValueError):
    pass


class GradedPresentation:
    """Quotient of the truncated tensor algebra by a graded ideal.

    ``ideal[n]`` is an Echelon spanning the degree-n part of the ideal
    over the length-n word basis (columns are lexicographic word indices).
    """

    __slots__ = ("space", "max_degree", "ideal")

    def __init__(self, space: BraidedSpace, max_degree: int, ideal):
        self.space = space
        self.max_degree = max_degree
        self.ideal = ideal

    @property
    def field(self) -> Field:
        return self.space.field

    def dims(self) -> list[int]:
        d = self.space.dim
        return [d**n - self.ideal[n].rank for n in range(self.max_degree + 1)]

    def reduce(self, n: int, vec: dict) -> dict:
        return self.ideal[n].reduce(vec)

    def same_quotient(self, other: "GradedPresentation") -> bool:
        if self.space is not other.space or self.max_degree != other.max_degree:
            return False
        return all(
            a.rows == b.rows for a, b in zip(self.ideal, other.ideal)
        )

    def verify(self) -> None:
        """Check the stored spans really form a braided coideal ideal.

        Bounded by the truncation degree: multiplicativity and the
        coideal condition are only meaningful up to ``max_degree``.
        """
        space = self.space
        d = space.dim
        for n in range(1, self.max_degree + 1):
            ech = self.ideal[n]
            prev = self.ideal[n - 1]
            for p, row in prev.rows.items():
                for i in range(d):
                    left = {i * d ** (n - 1) + c: s for c, s in row.items()}
                    right = {c * d + i: s for c, s in row.items()}
                    if not ech.contains(left) or not ech.contains(right):
                        raise TowerError(f"degree {n}: not closed under multiplication")
        for n in range(2, self.max_degree + 1):
            basis = TupleBasis(space, n)
            for p in range(1, n):
                q = n - p
                mixed = _mixed_ideal_echelon(self, basis, p)
                # uncapped word index == lexicographic integer index
                delta = delta_component(space, p, q)
                for row in self.ideal[n].rows.values():
                    if not mixed.contains(delta.apply(row)):
                        raise TowerError(f"degree {n}: ideal is not a coideal at split ({p},{q})")


def _word_to_int(word: tuple, d: int) -> int:
    idx = 0
    for a in word:
        idx = idx * d + a
    return idx


def _int_to_word(idx: int, n: int, d: int) -> tuple:
    out = []
    for _ in range(n):
        out.append(idx % d)
        idx //= d
    return tuple(reversed(out))


def free_presentation(space: BraidedSpace, max_degree: int) -> GradedPresentation:
    return GradedPresentation(
        space, max_degree, [Echelon(space.field) for _ in range(max_degree + 1)]
    )


def ideal_closure(space: BraidedSpace, max_degree: int, generators) -> list:
    """Graded two-sided ideal generated by homogeneous elements.

    ``generators`` maps degree -> iterable of sparse vectors over word
    indices.  Degree n of the ideal is gens_n + V (x) J_{n-1} + J_{n-1} (x) V.
    """
    field = space.field
    d = space.dim
    out = [Echelon(field) for _ in range(max_degree + 1)]
    for n in range(max_degree + 1):
        ech = out[n]
        if n > 0:
            for row in out[n - 1].basis_rows():
                for i in range(d):
                    ech.insert({i * d ** (n - 1) + c: s for c, s in row.items()})
                    ech.insert({c * d + i: s for c, s in row.items()})
        for g in generators.get(n, ()):
            ech.insert(g)
    return out


def _mixed_ideal_echelon(pres: GradedPresentation, basis: TupleBasis, p: int) -> Echelon:
    """Echelon of I_p (x) V^(x)q + V^(x)p (x) I_q inside degree n = p + q."""
    space = pres.space
    d = space.dim
    n = basis.length
    q = n - p
    ech = Echelon(space.field)
    for row in pres.ideal[p].basis_rows():
        for v in range(d**q):
            ech.insert({c * d**q + v: s for c, s in row.items()})
    for row in pres.ideal[q].basis_rows():
        for u in range(d**p):
            ech.insert({u * d**q + c: s for c, s in row.items()})
    return ech


def primitives_of_degree(pres: GradedPresentation, n: int) -> Subspace:
    """Preimages in V^(x)n of the primitive elements of the quotient.

    A vector is kept when every component Delta_{p,q} with 0 < p < n
    lands in I_p (x) T + T (x) I_q.  The degree-n ideal itself always
    qualifies, so the result contains pres.ideal[n].
    """
    space = pres.space
    field = space.field
    d = space.dim
    basis = TupleBasis(space, n)
    size = len(basis)
    rows = [dict() for _ in range(size)]
    for p in range(1, n):
        mixed = _mixed_ideal_echelon(pres, basis, p)
        delta = delta_component(space, p, n - p)
        offset = (p - 1) * size
        for i in range(size):
            reduced = mixed.reduce(delta.rows[i])
            for c, s in reduced.items():
                rows[i][offset + c] = s
    op = Matrix(field, size, max(1, (n - 1) * size), rows)
    return op.operator_kernel()


def tower_step(pres: GradedPresentation) -> GradedPresentation:
    """Quotient by the ideal generated by primitives of degree >= 2."""
    gens = {}
    for n in range(2, pres.max_degree + 1):
        prim = primitives_of_degree(pres, n)
        gens[n] = [dict(r) for r in prim.rows]
    ideal = ideal_closure(pres.space, pres.max_degree, gens)
    return GradedPresentation(pres.space, pres.max_degree, ideal)


def combinatorial_rank(
    space: BraidedSpace, max_degree: int, max_steps: int | None = None
) -> tuple[int, list[list[int]]]:
    """Number of tower steps until the quotient stops changing.

    Returns (rank, trace) where trace lists the graded dimensions of
    every stage starting with the free algebra.  The answer is exact for
    the truncation; raising ``max_degree`` can only increase it.
    """
    if max_steps is None:
        max_steps = max_degree
    pres = free_presentation(space, max_degree)
    trace = [pres.dims()]
    for step in range(1, max_steps + 2):
        nxt = tower_step(pres)
        trace.append(nxt.dims())
        if nxt.same_quotient(pres):
            return step - 1, trace
        pres = nxt
    raise TowerError(
        f"tower did not stabilize within {max_steps} steps at degree {max_degree}"
    )


def nichols_presentation(space: BraidedSpace, max_degree: int) -> GradedPresentation:
    """Stable stage of the tower: the Nichols algebra truncation."""
    pres = free_presentation(space, max_degree)
    for _ in range(max_degree + 2):
        nxt = tower_step(pres)
        if nxt.same_quotient(pres):
            return pres
        pres = nxt
    raise TowerError(f"tower did not stabilize at degree {max_degree}")


def nichols_dims_tower(space: BraidedSpace, max_degree: int) -> list[int]:
    return nichols_presentation(space, max_degree).dims()


def nichols_dims_symmetrizer(space: BraidedSpace, max_degree: int) -> list[int]:
    """Graded dimensions as ranks of the quantum symmetrizers."""
    dims = [1]
    for n in range(1, max_degree + 1):
        dims.append(quantum_symmetrizer(space, n).rank())
    return dims
