"""Exact sparse linear algebra: row reduction, kernels, canonical subspaces.

Vectors are sparse dicts {column index: nonzero scalar}.  The reduced row
echelon form is the single normal form for subspaces: two subspaces are
equal iff their canonical representations are identical.
"""

from __future__ import annotations

from .fields import Field, FieldError, check_same_field


class LinalgError(ValueError):
    pass


class Echelon:
    """Mutable RREF accumulator over sparse rows.

    Invariants after every ``insert``: each stored row is normalized (pivot
    entry 1, pivot = smallest column in its support) and no row's tail
    contains any pivot column.  The stored rows are therefore exactly the
    canonical RREF basis of the span, independent of insertion order.
    """

    __slots__ = ("field", "rows", "_occ")

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict[int, dict] = {}  # pivot column -> row
        self._occ: dict[int, set] = {}  # column -> pivots of rows whose tail hits it

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon(self.field)
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        e._occ = {c: set(s) for c, s in self._occ.items()}
        return e

    def reduce(self, vec: dict) -> dict:
        """Return the normal form of ``vec`` modulo the current row space."""
        rows = self.rows
        sub, mul = self.field.sub, self.field.mul
        v = {c: s for c, s in vec.items() if s}
        while True:
            hits = [c for c in v if c in rows]
            if not hits:
                return v
            for c in hits:
                coef = v.pop(c)
                for col, s in rows[c].items():
                    if col == c:
                        continue
                    cur = v.get(col)
                    new = mul(coef, s) if cur is None else sub(cur, mul(coef, s))
                    if cur is None:
                        v[col] = self.field.neg(new)
                    elif new:
                        v[col] = new
                    else:
                        del v[col]

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def insert(self, vec: dict) -> int | None:
        """Reduce ``vec`` and adjoin it; returns the new pivot or None."""
        r = self.reduce(vec)
        if not r:
            return None
        pivot = min(r)
        inv = self.field.inv(r[pivot])
        mul, sub = self.field.mul, self.field.sub
        if inv != self.field.one():
            r = {c: mul(inv, s) for c, s in r.items()}
        # back-substitute into rows whose tail contains the new pivot
        occ = self._occ
        for p in list(occ.get(pivot, ())):
            row = self.rows[p]
            coef = row.pop(pivot)
            occ[pivot].discard(p)
            for col, s in r.items():
                if col == pivot:
                    continue
                cur = row.get(col)
                if cur is None:
                    row[col] = self.field.neg(mul(coef, s))
                    occ.setdefault(col, set()).add(p)
                else:
                    new = sub(cur, mul(coef, s))
                    if new:
                        row[col] = new
                    else:
                        del row[col]
                        occ[col].discard(p)
        self.rows[pivot] = r
        for col in r:
            if col != pivot:
                occ.setdefault(col, set()).add(pivot)
        return pivot

    def basis_rows(self) -> list[dict]:
        return [dict(self.rows[p]) for p in sorted(self.rows)]


class Matrix:
    """Sparse matrix; ``rows[i]`` maps column -> nonzero entry of row i."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [dict() for _ in range(nrows)] if rows is None else rows

    @classmethod
    def from_entries(cls, field: Field, grid) -> "Matrix":
        rows = []
        for line in grid:
            row = {}
            for j, x in enumerate(line):
                s = field.coerce(x)
                if s:
                    row[j] = s
            rows.append(row)
        ncols = max((len(line) for line in grid), default=0)
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one = field.one()
        return cls(field, n, n, [{i: one} for i in range(n)])

    def entry(self, i: int, j: int):
        return self.rows[i].get(j, self.field.zero())

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    __hash__ = None

    def add(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise LinalgError("shape mismatch in add")
        fadd = self.field.add
        out = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            for c, s in b.items():
                cur = r.get(c)
                new = s if cur is None else fadd(cur, s)
                if new:
                    r[c] = new
                elif cur is not None:
                    del r[c]
            out.append(r)
        return Matrix(self.field, self.nrows, self.ncols, out)

    def then(self, other: "Matrix") -> "Matrix":
        """Composite operator: apply self first, then other.

        Rows are interpreted as images of basis vectors, so this is the
        sparse product self @ other in the row-as-image convention.
        """
        if self.ncols != other.nrows:
            raise LinalgError("shape mismatch in composition")
        mul, fadd = self.field.mul, self.field.add
        orows = other.rows
        out = []
        for a in self.rows:
            r: dict = {}
            for j, s in a.items():
                for c, t in orows[j].items():
                    cur = r.get(c)
                    new = mul(s, t) if cur is None else fadd(cur, mul(s, t))
                    if new:
                        r[c] = new
                    elif cur is not None:
                        del r[c]
            out.append(r)
        return Matrix(self.field, self.nrows, other.ncols, out)

    def apply(self, vec: dict) -> dict:
        """Image of a sparse vector (indexed by row) under the operator."""
        mul, fadd = self.field.mul, self.field.add
        out: dict = {}
        for i, s in vec.items():
            for c, t in self.rows[i].items():
                cur = out.get(c)
                new = mul(s, t) if cur is None else fadd(cur, mul(s, t))
                if new:
                    out[c] = new
                elif cur is not None:
                    del out[c]
        return out

    def transpose(self) -> "Matrix":
        rows = [dict() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, s in row.items():
                rows[j][i] = s
        return Matrix(self.field, self.ncols, self.nrows, rows)

    def rref(self) -> tuple["Matrix", tuple[int, ...], int]:
        """Unique reduced row echelon form, pivot columns, and rank."""
        ech = Echelon(self.field)
        for row in self.rows:
            ech.insert(row)
        pivots = tuple(sorted(ech.rows))
        rows = [dict(ech.rows[p]) for p in pivots]
        rows.extend({} for _ in range(self.nrows - len(rows)))
        return Matrix(self.field, self.nrows, self.ncols, rows), pivots, len(pivots)

    def rank(self) -> int:
        ech = Echelon(self.field)
        for row in self.rows:
            ech.insert(row)
        return ech.rank

    def kernel(self) -> "Subspace":
        """Kernel of the column-vector map v -> M v (grid convention)."""
        echelon, pivots, _ = self.rref()
        pivset = set(pivots)
        basis = []
        neg = self.field.neg
        one = self.field.one()
        piv_to_row = {p: i for i, p in enumerate(pivots)}
        for free in range(self.ncols):
            if free in pivset:
                continue
            v = {free: one}
            for p, i in piv_to_row.items():
                s = echelon.rows[i].get(free)
                if s:
                    v[p] = neg(s)
            basis.append(v)
        return Subspace.from_vectors(self.field, self.ncols, basis)

    def left_kernel_vectors(self) -> list[dict]:
        """Canonical basis of {x : sum_i x_i rows[i] = 0} (row-as-image kernel)."""
        off = self.ncols
        ech = Echelon(self.field)
        one = self.field.one()
        for i, row in enumerate(self.rows):
            aug = dict(row)
            aug[off + i] = one
            ech.insert(aug)
        out = []
        for p in sorted(ech.rows):
            if p >= off:
                out.append({c - off: s for c, s in ech.rows[p].items()})
        return out

    def operator_kernel(self) -> "Subspace":
        """Kernel of the operator in the row-as-image convention."""
        return Subspace.from_vectors(self.field, self.nrows, self.left_kernel_vectors())

    def image(self) -> "Subspace":
        return Subspace.from_vectors(self.field, self.ncols, [dict(r) for r in self.rows])

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


class Subspace:
    """Canonically echelonized subspace of K^ambient.

    Basis rows are RREF: pivot entries 1, pivot columns otherwise zero,
    rows sorted by pivot.  Equality is structural equality of the form.
    """

    __slots__ = ("field", "ambient", "rows", "pivots")

    def __init__(self, field: Field, ambient: int, rows: tuple, pivots: tuple):
        self.field = field
        self.ambient = ambient
        self.rows = rows  # tuple of dicts, sorted by pivot
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, field: Field, ambient: int, vectors) -> "Subspace":
        ech = Echelon(field)
        for v in vectors:
            for c in v:
                if c >= ambient or c < 0:
                    raise LinalgError(f"coordinate {c} outside ambient {ambient}")
            ech.insert(v)
        return cls.from_echelon(field, ambient, ech)

    @classmethod
    def from_echelon(cls, field: Field, ambient: int, ech: Echelon) -> "Subspace":
        pivots = tuple(sorted(ech.rows))
        rows = tuple(dict(ech.rows[p]) for p in pivots)
        return cls(field, ambient, rows, pivots)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, (), ())

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        one = field.one()
        return cls(field, ambient, tuple({i: one} for i in range(ambient)), tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def to_echelon(self) -> Echelon:
        ech = Echelon(self.field)
        ech.rows = {p: dict(r) for p, r in zip(self.pivots, self.rows)}
        for p, r in ech.rows.items():
            for c in r:
                if c != p:
                    ech._occ.setdefault(c, set()).add(p)
        return ech

    def reduce(self, vec: dict) -> dict:
        ech = self.to_echelon()
        return ech.reduce(vec)

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def contains_space(self, other: "Subspace") -> bool:
        ech = self.to_echelon()
        return all(not ech.reduce(r) for r in other.rows)

    def _check_compatible(self, other: "Subspace"):
        check_same_field(self.field, other.field)
        if self.ambient != other.ambient:
            raise LinalgError(
                f"ambient mismatch: {self.ambient} vs {other.ambient}"
            )

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        ech = self.to_echelon()
        for r in other.rows:
            ech.insert(r)
        return Subspace.from_echelon(self.field, self.ambient, ech)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of the stacked-basis map."""
        self._check_compatible(other)
        ka, kb = self.dim, other.dim
        rows = [dict(r) for r in self.rows]
        neg = self.field.neg
        rows.extend({c: neg(s) for c, s in r.items()} for r in other.rows)
        stacked = Matrix(self.field, ka + kb, self.ambient, rows)
        vectors = []
        mul, fadd = self.field.mul, self.field.add
        for combo in stacked.left_kernel_vectors():
            v: dict = {}
            for i, coef in combo.items():
                if i >= ka:
                    continue
                for c, s in self.rows[i].items():
                    cur = v.get(c)
                    new = mul(coef, s) if cur is None else fadd(cur, mul(coef, s))
                    if new:
                        v[c] = new
                    elif cur is not None:
                        del v[c]
            if v:
                vectors.append(v)
        return Subspace.from_vectors(self.field, self.ambient, vectors)

    def quotient_dim(self, sub: "Subspace") -> int:
        self._check_compatible(sub)
        if not self.contains_space(sub):
            raise LinalgError("quotient_dim: second argument is not a subspace of the first")
        return self.dim - sub.dim

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash(
            (self.ambient, self.pivots, tuple(tuple(sorted(r.items())) for r in self.rows))
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def rref(m: Matrix):
    """Reduced row echelon form of a matrix: (echelon, pivots, rank)."""
    return m.rref()


def kernel(m: Matrix) -> Subspace:
    return m.kernel()


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a.sum(b)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def contains(a: Subspace, v: dict) -> bool:
    return a.contains(v)


def quotient_dim(a: Subspace, b: Subspace) -> int:
    return a.quotient_dim(b)
