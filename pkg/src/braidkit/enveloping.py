"""Universal enveloping algebras of braided Lie algebras, truncated.

An enveloping algebra is presented as T(V,c)/J for an inhomogeneous
ideal J generated by relations lead - tail.  All computations happen
inside the filtration step T_(N); the intersection J cap T_(n) is
obtained by closing the ideal within degree N+H and certifying that
headroom H and H+1 agree (instability is a hard error).

The quotient carries three filtrations worth of structure: the standard
(generator) filtration, the coradical filtration, and the graded objects
they induce, from which PBW type, strict generation, cosymmetry and the
lifting property are decided.
"""

from __future__ import annotations

from .braided import (
    MAX_SYMMETRIC_DEGREE,
    BraidedSpace,
    TupleBasis,
    delta_component,
    quantum_symmetrizer,
)
from .fields import Field
from .linalg import Echelon, Matrix, Subspace
from .tower import combinatorial_rank, free_presentation, primitives_of_degree


class EnvelopingError(ValueError):
    pass


class HeadroomInstability(EnvelopingError):
    pass


class FilteredBasis:
    """Word basis of T_(top) = sum of V^(x)k for k <= top.

    Columns are laid out degree-descending (degree ``top`` first) and
    lexicographically within a degree, so the pivot of an RREF row is
    always part of its top-degree component and rows with pivot degree
    <= n span exactly (row space) cap T_(n).
    """

    __slots__ = ("space", "top", "offsets", "size")

    def __init__(self, space: BraidedSpace, top: int):
        self.space = space
        self.top = top
        d = space.dim
        offsets = [0] * (top + 1)
        acc = 0
        for k in range(top, -1, -1):
            offsets[k] = acc
            acc += d**k
        self.offsets = offsets
        self.size = acc

    def col(self, k: int, lex: int) -> int:
        return self.offsets[k] + lex

    def decompose(self, col: int) -> tuple[int, int]:
        for k in range(self.top, -1, -1):
            start = self.offsets[k]
            if col < start + self.space.dim**k:
                return k, col - start
        raise EnvelopingError(f"column {col} out of range")

    def degree_of(self, col: int) -> int:
        return self.decompose(col)[0]

    def word_col(self, word: tuple) -> int:
        d = self.space.dim
        lex = 0
        for a in word:
            lex = lex * d + a
        return self.col(len(word), lex)

    def col_word(self, col: int) -> tuple:
        k, lex = self.decompose(col)
        d = self.space.dim
        out = []
        for _ in range(k):
            out.append(lex % d)
            lex //= d
        return tuple(reversed(out))


def _relation_degree(rel: dict) -> int:
    return max(k for (k, _) in rel)


class RelationSet:
    """Generators lead - tail of a defining ideal.

    Each relation is a sparse vector over (degree, lex index) keys; the
    top-degree part is the lead.
    """

    __slots__ = ("relations", "presentation_level_only")

    def __init__(self, relations, presentation_level_only=False):
        for rel in relations:
            if not rel:
                raise EnvelopingError("empty relation")
        self.relations = list(relations)
        self.presentation_level_only = presentation_level_only

    def __len__(self):
        return len(self.relations)


class BracketSpec:
    """Bracket datum selecting the defining relations of the envelope."""

    __slots__ = ("kind", "pairs", "constants", "pmap", "rule")

    def __init__(self, kind, pairs=None, constants=None, pmap=None, rule=None):
        self.kind = kind
        self.pairs = pairs
        self.constants = constants
        self.pmap = pmap
        self.rule = rule

    @classmethod
    def trivial(cls) -> "BracketSpec":
        return cls("trivial")

    @classmethod
    def rank1_map(cls, pairs) -> "BracketSpec":
        """pairs: list of (homogeneous primitive as {(k, lex): s}, image {letter: s})."""
        return cls("rank1_map", pairs=list(pairs))

    @classmethod
    def lie_flip(cls, constants) -> "BracketSpec":
        """constants: {(i, j): {k: coeff}} for i < j, giving [x_i, x_j]."""
        return cls("lie_flip", constants=dict(constants))

    @classmethod
    def restricted_flip(cls, constants, pmap) -> "BracketSpec":
        """Additionally pmap[i] = x_i^[p] as {letter: coeff}."""
        return cls("restricted_flip", constants=dict(constants), pmap=list(pmap))

    @classmethod
    def custom_tower(cls, rule) -> "BracketSpec":
        """rule(stage_env, p_reps) -> list of bracket values in V per primitive."""
        return cls("custom_tower", rule=rule)

    def _bracket_of_letters(self, field: Field, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return dict(self.constants.get((i, j), {}))
        return {k: field.neg(s) for k, s in self.constants.get((j, i), {}).items()}

    def _bracket(self, field: Field, vec: dict, j: int) -> dict:
        out: dict = {}
        for i, s in vec.items():
            for k, t in self._bracket_of_letters(field, i, j).items():
                cur = out.get(k, field.zero())
                new = field.add(cur, field.mul(s, t))
                if new:
                    out[k] = new
                elif k in out:
                    del out[k]
        return out

    def validate(self, space: BraidedSpace) -> None:
        field = space.field
        if self.kind in ("lie_flip", "restricted_flip"):
            if space.pair_action != BraidedSpace.flip(field, space.dim).pair_action:
                raise EnvelopingError(f"{self.kind} requires the flip braiding")
            if self.kind == "lie_flip" and field.characteristic != 0:
                raise EnvelopingError("lie_flip requires characteristic 0")
            if self.kind == "restricted_flip" and field.characteristic == 0:
                raise EnvelopingError("restricted_flip requires positive characteristic")
            d = space.dim
            for i, j, k in ((a, b, c) for a in range(d) for b in range(d) for c in range(d)):
                # Jacobi on basis triples: [[i,j],k] + [[j,k],i] + [[k,i],j] = 0
                acc: dict = {}
                for u, v, w in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = self._bracket_of_letters(field, u, v)
                    for m, s in self._bracket(field, inner, w).items():
                        cur = acc.get(m, field.zero())
                        new = field.add(cur, s)
                        if new:
                            acc[m] = new
                        elif m in acc:
                            del acc[m]
                if acc:
                    raise EnvelopingError(f"Jacobi identity fails on ({i},{j},{k})")
            if self.kind == "restricted_flip":
                p = field.characteristic
                if len(self.pmap) != d:
                    raise EnvelopingError("p-map must give a value per basis letter")
                for i in range(d):
                    for j in range(d):
                        lhs = self._bracket(field, dict(self.pmap[i]), j)
                        # ad(x_i)^p(x_j), applied letterwise
                        vec = {j: field.one()}
                        for _ in range(p):
                            nxt: dict = {}
                            for m, s in vec.items():
                                for k2, t in self._bracket_of_letters(field, i, m).items():
                                    cur = nxt.get(k2, field.zero())
                                    new = field.add(cur, field.mul(s, t))
                                    if new:
                                        nxt[k2] = new
                                    elif k2 in nxt:
                                        del nxt[k2]
                            vec = nxt
                        if lhs != vec:
                            raise EnvelopingError(
                                f"restricted axiom ad(x^[p]) = ad(x)^p fails on ({i},{j})"
                            )


def relations_from_bracket(space: BraidedSpace, spec: BracketSpec, N: int) -> RelationSet:
    """Defining relations of U(V,c,b) for the built-in bracket kinds."""
    spec.validate(space)
    field = space.field
    one = field.one()
    if spec.kind == "custom_tower":
        raise EnvelopingError("custom_tower brackets are driven by tower_envelope")
    if spec.kind in ("lie_flip", "restricted_flip"):
        d = space.dim

        def lex(word):
            idx = 0
            for a in word:
                idx = idx * d + a
            return idx

        rels = []
        for i in range(d):
            for j in range(i + 1, d):
                rel = {(2, lex((i, j))): one, (2, lex((j, i))): field.neg(one)}
                for k, s in spec._bracket_of_letters(field, i, j).items():
                    rel[(1, k)] = field.neg(s)
                rels.append(rel)
        if spec.kind == "restricted_flip":
            p = field.characteristic
            if p > N:
                raise EnvelopingError("truncation degree below the characteristic")
            for i in range(d):
                rel = {(p, lex((i,) * p)): one}
                for k, s in spec.pmap[i].items():
                    if s:
                        rel[(1, k)] = field.neg(field.coerce(s))
                rels.append(rel)
        return RelationSet(rels)
    # trivial / rank1_map: relations on the homogeneous primitives of T(V,c)
    rank, _ = combinatorial_rank(space, N)
    flagged = rank > 1
    free = free_presentation(space, N)
    prim_rows = {}
    for k in range(2, N + 1):
        prim = primitives_of_degree(free, k)
        prim_rows[k] = [dict(r) for r in prim.rows]
    if spec.kind == "trivial":
        rels = [
            {(k, c): s for c, s in row.items()}
            for k in sorted(prim_rows)
            for row in prim_rows[k]
        ]
        return RelationSet(rels, presentation_level_only=flagged)
    # rank1_map: seed with the given pairs, then read the rest of the map
    # off the closure (beta must be determined on all of E)
    seeded = []
    for vec, image in spec.pairs:
        rel = dict(vec)
        k = _relation_degree(rel)
        for c, s in rel.items():
            if c[0] != k:
                raise EnvelopingError("rank1_map domain elements must be homogeneous")
        for letter, s in image.items():
            coerced = field.coerce(s)
            if coerced:
                rel[(1, letter)] = field.neg(coerced)
        seeded.append(rel)
    rows, _, fb = _closure(space, seeded, N, 2)
    ech = Echelon(field)
    for piv in sorted(rows):
        ech.insert(rows[piv])
    rels = list(seeded)
    for k in sorted(prim_rows):
        for row in prim_rows[k]:
            vec = {fb.col(k, c): s for c, s in row.items()}
            nf = ech.reduce(vec)
            if any(fb.degree_of(c) > 1 for c in nf):
                raise EnvelopingError(
                    f"bracket underdetermined on a degree-{k} primitive"
                )
            rel = {(k, c): s for c, s in row.items()}
            for c, s in nf.items():
                deg, lexi = fb.decompose(c)
                rel[(deg, lexi)] = field.neg(s)
            if any(c[0] >= 2 for c in rel if rel[c]):
                rels.append(rel)
    return RelationSet(rels, presentation_level_only=flagged)


def _closure(space: BraidedSpace, relations, N: int, H: int):
    """Headroom-bounded ideal closure.

    Processes candidate products stage by stage (stage = top degree) up
    to N+H+1 and compares the pivot-degree <= N rows after stage N+H
    with the final state; returns (rows restricted to pivot degree <= N,
    stable flag, basis of T_(N+H+1)).
    """
    field = space.field
    d = space.dim
    top = N + H + 1
    fb = FilteredBasis(space, top)
    ech = Echelon(field)
    by_stage: dict[int, list] = {}
    for rel in relations:
        deg = _relation_degree(rel)
        if deg > N:
            raise EnvelopingError(f"relation of degree {deg} exceeds truncation {N}")
        vec = {fb.col(k, lex): s for (k, lex), s in rel.items() if s}
        if not vec:
            continue
        by_stage.setdefault(deg, []).append(vec)
    mult_queue: dict[int, list] = {}
    snapshot = None

    def insert(vec):
        piv = ech.insert(vec)
        if piv is None:
            return None
        k = fb.degree_of(piv)
        if k + 1 <= top:
            mult_queue.setdefault(k + 1, []).append(piv)
        return k

    for m in range(top + 1):
        for vec in by_stage.get(m, ()):
            insert(vec)
        # exhaust all products due at or before this stage; low-degree
        # drops re-enter the current stage immediately
        while True:
            stage = next((s for s in sorted(mult_queue) if s <= m and mult_queue[s]), None)
            if stage is None:
                break
            pivots = mult_queue[stage]
            del mult_queue[stage]
            for piv in pivots:
                row = ech.rows[piv]
                k = fb.degree_of(piv)
                if k + 1 > top:
                    continue
                left = {}
                for i in range(d):
                    for c, s in list(row.items()):
                        kk, lex = fb.decompose(c)
                        left[fb.col(kk + 1, i * d**kk + lex)] = s
                    insert(dict(left))
                    left.clear()
                    for c, s in list(row.items()):
                        kk, lex = fb.decompose(c)
                        left[fb.col(kk + 1, lex * d + i)] = s
                    insert(dict(left))
                    left.clear()
        if m == N + H:
            snapshot = {
                p: dict(r) for p, r in ech.rows.items() if fb.degree_of(p) <= N
            }
    final = {p: dict(r) for p, r in ech.rows.items() if fb.degree_of(p) <= N}
    stable = snapshot == final
    return final, stable, fb


class Envelope:
    """Truncated presentation U_(N) = T_(N)/F_N with a generator datum.

    ``gen_space`` and ``gen_reps`` describe the generators whose products
    define the standard filtration; the default is (V, c) with the
    letters themselves.  The non-default case reinterprets the same
    quotient as generated by another braided space (used for realizing
    an algebra as the envelope of its primitives).
    """

    def __init__(self, space, N, H, relations, ech, fb, stable,
                 gen_space=None, gen_reps=None, presentation_level_only=False):
        self.space = space
        self.N = N
        self.H = H
        self.relations = relations
        self.ech = ech  # Echelon over FilteredBasis(space, N) columns
        self.fb = fb
        self.stable = stable
        self.presentation_level_only = presentation_level_only
        field = space.field
        pivots = set(ech.rows)
        cols = [c for c in range(fb.size) if c not in pivots]
        # dense A order: degree ascending, lexicographic within degree
        cols.sort(key=lambda c: fb.decompose(c))
        self.a_cols = cols
        self.a_index = {c: i for i, c in enumerate(cols)}
        self.a_dim = len(cols)
        if self.a_index[fb.col(0, 0)] != 0:
            raise EnvelopingError("unit word is not part of the quotient basis")
        if gen_space is None:
            gen_space = space
            gen_reps = [
                {fb.word_col((i,)): field.one()} for i in range(space.dim)
            ]
        self.gen_space = gen_space
        self.gen_reps = gen_reps
        self._delta_rows = None
        self._u_subspaces: list = []
        self._gen_images: dict = {(): {0: field.one()}}
        self._prim = None

    # -- construction -------------------------------------------------

    @classmethod
    def from_relations(cls, space, rels, N, H=2):
        relations = rels.relations if isinstance(rels, RelationSet) else list(rels)
        flagged = getattr(rels, "presentation_level_only", False)
        rows, stable, fbtop = _closure(space, relations, N, H)
        if not stable:
            raise HeadroomInstability(
                f"ideal closure unstable between headroom {H} and {H + 1}; retry with larger H"
            )
        fb = FilteredBasis(space, N)
        ech = Echelon(space.field)
        for piv in sorted(rows):
            row = rows[piv]
            ech.insert({fb.col(*fbtop.decompose(c)): s for c, s in row.items()})
        return cls(space, N, H, relations, ech, fb, True,
                   presentation_level_only=flagged)

    @classmethod
    def from_graded_ideal(cls, space, ideal, N):
        """Wrap a graded ideal (list of per-degree Echelons over lex indices)."""
        fb = FilteredBasis(space, N)
        ech = Echelon(space.field)
        relations = []
        for k in range(min(len(ideal), N + 1)):
            for row in ideal[k].basis_rows():
                ech.insert({fb.col(k, c): s for c, s in row.items()})
                relations.append({(k, c): s for c, s in row.items()})
        return cls(space, N, 0, relations, ech, fb, True)

    def with_generators(self, gen_space, gen_reps) -> "Envelope":
        return Envelope(self.space, self.N, self.H, self.relations, self.ech,
                        self.fb, self.stable, gen_space=gen_space, gen_reps=gen_reps,
                        presentation_level_only=self.presentation_level_only)

    # -- quotient coordinates -----------------------------------------

    @property
    def field(self) -> Field:
        return self.space.field

    def f_dims(self) -> list[int]:
        counts = [0] * (self.N + 1)
        for p in self.ech.rows:
            counts[self.fb.degree_of(p)] += 1
        out = []
        acc = 0
        for n in range(self.N + 1):
            acc += counts[n]
            out.append(acc)
        return out

    def nf(self, vec: dict) -> dict:
        """Normal form in A coordinates of a T_(N) vector over fb columns."""
        reduced = self.ech.reduce(vec)
        return {self.a_index[c]: s for c, s in reduced.items()}

    def to_tvec(self, dense: dict) -> dict:
        return {self.a_cols[i]: s for i, s in dense.items()}

    def mult(self, a: dict, b: dict) -> dict:
        """Product of two quotient elements given in dense A coordinates."""
        field = self.field
        fb = self.fb
        out: dict = {}
        for i, s in a.items():
            u = fb.col_word(self.a_cols[i])
            for j, t in b.items():
                v = fb.col_word(self.a_cols[j])
                if len(u) + len(v) > self.N:
                    raise EnvelopingError("product escapes the truncation degree")
                c = fb.word_col(u + v)
                coef = field.mul(s, t)
                cur = out.get(c, field.zero())
                new = field.add(cur, coef)
                if new:
                    out[c] = new
                elif c in out:
                    del out[c]
        return self.nf(out)

    # -- comultiplication ----------------------------------------------

    def delta_rows(self) -> list[dict]:
        """Full comultiplication on A: row i maps to {(i', j'): s} densely indexed."""
        if self._delta_rows is not None:
            return self._delta_rows
        space = self.space
        field = self.field
        fb = self.fb
        rows = []
        comps: dict = {}
        word_nf: dict = {}

        def nf_word(w):
            if w not in word_nf:
                word_nf[w] = self.nf({fb.word_col(w): field.one()})
            return word_nf[w]

        for col in self.a_cols:
            w = fb.col_word(col)
            n = len(w)
            basis = None
            row: dict = {}
            for p in range(n + 1):
                key = (p, n - p)
                if key not in comps:
                    comps[key] = (delta_component(space, p, n - p), TupleBasis(space, n))
                delta, basis = comps[key]
                for c, s in delta.rows[basis.index[w]].items():
                    w2 = basis.words[c]
                    left = nf_word(w2[:p])
                    right = nf_word(w2[p:])
                    for i, si in left.items():
                        for j, sj in right.items():
                            coef = field.mul(s, field.mul(si, sj))
                            cur = row.get((i, j), field.zero())
                            new = field.add(cur, coef)
                            if new:
                                row[(i, j)] = new
                            elif (i, j) in row:
                                del row[(i, j)]
            rows.append(row)
        self._delta_rows = rows
        return rows

    def reduced_delta_row(self, i: int) -> dict:
        """Delta-bar on A+: the mixed part of the comultiplication."""
        return {
            (a, b): s for (a, b), s in self.delta_rows()[i].items() if a != 0 and b != 0
        }

    def primitive_space(self) -> Subspace:
        """Kernel of the reduced comultiplication on A+ (dense A coords)."""
        if self._prim is not None:
            return self._prim
        field = self.field
        dimA = self.a_dim
        rows = []
        for i in range(1, dimA):
            row = self.reduced_delta_row(i)
            rows.append({a * dimA + b: s for (a, b), s in row.items()})
        op = Matrix(field, dimA - 1, dimA * dimA, rows)
        shifted = [{c + 1: s for c, s in r.items()} for r in op.left_kernel_vectors()]
        self._prim = Subspace.from_vectors(field, dimA, shifted)
        return self._prim

    # -- standard filtration --------------------------------------------

    def gen_word_image(self, word: tuple) -> dict:
        """Image in A of a product of generators (memoized by prefix)."""
        if word in self._gen_images:
            return self._gen_images[word]
        prefix = self.gen_word_image(word[:-1])
        rep = self.nf(dict(self.gen_reps[word[-1]]))
        img = self.mult(prefix, rep)
        self._gen_images[word] = img
        return img

    def u_subspace(self, n: int) -> Subspace:
        """Standard filtration step U_(n) as a subspace of A."""
        while len(self._u_subspaces) <= n:
            m = len(self._u_subspaces)
            ech = (
                self._u_subspaces[m - 1].to_echelon()
                if m
                else Echelon(self.field)
            )
            if m == 0:
                ech.insert({0: self.field.one()})
            else:
                for word in TupleBasis(self.gen_space, m, cap=self.N).words:
                    ech.insert(self.gen_word_image(word))
            self._u_subspaces.append(
                Subspace.from_echelon(self.field, self.a_dim, ech)
            )
        return self._u_subspaces[n]

    def u_dims(self) -> list[int]:
        dims = [self.u_subspace(n).dim for n in range(self.N + 1)]
        if dims[0] != 1 or any(b < a for a, b in zip(dims, dims[1:])):
            raise EnvelopingError("standard filtration dimensions are not monotone")
        if self.gen_space is self.space:
            fd = self.f_dims()
            d = self.space.dim
            tdims = []
            acc = 0
            for n in range(self.N + 1):
                acc += d**n
                tdims.append(acc)
            if dims != [t - f for t, f in zip(tdims, fd)]:
                raise EnvelopingError("filtration dims disagree with ideal dims")
        return dims

    def graded_dims(self) -> list[int]:
        dims = self.u_dims()
        return [dims[0]] + [b - a for a, b in zip(dims, dims[1:])]

    def nichols_gen_dims(self) -> list[int]:
        """Graded dims of the Nichols algebra of the generator space,
        degree-capped at N (exact: the braiding preserves weights)."""
        if self.N > MAX_SYMMETRIC_DEGREE:
            raise EnvelopingError("truncation exceeds the symmetrizer budget")
        out = [1, len(TupleBasis(self.gen_space, 1, cap=self.N))]
        for n in range(2, self.N + 1):
            out.append(quantum_symmetrizer(self.gen_space, n, cap=self.N).rank())
        return out


# -- PBW side ----------------------------------------------------------


def theta_factors_check(env: Envelope):
    """Does the canonical projection onto the associated graded algebra
    kill the Nichols ideal?  Returns (bool, witness or None)."""
    field = env.field
    for n in range(2, env.N + 1):
        basis = TupleBasis(env.gen_space, n, cap=env.N)
        sym = quantum_symmetrizer(env.gen_space, n, cap=env.N)
        prev = env.u_subspace(n - 1)
        for kvec in sym.left_kernel_vectors():
            img: dict = {}
            for wi, s in kvec.items():
                for j, t in env.gen_word_image(basis.words[wi]).items():
                    cur = img.get(j, field.zero())
                    new = field.add(cur, field.mul(s, t))
                    if new:
                        img[j] = new
                    elif j in img:
                        del img[j]
            if not prev.contains(img):
                witness = {basis.words[wi]: s for wi, s in kvec.items()}
                return False, (n, witness)
    return True, None


def pbw_check(env: Envelope):
    """PBW type: theta factors and the graded dims match the Nichols dims."""
    omega_exists, witness = theta_factors_check(env)
    graded = env.graded_dims()
    nichols = env.nichols_gen_dims()
    pbw = omega_exists and graded == nichols
    return {
        "pbw_type": pbw,
        "omega_exists": omega_exists,
        "graded_dims": graded,
        "nichols_dims": nichols,
        "witness": witness,
    }


def pbw_basis(env: Envelope) -> list[list[tuple]]:
    """Greedy-lexicographic monomial sections W_n, degree by degree.

    Words are selected when their Nichols classes are independent; the
    selection is then verified to be a basis of U_(n) modulo U_(n-1).
    """
    report = pbw_check(env)
    if not report["pbw_type"]:
        raise EnvelopingError("pbw_basis requires a PBW-type envelope")
    field = env.field
    out = [[()]]
    for n in range(1, env.N + 1):
        basis = TupleBasis(env.gen_space, n, cap=env.N)
        sym = quantum_symmetrizer(env.gen_space, n, cap=env.N)
        ech = Echelon(field)
        selected = []
        for i, word in enumerate(basis.words):
            if ech.insert(dict(sym.rows[i])) is not None:
                selected.append(word)
        prev = env.u_subspace(n - 1)
        if len(selected) != env.u_subspace(n).dim - prev.dim:
            raise EnvelopingError(f"degree {n}: selected words do not fill the step")
        check = prev.to_echelon()
        for word in selected:
            if check.insert(env.gen_word_image(word)) is None:
                raise EnvelopingError(f"degree {n}: image of {word} is dependent")
        out.append(selected)
    return out


# -- coradical side ------------------------------------------------------


class CoradicalData:
    __slots__ = ("levels", "validity", "p_subspace", "p_space", "p_reps")

    def __init__(self, levels, validity, p_subspace, p_space, p_reps):
        self.levels = levels  # list of Subspace over dense A coords
        self.validity = validity
        self.p_subspace = p_subspace
        self.p_space = p_space  # BraidedSpace (P, c_P) with weights
        self.p_reps = p_reps  # dense A vectors for the P basis

    def level(self, m: int) -> Subspace:
        return self.levels[min(m, len(self.levels) - 1)]

    def gr_complement(self, m: int) -> list[dict]:
        """Basis vectors of U_m spanning a complement of U_{m-1}."""
        prev_piv = set(self.level(m - 1).pivots) if m else set()
        return [dict(r) for r in self.level(m).rows if min(r) not in prev_piv]


def _induced_braiding(env: Envelope, p_sub: Subspace):
    """Braiding c_P on the primitive space, by restricting the braiding
    of the tensor ambient bidegree by bidegree.  Errors if P (x) P is
    not stable under it."""
    from .braided import braid_lift, _block_swap_perm

    field = env.field
    fb = env.fb
    space = env.space
    reps = [dict(r) for r in p_sub.rows]
    dimP = len(reps)
    pivots = list(p_sub.pivots)
    weights = []
    for r in reps:
        degs = {fb.degree_of(env.a_cols[i]) for i in r}
        weights.append(max(degs))
    # T-coordinate representatives split by degree
    treps = []
    for r in reps:
        byk: dict = {}
        for i, s in r.items():
            col = env.a_cols[i]
            k, lex = fb.decompose(col)
            byk.setdefault(k, {})[lex] = s
        treps.append(byk)
    swaps: dict = {}
    pair_action = {}
    for a in range(dimP):
        for b in range(dimP):
            acc: dict = {}
            for n, u in treps[a].items():
                for m, v in treps[b].items():
                    if n == 0 or m == 0:
                        raise EnvelopingError("primitive with a constant term")
                    if (n, m) not in swaps:
                        tb = TupleBasis(space, n + m)
                        swaps[(n, m)] = (tb, braid_lift(tb, _block_swap_perm(n, m)))
                    tb, swap = swaps[(n, m)]
                    vec = {}
                    for lu, su in u.items():
                        wu = fb.col_word(fb.col(n, lu))
                        for lv, sv in v.items():
                            wv = fb.col_word(fb.col(m, lv))
                            vec[tb.index[wu + wv]] = field.mul(su, sv)
                    img = swap.apply(vec)
                    for c, s in img.items():
                        w = tb.words[c]
                        left = env.nf({fb.word_col(w[:m]): field.one()})
                        right = env.nf({fb.word_col(w[m:]): field.one()})
                        for i, si in left.items():
                            for j, sj in right.items():
                                coef = field.mul(s, field.mul(si, sj))
                                cur = acc.get((i, j), field.zero())
                                new = field.add(cur, coef)
                                if new:
                                    acc[(i, j)] = new
                                elif (i, j) in acc:
                                    del acc[(i, j)]
            # express in the P (x) P basis via pivot coordinates
            coeffs = {}
            recon: dict = {}
            for a2 in range(dimP):
                for b2 in range(dimP):
                    s = acc.get((pivots[a2], pivots[b2]))
                    if not s:
                        continue
                    coeffs[(a2, b2)] = s
                    for i, si in reps[a2].items():
                        for j, sj in reps[b2].items():
                            coef = field.mul(s, field.mul(si, sj))
                            cur = recon.get((i, j), field.zero())
                            new = field.add(cur, coef)
                            if new:
                                recon[(i, j)] = new
                            elif (i, j) in recon:
                                del recon[(i, j)]
            if recon != acc:
                raise EnvelopingError("braiding does not stabilize P (x) P")
            pair_action[(a, b)] = coeffs
    labels = tuple(f"p_{i + 1}" for i in range(dimP))
    return BraidedSpace(field, dimP, pair_action, labels=labels, weights=weights), reps


def coradical_filtration(env: Envelope, margin: int = 1) -> CoradicalData:
    """Coradical filtration of the truncated quotient.

    U_0 = K.1 and U_m = K.1 + {a in A+ : Delta-bar(a) in A+ (x) U_{m-1}};
    levels are trusted through m <= N - margin (the top level of a
    truncated coalgebra is exposed to truncation artifacts).
    """
    field = env.field
    dimA = env.a_dim
    one = field.one()
    levels = [Subspace.from_vectors(field, dimA, [{0: one}])]
    while True:
        prev = levels[-1]
        wech = Echelon(field)
        for r in prev.rows:
            if min(r) != 0:
                wech.insert(dict(r))
        rows = []
        for i in range(1, dimA):
            row: dict = {}
            for (a, b), s in env.reduced_delta_row(i).items():
                for c, t in wech.reduce({b: one}).items():
                    cur = row.get(a * dimA + c, field.zero())
                    new = field.add(cur, field.mul(s, t))
                    if new:
                        row[a * dimA + c] = new
                    elif a * dimA + c in row:
                        del row[a * dimA + c]
            rows.append(row)
        op = Matrix(field, dimA - 1, dimA * dimA, rows)
        vectors = [{c + 1: s for c, s in r.items()} for r in op.left_kernel_vectors()]
        vectors.append({0: one})
        cur = Subspace.from_vectors(field, dimA, vectors)
        if cur == prev:
            break
        levels.append(cur)
        if len(levels) > dimA + 1:
            raise EnvelopingError("coradical filtration failed to stabilize")
    p_sub = Subspace.from_vectors(
        field, dimA, [dict(r) for r in levels[min(1, len(levels) - 1)].rows if min(r) != 0]
    )
    p_space, p_reps = _induced_braiding(env, p_sub)
    return CoradicalData(levels, env.N - margin, p_sub, p_space, p_reps)


def strictly_generated_check(env: Envelope, corad: CoradicalData):
    """Coradical filtration equals the standard filtration (two forms,
    asserted to agree).  Returns (bool, witness level or None)."""
    verdict1, witness = True, None
    for m in range(1, corad.validity + 1):
        if corad.level(m) != env.u_subspace(m):
            verdict1, witness = False, m
            break
    verdict2 = True
    for n in range(1, corad.validity + 1):
        ech = Echelon(env.field)
        ech.insert({0: env.field.one()})
        for word in TupleBasis(env.gen_space, n, cap=env.N).words:
            ech.insert(env.gen_word_image(word))
        span_n = Subspace.from_echelon(env.field, env.a_dim, ech)
        inter = span_n.intersect(corad.level(n - 1))
        if not env.u_subspace(n - 1).contains_space(inter):
            verdict2 = False
            break
    if verdict1 != verdict2:
        raise EnvelopingError("the two strict-generation criteria disagree")
    return verdict1, witness


def linearization_map(env: Envelope, corad: CoradicalData, m: int):
    """Iterated reduced comultiplication on the m-th coradical step,
    expressed in P^(x)m coordinates.

    Returns (basis, pairs) where pairs maps each complement basis vector
    of U_m over U_{m-1} to its image over TupleBasis(P, m) words.  The
    induced map on the graded piece is checked to be injective.
    """
    if m > corad.validity:
        raise EnvelopingError(f"level {m} beyond the validity bound {corad.validity}")
    field = env.field
    basis = TupleBasis(corad.p_space, m, cap=env.N)
    pivots = list(corad.p_subspace.pivots)
    reps = [dict(r) for r in corad.p_subspace.rows]
    out = []
    ech = Echelon(field)
    for vec in corad.gr_complement(m):
        tensors = {(i,): s for i, s in vec.items()}
        for _ in range(m - 1):
            nxt: dict = {}
            for key, s in tensors.items():
                last = key[-1]
                for (a, b), t in env.reduced_delta_row(last).items():
                    k2 = key[:-1] + (a, b)
                    cur = nxt.get(k2, field.zero())
                    new = field.add(cur, field.mul(s, t))
                    if new:
                        nxt[k2] = new
                    elif k2 in nxt:
                        del nxt[k2]
            tensors = nxt
        # extract P^(x)m coordinates and verify membership
        coeffs: dict = {}
        recon: dict = {}
        for pw in basis.words:
            s = tensors.get(tuple(pivots[a] for a in pw))
            if not s:
                continue
            coeffs[basis.index[pw]] = s
            parts = [reps[a] for a in pw]
            keys = [()]
            vals = [s]
            for part in parts:
                nk, nv = [], []
                for key, v in zip(keys, vals):
                    for i, si in part.items():
                        nk.append(key + (i,))
                        nv.append(field.mul(v, si))
                keys, vals = nk, nv
            for key, v in zip(keys, vals):
                cur = recon.get(key, field.zero())
                new = field.add(cur, v)
                if new:
                    recon[key] = new
                elif key in recon:
                    del recon[key]
        if recon != tensors:
            raise EnvelopingError(
                f"level {m}: linearization image escapes P^(x){m}"
            )
        if ech.insert(dict(coeffs)) is None:
            raise EnvelopingError(f"level {m}: linearization map is not injective")
        out.append((vec, coeffs))
    return basis, out


def cosymmetric_check(env: Envelope, corad: CoradicalData):
    """Image of the linearization map lands in the Nichols subalgebra of
    the quantum shuffle coalgebra: Im(mu_m) inside Im(S_m over (P, c_P))."""
    for m in range(2, corad.validity + 1):
        if m > MAX_SYMMETRIC_DEGREE:
            break
        sym = quantum_symmetrizer(corad.p_space, m, cap=env.N)
        image = sym.image()
        basis, pairs = linearization_map(env, corad, m)
        for vec, coeffs in pairs:
            if not image.contains(coeffs):
                return False, (m, vec)
    return True, None


def lifting_check(env: Envelope, corad: CoradicalData) -> bool:
    """gr U (coradical filtration) has the graded dims of the Nichols
    algebra of its primitives; with the canonical map injective, the
    dimension match certifies the lifting isomorphism at truncated level."""
    nichols = env.nichols_gen_dims() if env.gen_space is corad.p_space else None
    caps = [1, len(TupleBasis(corad.p_space, 1, cap=env.N))]
    for n in range(2, corad.validity + 1):
        caps.append(quantum_symmetrizer(corad.p_space, n, cap=env.N).rank())
    grdims = [corad.level(0).dim]
    for m in range(1, corad.validity + 1):
        grdims.append(corad.level(m).dim - corad.level(m - 1).dim)
    for m in range(corad.validity + 1):
        if grdims[m] < caps[m]:
            raise EnvelopingError(
                "gr dims fell below Nichols dims; injectivity violated"
            )
    return grdims == caps[: corad.validity + 1]


class PBWReport:
    __slots__ = (
        "graded_dims", "nichols_dims", "omega_exists", "pbw_type",
        "strictly_generated", "cosymmetric", "lifting_ok", "witnesses",
    )

    def __init__(self, **kw):
        for k in self.__slots__:
            setattr(self, k, kw.get(k))

    def verdicts(self):
        return (self.pbw_type, self.strictly_generated, self.cosymmetric, self.lifting_ok)


def teopbw_crosscheck(env: Envelope, margin: int = 1) -> PBWReport:
    """PBW type, strict generation, cosymmetry and the lifting property
    must all agree; a split verdict is an internal inconsistency and is
    raised with every witness attached."""
    corad = coradical_filtration(env, margin=margin)
    pb = pbw_check(env)
    strict, strict_w = strictly_generated_check(env, corad)
    cosym, cosym_w = cosymmetric_check(env, corad)
    lifting = lifting_check(env, corad)
    report = PBWReport(
        graded_dims=pb["graded_dims"],
        nichols_dims=pb["nichols_dims"],
        omega_exists=pb["omega_exists"],
        pbw_type=pb["pbw_type"],
        strictly_generated=strict,
        cosymmetric=cosym,
        lifting_ok=lifting,
        witnesses={
            "pbw": pb["witness"],
            "strictly_generated": strict_w,
            "cosymmetric": cosym_w,
        },
    )
    if len(set(report.verdicts())) != 1:
        raise EnvelopingError(
            "equivalence of PBW criteria violated: "
            f"pbw={report.pbw_type} strict={strict} cosym={cosym} lifting={lifting}; "
            f"witnesses={report.witnesses}"
        )
    return report


# -- tower-driven envelopes ---------------------------------------------


def envelope_of_primitives(space: BraidedSpace, N: int) -> Envelope:
    """T(V,c) truncated, presented as the envelope of its own primitives.

    Uses the identity U(P, c_P, b_P) = T for the infinitesimal braided
    Lie algebra (P, c_P, b_P) of the tensor algebra; the generator
    filtration is by products of primitives.
    """
    env = Envelope.from_graded_ideal(space, [], N)
    p_sub = env.primitive_space()
    p_space, p_reps = _induced_braiding(env, p_sub)
    treps = [env.to_tvec(r) for r in p_reps]
    return env.with_generators(p_space, treps)


def _trivial_rule(env: Envelope, p_reps):
    """b = projection of each primitive onto its degree-1 component."""
    out = []
    for rep in p_reps:
        img = {}
        for i, s in rep.items():
            col = env.a_cols[i]
            k, lex = env.fb.decompose(col)
            if k == 1:
                img[lex] = s
        out.append(img)
    return out


def _rank1_rule(space: BraidedSpace, pairs, N: int, H: int):
    """b reads off the closure of the seeded relations: every primitive
    must have a normal form of degree <= 1, which is its bracket value."""
    field = space.field
    seeded = []
    for vec, image in pairs:
        rel = dict(vec)
        for letter, s in image.items():
            coerced = field.coerce(s)
            if coerced:
                rel[(1, letter)] = field.neg(coerced)
        seeded.append(rel)
    rows, _, fbtop = _closure(space, seeded, N, H)
    ech = Echelon(field)
    for piv in sorted(rows):
        ech.insert(rows[piv])

    def rule(env: Envelope, p_reps):
        out = []
        for rep in p_reps:
            tvec = env.to_tvec(rep)
            nf = ech.reduce(
                {fbtop.col(*env.fb.decompose(c)): s for c, s in tvec.items()}
            )
            img: dict = {}
            for c, s in nf.items():
                k, lex = fbtop.decompose(c)
                if k > 1:
                    raise EnvelopingError("bracket underdetermined on a primitive")
                if k == 0:
                    raise EnvelopingError("bracket value has a constant term")
                img[lex] = s
            out.append(img)
        return out

    return rule


def tower_envelope(space: BraidedSpace, spec: BracketSpec, N: int, H: int = 2,
                   max_stages: int | None = None):
    """Stagewise construction U^[n+1] = U^[n] / ((Id - i b)[P^[n]]).

    The bracket rule produces b^[n] on the primitives of every stage;
    each stage asserts b i = Id on V and the split P = Ker b + V.
    Returns (final envelope, list of stage filtration dims).
    """
    if max_stages is None:
        max_stages = N
    if spec.kind == "trivial":
        rule = _trivial_rule
    elif spec.kind == "rank1_map":
        rule = _rank1_rule(space, spec.pairs, N, H)
    elif spec.kind == "custom_tower":
        rule = spec.rule
    else:
        raise EnvelopingError(f"tower_envelope does not drive kind {spec.kind}")
    field = space.field
    one = field.one()
    rels: list = []
    env = Envelope.from_relations(space, rels, N, H)
    trace = [env.u_dims()]
    for _ in range(max_stages + 1):
        p_sub = env.primitive_space()
        p_reps = [dict(r) for r in p_sub.rows]
        images = rule(env, p_reps)
        _assert_stage_axioms(env, p_sub, p_reps, images)
        new_rels = []
        for rep, img in zip(p_reps, images):
            tvec = env.to_tvec(rep)
            rel: dict = {}
            for c, s in tvec.items():
                k, lex = env.fb.decompose(c)
                rel[(k, lex)] = s
            for letter, s in img.items():
                key = (1, letter)
                cur = rel.get(key, field.zero())
                new = field.sub(cur, s)
                if new:
                    rel[key] = new
                elif key in rel:
                    del rel[key]
            if rel and any(k >= 1 for (k, _) in rel):
                vec = {env.fb.col(k, lex): s for (k, lex), s in rel.items()}
                if not env.ech.contains(vec):
                    new_rels.append(rel)
        if not new_rels:
            return env, trace
        rels = rels + new_rels
        env = Envelope.from_relations(space, rels, N, H)
        trace.append(env.u_dims())
    raise EnvelopingError(f"tower did not stabilize within {max_stages} stages")


def _assert_stage_axioms(env: Envelope, p_sub: Subspace, p_reps, images):
    """b i = Id on V, i injective, and P = Ker b + V with
    Ker b = Im(Id - i b)."""
    field = env.field
    one = field.one()
    d = env.space.dim
    dimP = len(p_reps)
    # i(V) inside A, expressed in P coordinates
    pech = p_sub.to_echelon()
    pivots = list(p_sub.pivots)
    bmat = Matrix(field, dimP, d, [dict(img) for img in images])
    v_in_p = []
    for letter in range(d):
        nfv = env.nf({env.fb.word_col((letter,)): one})
        if pech.reduce(nfv):
            raise EnvelopingError("a generator is not primitive in the quotient")
        coords = {a: nfv[pivots[a]] for a in range(dimP) if pivots[a] in nfv}
        recon: dict = {}
        for a, s in coords.items():
            for i, si in p_reps[a].items():
                cur = recon.get(i, field.zero())
                new = field.add(cur, field.mul(s, si))
                if new:
                    recon[i] = new
                elif i in recon:
                    del recon[i]
        if recon != nfv:
            raise EnvelopingError("failed to express a generator in the P basis")
        if bmat.apply(coords) != {letter: one}:
            raise EnvelopingError("bracket does not restrict to the identity on V")
        v_in_p.append(coords)
    ivech = Echelon(field)
    for coords in v_in_p:
        if ivech.insert(dict(coords)) is None:
            raise EnvelopingError("the canonical map V -> U is not injective")
    kerb = bmat.operator_kernel()
    if kerb.dim + d != dimP:
        raise EnvelopingError("primitives do not split as Ker b + V")
    vsub = Subspace.from_vectors(field, dimP, v_in_p)
    if kerb.intersect(vsub).dim != 0:
        raise EnvelopingError("Ker b meets V")
    # Im(Id - i b) = Ker b
    idmib = []
    for a in range(dimP):
        row = {a: one}
        img = images[a]
        for letter, s in img.items():
            for c, t in v_in_p[letter].items():
                cur = row.get(c, field.zero())
                new = field.sub(cur, field.mul(s, t))
                if new:
                    row[c] = new
                elif c in row:
                    del row[c]
        idmib.append(row)
    if Subspace.from_vectors(field, dimP, idmib) != kerb:
        raise EnvelopingError("Im(Id - i b) differs from Ker b")


def khacosym_consistency(space: BraidedSpace, N: int) -> list[dict]:
    """Stage-by-stage: a cosymmetric tower stage S^[n] forces the trivial
    tower to stabilize by stage n+1."""
    from .tower import tower_step

    rank, trace = combinatorial_rank(space, N)
    pres = free_presentation(space, N)
    out = []
    for stage in range(rank + 1):
        env = Envelope.from_graded_ideal(space, pres.ideal, N)
        corad = coradical_filtration(env)
        cosym, _ = cosymmetric_check(env, corad)
        entry = {"stage": stage, "cosymmetric": cosym, "dims": pres.dims()}
        if cosym:
            entry["implied_rank_bound"] = stage + 1
            if rank > stage + 1:
                raise EnvelopingError(
                    f"stage {stage} cosymmetric but rank {rank} exceeds {stage + 1}"
                )
        out.append(entry)
        pres = tower_step(pres)
    return out
