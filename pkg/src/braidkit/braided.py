"""Braided vector spaces and the operators they induce on tensor powers.

A braiding is stored by its action on pairs of basis letters; every
operator on a tensor power (elementary braidings, permutation lifts,
block swaps, shuffle comultiplication components, the quantum
symmetrizer) is a sparse matrix over an explicit word basis.
"""

from __future__ import annotations

import itertools

from .fields import Field, check_same_field
from .linalg import Matrix

# lift/symmetrizer computations walk all of S_n; keep the blowup bounded
MAX_SYMMETRIC_DEGREE = 7


class BraidingError(ValueError):
    pass


class BraidedSpace:
    """A finite-dimensional vector space with a fixed invertible braiding.

    ``pair_action[(i, j)]`` is the image of x_i (x) x_j as a sparse
    combination {(k, l): scalar}.  The Yang-Baxter equation and
    invertibility are verified at construction time.

    ``weights`` assigns a positive integer degree to each basis letter;
    the braiding must preserve the multiset of weights of a pair.  The
    standard case is weight 1 everywhere.
    """

    __slots__ = ("field", "dim", "pair_action", "labels", "weights")

    def __init__(self, field: Field, dim: int, pair_action, labels=None, weights=None):
        self.field = field
        self.dim = dim
        action = {}
        for (i, j), img in pair_action.items():
            cleaned = {pair: s for pair, s in img.items() if s}
            action[(i, j)] = cleaned
        for i in range(dim):
            for j in range(dim):
                action.setdefault((i, j), {})
        self.pair_action = action
        self.labels = tuple(labels) if labels else tuple(f"x_{i + 1}" for i in range(dim))
        self.weights = tuple(weights) if weights else (1,) * dim
        if len(self.labels) != dim or len(self.weights) != dim:
            raise BraidingError("labels/weights length must match dimension")
        for (i, j), img in self.pair_action.items():
            src = sorted((self.weights[i], self.weights[j]))
            for (k, l) in img:
                if sorted((self.weights[k], self.weights[l])) != src:
                    raise BraidingError("braiding does not preserve pair weights")
        if not self.braiding_matrix().is_invertible():
            raise BraidingError("braiding is not invertible")
        if not check_qybe(self):
            raise BraidingError("braiding fails the quantum Yang-Baxter equation")

    @classmethod
    def diagonal(cls, field: Field, q, labels=None) -> "BraidedSpace":
        """Diagonal braiding x_i (x) x_j -> q[i][j] x_j (x) x_i."""
        d = len(q)
        action = {}
        for i in range(d):
            if len(q[i]) != d:
                raise BraidingError("braiding coefficient matrix must be square")
            for j in range(d):
                s = field.coerce(q[i][j])
                if not s:
                    raise BraidingError("diagonal braiding coefficients must be nonzero")
                action[(i, j)] = {(j, i): s}
        return cls(field, d, action, labels=labels)

    @classmethod
    def flip(cls, field: Field, dim: int, labels=None) -> "BraidedSpace":
        one = field.one()
        action = {(i, j): {(j, i): one} for i in range(dim) for j in range(dim)}
        return cls(field, dim, action, labels=labels)

    @classmethod
    def from_matrix(cls, field: Field, dim: int, grid, labels=None) -> "BraidedSpace":
        """Braiding given as a d^2 x d^2 grid over the basis x_i (x) x_j,
        pairs ordered lexicographically (row index = image-of convention)."""
        action = {}
        for i in range(dim):
            for j in range(dim):
                row = grid[i * dim + j]
                img = {}
                for k in range(dim):
                    for l in range(dim):
                        s = field.coerce(row[k * dim + l])
                        if s:
                            img[(k, l)] = s
                action[(i, j)] = img
        return cls(field, dim, action, labels=labels)

    def braiding_matrix(self) -> Matrix:
        d = self.dim
        rows = []
        for i in range(d):
            for j in range(d):
                rows.append({k * d + l: s for (k, l), s in self.pair_action[(i, j)].items()})
        return Matrix(self.field, d * d, d * d, rows)

    def word_weight(self, word: tuple) -> int:
        return sum(self.weights[a] for a in word)

    def __repr__(self):
        return f"BraidedSpace(dim={self.dim}, field={self.field})"


class TupleBasis:
    """Basis of words of fixed length, lexicographically ordered.

    With a weight cap only words of total weight <= cap are kept; the
    braiding preserves pair weights, so operators restrict exactly.
    """

    __slots__ = ("space", "length", "cap", "words", "index")

    def __init__(self, space: BraidedSpace, length: int, cap: int | None = None):
        self.space = space
        self.length = length
        self.cap = cap
        if cap is None:
            words = list(itertools.product(range(space.dim), repeat=length))
        else:
            words = [
                w
                for w in itertools.product(range(space.dim), repeat=length)
                if space.word_weight(w) <= cap
            ]
        self.words = words
        self.index = {w: i for i, w in enumerate(words)}

    def __len__(self):
        return len(self.words)


def sigma(basis: TupleBasis, i: int) -> Matrix:
    """Elementary braiding at positions (i, i+1), 1 <= i <= length-1."""
    n = basis.length
    if not 1 <= i <= n - 1:
        raise BraidingError(f"sigma index {i} out of range for length {n}")
    space = basis.space
    field = space.field
    rows = []
    for w in basis.words:
        row = {}
        head, a, b, tail = w[: i - 1], w[i - 1], w[i], w[i + 1 :]
        for (k, l), s in space.pair_action[(a, b)].items():
            row[basis.index[head + (k, l) + tail]] = s
        rows.append(row)
    return Matrix(field, len(basis), len(basis), rows)


def _left_descents(perm: tuple):
    """Values i (1-based) with l(s_i w) < l(w): value i placed after i+1."""
    pos = [0] * len(perm)
    for idx, v in enumerate(perm):
        pos[v] = idx
    return [i for i in range(1, len(perm)) if pos[i - 1] > pos[i]]


def _left_mul(perm: tuple, i: int) -> tuple:
    """s_i * w, swapping the values i-1 and i (0-indexed)."""
    a, b = i - 1, i
    return tuple(b if v == a else a if v == b else v for v in perm)


def braid_lift(basis: TupleBasis, perm: tuple, _memo=None) -> Matrix:
    """Lift of a permutation to the braid monoid action on words.

    Uses the lexicographically smallest reduced word; by the Matsumoto
    property every reduced word yields the same operator.  ``perm`` maps
    position to image, 0-indexed.
    """
    if _memo is None:
        _memo = {}
    cached = _memo.get(perm)
    if cached is not None:
        return cached
    if perm == tuple(range(basis.length)):
        out = Matrix.identity(basis.space.field, len(basis))
    else:
        descents = _left_descents(perm)
        if not descents:
            raise BraidingError(f"{perm} is not a permutation of 0..{basis.length - 1}")
        i = descents[0]
        out = braid_lift(basis, _left_mul(perm, i), _memo).then(sigma(basis, i))
    _memo[perm] = out
    return out


def _block_swap_perm(n: int, m: int) -> tuple:
    # letters of the first block (length n) land after the second block
    return tuple(range(m, n + m)) + tuple(range(m))


def ct_component(space: BraidedSpace, n: int, m: int, cap: int | None = None) -> Matrix:
    """Braiding of tensor blocks V^(x)n (x) V^(x)m -> V^(x)m (x) V^(x)n."""
    basis = TupleBasis(space, n + m, cap=cap)
    return braid_lift(basis, _block_swap_perm(n, m))


def _shuffles(p: int, q: int):
    """(p, q)-shuffles of S_{p+q}: inverses are increasing on both blocks."""
    n = p + q
    for left_positions in itertools.combinations(range(n), p):
        perm = [0] * n
        right = [i for i in range(n) if i not in left_positions]
        for v, pos in enumerate(left_positions):
            perm[pos] = v
        for v, pos in enumerate(right, start=p):
            perm[pos] = v
        yield tuple(perm)


def delta_component(space: BraidedSpace, p: int, q: int, cap: int | None = None) -> Matrix:
    """Component Delta_{p,q}: V^(x)(p+q) -> V^(x)p (x) V^(x)q of the
    shuffle comultiplication, as an operator on the word basis.

    Equals the sum of the shuffle lifts; pinned against the recursive
    algebra-map construction by tests (including a non-symmetric braiding).
    """
    basis = TupleBasis(space, p + q, cap=cap)
    memo: dict = {}
    total = Matrix(space.field, len(basis), len(basis))
    for w in _shuffles(p, q):
        total = total.add(braid_lift(basis, w, memo))
    return total


def quantum_symmetrizer(space: BraidedSpace, n: int, cap: int | None = None) -> Matrix:
    """Sum of the lifts of all permutations of S_n acting on V^(x)n.

    Walks S_n breadth-first by length so each lift is one elementary
    braiding applied to an already-known prefix.
    """
    if n > MAX_SYMMETRIC_DEGREE:
        raise BraidingError(
            f"symmetrizer degree {n} exceeds the factorial budget {MAX_SYMMETRIC_DEGREE}"
        )
    basis = TupleBasis(space, n, cap=cap)
    identity = tuple(range(n))
    lifts = {identity: Matrix.identity(space.field, len(basis))}
    sigmas = {i: sigma(basis, i) for i in range(1, n)}
    total = lifts[identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for w in frontier:
            lw = lifts[w]
            descents = set(_left_descents(w))
            for i in range(1, n):
                if i in descents:
                    continue
                w2 = _left_mul(w, i)
                if w2 in lifts:
                    continue
                lifts[w2] = lw.then(sigmas[i])
                total = total.add(lifts[w2])
                nxt.append(w2)
        frontier = nxt
    return total


def _pair_matrix(field: Field, dim: int, pair_action, length: int, i: int) -> Matrix:
    """Elementary braiding on raw pair-action data, without the
    construction-time checks of BraidedSpace."""
    words = list(itertools.product(range(dim), repeat=length))
    index = {w: k for k, w in enumerate(words)}
    rows = []
    for w in words:
        row = {}
        for (k, l), s in pair_action.get((w[i - 1], w[i]), {}).items():
            if s:
                row[index[w[: i - 1] + (k, l) + w[i + 1 :]]] = s
        rows.append(row)
    return Matrix(field, len(words), len(words), rows)


def qybe_witness(field: Field, dim: int, pair_action):
    """First basis triple where c1 c2 c1 != c2 c1 c2, or None if braided."""
    c1 = _pair_matrix(field, dim, pair_action, 3, 1)
    c2 = _pair_matrix(field, dim, pair_action, 3, 2)
    lhs = c1.then(c2).then(c1)
    rhs = c2.then(c1).then(c2)
    words = list(itertools.product(range(dim), repeat=3))
    for k, w in enumerate(words):
        if lhs.rows[k] != rhs.rows[k]:
            return w
    return None


def check_qybe(space: BraidedSpace) -> bool:
    """Quantum Yang-Baxter equation on V^(x)3: c1 c2 c1 = c2 c1 c2."""
    basis = TupleBasis(space, 3)
    c1 = sigma(basis, 1)
    c2 = sigma(basis, 2)
    return c1.then(c2).then(c1) == c2.then(c1).then(c2)


def delta_recursive(space: BraidedSpace, word: tuple) -> dict:
    """Oracle: Delta(word) computed as an algebra map into T (x)_c T.

    Returns {(u, v): scalar} over pairs of words.  Multiplication in the
    braided tensor square swaps middle blocks with ``ct_component``.
    """
    field = space.field
    one = field.one()
    out = {((), ()): one}
    swaps: dict = {}
    for letter in word:
        gen = {((letter,), ()): one, ((), (letter,)): one}
        nxt: dict = {}
        for (u1, v1), s1 in out.items():
            for (u2, v2), s2 in gen.items():
                coef = field.mul(s1, s2)
                r, t = len(v1), len(u2)
                if r == 0 or t == 0:
                    key = (u1 + u2, v1 + v2)
                    cur = nxt.get(key)
                    new = coef if cur is None else field.add(cur, coef)
                    if new:
                        nxt[key] = new
                    elif cur is not None:
                        del nxt[key]
                    continue
                key_rt = (r, t)
                if key_rt not in swaps:
                    b = TupleBasis(space, r + t)
                    swaps[key_rt] = (b, braid_lift(b, _block_swap_perm(r, t)))
                basis, swap = swaps[key_rt]
                img = swap.apply({basis.index[v1 + u2]: one})
                for col, s in img.items():
                    w = basis.words[col]
                    key = (u1 + w[:t], w[t:] + v2)
                    add = field.mul(coef, s)
                    cur = nxt.get(key)
                    new = add if cur is None else field.add(cur, add)
                    if new:
                        nxt[key] = new
                    elif cur is not None:
                        del nxt[key]
        out = nxt
    return out
