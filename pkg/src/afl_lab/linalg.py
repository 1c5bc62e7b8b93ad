"""Exact linear algebra over the tower fields.

Matrices act on column vectors; vectors are plain tuples of FieldElem.
Subspaces are stored as reduced-row-echelon bases, which are unique per
subspace, so subspace equality is representative equality and nothing ever
hashes an algebraic value.

The characteristic polynomial goes through a deterministic Hessenberg
reduction followed by the classical recurrence on leading principal minors;
regularity (cyclicity) is decided by a seeded Krylov-rank probe with an exact
minimal-polynomial fallback, so there are no false negatives.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import gf
from .errors import InputError
from .poly import Poly, divisor_exponents, divisor_poly, poly_lcm


@dataclass(frozen=True, slots=True)
class Matrix:
    p: int
    level: int
    rows: tuple[tuple[gf.FieldElem, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != len(self.rows[0]) for r in self.rows):
            raise InputError("ragged matrix")

    # ----- constructors -------------------------------------------------
    @staticmethod
    def from_rows(p, level, rows) -> "Matrix":
        return Matrix(p, level, tuple(tuple(r) for r in rows))

    @staticmethod
    def from_ints(p, level, rows) -> "Matrix":
        return Matrix.from_rows(p, level, [[gf.elem(p, level, c) for c in r] for r in rows])

    @staticmethod
    def identity(p, level, n) -> "Matrix":
        z, o = gf.zero(p, level), gf.one(p, level)
        return Matrix.from_rows(p, level, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def companion(f: Poly) -> "Matrix":
        """Companion matrix of a monic polynomial (acting on column vectors)."""
        if not f.is_monic or f.degree < 1:
            raise InputError("companion matrix requires a monic polynomial of positive degree")
        n = f.degree
        z = gf.zero(f.p, f.level)
        o = gf.one(f.p, f.level)
        rows = [[z] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i + 1][i] = o
        for i in range(n):
            rows[i][n - 1] = -f.coeff(i)
        return Matrix.from_rows(f.p, f.level, rows)

    @staticmethod
    def block_diag(blocks: list["Matrix"]) -> "Matrix":
        p, level = blocks[0].p, blocks[0].level
        n = sum(b.n for b in blocks)
        z = gf.zero(p, level)
        rows = [[z] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.n):
                for j in range(b.n):
                    rows[off + i][off + j] = b.rows[i][j]
            off += b.n
        return Matrix.from_rows(p, level, rows)

    # ----- shape and access ----------------------------------------------
    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def _check(self, other: "Matrix"):
        if self.p != other.p or self.level != other.level:
            raise InputError("matrices over different fields")

    # ----- arithmetic -----------------------------------------------------
    def __add__(self, other):
        self._check(other)
        return Matrix.from_rows(
            self.p, self.level, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        self._check(other)
        return Matrix.from_rows(
            self.p, self.level, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.n:
            raise InputError("shape mismatch")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            out.append([_dot(r, c) for c in cols])
        return Matrix.from_rows(self.p, self.level, out)

    def scale(self, c: gf.FieldElem) -> "Matrix":
        return Matrix.from_rows(self.p, self.level, [[a * c for a in r] for r in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(self.p, self.level, list(zip(*self.rows)))

    def conj(self) -> "Matrix":
        """Entrywise q-power conjugation."""
        return Matrix.from_rows(self.p, self.level, [[gf.frob_q(a) for a in r] for r in self.rows])

    def apply(self, v) -> tuple:
        if len(v) != self.ncols:
            raise InputError("vector length mismatch")
        return tuple(_dot(r, v) for r in self.rows)

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for r in self.rows for a in r)

    def det(self) -> gf.FieldElem:
        n = self.n
        if n != self.ncols:
            raise InputError("determinant of a non-square matrix")
        rows = [list(r) for r in self.rows]
        sign = 1
        acc = gf.one(self.p, self.level)
        for col in range(n):
            piv = next((r for r in range(col, n) if not rows[r][col].is_zero), None)
            if piv is None:
                return gf.zero(self.p, self.level)
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                sign = -sign
            acc = acc * rows[col][col]
            inv = rows[col][col].inverse()
            for r in range(col + 1, n):
                if rows[r][col].is_zero:
                    continue
                f = rows[r][col] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
        if sign < 0:
            acc = -acc
        return acc

    def inverse(self) -> "Matrix":
        n = self.n
        aug = [list(r) + list(Matrix.identity(self.p, self.level, n).rows[i]) for i, r in enumerate(self.rows)]
        red, pivots = rref(aug)
        if pivots != tuple(range(n)):
            raise InputError("matrix is singular")
        return Matrix.from_rows(self.p, self.level, [r[n:] for r in red])

    def eval_poly(self, f: Poly) -> "Matrix":
        """Horner evaluation f(M)."""
        n = self.n
        acc = Matrix.identity(self.p, self.level, n).scale(gf.zero(self.p, self.level))
        ident = Matrix.identity(self.p, self.level, n)
        for c in reversed(f.coeffs):
            acc = acc @ self + ident.scale(c)
        return acc

    def to_json(self):
        return [[list(a.coeffs) for a in r] for r in self.rows]


def _dot(r, v):
    it = iter(zip(r, v))
    a, b = next(it)
    acc = a * b
    for a, b in it:
        acc = acc + a * b
    return acc


# ---------------------------------------------------------------------------
# echelon forms, kernels, subspaces


def rref(rows) -> tuple[tuple, tuple[int, ...]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return (), ()
    ncols = len(mat[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if not mat[i][col].is_zero), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [a * inv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][col].is_zero:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


@dataclass(frozen=True)
class Subspace:
    """Row span in canonical reduced-row-echelon form (unique per subspace)."""

    ambient: int
    rows: tuple[tuple[gf.FieldElem, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v) -> bool:
        w = list(v)
        for row in self.rows:
            piv = next(i for i, a in enumerate(row) if not a.is_zero)
            if not w[piv].is_zero:
                f = w[piv]
                w = [a - f * b for a, b in zip(w, row)]
        return all(a.is_zero for a in w)

    def is_subset(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)


def span(ambient: int, vectors) -> Subspace:
    rows, _ = rref(list(vectors))
    return Subspace(ambient, rows)


def kernel(m: Matrix) -> Subspace:
    """Null space {v : M v = 0} as a canonical subspace."""
    red, pivots = rref(m.rows)
    n = m.ncols
    free = [j for j in range(n) if j not in pivots]
    basis = []
    z, o = gf.zero(m.p, m.level), gf.one(m.p, m.level)
    for j in free:
        v = [z] * n
        v[j] = o
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][j]
        basis.append(v)
    return span(n, basis)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return span(a.ambient, list(a.rows) + list(b.rows))


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    if a.dim == 0 or b.dim == 0:
        return Subspace(a.ambient, ())
    # Zassenhaus: rows of [A|A] and [B|0]; echelon rows with zero left half
    # carry intersection vectors in the right half.
    p = a.rows[0][0].p
    level = a.rows[0][0].level
    z = gf.zero(p, level)
    n = a.ambient
    stacked = [list(r) + list(r) for r in a.rows] + [list(r) + [z] * n for r in b.rows]
    red, _ = rref(stacked)
    vecs = [row[n:] for row in red if all(c.is_zero for c in row[:n])]
    return span(n, vecs)


def transform_subspace(sub: Subspace, fn) -> Subspace:
    """Image of a subspace under a linear (or conjugate-linear) vector map."""
    return span(sub.ambient, [fn(r) for r in sub.rows])


# ---------------------------------------------------------------------------
# characteristic and minimal polynomials


def charpoly(m: Matrix) -> Poly:
    """Monic characteristic polynomial via Hessenberg reduction."""
    n = m.n
    if n != m.ncols:
        raise InputError("characteristic polynomial of a non-square matrix")
    p, level = m.p, m.level
    h = [list(r) for r in m.rows]
    for j in range(n - 2):
        piv = next((r for r in range(j + 1, n) if not h[r][j].is_zero), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[j + 1], h[piv] = h[piv], h[j + 1]
            for row in h:
                row[j + 1], row[piv] = row[piv], row[j + 1]
        inv = h[j + 1][j].inverse()
        for r in range(j + 2, n):
            if h[r][j].is_zero:
                continue
            f = h[r][j] * inv
            h[r] = [a - f * b for a, b in zip(h[r], h[j + 1])]
            for k in range(n):
                h[k][j + 1] = h[k][j + 1] + f * h[k][r]
    # p_{k+1} = (T - h[k][k]) p_k - sum_a h[a][k] (prod_{b=a..k-1} h[b+1][b]) p_a
    chain = [Poly.one(p, level)]
    for k in range(n):
        t_shift = Poly.x_minus(h[k][k])
        cur = t_shift * chain[k]
        prod = gf.one(p, level)
        for a in range(k - 1, -1, -1):
            prod = prod * h[a + 1][a]
            if not h[a][k].is_zero:
                cur = cur - chain[a].scale(h[a][k] * prod)
        chain.append(cur)
    return chain[n]


def vector_annihilator(m: Matrix, v) -> Poly:
    """Monic polynomial of least degree with f(M) v = 0."""
    z = gf.zero(m.p, m.level)
    pivots: list[tuple[int, list, list]] = []  # (pivot col, vector, combo over M^i v)
    cur = list(v)
    j = 0
    while True:
        w = list(cur)
        c = [z] * j + [gf.one(m.p, m.level)]
        for piv, vec, cmb in pivots:
            if not w[piv].is_zero:
                f = w[piv]
                w = [a - f * b for a, b in zip(w, vec)]
                for i, b in enumerate(cmb):
                    c[i] = c[i] - f * b
        if all(a.is_zero for a in w):
            return Poly.from_elems(m.p, m.level, c)
        piv = next(i for i, a in enumerate(w) if not a.is_zero)
        inv = w[piv].inverse()
        w = [a * inv for a in w]
        c = [a * inv for a in c]
        pivots.append((piv, w, c))
        cur = list(m.apply(cur))
        j += 1


def minpoly(m: Matrix) -> Poly:
    n = m.n
    acc = Poly.one(m.p, m.level)
    ident = Matrix.identity(m.p, m.level, n)
    for i in range(n):
        acc = poly_lcm(acc, vector_annihilator(m, ident.rows[i]))
        if acc.degree == n:
            break
    return acc


def krylov_rank(m: Matrix, v) -> int:
    rows = []
    cur = tuple(v)
    for _ in range(m.n):
        rows.append(cur)
        cur = m.apply(cur)
    red, _ = rref(rows)
    return len(red)


def is_regular(m: Matrix, seed=0) -> bool:
    """True iff the minimal polynomial equals the characteristic polynomial.

    A seeded random vector of full Krylov rank certifies regularity at once;
    otherwise the exact minimal polynomial decides, so a False is never wrong.
    """
    n = m.n
    rng = random.Random(f"regular:{m.p}:{m.level}:{seed}")
    v = [gf.elem(m.p, m.level, [rng.randrange(m.p) for _ in range(m.level)]) for _ in range(n)]
    if krylov_rank(m, v) == n:
        return True
    return minpoly(m).degree == n


def kernel_of_poly(m: Matrix, f: Poly) -> Subspace:
    """Null space of f(M); for regular M and f | charpoly the dimension is deg f."""
    return kernel(m.eval_poly(f))


def invariant_subspaces(m: Matrix, fact) -> dict[tuple[int, ...], Subspace]:
    """The full lattice of M-invariant subspaces of a regular M.

    fact is the factorization of charpoly(M): a FactoredPoly or a plain
    sequence of (irreducible, multiplicity) pairs.  Keys are divisor exponent
    vectors; the map is a lattice isomorphism from monic divisors of the
    characteristic polynomial ordered by divisibility.
    """
    if not is_regular(m):
        raise InputError("invariant subspace enumeration requires a regular matrix")
    return {vec: kernel_of_poly(m, divisor_poly(fact, vec)) for vec in divisor_exponents(fact)}


# ---------------------------------------------------------------------------
# brute-force oracle


def all_subspaces(p, level, n):
    """Yield every subspace of F_{p^level}^n once, via canonical RREF bases."""
    z, o = gf.zero(p, level), gf.one(p, level)
    elems = [gf.elem_from_encoding(p, level, k) for k in range(p**level)]
    yield Subspace(n, ())
    for k in range(1, n + 1):
        for pivs in itertools.combinations(range(n), k):
            free_pos = [
                (i, j) for i in range(k) for j in range(n) if j > pivs[i] and j not in pivs
            ]
            for assign in itertools.product(elems, repeat=len(free_pos)):
                rows = [[z] * n for _ in range(k)]
                for i in range(k):
                    rows[i][pivs[i]] = o
                for (i, j), val in zip(free_pos, assign):
                    rows[i][j] = val
                yield Subspace(n, tuple(tuple(r) for r in rows))


def naive_subspace_scan(m: Matrix) -> list[Subspace]:
    """Every M-invariant subspace, by enumerating all subspaces of the ambient.

    Guarded to ambient dimension <= 4 and p <= 3; this is the independent
    oracle for the divisor correspondence, so it must not share code with it.
    """
    if m.n > 4 or m.p > 3:
        raise InputError("naive scan guard: requires dim <= 4 and p <= 3")
    out = []
    for sub in all_subspaces(m.p, m.level, m.n):
        if all(sub.contains(m.apply(r)) for r in sub.rows):
            out.append(sub)
    return out
