"""Independent fixed-point counter via explicit eigenline enumeration.

For a regular unitary s of odd dimension t with irreducible characteristic
polynomial, the fixed lines in the ambient variety are the t eigenlines of s
over F_{q^{2t}}.  This module finds them explicitly: one root of the
characteristic polynomial in the big field by seeded equal-degree splitting,
its q^2-Frobenius orbit as the full eigenvalue set, a canonical eigenvector
per eigenvalue, then the isotropy chain

    h(l, l) = h(l, tau l) = ... = h(l, tau^{d-1} l) = 0,  h(l, tau^d l) != 0

with d = (t-1)/2, evaluated through the sesquilinear extension of the form
(conjugation = q-power on the tower, tau = coordinatewise q^2-power).  The
chain convention corresponds to one fixed Coxeter element; other choices
differ by a power of Frobenius and are out of scope.

Nothing here consults the closed-form counting formulas, so this is a true
second route for the per-stratum counts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import gf
from .errors import CrossCheckError, InputError
from .hermitian import HermitianSpace
from .linalg import Matrix, Subspace, charpoly, kernel, kernel_of_poly, minpoly, rref
from .poly import Poly, is_irreducible, plain_factor, poly_gcd


@dataclass(frozen=True)
class EigenlineRecord:
    eigenvalue: gf.FieldElem  # lives at level 2t
    vector: tuple[gf.FieldElem, ...]  # canonical representative over the tower
    chain_values: tuple[gf.FieldElem, ...]  # h(l, tau^i l) for i = 0..d

    def to_json(self):
        return {
            "eigenvalue": list(self.eigenvalue.coeffs),
            "vector": [list(c.coeffs) for c in self.vector],
            "chain_values": [list(c.coeffs) for c in self.chain_values],
        }


def _roots_in_field(f: Poly, rng) -> list[gf.FieldElem]:
    """All roots of f in its own coefficient field, by equal-degree splitting."""
    p, level = f.p, f.level
    q_size = p**level
    x = Poly.x(p, level)
    linear_part = poly_gcd(x.powmod(q_size, f) - (x % f), f)
    roots = []

    def split(g: Poly):
        if g.degree == 0:
            return
        if g.degree == 1:
            roots.append(-g.coeffs[0] * g.coeffs[1].inverse())
            return
        while True:
            shift = gf.elem(p, level, [rng.randrange(p) for _ in range(level)])
            cand = (Poly.x(p, level) + Poly.constant(shift)).powmod((q_size - 1) // 2, g) - Poly.one(p, level)
            h = poly_gcd(cand, g)
            if 0 < h.degree < g.degree:
                split(h)
                split((g // h).monic())
                return

    split(linear_part.monic())
    return sorted(roots, key=gf.encode_int)


def _sesquilinear(gram_big: Matrix, x, y) -> gf.FieldElem:
    gy = gram_big.apply([gf.frob_q(c) for c in y])
    acc = gf.zero(gram_big.p, gram_big.level)
    for a, b in zip(x, gy):
        acc = acc + a * b
    return acc


def dl_fixed_points(space: HermitianSpace, s: Matrix, seed=0) -> list[EigenlineRecord]:
    """Enumerate the eigenlines of s over F_{q^{2t}} satisfying the chain.

    Requires odd dimension and irreducible characteristic polynomial; every
    returned record carries its chain values, and for valid input all t
    eigenlines qualify.
    """
    t = space.dim
    if t % 2 == 0:
        raise InputError("the eigenline model needs odd dimension")
    if s.n != t:
        raise InputError("dimension mismatch")
    cp = charpoly(s)
    if not is_irreducible(cp):
        raise InputError("characteristic polynomial is reducible; the fixed count is 0 by the split criterion")
    p = space.p
    big = 2 * t
    gf.make_tower(p, big)
    rng = random.Random(f"dl:{p}:{t}:{seed}")
    f_big = cp.lift(big)
    eigenvalues = _roots_in_field(f_big, rng)
    if len(eigenvalues) != t:
        raise CrossCheckError(f"expected {t} eigenvalues in the tower, found {len(eigenvalues)}")
    s_big = Matrix.from_rows(p, big, [[gf.embed(a, big) for a in row] for row in s.rows])
    gram_big = Matrix.from_rows(p, big, [[gf.embed(a, big) for a in row] for row in space.gram.rows])
    ident = Matrix.identity(p, big, t)
    d = (t - 1) // 2
    records = []
    for mu in eigenvalues:
        eig = kernel(s_big - ident.scale(mu))
        if eig.dim != 1:
            raise CrossCheckError("eigenspace of dimension != 1 for an irreducible charpoly")
        v = eig.rows[0]
        taus = [v]
        for _ in range(d):
            taus.append(tuple(gf.tau_frob(c) for c in taus[-1]))
        chain = tuple(_sesquilinear(gram_big, v, tv) for tv in taus)
        if all(c.is_zero for c in chain[:d]) and not chain[d].is_zero:
            records.append(EigenlineRecord(mu, v, chain))
    return records


def _line_key(vector) -> tuple:
    # canonical projective representative: RREF of the single row
    rows, _ = rref([list(vector)])
    return tuple(gf.encode_int(c) for c in rows[0])


def galois_orbit_check(records: list[EigenlineRecord]) -> bool:
    """True iff the q^2-Frobenius permutes the recorded lines in one cycle."""
    if not records:
        raise InputError("no records to check")
    keys = {_line_key(rec.vector): i for i, rec in enumerate(records)}
    if len(keys) != len(records):
        return False  # duplicated lines cannot form a permutation orbit
    perm = []
    for rec in records:
        image = tuple(gf.tau_frob(c) for c in rec.vector)
        j = keys.get(_line_key(image))
        if j is None:
            return False
        perm.append(j)
    seen = 1
    cur = perm[0]
    while cur != 0:
        cur = perm[cur]
        seen += 1
        if seen > len(records):
            return False
    return seen == len(records)


@dataclass(frozen=True)
class ProbeDiagnosis:
    status: str  # not_semisimple | not_regular | regular_elliptic | regular_split
    fixed_set: str  # empty | infinite | finite
    detail: str
    line_fixed: bool | None = None

    def to_json(self):
        return {
            "status": self.status,
            "fixed_set": self.fixed_set,
            "detail": self.detail,
            "line_fixed": self.line_fixed,
        }


def semisimplicity_probe(space: HermitianSpace, s: Matrix, line: Subspace | None = None, seed=0) -> ProbeDiagnosis:
    """Classify s by the finiteness dichotomy of its fixed set.

    Non-semisimple elements have empty fixed sets, semisimple non-regular
    ones have infinite fixed sets (a witness eigenspace of excess dimension
    is exhibited), and regular elements split by irreducibility of the
    characteristic polynomial.
    """
    cp = charpoly(s)
    mp = minpoly(s)
    line_fixed = None
    if line is not None:
        image = [s.apply(r) for r in line.rows]
        from .linalg import span

        line_fixed = span(line.ambient, image) == line
    if poly_gcd(mp, mp.derivative()).degree > 0:
        rep = next(f for f, a in plain_factor(mp, seed) if a > 1)
        return ProbeDiagnosis(
            "not_semisimple", "empty",
            f"minimal polynomial has the repeated factor of degree {rep.degree}; "
            "a non-semisimple element fixes nothing",
            line_fixed,
        )
    if mp != cp:
        witness = next(
            (f, kernel_of_poly(s, f).dim)
            for f, _ in plain_factor(mp, seed)
            if kernel_of_poly(s, f).dim > f.degree
        )
        return ProbeDiagnosis(
            "not_regular", "infinite",
            f"eigenspace of dimension {witness[1]} > {witness[0].degree}; "
            "a non-regular semisimple element fixes a positive-dimensional set",
            line_fixed,
        )
    if is_irreducible(cp):
        return ProbeDiagnosis(
            "regular_elliptic", "finite",
            f"irreducible characteristic polynomial; exactly {space.dim} fixed lines",
            line_fixed,
        )
    return ProbeDiagnosis(
        "regular_split", "empty",
        "regular with reducible characteristic polynomial; no eigenline survives the chain",
        line_fixed,
    )
