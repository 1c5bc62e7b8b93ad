"""Polynomial arithmetic over tower fields and the conjugate-reciprocal star.

A Poly is a little-endian tuple of FieldElem coefficients, all at one level
(level 2 for the characteristic polynomials this package cares about, bigger
even levels inside the eigenline counter).  Factorization is the classical
chain: squarefree decomposition (with p-th root extraction, we are in
characteristic p), distinct-degree splitting, then equal-degree splitting by
Cantor-Zassenhaus with an explicitly threaded seed so reports reproduce.

The star operation sends P to conj(P(0))^{-1} T^deg conj(P)(1/T); its roots
are the conjugate-inverses r^{-q} of the roots of P.  Factoring the
characteristic polynomial of a unitary matrix therefore yields an involution
on the irreducible factors, which factor() computes and validates.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import gf
from .errors import InputError, InvariantError
from .gf import FieldElem, encode_int


@dataclass(frozen=True, slots=True)
class Poly:
    p: int
    level: int
    coeffs: tuple[FieldElem, ...]  # little-endian, no trailing zeros

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1].is_zero:
            raise InputError("leading coefficient must be nonzero")

    # ----- constructors -------------------------------------------------
    @staticmethod
    def from_elems(p, level, coeffs) -> "Poly":
        c = list(coeffs)
        while c and c[-1].is_zero:
            c.pop()
        return Poly(p, level, tuple(c))

    @staticmethod
    def from_ints(p, level, rows) -> "Poly":
        return Poly.from_elems(p, level, [gf.elem(p, level, r) for r in rows])

    @staticmethod
    def zero(p, level) -> "Poly":
        return Poly(p, level, ())

    @staticmethod
    def one(p, level) -> "Poly":
        return Poly(p, level, (gf.one(p, level),))

    @staticmethod
    def x(p, level) -> "Poly":
        return Poly(p, level, (gf.zero(p, level), gf.one(p, level)))

    @staticmethod
    def x_minus(c: FieldElem) -> "Poly":
        return Poly(c.p, c.level, (-c, gf.one(c.p, c.level)))

    @staticmethod
    def constant(c: FieldElem) -> "Poly":
        return Poly.from_elems(c.p, c.level, (c,))

    # ----- basic queries ------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and encode_int(self.coeffs[-1]) == 1

    @property
    def leading(self) -> FieldElem:
        return self.coeffs[-1]

    def coeff(self, i: int) -> FieldElem:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else gf.zero(self.p, self.level)

    def _check(self, other: "Poly"):
        if self.p != other.p or self.level != other.level:
            raise InputError("polynomials over different fields")

    # ----- arithmetic ---------------------------------------------------
    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.from_elems(self.p, self.level, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.from_elems(self.p, self.level, [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self):
        return Poly(self.p, self.level, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.p, self.level)
        out = [gf.zero(self.p, self.level)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly.from_elems(self.p, self.level, out)

    def scale(self, c: FieldElem) -> "Poly":
        return Poly.from_elems(self.p, self.level, [a * c for a in self.coeffs])

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        q = [gf.zero(self.p, self.level)] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv = other.leading.inverse()
        d = other.degree
        while len(rem) > d:
            while rem and rem[-1].is_zero:
                rem.pop()
            if len(rem) <= d:
                break
            k = len(rem) - 1 - d
            c = rem[-1] * inv
            q[k] = c
            for j, bj in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * bj
        return (Poly.from_elems(self.p, self.level, q), Poly.from_elems(self.p, self.level, rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero or self.is_monic:
            return self
        return self.scale(self.leading.inverse())

    def powmod(self, e: int, modulus: "Poly") -> "Poly":
        result = Poly.one(self.p, self.level)
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def derivative(self) -> "Poly":
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(self.coeffs[i] * gf.from_base(self.p, self.level, i))
        return Poly.from_elems(self.p, self.level, out)

    def __call__(self, x: FieldElem) -> FieldElem:
        acc = gf.zero(x.p, x.level)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def lift(self, target_level: int) -> "Poly":
        """Map every coefficient through the deterministic embedding."""
        return Poly.from_elems(self.p, target_level, [gf.embed(c, target_level) for c in self.coeffs])

    def to_json(self):
        return [list(c.coeffs) for c in self.coeffs]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero or b.is_zero:
        return Poly.zero(a.p, a.level)
    return ((a * b) // poly_gcd(a, b)).monic()


def poly_key(f: Poly):
    """Canonical sort key: (degree, integer encodings of the coefficients)."""
    return (f.degree, tuple(encode_int(c) for c in f.coeffs))


# ---------------------------------------------------------------------------
# the conjugate-reciprocal involution


def star(f: Poly) -> Poly:
    """Conjugate-reciprocal of a level-2 polynomial with nonzero constant term.

    Roots of star(f) are exactly the r^{-q} for roots r of f; the output is
    monic, and star is an involution on monic inputs.
    """
    if f.level != 2:
        raise InputError("star is defined over the quadratic extension")
    if f.is_zero or f.coeffs[0].is_zero:
        raise InputError("star requires a nonzero constant term")
    rev = [gf.conj(c) for c in reversed(f.coeffs)]
    return Poly.from_elems(f.p, f.level, rev).monic()


# ---------------------------------------------------------------------------
# factorization


def _pth_root(f: Poly) -> Poly:
    # f(T) = u(T^p); coefficient p-th roots are c^(p^(level-1))
    p = f.p
    out = []
    for i, c in enumerate(f.coeffs):
        if i % p == 0:
            out.append(c ** (p ** (f.level - 1)))
        elif not c.is_zero:
            raise AssertionError("polynomial is not a p-th power")
    return Poly.from_elems(f.p, f.level, out)


def _squarefree(f: Poly):
    # monic f -> list of (monic squarefree g, multiplicity), pairwise coprime
    out = []
    fp = f.derivative()
    if fp.is_zero:
        return [(g, m * f.p) for g, m in _squarefree(_pth_root(f))]
    c = poly_gcd(f, fp)
    w = (f // c).monic()
    m = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = (w // y).monic()
        if z.degree > 0:
            out.append((z, m))
        w = y
        c = (c // y).monic()
        m += 1
    if c.degree > 0:
        out.extend((g, mm * f.p) for g, mm in _squarefree(_pth_root(c)))
    return out


def _distinct_degree(f: Poly):
    # monic squarefree f -> list of (product of irreducibles of degree d, d)
    out = []
    q_size = f.p**f.level
    x = Poly.x(f.p, f.level)
    h = x % f
    d = 0
    while f.degree > 2 * d:
        d += 1
        h = h.powmod(q_size, f)
        g = poly_gcd(h - x, f)
        if g.degree > 0:
            out.append((g, d))
            f = (f // g).monic()
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _random_poly(p, level, max_deg, rng) -> Poly:
    coeffs = [gf.elem(p, level, [rng.randrange(p) for _ in range(level)]) for _ in range(max_deg + 1)]
    return Poly.from_elems(p, level, coeffs)


def _equal_degree(f: Poly, d: int, rng) -> list[Poly]:
    # Cantor-Zassenhaus split of a product of irreducibles of common degree d
    if f.degree == d:
        return [f.monic()]
    q_size = f.p**f.level
    m = (q_size**d - 1) // 2
    while True:
        r = _random_poly(f.p, f.level, f.degree - 1, rng)
        if r.degree < 1:
            continue
        g = poly_gcd(r, f)
        if 0 < g.degree < f.degree:
            break
        s = r.powmod(m, f) - Poly.one(f.p, f.level)
        g = poly_gcd(s, f)
        if 0 < g.degree < f.degree:
            break
    return _equal_degree(g, d, rng) + _equal_degree((f // g).monic(), d, rng)


def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    q_size = f.p**f.level
    x = Poly.x(f.p, f.level)
    h = x % f
    for _ in range(f.degree // 2):
        h = h.powmod(q_size, f)
        if poly_gcd(h - x, f).degree > 0:
            return False
    return True


def _plain_factor_certified(f: Poly, seed) -> list[tuple[Poly, int, int]]:
    if not f.is_monic or f.degree < 1:
        raise InputError("factorization requires a monic polynomial of positive degree")
    rng = random.Random(f"factor:{f.p}:{f.level}:{seed}")
    found: dict[tuple, tuple[Poly, int, int]] = {}
    for g, mult in _squarefree(f):
        for h, d in _distinct_degree(g):
            for irr in _equal_degree(h, d, rng):
                key = poly_key(irr)
                if key in found:
                    prev, m0, _ = found[key]
                    found[key] = (prev, m0 + mult, d)
                else:
                    found[key] = (irr, mult, d)
    return [(irr, m, d) for _, (irr, m, d) in sorted(found.items())]


def plain_factor(f: Poly, seed) -> list[tuple[Poly, int]]:
    """Complete factorization into monic irreducibles, canonically sorted.

    No star-pairing constraints: this is the route for polynomials that do
    not come from unitary elements."""
    return [(g, m) for g, m, _ in _plain_factor_certified(f, seed)]


@dataclass(frozen=True)
class FactoredPoly:
    """Factorization P = prod P_i^{a_i} plus the star involution on indices.

    pairing[i] = j means star(P_i) = P_j; split_degrees retains the degree at
    which the distinct-degree stage isolated each factor (its irreducibility
    certificate).
    """

    factors: tuple[tuple[Poly, int], ...]
    pairing: tuple[int, ...]
    split_degrees: tuple[int, ...]

    def __len__(self):
        return len(self.factors)

    def self_paired(self) -> list[int]:
        return [i for i, j in enumerate(self.pairing) if i == j]

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.pairing) if i < j]

    def product(self) -> Poly:
        p, level = self.factors[0][0].p, self.factors[0][0].level
        out = Poly.one(p, level)
        for f, a in self.factors:
            for _ in range(a):
                out = out * f
        return out

    def to_json(self):
        return {
            "factors": [{"poly": f.to_json(), "exponent": a} for f, a in self.factors],
            "pairing": list(self.pairing),
            "split_degrees": list(self.split_degrees),
        }


def factor(f: Poly, seed) -> FactoredPoly:
    """Factor a characteristic polynomial of a unitary element.

    On top of plain factorization this computes the star pairing and enforces
    the constraints that make it one: every factor has a star partner with the
    same exponent, constant terms are nonzero, and self-paired factors have
    odd degree.
    """
    flat = _plain_factor_certified(f, seed)
    polys = [g for g, _, _ in flat]
    mults = [m for _, m, _ in flat]
    keys = {poly_key(g): i for i, g in enumerate(polys)}
    pairing = []
    for i, g in enumerate(polys):
        if g.coeffs[0].is_zero:
            raise InvariantError("factor has zero constant term; the element is not invertible")
        j = keys.get(poly_key(star(g)))
        if j is None:
            raise InvariantError("star pairing inconsistent: factor set is not closed under star")
        pairing.append(j)
    for i, j in enumerate(pairing):
        if mults[i] != mults[j]:
            raise InvariantError("star pairing inconsistent: exponents differ across the involution")
        if i == j and polys[i].degree % 2 == 0:
            raise InvariantError("self-paired factor of even degree")
    fact = FactoredPoly(
        factors=tuple((g, m) for g, m in zip(polys, mults)),
        pairing=tuple(pairing),
        split_degrees=tuple(d for _, _, d in flat),
    )
    if fact.product() != f.monic():
        raise AssertionError("factorization does not reconstruct the input")
    return fact


def _factor_pairs(fact) -> list[tuple[Poly, int]]:
    # accepts a FactoredPoly or a plain sequence of (poly, multiplicity)
    return list(fact.factors) if isinstance(fact, FactoredPoly) else list(fact)


def divisor_exponents(fact) -> list[tuple[int, ...]]:
    """All exponent vectors (m_1..m_l), 0 <= m_i <= a_i, in lexicographic order."""
    ranges = [range(a + 1) for _, a in _factor_pairs(fact)]
    return list(itertools.product(*ranges))


def divisor_poly(fact, exponents) -> Poly:
    pairs = _factor_pairs(fact)
    p, level = pairs[0][0].p, pairs[0][0].level
    out = Poly.one(p, level)
    for (g, _), m in zip(pairs, exponents):
        for _ in range(m):
            out = out * g
    return out
