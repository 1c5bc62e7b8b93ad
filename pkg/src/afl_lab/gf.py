"""Exact arithmetic in F_p and the even extension tower F_{p^2} < F_{p^{2t}}.

An element of F_{p^d} is a dense little-endian coefficient vector in the
power basis of a fixed monic irreducible of degree d over F_p.  The defining
polynomial of each degree is the *smallest* monic irreducible, where monic
polynomials are ordered by their integer encoding sum(c_i * p^i) with the
constant term least significant.  This pins every tower, every embedding,
and hence every downstream report to one reproducible choice, with no table
of Conway polynomials to depend on.

Only the levels this project needs exist: level 2 carries the quadratic
extension with its q-power conjugation (q = p), and even levels 2t carry
the fields the eigenline enumeration works in, where tau is the q^2-power
Frobenius.  Defining polynomials are pure cached functions of (p, degree),
so independently built towers with the same p agree on shared levels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError

# ---------------------------------------------------------------------------
# base-field polynomial helpers (little-endian int lists over F_p)


def _trim(v):
    while v and v[-1] == 0:
        v.pop()
    return v


def _padd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], -1, p)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = (r[-1] * inv) % p
        q[k] = c
        for j, bj in enumerate(b):
            r[k + j] = (r[k + j] - c * bj) % p
        _trim(r)
    return _trim(q), r


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pgcdext(a, b, p):
    # returns (g, u, v) with u*a + v*b = g, g monic (or [] if both zero)
    r0, r1 = list(a), list(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    if r0:
        inv = pow(r0[-1], -1, p)
        r0 = [c * inv % p for c in r0]
        s0 = [c * inv % p for c in s0]
        t0 = [c * inv % p for c in t0]
    return r0, s0, t0


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _is_irreducible_int(f, p):
    # f monic; no irreducible factor of degree <= deg(f)/2 iff irreducible
    d = len(f) - 1
    if d < 1:
        return False
    h = [0, 1]
    for _ in range(d // 2):
        h = _ppowmod(h, p, f, p)
        g, _, _ = _pgcdext(_psub(h, [0, 1], p), f, p)
        if len(g) - 1 > 0:
            return False
    return True


@lru_cache(maxsize=None)
def defining_poly(p: int, degree: int) -> tuple[int, ...]:
    """Smallest monic irreducible of the given degree over F_p.

    Polynomials T^d + c_{d-1} T^{d-1} + ... + c_0 are scanned in increasing
    order of the integer encoding sum(c_i * p^i); the first irreducible wins.
    """
    if not is_odd_prime(p):
        raise InputError(f"p must be an odd prime, got {p}")
    if degree < 1:
        raise InputError("degree must be positive")
    for enc in range(p**degree):
        coeffs = []
        e = enc
        for _ in range(degree):
            coeffs.append(e % p)
            e //= p
        coeffs.append(1)
        if _is_irreducible_int(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# field elements


@dataclass(frozen=True, slots=True)
class FieldElem:
    """Element of F_{p^level} in the power basis of defining_poly(p, level)."""

    p: int
    level: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.level:
            raise InputError("coefficient vector length must equal the level")
        if any(c < 0 or c >= self.p for c in self.coeffs):
            raise InputError("coefficients must be residues in [0, p)")

    def _check(self, other: "FieldElem"):
        if self.p != other.p or self.level != other.level:
            raise InputError("elements live in different fields")

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    def __add__(self, other):
        self._check(other)
        p = self.p
        return FieldElem(p, self.level, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        p = self.p
        return FieldElem(p, self.level, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.p
        return FieldElem(p, self.level, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        f = defining_poly(self.p, self.level)
        prod = _pmod(_pmul(list(self.coeffs), list(other.coeffs), self.p), list(f), self.p)
        return _from_list(self.p, self.level, prod)

    def inverse(self) -> "FieldElem":
        """Multiplicative inverse via extended Euclid on the defining polynomial."""
        if self.is_zero:
            raise ZeroDivisionError("zero has no inverse")
        f = list(defining_poly(self.p, self.level))
        g, u, _ = _pgcdext(_trim(list(self.coeffs)), f, self.p)
        if len(g) != 1:
            raise AssertionError("defining polynomial is not irreducible")
        return _from_list(self.p, self.level, _pmod(u, f, self.p))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = one(self.p, self.level)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def _from_list(p, level, coeffs):
    c = list(coeffs[:level]) + [0] * max(0, level - len(coeffs))
    return FieldElem(p, level, tuple(c))


def elem(p: int, level: int, coeffs) -> FieldElem:
    """Build an element from an iterable of integers (reduced mod p, padded)."""
    return _from_list(p, level, [int(c) % p for c in coeffs])


def zero(p: int, level: int) -> FieldElem:
    return FieldElem(p, level, (0,) * level)


def one(p: int, level: int) -> FieldElem:
    return _from_list(p, level, [1])


def gen(p: int, level: int) -> FieldElem:
    """The power-basis generator, i.e. a root of defining_poly(p, level)."""
    return _from_list(p, level, [0, 1])


def from_base(p: int, level: int, c: int) -> FieldElem:
    """Embed the F_p scalar c."""
    return _from_list(p, level, [c % p])


def encode_int(x: FieldElem) -> int:
    """Canonical integer encoding sum(c_i * p^i); total order used everywhere."""
    v = 0
    for c in reversed(x.coeffs):
        v = v * x.p + c
    return v


def elem_from_encoding(p: int, level: int, enc: int) -> FieldElem:
    coeffs = []
    for _ in range(level):
        coeffs.append(enc % p)
        enc //= p
    return FieldElem(p, level, tuple(coeffs))


# ---------------------------------------------------------------------------
# Frobenius maps and embeddings


@lru_cache(maxsize=None)
def _frob_images(p, level):
    # coefficient vectors of (gen^i)^p for i < level; x -> x^p is F_p-linear
    f = list(defining_poly(p, level))
    xp = _ppowmod([0, 1], p, f, p)
    imgs = [[1]]
    cur = [1]
    for _ in range(1, level):
        cur = _pmod(_pmul(cur, xp, p), f, p)
        imgs.append(cur)
    return tuple(tuple(v) for v in imgs)


def frob_q(x: FieldElem) -> FieldElem:
    """The q-power map x -> x^p on any level (the tower-wide conjugation)."""
    imgs = _frob_images(x.p, x.level)
    out = [0] * x.level
    for c, img in zip(x.coeffs, imgs):
        if c:
            for i, v in enumerate(img):
                out[i] = (out[i] + c * v) % x.p
    return FieldElem(x.p, x.level, tuple(out))


def conj(x: FieldElem) -> FieldElem:
    """Galois conjugation x -> x^q of F_{q^2}/F_q; defined at level 2 only."""
    if x.level != 2:
        raise InputError("conj requires a level-2 element")
    return frob_q(x)


def tau_frob(x: FieldElem) -> FieldElem:
    """The q^2-power Frobenius on an even level; identity on embedded F_{q^2}."""
    if x.level % 2:
        raise InputError("tau_frob requires an even level")
    return frob_q(frob_q(x))


def _field_sqrt(d: FieldElem) -> FieldElem | None:
    # Tonelli-Shanks; the non-residue is found by scanning integer encodings,
    # so the result is deterministic.
    p, level = d.p, d.level
    if d.is_zero:
        return d
    q = p**level
    if encode_int(d ** ((q - 1) // 2)) != 1:
        return None
    m = q - 1
    e = 0
    while m % 2 == 0:
        m //= 2
        e += 1
    z = None
    for k in range(1, q):
        cand = elem_from_encoding(p, level, k)
        if encode_int(cand ** ((q - 1) // 2)) != 1:
            z = cand
            break
    c = z**m
    t = d**m
    r = d ** ((m + 1) // 2)
    while encode_int(t) != 1:
        i = 0
        t2 = t
        while encode_int(t2) != 1:
            t2 = t2 * t2
            i += 1
        b = c ** (2 ** (e - i - 1))
        r = r * b
        c = b * b
        t = t * c
        e = i
    return r


@lru_cache(maxsize=None)
def _embed_root(p, target_level):
    # smallest root (integer encoding) of defining_poly(p, 2) inside the target
    b0, b1, _ = defining_poly(p, 2)
    disc = from_base(p, target_level, b1 * b1 - 4 * b0)
    s = _field_sqrt(disc)
    if s is None:
        raise InputError("quadratic does not split; target level must be even")
    inv2 = from_base(p, target_level, 2).inverse()
    nb = from_base(p, target_level, -b1)
    r1 = (nb + s) * inv2
    r2 = (nb - s) * inv2
    return min(r1, r2, key=encode_int)


def embed(x: FieldElem, target_level: int) -> FieldElem:
    """Deterministic field embedding F_{q^2} -> F_{q^{2t}}.

    The level-2 generator goes to the root of its defining polynomial with
    the smallest integer encoding.
    """
    if x.level == target_level:
        return x
    if x.level != 2:
        raise InputError("embed is defined on level-2 elements")
    if target_level % 2:
        raise InputError("target level must be even")
    r = _embed_root(x.p, target_level)
    return from_base(x.p, target_level, x.coeffs[0]) + from_base(x.p, target_level, x.coeffs[1]) * r


def descend(x: FieldElem) -> FieldElem:
    """Inverse of embed on tau-fixed elements of an even level."""
    if x.level == 2:
        return x
    p = x.p
    r = _embed_root(p, x.level)
    j = next((i for i in range(1, x.level) if r.coeffs[i]), None)
    if j is None:
        raise AssertionError("embedded generator lies in the base field")
    b = x.coeffs[j] * pow(r.coeffs[j], -1, p) % p
    a = (x.coeffs[0] - b * r.coeffs[0]) % p
    out = elem(p, 2, [a, b])
    if embed(out, x.level) != x:
        raise InputError("element does not lie in the embedded quadratic field")
    return out


# ---------------------------------------------------------------------------
# towers


@dataclass(frozen=True)
class FieldTower:
    """Descriptor of F_p < F_{p^2} < ... < F_{p^max_level} (even levels)."""

    p: int
    max_level: int

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(range(2, self.max_level + 1, 2))

    def poly(self, level: int) -> tuple[int, ...]:
        if level not in self.levels:
            raise InputError(f"level {level} is not part of this tower")
        return defining_poly(self.p, level)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "levels": list(self.levels),
            "polys": {str(d): list(defining_poly(self.p, d)) for d in self.levels},
        }


def make_tower(p: int, max_level: int) -> FieldTower:
    """Validate (p, max_level) and realize every even level up to max_level."""
    if not is_odd_prime(p):
        raise InputError(f"p must be an odd prime, got {p}")
    if max_level < 2 or max_level % 2:
        raise InputError("max_level must be even and >= 2")
    tower = FieldTower(p, max_level)
    for lv in tower.levels:
        defining_poly(p, lv)
    return tower
