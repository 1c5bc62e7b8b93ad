"""Construction and serialization of certified minuscule instances.

An instance is a tuple (V, h, g, tau): a nondegenerate hermitian space over
F_{q^2}, a regular unitary endomorphism g, and an anti-involution tau that
inverts g.  Two builders exist.

build_block_instance realizes a factorization signature directly: g is block
diagonal with one companion block per self-paired factor P^a and a pair of
companion blocks per conjugate pair {P^a, star(P)^a}.  tau is defined first,
blockwise, as Q(T) e -> conj(Q)(T^{-1}) e (swapping the two blocks of a
pair); the Gram matrix is then *solved for*: conjugate symmetry, unitarity
of g and the anti-isometry law are F_p-linear constraints on the entries of
G, and seeded samples of the solution space are drawn until one has nonzero
determinant.  Defining tau first and solving for h avoids the case analysis
the opposite order would need.

random_coxeter_instance uses the field model instead: V = F_{q^{2n}} with
basis 1, b, ..., b^{n-1}, the trace form h(x, y) = Tr(x y^{q^n}), g given by
multiplication with a norm-one element s of F_{q^{2n}}, and tau = the q^n
power map.  When s generates the field, the characteristic polynomial is
irreducible and self-paired.

The signature mini-language is "sp:<deg>:<exp>" / "cp:<deg>:<exp>", joined
by commas; "coxeter:<n>" routes to the second builder.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import gf
from .errors import ForgeError, InputError, InvariantError
from .gf import FieldElem, FieldTower, make_tower
from .hermitian import (
    AntiInvolution,
    HermitianSpace,
    is_unitary,
    validate_anti_involution,
    validate_space,
)
from .linalg import Matrix, charpoly, is_regular
from .poly import FactoredPoly, Poly, factor, poly_key, star

GRAM_TRIES = 64
GENERATOR_TRIES = 64


@dataclass(frozen=True)
class BlockSpec:
    kind: str  # "sp" (self-paired) or "cp" (conjugate pair)
    degree: int
    exponent: int
    poly: Poly | None = None  # explicit irreducible; None requests a random one

    @property
    def dim(self) -> int:
        d = self.degree * self.exponent
        return d if self.kind == "sp" else 2 * d

    def spec_string(self) -> str:
        return f"{self.kind}:{self.degree}:{self.exponent}"


def parse_signature(text: str) -> tuple[BlockSpec, ...]:
    blocks = []
    for part in text.split(","):
        fields = part.strip().split(":")
        if len(fields) != 3 or fields[0] not in ("sp", "cp"):
            raise InputError(f"bad signature block {part!r}; expected sp:<deg>:<exp> or cp:<deg>:<exp>")
        try:
            deg, exp = int(fields[1]), int(fields[2])
        except ValueError as exc:
            raise InputError(f"bad signature block {part!r}") from exc
        if deg < 1 or exp < 1:
            raise InputError("signature degrees and exponents must be positive")
        if fields[0] == "sp" and deg % 2 == 0:
            raise InputError("self-paired irreducibles have odd degree")
        blocks.append(BlockSpec(fields[0], deg, exp))
    return tuple(blocks)


def signature_dim(sig) -> int:
    return sum(b.dim for b in sig)


@dataclass(frozen=True)
class MinusculeInstance:
    tower: FieldTower
    space: HermitianSpace
    g: Matrix
    tau: AntiInvolution
    fact: FactoredPoly
    seed: int
    signature: tuple[str, ...]
    provenance: str

    @property
    def p(self) -> int:
        return self.tower.p

    @property
    def n(self) -> int:
        return self.space.dim


# ---------------------------------------------------------------------------
# random irreducibles via minimal polynomials of tower elements


def _min_poly_over_quadratic(z: FieldElem) -> Poly | None:
    """Minimal polynomial of a level-2d element over F_{q^2}, or None if its
    Galois orbit is shorter than d (z lies in a proper subfield)."""
    d = z.level // 2
    orbit = [z]
    cur = gf.tau_frob(z)
    while cur != z:
        orbit.append(cur)
        cur = gf.tau_frob(cur)
    if len(orbit) != d:
        return None
    prod = Poly.one(z.p, z.level)
    for r in orbit:
        prod = prod * Poly.x_minus(r)
    coeffs = [gf.descend(c) for c in prod.coeffs]
    return Poly.from_elems(z.p, 2, coeffs)


def _random_elem(p, level, rng) -> FieldElem:
    return gf.elem(p, level, [rng.randrange(p) for _ in range(level)])


def _random_self_paired_irreducible(p: int, degree: int, rng) -> Poly:
    """Sample a norm-one element of F_{q^{2d}} and take its minimal polynomial;
    guaranteed self-paired, retried until the degree is exactly d."""
    level = 2 * degree
    make_tower(p, level)
    while True:
        y = _random_elem(p, level, rng)
        if y.is_zero:
            continue
        z = y ** (p**degree - 1)
        cand = _min_poly_over_quadratic(z)
        if cand is not None and cand.degree == degree:
            return cand


def _random_pair_irreducible(p: int, degree: int, rng) -> Poly:
    level = 2 * degree
    make_tower(p, level)
    while True:
        z = _random_elem(p, level, rng)
        if z.is_zero:
            continue
        cand = _min_poly_over_quadratic(z)
        if cand is not None and cand.degree == degree and star(cand) != cand:
            return cand


def _resolve_polys(sig, p, rng) -> list[Poly]:
    seen: set[tuple] = set()
    out = []
    for block in sig:
        if block.poly is not None:
            cand = block.poly
            if cand.p != p or cand.level != 2:
                raise InputError("explicit block polynomial lives over the wrong field")
            if not cand.is_monic or cand.degree != block.degree:
                raise InputError("explicit block polynomial does not match its spec")
            if cand.coeffs[0].is_zero:
                raise InputError("block polynomial has zero constant term")
            if block.kind == "sp" and star(cand) != cand:
                raise InputError("sp block polynomial is not self-paired")
            if block.kind == "cp" and star(cand) == cand:
                raise InputError("cp block polynomial is self-paired")
        else:
            for _ in range(GENERATOR_TRIES):
                if block.kind == "sp":
                    cand = _random_self_paired_irreducible(p, block.degree, rng)
                else:
                    cand = _random_pair_irreducible(p, block.degree, rng)
                keys = {poly_key(cand), poly_key(star(cand))}
                if not keys & seen:
                    break
            else:
                raise ForgeError("could not sample a fresh block polynomial")
        keys = {poly_key(cand), poly_key(star(cand))}
        if keys & seen:
            raise InputError("signature blocks must carry distinct irreducibles")
        seen |= keys
        out.append(cand)
    return out


# ---------------------------------------------------------------------------
# tau on companion blocks


def _poly_power(f: Poly, a: int) -> Poly:
    out = Poly.one(f.p, f.level)
    for _ in range(a):
        out = out * f
    return out


def _inverse_t_powers(modulus: Poly):
    """Coefficient columns of T^{-j} mod modulus for j = 0..deg-1."""
    p, level = modulus.p, modulus.level
    s = modulus.degree
    # invert T via extended Euclid in F_{q^2}[T]/modulus
    t = Poly.x(p, level)
    g, inv_t = _poly_gcdext_mod(t, modulus)
    if g.degree != 0:
        raise InputError("T is not invertible modulo the block polynomial")
    inv_t = inv_t.scale(g.coeffs[0].inverse()) % modulus
    cols = []
    cur = Poly.one(p, level)
    for _ in range(s):
        cols.append([cur.coeff(i) for i in range(s)])
        cur = (cur * inv_t) % modulus
    return cols


def _poly_gcdext_mod(a: Poly, b: Poly):
    # returns (g, u) with u*a = g mod b
    r0, r1 = a, b
    s0, s1 = Poly.one(a.p, a.level), Poly.zero(a.p, a.level)
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    return r0, s0


def _assemble_blocks(specs, polys):
    """Block-diagonal g and the tau matrix for the whole signature.

    tau_cols collects, in global column order, the block offset each image
    lands in together with its coefficient column."""
    p = polys[0].p
    g_blocks = []
    tau_cols = []
    off = 0
    for block, fp in zip(specs, polys):
        if block.kind == "sp":
            mod = _poly_power(fp, block.exponent)
            g_blocks.append(Matrix.companion(mod))
            tau_cols.extend((off, col) for col in _inverse_t_powers(mod))
            off += mod.degree
        else:
            mod_a = _poly_power(fp, block.exponent)
            mod_b = _poly_power(star(fp), block.exponent)
            g_blocks.append(Matrix.companion(mod_a))
            g_blocks.append(Matrix.companion(mod_b))
            s = mod_a.degree
            off_a, off_b = off, off + s
            # the two blocks swap, each with the T -> T^{-1} twist
            tau_cols.extend((off_b, col) for col in _inverse_t_powers(mod_b))
            tau_cols.extend((off_a, col) for col in _inverse_t_powers(mod_a))
            off += 2 * s
    n = off
    g = Matrix.block_diag(g_blocks)
    z = gf.zero(p, 2)
    s_rows = [[z] * n for _ in range(n)]
    for col_index, (dst_off, col) in enumerate(tau_cols):
        for i, c in enumerate(col):
            s_rows[dst_off + i][col_index] = c
    return g, Matrix.from_rows(p, 2, s_rows)


# ---------------------------------------------------------------------------
# solving for the Gram matrix


def _int_rref(rows, p):
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] % p), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][col], -1, p)
        mat[r] = [(a * inv) % p for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] % p:
                f = mat[i][col]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def _int_kernel_basis(rows, ncols, p):
    red, pivots = _int_rref(rows, p)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [0] * ncols
        v[j] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r][j]) % p
        basis.append(v)
    return basis


def _gram_unknowns(n):
    """Packing of a conjugate-symmetric G into F_p unknowns: one slot per
    diagonal entry (forced into F_p) and two per strict upper entry."""
    slots = []
    for i in range(n):
        slots.append(("diag", i, i, 0))
    for i in range(n):
        for j in range(i + 1, n):
            slots.append(("off", i, j, 0))
            slots.append(("off", i, j, 1))
    return slots


def _unpack_gram(values, slots, p, n) -> Matrix:
    z = gf.zero(p, 2)
    rows = [[z] * n for _ in range(n)]
    for val, (kind, i, j, comp) in zip(values, slots):
        if not val:
            continue
        if kind == "diag":
            rows[i][i] = rows[i][i] + gf.elem(p, 2, [val, 0])
        else:
            e = gf.elem(p, 2, [val, 0] if comp == 0 else [0, val])
            rows[i][j] = rows[i][j] + e
            rows[j][i] = rows[j][i] + gf.conj(e)
    return Matrix.from_rows(p, 2, rows)


def _solve_gram(g: Matrix, s: Matrix, seed, label) -> HermitianSpace:
    """Sample a nondegenerate Gram matrix satisfying unitarity of g and the
    anti-isometry law of tau; conjugate symmetry is built into the packing."""
    p, n = g.p, g.n
    slots = _gram_unknowns(n)
    gt = g.transpose()
    gbar = g.conj()
    st = s.transpose()
    sbar = s.conj()
    columns = []
    for idx in range(len(slots)):
        probe = [0] * len(slots)
        probe[idx] = 1
        gm = _unpack_gram(probe, slots, p, n)
        r_unit = gt @ gm @ gbar - gm
        r_anti = st @ gm @ sbar - gm.conj()
        col = []
        for mat in (r_unit, r_anti):
            for row in mat.rows:
                for entry in row:
                    col.extend(entry.coeffs)
        columns.append(col)
    system_rows = [list(r) for r in zip(*columns)]
    basis = _int_kernel_basis(system_rows, len(slots), p)
    if not basis:
        raise ForgeError(f"no compatible Gram matrix exists for {label} (solution space is trivial)")
    rng = random.Random(f"gram:{p}:{label}:{seed}")
    candidates = list(basis)
    for _ in range(GRAM_TRIES - len(candidates)):
        combo = [0] * len(slots)
        for vec in basis:
            c = rng.randrange(p)
            if c:
                combo = [(a + c * b) % p for a, b in zip(combo, vec)]
        candidates.append(combo)
    for values in candidates[:GRAM_TRIES]:
        gm = _unpack_gram(values, slots, p, n)
        if not gm.det().is_zero:
            return validate_space(gm)
    raise ForgeError(
        f"no nondegenerate Gram matrix found for {label} within {GRAM_TRIES} tries "
        f"(solution space dimension {len(basis)} over F_{p})"
    )


# ---------------------------------------------------------------------------
# builders


def certify_instance(inst: MinusculeInstance) -> None:
    """Re-derive every instance invariant; raises InvariantError naming the
    first broken axiom.  Serialized certificates are never trusted."""
    validate_space(inst.space.gram)
    if not is_unitary(inst.g, inst.space):
        raise InvariantError("g is not unitary for the hermitian form")
    if not is_regular(inst.g, seed=inst.seed):
        raise InvariantError("g is not regular")
    validate_anti_involution(inst.tau, inst.space, inst.g)
    fact = factor(charpoly(inst.g), inst.seed)
    if fact != inst.fact:
        raise InvariantError("stored factorization disagrees with charpoly(g)")


def build_block_instance(sig, p: int, seed: int) -> MinusculeInstance:
    """Certified instance realizing a factorization signature exactly."""
    if not gf.is_odd_prime(p):
        raise InputError(f"q must be an odd prime, got {p}")
    if not sig:
        raise InputError("empty signature")
    for block in sig:
        if block.kind not in ("sp", "cp"):
            raise InputError(f"unknown block kind {block.kind!r}")
        if block.degree < 1 or block.exponent < 1:
            raise InputError("signature degrees and exponents must be positive")
        if block.kind == "sp" and block.degree % 2 == 0:
            raise InputError("self-paired irreducibles have odd degree")
    sig_string = ",".join(b.spec_string() for b in sig)
    rng = random.Random(f"forge:{p}:{sig_string}:{seed}")
    max_deg = max(b.degree for b in sig)
    tower = make_tower(p, max(2, 2 * max_deg))
    polys = _resolve_polys(sig, p, rng)
    g, s = _assemble_blocks(sig, polys)
    space = _solve_gram(g, s, seed, sig_string)
    tau = AntiInvolution(s)
    fact = factor(charpoly(g), seed)
    expected = sorted(
        [(b.degree, b.exponent) for b in sig]
        + [(b.degree, b.exponent) for b in sig if b.kind == "cp"]
    )
    got = sorted((f.degree, a) for f, a in fact.factors)
    if expected != got:
        raise AssertionError("factorization does not match the requested signature")
    inst = MinusculeInstance(
        tower=make_tower(p, 2),
        space=space,
        g=g,
        tau=tau,
        fact=fact,
        seed=seed,
        signature=tuple(b.spec_string() for b in sig),
        provenance="block",
    )
    certify_instance(inst)
    return inst


def random_coxeter_instance(p: int, n: int, seed: int, s_value=None) -> MinusculeInstance:
    """Certified instance from the norm-one torus of F_{q^{2n}} (n odd).

    s_value, when given, bypasses the random search: pass a level-2n element
    or its integer encoding.  A non-generating s (e.g. s = 1 with n > 1)
    raises ForgeError carrying the witness.
    """
    if not gf.is_odd_prime(p):
        raise InputError(f"q must be an odd prime, got {p}")
    if n < 1 or n % 2 == 0:
        raise InputError("the torus model needs odd n >= 1")
    level = 2 * n
    make_tower(p, level)
    b = gf.gen(p, level)
    emb_gen = gf.embed(gf.gen(p, 2), level)

    # F_p coordinate matrix of the F_{q^2}-basis 1, b, ..., b^{n-1}
    cols = []
    powers = [gf.one(p, level)]
    for _ in range(1, n):
        powers.append(powers[-1] * b)
    for bj in powers:
        cols.append(list(bj.coeffs))
        cols.append(list((emb_gen * bj).coeffs))
    coord_rows = [[cols[c][r] for c in range(level)] for r in range(level)]
    aug = [row + [1 if i == j else 0 for j in range(level)] for i, row in enumerate(coord_rows)]
    red, pivots = _int_rref(aug, p)
    if list(pivots) != list(range(level)):
        raise AssertionError("power basis failed to span the field")
    binv = [row[level:] for row in red]

    def coords(z: FieldElem):
        vec = [sum(binv[i][j] * z.coeffs[j] for j in range(level)) % p for i in range(level)]
        return tuple(gf.elem(p, 2, [vec[2 * k], vec[2 * k + 1]]) for k in range(n))

    rng = random.Random(f"coxeter:{p}:{n}:{seed}")
    norm_exp = p**n - 1
    attempts = GENERATOR_TRIES
    witness = None
    while attempts:
        attempts -= 1
        if s_value is not None:
            s_elem = s_value if isinstance(s_value, FieldElem) else gf.elem_from_encoding(p, level, int(s_value))
            if s_elem.level != level:
                raise InputError("s override lives at the wrong level")
            if gf.encode_int(s_elem ** (p**n + 1)) != 1:
                raise InputError("s override is not a norm-one element")
        else:
            y = _random_elem(p, level, rng)
            if y.is_zero:
                continue
            s_elem = y**norm_exp
        minp = _min_poly_over_quadratic(s_elem)
        if minp is None or minp.degree != n:
            witness = s_elem
            if s_value is not None:
                raise ForgeError(
                    "supplied s is not regular: its minimal polynomial has degree "
                    f"{_witness_degree(witness)} < {n}"
                )
            continue
        g = Matrix.from_rows(p, 2, _transpose_rows([coords(s_elem * bj) for bj in powers]))
        bq = b ** (p**n)
        tau_images = [gf.one(p, level)]
        for _ in range(1, n):
            tau_images.append(tau_images[-1] * bq)
        s_mat = Matrix.from_rows(p, 2, _transpose_rows([coords(img) for img in tau_images]))
        gram_rows = []
        for ba in powers:
            row = []
            for bb in powers:
                row.append(gf.descend(_trace_to_quadratic(ba * (bb ** (p**n)))))
            gram_rows.append(row)
        space = validate_space(Matrix.from_rows(p, 2, gram_rows))
        fact = factor(charpoly(g), seed)
        inst = MinusculeInstance(
            tower=make_tower(p, 2),
            space=space,
            g=g,
            tau=AntiInvolution(s_mat),
            fact=fact,
            seed=seed,
            signature=(f"coxeter:{n}",),
            provenance="coxeter",
        )
        certify_instance(inst)
        return inst
    raise ForgeError(
        "exhausted attempts to find a generating norm-one element; "
        f"last witness has minimal polynomial of degree {_witness_degree(witness)} < {n}"
    )


def _witness_degree(z):
    if z is None:
        return 0
    d = 1
    cur = gf.tau_frob(z)
    while cur != z:
        d += 1
        cur = gf.tau_frob(cur)
    return d


def _trace_to_quadratic(z: FieldElem) -> FieldElem:
    """Trace of F_{q^{2n}} down to F_{q^2}: sum of the tau-orbit."""
    n = z.level // 2
    acc = z
    cur = z
    for _ in range(n - 1):
        cur = gf.tau_frob(cur)
        acc = acc + cur
    return acc


def _transpose_rows(cols):
    return [list(r) for r in zip(*cols)]


def instance_from_spec(spec: str, p: int, seed: int) -> MinusculeInstance:
    """Dispatch 'coxeter:<n>' or a comma-joined block signature."""
    spec = spec.strip()
    if spec.startswith("coxeter:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise InputError(f"bad coxeter spec {spec!r}") from exc
        return random_coxeter_instance(p, n, seed)
    return build_block_instance(parse_signature(spec), p, seed)


# ---------------------------------------------------------------------------
# JSON round trip


def serialize_instance(inst: MinusculeInstance) -> dict:
    return {
        "p": inst.p,
        "n": inst.n,
        "field": {"poly2": list(gf.defining_poly(inst.p, 2))},
        "gram": inst.space.gram.to_json(),
        "g": inst.g.to_json(),
        "tau": inst.tau.mat.to_json(),
        "seed": inst.seed,
        "signature": list(inst.signature),
    }


def _matrix_from_json(p, data, n, name) -> Matrix:
    if not isinstance(data, list) or len(data) != n:
        raise InputError(f"schema: {name} must be a {n}x{n} matrix")
    rows = []
    for row in data:
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"schema: {name} must be a {n}x{n} matrix")
        out = []
        for entry in row:
            if not isinstance(entry, list) or len(entry) != 2:
                raise InputError(f"schema: {name} entries must be coefficient pairs")
            out.append(gf.elem(p, 2, entry))
        rows.append(out)
    return Matrix.from_rows(p, 2, rows)


def parse_instance(data: dict) -> MinusculeInstance:
    """Rebuild an instance from JSON, re-validating every invariant."""
    if not isinstance(data, dict):
        raise InputError("schema: instance must be a JSON object")
    for key in ("p", "n", "field", "gram", "g", "tau", "seed", "signature"):
        if key not in data:
            raise InputError(f"schema: missing key {key!r}")
    p = data["p"]
    n = data["n"]
    if not gf.is_odd_prime(p):
        raise InputError("schema: p must be an odd prime")
    if not isinstance(n, int) or n < 1:
        raise InputError("schema: n must be a positive integer")
    poly2 = data["field"].get("poly2") if isinstance(data["field"], dict) else None
    if poly2 != list(gf.defining_poly(p, 2)):
        raise InputError("schema: poly2 violates the deterministic tower contract")
    seed = data["seed"]
    if not isinstance(seed, int):
        raise InputError("schema: seed must be an integer")
    gram = _matrix_from_json(p, data["gram"], n, "gram")
    g = _matrix_from_json(p, data["g"], n, "g")
    tau = _matrix_from_json(p, data["tau"], n, "tau")
    space = validate_space(gram)
    inst = MinusculeInstance(
        tower=make_tower(p, 2),
        space=space,
        g=g,
        tau=AntiInvolution(tau),
        fact=factor(charpoly(g), seed),
        seed=seed,
        signature=tuple(str(s) for s in data["signature"]),
        provenance="parsed",
    )
    certify_instance(inst)
    return inst
