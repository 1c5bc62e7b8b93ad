import pytest

from afl_lab import gf
from afl_lab.errors import InputError
from afl_lab.linalg import (
    Matrix,
    all_subspaces,
    charpoly,
    invariant_subspaces,
    is_regular,
    kernel_of_poly,
    krylov_rank,
    minpoly,
    naive_subspace_scan,
    span,
    subspace_intersection,
    subspace_sum,
)
from afl_lab.poly import Poly, is_irreducible, plain_factor, poly_gcd, poly_lcm
from conftest import random_matrix, random_monic


def jordan_block(p, level, lam, n):
    z, o = gf.zero(p, level), gf.one(p, level)
    rows = [[z] * n for _ in range(n)]
    for k in range(n):
        rows[k][k] = lam
        if k + 1 < n:
            rows[k][k + 1] = o
    return Matrix.from_rows(p, level, rows)


# ---------------------------------------------------------------------------
# charpoly


def test_charpoly_identity():
    one = gf.one(3, 2)
    f = Poly.x_minus(one) * Poly.x_minus(one) * Poly.x_minus(one)
    assert charpoly(Matrix.identity(3, 2, 3)) == f


def test_charpoly_companion_is_defining(rng):
    for _ in range(10):
        f = random_monic(3, 2, rng.randrange(1, 7), rng)
        assert charpoly(Matrix.companion(f)) == f


def test_charpoly_diag_i_minus_i():
    i = gf.gen(3, 2)
    z = gf.zero(3, 2)
    m = Matrix.from_rows(3, 2, [[i, z], [z, -i]])
    assert charpoly(m) == Poly.from_ints(3, 2, [[1, 0], [0, 0], [1, 0]])


def test_charpoly_det_constant_term(rng):
    for _ in range(10):
        m = random_matrix(3, 2, 4, rng)
        cp = charpoly(m)
        det = m.det()
        assert cp.coeff(0) == det or cp.coeff(0) == -det
        sign = gf.from_base(3, 2, (-1) ** 4)
        assert det == sign * cp.coeff(0)


def test_cayley_hamilton(rng):
    for p in (3, 5):
        for n in (2, 3, 4):
            m = random_matrix(p, 2, n, rng)
            assert m.eval_poly(charpoly(m)).is_zero


# ---------------------------------------------------------------------------
# regularity


def test_identity_2x2_not_regular():
    assert not is_regular(Matrix.identity(3, 2, 2))


def test_companion_is_regular(rng):
    f = random_monic(3, 2, 4, rng)
    assert is_regular(Matrix.companion(f))


def test_jordan_block_is_regular():
    j = jordan_block(3, 2, gf.gen(3, 2), 3)
    assert is_regular(j)
    e1 = (gf.one(3, 2), gf.zero(3, 2), gf.zero(3, 2))
    assert krylov_rank(j.transpose(), e1) == 3


def test_minpoly_agrees_with_charpoly_iff_regular(rng):
    for _ in range(10):
        m = random_matrix(3, 2, 3, rng)
        assert (minpoly(m) == charpoly(m)) == is_regular(m)


def test_minpoly_divides_charpoly(rng):
    for _ in range(10):
        m = random_matrix(3, 2, 3, rng)
        assert charpoly(m) % minpoly(m) == Poly.zero(3, 2)


# ---------------------------------------------------------------------------
# kernels


def test_kernel_of_one_is_zero_subspace(rng):
    m = random_matrix(3, 2, 3, rng)
    assert kernel_of_poly(m, Poly.one(3, 2)).dim == 0


def test_kernel_of_charpoly_is_everything(rng):
    m = random_matrix(3, 2, 3, rng)
    assert kernel_of_poly(m, charpoly(m)).dim == 3


def test_kernel_of_jordan_square():
    lam = gf.gen(3, 2)
    j = jordan_block(3, 2, lam, 3)
    q = Poly.x_minus(lam) * Poly.x_minus(lam)
    ker = kernel_of_poly(j, q)
    assert ker.dim == 2
    e1 = (gf.one(3, 2), gf.zero(3, 2), gf.zero(3, 2))
    e2 = (gf.zero(3, 2), gf.one(3, 2), gf.zero(3, 2))
    assert ker.contains(e1) and ker.contains(e2)


def test_kernel_dim_equals_divisor_degree_for_regular(rng):
    for _ in range(10):
        m = random_matrix(3, 2, 3, rng)
        if not is_regular(m):
            continue
        for f, a in plain_factor(charpoly(m), 0):
            for e in range(1, a + 1):
                q = Poly.one(3, 2)
                for _ in range(e):
                    q = q * f
                assert kernel_of_poly(m, q).dim == q.degree


def test_kernel_lattice_morphisms(rng):
    # lcm -> subspace sum, gcd -> intersection
    for _ in range(8):
        m = random_matrix(3, 2, 4, rng)
        f = random_monic(3, 2, 2, rng)
        g = random_monic(3, 2, 2, rng)
        kf, kg = kernel_of_poly(m, f), kernel_of_poly(m, g)
        assert kernel_of_poly(m, poly_lcm(f, g)) == subspace_sum(kf, kg)
        assert kernel_of_poly(m, poly_gcd(f, g)) == subspace_intersection(kf, kg)


# ---------------------------------------------------------------------------
# invariant subspace lattice


def test_invariant_subspaces_of_jordan_chain():
    j = jordan_block(3, 2, gf.gen(3, 2), 3)
    subs = invariant_subspaces(j, plain_factor(charpoly(j), 0))
    dims = sorted(s.dim for s in subs.values())
    assert dims == [0, 1, 2, 3]


def test_invariant_subspaces_three_eigenvalues():
    one, i = gf.one(3, 2), gf.gen(3, 2)
    z = gf.zero(3, 2)
    m = Matrix.from_rows(3, 2, [[one, z, z], [z, i, z], [z, z, -i]])
    subs = invariant_subspaces(m, plain_factor(charpoly(m), 0))
    assert len(subs) == 8


def test_invariant_subspaces_requires_regular():
    with pytest.raises(InputError):
        invariant_subspaces(Matrix.identity(3, 2, 2), plain_factor(charpoly(Matrix.identity(3, 2, 2)), 0))


def test_divisibility_matches_inclusion(rng):
    for _ in range(5):
        m = random_matrix(3, 2, 3, rng)
        if not is_regular(m):
            continue
        subs = invariant_subspaces(m, plain_factor(charpoly(m), 0))
        vecs = list(subs)
        for a in vecs:
            for b in vecs:
                divides = all(x <= y for x, y in zip(a, b))
                assert divides == subs[a].is_subset(subs[b])


# ---------------------------------------------------------------------------
# brute-force oracle


def test_naive_scan_dim1():
    m = Matrix.identity(3, 2, 1)
    assert len(naive_subspace_scan(m)) == 2


def test_naive_scan_identity_2x2_over_f9():
    # 0, V, and q^2 + 1 = 10 lines
    assert len(naive_subspace_scan(Matrix.identity(3, 2, 2))) == 12


def test_naive_scan_irreducible_charpoly():
    f = next(
        cand
        for c0 in range(1, 81)
        for c1 in range(81)
        if is_irreducible(
            cand := Poly.from_elems(
                3, 2,
                [gf.elem_from_encoding(3, 2, c0), gf.elem_from_encoding(3, 2, c1), gf.one(3, 2)],
            )
        )
    )
    m = Matrix.companion(f)
    assert len(naive_subspace_scan(m)) == 2


def test_naive_scan_guard():
    with pytest.raises(InputError):
        naive_subspace_scan(Matrix.identity(5, 2, 2))
    with pytest.raises(InputError):
        naive_subspace_scan(Matrix.identity(3, 2, 5))


def test_all_subspaces_count_is_gaussian():
    # n = 2 over F_9: 1 + 10 + 1
    assert sum(1 for _ in all_subspaces(3, 2, 2)) == 12


def test_rref_canonical(rng):
    for _ in range(10):
        rows = [[gf.elem(3, 2, [rng.randrange(3), rng.randrange(3)]) for _ in range(4)] for _ in range(3)]
        sub1 = span(4, rows)
        shuffled = rows[::-1]
        sub2 = span(4, shuffled)
        assert sub1 == sub2
