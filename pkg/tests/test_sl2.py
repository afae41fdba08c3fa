import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2lab.errors import BadEps, BorelElement, SingularMatrix
from sl2lab.field import FieldCtx
from sl2lab.sl2 import (INF, Mat2, bruhat, conjugate, diag, dihedral_elements,
                        enumerate_sl2, identity, in_dihedral, is_borel,
                        mobius, proj_points, sqrt_mod, u, u_lower, weyl)


def random_sl2(ctx, rnd):
    p = ctx.p
    while True:
        a, b, c = rnd.randrange(p), rnd.randrange(p), rnd.randrange(p)
        if a:
            return Mat2(ctx, a, b, c, (1 + b * c) * ctx.inv(a))
        if b:
            # a = 0 forces bc = -1
            return Mat2(ctx, 0, b, -ctx.inv(b), rnd.randrange(p))


def test_mat_mul_inv():
    ctx = FieldCtx(101)
    rnd = random.Random(1)
    for _ in range(100):
        m = random_sl2(ctx, rnd)
        assert (m * m.inv()).is_identity()
        assert m.det == 1


def test_singular_inverse_raises():
    ctx = FieldCtx(7)
    with pytest.raises(SingularMatrix):
        Mat2(ctx, 1, 2, 2, 4).inv()


def test_mobius_is_action():
    # (gh)(x) = g(h(x)) across all of P^1, including INF
    ctx = FieldCtx(31)
    rnd = random.Random(2)
    for _ in range(50):
        g = random_sl2(ctx, rnd)
        h = random_sl2(ctx, rnd)
        for x in proj_points(ctx):
            assert mobius(g * h, x) == mobius(g, mobius(h, x))


def test_mobius_permutes_p1():
    ctx = FieldCtx(13)
    rnd = random.Random(3)
    for _ in range(20):
        g = random_sl2(ctx, rnd)
        image = {mobius(g, x) if mobius(g, x) is INF else mobius(g, x)
                 for x in proj_points(ctx)}
        assert len(image) == ctx.p + 1


def test_named_elements():
    ctx = FieldCtx(11)
    assert mobius(u(ctx, 4), 5) == 9
    assert mobius(weyl(ctx), 2) == (-ctx.inv(2)) % 11
    assert mobius(weyl(ctx), 0) is INF
    assert mobius(weyl(ctx), INF) == 0
    assert mobius(diag(ctx, 3), 1) == (3 * 3) % 11  # x -> lam^2 x
    assert u_lower(ctx, 7) == u(ctx, 7).transpose()


@given(st.integers(2, 100))
@settings(max_examples=40, deadline=None)
def test_bruhat_recompose(seed):
    ctx = FieldCtx(101)
    rnd = random.Random(seed)
    g = random_sl2(ctx, rnd)
    if g.c == 0:
        with pytest.raises(BorelElement):
            bruhat(g)
        return
    form = bruhat(g)
    assert form.recompose(ctx) == g


def test_is_borel():
    ctx = FieldCtx(7)
    assert is_borel(u(ctx, 3))
    assert is_borel(diag(ctx, 2))
    assert not is_borel(weyl(ctx))


def test_conjugate():
    ctx = FieldCtx(13)
    g = weyl(ctx)
    a = u(ctx, 5)
    assert conjugate(a, g) == g.inv() * a * g
    assert conjugate(a, identity(ctx)) == a


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_enumerate_sl2_complete(p):
    ctx = FieldCtx(p)
    elems = enumerate_sl2(ctx)
    assert len(elems) == p * (p * p - 1)
    assert len({m.entries() for m in elems}) == len(elems)
    assert all(m.det == 1 for m in elems)
    # fixed lexicographic order
    keys = [m.entries() for m in elems]
    assert keys == sorted(keys)


def test_sqrt_mod_both_branches():
    for p in (7, 13, 17, 41):  # covers p = 3 mod 4 and the Tonelli path
        ctx = FieldCtx(p)
        for x in range(p):
            if ctx.legendre(x) >= 0:
                r = sqrt_mod(ctx, x)
                assert (r * r) % p == x


@pytest.mark.parametrize("p", [5, 7, 11, 13, 101])
def test_dihedral_size(p):
    ctx = FieldCtx(p)
    eps = ctx.nonresidue()
    elems = dihedral_elements(ctx, eps)
    assert len(elems) == p + 1
    assert len({m.entries() for m in elems}) == p + 1
    for m in elems:
        assert m.det == 1
        assert in_dihedral(m, eps)
    # closure under multiplication
    for m in elems[:5]:
        for n in elems[:5]:
            assert in_dihedral(m * n, eps)


def test_dihedral_needs_nonresidue():
    ctx = FieldCtx(11)
    with pytest.raises(BadEps):
        dihedral_elements(ctx, 4)
