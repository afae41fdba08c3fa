"""Oracle equivalence for the counting operations: every fast count is
replayed against a direct brute-force loop on randomized instances."""

import random
from fractions import Fraction

import pytest

from sl2lab import incidence
from sl2lab.errors import (BadPrime, BorelElement, BudgetExceeded,
                           OverlappingBlocks, ZeroLambda)
from sl2lab.field import FieldCtx, FqElem
from sl2lab.incidence import PointSet, SFamily
from sl2lab.sl2 import INF, Mat2, mobius, u, weyl

PRIMES = [13, 31, 101]


def random_sl2_nonborel(ctx, rnd):
    p = ctx.p
    while True:
        a, b = rnd.randrange(p), rnd.randrange(p)
        c = rnd.randrange(1, p)
        if a:
            return Mat2(ctx, a, b, c, (1 + b * c) * ctx.inv(a))
        if b:
            m = Mat2(ctx, 0, b, -ctx.inv(b), rnd.randrange(p))
            if m.c != 0:
                return m


def random_set(ctx, rnd, max_size=None):
    max_size = min(max_size or ctx.p, ctx.p)
    size = rnd.randint(1, max_size)
    return PointSet.from_iterable(ctx, rnd.sample(range(ctx.p), size))


def oracle_pairs(ctx, g, pairs, a_set, b_set):
    count = 0
    for alpha, beta in pairs:
        for a in a_set:
            for b in b_set:
                if mobius(g, (alpha + a) % ctx.p) == (beta + b) % ctx.p:
                    count += 1
    return count


def test_count_bg_prime_oracle():
    rnd = random.Random(11)
    for trial in range(51):
        ctx = FieldCtx(PRIMES[trial % 3])
        g = random_sl2_nonborel(ctx, rnd)
        stride = rnd.choice([1, 2])
        n = rnd.randint(1, (ctx.p - 1) // stride)
        a_set = random_set(ctx, rnd, 20)
        b_set = random_set(ctx, rnd, 20)
        rep = incidence.count_bg_prime(ctx, g, n, a_set, b_set, stride=stride)
        pairs = [(c, c) for c in range(stride, stride * n + 1, stride)]
        assert rep.exact_count == oracle_pairs(ctx, g, pairs, a_set, b_set)


def test_count_bg_general_oracle():
    rnd = random.Random(13)
    for trial in range(51):
        ctx = FieldCtx(PRIMES[trial % 3])
        g = random_sl2_nonborel(ctx, rnd)
        n = rnd.randint(1, 5)
        fam = SFamily.grid(n, k=1) if rnd.random() < 0.5 else SFamily.diagonal(n)
        a_set = random_set(ctx, rnd, 15)
        b_set = random_set(ctx, rnd, 15)
        rep = incidence.count_bg_general(ctx, g, fam, a_set, b_set)
        assert rep.exact_count == oracle_pairs(ctx, g, fam.tuples, a_set, b_set)


def test_count_bg_words_oracle():
    rnd = random.Random(17)
    for trial in range(51):
        ctx = FieldCtx(PRIMES[trial % 3])
        k = rnd.randint(1, 2)
        gs = [random_sl2_nonborel(ctx, rnd) for _ in range(k)]
        n = rnd.randint(1, 3)
        fam = SFamily.grid(n, k=k)
        a_set = random_set(ctx, rnd, 12)
        b_set = random_set(ctx, rnd, 12)
        rep = incidence.count_bg_words(ctx, gs, fam, a_set, b_set)
        # oracle: push each point through the word map on P^1; a transient
        # INF can return to F_p through a later g_j
        count = 0
        for tup in fam.tuples:
            for a in a_set:
                x = (a + tup[0]) % ctx.p
                for j in range(k):
                    x = mobius(gs[j], x)
                    if x is not INF:
                        x = (x + tup[j + 1]) % ctx.p
                count += x is not INF and x in b_set
        assert rep.exact_count == count


def test_count_union_oracle():
    rnd = random.Random(19)
    for trial in range(51):
        ctx = FieldCtx(PRIMES[trial % 3])
        g = random_sl2_nonborel(ctx, rnd)
        fam = SFamily.grid(2, k=1)
        blocks = [((0, 0), fam), ((rnd.randint(5, 8), rnd.randint(5, 8)), fam)]
        omega = [(ctx.p - 1, ctx.p - 2)]
        a_set = random_set(ctx, rnd, 15)
        b_set = random_set(ctx, rnd, 15)
        rep = incidence.count_union_structured(ctx, g, blocks, omega, a_set, b_set)
        pairs = []
        for (da, db), f in blocks:
            pairs.extend(((al + da) % ctx.p, (be + db) % ctx.p)
                         for al, be in f.tuples)
        pairs.extend(omega)
        assert rep.exact_count == oracle_pairs(ctx, g, pairs, a_set, b_set)


def test_count_union_overlap_rejected():
    ctx = FieldCtx(13)
    fam = SFamily.grid(2, k=1)
    with pytest.raises(OverlappingBlocks):
        incidence.count_union_structured(ctx, weyl(ctx),
                                         [((0, 0), fam), ((0, 0), fam)],
                                         [], PointSet.full(ctx), PointSet.full(ctx))


def test_count_fq_system_oracle():
    rnd = random.Random(23)
    for trial in range(51):
        ctx = FieldCtx(rnd.choice([7, 11, 19]))
        p = ctx.p
        fams = [[(rnd.randrange(p), rnd.randrange(p)) for _ in range(rnd.randint(1, 6))]
                for _ in range(4)]
        fams = [list(set(f)) for f in fams]
        lam = FqElem(ctx, rnd.randrange(p), rnd.randrange(p))
        if lam.is_zero():
            lam = FqElem(ctx, 1, 0)
        rep = incidence.count_fq_system(ctx, *fams, lam)
        count = 0
        for za in fams[0]:
            for zb in fams[1]:
                s = FqElem(ctx, za[0] + zb[0], za[1] + zb[1])
                for zc in fams[2]:
                    for zd in fams[3]:
                        t = FqElem(ctx, zc[0] + zd[0], zc[1] + zd[1])
                        if s * t == lam:
                            count += 1
        assert rep.exact_count == count


def test_fq_system_validation():
    ctx = FieldCtx(7)
    with pytest.raises(ZeroLambda):
        incidence.count_fq_system(ctx, [(0, 0)], [(0, 0)], [(0, 0)], [(0, 0)],
                                  FqElem(ctx, 0, 0))
    with pytest.raises(BadPrime):
        incidence.count_fq_system(FieldCtx(13), [], [], [],
                                  [], None)


# --------------------------------------------------- analytic closed forms

@pytest.mark.parametrize("p", PRIMES)
def test_full_sets_main_term_exact(p):
    # A = B = F_p: exactly one b for each non-pole a, so |S| * (p-1)
    ctx = FieldCtx(p)
    full = PointSet.full(ctx)
    for n in (1, 3):
        rep = incidence.count_bg_prime(ctx, weyl(ctx), n, full, full)
        assert rep.exact_count == n * (p - 1)
    fam = SFamily.grid(2, k=1)
    rep = incidence.count_bg_general(ctx, weyl(ctx), fam, full, full)
    assert rep.exact_count == len(fam) * (p - 1)


def test_fq_full_sets_closed_form():
    p = 7
    q = p * p
    ctx = FieldCtx(p)
    full = [(x, y) for x in range(p) for y in range(p)]
    rep = incidence.count_fq_system(ctx, full, full, full, full, FqElem(ctx, 2, 3))
    assert rep.exact_count == q ** 3 - q ** 2


def test_main_term_fraction():
    ctx = FieldCtx(13)
    full = PointSet.full(ctx)
    rep = incidence.count_bg_prime(ctx, weyl(ctx), 2, full, full)
    assert rep.main_term == Fraction(2 * 13 * 13, 13)


# --------------------------------------------------- H-set products

def test_build_h_set():
    ctx = FieldCtx(101)
    fam = SFamily.grid(3, k=1)
    h = incidence.build_h_set(ctx, weyl(ctx), fam)
    assert len(h) == 9
    for (alpha, beta), m in zip(fam.tuples, h):
        assert m == u(ctx, -beta) * weyl(ctx) * u(ctx, alpha)


def test_product_multiplicity_consistency():
    ctx = FieldCtx(101)
    h = incidence.build_h_set(ctx, weyl(ctx), SFamily.grid(2, k=1))
    linf, l2 = incidence.product_multiplicity(ctx, h, 1)
    # total mass |H|^2, and l2 between uniform and concentrated extremes
    r = incidence._multiplicity_map(h, 1)
    assert sum(r.values()) == len(h) ** 2
    assert max(r.values()) == linf
    assert sum(v * v for v in r.values()) == l2


def test_product_budget():
    ctx = FieldCtx(101)
    h = incidence.build_h_set(ctx, weyl(ctx), SFamily.grid(4, k=1))
    with pytest.raises(BudgetExceeded):
        incidence.product_multiplicity(ctx, h, 2, budget=10)


def test_borel_mass_closed_form_small():
    # the N^3 identity checked in depth by the acceptance gate
    ctx = FieldCtx(101)
    for n in (2, 3):
        h = incidence.build_h_set(ctx, weyl(ctx), SFamily.grid(n, k=1))
        ident = Mat2(ctx, 1, 0, 0, 1)
        mass, _ = incidence.subgroup_mass(ctx, h, 1, incidence.BorelCoset(ident, ident))
        assert mass == n ** 3


def test_dihedral_coset_membership():
    ctx = FieldCtx(11)
    eps = ctx.nonresidue()
    coset = incidence.DihedralCoset(eps, Mat2(ctx, 1, 0, 0, 1))
    assert coset.contains(Mat2(ctx, 1, 0, 0, 1))
    assert not coset.contains(u(ctx, 1))


# --------------------------------------------------- cont2 / incidences

def test_cont2_energy_oracle():
    rnd = random.Random(29)
    ctx = FieldCtx(31)
    for _ in range(10):
        a_set = random_set(ctx, rnd, 8)
        fast = incidence.count_cont2_energy(ctx, a_set, a_set, a_set)
        count = 0
        elems = list(a_set)
        for a in elems:
            for b in elems:
                if (a + b) % 31 == 0:
                    continue
                for c in elems:
                    v1 = (ctx.inv((a + b) % 31) + c) % 31
                    for a2 in elems:
                        for b2 in elems:
                            if (a2 + b2) % 31 == 0:
                                continue
                            for c2 in elems:
                                if (ctx.inv((a2 + b2) % 31) + c2) % 31 == v1:
                                    count += 1
        assert fast == count


def test_image_size_full_set():
    ctx = FieldCtx(13)
    assert incidence.image_size_cont2(ctx, PointSet.full(ctx)) == 13


def test_mobius_incidences_oracle():
    rnd = random.Random(31)
    ctx = FieldCtx(31)
    for _ in range(20):
        a_set = random_set(ctx, rnd, 10)
        b_set = random_set(ctx, rnd, 10)
        ts = [random_sl2_nonborel(ctx, rnd) for _ in range(4)]
        fast = incidence.count_mobius_incidences(ctx, a_set, b_set, ts)
        slow = sum(1 for t in ts for a in a_set for b in b_set
                   if mobius(t, a) == b)
        assert fast == slow


def test_borel_input_rejected():
    ctx = FieldCtx(13)
    full = PointSet.full(ctx)
    with pytest.raises(BorelElement):
        incidence.count_bg_prime(ctx, u(ctx, 1), 2, full, full)
