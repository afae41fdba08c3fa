"""Exact counting of the shifted-Mobius equations, with main-term
comparison, H-set multiplicity statistics, subgroup mass, and the related
incidence/energy counts.

All counts are exact integers; main terms are kept as exact rationals
until report time and the normalized error is the only float.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import (BadPrime, BorelElement, BudgetExceeded,
                     OverlappingBlocks, SingularMatrix, ZeroLambda)
from .field import FieldCtx, FqElem
from .sl2 import INF, Mat2, is_borel, mobius, u

PRODUCT_BUDGET = 10 ** 9


@dataclass(frozen=True)
class PointSet:
    """Subset of F_p as a frozenset plus membership tuple."""

    ctx: FieldCtx
    elements: frozenset[int]

    @classmethod
    def from_iterable(cls, ctx: FieldCtx, xs) -> "PointSet":
        return cls(ctx, frozenset(x % ctx.p for x in xs))

    @classmethod
    def full(cls, ctx: FieldCtx) -> "PointSet":
        return cls(ctx, frozenset(range(ctx.p)))

    @classmethod
    def residues(cls, ctx: FieldCtx) -> "PointSet":
        return cls.from_iterable(ctx, ctx.residues())

    @classmethod
    def interval(cls, ctx: FieldCtx, lo: int, hi: int) -> "PointSet":
        return cls.from_iterable(ctx, range(lo, hi + 1))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))


@dataclass(frozen=True)
class SFamily:
    """Index family S of (k+1)-tuples with entries in stride*[N]."""

    tuples: tuple[tuple[int, ...], ...]
    n_bound: int
    k: int
    stride: int = 1

    def __post_init__(self):
        seen = set(self.tuples)
        assert len(seen) == len(self.tuples), "duplicate tuples in S"
        for t in self.tuples:
            assert len(t) == self.k + 1, "tuple arity mismatch"
            for x in t:
                assert x in range(self.stride, self.stride * self.n_bound + 1, self.stride), \
                    f"entry {x} outside stride*[N]"

    @classmethod
    def from_pairs(cls, pairs, n_bound: int, stride: int = 1) -> "SFamily":
        return cls(tuple(tuple(p) for p in pairs), n_bound, 1, stride)

    @classmethod
    def grid(cls, n_bound: int, k: int = 1, stride: int = 1) -> "SFamily":
        """The full grid (stride*[N])^{k+1}."""
        rng = range(stride, stride * n_bound + 1, stride)
        return cls(tuple(product(rng, repeat=k + 1)), n_bound, k, stride)

    @classmethod
    def diagonal(cls, n_bound: int, stride: int = 1) -> "SFamily":
        """{(c, c) : c in stride*[N]} as in the one-parameter count."""
        return cls(tuple((c, c) for c in range(stride, stride * n_bound + 1, stride)),
                   n_bound, 1, stride)

    def __len__(self):
        return len(self.tuples)

    def max_slice(self) -> int:
        """Largest intersection with a hyperplane z_j = const."""
        best = 0
        for j in range(self.k + 1):
            counts = Counter(t[j] for t in self.tuples)
            if counts:
                best = max(best, max(counts.values()))
        return best


@dataclass
class CountReport:
    exact_count: int
    main_term: Fraction
    normalized_error: float
    params: dict = field(default_factory=dict)

    @classmethod
    def build(cls, count: int, s_size: int, a_size: int, b_size: int, p: int,
              **params) -> "CountReport":
        params.setdefault("p", p)
        main = Fraction(s_size * a_size * b_size, p)
        denom = math.sqrt(a_size * b_size) * s_size
        err = float(Fraction(count) - main) / denom if denom else 0.0
        return cls(count, main, err, params)


def _require_nonborel(g: Mat2):
    if is_borel(g):
        raise BorelElement(f"{g} lies in B")


def count_bg_prime(ctx: FieldCtx, g: Mat2, n: int, a_set: PointSet,
                   b_set: PointSet, stride: int = 1) -> CountReport:
    """Count solutions of g(c + a) = c + b over c in stride*[N], a in A,
    b in B. Points mapped to infinity never count."""
    _require_nonborel(g)
    if stride * n >= ctx.p:
        raise ValueError("stride * N must be below p")
    p = ctx.p
    b_elems = b_set.elements
    count = 0
    for c in range(stride, stride * n + 1, stride):
        for a in a_set.elements:
            y = mobius(g, (c + a) % p)
            if y is not INF and (y - c) % p in b_elems:
                count += 1
    return CountReport.build(count, n, len(a_set), len(b_set), p,
                             experiment="count_bg_prime", N=n, stride=stride)


def count_bg_general(ctx: FieldCtx, g: Mat2, s_fam: SFamily, a_set: PointSet,
                     b_set: PointSet) -> CountReport:
    """Count solutions of g(alpha + a) = beta + b over (alpha, beta) in S."""
    _require_nonborel(g)
    assert s_fam.k == 1, "pair families only"
    p = ctx.p
    b_elems = b_set.elements
    count = 0
    for alpha, beta in s_fam.tuples:
        for a in a_set.elements:
            y = mobius(g, (alpha + a) % p)
            if y is not INF and (y - beta) % p in b_elems:
                count += 1
    return CountReport.build(count, len(s_fam), len(a_set), len(b_set), p,
                             experiment="count_bg_general",
                             max_slice=s_fam.max_slice())


def count_bg_words(ctx: FieldCtx, gs: list[Mat2], s_fam: SFamily,
                   a_set: PointSet, b_set: PointSet) -> CountReport:
    """Count solutions of u(a_k) g_k u(a_{k-1}) ... g_1 u(a_0) a = b over
    (a_0, ..., a_k) in S."""
    for g in gs:
        _require_nonborel(g)
    k = len(gs)
    assert s_fam.k == k, "family arity must match the number of maps"
    p = ctx.p
    b_elems = b_set.elements
    count = 0
    for tup in s_fam.tuples:
        m = u(ctx, tup[0])
        for j in range(k):
            m = u(ctx, tup[j + 1]) * gs[j] * m
        for a in a_set.elements:
            y = mobius(m, a)
            if y is not INF and y in b_elems:
                count += 1
    return CountReport.build(count, len(s_fam), len(a_set), len(b_set), p,
                             experiment="count_bg_words", k=k,
                             max_slice=s_fam.max_slice())


def count_union_structured(ctx: FieldCtx, g: Mat2, s_blocks, omega,
                           a_set: PointSet, b_set: PointSet) -> CountReport:
    """Count over S = (disjoint union of shifted blocks) + Omega.

    s_blocks: list of ((shift_alpha, shift_beta), SFamily with k=1);
    omega: explicit extra pairs. Blocks and Omega must be pairwise
    disjoint as pair sets.
    """
    _require_nonborel(g)
    p = ctx.p
    all_pairs = []
    for (da, db), fam in s_blocks:
        assert fam.k == 1
        all_pairs.extend(((alpha + da) % p, (beta + db) % p)
                         for alpha, beta in fam.tuples)
    all_pairs.extend((a % p, b % p) for a, b in omega)
    if len(set(all_pairs)) != len(all_pairs):
        raise OverlappingBlocks("blocks/Omega share pairs")
    b_elems = b_set.elements
    count = 0
    for alpha, beta in all_pairs:
        for a in a_set.elements:
            y = mobius(g, (alpha + a) % p)
            if y is not INF and (y - beta) % p in b_elems:
                count += 1
    return CountReport.build(count, len(all_pairs), len(a_set), len(b_set), p,
                             experiment="count_union_structured")


def build_h_set(ctx: FieldCtx, g: Mat2, s_fam: SFamily) -> list[Mat2]:
    """H = {u(-beta) * g * u(alpha) : (alpha, beta) in S}, in family order."""
    _require_nonborel(g)
    assert s_fam.k == 1
    return [u(ctx, -beta) * g * u(ctx, alpha) for alpha, beta in s_fam.tuples]


def _multiplicity_map(h_set: list[Mat2], l: int, budget: int = PRODUCT_BUDGET):
    """Multiplicity map r of the alternating product (H H^-1)^l."""
    if len(h_set) ** (2 * l) > budget:
        raise BudgetExceeded(f"|H|^(2l) = {len(h_set) ** (2 * l)} exceeds budget {budget}")
    hh_inv = Counter()
    for h in h_set:
        for hp in h_set:
            hh_inv[(h * hp.inv()).entries()] += 1
    ctx = h_set[0].ctx
    r = hh_inv
    for _ in range(l - 1):
        nxt = Counter()
        for x, cx in r.items():
            mx = Mat2(ctx, *x)
            for y, cy in hh_inv.items():
                nxt[(mx * Mat2(ctx, *y)).entries()] += cx * cy
        r = nxt
    return r


def product_multiplicity(ctx: FieldCtx, h_set: list[Mat2], l: int,
                         budget: int = PRODUCT_BUDGET):
    """(linf, l2) of the multiplicity function of (H H^-1)^l."""
    r = _multiplicity_map(h_set, l, budget)
    linf = max(r.values())
    l2 = sum(v * v for v in r.values())
    return linf, l2


@dataclass(frozen=True)
class BorelCoset:
    """The coset g1 * B * g2."""

    g1: Mat2
    g2: Mat2

    def contains(self, m: Mat2) -> bool:
        # m in g1 B g2  iff  g1^-1 m g2^-1 upper-triangular
        return is_borel(self.g1.inv() * m * self.g2.inv())


@dataclass(frozen=True)
class DihedralCoset:
    """The coset z * C_eps."""

    eps: int
    z: Mat2

    def contains(self, m: Mat2) -> bool:
        ctx = m.ctx
        w = self.z.inv() * m
        p = ctx.p
        if w.a != w.d or w.b != (self.eps * w.c) % p:
            return False
        return (w.a * w.a - self.eps * w.c * w.c) % p == 1


def subgroup_mass(ctx: FieldCtx, h_set: list[Mat2], l: int, coset,
                  budget: int = PRODUCT_BUDGET):
    """Exact mass of the (H H^-1)^l multiplicity map on a Borel or
    dihedral coset; returns (mass, implied_k = |H|^{2l} / mass)."""
    r = _multiplicity_map(h_set, l, budget)
    mass = sum(v for x, v in r.items() if coset.contains(Mat2(ctx, *x)))
    total = len(h_set) ** (2 * l)
    implied_k = Fraction(total, mass) if mass else None
    return mass, implied_k


def count_cont2_energy(ctx: FieldCtx, a_set: PointSet, b_set: PointSet,
                       c_set: PointSet) -> int:
    """Number of 6-tuples with 1/(a+b) + c = 1/(a'+b') + c'; tuples with
    a + b = 0 are excluded."""
    p = ctx.p
    values = Counter()
    for a in a_set.elements:
        for b in b_set.elements:
            s = (a + b) % p
            if s == 0:
                continue
            inv_s = ctx.inv(s)
            for c in c_set.elements:
                values[(inv_s + c) % p] += 1
    return sum(v * v for v in values.values())


def image_size_cont2(ctx: FieldCtx, a_set: PointSet) -> int:
    """|{1/(a+b) + c : a, b, c in A, a + b != 0}|."""
    p = ctx.p
    sums = {(a + b) % p for a in a_set.elements for b in a_set.elements}
    sums.discard(0)
    inv_sums = {ctx.inv(s) for s in sums}
    return len({(x + c) % p for x in inv_sums for c in a_set.elements})


def count_mobius_incidences(ctx: FieldCtx, a_set: PointSet, b_set: PointSet,
                            transforms: list[Mat2]) -> int:
    """I(A x B, T) = #{(a, b, t) : t(a) = b}."""
    for t in transforms:
        if t.det == 0:
            raise SingularMatrix(f"{t} is singular")
    b_elems = b_set.elements
    count = 0
    for t in transforms:
        for a in a_set.elements:
            y = mobius(t, a)
            if y is not INF and y in b_elems:
                count += 1
    return count


def count_fq_system(ctx: FieldCtx, fam_a, fam_b, fam_c, fam_d,
                    lam: FqElem) -> CountReport:
    """Exact count of (a+b)(c+d) = lambda over F_q = F_p[i], with the
    four factors drawn from subsets of F_p^2; main term |A||B||C||D|/p^2."""
    if ctx.p % 4 != 3:
        raise BadPrime("F_q system needs p = 3 mod 4")
    if lam.is_zero():
        raise ZeroLambda("lambda must be nonzero")
    p = ctx.p

    def encode(z):
        if isinstance(z, FqElem):
            return (z.re % p) * p + (z.im % p)
        x, y = z
        return (x % p) * p + (y % p)

    def sums(xs, ys):
        c = Counter()
        for zx in xs:
            ex = encode(zx)
            x1, x2 = divmod(ex, p)
            for zy in ys:
                ey = encode(zy)
                y1, y2 = divmod(ey, p)
                c[((x1 + y1) % p) * p + ((x2 + y2) % p)] += 1
        return c

    r_ab = sums(fam_a, fam_b)
    r_cd = sums(fam_c, fam_d)
    lam_fq = lam
    count = 0
    for code, mult in r_ab.items():
        re, im = divmod(code, p)
        z = FqElem(ctx, re, im)
        if z.is_zero():
            continue
        w = lam_fq * z.inv()
        count += mult * r_cd.get(w.re * p + w.im, 0)
    sizes = [len(fam_a), len(fam_b), len(fam_c), len(fam_d)]
    main = Fraction(sizes[0] * sizes[1] * sizes[2] * sizes[3], p * p)
    denom = math.sqrt(max(sizes[0] * sizes[1], 1)) * max(sizes[2] * sizes[3], 1)
    err = float(Fraction(count) - main) / denom if denom else 0.0
    report = CountReport(count, main, err,
                         {"experiment": "count_fq_system", "p": p,
                          "lambda": (lam.re, lam.im)})
    return report
