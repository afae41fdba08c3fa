"""Multiplicative subgroups of F_p*, shifted intersections
(alpha_1 Gamma + beta_1) cap ... cap (alpha_k Gamma + beta_k), the exact
Mobius transport identity, the Weil intersection bound check, and the
constructive shrinking iteration.

Shift-set convention: for a plain shift set T, Gamma_T denotes
Gamma cap (Gamma - s_1) cap ... cap (Gamma - s_k) -- the subgroup itself
is always an implicit component.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (BadOrder, BorelElement, DuplicateShifts,
                     EmptyIntersection, PoleMismatch, ShiftNotInSubgroup,
                     SymmetryRequired, ZeroShift)
from .field import FieldCtx
from .sl2 import INF, Mat2, mobius

MAX_P = 1 << 24


@dataclass(frozen=True)
class Subgroup:
    """The unique multiplicative subgroup of F_p* of order d | p-1."""

    ctx: FieldCtx
    order: int
    generator: int
    elements: frozenset[int]

    @property
    def symmetric(self) -> bool:
        """Whether Gamma = -Gamma, i.e. -1 is a member."""
        return (self.ctx.p - 1) in self.elements

    def __contains__(self, x: int) -> bool:
        return x % self.ctx.p in self.elements

    def __len__(self) -> int:
        return self.order

    def coset_min(self, alpha: int) -> int:
        """Smallest representative of the coset alpha * Gamma."""
        p = self.ctx.p
        return min((alpha * g) % p for g in self.elements)


def enumerate_subgroup(ctx: FieldCtx, d: int) -> Subgroup:
    if ctx.p > MAX_P:
        raise ValueError(f"p capped at {MAX_P} for subgroup work")
    if d < 1 or (ctx.p - 1) % d != 0:
        raise BadOrder(f"order {d} does not divide p-1 = {ctx.p - 1}")
    g = pow(ctx.primitive_root, (ctx.p - 1) // d, ctx.p)
    elems = set()
    x = 1
    for _ in range(d):
        elems.add(x)
        x = (x * g) % ctx.p
    assert len(elems) == d
    return Subgroup(ctx, d, g, frozenset(elems))


@dataclass(frozen=True)
class ShiftSpec:
    """Coefficients of (alpha_1 Gamma + beta_1) cap ... (all alpha_j != 0)."""

    alphas: tuple[int, ...]
    betas: tuple[int, ...]

    def __post_init__(self):
        if len(self.alphas) != len(self.betas) or not self.alphas:
            raise ValueError("alphas and betas must be equal-length, nonempty")
        if any(a == 0 for a in self.alphas):
            raise ValueError("alpha coefficients must be nonzero")

    @property
    def k(self) -> int:
        return len(self.alphas)

    @classmethod
    def from_shifts(cls, ctx: FieldCtx, shifts) -> "ShiftSpec":
        """Gamma cap (Gamma - s_1) cap ... as a spec (alpha = 1 throughout)."""
        betas = (0,) + tuple((-s) % ctx.p for s in shifts)
        return cls((1,) * len(betas), betas)


def shifted_intersection(ctx: FieldCtx, gamma: Subgroup, spec: ShiftSpec) -> set[int]:
    p = ctx.p
    out = {(spec.alphas[0] * g + spec.betas[0]) % p for g in gamma.elements}
    for a, b in zip(spec.alphas[1:], spec.betas[1:]):
        out &= {(a * g + b) % p for g in gamma.elements}
        if not out:
            break
    return out


def gamma_shifts(ctx: FieldCtx, gamma: Subgroup, shifts) -> set[int]:
    """Gamma_T = Gamma cap (Gamma - s_1) cap ... for a plain shift set."""
    out = set(gamma.elements)
    p = ctx.p
    for s in shifts:
        out &= {(g - s) % p for g in gamma.elements}
        if not out:
            break
    return out


def transport(ctx: FieldCtx, g: Mat2, gamma: Subgroup, spec: ShiftSpec,
              debug: bool = False) -> ShiftSpec:
    """Push a shifted intersection through a Mobius map: the exact identity

        g . ((a_1 G + b_1) cap ...) = (c_1 G + g(inf)) cap (c_2 G + g(b_2)) ...

    with c_1 = -det(g)/(c^2 a_1) and c_j = a_j det(g)/(a_1 c (c b_j + d)),
    valid when the first component's shift b_1 is the pole g^{-1}(inf).
    """
    if g.c == 0:
        raise BorelElement(f"{g} lies in B; transport needs c != 0")
    if spec.k < 2:
        raise ValueError("transport needs k >= 2 components")
    p = ctx.p
    pole = (-g.d * ctx.inv(g.c)) % p
    if spec.betas[0] != pole:
        raise PoleMismatch(
            f"first shift {spec.betas[0]} != g^-1(inf) = {pole}")
    ci = ctx.inv(g.c)
    det = g.det
    new_alphas = [(-det * ci * ci * ctx.inv(spec.alphas[0])) % p]
    new_betas = [(g.a * ci) % p]  # g(inf)
    a1_inv = ctx.inv(spec.alphas[0])
    for a, b in zip(spec.alphas[1:], spec.betas[1:]):
        den = (g.c * b + g.d) % p
        assert den != 0, "secondary component hits the pole"
        new_alphas.append((a * det * a1_inv * ci * ctx.inv(den)) % p)
        nb = mobius(g, b)
        assert nb is not INF
        new_betas.append(nb)
    assert all(a != 0 for a in new_alphas)
    out = ShiftSpec(tuple(new_alphas), tuple(new_betas))
    if debug:
        src = shifted_intersection(ctx, gamma, spec)
        image = {mobius(g, x) for x in src}
        assert INF not in image, "pole inside the source set"
        assert image == shifted_intersection(ctx, gamma, out), \
            "transport identity violated"
    return out


def inverse_identity_check(ctx: FieldCtx, gamma: Subgroup, shifts) -> bool:
    """Whether {x^-1 : x in Gamma_{s_1..s_k}} = Gamma_{s_1^-1..s_k^-1};
    expected always true when every s_j lies in Gamma."""
    for s in shifts:
        if s % ctx.p not in gamma.elements:
            raise ShiftNotInSubgroup(f"shift {s} outside the subgroup")
    src = gamma_shifts(ctx, gamma, shifts)
    inv_src = {ctx.inv(x) for x in src}
    tgt = gamma_shifts(ctx, gamma, [ctx.inv(s % ctx.p) for s in shifts])
    return inv_src == tgt


@lru_cache(maxsize=64)
def _residue_indicator(p: int) -> "np.ndarray":
    ind = np.zeros(p, dtype=bool)
    x = np.arange(1, p, dtype=np.int64)
    ind[(x * x) % p] = True
    return ind


def weil_bound_check(ctx: FieldCtx, shifts) -> tuple[int, float, bool]:
    """|R cap (R-s_1) cap ... cap (R-s_k)| against p/2^(k+1) + k*sqrt(p).

    Vectorized over the residue indicator (the indicator of R - s is the
    indicator of R rolled left by s), so sweeping many tuples is cheap.
    """
    shifts = [s % ctx.p for s in shifts]
    if len(set(shifts)) != len(shifts) or 0 in shifts:
        raise DuplicateShifts("shifts must be pairwise distinct and nonzero")
    k = len(shifts)
    ind = _residue_indicator(ctx.p)
    acc = ind.copy()
    for s in shifts:
        acc &= np.roll(ind, -s)
    size = int(acc.sum())
    bound = ctx.p / 2 ** (k + 1) + k * math.sqrt(ctx.p)
    return size, bound, size <= bound


def weyl_conjugate(ctx: FieldCtx, x: int) -> Mat2:
    """w_x = w^-1 u_{1/x} w = (1, 0 | -1/x, 1)."""
    x %= ctx.p
    if x == 0:
        raise ZeroShift("w_x needs x != 0")
    return Mat2(ctx, 1, 0, -ctx.inv(x), 1)


def shrink_step(ctx: FieldCtx, x_set: set[int], g: Mat2, s: int):
    """The two intersection ratios |X cap (X+s)|/|X| and
    |g(X) cap (g(X) + s^-1)|/|X|; the pole image is dropped from g(X)."""
    s %= ctx.p
    if s == 0:
        raise ZeroShift("shift must be nonzero")
    if not x_set:
        return 0.0, 0.0
    p = ctx.p
    if len(x_set) > 3 * p // 4:
        warnings.warn("|X| > 3p/4: outside the guaranteed-shrink regime",
                      stacklevel=2)
    ratio_t = len(x_set & {(v + s) % p for v in x_set}) / len(x_set)
    y = {mobius(g, v) for v in x_set}
    y.discard(INF)
    si = ctx.inv(s)
    ratio_g = len(y & {(v + si) % p for v in y}) / len(x_set)
    return ratio_t, ratio_g


@dataclass
class ShrinkStep:
    index: int
    move: str  # "translate" or "weyl"
    x: int
    size: int
    ratio: float
    t_size: int
    t_bound: int


@dataclass
class ShrinkTrace:
    p: int
    gamma_order: int
    s_shifts: list[int]
    initial_size: int
    steps: list[ShrinkStep] = field(default_factory=list)
    final_shifts: list[int] = field(default_factory=list)
    final_size: int = 0
    stalled: bool = False

    @property
    def ratio_product(self) -> float:
        out = 1.0
        for st in self.steps:
            out *= st.ratio
        return out

    def to_json_obj(self):
        return {
            "p": self.p,
            "gamma_order": self.gamma_order,
            "s_shifts": sorted(self.s_shifts),
            "initial_size": self.initial_size,
            "steps": [{"step": s.index, "move": s.move, "x": s.x,
                       "size": s.size, "ratio": s.ratio,
                       "t_size": s.t_size, "t_bound": s.t_bound}
                      for s in self.steps],
            "final_shifts": sorted(self.final_shifts),
            "final_size": self.final_size,
            "ratio_product": self.ratio_product,
            "stalled": self.stalled,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=False)


def constructive_shrink(ctx: FieldCtx, gamma: Subgroup, s_shifts, n: int,
                        require_symmetry: bool = True) -> ShrinkTrace:
    """Iteratively shrink Gamma_S by translate / Weyl-conjugate moves.

    State is a plain shift set split into a word pool (at most doubled per
    step) and one marker per step, so |T_i| <= 2^i |S| + i holds by
    construction.  At step i the candidate x runs over the current set in
    increasing order; the move realizing the smaller next set is applied,
    and a candidate making no progress is skipped.  All added shifts are
    genuine constraints of the intended intersections X cap (X - x) and
    X cap w_x(X), so sizes are exact and non-increasing; the construction
    tracks the coarser of the two candidate sets at every step.
    """
    if not gamma.symmetric:
        # The shrink guarantee is proved for symmetric Gamma; the moves
        # themselves are exact set computations either way.
        if require_symmetry:
            raise SymmetryRequired("need Gamma = -Gamma (-1 in Gamma)")
        warnings.warn("Gamma is not symmetric: sizes remain exact but the "
                      "shrink guarantee is not covered", stacklevel=2)
    p = ctx.p
    pool = {s % p for s in s_shifts}
    if 0 in pool or len(pool) != len(list(s_shifts)):
        raise ValueError("initial shifts must be distinct and nonzero")
    markers: set[int] = set()
    current = gamma_shifts(ctx, gamma, pool)
    if not current:
        raise EmptyIntersection("Gamma_S is empty; nothing to shrink")
    trace = ShrinkTrace(p=p, gamma_order=gamma.order,
                        s_shifts=sorted(pool), initial_size=len(current))
    s_size = len(pool)
    for i in range(1, n + 1):
        if len(current) <= 1:
            break
        chosen = None
        for x in sorted(current):
            # translate: intersect with (X - x); tracked shifts double
            pool_t = pool | {(s + x) % p for s in pool}
            shifts_t = pool_t | markers | {x}
            cand_t = gamma_shifts(ctx, gamma, shifts_t)
            # weyl conjugate w_x: pool shift s maps to s*x/(x+s)
            pool_w = pool | {(s * x * ctx.inv((x + s) % p)) % p for s in pool}
            shifts_w = pool_w | markers | {x}
            cand_w = gamma_shifts(ctx, gamma, shifts_w)
            if len(cand_t) >= len(current) and len(cand_w) >= len(current):
                continue
            if len(cand_t) <= len(cand_w):
                chosen = ("translate", x, pool_t, cand_t)
            else:
                chosen = ("weyl", x, pool_w, cand_w)
            break
        if chosen is None:
            trace.stalled = True
            break
        move, x, pool, new_set = chosen
        markers = markers | {x}
        ratio = len(new_set) / len(current)
        current = new_set
        t_size = len(pool | markers)
        t_bound = 2 ** i * s_size + i
        assert t_size <= t_bound, "shift accounting exceeded"
        trace.steps.append(ShrinkStep(i, move, x, len(current), ratio,
                                      t_size, t_bound))
        if not current:
            break
    trace.final_shifts = sorted(pool | markers)
    trace.final_size = len(current)
    return trace


@dataclass
class ShiftScanReport:
    ratio_x: float
    ratio_gx: float
    threshold: float
    alternative: str  # which set satisfied the <= 1/2 + eps bound


def shift_family_scan(ctx: FieldCtx, x_set: set[int], g: Mat2, n: int,
                      eps: float) -> ShiftScanReport:
    """Iterated even-shift intersection X cap (X+2) cap ... cap (X+2N) for
    X and for Y = g(X); reports which of the two drops to (1/2 + eps)|X|."""
    if n < 1:
        raise ValueError("N must be >= 1")
    if not 0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    p = ctx.p

    def iterated(base):
        out = set(base)
        for j in range(1, n + 1):
            out &= {(v + 2 * j) % p for v in base}
        return out

    denom = max(len(x_set), 1)
    ratio_x = len(iterated(x_set)) / denom
    y = {mobius(g, v) for v in x_set}
    y.discard(INF)
    ratio_gx = len(iterated(y)) / denom
    threshold = 0.5 + eps
    if ratio_x <= threshold:
        alternative = "x"
    elif ratio_gx <= threshold:
        alternative = "gx"
    else:
        alternative = "neither"
    return ShiftScanReport(ratio_x, ratio_gx, threshold, alternative)
