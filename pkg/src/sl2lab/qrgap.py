"""Quadratic-residue gap statistics, ratio-set cardinality counts, and the
residue-run division-inclusion checks.

Gap convention: d(p) is the maximal cyclic gap between consecutive
quadratic residues, i.e. one more than the longest (cyclic) stretch of
F_p free of residues.  The companion run statistic is the longest stretch
of consecutive residues; the inclusion checks use the run, which is what
the division argument actually manipulates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import HypothesisViolated
from .field import FieldCtx


@dataclass(frozen=True)
class GapReport:
    p: int
    d: int
    ratio: float  # d / (p^(1/4) * log p)
    location: int  # residue starting the extremal gap

    @classmethod
    def build(cls, p: int, d: int, location: int) -> "GapReport":
        return cls(p, d, d / (p ** 0.25 * math.log(p)), location)


@njit(cache=True)
def _mark_residues(p, buf):
    """Mark buf[s] = 1 for every quadratic residue s = x^2 mod p.

    The squares are generated incrementally (no division); two interleaved
    index chains hide the serial dependence of the running square.
    """
    for i in range(p):
        buf[i] = 0
    half = (p - 1) // 2
    m = half // 2
    s1 = 0
    x2 = half
    s2 = (x2 * x2) % p
    for x1 in range(1, m + 1):
        s1 += (x1 << 1) - 1
        if s1 >= p:
            s1 -= p
        buf[s1] = 1
        buf[s2] = 1
        s2 -= (x2 << 1) - 1
        if s2 < 0:
            s2 += p
        x2 -= 1
    while x2 > m:
        buf[s2] = 1
        s2 -= (x2 << 1) - 1
        if s2 < 0:
            s2 += p
        x2 -= 1


@njit(cache=True)
def _max_zero_run(p, buf, buf64):
    """(max cyclic zero run, position of last mark before it).

    The wrap run through 0 seeds the best (1 is always marked).  Interior
    runs of length >= 15 necessarily cover an aligned all-zero 8-byte
    chunk, so one sequential pass over the uint64 view finds them; only
    when nothing that long exists does a stride-probing byte pass run
    (any run beating the current best must hit a probe at stride best+1).
    """
    last = p - 1
    while buf[last] == 0:
        last -= 1
    best = p - last  # positions last+1..p-1 and 0 are free of marks
    best_pos = last
    hi_end = 0
    for k in range(last >> 3):
        if buf64[k] == 0:
            base = k << 3
            if base < hi_end:
                continue  # inside an already-expanded run
            lo = base - 1
            while buf[lo] == 0:
                lo -= 1
            hi = base + 8
            while buf[hi] == 0:
                hi += 1
            hi_end = hi
            run = hi - lo - 1
            if run > best:
                best = run
                best_pos = lo
    if best < 15:
        pos = 1 + (best + 1)
        while pos < last:
            if buf[pos] == 0:
                lo = pos - 1
                while buf[lo] == 0:
                    lo -= 1
                hi = pos + 1
                while buf[hi] == 0:
                    hi += 1
                run = hi - lo - 1
                if run > best:
                    best = run
                    best_pos = lo
                pos = hi + best + 1
            else:
                pos += best + 1
    return best, best_pos


@njit(cache=True)
def _gap_for_prime(p, buf, buf64):
    _mark_residues(p, buf)
    return _max_zero_run(p, buf, buf64)


def qr_gap(ctx: FieldCtx) -> GapReport:
    n = (ctx.p + 7) // 8 * 8
    buf = np.zeros(n, dtype=np.uint8)
    best, pos = _gap_for_prime(ctx.p, buf, buf.view(np.uint64))
    return GapReport.build(ctx.p, best + 1, pos)


def _sieve_primes(limit: int) -> np.ndarray:
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for q in range(2, int(limit ** 0.5) + 1):
        if is_p[q]:
            is_p[q * q:: q] = False
    return np.nonzero(is_p)[0]


@njit(cache=True)
def _scan_kernel(primes, buf, buf64, out_d):
    for i in range(primes.shape[0]):
        p = primes[i]
        best, _ = _gap_for_prime(p, buf, buf64)
        out_d[i] = best + 1


def scan_primes(limit: int, lo: int = 3):
    """d(p) for every odd prime in [lo, limit].

    Returns (primes, d values, running-max record rows (p, d, ratio)).
    """
    primes = _sieve_primes(limit)
    primes = primes[primes >= max(lo, 3)].astype(np.int64)
    buf = np.zeros((limit + 8) // 8 * 8, dtype=np.uint8)
    out_d = np.zeros(primes.shape[0], dtype=np.int64)
    _scan_kernel(primes, buf, buf.view(np.uint64), out_d)
    records = []
    best_d = 0
    for p, d in zip(primes.tolist(), out_d.tolist()):
        # gap champions: the running max of d (the ratio's own running max
        # is pinned at p=3, where log p is tiny)
        if d > best_d:
            best_d = d
            records.append((p, d, d / (p ** 0.25 * math.log(p))))
    return primes, out_d, records


def residue_run(ctx: FieldCtx) -> tuple[int, int]:
    """(start a, length L) of the longest cyclic run of consecutive
    quadratic residues; ties go to the smallest start."""
    p = ctx.p
    flags = [ctx.legendre(x) == 1 for x in range(p)]
    doubled = flags + flags  # cyclic runs without wrap bookkeeping
    best_len = 0
    best_start = 0
    cur = 0
    for i in range(2 * p):
        if doubled[i]:
            cur += 1
        else:
            cur = 0
        if cur > best_len:
            best_len = min(cur, p)
            best_start = (i - cur + 1) % p
    return best_start, best_len


@dataclass
class InclusionReport:
    p: int
    run_start: int
    run_length: int
    violations: dict[int, int]  # k -> number of violating ratios

    @property
    def ok(self) -> bool:
        return all(v == 0 for v in self.violations.values())


def residue_run_inclusion_check(ctx: FieldCtx, ks=(1, 2, 3)) -> InclusionReport:
    """Verify P0^(1/2k) / Pa^(1/2) lies in (R-1) cap (2^-1 R - 2^-1) cap
    ... cap (k^-1 R - k^-1), where Pa = a + {0..L-1} is the longest run of
    consecutive residues; x in j^-1 R - j^-1 iff j*x + 1 is a residue."""
    p = ctx.p
    a, length = residue_run(ctx)
    half = list(range((length - 1) // 2 + 1))  # P0^(1/2)
    violations = {}
    for k in ks:
        top = list(range((length - 1) // (2 * k) + 1))  # P0^(1/2k)
        bad = 0
        for y in top:
            for x0 in half:
                z = (a + x0) % p
                if z == 0:
                    continue
                r = (y * ctx.inv(z)) % p
                for j in range(1, k + 1):
                    if ctx.legendre((j * r + 1) % p) == -1:
                        bad += 1
                        break
        violations[k] = bad
    return InclusionReport(p, a, length, violations)


def ratio_set_count(ctx: FieldCtx, a: int, h: int, h_star: int) -> tuple[int, float]:
    """|{ y/(a+x) : x in [H], y in [H*] }| and the benchmark H_* * H."""
    p = ctx.p
    if not (1 <= h_star <= h):
        raise HypothesisViolated(f"need 1 <= H_* <= H, got H_*={h_star}, H={h}")
    if a < 1 or a + h >= p:
        raise HypothesisViolated(f"need a >= 1 and a + H < p, got a={a}, H={h}, p={p}")
    if 16 * h_star * h_star * h >= p:
        raise HypothesisViolated(
            f"need 16*H_*^2*H < p, got {16 * h_star * h_star * h} >= {p}")
    ratios = set()
    for x in range(1, h + 1):
        inv_den = ctx.inv((a + x) % p)
        for y in range(1, h_star + 1):
            ratios.add((y * inv_den) % p)
    return len(ratios), float(h_star * h)
