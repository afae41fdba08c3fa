"""The lazy Mobius Markov chain on P^1(F_p) with exact distribution
evolution and Monte Carlo simulation.

States are indexed 0..p-1 for finite points and p for infinity; the
update x -> g(x) + eps uses the convention INF + eps = INF, so every
branch of the chain is a bijection of P^1 and the uniform law on P^1 is
exactly stationary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BorelElement, ZeroShift
from .field import FieldCtx
from .sl2 import INF, Mat2, mobius

HALF_LAZY = "half-lazy"
THREE_POINT = "three-point"


@dataclass
class ChainSpec:
    ctx: FieldCtx
    g: Mat2
    gamma: int
    laziness: str = HALF_LAZY
    maps: list[np.ndarray] = field(init=False, repr=False)

    def __post_init__(self):
        self.gamma %= self.ctx.p
        if self.gamma == 0:
            raise ZeroShift("gamma must be nonzero")
        if self.g.c == 0:
            raise BorelElement("chain map g must lie outside B")
        if self.laziness not in (HALF_LAZY, THREE_POINT):
            raise ValueError(f"unknown laziness {self.laziness!r}")
        p = self.ctx.p
        plus = np.empty(p + 1, dtype=np.int64)
        minus = np.empty(p + 1, dtype=np.int64)
        for i in range(p + 1):
            x = i if i < p else INF
            y = mobius(self.g, x)
            if y is INF:
                plus[i] = minus[i] = p
            else:
                plus[i] = (y + self.gamma) % p
                minus[i] = (y - self.gamma) % p
        self.maps = [plus, minus]

    @property
    def n_states(self) -> int:
        return self.ctx.p + 1


def point_mass(spec: ChainSpec, state: int, exact: bool = True):
    n = spec.n_states
    if exact:
        d = [Fraction(0)] * n
        d[state] = Fraction(1)
        return d
    d = np.zeros(n)
    d[state] = 1.0
    return d


def uniform_p1(spec: ChainSpec, exact: bool = True):
    n = spec.n_states
    if exact:
        return [Fraction(1, n)] * n
    return np.full(n, 1.0 / n)


def _pushforward(d, perm: np.ndarray, exact: bool):
    n = len(d)
    if exact:
        out = [Fraction(0)] * n
        for i in range(n):
            out[perm[i]] += d[i]
        return out
    out = np.zeros(n)
    np.add.at(out, perm, d)
    return out


def step_distribution(spec: ChainSpec, d):
    """One exact push-forward step of the chain."""
    exact = not isinstance(d, np.ndarray)
    plus = _pushforward(d, spec.maps[0], exact)
    minus = _pushforward(d, spec.maps[1], exact)
    if spec.laziness == HALF_LAZY:
        if exact:
            return [Fraction(1, 2) * a + Fraction(1, 4) * (b + c)
                    for a, b, c in zip(d, plus, minus)]
        return 0.5 * d + 0.25 * (plus + minus)
    # three-point: eps uniform on {0, gamma, -gamma}; the eps = 0 branch
    # still applies g
    zero = _pushforward(d, _g_perm(spec), exact)
    if exact:
        return [Fraction(1, 3) * (a + b + c) for a, b, c in zip(zero, plus, minus)]
    return (zero + plus + minus) / 3.0


def _g_perm(spec: ChainSpec) -> np.ndarray:
    p = spec.ctx.p
    perm = np.empty(p + 1, dtype=np.int64)
    for i in range(p + 1):
        y = mobius(spec.g, i if i < p else INF)
        perm[i] = p if y is INF else y
    return perm


def tv_distance(d, reference: str = "p1", p: int | None = None) -> float:
    """Total variation against uniform on P^1 ('p1') or on F_p* ('fpstar').

    States outside the reference support contribute their full mass.
    """
    n = len(d)
    if p is None:
        p = n - 1
    if reference == "p1":
        u = Fraction(1, n)
        return float(sum(abs(Fraction(x) - u) for x in d) / 2)
    if reference == "fpstar":
        u = Fraction(1, p - 1)
        tot = sum(abs(Fraction(d[i]) - u) for i in range(1, p))
        tot += Fraction(d[0]) + Fraction(d[p])
        return float(tot / 2)
    raise ValueError(f"unknown reference {reference!r}")


def mix_profile(spec: ChainSpec, n_max: int, start: int = 1,
                exact: bool | None = None):
    """Exact evolution from a point mass; returns rows (n, tv_p1,
    tv_fpstar) for n = 0..n_max and the fitted log-tv decay slope."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if exact is None:
        exact = spec.ctx.p <= 1000
    d = point_mass(spec, start, exact=exact)
    rows = []
    for n in range(n_max + 1):
        rows.append((n, tv_distance(d, "p1", spec.ctx.p),
                     tv_distance(d, "fpstar", spec.ctx.p)))
        if n < n_max:
            d = step_distribution(spec, d)
    slope = decay_slope(rows)
    return rows, slope


def decay_slope(rows) -> float:
    """Least-squares slope of log tv_p1 against n over the rows where the
    distance is still meaningfully positive."""
    ns = [n for n, tv, _ in rows if tv > 1e-12]
    ys = [np.log(tv) for n, tv, _ in rows if tv > 1e-12]
    if len(ns) < 2:
        return 0.0
    return float(np.polyfit(ns, ys, 1)[0])


def simulate(spec: ChainSpec, n: int, trials: int, seed: int = 0) -> np.ndarray:
    """Empirical distribution over states from seeded Monte Carlo trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    p = spec.ctx.p
    state = np.full(trials, 1, dtype=np.int64)
    plus, minus = spec.maps
    if spec.laziness == HALF_LAZY:
        for _ in range(n):
            r = rng.integers(0, 4, size=trials)
            moved_plus = r == 0
            moved_minus = r == 1
            state = np.where(moved_plus, plus[state],
                             np.where(moved_minus, minus[state], state))
    else:
        zero = _g_perm(spec)
        for _ in range(n):
            r = rng.integers(0, 3, size=trials)
            state = np.where(r == 0, zero[state],
                             np.where(r == 1, plus[state], minus[state]))
    counts = np.bincount(state, minlength=p + 1)
    return counts / trials
