"""Exact arithmetic in F_p, the quadratic extension F_p[i] (p = 3 mod 4),
and the Gaussian integers Z[i].

Field elements are plain Python ints reduced into [0, p); all operations
flow through a FieldCtx, which caches inverse and quadratic-character
tables for small moduli.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BadPrime, ZeroInverse

# Above this modulus we fall back to extended Euclid / Euler criterion
# instead of materializing per-residue tables.
TABLE_THRESHOLD = 1 << 20


def is_prime(n: int) -> bool:
    """Deterministic trial division; desk-scale moduli only."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class FieldCtx:
    """A prime modulus with cached inverse and Legendre tables."""

    def __init__(self, p: int, table_threshold: int = TABLE_THRESHOLD):
        if not is_prime(p) or p == 2:
            raise BadPrime(f"modulus {p} is not an odd prime")
        self.p = p
        self._inv_table = None
        self._legendre_table = None
        if p <= table_threshold:
            self._build_tables()

    def _build_tables(self):
        p = self.p
        inv = [0] * p
        inv[1] = 1
        for x in range(2, p):
            # inv[x] = -(p // x) * inv[p % x] mod p, the standard recurrence
            inv[x] = (p - (p // x) * inv[p % x]) % p
        self._inv_table = inv
        leg = [-1] * p
        leg[0] = 0
        for x in range(1, p):
            leg[(x * x) % p] = 1
        self._legendre_table = leg

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroInverse(f"0 has no inverse mod {self.p}")
        if self._inv_table is not None:
            return self._inv_table[x]
        return pow(x, -1, self.p)

    def legendre(self, x: int) -> int:
        x %= self.p
        if self._legendre_table is not None:
            return self._legendre_table[x]
        if x == 0:
            return 0
        e = pow(x, (self.p - 1) // 2, self.p)
        return 1 if e == 1 else -1

    def is_square(self, x: int) -> bool:
        return self.legendre(x) == 1

    def residues(self) -> list[int]:
        """Quadratic residues R = {x^2 : x in F_p*}, sorted."""
        return sorted({(x * x) % self.p for x in range(1, self.p)})

    @property
    def primitive_root(self) -> int:
        return self._find_primitive_root()

    @lru_cache(maxsize=None)
    def _find_primitive_root(self) -> int:
        p = self.p
        phi = p - 1
        factors = _prime_factors(phi)
        for g in range(2, p):
            if all(pow(g, phi // q, p) != 1 for q in factors):
                return g
        raise AssertionError("no primitive root found")  # unreachable for prime p

    def nonresidue(self) -> int:
        """Smallest quadratic non-residue."""
        for x in range(2, self.p):
            if self.legendre(x) == -1:
                return x
        raise AssertionError("no non-residue")  # unreachable for odd prime

    def __repr__(self):
        return f"FieldCtx(p={self.p})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.p == other.p

    def __hash__(self):
        return hash(("FieldCtx", self.p))


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FqElem:
    """Element re + i*im of F_p[i], i^2 = -1; requires p = 3 mod 4."""

    ctx: FieldCtx
    re: int
    im: int

    def __post_init__(self):
        if self.ctx.p % 4 != 3:
            raise BadPrime(f"F_p[i] needs p = 3 mod 4, got p={self.ctx.p}")
        object.__setattr__(self, "re", self.re % self.ctx.p)
        object.__setattr__(self, "im", self.im % self.ctx.p)

    def __add__(self, other: "FqElem") -> "FqElem":
        p = self.ctx.p
        return FqElem(self.ctx, (self.re + other.re) % p, (self.im + other.im) % p)

    def __sub__(self, other: "FqElem") -> "FqElem":
        p = self.ctx.p
        return FqElem(self.ctx, (self.re - other.re) % p, (self.im - other.im) % p)

    def __neg__(self) -> "FqElem":
        return FqElem(self.ctx, -self.re, -self.im)

    def __mul__(self, other: "FqElem") -> "FqElem":
        p = self.ctx.p
        return FqElem(
            self.ctx,
            (self.re * other.re - self.im * other.im) % p,
            (self.re * other.im + self.im * other.re) % p,
        )

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def norm(self) -> int:
        """Norm into F_p: re^2 + im^2."""
        return (self.re * self.re + self.im * self.im) % self.ctx.p

    def inv(self) -> "FqElem":
        if self.is_zero():
            raise ZeroInverse("0 has no inverse in F_q")
        n = self.ctx.inv(self.norm())
        p = self.ctx.p
        return FqElem(self.ctx, (self.re * n) % p, (-self.im * n) % p)

    def __repr__(self):
        return f"({self.re}+{self.im}i mod {self.ctx.p})"


def fq_mul(a: FqElem, b: FqElem) -> FqElem:
    return a * b


def fq_inv(a: FqElem) -> FqElem:
    return a.inv()


@dataclass(frozen=True)
class GaussInt:
    """Exact Gaussian integer re + i*im."""

    re: int
    im: int

    def __add__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other) -> "GaussInt":
        if isinstance(other, int):
            return GaussInt(self.re * other, self.im * other)
        return GaussInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def norm2(self) -> int:
        """Squared absolute value |z|^2, exact."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __repr__(self):
        return f"GaussInt({self.re}, {self.im})"


GI_ZERO = GaussInt(0, 0)
GI_ONE = GaussInt(1, 0)
