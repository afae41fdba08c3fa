"""2x2 matrix groups over F_p, the projective line P^1(F_p) and Mobius
actions, Bruhat decomposition, and the standard named elements u_s, w,
d_lambda.

A point of P^1(F_p) is either an int in [0, p) or the module-level
sentinel INF.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadEps, BorelElement, SingularMatrix
from .field import FieldCtx


class _Infinity:
    """The point at infinity of P^1(F_p)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"


INF = _Infinity()


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix (a b | c d) over F_p with cached determinant."""

    ctx: FieldCtx
    a: int
    b: int
    c: int
    d: int
    det: int = None  # type: ignore[assignment]

    def __post_init__(self):
        p = self.ctx.p
        object.__setattr__(self, "a", self.a % p)
        object.__setattr__(self, "b", self.b % p)
        object.__setattr__(self, "c", self.c % p)
        object.__setattr__(self, "d", self.d % p)
        det = (self.a * self.d - self.b * self.c) % p
        if self.det is not None:
            assert det == self.det % p, "cached determinant disagrees"
        object.__setattr__(self, "det", det)

    def __mul__(self, other: "Mat2") -> "Mat2":
        p = self.ctx.p
        return Mat2(
            self.ctx,
            (self.a * other.a + self.b * other.c) % p,
            (self.a * other.b + self.b * other.d) % p,
            (self.c * other.a + self.d * other.c) % p,
            (self.c * other.b + self.d * other.d) % p,
        )

    def inv(self) -> "Mat2":
        if self.det == 0:
            raise SingularMatrix(f"{self} is singular")
        di = self.ctx.inv(self.det)
        return Mat2(self.ctx, self.d * di, -self.b * di, -self.c * di, self.a * di)

    def transpose(self) -> "Mat2":
        return Mat2(self.ctx, self.a, self.c, self.b, self.d)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.d) == (1, 0, 0, 1)

    def __repr__(self):
        return f"({self.a},{self.b}|{self.c},{self.d})"


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    return x * y


def mat_inv(x: Mat2) -> Mat2:
    return x.inv()


def mat_transpose(x: Mat2) -> Mat2:
    return x.transpose()


def conjugate(a: Mat2, g: Mat2) -> Mat2:
    """a^g = g^-1 a g."""
    return g.inv() * a * g


def identity(ctx: FieldCtx) -> Mat2:
    return Mat2(ctx, 1, 0, 0, 1)


def u(ctx: FieldCtx, s: int) -> Mat2:
    """Upper unipotent (1 s | 0 1), the translation x -> x + s."""
    return Mat2(ctx, 1, s, 0, 1)


def u_lower(ctx: FieldCtx, s: int) -> Mat2:
    """Lower unipotent (1 0 | s 1), the transpose of u(s)."""
    return Mat2(ctx, 1, 0, s, 1)


def weyl(ctx: FieldCtx) -> Mat2:
    """w = (0 -1 | 1 0), acting as x -> -1/x."""
    return Mat2(ctx, 0, -1, 1, 0)


def diag(ctx: FieldCtx, lam: int) -> Mat2:
    """d_lambda = (lambda 0 | 0 lambda^-1)."""
    lam %= ctx.p
    if lam == 0:
        raise SingularMatrix("d_lambda needs lambda != 0")
    return Mat2(ctx, lam, 0, 0, ctx.inv(lam))


def mobius(g: Mat2, x) -> "int | _Infinity":
    """Mobius action x -> (ax+b)/(cx+d) on P^1(F_p); INF is a value."""
    if g.det == 0:
        raise SingularMatrix("Mobius action needs an invertible matrix")
    ctx = g.ctx
    p = ctx.p
    if x is INF:
        if g.c == 0:
            return INF
        return (g.a * ctx.inv(g.c)) % p
    den = (g.c * x + g.d) % p
    if den == 0:
        return INF
    return ((g.a * x + g.b) * ctx.inv(den)) % p


def proj_points(ctx: FieldCtx):
    """All of P^1(F_p): 0, 1, ..., p-1, INF."""
    yield from range(ctx.p)
    yield INF


def is_borel(g: Mat2) -> bool:
    """Membership in the upper-triangular subgroup B."""
    return g.c == 0


@dataclass(frozen=True)
class BruhatForm:
    """g = u(t1) * w * d(lam) * u(t2) for g outside B."""

    t1: int
    lam: int
    t2: int

    def recompose(self, ctx: FieldCtx) -> Mat2:
        return u(ctx, self.t1) * weyl(ctx) * diag(ctx, self.lam) * u(ctx, self.t2)


def bruhat(g: Mat2) -> BruhatForm:
    """Bruhat decomposition of g with c != 0: t1 = a/c, lam = c, t2 = d/c.

    Valid for det(g) = 1 (SL_2 members); recomposition is exact.
    """
    if g.c == 0:
        raise BorelElement(f"{g} lies in B, no Bruhat cell decomposition")
    ctx = g.ctx
    ci = ctx.inv(g.c)
    return BruhatForm(t1=(g.a * ci) % ctx.p, lam=g.c, t2=(g.d * ci) % ctx.p)


def in_dihedral(g: Mat2, eps: int) -> bool:
    """Membership in C_eps = {(u, eps*v | v, u) : u^2 - eps*v^2 = 1}."""
    ctx = g.ctx
    eps %= ctx.p
    if ctx.legendre(eps) != -1:
        raise BadEps(f"eps={eps} must be a quadratic non-residue mod {ctx.p}")
    p = ctx.p
    if g.a != g.d or g.b != (eps * g.c) % p:
        return False
    return (g.a * g.a - eps * g.c * g.c) % p == 1


def dihedral_elements(ctx: FieldCtx, eps: int) -> list[Mat2]:
    """All p+1 elements of C_eps, enumerated by solving u^2 - eps*v^2 = 1."""
    eps %= ctx.p
    if ctx.legendre(eps) != -1:
        raise BadEps(f"eps={eps} must be a quadratic non-residue mod {ctx.p}")
    p = ctx.p
    out = []
    for v in range(p):
        rhs = (1 + eps * v * v) % p
        leg = ctx.legendre(rhs)
        if leg == 0:
            out.append(Mat2(ctx, 0, eps * v, v, 0))
        elif leg == 1:
            r = sqrt_mod(ctx, rhs)
            out.append(Mat2(ctx, r, eps * v, v, r))
            out.append(Mat2(ctx, -r, eps * v, v, -r))
    return out


def sqrt_mod(ctx: FieldCtx, x: int) -> int:
    """A square root of x mod p via Tonelli-Shanks; requires legendre(x) >= 0."""
    p = ctx.p
    x %= p
    if x == 0:
        return 0
    assert ctx.legendre(x) == 1, "not a quadratic residue"
    if p % 4 == 3:
        return pow(x, (p + 1) // 4, p)
    # Tonelli-Shanks for p = 1 mod 4
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = ctx.nonresidue()
    m, c, t, r = s, pow(z, q, p), pow(x, q, p), pow(x, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = (t2 * t2) % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, (b * b) % p
        t, r = (t * c) % p, (r * b) % p
    return r


def enumerate_sl2(ctx: FieldCtx) -> list[Mat2]:
    """All of SL_2(F_p) in lexicographic order on (a, b, c, d).

    For a != 0 the entry d is solved from the determinant; the fixed order
    makes graph indices and experiment output reproducible.
    """
    p = ctx.p
    out = []
    # a = 0: bc = -1, d free
    for b in range(1, p):
        c = (-ctx.inv(b)) % p
        for d in range(p):
            out.append(Mat2(ctx, 0, b, c, d))
    out.sort(key=Mat2.entries)
    rest = []
    for a in range(1, p):
        ai = ctx.inv(a)
        for b in range(p):
            for c in range(p):
                d = ((1 + b * c) * ai) % p
                rest.append(Mat2(ctx, a, b, c, d))
    return out + rest
