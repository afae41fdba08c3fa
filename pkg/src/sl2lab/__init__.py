"""Exact-arithmetic laboratory for SL2(F_p) group actions: incidence
counting with main-term comparison, Cayley-graph expansion measurement,
the lazy Mobius Markov chain, multiplicative-subgroup shift algebra,
free-word ping-pong checks, and quadratic-residue gap statistics."""

from .field import FieldCtx, FqElem, GaussInt
from .sl2 import INF, Mat2, bruhat, diag, mobius, u, u_lower, weyl

__all__ = [
    "FieldCtx", "FqElem", "GaussInt",
    "INF", "Mat2", "bruhat", "diag", "mobius", "u", "u_lower", "weyl",
]

__version__ = "0.1.0"
