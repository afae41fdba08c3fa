"""Free words in the two generators G = (1 0 | s 1) and H = (1 t | 0 1)
over the Gaussian integers, with |s|, |t| >= 2.

Provides exact word evaluation, an exhaustive ping-pong freeness check
(no word evaluates to a scalar matrix), and reconstruction of a word from
the second column of its matrix.

Reconstruction convention: the second column is blind to a trailing
G-block (G fixes the vector (0,1)), so words are canonicalized to end in
an H-block (or be empty); the reconstructed word is the unique such
representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .errors import NotFound, ParamTooSmall
from .field import GaussInt

Letter = str  # "G" or "H"
Word = tuple[tuple[Letter, int], ...]  # reduced: adjacent letters differ, exps != 0


@dataclass(frozen=True)
class Mat2Z:
    """2x2 matrix over Z[i] with exact entries."""

    a: GaussInt
    b: GaussInt
    c: GaussInt
    d: GaussInt

    def __mul__(self, other: "Mat2Z") -> "Mat2Z":
        return Mat2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self) -> GaussInt:
        return self.a * self.d - self.b * self.c

    def column2(self) -> tuple[GaussInt, GaussInt]:
        return (self.b, self.d)

    def is_scalar(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a == self.d


def _identity_z() -> Mat2Z:
    one, zero = GaussInt(1, 0), GaussInt(0, 0)
    return Mat2Z(one, zero, zero, one)


def _check_params(s: GaussInt, t: GaussInt):
    if s.norm2() < 4 or t.norm2() < 4:
        raise ParamTooSmall(f"need |s|, |t| >= 2, got s={s}, t={t}")


def _letter_power(letter: Letter, exp: int, s: GaussInt, t: GaussInt) -> Mat2Z:
    one, zero = GaussInt(1, 0), GaussInt(0, 0)
    if letter == "G":
        return Mat2Z(one, zero, s * exp, one)
    return Mat2Z(one, t * exp, zero, one)


def is_reduced(word: Word) -> bool:
    if any(e == 0 for _, e in word):
        return False
    return all(word[i][0] != word[i + 1][0] for i in range(len(word) - 1))


def eval_word(word: Word, s: GaussInt, t: GaussInt) -> Mat2Z:
    """Exact product of the letter-block matrices, leftmost block first."""
    _check_params(s, t)
    m = _identity_z()
    for letter, exp in word:
        m = m * _letter_power(letter, exp, s, t)
    return m


def enumerate_words(max_blocks: int, max_exp: int):
    """All reduced words with at most max_blocks blocks and block
    exponents in [-max_exp, max_exp] \\ {0}, including the empty word."""
    exps = [e for e in range(-max_exp, max_exp + 1) if e != 0]
    yield ()
    for nblocks in range(1, max_blocks + 1):
        for first in ("G", "H"):
            letters = [first if i % 2 == 0 else ("H" if first == "G" else "G")
                       for i in range(nblocks)]
            for combo in product(exps, repeat=nblocks):
                yield tuple(zip(letters, combo))


@dataclass
class PingPongReport:
    words_checked: int
    scalar_words: list[Word]
    collisions: int
    min_offdiag: float  # min over non-empty words of max(|b|, |c|)


def verify_ping_pong(s: GaussInt, t: GaussInt,
                     max_blocks: int, max_exp: int) -> PingPongReport:
    """Exhaustively check that no non-trivial reduced word evaluates to a
    scalar matrix, and that all word matrices are pairwise distinct."""
    _check_params(s, t)
    if max_blocks < 1 or max_exp < 1:
        raise ParamTooSmall("search bounds must be >= 1")
    seen = {}
    scalar_words = []
    collisions = 0
    min_off = math.inf
    count = 0
    for word in enumerate_words(max_blocks, max_exp):
        m = eval_word(word, s, t)
        count += 1
        if word:
            if m.is_scalar():
                scalar_words.append(word)
            key = (m.a, m.b, m.c, m.d)
            if key in seen:
                collisions += 1
            else:
                seen[key] = word
            off = max(m.b.norm2(), m.c.norm2()) ** 0.5
            min_off = min(min_off, off)
    return PingPongReport(count, scalar_words, collisions, min_off)


def _gauss_round_div(a: GaussInt, b: GaussInt) -> int:
    """Nearest rational integer to Re-axis projection is not enough: word
    exponents are rational integers, so round Re(a/b) and ignore a residual
    imaginary part (validation catches bad strips)."""
    n = b.norm2()
    num = a * GaussInt(b.re, -b.im)  # a * conj(b)
    return round(num.re / n)


def strip_candidates(v: tuple[GaussInt, GaussInt], s: GaussInt, t: GaussInt):
    """All (letter, exp, new_column) strips that strictly decrease
    max(|b|^2, |d|^2). Stripping letter L with exponent e means the word
    begins with L^e."""
    x, y = v
    cur = max(x.norm2(), y.norm2())
    out = []
    if not x.is_zero():
        # G^n (x, y) = (x, s n x + y): strip gives y' = y - s n x
        bound = int((math.sqrt(y.norm2()) + math.sqrt(cur)) / math.sqrt(s.norm2() * x.norm2())) + 1
        for n in range(-bound, bound + 1):
            if n == 0:
                continue
            y2 = y - s * (n * x)
            if max(x.norm2(), y2.norm2()) < cur:
                out.append(("G", n, (x, y2)))
    if not y.is_zero():
        # H^m (x, y) = (x + t m y, y): strip gives x' = x - t m y
        bound = int((math.sqrt(x.norm2()) + math.sqrt(cur)) / math.sqrt(t.norm2() * y.norm2())) + 1
        for m in range(-bound, bound + 1):
            if m == 0:
                continue
            x2 = x - t * (m * y)
            if max(x2.norm2(), y.norm2()) < cur:
                out.append(("H", m, (x2, y)))
    return out


def _push_block(word: list, letter: Letter, exp: int):
    """Append a block, merging with an adjacent block of the same letter."""
    if word and word[-1][0] == letter:
        merged = word[-1][1] + exp
        word.pop()
        if merged != 0:
            word.append((letter, merged))
    else:
        word.append((letter, exp))


def _greedy_reconstruct(b: GaussInt, d: GaussInt, s: GaussInt, t: GaussInt,
                        max_blocks: int):
    """Norm-descent peel-off guided by the ping-pong regions
    A = {|y| > |x|}, B = {|x| > |y|}."""
    v = (b, d)
    word = []
    target = (GaussInt(0, 0), GaussInt(1, 0))
    while v != target and len(word) <= max_blocks:
        x, y = v
        if y.norm2() > x.norm2():
            if x.is_zero():
                return None
            n = _gauss_round_div(y, s * x)
            if n == 0:
                return None
            v = (x, y - s * (n * x))
            _push_block(word, "G", n)
        elif x.norm2() > y.norm2():
            if y.is_zero():
                return None
            m = _gauss_round_div(x, t * y)
            if m == 0:
                return None
            v = (x - t * (m * y), y)
            _push_block(word, "H", m)
        else:
            return None
    if v != target or len(word) > max_blocks:
        return None
    return tuple(word)


def _blind_reconstruct(b: GaussInt, d: GaussInt, s: GaussInt, t: GaussInt,
                       max_blocks: int) -> list[Word]:
    """Exhaustive norm-descent search; returns every matching word
    (freeness predicts at most one), each ending in an H-block."""
    target = (GaussInt(0, 0), GaussInt(1, 0))
    found = []

    def rec(v, word):
        if v == target:
            if not word or word[-1][0] == "H":
                # peeled leftmost-first, so word is already left-to-right
                found.append(tuple(word))
            return
        if len(word) >= max_blocks:
            return
        for letter, exp, v2 in strip_candidates(v, s, t):
            if word and word[-1][0] == letter:
                continue
            word.append((letter, exp))
            rec(v2, word)
            word.pop()

    rec((b, d), [])
    return found


def reconstruct_from_column(b: GaussInt, d: GaussInt, s: GaussInt, t: GaussInt,
                            max_blocks: int, check_unique: bool = False) -> Word:
    """Recover the unique word (ending in an H-block, or empty) whose
    matrix has second column (b, d).

    Greedy region-guided descent validated by re-evaluation; falls back to
    the exhaustive norm-descent search. With check_unique the exhaustive
    search always runs and any second match raises an alarm.
    """
    _check_params(s, t)
    if not check_unique:
        word = _greedy_reconstruct(b, d, s, t, max_blocks)
        if word is not None and eval_word(word, s, t).column2() == (b, d):
            return word
    matches = _blind_reconstruct(b, d, s, t, max_blocks)
    if not matches:
        raise NotFound(f"no word within {max_blocks} blocks has column ({b}, {d})")
    if len(matches) > 1:
        raise AssertionError(f"uniqueness violated: {matches}")
    return matches[0]
