import random

import pytest

from sl2lab.errors import NotFound, ParamTooSmall
from sl2lab.field import GaussInt
from sl2lab.words import (enumerate_words, eval_word, is_reduced,
                          reconstruct_from_column, verify_ping_pong)

S2 = GaussInt(2, 0)
T2 = GaussInt(2, 0)


def test_eval_single_blocks():
    m = eval_word((("G", 3),), S2, T2)
    assert (m.a.re, m.b.re, m.c.re, m.d.re) == (1, 0, 6, 1)
    m = eval_word((("H", -2),), S2, T2)
    assert (m.a.re, m.b.re, m.c.re, m.d.re) == (1, -4, 0, 1)


def test_eval_det_one():
    rnd = random.Random(0)
    for _ in range(50):
        word = random_word(rnd, 6, 3)
        m = eval_word(word, S2, T2)
        assert m.det() == GaussInt(1, 0)


def test_small_params_rejected():
    with pytest.raises(ParamTooSmall):
        eval_word((), GaussInt(1, 0), T2)


def test_enumerate_words_counts():
    # 2 * 6^b words with b blocks plus the empty word, exps in +-{1,2,3}
    words = list(enumerate_words(2, 3))
    assert len(words) == 1 + 2 * 6 + 2 * 36
    assert all(is_reduced(w) for w in words)
    assert len(set(words)) == len(words)


def test_ping_pong_small():
    rep = verify_ping_pong(S2, T2, 3, 2)
    assert rep.scalar_words == []
    assert rep.collisions == 0
    assert rep.min_offdiag >= 2.0


def test_ping_pong_gaussian_params():
    rep = verify_ping_pong(GaussInt(0, 2), GaussInt(2, 1), 2, 2)
    assert rep.scalar_words == []
    assert rep.collisions == 0


def random_word(rnd, max_blocks, max_exp, force_h_end=False):
    nblocks = rnd.randint(1, max_blocks)
    first = rnd.choice("GH")
    if force_h_end:
        first = "H" if nblocks % 2 == 1 else "G"
    letters = [first if i % 2 == 0 else ("H" if first == "G" else "G")
               for i in range(nblocks)]
    exps = [rnd.choice([e for e in range(-max_exp, max_exp + 1) if e != 0])
            for _ in range(nblocks)]
    return tuple(zip(letters, exps))


@pytest.mark.parametrize("s,t", [(S2, T2), (GaussInt(2, 1), GaussInt(0, 2))])
def test_reconstruct_round_trip(s, t):
    rnd = random.Random(7)
    for _ in range(100):
        word = random_word(rnd, 6, 3, force_h_end=True)
        col = eval_word(word, s, t).column2()
        back = reconstruct_from_column(col[0], col[1], s, t, 8)
        assert back == word


def test_reconstruct_trailing_g_blind():
    # the second column cannot see a trailing G-block; the canonical
    # representative drops it
    word = (("G", 2), ("H", -1), ("G", 3))
    col = eval_word(word, S2, T2).column2()
    back = reconstruct_from_column(col[0], col[1], S2, T2, 8)
    assert back == (("G", 2), ("H", -1))


def test_reconstruct_identity_column():
    assert reconstruct_from_column(GaussInt(0, 0), GaussInt(1, 0), S2, T2, 4) == ()


def test_reconstruct_not_found():
    with pytest.raises(NotFound):
        reconstruct_from_column(GaussInt(1, 0), GaussInt(1, 0), S2, T2, 4)


def test_reconstruct_check_unique():
    word = (("H", 2), ("G", -1), ("H", 1))
    col = eval_word(word, S2, T2).column2()
    back = reconstruct_from_column(col[0], col[1], S2, T2, 8, check_unique=True)
    assert back == word
