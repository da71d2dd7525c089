import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betweentl import fo2 as F2
from betweentl.checks import DELAY_SENTENCES, delay_suite
from betweentl.semantics import eval_fo2
from betweentl.translate.delay import (
    delay_fo2, expand_fo2, expand_word, expanded_alphabet, parse_window, window_formula,
    window_letter,
)

from strategies import AB, ABC, words


class TestExpandWord:
    def test_example(self):
        assert expand_word("ababba", 3) == ("**a", "*ab", "aba", "bab", "abb", "bba")

    def test_short(self):
        assert expand_word("aa", 3) == ("**a", "*aa")

    @given(words(ABC, 12), st.integers(2, 5))
    def test_length_preserved(self, w, k):
        out = expand_word(w, k)
        assert len(out) == len(w)
        assert all(parse_window(x, k)[-1] == a for x, a in zip(out, w))

    def test_bad_k(self):
        with pytest.raises(ValueError):
            expand_word("ab", 1)

    def test_multichar_letters(self):
        assert window_letter(("*", "p1")) == "<*.p1>"
        assert parse_window("<*.p1>", 2) == ("*", "p1")

    def test_alphabet(self):
        alph = expanded_alphabet(AB, 2)
        assert set(expand_word("abba", 2)) <= set(alph)
        assert "*a" in alph and "a*" not in alph


class TestWindowFormula:
    def test_full_window(self):
        x, y = "x", "y"
        expected = F2.fand(F2.letter("c", x), F2.exists(y, F2.fand(
            F2.suc(y, x), F2.letter("a", y),
            F2.exists(x, F2.fand(F2.suc(x, y), F2.letter("b", x))))))
        assert window_formula(("b", "a", "c"), "x") == expected

    def test_starred_window(self):
        x, y = "x", "y"
        expected = F2.fand(F2.letter("c", x), F2.exists(y, F2.fand(
            F2.suc(y, x), F2.letter("a", y), F2.fnot(F2.exists(x, F2.suc(x, y))))))
        assert window_formula(("*", "a", "c"), "x") == expected

    @given(words(AB, 6, 1))
    def test_matches_expansion(self, w):
        ww = expand_word(w, 3)
        for i in range(1, len(w) + 1):
            for win in expanded_alphabet(AB, 3):
                got = eval_fo2(window_formula(parse_window(win, 3), "x"), w, {"x": i})
                assert got == (ww[i - 1] == win)


class TestDelay:
    def test_worked_position(self):
        w = "bbacbab"
        ww = expand_word(w, 4)
        env = {"x": 3, "y": 7}
        assert eval_fo2(F2.bet("bbac", "x", "y"), ww, env)
        assert not eval_fo2(F2.fac("ac", "x", "y"), w, env)
        _, g = delay_fo2(F2.fac("ac", "x", "y"), "abc", 4)
        assert not eval_fo2(g, ww, env)

    def test_k_is_longest_factor(self):
        k, _ = delay_fo2(F2.parse_fo2('exists x exists y fac("aab")(x,y)', AB), AB)
        assert k == 3

    def test_letters_only(self):
        f = F2.parse_fo2("exists x (a(x) & exists y (x < y & b(y)))", AB)
        k, g = delay_fo2(f, AB, 2)
        for w in ["ab", "ba", "aab", "bba"]:
            assert eval_fo2(g, expand_word(w, k)) == eval_fo2(f, w)

    def test_sample(self):
        out = delay_suite(DELAY_SENTENCES[:3], max_len=5)
        assert out["mismatches"] == []

    def test_random_free_variable_atoms(self):
        rng = random.Random(5)
        for _ in range(20):
            u = "".join(rng.choice(AB) for _ in range(rng.randint(1, 3)))
            c = rng.randint(1, 2)
            f = F2.facth(u, c, "x", "y") if c > 1 else F2.fac(u, "x", "y")
            k, g = delay_fo2(f, AB, 3)
            h = expand_fo2(g, AB, k)
            for n in range(2, 7):
                w = tuple(rng.choice(AB) for _ in range(n))
                for x in range(1, n + 1):
                    for y in range(1, n + 1):
                        env = {"x": x, "y": y}
                        want = eval_fo2(f, w, env)
                        assert eval_fo2(g, expand_word(w, k), env) == want
                        assert eval_fo2(h, w, env) == want
