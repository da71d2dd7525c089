import pytest
from hypothesis import given
from hypothesis import strategies as st

from betweentl import fo2 as F2
from betweentl.corpus import curated
from betweentl.semantics import (
    BatchEval, MarkedWord, all_words, count_factors, count_letters, enumerate_models,
    eval_fo2, eval_guard, eval_tl, eval_tl_sentence, iter_words, model_mask,
)
from betweentl.syntax import (
    atom, count_atom, factor_atom, fut, gand, mirror, neg, nxt, parse_tl,
)

from strategies import AB, ABC, guards, intervals, tl_formulas, words


class TestCounts:
    def test_letters(self):
        assert count_letters("abab", 1, 4, "a") == 1
        assert count_letters("abc", 1, 3, "abc") == 1

    @given(intervals(), st.sets(st.sampled_from(AB)))
    def test_adjacent_interval_is_empty(self, data, B):
        w, i, _ = data
        assert count_letters(w, i, i + 1, B) == 0

    def test_factors(self):
        assert count_factors("aaaa", 1, 4, "aa") == 1
        assert count_factors("xaax", 1, 4, "bb") == 0
        assert count_factors("aaaaa", 1, 5, "aa") == 2

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            count_letters("ab", 2, 1, "a")
        with pytest.raises(ValueError):
            count_letters("ab", 1, 3, "a")

    @given(intervals(), st.sets(st.sampled_from(AB)))
    def test_letter_count_is_sum(self, data, B):
        w, i, j = data
        assert count_letters(w, i, j, B) == sum(count_letters(w, i, j, b) for b in B)


class TestGuards:
    def test_threshold(self):
        assert eval_guard(count_atom("a", ">=", 2), "abab", 1, 4) is False

    @given(intervals())
    def test_empty_set_is_always_zero(self, data):
        w, i, j = data
        assert eval_guard(count_atom((), "=", 0), w, i, j)

    def test_factor_guard(self):
        g = gand(factor_atom("aa", ">", 0), factor_atom("bb", "=", 0))
        assert eval_guard(g, "caac", 1, 4)


class TestTemporal:
    def test_stair(self):
        f = curated("stair2")
        assert eval_tl_sentence(f, "aaaaa")
        assert not eval_tl_sentence(f, "aaaa")

    def test_plain_future_via_empty_guard(self):
        f = fut(atom("a"), count_atom((), "=", 0))
        assert eval_tl(f, ("ba", 1)) and eval_tl(fut(atom("a")), ("ba", 1))

    def test_ab_plus(self):
        f = curated("ab_plus")
        assert eval_tl_sentence(f, "abab")
        assert not eval_tl_sentence(f, "abba")

    def test_empty_word(self):
        assert not eval_tl_sentence(fut(atom("a")), "")
        assert eval_tl_sentence(neg(fut(atom("a"))), "")

    def test_letter(self):
        assert eval_tl_sentence(atom("a"), "a")

    def test_marked_word_validation(self):
        with pytest.raises(ValueError):
            MarkedWord(("a",), 2)

    @given(tl_formulas(AB), words(AB, 6, 1))
    def test_empty_guard_is_plain_future(self, f, w):
        g1 = fut(f, count_atom((), "=", 0))
        for i in range(1, len(w) + 1):
            assert eval_tl(g1, (w, i)) == eval_tl(fut(f), (w, i))

    @given(tl_formulas(AB), words(AB, 6, 1))
    def test_next_is_zero_invariance(self, f, w):
        g = fut(f, count_atom(AB, "=", 0))
        for i in range(1, len(w) + 1):
            assert eval_tl(g, (w, i)) == eval_tl(nxt(f), (w, i))

    @given(tl_formulas(ABC, depth=3), words(ABC, 6, 1))
    def test_mirror_duality(self, f, w):
        n = len(w)
        for i in range(1, n + 1):
            assert eval_tl(f, (w, i)) == eval_tl(mirror(f), (w[::-1], n + 1 - i))

    @given(tl_formulas(ABC, depth=3))
    def test_batch_matches_pointwise(self, f):
        for n in range(0, 5):
            W = all_words(ABC, n)
            mask = BatchEval(W, ABC).tl_sentence(f)
            for row, got in zip(W, mask):
                w = tuple(ABC[k] for k in row)
                assert bool(got) == eval_tl_sentence(f, w)


class TestFO2:
    def test_first_letter(self):
        f = F2.parse_fo2("forall x ((forall y (x <= y)) -> a(x))", AB)
        assert eval_fo2(f, "ab") and not eval_fo2(f, "ba")

    def test_first_last_equal(self):
        f = F2.parse_fo2(
            "exists x ((forall y (x <= y)) & ((a(x) & exists y ((forall x (x <= y)) & a(y)))"
            " | (b(x) & exists y ((forall x (x <= y)) & b(y)))))", AB)
        assert eval_fo2(f, "aba") and not eval_fo2(f, "abb")

    def test_threshold_atom(self):
        f = F2.parse_fo2("th(a,2)(x,y)", AB)
        assert eval_fo2(f, "aabaa", {"x": 1, "y": 5})
        assert not eval_fo2(f, "aabbb", {"x": 1, "y": 5})

    def test_factor_atoms(self):
        f = F2.parse_fo2('fac("ab")(x,y)', AB)
        assert eval_fo2(f, "aabb", {"x": 1, "y": 4})
        assert not eval_fo2(f, "aabb", {"x": 2, "y": 4})

    def test_free_variable_needs_assignment(self):
        with pytest.raises(ValueError):
            eval_fo2(F2.parse_fo2("a(x)", AB), "a")

    def test_render_roundtrip(self):
        f = F2.parse_fo2('exists x forall y (x < y -> !facth("ab",2)(x,y))', AB)
        assert F2.parse_fo2(F2.render_fo2(f), AB) == f


class TestModels:
    def test_ab_plus(self):
        assert enumerate_models(curated("ab_plus"), AB, 4) == ["ab", "abab"]

    def test_false(self):
        assert enumerate_models(parse_tl("false", AB), AB, 5) == []

    def test_strict_future(self):
        assert enumerate_models(fut(atom("a")), "a", 2) == ["aa"]

    def test_mask_counts(self):
        assert int(model_mask(parse_tl("true", AB), AB, 3).sum()) == 8

    def test_iter_words_order(self):
        assert ["".join(w) for w in iter_words(AB, 2)] == ["", "a", "b", "aa", "ab", "ba", "bb"]
