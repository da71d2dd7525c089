import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betweentl import fo2 as F2
from betweentl.games import (
    GameSolver, decide_equiv, decide_equiv_words, game_report, legal_response, uniform_profile,
)
from betweentl.semantics import MarkedWord, eval_fo2

from strategies import AB, words

SHORT = [tuple(w) for n in range(1, 6) for w in itertools.product(AB, repeat=n)]
TINY = [tuple(w) for n in range(1, 5) for w in itertools.product(AB, repeat=n)]


def bump(theta, a):
    out = dict(theta)
    out[a] += 1
    return out


class TestLegalResponse:
    def test_jump_over_b(self):
        assert legal_response("aba", 1, 3, "aba", 1, {"a": 1, "b": 1}) == {3}

    def test_threshold_two(self):
        assert legal_response("aab", 1, 3, "aaab", 1, {"a": 2, "b": 2}) == set()

    def test_letter_must_match(self):
        assert legal_response("ab", 1, 2, "ba", 1) == set()

    def test_direction_is_preserved(self):
        assert legal_response("aab", 3, 1, "aab", 3) == {1}

    def test_stationary_move_rejected(self):
        with pytest.raises(ValueError):
            legal_response("ab", 1, 1, "ab", 1)


class TestExamples:
    def test_identical_marked(self):
        for k in range(4):
            assert decide_equiv(("ab", 1), ("ab", 1), k)

    def test_marked_ab_ba(self):
        assert not decide_equiv(("ab", 1), ("ba", 2), 1)
        assert decide_equiv(MarkedWord(("a", "b"), 1), MarkedWord(("b", "a"), 2), 0)
        assert not decide_equiv(("ab", 1), ("ba", 1), 0)

    def test_exhaust_shorter_word(self):
        assert not decide_equiv(("aa", 1), ("aaa", 1), 2)
        assert not decide_equiv(("aa", 1), ("aaa", 1), 1)
        assert decide_equiv(("aa", 1), ("aaa", 1), 0)

    def test_words(self):
        assert decide_equiv_words("ab", "ba", 1)
        assert not decide_equiv_words("ab", "ba", 2)
        assert decide_equiv_words("ab", "ba", 0)

    @given(words(AB, 6, 1), st.integers(0, 3))
    def test_copycat(self, w, k):
        assert decide_equiv_words(w, w, k)

    def test_report_strategy(self):
        rep = game_report("ab", "ba", 2)
        assert rep["equivalent"] is False
        assert rep["strategy"]
        rep = game_report("ab", "ab", 2, marks=(1, 1))
        assert rep["equivalent"] is True

    def test_threshold_separates(self):
        theta = {"a": 2, "b": 1}
        assert decide_equiv(("aaab", 4), ("aab", 3), 1)
        assert not decide_equiv(("aaab", 4), ("aab", 3), 1, theta)


class TestMonotonicity:
    def test_rounds_and_thresholds(self):
        base = uniform_profile(AB)
        solvers = {}
        for w1, w2 in itertools.product(TINY, repeat=2):
            s = GameSolver(w1, w2, base)
            s2 = GameSolver(w1, w2, bump(base, "a"))
            solvers[w1, w2] = s
            for k in range(3):
                if s.wins_unmarked(k + 1):
                    assert s.wins_unmarked(k), (w1, w2, k)
                if s2.wins_unmarked(k):
                    assert s.wins_unmarked(k), (w1, w2, k)

    def test_marked_monotone(self):
        for w1, w2 in itertools.combinations(TINY, 2):
            s = GameSolver(w1, w2)
            for j1 in range(1, len(w1) + 1):
                for j2 in range(1, len(w2) + 1):
                    for k in range(2):
                        if s.wins(j1, j2, k + 1):
                            assert s.wins(j1, j2, k)


class TestRefinement:
    @pytest.mark.slow
    def test_exhaustive(self):
        violations = []
        for w1, w2 in itertools.combinations(SHORT, 2):
            for a in AB:
                s = GameSolver(w1, w2)
                s2 = GameSolver(w1, w2, bump(uniform_profile(AB), a))
                for k in (1, 2):
                    if s.wins_unmarked(2 * k) and not s2.wins_unmarked(k):
                        violations.append((w1, w2, a, k))
        assert violations == []

    def test_marked(self):
        for w1, w2 in itertools.combinations(TINY, 2):
            for a in AB:
                s = GameSolver(w1, w2)
                s2 = GameSolver(w1, w2, bump(uniform_profile(AB), a))
                for j1 in range(1, len(w1) + 1):
                    for j2 in range(1, len(w2) + 1):
                        if s.wins(j1, j2, 2):
                            assert s2.wins(j1, j2, 1)


class TestEquivalenceRelation:
    def test_classes(self):
        for k in (1, 2):
            rel = {(u, v): decide_equiv_words(u, v, k) for u in TINY for v in TINY}
            for u, v in rel:
                assert rel[u, v] == rel[v, u]
            for u, v, w in itertools.product(TINY[:10], repeat=3):
                if rel[u, v] and rel[v, w]:
                    assert rel[u, w]


def random_fo2(rng, depth, free=()):
    """Random FO2[<,bet] formula of quantifier depth <= depth."""
    def leaf():
        choices = [lambda: F2.letter(rng.choice(AB), rng.choice(free))] if free else []
        if len(free) == 2:
            x, y = free
            choices += [lambda: F2.lt(x, y), lambda: F2.lt(y, x),
                        lambda: F2.bet(rng.choice(AB), x, y), lambda: F2.eq(x, y)]
        return rng.choice(choices)() if choices else F2.FTRUE

    def go(d, free):
        r = rng.random()
        if d == 0 or r < 0.25:
            return leaf() if free else (F2.FTRUE if rng.random() < 0.5 else F2.fnot(F2.FTRUE))
        if r < 0.45:
            return F2.fnot(go(d, free))
        if r < 0.65:
            return F2.fand(go(d, free), go(d, free))
        v = rng.choice(("x", "y"))
        body = go(d - 1, tuple(sorted(set(free) | {v})))
        return F2.exists(v, body) if rng.random() < 0.5 else F2.forall(v, body)

    return go(depth, free)


class TestSoundness:
    def test_fo2_corpus(self):
        rng = random.Random(7)
        sentences = [random_fo2(rng, 2) for _ in range(150)]
        sentences = [f for f in sentences if F2.quantifier_depth(f) <= 2 and not F2.free_vars(f)]
        assert len(sentences) > 50
        for u, v in itertools.combinations(TINY, 2):
            if decide_equiv_words(u, v, 2):
                for f in sentences:
                    assert eval_fo2(f, u) == eval_fo2(f, v), (u, v, F2.render_fo2(f))
