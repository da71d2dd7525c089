import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from betweentl.algebra import (
    InconsistentCharacterisation, Me_submonoid, RegexError, classify, delay_check, idempotents,
    in_aperiodic, in_DA, in_locally_DA, in_locally_MeDA, in_MeDA, j_leq, language_dfa,
    omega_power, regex_to_min_dfa, syntactic_monoid, syntactic_semigroup, window_language_dfa,
)
from betweentl.automata import DFA
from betweentl.semantics import iter_words

from strategies import AB, words

AB_STAR = "(ab)*"
FIRST_LAST = "a(a+b)*a+b(a+b)*b+a+b"
BAB = "(a+b)*bab⁺ab(a+b)*"
BB2 = "(a(ab)*b)*"
REGEXES = [AB_STAR, FIRST_LAST, BAB, BB2, "(aa)*", "a*b*", "(a+b)*aa(a+b)*", "ab", "b(ab)*a"]


def monoid(regex, alphabet=AB):
    return syntactic_monoid(regex_to_min_dfa(regex, alphabet))


class TestRegex:
    def test_ab_star(self):
        d = regex_to_min_dfa(AB_STAR, AB)
        assert d.n_states == 3
        for w in iter_words(AB, 6):
            s = "".join(w)
            assert d.accepts(w) == (len(s) % 2 == 0 and s == "ab" * (len(s) // 2))

    def test_single_word(self):
        d = regex_to_min_dfa("a", AB)
        assert sorted("".join(w) for w in d.words(5)) == ["a"]

    def test_bb2_counter(self):
        d = regex_to_min_dfa(BB2, AB)
        assert d.n_states == 4
        # levels 0, 1, 2 of a counter incremented by a, decremented by b
        level = {0: d.run(""), 1: d.run("a"), 2: d.run("aa")}
        assert len(set(level.values())) == 3
        dead = d.run("b")
        assert dead not in level.values()
        assert d.run("aaa") == dead and d.run("ab") == level[0]

    def test_plus_and_epsilon(self):
        d = regex_to_min_dfa("a^+b+ε", AB)
        assert sorted("".join(w) for w in d.words(4)) == ["", "aaab", "aab", "ab"]
        assert regex_to_min_dfa("∅", AB).is_empty()

    @pytest.mark.parametrize("bad", ["(ab", "a)", "c", "*a", "a++"])
    def test_errors(self, bad):
        with pytest.raises(RegexError):
            regex_to_min_dfa(bad, AB)

    def test_dfa_json(self):
        d = regex_to_min_dfa(BAB, AB)
        assert language_dfa(d.to_json()).equivalent(d)
        assert DFA.from_json(d.to_json()).to_json() == d.to_json()


class TestSyntacticMonoid:
    def test_ab_star_relations(self):
        M = monoid(AB_STAR)
        ev = M.evaluate
        assert len(M) == 6
        assert ev("aba") == ev("a") and ev("bab") == ev("b")
        assert ev("aa") == ev("bb") == ev("aab") == ev("baa")
        assert sorted(M.name(x) for x in M.members) == ["1", "a", "aa", "ab", "b", "ba"]

    def test_first_last_equal(self):
        assert len(monoid(FIRST_LAST)) == 5

    def test_trivial(self):
        M = syntactic_monoid(regex_to_min_dfa("a*", "a"))
        assert len(M) == 1 and in_aperiodic(M) and in_DA(M)

    def test_idempotents(self):
        M = monoid(AB_STAR)
        assert sorted(M.name(e) for e in idempotents(M)) == ["1", "aa", "ab", "ba"]

    def test_omega(self):
        M = monoid(AB_STAR)
        assert omega_power(M, M.evaluate("a")) == M.evaluate("aa")

    def test_me_submonoid(self):
        M = monoid(AB_STAR)
        for e in ("ab", "ba"):
            assert Me_submonoid(M, M.evaluate(e)).members == M.members

    def test_local_needs_idempotent(self):
        M = monoid(AB_STAR)
        with pytest.raises(ValueError):
            M.local(M.evaluate("a"))

    def test_semigroup_excludes_empty(self):
        S = syntactic_semigroup(regex_to_min_dfa(AB_STAR, AB))
        assert len(S) == 5 and not S.is_monoid
        with pytest.raises(ValueError):
            S.evaluate("")

    @pytest.mark.parametrize("regex", REGEXES)
    def test_recognition(self, regex):
        d = regex_to_min_dfa(regex, AB)
        M = syntactic_monoid(d)
        M.check_closed()
        for w in iter_words(AB, 6):
            assert M.recognizes(w) == d.accepts(w)

    @pytest.mark.parametrize("regex", REGEXES)
    def test_omega_idempotent(self, regex):
        M = monoid(regex)
        for x in M.members:
            w = omega_power(M, x)
            assert M.mul(w, w) == w
            assert any(w == p for p in _powers(M, x))

    @pytest.mark.parametrize("regex", REGEXES[:5])
    def test_j_order_is_preorder(self, regex):
        M = monoid(regex)
        ms = M.members
        for x in ms:
            assert j_leq(M, x, x)
        for x, y, z in itertools.product(ms, repeat=3):
            if j_leq(M, x, y) and j_leq(M, y, z):
                assert j_leq(M, x, z)
        for x, y in itertools.product(ms, repeat=2):
            assert j_leq(M, M.mul(x, y), x) and j_leq(M, M.mul(x, y), y)

    @given(words(AB, 5), words(AB, 5))
    def test_evaluate_is_morphism(self, u, v):
        M = monoid(BAB)
        assert M.evaluate(u + v) == M.mul(M.evaluate(u), M.evaluate(v))


def _powers(M, x):
    seen, p = [], x
    while p not in seen:
        seen.append(p)
        p = M.mul(p, x)
    return seen


class TestVarieties:
    def test_golden_table(self):
        M = monoid(AB_STAR)
        assert not in_DA(M) and in_MeDA(M) and in_aperiodic(M)
        assert in_DA(monoid(FIRST_LAST))
        assert not in_locally_DA(syntactic_semigroup(regex_to_min_dfa(BAB, AB)))
        assert in_MeDA(monoid(BAB))
        assert in_aperiodic(monoid(BB2)) and not in_MeDA(monoid(BB2))

    def test_not_aperiodic(self):
        assert not in_aperiodic(monoid("(aa)*", "a"))

    def test_locally(self):
        S = syntactic_semigroup(regex_to_min_dfa(AB_STAR, AB))
        assert in_locally_DA(S) and in_locally_MeDA(S)
        assert in_locally_MeDA(syntactic_semigroup(regex_to_min_dfa(BAB, AB)))

    @pytest.mark.parametrize("regex", REGEXES)
    def test_da_inside_meda(self, regex):
        M = monoid(regex)
        if in_DA(M):
            assert in_MeDA(M)
        if in_MeDA(M):
            assert in_aperiodic(M)

    def test_meda_closed_under_submonoids(self):
        M = monoid(BAB)
        assert in_MeDA(M)
        for gens in itertools.combinations(M.members, 2):
            sub = M.view(M.closure(gens, M.identity), M.identity)
            sub.check_closed()
            assert in_MeDA(sub)

    def test_meda_closed_under_products(self):
        d1 = regex_to_min_dfa(AB_STAR, AB)
        d2 = regex_to_min_dfa("(a+b)*b(a+b)*", AB)
        both = (d1 & d2).minimize()
        assert in_MeDA(syntactic_monoid(both))
        assert in_MeDA(syntactic_monoid((d1 | regex_to_min_dfa(BAB, AB)).minimize()))

    def test_inconsistency_error_type(self):
        assert issubclass(InconsistentCharacterisation, AssertionError)


class TestDelay:
    def test_ab_star(self):
        v = delay_check(regex_to_min_dfa(AB_STAR, AB), 2)
        assert v.confirmed and v.verdict == "confirmed-at-2"

    def test_finite_language(self):
        assert delay_check(regex_to_min_dfa("ab", AB), 3).confirmed

    def test_not_aperiodic(self):
        v = delay_check(regex_to_min_dfa("(aa)*", AB), 2)
        assert not v.confirmed and v.verdict == "not-confirmed-at-2"

    def test_window_language(self):
        from betweentl.translate.delay import expand_word

        d = regex_to_min_dfa(AB_STAR, AB)
        W = window_language_dfa(d, 2)
        for w in iter_words(AB, 6):
            if w:  # windows describe nonempty words only
                assert W.accepts(expand_word(w, 2)) == d.accepts(w)
        assert not W.accepts(())


class TestClassify:
    def test_ab_star(self):
        r = classify(AB_STAR, AB)
        assert (r["in_DA"], r["in_MeDA"], r["aperiodic"]) == (False, True, True)
        assert r["monoid_size"] == 6 and "locally_MeDA" in r["heuristic"]

    def test_bb2(self):
        r = classify(BB2, AB)
        assert r["aperiodic"] and not r["in_MeDA"]

    def test_bab(self):
        r = classify(BAB, AB)
        assert not r["locally_DA"] and r["in_MeDA"]

    def test_needs_alphabet(self):
        with pytest.raises(ValueError):
            language_dfa("ab")
