import pytest
from hypothesis import given

from betweentl import fo2 as F2
from betweentl.checks import WordOracle, sat_suite
from betweentl.corpus import curated
from betweentl.sat import bounded_fo2_sat, is_satisfiable, ltl_to_nfa, shortest_model
from betweentl.semantics import BudgetExceeded, enumerate_models, eval_tl_sentence
from betweentl.syntax import atom, parse_tl
from betweentl.translate.pipeline import pipeline_to_ltl

from strategies import AB, ABC, tl_formulas


def lang(f, alphabet, n):
    return sorted("".join(w) for w in ltl_to_nfa(f, alphabet).words(n))


class TestNfa:
    def test_letter(self):
        assert lang(atom("a"), AB, 4) == sorted(enumerate_models(atom("a"), AB, 4))
        assert all(w.startswith("a") for w in lang(atom("a"), AB, 4))
        assert len(lang(atom("a"), AB, 4)) == 1 + 2 + 4 + 8

    def test_false(self):
        assert ltl_to_nfa(parse_tl("false", AB), AB).is_empty()

    def test_ab_plus(self):
        assert lang(curated("ab_plus"), AB, 6) == ["ab", "abab", "ababab"]

    @given(tl_formulas(AB, depth=3))
    def test_language_equals_models(self, f):
        assert lang(f, AB, 6) == sorted(enumerate_models(f, AB, 6))


class TestSatisfiability:
    def test_letter_clash(self):
        assert not is_satisfiable(parse_tl("a & b", AB), AB).satisfiable

    def test_stair(self):
        res = is_satisfiable(curated("stair2"), AB)
        assert res.satisfiable and res.method == "pipeline"

    def test_contradictory_factor_guard(self):
        f = parse_tl('F[+"aa" & !"aa"] c', ABC)
        assert not is_satisfiable(f, ABC).satisfiable
        assert WordOracle(ABC, 8).models(f) == []

    def test_shortest_models(self):
        assert shortest_model(curated("ab_plus"), AB) == ("a", "b")
        assert shortest_model(curated("stair2"), AB) == tuple("aaaaa")
        assert shortest_model(curated("stair2"), ABC) == tuple("aaaaa")
        assert shortest_model(parse_tl("false", AB), AB) is None

    def test_cli_example(self):
        f = parse_tl("F[#{a}=2 & #{b}=0] true", AB)
        assert shortest_model(f, AB) == tuple("aaaa")

    def test_direct_method_agrees(self):
        f = parse_tl("F[#{a}>=12] b", AB)
        res = is_satisfiable(f, AB)
        assert res.method == "direct"
        assert len(res.model) == 14 and eval_tl_sentence(f, res.model)
        with pytest.raises(ValueError):
            is_satisfiable(f, AB, method="bogus")

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            is_satisfiable(curated("stair2"), AB, max_states=2)

    @given(tl_formulas(AB, depth=3))
    def test_model_is_shortest(self, f):
        models = enumerate_models(f, AB, 5)
        res = is_satisfiable(f, AB)
        if models:
            assert res.satisfiable and len(res.model) <= len(models[0])
            assert eval_tl_sentence(f, res.model)
        elif res.satisfiable:
            assert len(res.model) > 5


class TestBoundedFO2:
    def test_exists_letter(self):
        res = bounded_fo2_sat(F2.parse_fo2("exists x a(x)", "a"), "a", 4)
        assert res.status == "sat" and res.model == ("a",)

    def test_contradiction(self):
        res = bounded_fo2_sat(F2.parse_fo2("exists x (a(x) & !a(x))", AB), AB, 6)
        assert res.status == "unsat" and res.satisfiable is False

    def test_beyond_bound(self):
        res = bounded_fo2_sat(F2.parse_fo2("exists x exists y th(a,5)(x,y)", AB), AB, 4)
        assert res.status == "none-within-bound" and res.shortest_length == 7


def test_suite_small():
    assert sat_suite(n=5, seed=3, max_len=6)["mismatches"] == []
