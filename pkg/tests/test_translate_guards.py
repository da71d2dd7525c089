import pytest
from hypothesis import given

from betweentl.checks import WordOracle
from betweentl.semantics import eval_guard
from betweentl.syntax import fragments, parse_tl, render, render_guard
from betweentl.translate.guards import (
    CapExceeded, binv_to_inv, bth_to_binv, distribute_dnf, guard_to_dnf, inv_to_ltl,
    unfold_factor_thresholds,
)

from strategies import ABC, guards, intervals, tl_formulas

ORACLE = WordOracle(ABC, 7)


def g(text):
    return parse_tl(f"F[{text}] c", ABC).guard


class TestGuardToDnf:
    def test_negated_invariance(self):
        assert render_guard(guard_to_dnf(g("!(#{a}=0)"))) == "#{a}>=1"

    def test_distribution(self):
        out = render_guard(guard_to_dnf(g("(#{a}=0 | #{b}=0) & #{c}>0")))
        assert out == "#{a}=0 & #{c}>=1 | #{b}=0 & #{c}>=1"

    def test_negated_threshold(self):
        assert render_guard(guard_to_dnf(g("!(#{a}>=2)"))) == "#{a}<=1"

    @given(guards(ABC), intervals(alphabet=ABC))
    def test_equivalent(self, guard, data):
        w, i, j = data
        assert eval_guard(guard_to_dnf(guard), w, i, j) == eval_guard(guard, w, i, j)


class TestBInvToInv:
    def test_two_present_letters(self):
        f = parse_tl("F[#{a}=0 & #{b}>0 & #{c}>0] c", ABC)
        expected = parse_tl(
            "F[#{a,b,c}=0] (b & F[#{a,c}=0] (c & F[#{a}=0] c))"
            " | F[#{a,b,c}=0] (c & F[#{a,b}=0] (b & F[#{a}=0] c))", ABC)
        assert binv_to_inv(f) is expected

    def test_already_invariant(self):
        f = parse_tl("F[#{a}=0] c", ABC)
        assert binv_to_inv(f) is f

    def test_single_present_letter(self):
        assert render(binv_to_inv(parse_tl("F[#{a}>0] c", ABC))) == "F[#{a}=0] (a & F c)"

    @given(tl_formulas(ABC, depth=2))
    def test_oracle(self, f):
        f = distribute_dnf(f)
        try:
            f = bth_to_binv(unfold_factor_thresholds(f))
        except CapExceeded:
            return
        assert ORACLE.first_difference(f, binv_to_inv(f)) is None


class TestBThToBInv:
    def test_threshold_two(self):
        out = bth_to_binv(parse_tl("F[#{a}>=2] c", ABC))
        assert out is parse_tl(
            "F[#{a}=0] (a & F[#{a}=0] (a & (F[#{a}=0] c | F[#{a}=0] (a & F c))))", ABC)
        assert ORACLE.first_difference(out, parse_tl("F[#{a}>=2] c", ABC)) is None

    def test_vacuous(self):
        assert render(bth_to_binv(parse_tl("F[#{a}>=0] c", ABC))) == "F c"

    def test_at_least_one(self):
        out = binv_to_inv(bth_to_binv(parse_tl("F[#{a}>=1] c", ABC)))
        assert render(out) == "F[#{a}=0] (a & F c)"

    def test_cap(self):
        with pytest.raises(CapExceeded):
            bth_to_binv(parse_tl("F[#{a}>=9] c", ABC), cap=8)

    @pytest.mark.parametrize("text", [
        "F[#{a}=2 & #{b}=0] c", "P[#{a,b}<=2] c", "F[#{a}>=1 & #{b}<=1] c", "F[#{a}=1 | #{c}=2] b",
    ])
    def test_oracle(self, text):
        f = parse_tl(text, ABC)
        out = bth_to_binv(distribute_dnf(f))
        assert ORACLE.first_difference(f, out) is None


class TestInvToLtl:
    def test_until_shape(self):
        out = inv_to_ltl(parse_tl("F[#{a}=0] b", ABC))
        assert "LTL" in fragments(out)
        assert ORACLE.first_difference(out, parse_tl("F[#{a}=0] b", ABC)) is None
