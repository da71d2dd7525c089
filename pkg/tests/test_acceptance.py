"""Acceptance suite: one group of tests per numbered criterion.

A summary line per criterion is printed at the end of the pytest run.
"""

import random
import time

import pytest

from betweentl.algebra import (
    in_aperiodic, in_DA, in_locally_DA, in_MeDA, regex_to_min_dfa, syntactic_monoid,
    syntactic_semigroup,
)
from betweentl.checks import (
    beta_size_grid, beta_suite, delay_suite, pipeline_suite, sat_suite, threshold_reduction_suite,
)
from betweentl.corpus import curated
from betweentl.factorize import content, distinct_snapshots, run_sequence
from betweentl.games import GameSolver, decide_equiv_words, uniform_profile
from betweentl.sat import bounded_fo2_sat, shortest_model
from betweentl.translate.delay import expand_word
from betweentl.translate.factors import compute_overlaps
from betweentl.translate.reductions import TilingInstance, encode_tiling

AB = ("a", "b")


# ------------------------------------------------------------- 1. overlaps
@pytest.mark.criterion(1)
def test_overlap_examples():
    t0 = time.perf_counter()
    got = {
        ("aaa", "bbb"): compute_overlaps("aaa", "bbb").as_strings(),
        ("ababbb", "bbabab"): compute_overlaps("ababbb", "bbabab").as_strings(),
        ("aa", "aaaabbaaaa"): compute_overlaps("aa", "aaaabbaaaa").as_strings(),
    }
    expected = {
        ("aaa", "bbb"): {"Opre1": [], "Opost1": [], "Opre2": [], "Opost2": []},
        ("ababbb", "bbabab"): {"Opre1": ["bb", "bbab"], "Opost1": ["abab"],
                               "Opre2": [], "Opost2": []},
        ("aa", "aaaabbaaaa"): {"Opre1": ["aaaabbaaa"], "Opost1": ["aaabbaaaa"],
                               "Opre2": [""], "Opost2": ["aabbaaaa"]},
    }
    assert time.perf_counter() - t0 < 1.0
    for key in expected:
        assert got[key] == expected[key], key


# ------------------------------------------------------ 2. pipeline soundness
@pytest.mark.criterion(2)
def test_pipeline_soundness():
    t0 = time.perf_counter()
    out = pipeline_suite(n=200, seed=0, max_len=8)
    assert out["formulas"] >= 200
    assert out["mismatches"] == []
    assert time.perf_counter() - t0 <= 600


# ---------------------------------------------------------- 3. beta exhaustive
@pytest.mark.criterion(3)
def test_beta_construction():
    out = beta_suite(max_factor=4, max_len=9)
    assert out["cases"] == 30 * 30 * 3
    assert out["mismatches"] == []


# ------------------------------------------------------- 4. polynomial size
@pytest.mark.criterion(4)
def test_beta_size_polynomial():
    out = beta_size_grid(max_factor=5)
    print(f"fitted exponent of dag size: {out['exponent']}")
    assert out["exponent"] <= 3.0


# ---------------------------------------------------------- 5. algebra table
@pytest.mark.criterion(5)
def test_algebra_golden_table():
    t0 = time.perf_counter()

    def mono(regex):
        return syntactic_monoid(regex_to_min_dfa(regex, AB))

    M = mono("(ab)*")
    assert not in_DA(M) and in_MeDA(M) and in_aperiodic(M)
    assert in_DA(mono("a(a+b)*a+b(a+b)*b+a+b"))
    bab = "(a+b)*bab⁺ab(a+b)*"
    assert not in_locally_DA(syntactic_semigroup(regex_to_min_dfa(bab, AB)))
    assert in_MeDA(mono(bab))
    bb2 = mono("(a(ab)*b)*")
    assert in_aperiodic(bb2) and not in_MeDA(bb2)

    ev = M.evaluate
    assert len(M) == 6
    assert ev("aba") == ev("a") and ev("bab") == ev("b")
    zero = ev("aa")
    assert ev("bb") == zero and all(M.mul(zero, x) == zero == M.mul(x, zero) for x in M.members)
    assert time.perf_counter() - t0 < 10


# ---------------------------------------------------------- 6. satisfiability
@pytest.mark.criterion(6)
def test_shortest_models():
    assert "".join(shortest_model(curated("ab_plus"), AB)) == "ab"
    assert "".join(shortest_model(curated("stair2"), AB)) == "aaaaa"


@pytest.mark.criterion(6)
def test_automaton_languages():
    t0 = time.perf_counter()
    out = sat_suite(n=200, seed=0, max_len=7)
    assert out["mismatches"] == []
    assert time.perf_counter() - t0 < 300


# ------------------------------------------------------------------ 7. games
@pytest.mark.criterion(7)
def test_game_examples():
    assert decide_equiv_words("ab", "ba", 1) is True
    assert decide_equiv_words("ab", "ba", 2) is False


@pytest.mark.criterion(7)
def test_game_refinement_sweep():
    import itertools

    ws = [w for n in range(1, 6) for w in itertools.product(AB, repeat=n)]
    violations = []
    for w1, w2 in itertools.product(ws, repeat=2):
        base = GameSolver(w1, w2, uniform_profile(AB))
        for a in AB:
            theta = dict(uniform_profile(AB))
            theta[a] += 1
            bumped = GameSolver(w1, w2, theta)
            for k in (1, 2):
                if base.wins_unmarked(2 * k) and not bumped.wins_unmarked(k):
                    violations.append(("".join(w1), "".join(w2), a, k))
    assert violations == []


# ------------------------------------------------------------------ 8. delay
@pytest.mark.criterion(8)
def test_delay_expansion():
    out = delay_suite(min_len=3, max_len=6)
    assert out["mismatches"] == []


@pytest.mark.criterion(8)
def test_expand_word_example():
    assert expand_word("ababba", 3) == ("**a", "*ab", "aba", "bab", "abb", "bba")


# ------------------------------------------------------------- 9. reductions
@pytest.mark.criterion(9)
def test_tiling_reduction():
    trivial = TilingInstance.make(["t"], [("t", "t")], [("t", "t")], "t", "t", 1)
    enc = encode_tiling(trivial)
    assert bounded_fo2_sat(enc.formula, enc.alphabet, 12).status == "sat"
    blocked = TilingInstance.make(["t"], [], [("t", "t")], "t", "t", 1)
    enc = encode_tiling(blocked)
    assert bounded_fo2_sat(enc.formula, enc.alphabet, 12).status != "sat"


@pytest.mark.criterion(9)
def test_threshold_reduction():
    out = threshold_reduction_suite(n=20, seed=0, max_len=10)
    assert len(out["cases"]) == 20
    assert out["mismatches"] == []


# ---------------------------------------------------------- 10. factorization
WORKED_WORD = "adccdccadcaaaaddccdcccdbcdcaacabcbbd"
WORKED_ORDER = ["a", "ab", "ac", "abc", "ad", "abd", "acd"]
PRINTED = [
    "adccdcc·adc·a·a·a·addccdcccdbcdc·a·ac·abcbbd",
    "adccdcc·adc·aaa·addccdcccdbcdc·a·ac·abcbbd",
    "adccdcc·adc·aaaaddccdcccdbcdc·aac·abcbbd",
    "adccdcc·adc·aaaaddccdcccdbcdc·aacabcbbd",
    "adccdccadc·aaaaddccdcccdbcdc·aacabcbbd",
    "adccdccaddadaaaaddccdcccdbcdc·acabcbbd",
]


@pytest.mark.criterion(10)
def test_factorization_trace():
    final = run_sequence(WORKED_WORD, "a", "abcd", order=WORKED_ORDER)
    shown = ["·".join(s) for s in distinct_snapshots(final.trace)]
    assert shown == PRINTED


@pytest.mark.criterion(10)
def test_factorization_invariant():
    t0 = time.perf_counter()
    rng = random.Random(0)
    A = "abcd"
    for _ in range(500):
        x = [rng.choice(A) for _ in range(rng.randint(0, 15))]
        tail = list("bcd") + [rng.choice("bcd") for _ in range(rng.randint(0, 6))]
        rng.shuffle(tail)
        w = ["a"] + x + ["a"] + tail
        final = run_sequence(w, "a", A)
        assert "".join(final.strings()) == "".join(w)
        assert all(content(f) == set(A) for f in final.factors)
    assert time.perf_counter() - t0 < 60
