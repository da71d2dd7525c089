"""Oracle-equivalence suites shared by the ``corpus`` command and the tests.

Every suite compares a construction against the reference semantics on all
words up to a length bound and returns a JSON-ready summary whose
``mismatches`` list is empty on success.
"""

from __future__ import annotations

import itertools
import random
import time
from typing import Iterable, Sequence

import numpy as np

from . import fo2 as F2
from .corpus import AB, CURATED_TL, curated, guarded_corpus
from .semantics import BatchEval, all_words, eval_fo2
from .syntax import atom, dag_size, fut, make_alphabet, render
from .translate.delay import delay_fo2, expand_fo2, expand_word
from .translate.factors import build_beta, pair_guard
from .translate.guards import DEFAULT_CAP
from .translate.pipeline import pipeline_stages


class WordOracle:
    """Batched evaluation on all words of each length in a range."""

    def __init__(self, alphabet, max_len: int, min_len: int = 0):
        self.alphabet = make_alphabet(alphabet)
        self.lengths = range(min_len, max_len + 1)
        self.evals = [BatchEval(all_words(self.alphabet, n), self.alphabet) for n in self.lengths]

    def first_difference(self, f, g) -> int | None:
        """Least length at which f and g disagree on some word, or None."""
        for n, ev in zip(self.lengths, self.evals):
            if not np.array_equal(self._eval(ev, f), self._eval(ev, g)):
                return n
        return None

    @staticmethod
    def _eval(ev: BatchEval, f):
        return ev.fo2_sentence(f) if isinstance(f, F2.FO) else ev.tl_sentence(f)

    def models(self, f) -> list[tuple]:
        out = []
        for n, ev in zip(self.lengths, self.evals):
            mask = self._eval(ev, f)
            out.extend(tuple(self.alphabet[i] for i in row) for row in ev.W[mask])
        return out


def pipeline_suite(n: int = 200, seed: int = 0, max_len: int = 8, cap: int = DEFAULT_CAP) -> dict:
    """Every pipeline stage preserves the models of every corpus formula."""
    t0 = time.perf_counter()
    oracles: dict = {}
    mismatches, worst = [], 0
    corpus = guarded_corpus(n, seed)
    stages_checked = 0
    for idx, (f, alphabet) in enumerate(corpus):
        oracle = oracles.get(alphabet) or oracles.setdefault(alphabet, WordOracle(alphabet, max_len))
        stages = pipeline_stages(f, cap)
        for name, g in stages[1:]:
            stages_checked += 1
            diff = oracle.first_difference(f, g)
            if diff is not None:
                mismatches.append({"index": idx, "formula": render(f), "stage": name, "length": diff})
        worst = max(worst, dag_size(stages[-1][1]))
    return {
        "suite": "translations", "formulas": len(corpus), "stages_checked": stages_checked,
        "max_len": max_len, "seed": seed, "largest_output_dag": worst,
        "mismatches": mismatches, "wall_ms": round((time.perf_counter() - t0) * 1000, 3),
    }


BETA_CHILDREN = {"a": atom("a"), "b": atom("b"), "F a": fut(atom("a"))}


def _words(alphabet, lo: int, hi: int) -> list[tuple]:
    return [w for n in range(lo, hi + 1) for w in itertools.product(alphabet, repeat=n)]


def beta_suite(max_factor: int = 4, max_len: int = 9, alphabet=AB) -> dict:
    """build_beta(u, v, γ) agrees with F_{u,¬v} γ for all short u, v."""
    t0 = time.perf_counter()
    oracle = WordOracle(alphabet, max_len, min_len=1)
    mismatches = []
    pairs = 0
    for u in _words(alphabet, 1, max_factor):
        for v in _words(alphabet, 1, max_factor):
            for name, g in BETA_CHILDREN.items():
                pairs += 1
                diff = oracle.first_difference(fut(g, pair_guard(u, v)), build_beta(u, v, g))
                if diff is not None:
                    mismatches.append({"u": "".join(u), "v": "".join(v), "child": name, "length": diff})
    return {"suite": "beta", "cases": pairs, "max_len": max_len, "mismatches": mismatches,
            "wall_ms": round((time.perf_counter() - t0) * 1000, 3)}


def fit_exponent(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Slope of the least-squares line through (log x, log y)."""
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


SIZE_CHILDREN = {
    "a": "a", "F a": "F a", "F(a & X b)": "F(a & X b)",
    "F(a & F(b & F a))": "F(a & F(b & F a))",
}


def beta_size_grid(max_factor: int = 5, alphabet=AB) -> dict:
    """dag_size of build_beta against |u| + |v| + dag_size(γ)."""
    from .syntax import parse_tl

    points = []
    for u in _words(alphabet, 1, max_factor):
        for v in _words(alphabet, 1, max_factor):
            for text in SIZE_CHILDREN.values():
                g = parse_tl(text, alphabet)
                n = len(u) + len(v) + dag_size(g)
                points.append({"u": "".join(u), "v": "".join(v), "child": text, "n": n,
                               "size": dag_size(build_beta(u, v, g))})
    # fit the worst case at each input size
    by_n: dict = {}
    for p in points:
        by_n[p["n"]] = max(by_n.get(p["n"], 0), p["size"])
    ns = sorted(by_n)
    exponent = fit_exponent(ns, [by_n[n] for n in ns])
    return {"suite": "beta-size", "points": points, "worst": {str(n): by_n[n] for n in ns},
            "exponent": round(exponent, 4)}


def sat_suite(n: int = 60, seed: int = 0, max_len: int = 7) -> dict:
    """Automaton languages equal brute-force model sets (curated + random)."""
    from .sat import is_satisfiable, ltl_to_nfa
    from .translate.pipeline import pipeline_to_ltl

    t0 = time.perf_counter()
    cases = [(name, curated(name), make_alphabet(CURATED_TL[name][1])) for name in CURATED_TL]
    cases += [(f"random-{i}", f, make_alphabet(al)) for i, (f, al) in enumerate(guarded_corpus(n, seed))]
    mismatches = []
    for name, f, alphabet in cases:
        oracle = WordOracle(alphabet, max_len)
        expected = oracle.models(f)
        target = pipeline_to_ltl(f)
        d = ltl_to_nfa(target, alphabet)
        got = [tuple(w) for w in d.words(max_len)]
        if sorted(got) != sorted(expected):
            mismatches.append({"case": name, "formula": render(f), "what": "language"})
            continue
        res = is_satisfiable(f, alphabet)
        if expected and (not res.satisfiable or len(res.model) > len(expected[0])):
            mismatches.append({"case": name, "formula": render(f), "what": "shortest model"})
    return {"suite": "sat", "cases": len(cases), "max_len": max_len, "mismatches": mismatches,
            "wall_ms": round((time.perf_counter() - t0) * 1000, 3)}


DELAY_SENTENCES = [
    'exists x exists y fac("ab")(x,y)',
    'forall x (a(x) -> exists y (x < y & fac("ba")(x,y)))',
    'exists x exists y (x < y & !fac("aa")(x,y) & b(x) & b(y))',
    'exists x exists y facth("ab",2)(x,y)',
    'forall x forall y ((fac("aab")(x,y)) -> !b(y))',
    'exists x (a(x) & forall y (x < y -> !fac("bb")(x,y)))',
]


def delay_suite(sentences: Iterable[str] = DELAY_SENTENCES, alphabet=AB,
                min_len: int = 3, max_len: int = 6, expand: bool = True) -> dict:
    """w |= φ iff w'' |= delay(φ), and iff w |= expand(delay(φ)), for all words in range."""
    t0 = time.perf_counter()
    alphabet = make_alphabet(alphabet)
    sentences = list(sentences)
    mismatches, checked = [], 0
    for text in sentences:
        f = F2.parse_fo2(text, alphabet)
        k, g = delay_fo2(f, alphabet)
        h = expand_fo2(g, alphabet, k) if expand else None
        for w in _words(alphabet, max(min_len, k - 1), max_len):
            checked += 1
            want = eval_fo2(f, w)
            if eval_fo2(g, expand_word(w, k)) != want:
                mismatches.append({"sentence": text, "word": "".join(w), "what": "delay"})
            elif h is not None and eval_fo2(h, w) != want:
                mismatches.append({"sentence": text, "word": "".join(w), "what": "expand"})
    return {"suite": "delay", "sentences": len(sentences), "words_checked": checked,
            "mismatches": mismatches, "wall_ms": round((time.perf_counter() - t0) * 1000, 3)}


def random_fo2_threshold(rng: random.Random, alphabet=AB, max_bound: int = 4) -> F2.FO:
    """A small FO2[<,th] sentence for the counter reduction tests.

    All threshold atoms count the same letter, so the reduction adds a
    single counter and the encoded sentence stays at desk scale.
    """
    a = rng.choice(alphabet)
    k = rng.randint(2, max_bound)
    x, y = "x", "y"
    core = F2.th(a, k, x, y)
    extras = [
        F2.letter(rng.choice(alphabet), x), F2.letter(rng.choice(alphabet), y),
        F2.fnot(F2.th(a, k + 1, x, y)), F2.fnot(F2.bet(rng.choice(alphabet), x, y)),
        F2.th(a, rng.randint(1, 2), x, y),
    ]
    body = F2.fand(core, *rng.sample(extras, rng.randint(0, 2)))
    if rng.random() < 0.3:
        return F2.forall(x, F2.forall(y, F2.fimp(F2.lt(x, y), F2.fnot(body))))
    return F2.exists(x, F2.exists(y, body))


def threshold_reduction_suite(n: int = 20, seed: int = 0, max_len: int = 10) -> dict:
    """The counter reduction preserves satisfiability within the bound."""
    from .sat import bounded_fo2_sat
    from .translate.reductions import fo2_threshold_to_between

    t0 = time.perf_counter()
    rng = random.Random(seed)
    rows, mismatches = [], []
    fixed = [
        "exists x exists y th(a,4)(x,y)",
        "exists x exists y (th(a,2)(x,y) & !a(x,y))",
    ]
    sentences = [F2.parse_fo2(s, AB) for s in fixed]
    while len(sentences) < n:
        sentences.append(random_fo2_threshold(rng))
    for f in sentences:
        enc = fo2_threshold_to_between(f, AB)
        left = bounded_fo2_sat(f, AB, max_len)
        right = bounded_fo2_sat(enc.formula, enc.alphabet, max_len)
        ok = left.status == right.status
        if ok and right.model is not None and not eval_fo2(f, enc.project(right.model)):
            ok = False
        row = {"formula": F2.render_fo2(f), "input": left.status, "output": right.status,
               "letters": len(enc.alphabet), "size": F2.fo2_size(enc.formula)}
        rows.append(row)
        if not ok:
            mismatches.append(row)
    return {"suite": "threshold-reduction", "cases": rows, "max_len": max_len,
            "mismatches": mismatches, "wall_ms": round((time.perf_counter() - t0) * 1000, 3)}


SUITES = {
    "translations": pipeline_suite,
    "beta": beta_suite,
    "beta-size": beta_size_grid,
    "sat": sat_suite,
    "delay": delay_suite,
    "threshold-reduction": threshold_reduction_suite,
}


__all__ = [
    "WordOracle", "pipeline_suite", "beta_suite", "beta_size_grid", "fit_exponent", "sat_suite",
    "delay_suite", "threshold_reduction_suite", "random_fo2_threshold", "SUITES",
    "DELAY_SENTENCES",
]
