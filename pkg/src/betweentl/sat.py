"""Satisfiability and model extraction over finite words."""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import fo2 as F2
from .automata import DEFAULT_MAX_STATES, DFA, Budget
from .compiler import Compiler
from .semantics import BudgetExceeded, eval_fo2, iter_words
from .syntax import Formula, fragments, make_alphabet
from .translate.guards import CapExceeded
from .translate.pipeline import pipeline_to_ltl


def _word_out(w):
    if w is None:
        return None
    return "".join(w) if all(len(a) == 1 for a in w) else list(w)


@dataclass
class SatResult:
    satisfiable: bool
    model: tuple | None
    states_explored: int
    wall_ms: float
    method: str

    def to_dict(self, timing: bool = True) -> dict:
        d = {"satisfiable": self.satisfiable}
        if self.model is not None:
            d["model"] = _word_out(self.model)
        d["states_explored"] = self.states_explored
        d["method"] = self.method
        if timing:
            d["wall_ms"] = round(self.wall_ms, 3)
        return d


def ltl_to_nfa(f: Formula, alphabet, max_states: int = DEFAULT_MAX_STATES,
               budget: Budget | None = None) -> DFA:
    """Automaton accepting exactly the models of f.

    Built bottom-up: each subformula becomes the minimal deterministic
    automaton of the marked words satisfying it, past and future operators
    alike; next-powers X^n count n steps.  Guarded modalities compile to
    counting automata.  The result is deterministic, hence also an NFA.
    """
    budget = budget or Budget(max_states)
    return Compiler(alphabet, budget).tl_sentence(f)


def is_satisfiable(f: Formula, alphabet, method: str = "auto",
                   max_states: int = DEFAULT_MAX_STATES) -> SatResult:
    """Decide satisfiability; a model is the length-minimal, lex-least one.

    ``method``: ``"auto"`` (guarded formulas are first translated to LTL,
    falling back to counting automata when a threshold exceeds the
    unfolding cap), ``"pipeline"`` or ``"direct"``.
    """
    if method not in ("auto", "pipeline", "direct"):
        raise ValueError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    alphabet = make_alphabet(alphabet)
    budget = Budget(max_states)
    target, used = f, "direct"
    if "LTL" not in fragments(f) and method in ("auto", "pipeline"):
        try:
            target, used = pipeline_to_ltl(f), "pipeline"
        except CapExceeded:
            if method == "pipeline":
                raise
    elif "LTL" in fragments(f):
        used = "ltl"
    d = ltl_to_nfa(target, alphabet, budget=budget)
    model = d.shortest()
    ms = (time.perf_counter() - t0) * 1000
    return SatResult(model is not None, model, budget.explored, ms, used)


def shortest_model(f: Formula, alphabet, max_states: int = DEFAULT_MAX_STATES):
    """Length-minimal, then lexicographically least model, or None."""
    return is_satisfiable(f, alphabet, max_states=max_states).model


@dataclass
class BoundedResult:
    """Outcome of a bounded search: ``status`` is ``sat`` (model within the
    bound), ``unsat`` (no model of any length) or ``none-within-bound``."""

    status: str
    model: tuple | None
    shortest_length: int | None
    states_explored: int
    wall_ms: float
    method: str

    @property
    def satisfiable(self):
        return {"sat": True, "unsat": False}.get(self.status)

    def to_dict(self, timing: bool = True) -> dict:
        d = {"status": self.status, "satisfiable": self.satisfiable}
        if self.model is not None:
            d["model"] = _word_out(self.model)
        if self.shortest_length is not None:
            d["shortest_length"] = self.shortest_length
        d["states_explored"] = self.states_explored
        d["method"] = self.method
        if timing:
            d["wall_ms"] = round(self.wall_ms, 3)
        return d


def fo2_automaton(f: F2.FO, alphabet, max_states: int = DEFAULT_MAX_STATES,
                  budget: Budget | None = None) -> DFA:
    budget = budget or Budget(max_states)
    return Compiler(alphabet, budget).fo_sentence(f)


def bounded_fo2_sat(f: F2.FO, alphabet, max_len: int,
                    max_states: int = DEFAULT_MAX_STATES, max_words: int = 2_000_000) -> BoundedResult:
    """Look for a model of length at most max_len.

    The sentence is compiled to an automaton, which also proves
    unsatisfiability.  If the automaton exceeds its state budget, words are
    enumerated instead and the answer can only be ``sat`` or
    ``none-within-bound``.
    """
    t0 = time.perf_counter()
    alphabet = make_alphabet(alphabet)
    budget = Budget(max_states)
    try:
        d = fo2_automaton(f, alphabet, budget=budget)
    except BudgetExceeded:
        explored = 0
        for w in iter_words(alphabet, max_len):
            explored += 1
            if explored > max_words:
                raise BudgetExceeded(f"search exceeded {max_words} words") from None
            if eval_fo2(f, w):
                ms = (time.perf_counter() - t0) * 1000
                return BoundedResult("sat", tuple(w), None, budget.explored + explored, ms, "search")
        ms = (time.perf_counter() - t0) * 1000
        return BoundedResult("none-within-bound", None, None, budget.explored + explored, ms, "search")
    model = d.shortest()
    ms = (time.perf_counter() - t0) * 1000
    if model is None:
        return BoundedResult("unsat", None, None, budget.explored, ms, "automaton")
    if len(model) <= max_len:
        return BoundedResult("sat", model, len(model), budget.explored, ms, "automaton")
    return BoundedResult("none-within-bound", None, len(model), budget.explored, ms, "automaton")


__all__ = [
    "SatResult", "BoundedResult", "ltl_to_nfa", "is_satisfiable", "shortest_model",
    "bounded_fo2_sat", "fo2_automaton",
]
