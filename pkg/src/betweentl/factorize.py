"""Factorization sequences of a-words.

An *a-word* over A has content A, starts with ``a``, and ``a`` is the last
letter met when scanning from the right.  Starting from the factorization
at every occurrence of ``a``, each proper subalphabet B ∋ a is processed in
a fixed linear order extending inclusion: runs of consecutive factors with
content exactly B are merged (*collect*), then every factor with content B
is merged with its right neighbour (*cap*).  At the end every factor has
full content.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence


def content(u: Iterable[str]) -> frozenset:
    return frozenset(u)


def is_a_word(w: Sequence[str], a: str, alphabet: Iterable[str] | None = None) -> bool:
    """Content A, first letter a, and the suffix after the last a has content A \\ {a}."""
    w = tuple(w)
    A = frozenset(alphabet) if alphabet is not None else content(w)
    if not w or content(w) != A or w[0] != a:
        return False
    last = max(i for i, c in enumerate(w) if c == a)
    return content(w[last + 1:]) == A - {a}


def subalphabet_order(alphabet: Iterable[str], a: str) -> list[frozenset]:
    """Proper subalphabets containing a, by size and then lexicographically."""
    A = sorted(set(alphabet))
    if a not in A:
        raise ValueError(f"letter {a!r} is not in the alphabet")
    rest = [b for b in A if b != a]
    out = []
    for size in range(len(rest)):
        for combo in itertools.combinations(rest, size):
            out.append(frozenset((a,) + combo))
    return out


def _check_order(order: Sequence[frozenset], alphabet: frozenset, a: str):
    expected = set(subalphabet_order(alphabet, a))
    got = [frozenset(B) for B in order]
    if set(got) != expected or len(got) != len(expected):
        raise ValueError("order must list every proper subalphabet containing a exactly once")
    for i, B in enumerate(got):
        for C in got[:i]:
            if B < C:
                raise ValueError("order must extend inclusion")


def set_text(B: Iterable[str]) -> str:
    return "{" + ",".join(sorted(B)) + "}"


@dataclass
class FactorizationState:
    """A factorization of ``word`` by 1-based factor start positions."""

    word: tuple
    boundaries: tuple
    trace: list = field(default_factory=list)

    def __post_init__(self):
        self.word = tuple(self.word)
        self.boundaries = tuple(self.boundaries)
        if not self.boundaries or self.boundaries[0] != 1:
            raise ValueError("the first factor must start at position 1")
        if any(b >= c for b, c in zip(self.boundaries, self.boundaries[1:])):
            raise ValueError("boundaries must be strictly increasing")
        if self.boundaries[-1] > len(self.word):
            raise ValueError("boundary beyond the end of the word")

    @property
    def factors(self) -> list[tuple]:
        ends = list(self.boundaries[1:]) + [len(self.word) + 1]
        return [self.word[b - 1:e - 1] for b, e in zip(self.boundaries, ends)]

    def strings(self) -> list[str]:
        return ["".join(f) for f in self.factors]

    def render(self) -> str:
        return "·".join(self.strings())

    def _with(self, boundaries, label) -> "FactorizationState":
        st = FactorizationState(self.word, tuple(boundaries), list(self.trace))
        st.trace.append({"step": label, "factors": st.strings()})
        return st


def initial_factorization(w: Sequence[str], a: str,
                          alphabet: Iterable[str] | None = None) -> FactorizationState:
    """Factor w as a·u1 ⋯ a·uk, one factor per occurrence of a."""
    w = tuple(w)
    if not is_a_word(w, a, alphabet):
        raise ValueError(f"{''.join(w)!r} is not an {a}-word")
    starts = [i for i, c in enumerate(w, start=1) if c == a]
    st = FactorizationState(w, starts)
    st.trace.append({"step": "initial", "factors": st.strings()})
    return st


def collect(state: FactorizationState, B: Iterable[str]) -> FactorizationState:
    """Merge every maximal run of consecutive factors with content exactly B."""
    B = frozenset(B)
    keep = []
    prev_is_B = False
    for b, f in zip(state.boundaries, state.factors):
        is_B = content(f) == B
        if not (is_B and prev_is_B):
            keep.append(b)
        prev_is_B = is_B
    return state._with(keep, f"collect {set_text(B)}")


def cap(state: FactorizationState, B: Iterable[str]) -> FactorizationState:
    """Merge every factor with content B into its right neighbour."""
    B = frozenset(B)
    facs = state.factors
    keep = []
    merged_into_left = False
    for idx, (b, f) in enumerate(zip(state.boundaries, facs)):
        if not merged_into_left:
            keep.append(b)
        merged_into_left = content(f) == B and idx + 1 < len(facs)
    return state._with(keep, f"cap {set_text(B)}")


def run_sequence(w: Sequence[str], a: str, alphabet: Iterable[str] | None = None,
                 order: Sequence[Iterable[str]] | None = None) -> FactorizationState:
    """Run the collect/cap sweep; the result's ``trace`` records every sub-step."""
    w = tuple(w)
    A = frozenset(alphabet) if alphabet is not None else content(w)
    state = initial_factorization(w, a, A)
    if order is None:
        order = subalphabet_order(A, a)
    else:
        order = [frozenset(B) for B in order]
        _check_order(order, A, a)
    for B in order:
        state = cap(collect(state, B), B)
    return state


def distinct_snapshots(trace: list[dict]) -> list[list[str]]:
    """The factorizations of a trace with consecutive repeats removed."""
    out: list[list[str]] = []
    for item in trace:
        if not out or out[-1] != item["factors"]:
            out.append(item["factors"])
    return out


__all__ = [
    "content", "is_a_word", "subalphabet_order", "FactorizationState", "initial_factorization",
    "collect", "cap", "run_sequence", "distinct_snapshots", "set_text",
]
