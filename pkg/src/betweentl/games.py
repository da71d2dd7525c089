"""Ehrenfeucht–Fraïssé games for FO2[<,bet] and its threshold variant.

A round: Player 1 moves the pebble in one word to a new position; Player 2
answers in the other word, moving in the same direction onto the same
letter, and for each letter ``a`` the numbers of ``a``'s jumped over must be
equal or both at least ``theta(a)``.  With ``theta`` identically 1 this is
the game for betweenness (same *set* of jumped letters).

Positions are 1-based.  Solving is a memoized minimax over
(position, position, rounds left); jump counts are truncated at ``theta``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

Profile = Mapping[str, int]


def uniform_profile(alphabet: Sequence[str], value: int = 1) -> dict[str, int]:
    return {a: value for a in alphabet}


def _profile(w1, w2, theta: Profile | None) -> dict[str, int]:
    letters = sorted(set(w1) | set(w2) | set(theta or ()))
    prof = {a: 1 for a in letters}
    if theta:
        for a, t in theta.items():
            if t < 1:
                raise ValueError(f"threshold for {a!r} must be positive, got {t}")
            prof[a] = int(t)
    return prof


class _Arena:
    """Prefix counts of the two words and the jump signatures of all moves."""

    def __init__(self, w1, w2, theta: Profile | None):
        self.words = (tuple(w1), tuple(w2))
        self.theta = _profile(w1, w2, theta)
        self.letters = tuple(self.theta)
        caps = np.array([self.theta[a] for a in self.letters])
        self.caps = caps
        # prefix[s][p, a] = number of a's among the first p letters of word s
        self.prefix = []
        for w in self.words:
            onehot = np.zeros((len(w) + 1, len(self.letters)), dtype=np.int64)
            for p, c in enumerate(w, start=1):
                onehot[p, self.letters.index(c)] = 1
            self.prefix.append(np.cumsum(onehot, axis=0))

    def signature(self, side: int, j: int, j2: int) -> tuple:
        """Truncated per-letter counts strictly between positions j and j2."""
        lo, hi = min(j, j2), max(j, j2)
        pre = self.prefix[side]
        counts = pre[hi - 1] - pre[lo]
        return tuple(np.minimum(counts, self.caps).tolist())

    def responses(self, side: int, j: int, j_new: int, other_j: int) -> list[int]:
        """Legal answers in the other word to the move j -> j_new in word ``side``."""
        w, v = self.words[side], self.words[1 - side]
        sig = self.signature(side, j, j_new)
        right = j_new > j
        rng = range(other_j + 1, len(v) + 1) if right else range(1, other_j)
        return [p for p in rng if v[p - 1] == w[j_new - 1]
                and self.signature(1 - side, other_j, p) == sig]


def legal_response(w1: Sequence[str], j1: int, j1_new: int, w2: Sequence[str], j2: int,
                   theta: Profile | None = None) -> set[int]:
    """Positions of w2 that legally answer Player 1's move j1 -> j1_new in w1."""
    if j1 == j1_new:
        raise ValueError("a move must change the pebble position")
    for w, j in ((w1, j1), (w1, j1_new), (w2, j2)):
        if not 1 <= j <= len(w):
            raise ValueError(f"position {j} out of range for a word of length {len(w)}")
    return set(_Arena(w1, w2, theta).responses(0, j1, j1_new, j2))


class GameSolver:
    """Memoized solver for one pair of words and one threshold profile."""

    def __init__(self, w1: Sequence[str], w2: Sequence[str], theta: Profile | None = None):
        self.arena = _Arena(w1, w2, theta)
        self.w1, self.w2 = self.arena.words
        self.wins = lru_cache(maxsize=None)(self._wins)

    def _moves(self, j1: int, j2: int):
        """Player 1's options: (side, new position, legal answers)."""
        for side, (j, other) in enumerate(((j1, j2), (j2, j1))):
            n = len(self.arena.words[side])
            for p in range(1, n + 1):
                if p != j:
                    yield side, p, self.arena.responses(side, j, p, other)

    def _wins(self, j1: int, j2: int, k: int) -> bool:
        """Player 2 wins the k-round game from (w1, j1), (w2, j2)."""
        if self.w1[j1 - 1] != self.w2[j2 - 1]:
            return False
        if k == 0:
            return True
        for side, p, answers in self._moves(j1, j2):
            pairs = [(p, q) if side == 0 else (q, p) for q in answers]
            if not any(self.wins(a, b, k - 1) for a, b in pairs):
                return False
        return True

    def wins_unmarked(self, k: int) -> bool:
        if k == 0:
            return True
        for side, w in enumerate((self.w1, self.w2)):
            v = (self.w2, self.w1)[side]
            for p in range(1, len(w) + 1):
                answers = [q for q in range(1, len(v) + 1) if v[q - 1] == w[p - 1]]
                pairs = [(p, q) if side == 0 else (q, p) for q in answers]
                if not any(self.wins(a, b, k - 1) for a, b in pairs):
                    return False
        return True

    # ----------------------------------------------------------- strategies
    def spoiler_tree(self, j1: int, j2: int, k: int) -> dict:
        """Player 1's winning strategy as a move tree (requires a Player 1 win)."""
        if self.w1[j1 - 1] != self.w2[j2 - 1]:
            return {"rounds": k, "letters_differ": [self.w1[j1 - 1], self.w2[j2 - 1]]}
        for side, p, answers in self._moves(j1, j2):
            pairs = [((p, q) if side == 0 else (q, p), q) for q in answers]
            if not any(self.wins(a, b, k - 1) for (a, b), _ in pairs):
                return {
                    "rounds": k,
                    "move": {"word": side + 1, "from": (j1, j2)[side], "to": p},
                    "replies": {str(q): self.spoiler_tree(a, b, k - 1) for (a, b), q in pairs},
                }
        raise ValueError("Player 2 wins this game")

    def duplicator_tree(self, j1: int, j2: int, k: int) -> dict:
        """Player 2's winning strategy: one winning answer per Player 1 move."""
        if not self.wins(j1, j2, k):
            raise ValueError("Player 1 wins this game")
        node = {"rounds": k, "positions": [j1, j2]}
        if k == 0:
            return node
        answers = []
        for side, p, options in self._moves(j1, j2):
            for q in options:
                a, b = (p, q) if side == 0 else (q, p)
                if self.wins(a, b, k - 1):
                    answers.append({"word": side + 1, "to": p, "answer": q,
                                    "then": self.duplicator_tree(a, b, k - 1)})
                    break
        node["answers"] = answers
        return node


def decide_equiv(m1, m2, k: int, theta: Profile | None = None) -> bool:
    """Whether Player 2 wins the k-round game on two marked words.

    ``m1``/``m2`` are ``(word, position)`` pairs or MarkedWord values.
    """
    (w1, i1), (w2, i2) = _marked(m1), _marked(m2)
    if k < 0:
        raise ValueError("number of rounds must be nonnegative")
    return GameSolver(w1, w2, theta).wins(i1, i2, k)


def decide_equiv_words(w1: Sequence[str], w2: Sequence[str], k: int,
                       theta: Profile | None = None) -> bool:
    """Whether Player 2 wins the k-round game on two unmarked words.

    The first round places the pebbles; k = 0 is a win for Player 2 by
    convention.  An empty word can only match another empty word once a
    round is played.
    """
    if k < 0:
        raise ValueError("number of rounds must be nonnegative")
    return GameSolver(tuple(w1), tuple(w2), theta).wins_unmarked(k)


def _marked(m) -> tuple[tuple, int]:
    if hasattr(m, "word"):
        return tuple(m.word), m.position
    w, i = m
    w = tuple(w)
    if not 1 <= i <= len(w):
        raise ValueError(f"position {i} out of range for a word of length {len(w)}")
    return w, i


def game_report(w1, w2, k: int, theta: Profile | None = None, marks=None) -> dict:
    """JSON-ready verdict with the winner's strategy tree."""
    w1, w2 = tuple(w1), tuple(w2)
    solver = GameSolver(w1, w2, theta)
    out = {"words": ["".join(w1), "".join(w2)], "rounds": k, "theta": solver.arena.theta}
    if marks is not None:
        i1, i2 = marks
        out["marks"] = [i1, i2]
        equivalent = solver.wins(i1, i2, k)
        out["equivalent"] = equivalent
        out["strategy"] = (solver.duplicator_tree(i1, i2, k) if equivalent
                           else solver.spoiler_tree(i1, i2, k))
        return out
    equivalent = solver.wins_unmarked(k)
    out["equivalent"] = equivalent
    if not equivalent:
        out["strategy"] = _unmarked_spoiler(solver, k)
    return out


def _unmarked_spoiler(solver: GameSolver, k: int) -> dict:
    for side, w in enumerate((solver.w1, solver.w2)):
        v = (solver.w2, solver.w1)[side]
        for p in range(1, len(w) + 1):
            answers = [q for q in range(1, len(v) + 1) if v[q - 1] == w[p - 1]]
            pairs = [((p, q) if side == 0 else (q, p), q) for q in answers]
            if not any(solver.wins(a, b, k - 1) for (a, b), _ in pairs):
                return {"rounds": k, "place": {"word": side + 1, "at": p},
                        "replies": {str(q): solver.spoiler_tree(a, b, k - 1) for (a, b), q in pairs}}
    raise ValueError("Player 2 wins this game")


__all__ = [
    "uniform_profile", "legal_response", "GameSolver", "decide_equiv", "decide_equiv_words",
    "game_report",
]
