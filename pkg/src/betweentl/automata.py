"""Deterministic automata over letters with position-marking tracks.

A :class:`DFA` reads words whose symbols pair a letter with one bit per
track.  Tracks carry first-order variables (a track marks exactly one
position once it is quantified), so a formula with free variables compiles
to the language of its satisfying marked words.  Automata with no tracks are
ordinary DFAs over the letters.

Symbol encoding: ``s = letter_index * 2**T + bits`` where bit ``j`` is the
mark of ``tracks[j]`` and T is the number of tracks.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .semantics import BudgetExceeded

DEFAULT_MAX_STATES = 200_000


class Budget:
    """Shared state budget and exploration counter."""

    def __init__(self, max_states: int = DEFAULT_MAX_STATES):
        self.max_states = max_states
        self.explored = 0

    def charge(self, n_states: int):
        self.explored += n_states
        if n_states > self.max_states:
            raise BudgetExceeded(f"automaton exceeded {self.max_states} states")


class DFA:
    __slots__ = ("letters", "tracks", "delta", "final")

    def __init__(self, letters: Sequence[str], tracks: Sequence[str], delta, final):
        self.letters = tuple(letters)
        self.tracks = tuple(tracks)
        self.delta = np.asarray(delta, dtype=np.int32)
        self.final = np.asarray(final, dtype=bool)
        if list(self.tracks) != sorted(set(self.tracks)):
            raise ValueError("tracks must be sorted and distinct")
        if self.delta.shape != (len(self.final), self.n_symbols):
            raise ValueError("transition table has the wrong shape")

    # ------------------------------------------------------------ basics
    @property
    def n_states(self) -> int:
        return len(self.final)

    @property
    def n_symbols(self) -> int:
        return len(self.letters) << len(self.tracks)

    def symbol(self, letter_index: int, bits: int = 0) -> int:
        return (letter_index << len(self.tracks)) | bits

    def __repr__(self):
        return f"DFA(states={self.n_states}, letters={self.letters}, tracks={self.tracks})"

    def run(self, word: Sequence[str], marks: dict | None = None) -> int:
        """State reached on a word; marks maps track names to 1-based positions."""
        marks = marks or {}
        index = {a: i for i, a in enumerate(self.letters)}
        q = 0
        for pos, a in enumerate(word, start=1):
            bits = 0
            for j, t in enumerate(self.tracks):
                if marks.get(t) == pos:
                    bits |= 1 << j
            q = int(self.delta[q, self.symbol(index[a], bits)])
        return q

    def accepts(self, word: Sequence[str], marks: dict | None = None) -> bool:
        return bool(self.final[self.run(word, marks)])

    # ------------------------------------------------------ construction
    @classmethod
    def from_step(cls, letters, tracks, init: Hashable, step: Callable, accept: Callable,
                  budget: Budget | None = None) -> "DFA":
        """Explore ``step(state, letter_index, bits)`` from ``init``."""
        tracks = tuple(tracks)
        m = len(letters) << len(tracks)
        ids = {init: 0}
        order = [init]
        rows = []
        mask = (1 << len(tracks)) - 1
        i = 0
        while i < len(order):
            st = order[i]
            row = np.empty(m, dtype=np.int32)
            for s in range(m):
                nxt = step(st, s >> len(tracks), s & mask)
                j = ids.get(nxt)
                if j is None:
                    j = ids[nxt] = len(order)
                    order.append(nxt)
                    if budget is not None and len(order) > budget.max_states:
                        budget.charge(len(order))
                row[s] = j
            rows.append(row)
            i += 1
        if budget is not None:
            budget.charge(len(order))
        final = [bool(accept(st)) for st in order]
        return cls(letters, tracks, np.array(rows, dtype=np.int32).reshape(len(order), m), final)

    @classmethod
    def universal(cls, letters, tracks=()) -> "DFA":
        return cls(letters, tracks, np.zeros((1, len(letters) << len(tracks)), np.int32), [True])

    @classmethod
    def empty(cls, letters, tracks=()) -> "DFA":
        return cls(letters, tracks, np.zeros((1, len(letters) << len(tracks)), np.int32), [False])

    # ------------------------------------------------------- minimisation
    def reachable(self, start: int = 0) -> "DFA":
        """Drop unreachable states; breadth-first numbering from ``start``."""
        seen = np.zeros(self.n_states, dtype=bool)
        seen[start] = True
        order = [start]
        i = 0
        while i < len(order):
            for t in self.delta[order[i]].tolist():
                if not seen[t]:
                    seen[t] = True
                    order.append(t)
            i += 1
        return self._renumber(order)

    def _renumber(self, order) -> "DFA":
        order = list(order)
        new = np.full(self.n_states, -1, dtype=np.int32)
        new[order] = np.arange(len(order), dtype=np.int32)
        delta = new[self.delta[order]]
        return DFA(self.letters, self.tracks, delta, self.final[order])

    def minimize(self) -> "DFA":
        """Minimal complete DFA, states numbered in breadth-first order."""
        d = self.reachable()
        cls_ = d.final.astype(np.int64)
        n_cls = len(np.unique(cls_))
        while True:
            sig = np.concatenate([cls_[:, None], cls_[d.delta]], axis=1)
            _, inv = np.unique(sig, axis=0, return_inverse=True)
            inv = inv.reshape(-1)
            n_new = int(inv.max()) + 1 if len(inv) else 0
            cls_ = inv.astype(np.int64)
            if n_new == n_cls:
                break
            n_cls = n_new
        # one representative per class, then canonical breadth-first order
        rep = np.zeros(n_cls, dtype=np.int64)
        rep[cls_[::-1]] = np.arange(d.n_states)[::-1]
        q = DFA(d.letters, d.tracks, cls_[d.delta[rep]], d.final[rep])
        return q.reachable(int(cls_[0]))

    # ----------------------------------------------------------- boolean
    def complement(self) -> "DFA":
        return DFA(self.letters, self.tracks, self.delta, ~self.final)

    def with_tracks(self, tracks: Iterable[str]) -> "DFA":
        """The same language, ignoring the extra tracks."""
        tracks = tuple(sorted(set(tracks)))
        if tracks == self.tracks:
            return self
        if not set(self.tracks) <= set(tracks):
            raise ValueError("can only add tracks")
        cols = _column_map(tracks, self.tracks, len(self.letters))
        return DFA(self.letters, tracks, self.delta[:, cols], self.final)

    def rename(self, old: str, new: str) -> "DFA":
        if old == new or old not in self.tracks:
            return self
        if new in self.tracks:
            raise ValueError(f"track {new!r} already present")
        names = [new if t == old else t for t in self.tracks]
        target = tuple(sorted(names))
        # column for each target symbol: translate target bits into source bits
        cols = _column_map(target, tuple(names), len(self.letters))
        return DFA(self.letters, target, self.delta[:, cols], self.final)

    def product(self, other: "DFA", op: str, budget: Budget | None = None) -> "DFA":
        if self.letters != other.letters:
            raise ValueError("letter alphabets differ")
        tracks = tuple(sorted(set(self.tracks) | set(other.tracks)))
        a, b = self.with_tracks(tracks), other.with_tracks(tracks)
        combine = {"and": np.logical_and, "or": np.logical_or,
                   "xor": np.logical_xor, "diff": lambda x, y: x & ~y}[op]
        nb = b.n_states
        ids = {0: 0}
        order = [0]
        rows = []
        i = 0
        while i < len(order):
            code = order[i]
            p, q = divmod(code, nb)
            codes = a.delta[p].astype(np.int64) * nb + b.delta[q]
            row = np.empty(len(codes), dtype=np.int32)
            for s, c in enumerate(codes.tolist()):
                j = ids.get(c)
                if j is None:
                    j = ids[c] = len(order)
                    order.append(c)
                row[s] = j
            rows.append(row)
            i += 1
            if budget is not None and len(order) > budget.max_states:
                budget.charge(len(order))
        if budget is not None:
            budget.charge(len(order))
        codes = np.array(order, dtype=np.int64)
        final = combine(a.final[codes // nb], b.final[codes % nb])
        return DFA(self.letters, tracks, np.array(rows, np.int32), final).minimize()

    def __and__(self, other):
        return self.product(other, "and")

    def __or__(self, other):
        return self.product(other, "or")

    # ------------------------------------------------------- projection
    def project(self, track: str, budget: Budget | None = None) -> "DFA":
        """Existentially quantify a track away (subset construction)."""
        if track not in self.tracks:
            return self
        j = self.tracks.index(track)
        tracks = tuple(t for t in self.tracks if t != track)
        T = len(tracks)
        m = len(self.letters) << T
        low = (1 << j) - 1
        cols0 = np.empty(m, dtype=np.int64)
        for s in range(m):
            li, bits = s >> T, s & ((1 << T) - 1)
            full = ((bits & ~low) << 1) | (bits & low)
            cols0[s] = (li << len(self.tracks)) | full
        cols1 = cols0 | (1 << j)
        D0, D1 = self.delta[:, cols0], self.delta[:, cols1]
        start = frozenset([0])
        ids = {start: 0}
        order = [start]
        rows = []
        i = 0
        while i < len(order):
            Q = np.fromiter(order[i], dtype=np.int64)
            succ = np.concatenate([D0[Q], D1[Q]], axis=0)
            row = np.empty(m, dtype=np.int32)
            for s in range(m):
                key = frozenset(succ[:, s].tolist())
                t = ids.get(key)
                if t is None:
                    t = ids[key] = len(order)
                    order.append(key)
                row[s] = t
            rows.append(row)
            i += 1
            if budget is not None and len(order) > budget.max_states:
                budget.charge(len(order))
        if budget is not None:
            budget.charge(len(order))
        final = [bool(self.final[list(Q)].any()) for Q in order]
        return DFA(self.letters, tracks, np.array(rows, np.int32).reshape(len(order), m),
                   final).minimize()

    def reverse(self, budget: Budget | None = None) -> "DFA":
        """Automaton for the reversed language (subset construction)."""
        m = self.n_symbols
        preds = [[[] for _ in range(m)] for _ in range(self.n_states)]
        for q in range(self.n_states):
            for s, t in enumerate(self.delta[q].tolist()):
                preds[t][s].append(q)
        start = frozenset(np.flatnonzero(self.final).tolist())
        ids = {start: 0}
        order = [start]
        rows = []
        i = 0
        while i < len(order):
            row = np.empty(m, dtype=np.int32)
            for s in range(m):
                key = frozenset(p for q in order[i] for p in preds[q][s])
                t = ids.get(key)
                if t is None:
                    t = ids[key] = len(order)
                    order.append(key)
                row[s] = t
            rows.append(row)
            i += 1
            if budget is not None and len(order) > budget.max_states:
                budget.charge(len(order))
        final = [0 in Q for Q in order]
        return DFA(self.letters, self.tracks, np.array(rows, np.int32).reshape(len(order), m),
                   final).minimize()

    # ---------------------------------------------------------- queries
    def is_empty(self) -> bool:
        return not self.reachable().final.any()

    def _distance_to_final(self, symbols) -> np.ndarray:
        INF = np.iinfo(np.int64).max
        dist = np.full(self.n_states, INF, dtype=np.int64)
        dist[self.final] = 0
        sub = self.delta[:, symbols]
        changed = True
        while changed:
            cand = dist[sub].min(axis=1)
            cand = np.where(cand == INF, INF, cand + 1)
            new = np.minimum(dist, cand)
            changed = bool((new != dist).any())
            dist = new
        return dist

    def shortest(self, bits: int = 0):
        """Length-minimal, then lexicographically least accepted word (letters in
        alphabet order, every track bit fixed to ``bits``), or None."""
        symbols = np.array([self.symbol(i, bits) for i in range(len(self.letters))])
        dist = self._distance_to_final(symbols)
        INF = np.iinfo(np.int64).max
        if dist[0] == INF:
            return None
        word, q = [], 0
        while dist[q] > 0:
            for i, s in enumerate(symbols):
                t = self.delta[q, s]
                if dist[t] == dist[q] - 1:
                    word.append(self.letters[i])
                    q = t
                    break
        return tuple(word)

    def words(self, max_len: int, bits: int = 0) -> list:
        """All accepted words up to max_len in length-then-lex order."""
        out = []
        layer = [((), 0)]
        for n in range(max_len + 1):
            out.extend(w for w, q in layer if self.final[q])
            if n == max_len:
                break
            layer = [(w + (a,), int(self.delta[q, self.symbol(i, bits)]))
                     for w, q in layer for i, a in enumerate(self.letters)]
        return out

    def count_words(self, length: int, bits: int = 0) -> int:
        symbols = [self.symbol(i, bits) for i in range(len(self.letters))]
        v = np.zeros(self.n_states, dtype=object)
        v[0] = 1
        for _ in range(length):
            nv = np.zeros(self.n_states, dtype=object)
            for s in symbols:
                np.add.at(nv, self.delta[:, s], v)
            v = nv
        return int(v[self.final].sum())

    def with_initial_acceptance(self, accept: bool) -> "DFA":
        """Same language on nonempty words; the empty word accepted iff accept."""
        if bool(self.final[0]) == accept:
            return self
        delta = np.vstack([self.delta[0:1], self.delta]) + 1
        final = np.concatenate([[accept], self.final])
        return DFA(self.letters, self.tracks, delta, final).minimize()

    def to_json(self) -> dict:
        if self.tracks:
            raise ValueError("only track-free automata are serialised")
        return {
            "states": list(range(self.n_states)),
            "alphabet": list(self.letters),
            "delta": {str(q): {a: int(self.delta[q, i]) for i, a in enumerate(self.letters)}
                      for q in range(self.n_states)},
            "initial": 0,
            "finals": [int(q) for q in np.flatnonzero(self.final)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DFA":
        """Inverse of :meth:`to_json`; state names may be any JSON scalars.

        A missing transition goes to an added rejecting sink.
        """
        letters = tuple(data["alphabet"])
        states = data["states"]
        names = [str(q) for q in (range(states) if isinstance(states, int) else states)]
        index = {q: i for i, q in enumerate(names)}
        if len(index) != len(names):
            raise ValueError("duplicate state names")
        sink = len(names)
        delta = np.full((sink + 1, len(letters)), sink, dtype=np.int32)
        for q, row in data["delta"].items():
            for a, r in row.items():
                if a not in letters:
                    raise ValueError(f"transition on unknown letter {a!r}")
                delta[index[str(q)], letters.index(a)] = index[str(r)]
        final = np.zeros(sink + 1, dtype=bool)
        for q in data["finals"]:
            final[index[str(q)]] = True
        return cls(letters, (), delta, final).reachable(index[str(data.get("initial", names[0]))])

    def equivalent(self, other: "DFA") -> bool:
        return self.product(other, "xor").is_empty()


def _column_map(target: tuple, source_names: tuple, n_letters: int) -> np.ndarray:
    """For each symbol over ``target`` tracks, the symbol over ``source_names``
    (in that bit order) reading the same marks; extra target tracks ignored."""
    T = len(target)
    S = len(source_names)
    pos = [target.index(t) for t in source_names]
    cols = np.empty(n_letters << T, dtype=np.int64)
    for s in range(n_letters << T):
        li, bits = s >> T, s & ((1 << T) - 1)
        sb = 0
        for j, p in enumerate(pos):
            if bits >> p & 1:
                sb |= 1 << j
        cols[s] = (li << S) | sb
    return cols


def singleton(letters, track: str) -> DFA:
    """Exactly one position carries the track's mark."""

    def step(st, li, bits):
        if st == 2:
            return 2
        return st + (bits & 1)

    return DFA.from_step(letters, (track,), 0, step, lambda st: st == 1)


__all__ = ["DFA", "Budget", "singleton", "DEFAULT_MAX_STATES"]
