"""Compilation of temporal and two-variable formulas into automata.

Every subformula becomes the minimal DFA of its marked words; quantifiers
become projections.  Guards compile to counting automata that run between
the two marked positions, so guarded formulas need no unfolding here.
"""

from __future__ import annotations

from . import fo2 as F2
from .automata import DFA, Budget, singleton
from .semantics import compare, eval_fo2, eval_tl_sentence
from .syntax import Formula, Guard, make_alphabet

PRE, ACC, REJ = "pre", "acc", "rej"


def kmp_table(u: tuple, letters: tuple) -> list[dict]:
    """Matching automaton: table[k][a] = length of the longest prefix of u
    that is a suffix of u[:k] + a (k < |u|)."""
    table = []
    for k in range(len(u)):
        row = {}
        for a in letters:
            s = u[:k] + (a,)
            length = min(len(s), len(u))
            while length and s[len(s) - length:] != u[:length]:
                length -= 1
            row[a] = length
        table.append(row)
    return table


class Compiler:
    """Builds automata over a fixed letter alphabet, sharing a state budget."""

    def __init__(self, alphabet, budget: Budget | None = None):
        self.letters = make_alphabet(alphabet)
        self.budget = budget or Budget()
        self._tl: dict = {}
        self._guard: dict = {}
        self._fo: dict = {}

    # ----------------------------------------------------------- helpers
    def _step(self, tracks, init, step, accept) -> DFA:
        return DFA.from_step(self.letters, tracks, init, step, accept, self.budget).minimize()

    def _and(self, *ds: DFA) -> DFA:
        out = ds[0]
        for d in ds[1:]:
            out = out.product(d, "and", self.budget)
        return out

    def _or(self, *ds: DFA) -> DFA:
        out = ds[0]
        for d in ds[1:]:
            out = out.product(d, "or", self.budget)
        return out

    def exists(self, track: str, d: DFA) -> DFA:
        if track not in d.tracks:
            # the marked position must exist: the word is nonempty
            return self._and(d, self._nonempty())
        return self._and(d, singleton(self.letters, track)).project(track, self.budget)

    def _nonempty(self) -> DFA:
        return self._step((), 0, lambda st, li, b: 1, lambda st: st == 1)

    @staticmethod
    def _bits(tracks, v1, v2, bits):
        return bool(bits >> tracks.index(v1) & 1), bool(bits >> tracks.index(v2) & 1)

    def letter(self, letters, v: str) -> DFA:
        idx = {i for i, a in enumerate(self.letters) if a in set(letters)}

        def step(st, li, bits):
            if st == PRE and bits:
                return ACC if li in idx else REJ
            return st

        return self._step((v,), PRE, step, lambda st: st == ACC)

    def relation(self, kind: str, v1: str, v2: str, n: int = 1) -> DFA:
        """lt, le, eq, suc (v2 = v1+1) or dist (v2 = v1+n)."""
        if v1 == v2:
            raise ValueError("relation needs two distinct variables")
        if kind == "suc":
            kind, n = "dist", 1
        tracks = tuple(sorted((v1, v2)))

        def step(st, li, bits):
            b1, b2 = self._bits(tracks, v1, v2, bits)
            if st in (ACC, REJ):
                return st
            if st == PRE:
                if b1 and b2:
                    return ACC if kind in ("le", "eq") or (kind == "dist" and n == 0) else REJ
                if b2:
                    return REJ
                if b1:
                    if kind == "eq" or (kind == "dist" and n == 0):
                        return REJ
                    return 0
                return PRE
            # st = number of positions since v1
            k = st + 1
            if b1:
                return REJ
            if kind == "dist":
                if b2:
                    return ACC if k == n else REJ
                return REJ if k >= n else k
            if b2:
                return ACC
            return 1  # only "some position has passed" matters

        return self._step(tracks, PRE, step, lambda st: st == ACC)

    def count(self, subject, is_factor: bool, cmp: str, bound: int, v1: str, v2: str) -> DFA:
        """The number of letters of ``subject`` (or occurrences of the factor
        ``subject``) strictly between v1 < v2 compares to ``bound``."""
        tracks = tuple(sorted((v1, v2)))
        cap = bound + 1
        if is_factor:
            u = tuple(subject)
            table = kmp_table(u, self.letters)
        else:
            members = {i for i, a in enumerate(self.letters) if a in set(subject)}

        def step(st, li, bits):
            b1, b2 = self._bits(tracks, v1, v2, bits)
            if st in (ACC, REJ):
                return st
            if st == PRE:
                if b2:
                    return REJ
                return (0, 0) if b1 else PRE
            k, c = st
            if b1:
                return REJ
            if b2:
                return ACC if compare(c, cmp, bound) else REJ
            if is_factor:
                k = table[k][self.letters[li]]
                if k == len(u):
                    # count the match, continue from the longest proper border
                    c = min(cap, c + 1)
                    k = _border(u, len(u))
                return (k, c)
            return (0, min(cap, c + (li in members)))

        return self._step(tracks, PRE, step, lambda st: st == ACC)

    # ------------------------------------------------------------ guards
    def guard(self, g: Guard, v1: str, v2: str) -> DFA:
        key = (g, v1, v2)
        d = self._guard.get(key)
        if d is None:
            d = self._guard[key] = self._guard_build(g, v1, v2)
        return d

    def _guard_build(self, g: Guard, v1, v2) -> DFA:
        if g.kind == "lset":
            return self.count(g.subject, False, g.cmp, g.bound, v1, v2)
        if g.kind == "fac":
            return self.count(g.subject, True, g.cmp, g.bound, v1, v2)
        parts = [self.guard(a, v1, v2) for a in g.args]
        if g.kind == "not":
            return parts[0].complement()
        return self._and(*parts) if g.kind == "and" else self._or(*parts)

    # ---------------------------------------------------------- temporal
    def tl(self, f: Formula) -> DFA:
        """Marked words (w, p) with (w, p) |= f, on track ``p``."""
        d = self._tl.get(f)
        if d is None:
            d = self._tl[f] = self._tl_build(f)
        return d

    def _at(self, f: Formula, v: str) -> DFA:
        return self.tl(f).rename("p", v)

    def _tl_build(self, f: Formula) -> DFA:
        k = f.kind
        if k == "true":
            return DFA.universal(self.letters)
        if k == "false":
            return DFA.empty(self.letters)
        if k == "atom":
            return self.letter((f.letter,), "p")
        if k == "not":
            return self.tl(f.args[0]).complement()
        if k in ("and", "or"):
            parts = [self.tl(c) for c in f.args]
            return self._and(*parts) if k == "and" else self._or(*parts)
        if k == "X":
            return self.exists("q", self._and(self.relation("dist", "p", "q", f.n),
                                              self._at(f.args[0], "q")))
        if k == "Y":
            return self.exists("q", self._and(self.relation("dist", "q", "p", f.n),
                                              self._at(f.args[0], "q")))
        if k in ("F", "P"):
            a, b = ("p", "q") if k == "F" else ("q", "p")
            parts = [self.relation("lt", a, b), self._at(f.args[0], "q")]
            if f.guard is not None:
                parts.append(self.guard(f.guard, a, b))
            return self.exists("q", self._and(*parts))
        if k in ("U", "S"):
            hold, goal = f.args
            a, b = ("p", "q") if k == "U" else ("q", "p")
            # some position r strictly between a and b where `hold` fails
            gap = self.exists("r", self._and(self.relation("lt", a, "r"), self.relation("lt", "r", b),
                                             self._at(hold, "r").complement()))
            return self.exists("q", self._and(self.relation("lt", a, b), self._at(goal, "q"),
                                              gap.complement()))
        raise ValueError(f"unknown formula kind {k!r}")

    def tl_sentence(self, f: Formula) -> DFA:
        """Words w with w |= f (evaluated at the first position)."""
        first = self._step(("p",), PRE, lambda st, li, bits: (ACC if bits else REJ) if st == PRE else st,
                           lambda st: st == ACC)
        d = self.exists("p", self._and(first, self.tl(f)))
        return d.with_initial_acceptance(eval_tl_sentence(f, ()))

    # --------------------------------------------------------------- FO2
    def fo(self, f: F2.FO) -> DFA:
        d = self._fo.get(f)
        if d is None:
            d = self._fo[f] = self._fo_build(f)
        return d

    def _fo_build(self, f: F2.FO) -> DFA:
        k = f.kind
        if k == "true":
            return DFA.universal(self.letters)
        if k == "false":
            return DFA.empty(self.letters)
        if k == "letter":
            return self.letter(F2.sym_letters(f), f.vars[0])
        if k in ("lt", "le", "eq", "suc"):
            v1, v2 = f.vars
            if v1 == v2:
                return DFA.universal(self.letters) if k in ("le", "eq") else DFA.empty(self.letters)
            return self.relation(k, v1, v2)
        if k in ("bet", "th", "fac", "facth"):
            v1, v2 = f.vars
            if v1 == v2:
                return DFA.empty(self.letters)
            need = 1 if k in ("bet", "fac") else f.k
            is_factor = k in ("fac", "facth")
            subject = f.sym if is_factor else F2.sym_letters(f)
            return self.count(subject, is_factor, ">=", need, v1, v2)
        if k == "not":
            return self.fo(f.args[0]).complement()
        if k in ("and", "or"):
            parts = [self.fo(c) for c in f.args]
            return self._and(*parts) if k == "and" else self._or(*parts)
        if k == "exists":
            return self.exists(f.vars[0], self.fo(f.args[0]))
        if k == "forall":
            return self.exists(f.vars[0], self.fo(f.args[0]).complement()).complement()
        raise ValueError(f"unknown FO2 kind {k!r}")

    def fo_sentence(self, f: F2.FO) -> DFA:
        if F2.free_vars(f):
            raise ValueError("formula has free variables")
        d = self.fo(f)
        return d.with_initial_acceptance(eval_fo2(f, ()))


def _border(u: tuple, k: int) -> int:
    """Length of the longest proper border of u[:k]."""
    s = u[:k]
    for length in range(k - 1, 0, -1):
        if s[:length] == s[k - length:]:
            return length
    return 0


__all__ = ["Compiler", "kmp_table"]
