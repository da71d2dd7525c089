"""Guard normalisation and the letter-threshold eliminations."""

from __future__ import annotations

import itertools
from typing import Callable

from ..syntax import (
    FALSE, Formula, Guard, atom, conj, count_atom, disj, fut, gand, gor, mirror,
    neg, nxt, st_of, subformulas, until,
)

# ------------------------------------------------------------ traversal


def map_modalities(f: Formula, fn: Callable[[str, Guard | None, Formula], Formula | None]) -> Formula:
    """Rebuild f bottom-up; fn(kind, guard, child) may replace an F/P node."""
    memo: dict = {}
    for node in subformulas(f):
        args = tuple(memo[id(c)] for c in node.args)
        out = None
        if node.kind in ("F", "P"):
            out = fn(node.kind, node.guard, args[0])
        if out is None:
            out = Formula(node.kind, args, node.letter, node.n, node.guard)
        memo[id(node)] = out
    return memo[id(f)]


def via_mirror(fn):
    """Lift an F-only rewrite to P by time reversal."""
    from ..syntax import _mirror_guard

    def wrapped(kind, guard, child):
        if kind == "F":
            return fn(guard, child)
        g = _mirror_guard(guard) if guard is not None else None
        out = fn(g, mirror(child))
        return None if out is None else mirror(out)

    return wrapped


def rebuild(kind: str, guard: Guard | None, child: Formula) -> Formula:
    return Formula(kind, (child,), guard=guard)


# ----------------------------------------------------------------- DNF

_NEG = {"=": None, "<": ">=", "<=": ">", ">": "<=", ">=": "<"}


def _normal_atom(a: Guard):
    """Return a normalised atom, True (vacuous) or False (unsatisfiable).

    Comparators are reduced to ``=``, ``<=`` and ``>=``; ``<=0`` becomes
    ``=0``.
    """
    cmp, c = a.cmp, a.bound
    if cmp == "<":
        if c == 0:
            return False
        cmp, c = "<=", c - 1
    elif cmp == ">":
        cmp, c = ">=", c + 1
    if cmp == ">=" and c == 0:
        return True
    if cmp == "<=" and c == 0:
        cmp = "="
    if a.kind == "lset" and not a.subject:
        return c == 0 if cmp in ("=", "<=") else False
    return Guard(a.kind, a.subject, cmp, c)


def _nnf_terms(g: Guard, positive: bool) -> list[list[Guard]]:
    """DNF as a list of conjunctions of normalised atoms."""
    k = g.kind
    if k in ("lset", "fac"):
        if positive:
            alts = [g]
        elif g.cmp == "=":
            alts = [Guard(k, g.subject, "<", g.bound), Guard(k, g.subject, ">", g.bound)]
        else:
            alts = [Guard(k, g.subject, _NEG[g.cmp], g.bound)]
        out = []
        for a in alts:
            n = _normal_atom(a)
            if n is True:
                return [[]]
            if n is not False:
                out.append([n])
        return out
    if k == "not":
        return _nnf_terms(g.args[0], not positive)
    is_and = (k == "and") == positive
    parts = [_nnf_terms(c, positive) for c in g.args]
    if not is_and:
        return [t for p in parts for t in p]
    out = [[]]
    for p in parts:
        out = [t + s for t in out for s in p]
    return out


def _split_presence(term: list[Guard]) -> list[list[Guard]]:
    """#B>=1 with |B|>1 becomes a disjunction over single letters."""
    options = []
    for a in term:
        if a.kind == "lset" and a.cmp == ">=" and a.bound == 1 and len(a.subject) > 1:
            options.append([Guard("lset", frozenset([b]), ">=", 1) for b in sorted(a.subject)])
        else:
            options.append([a])
    return [list(t) for t in itertools.product(*options)]


def _dedupe(term):
    seen, out = set(), []
    for a in term:
        if id(a) not in seen:
            seen.add(id(a))
            out.append(a)
    return out


def dnf_terms(g: Guard) -> list[list[Guard]]:
    terms = []
    for t in _nnf_terms(g, True):
        for s in _split_presence(t):
            terms.append(_dedupe(s))
    return terms


def term_guard(term: list[Guard]) -> Guard | None:
    return gand(*term) if term else None


def guard_to_dnf(g: Guard) -> Guard:
    """Equivalent guard written as a disjunction of conjunctions of atoms."""
    terms = dnf_terms(g)
    if not terms:
        return count_atom((), ">", 0)
    if any(not t for t in terms):
        return count_atom((), "=", 0)
    return gor(*(gand(*t) for t in terms))


def distribute_dnf(f: Formula) -> Formula:
    """F_{g1|g2} c  ->  F_{g1} c | F_{g2} c, with each g a conjunction."""

    def fn(kind, guard, child):
        if guard is None:
            return None
        terms = dnf_terms(guard)
        return disj(*(rebuild(kind, term_guard(t), child) for t in terms))

    return map_modalities(f, fn)


# -------------------------------------------------------- term classes

def _atoms(guard: Guard | None) -> list[Guard]:
    if guard is None:
        return []
    return list(guard.args) if guard.kind == "and" else [guard]


def _is_absence(a):
    return (a.cmp, a.bound) in (("=", 0), ("<=", 0), ("<", 1))


def _is_presence(a):
    return (a.cmp, a.bound) in ((">=", 1), (">", 0))


def term_class(guard: Guard | None) -> str:
    """Classify a conjunctive normalised guard.

    ``inv``: single letter-set absence; ``binv``: letter absences and
    single-letter presences; ``bth``: other letter thresholds; ``fac``:
    presence/absence involving a factor; ``facth``: factor thresholds.
    """
    atoms = _atoms(guard)
    if not atoms:
        return "none"
    letters_only = all(a.kind == "lset" for a in atoms)
    simple = all(_is_absence(a) or (_is_presence(a) and (a.kind == "fac" or len(a.subject) == 1))
                 for a in atoms)
    if letters_only:
        if len(atoms) == 1 and _is_absence(atoms[0]):
            return "inv"
        return "binv" if simple else "bth"
    return "fac" if simple else "facth"


# ---------------------------------------------------------- BInv -> Inv

def binv_term_to_inv(guard: Guard | None, child: Formula) -> Formula:
    """Absent set N and present letters p1..pm: disjunction over the m!
    orders in which the first occurrences of the p's appear."""
    atoms = _atoms(guard)
    absent: set = set()
    present: list = []
    for a in atoms:
        if _is_absence(a):
            absent |= set(a.subject)
        else:
            (p,) = a.subject
            if p not in present:
                present.append(p)
    if absent & set(present):
        return FALSE
    present.sort()

    def inv(letters):
        return count_atom(letters, "=", 0) if letters else None

    def chain(order, remaining):
        if not order:
            return fut(child, inv(absent))
        p = order[0]
        rest = remaining - {p}
        return fut(conj(atom(p), chain(order[1:], rest)), inv(absent | remaining))

    return disj(*(chain(list(order), set(present)) for order in itertools.permutations(present)))


def binv_to_inv(f: Formula) -> Formula:
    """Rewrite every BInv guard (after DNF) into single invariance guards."""

    def fn(guard, child):
        if term_class(guard) != "binv":
            return None
        return binv_term_to_inv(guard, child)

    return map_modalities(distribute_dnf(f), via_mirror(fn))


# ------------------------------------------------------- counting walk

DEFAULT_CAP = 8


class CapExceeded(ValueError):
    """A threshold bound is larger than the unfolding cap."""


def _guard_value(g: Guard, counts: dict) -> bool:
    from ..semantics import compare

    k = g.kind
    if k == "lset":
        return compare(sum(counts[(a,)] for a in g.subject), g.cmp, g.bound)
    if k == "fac":
        return compare(counts[g.subject], g.cmp, g.bound)
    if k == "not":
        return not _guard_value(g.args[0], counts)
    if k == "and":
        return all(_guard_value(c, counts) for c in g.args)
    return any(_guard_value(c, counts) for c in g.args)


def _compatible(words) -> bool:
    """Can all these words start at the same position?"""
    ws = sorted(words, key=len)
    return all(ws[i + 1][:len(ws[i])] == ws[i] for i in range(len(ws) - 1))


class _Walk:
    """Unfold F_g c by walking the start positions of tracked subjects.

    A subject is a letter (from a letter-set atom) or a factor.  Counts are
    capped one above the largest bound they are compared with, so the
    capped vector decides g.  An occurrence starting at an event position
    is counted only if it ends before the target; when it does not, the
    target lies within a bounded window and the rest is spelled out with
    explicit next-powers.
    """

    def __init__(self, guard: Guard, child: Formula, cap: int):
        from ..syntax import guard_atoms

        self.guard = guard
        self.child = child
        subjects: dict = {}
        for a in guard_atoms(guard):
            if a.bound > cap:
                raise CapExceeded(f"bound {a.bound} exceeds the unfolding cap {cap}")
            keys = [(x,) for x in a.subject] if a.kind == "lset" else [a.subject]
            for t in keys:
                subjects[t] = max(subjects.get(t, 1), a.bound + 1)
        self.subjects = sorted(subjects, key=lambda t: (len(t), t))
        self.cap = tuple(subjects[t] for t in self.subjects)
        self.letters_only = all(len(t) == 1 for t in self.subjects)
        self._phi: dict = {}
        self._alive: dict = {}
        self._unroll: dict = {}

    def ok(self, c) -> bool:
        return _guard_value(self.guard, dict(zip(self.subjects, c)))

    def unsat(self, c):
        return [i for i, t in enumerate(self.subjects) if c[i] < self.cap[i]]

    def add(self, c, idxs):
        c = list(c)
        for i in idxs:
            c[i] = min(c[i] + 1, self.cap[i])
        return tuple(c)

    def alive(self, c) -> bool:
        r = self._alive.get(c)
        if r is None:
            r = self.ok(c) or any(self.alive(self.add(c, [i])) for i in self.unsat(c))
            self._alive[c] = r
        return r

    def event(self, idxs) -> Formula:
        return disj(*(st_of(self.subjects[i]) for i in idxs))

    # letter-only walk: invariance-guarded chains
    def phi_letters(self, c) -> Formula:
        r = self._phi.get(c)
        if r is not None:
            return r
        idxs = self.unsat(c)
        letters = [self.subjects[i][0] for i in idxs]
        g = count_atom(letters, "=", 0) if letters else None
        parts = []
        if self.ok(c):
            parts.append(fut(self.child, g))
        for i in idxs:
            nc = self.add(c, [i])
            if self.alive(nc):
                parts.append(fut(conj(atom(self.subjects[i][0]), self.phi_letters(nc)), g))
        r = disj(*parts)
        self._phi[c] = r
        return r

    # general walk
    def phi(self, c, need) -> Formula:
        key = (c, need)
        r = self._phi.get(key)
        if r is not None:
            return r
        idxs = self.unsat(c)
        E = self.event(idxs)
        quiet = conj(*(neg(nxt(E, d)) for d in range(1, need + 1)))
        parts = []
        if self.ok(c):
            parts.append(conj(quiet, nxt(until(neg(E), self.child), need)))
        if idxs:
            for d in range(1, need + 1):
                pre = conj(*(neg(nxt(E, e)) for e in range(1, d)))
                parts.append(conj(pre, nxt(self.at_event(c, need - d), d)))
            parts.append(conj(quiet, nxt(until(neg(E), self.at_event(c, 0)), need)))
        r = disj(*parts)
        self._phi[key] = r
        return r

    def at_event(self, c, need) -> Formula:
        idxs = self.unsat(c)
        parts = []
        for size in range(1, len(idxs) + 1):
            for S in itertools.combinations(idxs, size):
                words = [self.subjects[i] for i in S]
                if not _compatible(words):
                    continue
                here = conj(*(st_of(w) for w in words),
                            *(neg(st_of(self.subjects[i])) for i in idxs if i not in S))
                L = max(len(w) for w in words)
                opts = []
                nc = self.add(c, S)
                if self.alive(nc):
                    opts.append(self.phi(nc, max(need, L - 1)))
                for d in range(need + 1, L):
                    fit = [i for i in S if len(self.subjects[i]) <= d]
                    opts.append(self.unroll(self.add(c, fit), 1, d))
                parts.append(conj(here, disj(*opts)))
        return disj(*parts)

    def unroll(self, c, e, d) -> Formula:
        """Target at offset d; count fitting starts at offsets e..d-1."""
        key = (c, e, d)
        r = self._unroll.get(key)
        if r is not None:
            return r
        if e == d:
            r = nxt(self.child, d) if self.ok(c) else FALSE
        else:
            T = [i for i in self.unsat(c) if e + len(self.subjects[i]) <= d]
            parts = []
            for size in range(len(T) + 1):
                for S in itertools.combinations(T, size):
                    words = [self.subjects[i] for i in S]
                    if S and not _compatible(words):
                        continue
                    here = conj(*(nxt(st_of(w), e) for w in words),
                                *(neg(nxt(st_of(self.subjects[i]), e)) for i in T if i not in S))
                    parts.append(conj(here, self.unroll(self.add(c, S), e + 1, d)))
            r = disj(*parts)
        self._unroll[key] = r
        return r

    def build(self) -> Formula:
        zero = tuple(0 for _ in self.subjects)
        if not self.subjects:
            return fut(self.child) if self.ok(zero) else FALSE
        if not self.alive(zero):
            return FALSE
        if self.letters_only:
            return self.phi_letters(zero)
        return self.phi(zero, 0)


def unfold_guard(guard: Guard, child: Formula, cap: int = DEFAULT_CAP) -> Formula:
    """F_g child as a threshold-free formula (invariance guards for letter
    guards, until-based otherwise)."""
    return _Walk(guard, child, cap).build()


def bth_to_binv(f: Formula, cap: int = DEFAULT_CAP) -> Formula:
    """Unfold letter-threshold guards into invariance-guarded chains."""

    def fn(guard, child):
        if term_class(guard) != "bth":
            return None
        return unfold_guard(guard, child, cap)

    return map_modalities(distribute_dnf(f), via_mirror(fn))


def unfold_factor_thresholds(f: Formula, cap: int = DEFAULT_CAP) -> Formula:
    """Unfold guards that count factor occurrences beyond presence."""

    def fn(guard, child):
        if term_class(guard) != "facth":
            return None
        return unfold_guard(guard, child, cap)

    return map_modalities(f, via_mirror(fn))


def inv_to_ltl(f: Formula) -> Formula:
    """F_{#N=0} c  ->  (!N) U c."""

    def fn(guard, child):
        if guard is None:
            return None
        if term_class(guard) != "inv":
            raise ValueError(f"guard {guard} is not an invariance constraint")
        letters = sorted(guard.subject)
        if not letters:
            return fut(child)
        return until(neg(disj(*(atom(a) for a in letters))), child)

    return map_modalities(f, via_mirror(fn))


__all__ = [
    "map_modalities", "via_mirror", "guard_to_dnf", "dnf_terms", "distribute_dnf",
    "term_class", "binv_to_inv", "binv_term_to_inv", "bth_to_binv", "unfold_guard",
    "unfold_factor_thresholds", "inv_to_ltl", "CapExceeded", "DEFAULT_CAP",
]
