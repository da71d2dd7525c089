"""Factor guards: splitting into pairs, overlap sets, and the reduction of
F_{u,!v} to single negative factors and then to until."""

from __future__ import annotations

from dataclasses import dataclass

from ..syntax import (
    FALSE, TRUE, Formula, Guard, conj, disj, end_of, factor_atom, fut, gand,
    neg, nxt, prv, st_of, until,
)
from .guards import _atoms, _is_absence, map_modalities, term_class, via_mirror


def _is_factor(v, u) -> bool:
    v, u = tuple(v), tuple(u)
    return any(u[k:k + len(v)] == v for k in range(len(u) - len(v) + 1))


def _key(w):
    return (len(w), w)


@dataclass(frozen=True)
class OverlapSets:
    pre1: frozenset
    post1: frozenset
    pre2: frozenset
    post2: frozenset

    def as_strings(self) -> dict:
        def s(ws):
            return sorted(("".join(w) for w in ws), key=lambda x: (len(x), x))

        return {"Opre1": s(self.pre1), "Opost1": s(self.post1),
                "Opre2": s(self.pre2), "Opost2": s(self.post2)}


def compute_overlaps(u, v) -> OverlapSets:
    """Ways an occurrence of v can straddle an occurrence of u.

    A pre-overlap v1 has v = v1.u1 with u1 a nonempty proper prefix of u; a
    post-overlap v2 has v = u2.v2 with u2 a nonempty proper suffix of u; the
    super-overlap is the factorisation v = v1.u.v2 with shortest v1.
    """
    u, v = tuple(u), tuple(v)
    if not u or not v:
        raise ValueError("u and v must be nonempty")
    if _is_factor(v, u):
        raise ValueError("v is a factor of u")
    pre1, post1 = set(), set()
    for l in range(1, min(len(u), len(v))):
        if v[len(v) - l:] == u[:l]:
            pre1.add(v[:len(v) - l])
        if v[:l] == u[len(u) - l:]:
            post1.add(v[l:])
    pre2, post2 = set(), set()
    for k in range(len(v) - len(u) + 1):
        if v[k:k + len(u)] == u:
            pre2.add(v[:k])
            post2.add(v[k + len(u):])
            break
    return OverlapSets(frozenset(pre1), frozenset(post1), frozenset(pre2), frozenset(post2))


def pre(U, i=None) -> Formula:
    """Some word of U (shorter than i, if given) ends just before here."""
    return disj(*(prv(end_of(w)) for w in sorted(U, key=_key) if i is None or len(w) < i))


def post(V, i=None) -> Formula:
    """Some word of V (shorter than i, if given) starts just after here."""
    return disj(*(nxt(st_of(w)) for w in sorted(V, key=_key) if i is None or len(w) < i))


def nfac(v, child: Formula) -> Formula:
    return fut(child, factor_atom(v, "=", 0))


def build_delta(V, v, child: Formula) -> Formula:
    """A later child with no v in between and no word of V starting the gap."""
    V = [tuple(w) for w in V]
    m = max((len(w) for w in V), default=0)
    if m >= len(v):
        raise ValueError("every word of V must be shorter than v")
    first = conj(nfac(v, child), neg(post(V)))
    return disj(first, *(conj(nxt(child, i), neg(post(V, i))) for i in range(1, m + 1)))


def super_offsets(u, v) -> list[int]:
    """Distances from the leftmost occurrence of u in v to the others."""
    u, v = tuple(u), tuple(v)
    starts = [k for k in range(len(v) - len(u) + 1) if v[k:k + len(u)] == u]
    return [k - starts[0] for k in starts[1:]]


def build_beta(u, v, child: Formula, earliest: bool = True) -> Formula:
    """NFac formula equivalent to F_{u,!v} child.

    Only the super-overlap with the shortest prefix is examined, which is
    sound when the chosen occurrence of u is the first one after the anchor.
    With ``earliest`` set, a start s is rejected when u also starts at s-d
    (after the anchor) for a distance d between occurrences of u inside v;
    the first occurrence is never rejected, and the near disjuncts are
    extended to cover those distances.
    """
    u, v = tuple(u), tuple(v)
    if _is_factor(v, u):
        return FALSE
    ov = compute_overlaps(u, v)
    k = max((len(w) for w in ov.pre1 | ov.pre2), default=0)
    D = super_offsets(u, v) if earliest else []
    k = max([k, *D])
    d1 = nxt(build_delta(ov.post1, v, child), len(u) - 1)
    d12 = nxt(build_delta(ov.post1 | ov.post2, v, child), len(u) - 1)

    def body(i=None):
        first = conj(*(neg(prv(st_of(u), d)) for d in D if i is None or d < i))
        return conj(st_of(u), neg(pre(ov.pre1, i)), first,
                    disj(conj(neg(pre(ov.pre2, i)), d1), d12))

    return disj(nfac(v, body()), *(nxt(body(i), i) for i in range(1, k + 1)))


def nfac_to_ltl_term(v, child: Formula) -> Formula:
    """F_{!v} child without guards.

    Occurrences of v ending within |v|-1 steps of the anchor start at or
    before it and are therefore allowed, so the until obligation only starts
    |v|-1 positions later.
    """
    v = tuple(v)
    near = disj(*(nxt(child, i) for i in range(1, len(v))))
    return disj(near, nxt(until(neg(end_of(v)), child), len(v) - 1))


def nfac_to_ltl_literal(v, child: Formula) -> Formula:
    """The uncorrected form (near disjuncts or !end(v) U child), kept for
    comparison."""
    v = tuple(v)
    near = disj(*(nxt(child, i) for i in range(1, len(v))))
    return disj(near, until(neg(end_of(v)), child))


def _fac_parts(guard: Guard):
    """Positive and negative factor lists of a presence/absence term;
    letter atoms are read as factors of length one."""
    pos, negs = [], []
    for a in _atoms(guard):
        if a.kind == "lset":
            if _is_absence(a):
                negs.extend((x,) for x in sorted(a.subject))
            else:
                pos.extend((x,) for x in sorted(a.subject))
        elif _is_absence(a):
            negs.append(a.subject)
        else:
            pos.append(a.subject)
    dedup = lambda ws: sorted(set(ws), key=_key)  # noqa: E731
    return dedup(pos), dedup(negs)


def pair_guard(u, v) -> Guard:
    return gand(factor_atom(u, ">=", 1), factor_atom(v, "=", 0))


def split_term(guard: Guard, child: Formula) -> Formula:
    pos, negs = _fac_parts(guard)
    if pos and negs:
        return conj(*(fut(child, pair_guard(u, v)) for u in pos for v in negs))
    if pos:
        return conj(*(fut(conj(st_of(u), nxt(fut(child), len(u) - 1))) for u in pos))
    if negs:
        return conj(*(nfac(v, child) for v in negs))
    return fut(child)


def split_factor_guard(f: Formula) -> Formula:
    """F_{u1..up,!v1..!vr} c  ->  conjunction of F_{ui,!vj} c."""

    def fn(guard, child):
        if term_class(guard) != "fac":
            return None
        pos, negs = _fac_parts(guard)
        if len(pos) == 1 and len(negs) == 1:
            return None
        return split_term(guard, child)

    return map_modalities(f, via_mirror(fn))


def beta_stage(f: Formula) -> Formula:
    """Replace every F_{u,!v} by its NFac equivalent."""

    def fn(guard, child):
        if term_class(guard) != "fac":
            return None
        pos, negs = _fac_parts(guard)
        if len(pos) == 1 and len(negs) == 1:
            return build_beta(pos[0], negs[0], child)
        return None

    return map_modalities(f, via_mirror(fn))


def _single_neg(guard: Guard):
    if guard is None:
        return None
    if term_class(guard) == "fac":
        pos, negs = _fac_parts(guard)
        if not pos and len(negs) == 1:
            return negs[0]
    return None


def nfac_to_ltl(f: Formula, literal: bool = False) -> Formula:
    """Replace every F_{!v} by an LTL formula."""
    make = nfac_to_ltl_literal if literal else nfac_to_ltl_term

    def fn(guard, child):
        v = _single_neg(guard)
        if v is None:
            return None
        return make(v, child)

    return map_modalities(f, via_mirror(fn))


__all__ = [
    "OverlapSets", "compute_overlaps", "super_offsets", "build_delta", "build_beta", "pre", "post",
    "split_factor_guard", "split_term", "beta_stage", "nfac_to_ltl", "nfac_to_ltl_term",
    "nfac_to_ltl_literal", "pair_guard", "TRUE",
]
