"""Window expansion of words and the matching formula transforms.

A word w is expanded to w'' by replacing position i with the length-k window
of ``*^(k-1) w`` ending at i.  ``delay_fo2`` turns a sentence with factor
atoms into one over windows; ``expand_fo2`` goes back.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .. import fo2 as F2
from ..fo2 import (
    FFALSE, FO, exists, fac, facth, fand, fnot, forr, letter, letter_set, lt,
    other, suc, th,
)
from ..syntax import make_alphabet

STAR = "*"


def window_letter(window) -> str:
    """Name of the expanded letter for a window of base letters and stars."""
    window = tuple(window)
    if all(len(a) == 1 for a in window):
        return "".join(window)
    return "<" + ".".join(window) + ">"


def parse_window(name: str, k: int) -> tuple:
    if name.startswith("<") and name.endswith(">"):
        parts = tuple(name[1:-1].split("."))
    else:
        parts = tuple(name)
    if len(parts) != k:
        raise ValueError(f"{name!r} is not a window of length {k}")
    return parts


def expand_word(w, k: int) -> tuple:
    """The sequence of length-k windows of *^(k-1) w, one per position."""
    if k < 2:
        raise ValueError("k must be at least 2")
    w = tuple(w)
    padded = (STAR,) * (k - 1) + w
    return tuple(window_letter(padded[i:i + k]) for i in range(len(w)))


def _split_window(window) -> tuple[int, tuple] | None:
    """(number of leading stars, letters), or None if a star follows a letter."""
    window = tuple(window)
    j = 0
    while j < len(window) and window[j] == STAR:
        j += 1
    rest = window[j:]
    if STAR in rest or not rest:
        return None
    return j, rest


def expanded_alphabet(alphabet, k: int) -> tuple:
    """Every window that can occur in an expanded word, sorted."""
    A = make_alphabet(alphabet)
    out = []
    for j in range(k):
        for t in itertools.product(A, repeat=k - j):
            out.append(window_letter((STAR,) * j + t))
    return tuple(sorted(out))


def _windows(alphabet, k):
    A = make_alphabet(alphabet)
    return [((STAR,) * j + t) for j in range(k) for t in itertools.product(A, repeat=k - j)]


def longest_factor(f: FO) -> int:
    return max((len(n.sym) for n in F2.nodes(f) if n.kind in ("fac", "facth")), default=0)


# ------------------------------------------------------------------- delay

def _suffix_windows(v, alphabet, k) -> list[str]:
    v = tuple(v)
    return [window_letter(wd) for wd in _windows(alphabet, k)
            if len(wd) >= len(v) and wd[len(wd) - len(v):] == v]


def _exactly(S: tuple, r: int, j: int, var: str) -> FO:
    """The r positions after var exist and exactly j of them carry a letter of S."""

    @lru_cache(maxsize=None)
    def go(r, j, var):
        if j < 0 or j > r:
            return FFALSE
        if r == 0:
            return F2.FTRUE
        o = other(var)
        here = letter_set(S, o)
        return exists(o, fand(suc(var, o), forr(fand(here, go(r - 1, j - 1, o)),
                                                fand(fnot(here), go(r - 1, j, o)))))

    return go(r, j, var)


def _delay_factor(v, need: int, vars_, alphabet, k) -> FO:
    """At least ``need`` occurrences of v strictly between the two variables."""
    S = tuple(_suffix_windows(v, alphabet, k))
    if not S:
        return FFALSE
    m = len(v) - 1
    left = vars_[0]
    return forr(*(fand(_exactly(S, m, j, left), th(S, j + need, *vars_)) for j in range(m + 1)))


def delay_fo2(f: FO, alphabet, k: int | None = None) -> tuple[int, FO]:
    """Translate a sentence with factor atoms to one over length-k windows.

    Returns ``(k, f')`` with ``w |= f`` iff ``expand_word(w, k) |= f'`` for
    every w with ``|w| >= k-1``.  k defaults to the longest factor mentioned
    (2 if there is none).  Counting atoms over window sets carry bounds of at
    most |v| + the original threshold.
    """
    A = make_alphabet(alphabet)
    k = k or max(2, longest_factor(f))
    if k < max(2, longest_factor(f)):
        raise ValueError("k must be at least the longest factor")
    windows = _windows(A, k)
    by_last = {a: tuple(window_letter(wd) for wd in windows if wd[-1] == a) for a in A}

    def lift(letters):
        return tuple(x for a in letters for x in by_last[a])

    memo: dict = {}

    def go(n: FO) -> FO:
        r = memo.get(n)
        if r is not None:
            return r
        kd = n.kind
        if kd == "letter":
            r = letter_set(by_last[n.sym], n.vars[0])
        elif kd == "bet":
            r = F2.bet(lift(F2.sym_letters(n)), *n.vars)
        elif kd == "th":
            r = th(lift(F2.sym_letters(n)), n.k, *n.vars)
        elif kd == "fac":
            r = _delay_factor(n.sym, 1, n.vars, A, k)
        elif kd == "facth":
            r = _delay_factor(n.sym, n.k, n.vars, A, k) if n.k > 0 else F2.FTRUE
        elif n.args:
            r = FO(kd, tuple(go(c) for c in n.args), n.sym, n.k, n.vars)
        else:
            r = n
        memo[n] = r
        return r

    return k, go(f)


# --------------------------------------------------------------- expansion

def window_formula(window, var: str) -> FO:
    """The window ending at var is ``window`` (stars mean 'no position')."""
    split = _split_window(window)
    if split is None:
        return FFALSE
    j, t = split

    def go(i, v):
        # letter t[i] at v, then walk left
        here = letter(t[i], v)
        o = other(v)
        if i == 0:
            if j == 0:
                return here
            return fand(here, fnot(exists(o, suc(o, v))))
        return fand(here, exists(o, fand(suc(o, v), go(i - 1, o))))

    return go(len(t) - 1, var)


def _backward_letters(t, var, closed: bool) -> FO:
    """Letters ending at var spell t; with ``closed`` nothing precedes them."""
    return window_formula(((STAR,) if closed else ()) + tuple(t), var)


def _forward_letters(f, var, closed: bool) -> FO:
    """The positions after var spell f; with ``closed`` the word ends there."""

    def go(i, v):
        o = other(v)
        if i == len(f):
            return fnot(exists(o, suc(v, o))) if closed else F2.FTRUE
        return exists(o, fand(suc(v, o), letter(f[i], o), go(i + 1, o)))

    return go(0, var)


def _sum_at_least(ts, c, vars_) -> FO:
    """Occurrences of the words ts, summed, number at least c."""
    ts = list(ts)
    if c <= 0:
        return F2.FTRUE
    if not ts:
        return FFALSE
    out = []
    for parts in _compositions(c, len(ts)):
        out.append(fand(*(facth(t, p, *vars_) if p > 1 else fac(t, *vars_)
                          for t, p in zip(ts, parts) if p > 0)))
    return forr(*out)


def _compositions(c, r):
    if r == 1:
        yield (c,)
        return
    for first in range(c + 1):
        for rest in _compositions(c - first, r - 1):
            yield (first,) + rest


def _expand_count(S: set, need: int, vars_, alphabet, k) -> FO:
    """At least ``need`` positions strictly between carry a window of S.

    Positions at least k to the right of the left variable hold full windows
    whose letters lie strictly inside the interval, so they are counted by
    factor atoms.  The k-1 positions after the left variable are resolved by
    enumerating the letters around it and the distance to the right one.
    """
    A = make_alphabet(alphabet)
    x, y = vars_
    full = sorted(w for w in S if STAR not in w)
    out = []
    backs = [(t, len(t) < k - 1) for L in range(1, k)
             for t in itertools.product(A, repeat=L)]
    fronts = [(f, len(f) < k - 1) for L in range(k)
              for f in itertools.product(A, repeat=L)]
    for back, bclosed in backs:
        for front, fclosed in fronts:
            local = (STAR,) * (k - 1) * bclosed + back + front
            origin = len(local) - len(front) - 1  # index of the left variable
            # windows at x+1..x+len(front)
            near = [tuple(local[origin + i - k + 1:origin + i + 1])
                    for i in range(1, len(front) + 1)]
            pos_here = fand(_backward_letters(back, x, bclosed),
                            _forward_letters(front, x, fclosed))
            max_d = len(front) - 1 if fclosed else k - 1
            for d in range(0, max_d + 1):
                # d = number of positions strictly between (capped at k-1)
                dist = fac(front[:d], x, y) if d else lt(x, y)
                if d < k - 1 and d + 1 <= len(front):
                    dist = fand(dist, fnot(fac(front[:d + 1], x, y)))
                cnt = sum(1 for i in range(d) if near[i] in S)
                far = _sum_at_least(full, need - cnt, vars_) if d >= k - 1 else (
                    F2.FTRUE if cnt >= need else FFALSE)
                out.append(fand(pos_here, dist, far))
    return forr(*out)


def expand_fo2(f: FO, alphabet, k: int) -> FO:
    """Translate a sentence over length-k windows back to the base alphabet,
    with ``w |= result`` iff ``expand_word(w, k) |= f`` whenever
    ``|w| >= k-1``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    A = make_alphabet(alphabet)
    memo: dict = {}

    def windows_of(n):
        return {parse_window(s, k) for s in F2.sym_letters(n)}

    def go(n: FO) -> FO:
        r = memo.get(n)
        if r is not None:
            return r
        kd = n.kind
        if kd == "letter":
            r = window_formula(parse_window(n.sym, k), n.vars[0])
        elif kd in ("bet", "th"):
            need = 1 if kd == "bet" else n.k
            S = {wd for wd in windows_of(n) if _split_window(wd) is not None}
            S = {wd for wd in S if all(a in A or a == STAR for a in wd)}
            r = _expand_count(S, need, n.vars, A, k) if need > 0 else F2.FTRUE
        elif kd in ("fac", "facth"):
            raise ValueError("factor atoms are not allowed over windows")
        elif n.args:
            r = FO(kd, tuple(go(c) for c in n.args), n.sym, n.k, n.vars)
        else:
            r = n
        memo[n] = r
        return r

    return go(f)


__all__ = [
    "STAR", "window_letter", "parse_window", "expand_word", "expanded_alphabet",
    "delay_fo2", "expand_fo2", "window_formula", "longest_factor",
]
