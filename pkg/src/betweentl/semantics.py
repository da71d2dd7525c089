"""Reference semantics for temporal and FO2 formulas on finite words.

Two evaluators are provided. The per-word one follows the definitions
literally and is used as the oracle; the batched one evaluates a formula on
every word of a given length at once with numpy and is what the exhaustive
checks run on. Tests keep the two in agreement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import fo2 as F2
from .syntax import Formula, Guard, Word, make_alphabet


class BudgetExceeded(RuntimeError):
    """A configured resource budget was exhausted."""


@dataclass(frozen=True)
class MarkedWord:
    word: tuple
    position: int

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if not self.word:
            raise ValueError("a marked word cannot be empty")
        if not 1 <= self.position <= len(self.word):
            raise ValueError(f"position {self.position} out of range 1..{len(self.word)}")


def _check_interval(w, i, j):
    if not (1 <= i < j <= len(w)):
        raise ValueError(f"need 1 <= i < j <= |w|, got i={i}, j={j}, |w|={len(w)}")


def count_letters(w: Word, i: int, j: int, B: Iterable[str]) -> int:
    """Positions k with i < k < j carrying a letter of B."""
    _check_interval(w, i, j)
    B = set(B)
    return sum(1 for k in range(i + 1, j) if w[k - 1] in B)


def count_factors(w: Word, i: int, j: int, u: Word) -> int:
    """Start positions k with i < k and k+|u|-1 < j at which u occurs."""
    _check_interval(w, i, j)
    u = tuple(u)
    if not u:
        raise ValueError("factor must be nonempty")
    w = tuple(w)
    m = len(u)
    return sum(1 for k in range(i + 1, j - m + 1) if w[k - 1:k - 1 + m] == u)


def compare(x: int, cmp: str, c: int) -> bool:
    if cmp == "=":
        return x == c
    if cmp == "<":
        return x < c
    if cmp == "<=":
        return x <= c
    if cmp == ">":
        return x > c
    if cmp == ">=":
        return x >= c
    raise ValueError(cmp)


def eval_guard(g: Guard, w: Word, i: int, j: int) -> bool:
    _check_interval(w, i, j)
    return _eg(g, tuple(w), i, j)


def _eg(g, w, i, j):
    k = g.kind
    if k == "lset":
        return compare(count_letters(w, i, j, g.subject), g.cmp, g.bound)
    if k == "fac":
        return compare(count_factors(w, i, j, g.subject), g.cmp, g.bound)
    if k == "not":
        return not _eg(g.args[0], w, i, j)
    if k == "and":
        return all(_eg(c, w, i, j) for c in g.args)
    return any(_eg(c, w, i, j) for c in g.args)


# ------------------------------------------------------ per-word evaluator

class _WordEval:
    def __init__(self, w):
        self.w = tuple(w)
        self.n = len(self.w)
        self.memo: dict = {}

    def ev(self, f: Formula, i: int) -> bool:
        key = (id(f), i)
        r = self.memo.get(key)
        if r is None:
            r = self._ev(f, i)
            self.memo[key] = r
        return r

    def _ev(self, f, i):
        k, n, w = f.kind, self.n, self.w
        if k == "true":
            return True
        if k == "false":
            return False
        if k == "atom":
            return w[i - 1] == f.letter
        if k == "not":
            return not self.ev(f.args[0], i)
        if k == "and":
            return all(self.ev(c, i) for c in f.args)
        if k == "or":
            return any(self.ev(c, i) for c in f.args)
        if k == "X":
            return i + f.n <= n and self.ev(f.args[0], i + f.n)
        if k == "Y":
            return i - f.n >= 1 and self.ev(f.args[0], i - f.n)
        if k == "F":
            g = f.guard
            return any(self.ev(f.args[0], j) and (g is None or _eg(g, w, i, j))
                       for j in range(i + 1, n + 1))
        if k == "P":
            g = f.guard
            return any(self.ev(f.args[0], j) and (g is None or _eg(g, w, j, i))
                       for j in range(1, i))
        a, c = f.args
        if k == "U":
            for j in range(i + 1, n + 1):
                if self.ev(c, j):
                    return True
                if not self.ev(a, j):
                    return False
            return False
        if k == "S":
            for j in range(i - 1, 0, -1):
                if self.ev(c, j):
                    return True
                if not self.ev(a, j):
                    return False
            return False
        raise ValueError(f"unknown node kind {k}")


def eval_tl(f: Formula, m: MarkedWord | tuple) -> bool:
    """Truth of f at a marked word (1-based position)."""
    if not isinstance(m, MarkedWord):
        m = MarkedWord(*m)
    return _WordEval(m.word).ev(f, m.position)


def _eval_empty(f: Formula) -> bool:
    k = f.kind
    if k == "true":
        return True
    if k == "not":
        return not _eval_empty(f.args[0])
    if k == "and":
        return all(_eval_empty(c) for c in f.args)
    if k == "or":
        return any(_eval_empty(c) for c in f.args)
    return False


def eval_tl_sentence(f: Formula, w: Word) -> bool:
    """w satisfies f at position 1; on the empty word existential
    obligations are false."""
    w = tuple(w)
    if not w:
        return _eval_empty(f)
    return _WordEval(w).ev(f, 1)


# ------------------------------------------------------------ FO2 (per word)

def eval_fo2(f: F2.FO, w: Word, sigma: Mapping[str, int] | None = None) -> bool:
    """Evaluate an FO2 formula; sigma assigns 1-based positions to x and y."""
    sigma = dict(sigma or {})
    missing = F2.free_vars(f) - set(sigma)
    if missing:
        raise ValueError(f"unbound free variables {sorted(missing)}")
    w = tuple(w)
    memo: dict = {}

    def ev(node, x, y):
        key = (id(node), x, y)
        r = memo.get(key)
        if r is None:
            r = _ev(node, x, y)
            memo[key] = r
        return r

    def pos(v, x, y):
        return x if v == "x" else y

    def _ev(node, x, y):
        k = node.kind
        if k == "true":
            return True
        if k == "false":
            return False
        if k == "not":
            return not ev(node.args[0], x, y)
        if k == "and":
            return all(ev(c, x, y) for c in node.args)
        if k == "or":
            return any(ev(c, x, y) for c in node.args)
        if k in ("exists", "forall"):
            v = node.vars[0]
            rng = range(1, len(w) + 1)
            if v == "x":
                vals = (ev(node.args[0], p, y) for p in rng)
            else:
                vals = (ev(node.args[0], x, p) for p in rng)
            return any(vals) if k == "exists" else all(vals)
        p = [pos(v, x, y) for v in node.vars]
        if k == "letter":
            return w[p[0] - 1] in F2.sym_letters(node)
        i, j = p
        if k == "lt":
            return i < j
        if k == "le":
            return i <= j
        if k == "eq":
            return i == j
        if k == "suc":
            return j == i + 1
        if i >= j:
            return False
        if j == i + 1:
            cnt = 0
        elif k in ("bet", "th"):
            cnt = count_letters(w, i, j, F2.sym_letters(node))
        else:
            cnt = count_factors(w, i, j, node.sym)
        if k in ("bet", "fac"):
            return cnt >= 1
        return cnt >= node.k

    x0 = sigma.get("x")
    y0 = sigma.get("y")
    return ev(f, x0, y0)


# --------------------------------------------------------- batched evaluation

def all_words(alphabet: Sequence[str], n: int) -> np.ndarray:
    """Every word of length n as rows of letter indices, lexicographic."""
    k = len(alphabet)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int16)
    idx = np.indices((k,) * n, dtype=np.int16).reshape(n, -1).T
    return np.ascontiguousarray(idx)


def decode(row, alphabet) -> tuple:
    return tuple(alphabet[int(c)] for c in row)


class BatchEval:
    """Evaluate formulas on a batch of equal-length words (rows of W)."""

    def __init__(self, W: np.ndarray, alphabet: Sequence[str]):
        self.W = W
        self.alphabet = tuple(alphabet)
        self.index = {a: i for i, a in enumerate(self.alphabet)}
        self.N, self.n = W.shape
        self._letters: dict = {}
        self._prefix: dict = {}
        self._tl: dict = {}

    def letter_mask(self, a) -> np.ndarray:
        m = self._letters.get(a)
        if m is None:
            if a in self.index:
                m = self.W == self.index[a]
            else:
                m = np.zeros((self.N, self.n), dtype=bool)
            self._letters[a] = m
        return m

    def occ(self, u) -> np.ndarray:
        """occ[:, s] true when u starts at 0-based s."""
        key = ("occ", u)
        m = self._prefix.get(key)
        if m is None:
            m = np.zeros((self.N, self.n), dtype=bool)
            L = len(u)
            if L <= self.n:
                acc = np.ones((self.N, self.n - L + 1), dtype=bool)
                for t, a in enumerate(u):
                    acc &= self.letter_mask(a)[:, t:self.n - L + 1 + t]
                m[:, :self.n - L + 1] = acc
            self._prefix[key] = m
        return m

    def prefix(self, subject, is_factor) -> np.ndarray:
        """P[:, k] = number of marked 0-based positions < k."""
        key = ("pre", subject, is_factor)
        P = self._prefix.get(key)
        if P is None:
            if is_factor:
                mask = self.occ(subject)
            else:
                mask = np.zeros((self.N, self.n), dtype=bool)
                for a in subject:
                    mask |= self.letter_mask(a)
            P = np.zeros((self.N, self.n + 1), dtype=np.int16)
            np.cumsum(mask, axis=1, out=P[:, 1:])
            self._prefix[key] = P
        return P

    def count(self, subject, is_factor, i, j) -> np.ndarray:
        """Counts strictly between 0-based positions i < j."""
        P = self.prefix(subject, is_factor)
        hi = j - len(subject) + 1 if is_factor else j
        if hi <= i + 1:
            return np.zeros(self.N, dtype=np.int16)
        return P[:, hi] - P[:, i + 1]

    def guard(self, g: Guard, i, j) -> np.ndarray:
        k = g.kind
        if k in ("lset", "fac"):
            c = self.count(g.subject, k == "fac", i, j)
            return _np_compare(c, g.cmp, g.bound)
        if k == "not":
            return ~self.guard(g.args[0], i, j)
        parts = [self.guard(c, i, j) for c in g.args]
        out = parts[0].copy()
        for p in parts[1:]:
            if k == "and":
                out &= p
            else:
                out |= p
        return out

    def tl(self, f: Formula) -> np.ndarray:
        """Bool array (N, n): truth of f at each 0-based position."""
        from .syntax import subformulas

        for node in subformulas(f):
            if id(node) not in self._tl:
                self._tl[id(node)] = self._tl_node(node)
        return self._tl[id(f)]

    def _tl_node(self, f):
        N, n, k = self.N, self.n, f.kind
        T = self._tl
        if k == "true":
            return np.ones((N, n), dtype=bool)
        if k == "false":
            return np.zeros((N, n), dtype=bool)
        if k == "atom":
            return self.letter_mask(f.letter)
        if k == "not":
            return ~T[id(f.args[0])]
        if k in ("and", "or"):
            out = T[id(f.args[0])].copy()
            for c in f.args[1:]:
                if k == "and":
                    out &= T[id(c)]
                else:
                    out |= T[id(c)]
            return out
        out = np.zeros((N, n), dtype=bool)
        if k == "X":
            c = T[id(f.args[0])]
            if f.n < n:
                out[:, :n - f.n] = c[:, f.n:]
            return out
        if k == "Y":
            c = T[id(f.args[0])]
            if f.n < n:
                out[:, f.n:] = c[:, :n - f.n]
            return out
        if k in ("F", "P"):
            c = T[id(f.args[0])]
            g = f.guard
            if g is None:
                if k == "F":
                    acc = np.zeros(N, dtype=bool)
                    for i in range(n - 1, -1, -1):
                        out[:, i] = acc
                        acc = acc | c[:, i]
                else:
                    acc = np.zeros(N, dtype=bool)
                    for i in range(n):
                        out[:, i] = acc
                        acc = acc | c[:, i]
                return out
            for i in range(n):
                col = out[:, i]
                for j in range(n):
                    if (k == "F" and j > i) or (k == "P" and j < i):
                        lo, hi = (i, j) if k == "F" else (j, i)
                        col |= c[:, j] & self.guard(g, lo, hi)
            return out
        a, c = T[id(f.args[0])], T[id(f.args[1])]
        if k == "U":
            for i in range(n - 2, -1, -1):
                out[:, i] = c[:, i + 1] | (a[:, i + 1] & out[:, i + 1])
            return out
        if k == "S":
            for i in range(1, n):
                out[:, i] = c[:, i - 1] | (a[:, i - 1] & out[:, i - 1])
            return out
        raise ValueError(f"unknown node kind {k}")

    def tl_sentence(self, f: Formula) -> np.ndarray:
        if self.n == 0:
            return np.full(self.N, _eval_empty(f))
        return self.tl(f)[:, 0].copy()

    # FO2: arrays of shape (N, n, n) indexed [word, x, y]

    def fo2(self, f: F2.FO) -> np.ndarray:
        memo: dict = {}
        for node in F2.nodes(f):
            memo[id(node)] = self._fo_node(node, memo)
        return memo[id(f)]

    def _pair(self, base, vars_):
        """base is indexed [word, first var, second var]."""
        if vars_ == ("x", "y"):
            return base
        if vars_ == ("y", "x"):
            return base.transpose(0, 2, 1)
        d = np.diagonal(base, axis1=1, axis2=2)
        if vars_ == ("x", "x"):
            return np.broadcast_to(d[:, :, None], (self.N, self.n, self.n))
        return np.broadcast_to(d[:, None, :], (self.N, self.n, self.n))

    def _fo_node(self, f, memo):
        N, n, k = self.N, self.n, f.kind
        shape = (N, n, n)
        if k == "true":
            return np.ones(shape, dtype=bool)
        if k == "false":
            return np.zeros(shape, dtype=bool)
        if k == "not":
            return ~memo[id(f.args[0])]
        if k in ("and", "or"):
            out = np.array(memo[id(f.args[0])], copy=True)
            for c in f.args[1:]:
                if k == "and":
                    out &= memo[id(c)]
                else:
                    out |= memo[id(c)]
            return out
        if k in ("exists", "forall"):
            c = memo[id(f.args[0])]
            red = np.any if k == "exists" else np.all
            if f.vars[0] == "x":
                r = red(c, axis=1)
                return np.broadcast_to(r[:, None, :], shape)
            r = red(c, axis=2)
            return np.broadcast_to(r[:, :, None], shape)
        if k == "letter":
            m = np.zeros((self.N, n), dtype=bool)
            for a in F2.sym_letters(f):
                m = m | self.letter_mask(a)
            if f.vars[0] == "x":
                return np.broadcast_to(m[:, :, None], shape)
            return np.broadcast_to(m[:, None, :], shape)
        ii = np.arange(n)[:, None]
        jj = np.arange(n)[None, :]
        if k in ("lt", "le", "eq", "suc"):
            rel = {"lt": ii < jj, "le": ii <= jj, "eq": ii == jj, "suc": jj == ii + 1}[k]
            return self._pair(np.broadcast_to(rel[None], shape), f.vars)
        is_factor = k in ("fac", "facth")
        subject = f.sym if is_factor else F2.sym_letters(f)
        P = self.prefix(subject, is_factor)
        L = len(subject) if is_factor else 1
        # count strictly between 0-based x < y: P[hi] - P[x+1], hi = y - L + 1
        hi = np.clip(jj - L + 1, 0, n)
        lo = np.clip(ii + 1, 0, n)
        cnt = P[:, hi] - P[:, lo]
        cnt = np.where((hi > lo)[None], cnt, 0)
        need = 1 if k in ("bet", "fac") else f.k
        base = (cnt >= need) & (ii < jj)[None]
        return self._pair(base, f.vars)

    def fo2_sentence(self, f: F2.FO) -> np.ndarray:
        if self.n == 0:
            return np.full(self.N, eval_fo2(f, ()))
        return self.fo2(f)[:, 0, 0].copy()


def _np_compare(c, cmp, bound):
    if cmp == "=":
        return c == bound
    if cmp == "<":
        return c < bound
    if cmp == "<=":
        return c <= bound
    if cmp == ">":
        return c > bound
    return c >= bound


def model_mask(f, alphabet: Sequence[str], n: int) -> np.ndarray:
    """Bool vector over all_words(alphabet, n): which words satisfy f."""
    ev = BatchEval(all_words(alphabet, n), alphabet)
    if isinstance(f, F2.FO):
        return ev.fo2_sentence(f)
    return ev.tl_sentence(f)


DEFAULT_MAX_WORDS = 2_000_000


def enumerate_models(f, alphabet, max_len: int, max_words: int = DEFAULT_MAX_WORDS) -> list:
    """All models of length <= max_len, length-then-lexicographic order.

    Words are returned as strings when every letter is one character and as
    tuples otherwise.
    """
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    alphabet = make_alphabet(alphabet)
    total = sum(len(alphabet) ** n for n in range(max_len + 1))
    if total > max_words:
        raise BudgetExceeded(f"{total} words exceed the budget of {max_words}")
    chars = all(len(a) == 1 for a in alphabet)
    out = []
    for n in range(max_len + 1):
        W = all_words(alphabet, n)
        mask = model_mask(f, alphabet, n)
        for row in W[mask]:
            w = decode(row, alphabet)
            out.append("".join(w) if chars else w)
    return out


def iter_words(alphabet: Sequence[str], max_len: int):
    """Words of length <= max_len as tuples, length-then-lexicographic."""
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)
