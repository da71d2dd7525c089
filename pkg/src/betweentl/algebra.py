"""Regular languages, syntactic monoids and variety membership.

Monoids here are transformation monoids of minimal automata.  An element is
the transformation of the state set induced by a word; the product ``x*y``
applies ``x`` first.  A :class:`FiniteMonoid` is a *view*: a subset of the
elements of an ambient multiplication table together with its own identity
(or none, for a semigroup).  Local monoids such as ``eMe`` are views with
identity ``e`` on the same table, so every test below runs unchanged on
them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .automata import DFA
from .semantics import BudgetExceeded
from .syntax import make_alphabet

DEFAULT_MAX_ELEMENTS = 5000


class InconsistentCharacterisation(AssertionError):
    """Two characterisations of the same variety disagreed (a bug trap)."""


# ===================================================================== regex
class RegexError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}: {text!r}")
        self.pos = pos


@dataclass(frozen=True)
class _Re:
    kind: str  # letter, eps, empty, cat, alt, star, plus
    args: tuple = ()
    letter: str | None = None


def _tokenize_regex(text: str, letters: Sequence[str]):
    by_length = sorted(letters, key=len, reverse=True)
    out, i = [], 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("^+", i):
            out.append(("op", "⁺", i))
            i += 2
            continue
        if c in "()+*⁺":
            out.append(("op", c, i))
            i += 1
            continue
        match = next((a for a in by_length if text.startswith(a, i)), None)
        if match is not None:
            out.append(("letter", match, i))
            i += len(match)
            continue
        if c in "1ε":
            out.append(("eps", c, i))
            i += 1
            continue
        if c in "0∅":
            out.append(("empty", c, i))
            i += 1
            continue
        raise RegexError(f"unknown letter {c!r}", text, i)
    return out


class _RegexParser:
    """alt := cat ('+' cat)* ; cat := post+ ; post := atom ('*' | '⁺')*"""

    def __init__(self, text, letters):
        self.text = text
        self.toks = _tokenize_regex(text, letters)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg):
        tok = self.peek()
        raise RegexError(msg, self.text, tok[2] if tok else len(self.text))

    def parse(self) -> _Re:
        if not self.toks:
            return _Re("eps")
        r = self.alt()
        if self.peek() is not None:
            self.error("unexpected token")
        return r

    def alt(self):
        parts = [self.cat()]
        while self.peek() and self.peek()[:2] == ("op", "+"):
            self.i += 1
            parts.append(self.cat())
        return parts[0] if len(parts) == 1 else _Re("alt", tuple(parts))

    def cat(self):
        parts = []
        while self.peek() and not (self.peek()[0] == "op" and self.peek()[1] in "+)"):
            parts.append(self.post())
        if not parts:
            self.error("expected an expression")
        return parts[0] if len(parts) == 1 else _Re("cat", tuple(parts))

    def post(self):
        r = self.atom()
        while self.peek() and self.peek()[0] == "op" and self.peek()[1] in "*⁺":
            r = _Re("star" if self.peek()[1] == "*" else "plus", (r,))
            self.i += 1
        return r

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of pattern")
        kind, val, _ = tok
        self.i += 1
        if kind == "letter":
            return _Re("letter", letter=val)
        if kind in ("eps", "empty"):
            return _Re(kind)
        if val == "(":
            r = self.alt()
            if not (self.peek() and self.peek()[:2] == ("op", ")")):
                self.error("expected ')'")
            self.i += 1
            return r
        self.i -= 1
        self.error(f"unexpected {val!r}")


def _thompson(r: _Re, fresh, eps: dict, edges: dict) -> tuple[int, int]:
    s, t = next(fresh), next(fresh)
    k = r.kind
    if k == "letter":
        edges.setdefault(s, []).append((r.letter, t))
    elif k == "eps":
        eps.setdefault(s, []).append(t)
    elif k == "cat":
        cur = s
        for c in r.args:
            a, b = _thompson(c, fresh, eps, edges)
            eps.setdefault(cur, []).append(a)
            cur = b
        eps.setdefault(cur, []).append(t)
    elif k == "alt":
        for c in r.args:
            a, b = _thompson(c, fresh, eps, edges)
            eps.setdefault(s, []).append(a)
            eps.setdefault(b, []).append(t)
    elif k in ("star", "plus"):
        a, b = _thompson(r.args[0], fresh, eps, edges)
        eps.setdefault(s, []).append(a)
        eps.setdefault(b, []).extend([a, t])
        if k == "star":
            eps[s].append(t)
    return s, t


def regex_to_min_dfa(pattern: str, alphabet) -> DFA:
    """Minimal complete DFA of a regular expression.

    Grammar: letters, juxtaposition, ``+`` (union), postfix ``*`` and ``⁺``
    (also written ``^+``), parentheses, ``1``/``ε`` for the empty word and
    ``0``/``∅`` for the empty language.
    """
    letters = make_alphabet(alphabet)
    ast = _RegexParser(pattern, letters).parse()
    eps: dict = {}
    edges: dict = {}
    start, accept = _thompson(ast, itertools.count(), eps, edges)

    def closure(states):
        stack, seen = list(states), set(states)
        while stack:
            q = stack.pop()
            for r in eps.get(q, ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    def step(S, li, bits):
        a = letters[li]
        return closure({t for q in S for (b, t) in edges.get(q, ()) if b == a})

    return DFA.from_step(letters, (), closure({start}), step, lambda S: accept in S).minimize()


def language_dfa(language, alphabet=None) -> DFA:
    """A DFA from a regex string, a JSON dict or an existing DFA."""
    if isinstance(language, DFA):
        return language.minimize()
    if isinstance(language, dict):
        return DFA.from_json(language).minimize()
    if alphabet is None:
        raise ValueError("a regex needs an explicit alphabet")
    return regex_to_min_dfa(language, alphabet)


# =================================================================== monoids
class _Table:
    """Ambient multiplication table of a set of transformations."""

    def __init__(self, elements: np.ndarray, n_states: int):
        self.elements = elements  # (m, n) int array
        m = len(elements)
        self.size = m
        codes = _encode(elements, n_states)
        order = np.argsort(codes, kind="stable")
        sorted_codes = codes[order]
        table = np.empty((m, m), dtype=np.int32)
        for i in range(m):
            prod = elements[:, elements[i]]  # row j: elements[j][elements[i]] = x_i * x_j
            pos = np.searchsorted(sorted_codes, _encode(prod, n_states))
            table[i] = order[pos]
        self.table = table
        # omega power of every element: the idempotent among its powers
        omega = np.empty(m, dtype=np.int32)
        for x in range(m):
            q = x
            while table[q, q] != q:
                q = table[q, x]
            omega[x] = q
        self.omega = omega


def _encode(rows: np.ndarray, n: int) -> np.ndarray:
    """Injective integer code of each transformation row."""
    if n == 0:
        return np.zeros(len(rows), dtype=np.int64)
    if n ** n < 2 ** 62:
        radix = np.array([n ** i for i in range(n)], dtype=np.int64)
        return rows.astype(np.int64) @ radix
    # large state sets: rank rows lexicographically
    view = np.ascontiguousarray(rows).view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1])))
    _, inv = np.unique(view.ravel(), return_inverse=True)
    return inv.astype(np.int64)


@dataclass
class FiniteMonoid:
    """A finite monoid (``identity`` set) or semigroup (``identity`` None).

    ``members`` are indices into the shared ambient table; ``generators``
    maps letters to members; ``names`` gives a shortest word for each
    ambient element (``"1"`` for the empty word).
    """

    ambient: _Table
    members: tuple
    identity: int | None
    generators: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)
    accepting: frozenset = frozenset()

    # ------------------------------------------------------------- basics
    @property
    def is_monoid(self) -> bool:
        return self.identity is not None

    def __len__(self):
        return len(self.members)

    def mul(self, x: int, y: int) -> int:
        return int(self.ambient.table[x, y])

    def evaluate(self, word: Iterable[str]) -> int:
        """Image of a word (the empty word needs a monoid)."""
        out = self.identity
        for a in word:
            g = self.generators[a]
            out = g if out is None else self.mul(out, g)
        if out is None:
            raise ValueError("the empty word has no image in a semigroup")
        return out

    def recognizes(self, word) -> bool:
        return self.evaluate(word) in self.accepting

    def name(self, x: int) -> str:
        return self.names.get(x, f"#{x}")

    @cached_property
    def _mask(self) -> np.ndarray:
        mask = np.zeros(self.ambient.size, dtype=bool)
        mask[list(self.members)] = True
        return mask

    def __contains__(self, x) -> bool:
        return bool(self._mask[x])

    def check_closed(self):
        t = self.ambient.table[np.ix_(self.members, self.members)]
        if not self._mask[t].all():
            raise ValueError("member set is not closed under multiplication")
        if self.identity is not None:
            e = self.identity
            ms = list(self.members)
            if not ((t[ms.index(e)] == ms).all() and (t[:, ms.index(e)] == ms).all()):
                raise ValueError("identity law fails")

    def view(self, members: Iterable[int], identity: int | None) -> "FiniteMonoid":
        members = tuple(sorted(set(int(m) for m in members)))
        return FiniteMonoid(self.ambient, members, identity, {}, self.names)

    # ------------------------------------------------------- structure
    def idempotents(self) -> list[int]:
        t = self.ambient.table
        return [x for x in self.members if t[x, x] == x]

    def omega_power(self, x: int) -> int:
        return int(self.ambient.omega[x])

    @cached_property
    def _ideals(self) -> dict:
        """Two-sided ideal N¹xN¹ of each member, as a boolean mask."""
        t = self.ambient.table
        ms = np.array(self.members)
        out = {}
        for x in self.members:
            left = np.unique(np.concatenate([[x], t[ms, x]]))
            both = np.unique(np.concatenate([left, t[np.ix_(left, ms)].ravel()]))
            mask = np.zeros(self.ambient.size, dtype=bool)
            mask[both] = True
            out[x] = mask
        return out

    def j_leq(self, s1: int, s2: int) -> bool:
        """s1 ≤_J s2: s1 = r·s2·t with r, t in the monoid (or empty)."""
        return bool(self._ideals[s2][s1])

    def closure(self, gens: Iterable[int], identity: int | None) -> tuple:
        t = self.ambient.table
        out = set(gens)
        if identity is not None:
            out.add(identity)
        frontier = list(out)
        gens = list(out)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    for p in (int(t[x, g]), int(t[g, x])):
                        if p not in out:
                            out.add(p)
                            new.append(p)
            frontier = new
            gens = list(out)
        return tuple(sorted(out))

    def Me_submonoid(self, e: int) -> "FiniteMonoid":
        """Submonoid generated by the elements J-above the idempotent e."""
        self._require_idempotent(e)
        above = [m for m in self.members if self.j_leq(e, m)]
        ident = self.identity
        return self.view(self.closure(above, ident), ident)

    def local(self, e: int, within: "FiniteMonoid | None" = None) -> "FiniteMonoid":
        """The monoid e·N·e with identity e (N = ``within`` or self)."""
        self._require_idempotent(e)
        N = within or self
        t = self.ambient.table
        ms = np.array(N.members)
        members = t[t[e, ms], e]
        return self.view(members.tolist(), e)

    def _require_idempotent(self, e):
        if e not in self or self.mul(e, e) != e:
            raise ValueError(f"{self.name(e)} is not an idempotent of this monoid")

    def to_dict(self) -> dict:
        ms = list(self.members)
        return {
            "size": len(ms),
            "monoid": self.is_monoid,
            "elements": [self.name(x) for x in ms],
            "identity": None if self.identity is None else self.name(self.identity),
            "idempotents": [self.name(x) for x in self.idempotents()],
            "generators": {a: self.name(g) for a, g in self.generators.items()},
            "table": [[self.name(self.mul(x, y)) for y in ms] for x in ms],
        }


def _transition_closure(d: DFA, include_identity: bool, max_elements: int):
    """Breadth-first closure of the letter transformations of d."""
    n = d.n_states
    gens = [tuple(int(q) for q in d.delta[:, i]) for i in range(len(d.letters))]
    ident = tuple(range(n))
    elems, names = [], []
    index = {}

    def add(x, name):
        if x not in index:
            if len(elems) >= max_elements:
                raise BudgetExceeded(f"monoid exceeded {max_elements} elements")
            index[x] = len(elems)
            elems.append(x)
            names.append(name)
            return True
        return False

    frontier = []
    if include_identity:
        add(ident, "1")
        frontier.append(ident)
    for a, g in zip(d.letters, gens):
        if add(g, a):
            frontier.append(g)
    while frontier:
        new = []
        for x in frontier:
            base = names[index[x]]
            for a, g in zip(d.letters, gens):
                y = tuple(g[q] for q in x)
                if add(y, a if base == "1" else base + a):
                    new.append(y)
        frontier = new
    gen_idx = {a: index[g] for a, g in zip(d.letters, gens)}
    return elems, names, gen_idx, index.get(ident) if include_identity else None


def _build(d: DFA, monoid: bool, max_elements: int) -> FiniteMonoid:
    d = d.minimize()
    elems, names, gen_idx, ident = _transition_closure(d, monoid, max_elements)
    n = d.n_states
    arr = np.array(elems, dtype=np.int64).reshape(len(elems), n)
    amb = _Table(arr, n)
    accepting = frozenset(i for i, x in enumerate(elems) if d.final[x[0]])
    names_map = dict(enumerate(names))
    return FiniteMonoid(amb, tuple(range(len(elems))), ident, gen_idx, names_map, accepting)


def syntactic_monoid(d: DFA, max_elements: int = DEFAULT_MAX_ELEMENTS) -> FiniteMonoid:
    """Transition monoid of the minimal automaton (images of all words)."""
    return _build(d, True, max_elements)


def syntactic_semigroup(d: DFA, max_elements: int = DEFAULT_MAX_ELEMENTS) -> FiniteMonoid:
    """Transition semigroup of the minimal automaton (images of nonempty words)."""
    return _build(d, False, max_elements)


def idempotents(M: FiniteMonoid) -> list[int]:
    return M.idempotents()


def omega_power(M: FiniteMonoid, x: int) -> int:
    return M.omega_power(x)


def j_leq(M: FiniteMonoid, s1: int, s2: int) -> bool:
    return M.j_leq(s1, s2)


def Me_submonoid(M: FiniteMonoid, e: int) -> FiniteMonoid:
    return M.Me_submonoid(e)


# ================================================================ varieties
def in_aperiodic(M: FiniteMonoid) -> bool:
    """x·x^ω = x^ω for every element."""
    return all(M.mul(x, M.omega_power(x)) == M.omega_power(x) for x in M.members)


def _da_local(M: FiniteMonoid) -> bool:
    """e·M_e·e = {e} for every idempotent e."""
    for e in M.idempotents():
        if M.local(e, M.Me_submonoid(e)).members != (e,):
            return False
    return True


def _da_identity(M: FiniteMonoid) -> bool:
    """(xy)^ω x (xy)^ω = (xy)^ω for all x, y."""
    t = M.ambient.table
    ms = np.array(M.members)
    xy = t[np.ix_(ms, ms)]                 # xy[i, j] = x_i y_j
    w = M.ambient.omega[xy]                # (x_i y_j)^ω
    lhs = t[t[w, ms[:, None]], w]          # w · x_i · w
    return bool((lhs == w).all())


def in_DA(M: FiniteMonoid) -> bool:
    """Membership in DA, computed two ways; disagreement is an error."""
    a, b = _da_local(M), _da_identity(M)
    if a != b:
        raise InconsistentCharacterisation(
            f"DA characterisations disagree (local: {a}, identity: {b})")
    return a


def in_MeDA(M: FiniteMonoid) -> bool:
    """Every e·M_e·e (a monoid with identity e) lies in DA."""
    return all(in_DA(M.local(e, M.Me_submonoid(e))) for e in M.idempotents())


def in_locally_DA(S: FiniteMonoid) -> bool:
    """e·S·e ∈ DA for every idempotent e."""
    return all(in_DA(S.local(e)) for e in S.idempotents())


def in_locally_MeDA(S: FiniteMonoid) -> bool:
    """e·S·e ∈ MeDA for every idempotent e (a heuristic test, see classify)."""
    return all(in_MeDA(S.local(e)) for e in S.idempotents())


# ============================================================ delay check
@dataclass
class DelayVerdict:
    k: int
    confirmed: bool
    monoid_size: int
    image_in_MeDA: bool
    determined: bool
    witness: dict | None = None

    @property
    def verdict(self) -> str:
        return f"confirmed-at-{self.k}" if self.confirmed else f"not-confirmed-at-{self.k}"

    def to_dict(self) -> dict:
        d = {"k": self.k, "verdict": self.verdict, "window_monoid_size": self.monoid_size,
             "window_monoid_in_MeDA": self.image_in_MeDA, "determined": self.determined}
        if self.witness:
            d["witness"] = self.witness
        return d


def window_language_dfa(d: DFA, k: int) -> DFA:
    """Minimal DFA of {w'' : w ∈ L(d)} over the window alphabet (A ∪ {*})^k."""
    from .translate.delay import STAR, expanded_alphabet, parse_window

    letters = d.letters
    window_letters = tuple(expanded_alphabet(letters, k))
    windows = [parse_window(x, k) for x in window_letters]
    start_window = (STAR,) * k
    dead = "dead"

    def step(st, li, bits):
        if st == dead:
            return dead
        q, prev = st
        win = windows[li]
        if win[:-1] != prev[1:] or win[-1] == STAR:
            return dead
        return int(d.delta[q, letters.index(win[-1])]), win

    def accept(st):
        return st != dead and bool(d.final[st[0]]) and st[1] != start_window

    return DFA.from_step(window_letters, (), (0, start_window), step, accept).minimize()


def delay_check(d: DFA, k: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> DelayVerdict:
    """Semidecision for membership of S(L) in MeDA*D at a fixed k.

    Builds the language of window words w'' for w in L, takes the monoid
    generated by the star-free windows A^k acting on its minimal automaton,
    and confirms at k when (1) that monoid is in MeDA and (2) the image of
    every nonempty word in S(L) is determined by its prefix and suffix of
    length k-1 together with the image of its window sequence.  Both
    together witness membership; failure at one k proves nothing.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    from .translate.delay import STAR, parse_window

    d = d.minimize()
    wd = window_language_dfa(d, k)
    wl = wd.letters
    plain = [i for i, x in enumerate(wl) if STAR not in parse_window(x, k)]
    sub = DFA(tuple(wl[i] for i in plain), (), wd.delta[:, plain], wd.final)
    image = syntactic_monoid_of_action(sub, max_elements)
    in_meda = in_MeDA(image)

    # (2): explore (prefix, suffix, window image, image in S(L)) over all words
    letters = d.letters
    n = d.n_states
    ident_w = tuple(range(wd.n_states))
    win_index = {parse_window(x, k): i for i, x in enumerate(wl)}
    seen: dict = {}
    frontier = []
    for a in letters:
        h = tuple(int(d.delta[q, letters.index(a)]) for q in range(n))
        st = ((a,), (a,), ident_w, h)
        if st not in seen:
            seen[st] = a
            frontier.append(st)
    keys: dict = {}
    witness = None
    while frontier and witness is None:
        new = []
        for st in frontier:
            pre, suf, hw, h = st
            key = (pre, suf, hw)
            other = keys.setdefault(key, (h, seen[st]))
            if other[0] != h:
                witness = {"words": [other[1], seen[st]], "prefix": "".join(pre), "suffix": "".join(suf)}
                break
            for a in letters:
                ai = letters.index(a)
                h2 = tuple(int(d.delta[q, ai]) for q in h)
                tail = suf + (a,)
                hw2 = hw
                if len(tail) >= k:
                    col = wd.delta[:, win_index[tail[-k:]]]
                    hw2 = tuple(int(col[q]) for q in hw)
                pre2 = pre + (a,) if len(pre) < k - 1 else pre
                suf2 = tail[-(k - 1):]
                st2 = (pre2, suf2, hw2, h2)
                if st2 not in seen:
                    if len(seen) >= max_elements * 50:
                        raise BudgetExceeded("delay check exceeded its exploration budget")
                    seen[st2] = seen[st] + a
                    new.append(st2)
        frontier = new
    determined = witness is None
    return DelayVerdict(k, in_meda and determined, len(image), in_meda, determined, witness)


def syntactic_monoid_of_action(d: DFA, max_elements: int = DEFAULT_MAX_ELEMENTS) -> FiniteMonoid:
    """Transition monoid of d without minimising it first."""
    elems, names, gen_idx, ident = _transition_closure(d, True, max_elements)
    arr = np.array(elems, dtype=np.int64).reshape(len(elems), d.n_states)
    amb = _Table(arr, d.n_states)
    accepting = frozenset(i for i, x in enumerate(elems) if d.final[x[0]])
    return FiniteMonoid(amb, tuple(range(len(elems))), ident, gen_idx, dict(enumerate(names)), accepting)


# ================================================================ classify
def classify(language, alphabet=None, max_elements: int = DEFAULT_MAX_ELEMENTS,
             delay_ks: Sequence[int] = (2, 3)) -> dict:
    """Algebraic profile of a regular language.

    Exact verdicts: aperiodic (FO[<]), in_DA (FO2[<]), locally_DA
    (FO2[<,suc]), in_MeDA (FO2[<,bet]).  ``locally_MeDA`` is a heuristic
    local test for FO2[<,betfac]; ``delay_confirmed_at`` is the least k at
    which :func:`delay_check` confirms membership, or None.
    """
    d = language_dfa(language, alphabet)
    M = syntactic_monoid(d, max_elements)
    S = syntactic_semigroup(d, max_elements)
    report = {
        "alphabet": list(d.letters),
        "dfa_states": d.n_states,
        "monoid_size": len(M),
        "semigroup_size": len(S),
        "aperiodic": in_aperiodic(M),
        "in_DA": in_DA(M),
        "locally_DA": in_locally_DA(S),
        "in_MeDA": in_MeDA(M),
        "locally_MeDA": in_locally_MeDA(S),
        "delay_confirmed_at": None,
        "delay_checks": [],
        "exact": ["aperiodic", "in_DA", "locally_DA", "in_MeDA", "delay_confirmed_at"],
        "heuristic": ["locally_MeDA"],
        "warnings": ["locally_MeDA is a heuristic local test; it is not known to decide "
                     "FO2[<,betfac]-definability"],
    }
    if report["in_MeDA"]:
        report["warnings"].append("in_MeDA holds, so the language is FO2[<,betfac]-definable")
    for k in delay_ks:
        try:
            v = delay_check(d, k, max_elements)
        except BudgetExceeded as exc:
            report["delay_checks"].append({"k": k, "verdict": "budget-exceeded", "detail": str(exc)})
            break
        report["delay_checks"].append(v.to_dict())
        if v.confirmed:
            report["delay_confirmed_at"] = k
            break
    return report


__all__ = [
    "RegexError", "regex_to_min_dfa", "language_dfa", "FiniteMonoid", "syntactic_monoid",
    "syntactic_semigroup", "syntactic_monoid_of_action", "idempotents", "omega_power", "j_leq",
    "Me_submonoid", "in_aperiodic", "in_DA", "in_MeDA", "in_locally_DA", "in_locally_MeDA",
    "DelayVerdict", "window_language_dfa", "delay_check", "classify",
    "InconsistentCharacterisation", "DEFAULT_MAX_ELEMENTS",
]
