"""Temporal formula ASTs, guards, the text grammar and size measures.

Formulas and guards are hash-consed: building a structurally equal node twice
returns the same object, so identity comparison is structural equality and
the reachable node set of a formula is its dag.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Sequence

Word = Sequence[str]

CMPS = ("<=", ">=", "<", ">", "=")


class ParseError(ValueError):
    """Raised on malformed input, carrying line and column."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col


def make_alphabet(letters: Iterable[str] | str) -> tuple[str, ...]:
    """Normalise an alphabet: a plain string is split into characters, a
    comma-separated string into identifiers."""
    if isinstance(letters, str):
        letters = letters.split(",") if "," in letters else list(letters)
    out = tuple(sorted({str(a).strip() for a in letters if str(a).strip()}))
    if not out:
        raise ValueError("alphabet must be nonempty")
    return out


# ---------------------------------------------------------------- guards

_GUARDS: dict = {}


class Guard:
    """Boolean combination of threshold constraints.

    kind is one of ``lset`` (``#B cmp c``), ``fac`` (``#"u" cmp c``),
    ``not``, ``and``, ``or``.
    """

    __slots__ = ("kind", "subject", "cmp", "bound", "args")

    def __new__(cls, kind, subject=None, cmp=None, bound=None, args=()):
        key = (kind, subject, cmp, bound, args)
        node = _GUARDS.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        node.kind = kind
        node.subject = subject
        node.cmp = cmp
        node.bound = bound
        node.args = args
        return _GUARDS.setdefault(key, node)

    def __repr__(self):
        return f"Guard({render_guard(self)})"

    def __reduce__(self):
        return (Guard, (self.kind, self.subject, self.cmp, self.bound, self.args))


def count_atom(letters: Iterable[str], cmp: str, bound: int) -> Guard:
    if cmp not in CMPS or bound < 0:
        raise ValueError(f"bad threshold constraint {cmp}{bound}")
    return Guard("lset", frozenset(letters), cmp, int(bound))


def factor_atom(u: Word, cmp: str, bound: int) -> Guard:
    u = tuple(u)
    if not u:
        raise ValueError("factor must be nonempty")
    if cmp not in CMPS or bound < 0:
        raise ValueError(f"bad threshold constraint {cmp}{bound}")
    return Guard("fac", u, cmp, int(bound))


def gnot(g: Guard) -> Guard:
    return Guard("not", args=(g,))


def gand(*gs: Guard) -> Guard:
    return gs[0] if len(gs) == 1 else Guard("and", args=tuple(gs))


def gor(*gs: Guard) -> Guard:
    return gs[0] if len(gs) == 1 else Guard("or", args=tuple(gs))


def guard_atoms(g: Guard) -> list[Guard]:
    if g.kind in ("lset", "fac"):
        return [g]
    out: list[Guard] = []
    for c in g.args:
        out.extend(guard_atoms(c))
    return out


def _is_inv(g):
    return g.kind == "lset" and g.cmp == "=" and g.bound == 0


def _is_pos_fac(g):
    return g.kind == "fac" and ((g.cmp == ">" and g.bound == 0) or (g.cmp == ">=" and g.bound == 1))


def _is_neg_fac(g):
    return g.kind == "fac" and ((g.cmp == "=" and g.bound == 0) or (g.cmp == "<" and g.bound == 1)
                                or (g.cmp == "<=" and g.bound == 0))


def _conjunctive_atoms(g):
    if g.kind == "and":
        out = []
        for c in g.args:
            sub = _conjunctive_atoms(c)
            if sub is None:
                return None
            out.extend(sub)
        return out
    if g.kind in ("lset", "fac"):
        return [g]
    return None


def guard_fragments(g: Guard | None) -> set[str]:
    """Names of the guard classes this guard belongs to."""
    if g is None:
        return {"Inv", "BInv", "Th", "BTh", "Fac", "NFac", "BFac", "BThFac"}
    atoms = guard_atoms(g)
    single = g.kind in ("lset", "fac")
    out = {"BThFac"}
    if all(a.kind == "lset" for a in atoms):
        out.add("BTh")
        if single:
            out.add("Th")
        if all(_is_inv(a) for a in atoms):
            out.add("BInv")
            if single:
                out.add("Inv")
    if all(a.kind == "fac" and (_is_pos_fac(a) or _is_neg_fac(a)) for a in atoms):
        out.add("BFac")
        conj = _conjunctive_atoms(g)
        if conj is not None:
            out.add("Fac")
        if single and _is_neg_fac(g):
            out.add("NFac")
    return out


# -------------------------------------------------------------- formulas

_NODES: dict = {}


class Formula:
    """Hash-consed temporal formula node.

    kinds: ``true false atom not and or X Y F P U S``. ``n`` holds the
    exponent of X/Y (1 for plain next), ``guard`` the F/P guard or None.
    """

    __slots__ = ("kind", "args", "letter", "n", "guard", "__weakref__")

    def __new__(cls, kind, args=(), letter=None, n=0, guard=None):
        key = (kind, args, letter, n, guard)
        node = _NODES.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        node.kind = kind
        node.args = args
        node.letter = letter
        node.n = n
        node.guard = guard
        return _NODES.setdefault(key, node)

    def __repr__(self):
        return f"Formula({render(self)})"

    def __str__(self):
        return render(self)

    def __reduce__(self):
        return (Formula, (self.kind, self.args, self.letter, self.n, self.guard))


TRUE = Formula("true")
FALSE = Formula("false")


def atom(a: str) -> Formula:
    return Formula("atom", letter=a)


# raw constructors: no simplification, used by the parser

def Not(f):
    return Formula("not", (f,))


def And(*fs):
    return Formula("and", tuple(fs))


def Or(*fs):
    return Formula("or", tuple(fs))


def Next(f, n=1):
    if n < 1:
        raise ValueError("X^n needs n >= 1")
    return Formula("X", (f,), n=n)


def Prev(f, n=1):
    if n < 1:
        raise ValueError("Y^n needs n >= 1")
    return Formula("Y", (f,), n=n)


def Fut(f, guard=None):
    return Formula("F", (f,), guard=guard)


def Past(f, guard=None):
    return Formula("P", (f,), guard=guard)


def Until(a, g):
    return Formula("U", (a, g))


def Since(a, g):
    return Formula("S", (a, g))


# smart constructors: constant folding, flattening, sharing

def neg(f: Formula) -> Formula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if f.kind == "not":
        return f.args[0]
    return Not(f)


def conj(*fs: Formula) -> Formula:
    out: list[Formula] = []
    seen = set()
    for f in fs:
        parts = f.args if f.kind == "and" else (f,)
        for p in parts:
            if p is FALSE:
                return FALSE
            if p is TRUE or id(p) in seen:
                continue
            seen.add(id(p))
            out.append(p)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(*out)


def disj(*fs: Formula) -> Formula:
    out: list[Formula] = []
    seen = set()
    for f in fs:
        parts = f.args if f.kind == "or" else (f,)
        for p in parts:
            if p is TRUE:
                return TRUE
            if p is FALSE or id(p) in seen:
                continue
            seen.add(id(p))
            out.append(p)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(*out)


def nxt(f: Formula, n: int = 1) -> Formula:
    if n == 0:
        return f
    if f is FALSE:
        return FALSE
    return Next(f, n)


def prv(f: Formula, n: int = 1) -> Formula:
    if n == 0:
        return f
    if f is FALSE:
        return FALSE
    return Prev(f, n)


def fut(f: Formula, guard: Guard | None = None) -> Formula:
    if f is FALSE:
        return FALSE
    return Fut(f, guard)


def past(f: Formula, guard: Guard | None = None) -> Formula:
    if f is FALSE:
        return FALSE
    return Past(f, guard)


def until(a: Formula, g: Formula) -> Formula:
    if g is FALSE:
        return FALSE
    return Until(a, g)


def since(a: Formula, g: Formula) -> Formula:
    if g is FALSE:
        return FALSE
    return Since(a, g)


def implies(a: Formula, b: Formula) -> Formula:
    return disj(neg(a), b)


def st_of(u: Word) -> Formula:
    """a1 & X(a2 & X(... & X an)); true for the empty word."""
    f = TRUE
    for a in reversed(tuple(u)):
        f = conj(atom(a), nxt(f)) if f is not TRUE else atom(a)
    return f


def end_of(u: Word) -> Formula:
    """an & Y(a(n-1) & Y(... & Y a1)); true for the empty word."""
    f = TRUE
    for a in tuple(u):
        f = conj(atom(a), prv(f)) if f is not TRUE else atom(a)
    return f


# ------------------------------------------------------------ traversal

def subformulas(f: Formula) -> list[Formula]:
    """Distinct reachable nodes, children before parents."""
    order: list[Formula] = []
    seen = set()
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for c in reversed(node.args):
            if id(c) not in seen:
                stack.append((c, False))
    return order


def _guard_nodes(g: Guard, acc: dict):
    if id(g) in acc:
        return
    acc[id(g)] = g
    for c in g.args:
        _guard_nodes(c, acc)


def _log2ceil(c: int) -> int:
    return 0 if c <= 1 else math.ceil(math.log2(c))


def _guard_node_size(g: Guard) -> int:
    if g.kind == "lset":
        return 1 + len(g.subject) + _log2ceil(g.bound)
    if g.kind == "fac":
        return 1 + len(g.subject) + _log2ceil(g.bound)
    return 1


def dag_size(f: Formula) -> int:
    """Number of distinct nodes, plus binary-coded bounds and letter sets."""
    total = 0
    guards: dict = {}
    for node in subformulas(f):
        total += 1
        if node.kind in ("X", "Y"):
            total += _log2ceil(node.n)
        if node.guard is not None:
            _guard_nodes(node.guard, guards)
    return total + sum(_guard_node_size(g) for g in guards.values())


def tree_size(f: Formula) -> int:
    memo: dict = {}
    for node in subformulas(f):
        s = 1 + (_log2ceil(node.n) if node.kind in ("X", "Y") else 0)
        if node.guard is not None:
            s += _guard_tree_size(node.guard)
        memo[id(node)] = s + sum(memo[id(c)] for c in node.args)
    return memo[id(f)]


def _guard_tree_size(g):
    return _guard_node_size(g) + sum(_guard_tree_size(c) for c in g.args)


def letters_of(f: Formula) -> set[str]:
    out = set()
    for node in subformulas(f):
        if node.kind == "atom":
            out.add(node.letter)
        if node.guard is not None:
            for a in guard_atoms(node.guard):
                out.update(a.subject)
    return out


def modal_depth(f: Formula) -> int:
    memo: dict = {}
    for node in subformulas(f):
        d = max((memo[id(c)] for c in node.args), default=0)
        memo[id(node)] = d + (1 if node.kind in ("X", "Y", "F", "P", "U", "S") else 0)
    return memo[id(f)]


def fragments(f: Formula) -> set[str]:
    """Temporal logics (by name) whose syntax admits f."""
    kinds = {n.kind for n in subformulas(f)}
    guards = [n.guard for n in subformulas(f) if n.kind in ("F", "P")]
    out = set()
    if "U" not in kinds and "S" not in kinds:
        cls = {"Inv", "BInv", "Th", "BTh", "Fac", "NFac", "BFac", "BThFac"}
        for g in guards:
            cls &= guard_fragments(g)
        out |= {c + "TL" for c in cls}
    if all(g is None for g in guards):
        out.add("LTL")
    return out


def mirror(f: Formula) -> Formula:
    """Time reversal: F<->P, X<->Y, U<->S, factor subjects reversed."""
    memo: dict = {}
    swap = {"F": "P", "P": "F", "X": "Y", "Y": "X", "U": "S", "S": "U"}
    for node in subformulas(f):
        args = tuple(memo[id(c)] for c in node.args)
        g = _mirror_guard(node.guard) if node.guard is not None else None
        memo[id(node)] = Formula(swap.get(node.kind, node.kind), args, node.letter, node.n, g)
    return memo[id(f)]


def _mirror_guard(g: Guard) -> Guard:
    if g.kind == "fac":
        return Guard("fac", tuple(reversed(g.subject)), g.cmp, g.bound)
    if g.kind == "lset":
        return g
    return Guard(g.kind, args=tuple(_mirror_guard(c) for c in g.args))


# ------------------------------------------------------------- rendering

def _word_text(u) -> str:
    return "".join(u)


def render_guard(g: Guard, alphabet: Sequence[str] | None = None) -> str:
    return _rg(g, 0)


def _rg(g: Guard, need: int) -> str:
    if g.kind == "lset":
        return "#{" + ",".join(sorted(g.subject)) + "}" + g.cmp + str(g.bound)
    if g.kind == "fac":
        return '#"' + _word_text(g.subject) + '"' + g.cmp + str(g.bound)
    if g.kind == "not":
        return "!" + _rg(g.args[0], 3)
    prec = 2 if g.kind == "and" else 1
    sep = " & " if g.kind == "and" else " | "
    s = sep.join(_rg(c, prec + 1) for c in g.args)
    return f"({s})" if need > prec else s


_PREC = {"or": 1, "and": 2}


def render(f: Formula) -> str:
    """Concrete syntax accepted by :func:`parse_tl`."""
    memo: dict = {}

    def r(node, need):
        key = (id(node), need)
        if key in memo:
            return memo[key]
        k = node.kind
        if k in ("true", "false"):
            s = k
        elif k == "atom":
            s = node.letter
        elif k == "not":
            s = "!" + r(node.args[0], 3)
        elif k in ("and", "or"):
            sep = " & " if k == "and" else " | "
            s = sep.join(r(c, _PREC[k] + 1) for c in node.args)
            if need > _PREC[k]:
                s = f"({s})"
        elif k in ("X", "Y"):
            op = k if node.n == 1 else f"{k}^{node.n}"
            s = f"{op} {r(node.args[0], 3)}"
        elif k in ("F", "P"):
            g = f"[{render_guard(node.guard)}]" if node.guard is not None else ""
            s = f"{k}{g} {r(node.args[0], 3)}"
        else:
            s = f"({r(node.args[0], 1)} {k} {r(node.args[1], 1)})"
        memo[key] = s
        return s

    return r(f, 0)


# --------------------------------------------------------------- parsing

_KEYWORDS = ("X", "Y", "F", "P", "G", "H", "U", "S")
_TOKEN = re.compile(
    r'\s+|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<nat>\d+)|"(?P<qword>[^"]*)"'
    r"|(?P<sym><=|>=|[!&|()\[\]{},#+<>=^])"
)


def _split_ident(run: str, letters: set[str], start: int, text: str) -> list[tuple[str, str, int]]:
    if run in ("true", "false"):
        return [("kw", run, start)]
    if run in letters:
        return [("letter", run, start)]
    out = []
    i = 0
    while i < len(run):
        best = None
        for cand in letters:
            if run.startswith(cand, i) and (best is None or len(cand) > len(best[1])):
                best = ("letter", cand)
        if best is None and run[i] in _KEYWORDS:
            best = ("kw", run[i])
        if best is None:
            raise ParseError(f"unknown letter in {run!r}", text, start + i)
        out.append((best[0], best[1], start + i))
        i += len(best[1])
    return out


def _tokenize(text: str, letters: set[str]):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.group("ident"):
            toks.extend(_split_ident(m.group("ident"), letters, pos, text))
        elif m.group("nat"):
            toks.append(("nat", int(m.group("nat")), pos))
        elif m.group("qword") is not None:
            toks.append(("qword", m.group("qword"), pos))
        elif m.group("sym"):
            toks.append(("sym", m.group("sym"), pos))
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


def split_word(s: str, letters: Iterable[str]) -> tuple[str, ...]:
    """Split a word written without separators into alphabet letters."""
    letters = set(letters)
    out = []
    i = 0
    while i < len(s):
        best = max((c for c in letters if s.startswith(c, i)), key=len, default=None)
        if best is None:
            raise ValueError(f"unknown letter at offset {i} of {s!r}")
        out.append(best)
        i += len(best)
    return tuple(out)


class _Parser:
    def __init__(self, text: str, alphabet: Sequence[str]):
        self.text = text
        self.letters = set(alphabet)
        self.toks = _tokenize(text, self.letters)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def expect(self, kind, value=None):
        t = self.peek()
        if t[0] != kind or (value is not None and t[1] != value):
            found = "end of input" if t[0] == "eof" else repr(t[1])
            self.error(f"expected {value or kind}, found {found}")
        return self.take()

    def is_sym(self, v):
        t = self.peek()
        return t[0] == "sym" and t[1] == v

    def is_kw(self, v):
        t = self.peek()
        return t[0] == "kw" and t[1] == v

    # formulas
    def formula(self):
        left = self.disjunction()
        if self.is_kw("U") or self.is_kw("S"):
            op = self.take()[1]
            right = self.formula()
            return Until(left, right) if op == "U" else Since(left, right)
        return left

    def disjunction(self):
        items = [self.conjunction()]
        while self.is_sym("|"):
            self.take()
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(*items)

    def conjunction(self):
        items = [self.unary()]
        while self.is_sym("&"):
            self.take()
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(*items)

    def unary(self):
        t = self.peek()
        if t[0] == "sym" and t[1] == "!":
            self.take()
            return Not(self.unary())
        if t[0] == "sym" and t[1] == "(":
            self.take()
            f = self.formula()
            self.expect("sym", ")")
            return f
        if t[0] == "letter":
            self.take()
            return atom(t[1])
        if t[0] == "kw":
            kw = t[1]
            if kw == "true":
                self.take()
                return TRUE
            if kw == "false":
                self.take()
                return FALSE
            if kw in ("X", "Y"):
                self.take()
                n = 1
                if self.is_sym("^"):
                    self.take()
                    n = self.expect("nat")[1]
                    if n < 1:
                        self.error("exponent must be at least 1")
                sub = self.unary()
                return Next(sub, n) if kw == "X" else Prev(sub, n)
            if kw in ("F", "P"):
                self.take()
                g = None
                if self.is_sym("["):
                    self.take()
                    g = self.gexpr()
                    self.expect("sym", "]")
                sub = self.unary()
                return Fut(sub, g) if kw == "F" else Past(sub, g)
            if kw in ("G", "H"):
                self.take()
                sub = self.unary()
                return Not((Fut if kw == "G" else Past)(Not(sub)))
        self.error(f"unexpected token {t[1]!r}")

    # guards
    def gexpr(self):
        items = [self.gconj()]
        while self.is_sym("|"):
            self.take()
            items.append(self.gconj())
        return gor(*items)

    def gconj(self):
        items = [self.gunary()]
        while self.is_sym("&"):
            self.take()
            items.append(self.gunary())
        return gand(*items)

    def qword(self):
        t = self.expect("qword")
        try:
            u = split_word(t[1], self.letters)
        except ValueError:
            raise ParseError(f"unknown letter in factor {t[1]!r}", self.text, t[2]) from None
        if not u:
            raise ParseError("factor must be nonempty", self.text, t[2])
        return u

    def gunary(self):
        t = self.peek()
        if t[0] == "sym" and t[1] == "!":
            self.take()
            if self.peek()[0] == "qword":
                return factor_atom(self.qword(), "=", 0)
            return gnot(self.gunary())
        if t[0] == "sym" and t[1] == "+":
            self.take()
            return factor_atom(self.qword(), ">", 0)
        if t[0] == "sym" and t[1] == "(":
            self.take()
            g = self.gexpr()
            self.expect("sym", ")")
            return g
        if t[0] == "sym" and t[1] == "#":
            self.take()
            if self.peek()[0] == "qword":
                u = self.qword()
                cmp, c = self.comparison()
                return factor_atom(u, cmp, c)
            self.expect("sym", "{")
            letters = []
            if not self.is_sym("}"):
                letters.append(self.expect("letter")[1])
                while self.is_sym(","):
                    self.take()
                    letters.append(self.expect("letter")[1])
            self.expect("sym", "}")
            cmp, c = self.comparison()
            return count_atom(letters, cmp, c)
        self.error("malformed guard at end of input" if t[0] == "eof" else f"malformed guard near {t[1]!r}")

    def comparison(self):
        t = self.peek()
        if t[0] != "sym" or t[1] not in CMPS:
            self.error("expected comparator")
        self.take()
        return t[1], self.expect("nat")[1]


def parse_tl(text: str, alphabet: Iterable[str] | str) -> Formula:
    """Parse the concrete temporal syntax into an interned formula."""
    p = _Parser(text, make_alphabet(alphabet))
    f = p.formula()
    if p.peek()[0] != "eof":
        p.error(f"trailing input {p.peek()[1]!r}")
    return f
