"""Two-variable first-order formulas over words, with between predicates."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .syntax import ParseError, make_alphabet, split_word

VARS = ("x", "y")


class FO:
    """Hash-consed FO2 node.

    Atom kinds: ``letter`` a(v), ``lt`` v1<v2, ``le`` v1<=v2, ``eq`` v1=v2,
    ``suc`` v2=v1+1, ``bet`` a(v1,v2), ``th`` at least k a's strictly between,
    ``fac`` factor u strictly between, ``facth`` at least k occurrences of u.
    Connectives ``true false not and or exists forall``.
    """

    __slots__ = ("kind", "args", "sym", "k", "vars", "__weakref__")
    _table: dict = {}

    def __new__(cls, kind, args=(), sym=None, k=0, vars=()):
        key = (kind, args, sym, k, vars)
        node = cls._table.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        node.kind = kind
        node.args = args
        node.sym = sym
        node.k = k
        node.vars = vars
        return cls._table.setdefault(key, node)

    def __repr__(self):
        return f"FO({render_fo2(self)})"

    def __str__(self):
        return render_fo2(self)

    def __reduce__(self):
        return (FO, (self.kind, self.args, self.sym, self.k, self.vars))


FTRUE = FO("true")
FFALSE = FO("false")


def _v(*vs):
    for v in vs:
        if v not in VARS:
            raise ValueError(f"variable must be x or y, got {v!r}")
    return tuple(vs)


def other(v: str) -> str:
    return "y" if v == "x" else "x"


def _letters_sym(a):
    """A single letter stays a string; a set of letters becomes a sorted tuple."""
    if isinstance(a, str):
        return a
    a = tuple(sorted(set(a)))
    if not a:
        raise ValueError("empty letter set")
    return a[0] if len(a) == 1 else a


def letter(a, v):
    """The letter at v is a (or belongs to a, for a set of letters)."""
    return FO("letter", sym=_letters_sym(a), vars=_v(v))


def lt(v1, v2):
    return FO("lt", vars=_v(v1, v2))


def le(v1, v2):
    return FO("le", vars=_v(v1, v2))


def eq(v1, v2):
    return FO("eq", vars=_v(v1, v2))


def suc(v1, v2):
    """v2 is the successor of v1."""
    return FO("suc", vars=_v(v1, v2))


def bet(a, v1, v2):
    """Some letter of a (a letter or a set of letters) strictly between."""
    return FO("bet", sym=_letters_sym(a), vars=_v(v1, v2))


def th(a, k, v1, v2):
    """At least k letters of a (a letter or a set of letters) strictly between."""
    return FO("th", sym=_letters_sym(a), k=int(k), vars=_v(v1, v2))


def sym_letters(node: FO) -> tuple:
    """The letters counted by a bet/th atom."""
    return node.sym if isinstance(node.sym, tuple) else (node.sym,)


def fac(u, v1, v2):
    return FO("fac", sym=tuple(u), vars=_v(v1, v2))


def facth(u, k, v1, v2):
    return FO("facth", sym=tuple(u), k=int(k), vars=_v(v1, v2))


def fnot(f):
    if f is FTRUE:
        return FFALSE
    if f is FFALSE:
        return FTRUE
    if f.kind == "not":
        return f.args[0]
    return FO("not", (f,))


def fand(*fs):
    out = []
    for f in fs:
        for p in (f.args if f.kind == "and" else (f,)):
            if p is FFALSE:
                return FFALSE
            if p is not FTRUE and p not in out:
                out.append(p)
    if not out:
        return FTRUE
    return out[0] if len(out) == 1 else FO("and", tuple(out))


def forr(*fs):
    out = []
    for f in fs:
        for p in (f.args if f.kind == "or" else (f,)):
            if p is FTRUE:
                return FTRUE
            if p is not FFALSE and p not in out:
                out.append(p)
    if not out:
        return FFALSE
    return out[0] if len(out) == 1 else FO("or", tuple(out))


def fimp(a, b):
    return forr(fnot(a), b)


def fiff(a, b):
    return fand(fimp(a, b), fimp(b, a))


def exists(v, f):
    if f is FFALSE or f is FTRUE:
        return f
    return FO("exists", (f,), vars=_v(v))


def forall(v, f):
    if f is FFALSE or f is FTRUE:
        return f
    return FO("forall", (f,), vars=_v(v))


def nodes(f: FO) -> list[FO]:
    order, seen, stack = [], set(), [(f, False)]
    while stack:
        n, done = stack.pop()
        if done:
            order.append(n)
            continue
        if id(n) in seen:
            continue
        seen.add(id(n))
        stack.append((n, True))
        stack.extend((c, False) for c in reversed(n.args))
    return order


def free_vars(f: FO) -> frozenset:
    memo: dict = {}
    for n in nodes(f):
        if n.kind in ("exists", "forall"):
            memo[id(n)] = memo[id(n.args[0])] - {n.vars[0]}
        elif n.args:
            memo[id(n)] = frozenset().union(*(memo[id(c)] for c in n.args))
        else:
            memo[id(n)] = frozenset(n.vars)
    return memo[id(f)]


def quantifier_depth(f: FO) -> int:
    memo: dict = {}
    for n in nodes(f):
        d = max((memo[id(c)] for c in n.args), default=0)
        memo[id(n)] = d + (1 if n.kind in ("exists", "forall") else 0)
    return memo[id(f)]


def fo2_size(f: FO) -> int:
    return len(nodes(f))


def fo2_letters(f: FO) -> set:
    out = set()
    for n in nodes(f):
        if n.kind in ("letter", "bet", "th"):
            out.update(sym_letters(n))
        elif n.kind in ("fac", "facth"):
            out.update(n.sym)
    return out


# ------------------------------------------------------------- rendering

def _sym_text(n: FO) -> str:
    if isinstance(n.sym, tuple):
        return "{" + ",".join(n.sym) + "}"
    return n.sym


def render_fo2(f: FO) -> str:
    def r(n, need):
        k = n.kind
        if k in ("true", "false"):
            return k
        if k == "letter":
            return f"{_sym_text(n)}({n.vars[0]})"
        if k in ("lt", "le", "eq"):
            op = {"lt": "<", "le": "<=", "eq": "="}[k]
            return f"{n.vars[0]}{op}{n.vars[1]}"
        vv = f"({n.vars[0]},{n.vars[1]})" if len(n.vars) == 2 else ""
        if k == "suc":
            return "suc" + vv
        if k == "bet":
            return f"{_sym_text(n)}{vv}"
        if k == "th":
            return f"th({_sym_text(n)},{n.k}){vv}"
        if k == "fac":
            return f'fac("{"".join(n.sym)}"){vv}'
        if k == "facth":
            return f'facth("{"".join(n.sym)}",{n.k}){vv}'
        if k == "not":
            return "!" + r(n.args[0], 3)
        if k in ("exists", "forall"):
            return f"{k} {n.vars[0]} {r(n.args[0], 3)}"
        prec = 2 if k == "and" else 1
        s = (" & " if k == "and" else " | ").join(r(c, prec + 1) for c in n.args)
        return f"({s})" if need > prec else s

    return r(f, 0)


# --------------------------------------------------------------- parsing

_TOK = re.compile(
    r'\s+|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<nat>\d+)|"(?P<qword>[^"]*)"'
    r"|(?P<sym><->|->|<=|[!&|(),.<={}])"
)
_QUANT = {"exists": "exists", "E": "exists", "forall": "forall", "A": "forall"}


class _FOParser:
    def __init__(self, text, alphabet):
        self.text = text
        self.letters = set(alphabet)
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOK.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
            for kind in ("ident", "nat", "qword", "sym"):
                val = m.group(kind)
                if val is not None:
                    self.toks.append((kind, int(val) if kind == "nat" else val, pos))
                    break
            pos = m.end()
        self.toks.append(("eof", None, len(text)))
        self.i = 0

    def peek(self, off=0):
        return self.toks[min(self.i + off, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def expect(self, kind, val=None):
        t = self.peek()
        if t[0] != kind or (val is not None and t[1] != val):
            self.error(f"expected {val or kind}, found {t[1]!r}")
        return self.take()

    def is_sym(self, v):
        return self.peek()[0] == "sym" and self.peek()[1] == v

    def var(self):
        t = self.expect("ident")
        if t[1] not in VARS:
            raise ParseError(f"variable must be x or y, got {t[1]!r}", self.text, t[2])
        return t[1]

    def formula(self):
        left = self.disjunction()
        if self.is_sym("->"):
            self.take()
            return fimp(left, self.formula())
        if self.is_sym("<->"):
            self.take()
            return fiff(left, self.formula())
        return left

    def disjunction(self):
        items = [self.conjunction()]
        while self.is_sym("|"):
            self.take()
            items.append(self.conjunction())
        return forr(*items)

    def conjunction(self):
        items = [self.unary()]
        while self.is_sym("&"):
            self.take()
            items.append(self.unary())
        return fand(*items)

    def pair(self):
        self.expect("sym", "(")
        a = self.var()
        self.expect("sym", ",")
        b = self.var()
        self.expect("sym", ")")
        return a, b

    def qword(self):
        t = self.expect("qword")
        try:
            u = split_word(t[1], self.letters)
        except ValueError:
            raise ParseError(f"unknown letter in factor {t[1]!r}", self.text, t[2]) from None
        if not u:
            raise ParseError("factor must be nonempty", self.text, t[2])
        return u

    def unary(self):
        t = self.peek()
        if t[0] == "sym" and t[1] == "!":
            self.take()
            return fnot(self.unary())
        if t[0] == "sym" and t[1] == "(":
            self.take()
            f = self.formula()
            self.expect("sym", ")")
            return f
        if t[0] == "sym" and t[1] == "{":
            return self.letter_atom(self.letters_arg())
        if t[0] != "ident":
            self.error(f"unexpected token {t[1]!r}")
        name = t[1]
        if name in _QUANT and self.peek(1)[0] == "ident" and self.peek(1)[1] in VARS:
            self.take()
            v = self.var()
            if self.is_sym("."):
                self.take()
            body = self.unary()
            return exists(v, body) if _QUANT[name] == "exists" else forall(v, body)
        if name in ("true", "false"):
            self.take()
            return FTRUE if name == "true" else FFALSE
        if name in VARS:
            self.take()
            op = self.take()
            if op[0] != "sym" or op[1] not in ("<", "<=", "="):
                raise ParseError("expected comparison", self.text, op[2])
            w = self.var()
            return {"<": lt, "<=": le, "=": eq}[op[1]](name, w)
        self.take()
        if name == "suc" and name not in self.letters:
            return suc(*self.pair())
        if name in ("th", "fac", "facth") and name not in self.letters:
            self.expect("sym", "(")
            if name == "th":
                a = self.letters_arg()
                self.expect("sym", ",")
                k = self.expect("nat")[1]
                self.expect("sym", ")")
                return th(a, k, *self.pair())
            u = self.qword()
            k = 1
            if name == "facth":
                self.expect("sym", ",")
                k = self.expect("nat")[1]
            self.expect("sym", ")")
            vs = self.pair()
            return fac(u, *vs) if name == "fac" else facth(u, k, *vs)
        if name not in self.letters:
            raise ParseError(f"unknown letter {name!r}", self.text, t[2])
        return self.letter_atom(name)

    def letters_arg(self):
        """A letter or a braced set of letters."""
        if self.is_sym("{"):
            self.take()
            out = [self.letter_name()]
            while self.is_sym(","):
                self.take()
                out.append(self.letter_name())
            self.expect("sym", "}")
            return out
        return self.letter_name()

    def letter_name(self):
        a = self.expect("ident")[1]
        if a not in self.letters:
            self.error(f"unknown letter {a!r}")
        return a

    def letter_atom(self, name):
        """a(v) or a(v,w); name is a letter or a list of letters."""
        self.expect("sym", "(")
        a = self.var()
        if self.is_sym(","):
            self.take()
            b = self.var()
            self.expect("sym", ")")
            return bet(name, a, b)
        self.expect("sym", ")")
        return letter(name, a)


def parse_fo2(text: str, alphabet: Iterable[str] | str) -> FO:
    """Parse an FO2 formula; quantifier bodies bind tightly, so write
    ``exists x (a(x) & b(x))``."""
    p = _FOParser(text, make_alphabet(alphabet))
    f = p.formula()
    if p.peek()[0] != "eof":
        p.error(f"trailing input {p.peek()[1]!r}")
    return f


def letter_set(letters: Sequence[str], v: str) -> FO:
    """Disjunction of a(v) over the given letters."""
    return forr(*(letter(a, v) for a in letters))


def bet_set(letters: Sequence[str], v1: str, v2: str) -> FO:
    """Some letter of the set strictly between v1 and v2."""
    return forr(*(bet(a, v1, v2) for a in letters))
