"""Satisfiability-preserving encodings into two-variable logic with between
predicates: corridor tilings, and threshold atoms replaced by global
counters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .. import fo2 as F2
from ..fo2 import (
    FFALSE, FTRUE, FO, bet, exists, fand, fiff, fimp, fnot, forall, forr, letter, lt, other,
    suc,
)
from ..syntax import make_alphabet

COLOURS = ("R", "G", "B")  # red, green, blue in cyclic order
_IDENT_OK = str.isidentifier


# ------------------------------------------------------------ small helpers

def first(v: str) -> FO:
    return fnot(exists(other(v), suc(other(v), v)))


def last(v: str) -> FO:
    return fnot(exists(other(v), suc(v, other(v))))


def after(v: str, i: int, body) -> FO:
    """body(u) at the position u = v + i (the position must exist)."""
    if i == 0:
        return body(v)
    o = other(v)
    return exists(o, fand(suc(v, o), after(o, i - 1, body)))


def fxor(a: FO, b: FO) -> FO:
    return forr(fand(a, fnot(b)), fand(fnot(a), b))


def geq_bits(xs: list, ys: list) -> FO:
    """Unsigned comparison of equal-length bit formulas, least significant
    first: value(xs) >= value(ys)."""
    out = FTRUE
    for a, b in zip(xs, ys):  # fold from least to most significant bit
        out = forr(fand(a, fnot(b)), fand(fiff(a, b), out))
    return out


def add_constant(bits: list, k: int) -> tuple[list, FO]:
    """Bits of value(bits) + k and the carry out, least significant first."""
    out, carry = [], FFALSE
    for i, b in enumerate(bits):
        c = bool(k >> i & 1)
        if c:
            out.append(fnot(fxor(b, carry)))
            carry = forr(b, carry)
        else:
            out.append(fxor(b, carry))
            carry = fand(b, carry)
    if k >> len(bits):
        return out, FTRUE  # k >= 2^r: the sum always reaches 2^r
    return out, carry


# ------------------------------------------------------------------ tiling

@dataclass(frozen=True)
class TilingInstance:
    """Corridor tiling: tiles, horizontal and vertical compatibility, start
    and final tile, and the width exponent n (rows have 2^n cells)."""

    tiles: tuple
    H: frozenset
    V: frozenset
    start: str
    final: str
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not self.tiles:
            raise ValueError("no tiles")
        for t in self.tiles:
            if not _IDENT_OK(t):
                raise ValueError(f"tile name {t!r} is not an identifier")
        if self.start not in self.tiles or self.final not in self.tiles:
            raise ValueError("start and final tiles must be tiles")
        for rel in (self.H, self.V):
            for p in rel:
                if len(p) != 2 or not set(p) <= set(self.tiles):
                    raise ValueError(f"bad compatibility pair {p!r}")

    @classmethod
    def make(cls, tiles, H, V, start, final, n):
        return cls(tuple(tiles), frozenset(map(tuple, H)), frozenset(map(tuple, V)), start, final, n)

    @classmethod
    def from_json(cls, data: dict):
        return cls.make(data["tiles"], data.get("H", []), data.get("V", []),
                        data["start"], data["final"], int(data["n"]))


@dataclass
class TilingEncoding:
    formula: FO
    alphabet: tuple
    instance: TilingInstance

    def marker(self, tile, colour):
        return f"{tile}_{colour}"


BIT0, BIT1 = "b0", "b1"


def encode_tiling(M: TilingInstance) -> TilingEncoding:
    """Sentence satisfiable exactly when the corridor tiling has a solution.

    A row is 2^n blocks; a block is a marker (tile and row colour) followed
    by the n bits of its column number, least significant first.
    """
    n = M.n
    markers = {(t, c): f"{t}_{c}" for t in M.tiles for c in COLOURS}
    alphabet = make_alphabet(list(markers.values()) + [BIT0, BIT1])
    MARK = tuple(sorted(markers.values()))

    def mark(v):
        return letter(MARK, v)

    def tile(t, v):
        return letter(tuple(markers[t, c] for c in COLOURS), v)

    def colour(c, v):
        return letter(tuple(markers[t, c] for t in M.tiles), v)

    def colour_set(c):
        return tuple(markers[t, c] for t in M.tiles)

    def bit(i, value, v):  # bit i (1-based) of the block starting at v
        return after(v, i, lambda u: letter(BIT1 if value else BIT0, u))

    def all_bits(value, v):
        return fand(*(bit(i, value, v) for i in range(1, n + 1)))

    x, y = "x", "y"
    consecutive = fand(mark(x), mark(y), lt(x, y), fnot(bet(MARK, x, y)))

    structure = fand(
        forall(x, fimp(first(x), mark(x))),
        forall(x, fimp(mark(x), fand(
            *(after(x, i, lambda u: letter((BIT0, BIT1), u)) for i in range(1, n + 1)),
            forr(after(x, n + 1, mark), after(x, n, last)),
        ))),
    )
    start = exists(x, fand(first(x), letter(markers[M.start, "R"], x), all_bits(0, x)))
    last_marker = fand(mark(x), fnot(exists(y, fand(lt(x, y), mark(y)))))
    end = forall(x, fimp(last_marker, fand(tile(M.final, x), all_bits(1, x))))

    # increment: bit i flips exactly when all lower bits of x are 1
    inc = fand(*(
        fiff(bit(i, 1, y), fxor(bit(i, 1, x), fand(*(bit(j, 1, x) for j in range(1, i)))))
        for i in range(1, n + 1)
    ))
    row_start = all_bits(0, y)
    colours = fand(*(
        fimp(colour(c, x), fand(fimp(row_start, colour(COLOURS[(k + 1) % 3], y)),
                                fimp(fnot(row_start), colour(c, y))))
        for k, c in enumerate(COLOURS)
    ))
    counter = forall(x, forall(y, fimp(consecutive, fand(inc, colours))))

    horizontal = forall(x, forall(y, fimp(
        fand(consecutive, fnot(row_start)),
        forr(*(fand(tile(a, x), tile(b, y)) for a, b in sorted(M.H))),
    )))
    eq = fand(mark(x), mark(y), *(fiff(bit(i, 1, x), bit(i, 1, y)) for i in range(1, n + 1)))
    lacks_colour = forr(*(fnot(bet(colour_set(c), x, y)) for c in COLOURS))
    vertical = forall(x, forall(y, fimp(
        fand(lt(x, y), lacks_colour, eq),
        forr(*(fand(tile(a, x), tile(b, y)) for a, b in sorted(M.V))),
    )))
    phi = fand(structure, start, end, counter, horizontal, vertical)
    return TilingEncoding(phi, alphabet, M)


def decode_tiling(word, enc: TilingEncoding) -> list[list[str]]:
    """Rows of tiles read off a model of the encoding."""
    width = 2 ** enc.instance.n
    tiles = [a.rsplit("_", 1)[0] for a in word if a not in (BIT0, BIT1)]
    return [tiles[i:i + width] for i in range(0, len(tiles), width)]


def solve_tiling_brute(M: TilingInstance, max_rows: int) -> list | None:
    """Reference solver: first solution with at most max_rows rows."""
    import itertools

    width = 2 ** M.n
    for m in range(1, max_rows + 1):
        for cells in itertools.product(M.tiles, repeat=width * m):
            grid = [cells[r * width:(r + 1) * width] for r in range(m)]
            if grid[0][0] != M.start or grid[-1][-1] != M.final:
                continue
            if any((row[i], row[i + 1]) not in M.H for row in grid for i in range(width - 1)):
                continue
            if any((grid[r][i], grid[r + 1][i]) not in M.V for r in range(m - 1) for i in range(width)):
                continue
            return [list(row) for row in grid]
    return None


# --------------------------------------------------- thresholds to between

@dataclass
class Counter:
    """A global modulo 2^r counter of the letters in ``subject``."""

    subject: tuple
    r: int
    name: str


@dataclass
class CounterEncoding:
    formula: FO
    alphabet: tuple
    base_alphabet: tuple
    counters: list = field(default_factory=list)
    letter_parts: dict = field(default_factory=dict)  # product letter -> (base, states)

    def annotate(self, w) -> tuple:
        """The product word carrying the true counter values and colours."""
        states = [(0, 0)] * len(self.counters)
        index = {parts: name for name, parts in self.letter_parts.items()}
        out = []
        for a in w:
            out.append(index[(a, tuple(states))])
            nxt = []
            for (value, col), g in zip(states, self.counters):
                if a in g.subject:
                    value += 1
                    if value == 2 ** g.r:
                        value, col = 0, (col + 1) % 3
                nxt.append((value, col))
            states = nxt
        return tuple(out)

    def project(self, w) -> tuple:
        return tuple(self.letter_parts[a][0] for a in w)


def fo2_threshold_to_between(f: FO, alphabet) -> CounterEncoding:
    """Replace threshold atoms by global counters, preserving satisfiability.

    Each letter set counted with a threshold k >= 2 gets a counter of
    r = ceil(log2 k_max) bits plus three colours that cycle on overflow.  The
    word alphabet becomes base letters paired with counter states; a model
    of the result projects to a model of f, and annotating a model of f with
    its true counters gives a model of the result.
    """
    A = make_alphabet(alphabet)
    need: dict = {}
    for node in F2.nodes(f):
        if node.kind == "th" and node.k >= 2:
            S = F2.sym_letters(node)
            need[S] = max(need.get(S, 0), node.k)
    counters = [Counter(S, max(1, math.ceil(math.log2(k))), f"g{i}")
                for i, (S, k) in enumerate(sorted(need.items()))]

    # product letters
    import itertools

    per = [[(v, c) for v in range(2 ** g.r) for c in range(3)] for g in counters]
    parts: dict = {}
    for a in A:
        for states in itertools.product(*per):
            name = a + "".join(
                "_" + format(v, f"0{g.r}b")[::-1] + COLOURS[c] for (v, c), g in zip(states, counters))
            parts[name] = (a, tuple(states))
    letters = tuple(sorted(parts))

    def with_(pred) -> tuple:
        return tuple(n for n, (a, st) in sorted(parts.items()) if pred(a, st))

    def base(S, v):
        return letter(with_(lambda a, st: a in S), v)

    def bit(gi, i, v):
        return letter(with_(lambda a, st: bool(st[gi][0] >> i & 1)), v)

    def colour(gi, c, v):
        return letter(with_(lambda a, st: st[gi][1] == c), v)

    def bet_colour(gi, c, v1, v2):
        return bet(with_(lambda a, st: st[gi][1] == c), v1, v2)

    def successor(gi, v):
        """Bits and colours of the counter one position to the right of v."""
        g = counters[gi]
        hit = base(g.subject, v)
        bits = [bit(gi, i, v) for i in range(g.r)]
        u = [fxor(bits[i], fand(hit, *bits[:i])) for i in range(g.r)]
        wrap = fand(hit, *bits)
        cols = [forr(fand(fnot(wrap), colour(gi, c, v)), fand(wrap, colour(gi, (c - 1) % 3, v)))
                for c in range(3)]
        return u, cols

    constraints = []
    for gi, g in enumerate(counters):
        x, y = "x", "y"
        init = forall(x, fimp(first(x), fand(*(fnot(bit(gi, i, x)) for i in range(g.r)),
                                             colour(gi, 0, x))))
        u, cols = successor(gi, x)
        step = forall(x, forall(y, fimp(suc(x, y), fand(
            *(fiff(bit(gi, i, y), u[i]) for i in range(g.r)),
            *(fiff(colour(gi, c, y), cols[c]) for c in range(3)),
        ))))
        constraints += [init, step]

    index = {g.subject: gi for gi, g in enumerate(counters)}

    def threshold(S, k, v1, v2) -> FO:
        gi = index[S]
        g = counters[gi]
        u, cols = successor(gi, v1)  # counter value and colour at v1 + 1
        V = [bit(gi, i, v2) for i in range(g.r)]
        s_low, s_high = add_constant(u, k)
        ge = geq_bits(V, s_low)
        same = forr(*(fand(cols[c], colour(gi, c, v2),
                           *(fnot(bet_colour(gi, d, v1, v2)) for d in range(3) if d != c))
                      for c in range(3)))
        once = forr(*(fand(cols[c], colour(gi, (c + 1) % 3, v2),
                           fnot(bet_colour(gi, (c + 2) % 3, v1, v2)))
                      for c in range(3)))
        return fand(lt(v1, v2), forr(
            fand(same, fnot(s_high), ge),
            fand(once, forr(fnot(s_high), ge)),
            fand(fnot(same), fnot(once)),
        ))

    memo: dict = {}

    def go(n: FO) -> FO:
        r = memo.get(n)
        if r is not None:
            return r
        k = n.kind
        if k == "letter":
            r = base(F2.sym_letters(n), n.vars[0])
        elif k == "bet":
            r = bet(with_(lambda a, st: a in F2.sym_letters(n)), *n.vars)
        elif k == "th":
            S = F2.sym_letters(n)
            if n.k == 0:
                r = lt(*n.vars) if n.vars[0] != n.vars[1] else FFALSE
            elif n.k == 1:
                r = bet(with_(lambda a, st: a in S), *n.vars)
            else:
                r = threshold(S, n.k, *n.vars)
        elif k in ("fac", "facth"):
            raise ValueError("factor atoms are not supported by the counter encoding")
        elif n.args:
            r = FO(k, tuple(go(c) for c in n.args), n.sym, n.k, n.vars)
        else:
            r = n
        memo[n] = r
        return r

    out = fand(go(f), *constraints)
    return CounterEncoding(out, letters, A, counters, parts)


__all__ = [
    "TilingInstance", "TilingEncoding", "encode_tiling", "decode_tiling", "solve_tiling_brute",
    "Counter", "CounterEncoding", "fo2_threshold_to_between", "COLOURS",
]
