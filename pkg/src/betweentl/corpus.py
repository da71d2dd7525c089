"""Seeded generators and a curated set of formulas used by the test suites
and the ``corpus`` command."""

from __future__ import annotations

import random

from .syntax import (
    Formula, Guard, atom, count_atom, factor_atom, gand, gnot, gor, parse_tl,
)

AB = ("a", "b")
ABC = ("a", "b", "c")

CURATED_TL = {
    "stair2": ("F(F[#{a}=2 & #{b}=0] true)", AB),
    "ab_plus": ("a & X b & !F(a & X a) & !F(b & X b) & F(b & !X(a | b))", AB),
    "bb_between_aa": ('G(!(b & X b & P(b & Y b)) | P[+"aa" & !"bb"] (b & Y b))', AB),
    "binv_example": ("F[#{a}=0 & #{b}>0 & #{c}>0] a", ABC),
    "threshold_chain": ("F[#{a}>=2] b", AB),
    "factor_count": ('F[#"ab">=2 & #{c}=0] c', ABC),
    "past_guard": ('F P[#{b}<=1 & +"ba"] a', AB),
    "until_mix": ("(a U F[#{a}=1] b) | (b S a)", AB),
}


def curated(name: str) -> Formula:
    text, alphabet = CURATED_TL[name]
    return parse_tl(text, alphabet)


def random_word(rng: random.Random, alphabet, lo: int, hi: int) -> tuple:
    return tuple(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def random_guard_atom(rng: random.Random, alphabet, max_factor=4, max_bound=3,
                      factor_thresholds=True) -> Guard:
    if rng.random() < 0.5:
        k = rng.randint(1, len(alphabet))
        letters = rng.sample(list(alphabet), k)
        cmp = rng.choice(["=", "<", "<=", ">", ">="])
        return count_atom(letters, cmp, rng.randint(0, max_bound))
    u = random_word(rng, alphabet, 1, max_factor)
    r = rng.random()
    if r < 0.4 or not factor_thresholds:
        return factor_atom(u, ">", 0) if rng.random() < 0.5 else factor_atom(u, "=", 0)
    if r < 0.8:
        return factor_atom(u, rng.choice(["=", "<=", ">="]), rng.randint(0, 1))
    return factor_atom(u[:2], rng.choice(["=", ">=", "<"]), rng.randint(1, 2))


def random_guard(rng: random.Random, alphabet, size: int | None = None, **kw) -> Guard:
    size = size or rng.randint(1, 2)
    if size == 1:
        g = random_guard_atom(rng, alphabet, **kw)
        return gnot(g) if rng.random() < 0.1 else g
    left = random_guard(rng, alphabet, 1, **kw)
    right = random_guard(rng, alphabet, size - 1, **kw)
    return gand(left, right) if rng.random() < 0.75 else gor(left, right)


def random_formula(rng: random.Random, alphabet, depth: int = 3, guarded: float = 0.6,
                   ltl_ops: bool = True, **kw) -> Formula:
    """Random temporal formula of modal depth at most ``depth``."""
    from .syntax import And, Fut, Next, Not, Or, Past, Prev, Since, Until

    if depth == 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.1:
            return parse_tl("true", alphabet)
        return atom(rng.choice(alphabet))
    r = rng.random()
    sub = lambda: random_formula(rng, alphabet, depth - 1, guarded, ltl_ops, **kw)  # noqa: E731
    same = lambda: random_formula(rng, alphabet, depth, guarded, ltl_ops, **kw)  # noqa: E731
    if r < 0.15:
        return Not(same() if rng.random() < 0.3 else sub())
    if r < 0.3:
        return And(sub(), sub()) if rng.random() < 0.6 else Or(sub(), sub())
    if r < 0.75:
        g = random_guard(rng, alphabet, **kw) if rng.random() < guarded else None
        return Fut(sub(), g) if rng.random() < 0.7 else Past(sub(), g)
    if r < 0.85 or not ltl_ops:
        n = rng.choice([1, 1, 2])
        return Next(sub(), n) if rng.random() < 0.6 else Prev(sub(), n)
    return Until(sub(), sub()) if rng.random() < 0.6 else Since(sub(), sub())


def guarded_corpus(n: int, seed: int = 0) -> list[tuple[Formula, tuple]]:
    """n random formulas, each containing at least one guarded modality."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        alphabet = AB if rng.random() < 0.5 else ABC
        f = random_formula(rng, alphabet, depth=rng.randint(1, 3))
        if any(node.guard is not None for node in _nodes(f)):
            out.append((f, alphabet))
    return out


def _nodes(f):
    from .syntax import subformulas

    return subformulas(f)
