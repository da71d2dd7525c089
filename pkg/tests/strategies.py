"""Hypothesis strategies shared by the property tests."""

import random

from hypothesis import strategies as st

from betweentl.corpus import random_formula, random_guard

AB = ("a", "b")
ABC = ("a", "b", "c")


def words(alphabet=AB, max_size=6, min_size=0):
    return st.lists(st.sampled_from(alphabet), min_size=min_size, max_size=max_size).map(tuple)


@st.composite
def tl_formulas(draw, alphabet=AB, depth=2, guarded=0.6):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_formula(random.Random(seed), alphabet, depth=depth, guarded=guarded)


@st.composite
def guards(draw, alphabet=AB):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_guard(random.Random(seed), alphabet)


@st.composite
def intervals(draw, min_len=2, max_len=7, alphabet=AB):
    """A word with 1 <= i < j <= |w|."""
    w = draw(words(alphabet, max_len, min_len))
    i = draw(st.integers(1, len(w) - 1))
    j = draw(st.integers(i + 1, len(w)))
    return w, i, j
