import pytest
from hypothesis import given

from betweentl.algebra import regex_to_min_dfa
from betweentl.automata import DFA

from strategies import AB, words


def test_json_round_trip():
    d = regex_to_min_dfa("(ab)*", AB)
    e = DFA.from_json(d.to_json())
    assert e.equivalent(d) and e.to_json() == d.to_json()


def test_from_json_named_states_and_sink():
    d = DFA.from_json({"states": ["p", "q"], "alphabet": ["a", "b"], "initial": "p",
                       "finals": ["q"], "delta": {"p": {"a": "q"}}})
    assert d.accepts("a") and not d.accepts("ab") and not d.accepts("b")


@pytest.mark.parametrize("bad", [
    {"states": ["p", "p"], "alphabet": ["a"], "initial": "p", "finals": [], "delta": {}},
    {"states": 1, "alphabet": ["a"], "initial": 0, "finals": [], "delta": {"0": {"z": 0}}},
])
def test_from_json_rejects(bad):
    with pytest.raises(ValueError):
        DFA.from_json(bad)


@given(words(AB, 8))
def test_complement(w):
    d = regex_to_min_dfa("(a+b)*bab(a+b)*", AB)
    assert d.complement().accepts(w) != d.accepts(w)


def test_minimize_is_canonical():
    d1 = regex_to_min_dfa("(ab)*(ab)*", AB)
    d2 = regex_to_min_dfa("(ab)*", AB)
    assert d1.n_states == d2.n_states == 3
    assert d1.equivalent(d2)
