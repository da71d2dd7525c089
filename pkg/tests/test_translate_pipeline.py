import pytest
from hypothesis import given

from betweentl.checks import WordOracle, pipeline_suite
from betweentl.corpus import CURATED_TL, curated, guarded_corpus
from betweentl.semantics import enumerate_models
from betweentl.syntax import dag_size, fragments, parse_tl
from betweentl.translate.guards import CapExceeded
from betweentl.translate.pipeline import pipeline_stages, pipeline_to_ltl, stages

from strategies import AB, ABC, tl_formulas

ORACLE = WordOracle(ABC, 7)


def test_stair_models_preserved():
    f = curated("stair2")
    g = pipeline_to_ltl(f)
    assert "LTL" in fragments(g)
    assert enumerate_models(g, AB, 7) == enumerate_models(f, AB, 7)


def test_plain_ltl_unchanged():
    f = parse_tl("a U (X b & Y a)", AB)
    assert pipeline_to_ltl(f) is f


def test_bb_between_aa_block():
    f = parse_tl('F[+"aa" & !"bb"] (b & Y b)', AB)
    assert WordOracle(AB, 8).first_difference(f, pipeline_to_ltl(f)) is None


@pytest.mark.parametrize("name", sorted(CURATED_TL))
def test_curated(name):
    f = curated(name)
    alphabet = CURATED_TL[name][1]
    assert WordOracle(alphabet, 7).first_difference(f, pipeline_to_ltl(f)) is None


def test_report():
    g, rep = pipeline_to_ltl(parse_tl("F[#{a}>=2] b", AB), report=True)
    assert [s.name for s in rep.stages] == [name for name, _ in stages()]
    assert rep.stages[-1].dag_size_out == dag_size(g)
    d = rep.to_dict(timing=False)
    assert "wall_ms" not in d["stages"][0]


def test_cap_respected():
    with pytest.raises(CapExceeded):
        pipeline_to_ltl(parse_tl("F[#{a}>=5] b", AB), cap=4)


def test_corpus_is_deterministic():
    a = guarded_corpus(10, seed=3)
    b = guarded_corpus(10, seed=3)
    assert a == b


@given(tl_formulas(ABC, depth=2))
def test_every_stage_preserves_models(f):
    for name, g in pipeline_stages(f)[1:]:
        assert ORACLE.first_difference(f, g) is None, name


def test_suite_small():
    out = pipeline_suite(n=15, seed=1, max_len=6)
    assert out["mismatches"] == [] and out["formulas"] == 15
