"""The staged translation of guarded formulas into LTL."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from ..syntax import Formula, dag_size, fragments, render
from .factors import beta_stage, nfac_to_ltl, split_factor_guard
from .guards import (
    DEFAULT_CAP, binv_to_inv, bth_to_binv, distribute_dnf, inv_to_ltl,
    unfold_factor_thresholds,
)


@dataclass
class StageReport:
    name: str
    dag_size_in: int
    dag_size_out: int
    wall_ms: float


@dataclass
class TranslationReport:
    input: str
    output: str
    stages: list = field(default_factory=list)

    def to_dict(self, timing: bool = True) -> dict:
        d = {"input": self.input, "output": self.output,
             "stages": [asdict(s) for s in self.stages]}
        if not timing:
            for s in d["stages"]:
                s.pop("wall_ms")
        return d


def stages(cap: int = DEFAULT_CAP) -> list:
    """(name, function) pairs applied in order by :func:`pipeline_to_ltl`."""
    return [
        ("guard_to_dnf", distribute_dnf),
        ("bth_to_binv", lambda f: bth_to_binv(f, cap)),
        ("unfold_factor_thresholds", lambda f: unfold_factor_thresholds(f, cap)),
        ("binv_to_inv", binv_to_inv),
        ("split_factor_guard", split_factor_guard),
        ("build_beta", beta_stage),
        ("nfac_to_ltl", nfac_to_ltl),
        ("inv_to_ltl", inv_to_ltl),
    ]


def pipeline_stages(f: Formula, cap: int = DEFAULT_CAP) -> list[tuple[str, Formula]]:
    """Every intermediate formula, starting with the input."""
    out = [("input", f)]
    for name, fn in stages(cap):
        f = fn(f)
        out.append((name, f))
    return out


def pipeline_to_ltl(f: Formula, cap: int = DEFAULT_CAP, report: bool = False):
    """Translate a guarded formula to an equivalent LTL formula.

    With ``report`` set, returns ``(ltl, TranslationReport)``.
    """
    rep = TranslationReport(input=render(f), output="")
    cur = f
    for name, fn in stages(cap):
        t0 = time.perf_counter()
        nxt_f = fn(cur)
        ms = (time.perf_counter() - t0) * 1000
        if report:
            rep.stages.append(StageReport(name, dag_size(cur), dag_size(nxt_f), round(ms, 3)))
        cur = nxt_f
    if "LTL" not in fragments(cur):
        raise AssertionError("pipeline left a guarded modality behind")
    if report:
        rep.output = render(cur)
        return cur, rep
    return cur


__all__ = ["StageReport", "TranslationReport", "stages", "pipeline_stages", "pipeline_to_ltl"]
