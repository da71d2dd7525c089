"""Command-line front end.

Every command prints one JSON document (``--pretty`` prints indented text
instead).  Exit status: 0 on success, including negative answers such as an
unsatisfiable formula; 1 on a domain error, a failed suite or an exhausted
budget; 2 on a usage error.  Arguments of the form ``@path`` are read from
the named file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import fo2 as F2
from .automata import DEFAULT_MAX_STATES
from .semantics import DEFAULT_MAX_WORDS, BudgetExceeded
from .syntax import ParseError, make_alphabet, split_word

DEFAULT_MAX_ELEMENTS = 5000


class DomainError(Exception):
    """A well-formed request that cannot be answered."""


# ------------------------------------------------------------------ inputs
def _text(value: str | None) -> str | None:
    if value is not None and value.startswith("@"):
        return Path(value[1:]).read_text().strip()
    return value


def _json_arg(value: str) -> dict:
    return json.loads(_text(value))


def _alphabet(args) -> tuple:
    if not args.alphabet:
        raise DomainError("an explicit --alphabet is required")
    text = _text(args.alphabet)
    letters = [p for p in text.replace(",", " ").split()] if ("," in text or " " in text) else list(text)
    return make_alphabet(letters)


def _word(text: str | None, alphabet) -> tuple:
    text = _text(text) or ""
    if " " in text.strip() or "," in text:
        w = tuple(p for p in text.replace(",", " ").split())
        unknown = [a for a in w if a not in alphabet]
        if unknown:
            raise DomainError(f"letters {unknown} are not in the alphabet")
        return w
    try:
        return split_word(text, alphabet)
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def _word_out(w) -> str | list:
    w = tuple(w)
    return "".join(w) if all(len(a) == 1 for a in w) else list(w)


def _formula(args, alphabet):
    text = _text(args.formula)
    if text is None:
        raise DomainError("--formula is required")
    if args.fo2:
        return F2.parse_fo2(text, alphabet)
    from .syntax import parse_tl

    return parse_tl(text, alphabet)


def _theta(text: str | None, alphabet) -> dict | None:
    if not text:
        return None
    out = {}
    for part in _text(text).split(","):
        a, _, v = part.partition("=")
        a = a.strip()
        if a not in alphabet or not v.strip().isdigit():
            raise DomainError(f"bad threshold entry {part!r}; use letter=positive integer")
        out[a] = int(v)
    return out


# ---------------------------------------------------------------- commands
def cmd_parse(args):
    alphabet = _alphabet(args)
    f = _formula(args, alphabet)
    if args.fo2:
        return {"kind": "fo2", "formula": F2.render_fo2(f), "size": F2.fo2_size(f),
                "quantifier_depth": F2.quantifier_depth(f), "free_vars": sorted(F2.free_vars(f))}
    from .syntax import dag_size, fragments, modal_depth, render, tree_size

    return {"kind": "tl", "formula": render(f), "dag_size": dag_size(f), "tree_size": tree_size(f),
            "modal_depth": modal_depth(f), "fragments": sorted(fragments(f))}


def cmd_eval(args):
    from .semantics import eval_fo2, eval_tl, eval_tl_sentence

    alphabet = _alphabet(args)
    f = _formula(args, alphabet)
    w = _word(args.word, alphabet)
    if args.fo2:
        sigma = {v: p for v, p in (("x", args.x), ("y", args.y)) if p is not None}
        missing = sorted(F2.free_vars(f) - set(sigma))
        if missing:
            raise DomainError(f"free variables {missing} need --x/--y")
        for v, p in sigma.items():
            if not 1 <= p <= len(w):
                raise DomainError(f"position {v}={p} out of range")
        return {"word": _word_out(w), "assignment": sigma, "value": eval_fo2(f, w, sigma)}
    if args.position is None:
        return {"word": _word_out(w), "value": eval_tl_sentence(f, w)}
    if not 1 <= args.position <= len(w):
        raise DomainError(f"position {args.position} out of range 1..{len(w)}")
    return {"word": _word_out(w), "position": args.position, "value": eval_tl(f, (w, args.position))}


def cmd_models(args):
    from .semantics import enumerate_models

    alphabet = _alphabet(args)
    f = _formula(args, alphabet)
    models = enumerate_models(f, alphabet, args.max_len, max_words=args.max_words)
    return {"max_len": args.max_len, "count": len(models), "models": [_word_out(m) for m in models]}


def cmd_translate(args):
    alphabet = _alphabet(args)
    f = _formula(args, alphabet)
    if args.fo2:
        from .translate.reductions import fo2_threshold_to_between

        enc = fo2_threshold_to_between(f, alphabet)
        return {"input": F2.render_fo2(f), "output": F2.render_fo2(enc.formula),
                "output_size": F2.fo2_size(enc.formula), "letters": len(enc.alphabet),
                "counters": [{"subject": list(c.subject), "bits": c.r, "name": c.name}
                             for c in enc.counters]}
    from .syntax import dag_size
    from .translate.guards import CapExceeded
    from .translate.pipeline import pipeline_to_ltl

    try:
        out, rep = pipeline_to_ltl(f, cap=args.cap, report=True)
    except CapExceeded as exc:
        raise DomainError(str(exc)) from None
    result = rep.to_dict(timing=True)
    result["output_dag_size"] = dag_size(out)
    if args.figure_dir:
        from .plotting import stage_sizes_figure

        result["figures"] = [stage_sizes_figure(result["stages"], Path(args.figure_dir) / "stages.png")]
    return result


def cmd_sat(args, model_only: bool = False):
    alphabet = _alphabet(args)
    f = _formula(args, alphabet)
    if args.fo2:
        from .sat import bounded_fo2_sat

        res = bounded_fo2_sat(f, alphabet, args.max_len, max_states=args.max_states,
                              max_words=args.max_words)
    else:
        from .sat import is_satisfiable
        from .translate.guards import CapExceeded

        try:
            res = is_satisfiable(f, alphabet, method=args.method, max_states=args.max_states)
        except CapExceeded as exc:
            raise DomainError(str(exc)) from None
    d = res.to_dict(timing=True)
    if model_only:
        return {"satisfiable": d["satisfiable"], "model": d.get("model"),
                "states_explored": d["states_explored"], "wall_ms": d["wall_ms"]}
    return d


def cmd_game(args):
    from .games import game_report

    letters = set(_text(args.w1) or "") | set(_text(args.w2) or "")
    alphabet = _alphabet(args) if args.alphabet else make_alphabet(sorted(letters) or ["a"])
    w1, w2 = _word(args.w1, alphabet), _word(args.w2, alphabet)
    theta = _theta(args.theta, alphabet)
    marks = tuple(args.marks) if args.marks else None
    if marks:
        for w, i in zip((w1, w2), marks):
            if not 1 <= i <= len(w):
                raise DomainError(f"mark {i} out of range for {_word_out(w)!r}")
    return game_report(w1, w2, args.rounds, theta, marks)


def cmd_classify(args):
    from .algebra import classify

    if bool(args.regex) == bool(args.dfa):
        raise DomainError("give exactly one of --regex or --dfa")
    if args.regex:
        alphabet = _alphabet(args)
        report = classify(_text(args.regex), alphabet, args.max_elements, tuple(args.delay_k))
        report = {"regex": _text(args.regex), **report}
    else:
        report = classify(_json_arg(args.dfa), None, args.max_elements, tuple(args.delay_k))
    return report


def cmd_factorize(args):
    from .factorize import is_a_word, run_sequence, set_text

    alphabet = _alphabet(args)
    w = _word(args.word, alphabet)
    a = args.letter
    if not is_a_word(w, a, alphabet):
        raise DomainError(f"{_word_out(w)!r} is not an {a}-word over {''.join(alphabet)}")
    order = None
    if args.order:
        order = [frozenset(_word(part, alphabet)) for part in _text(args.order).split(";")]
    st = run_sequence(w, a, alphabet, order)
    from .factorize import subalphabet_order

    used = order or subalphabet_order(alphabet, a)
    return {"word": _word_out(w), "letter": a, "order": [set_text(B) for B in used],
            "trace": st.trace, "final": st.strings()}


def cmd_expand(args):
    from .translate.delay import delay_fo2, expand_word

    alphabet = _alphabet(args)
    out = {}
    if args.word is not None:
        if args.k is None or args.k < 2:
            raise DomainError("--k must be at least 2")
        w = _word(args.word, alphabet)
        out["word"] = _word_out(w)
        out["k"] = args.k
        out["windows"] = ["".join(x) for x in expand_word(w, args.k)]
    if args.formula is not None:
        args.fo2 = True
        f = _formula(args, alphabet)
        k, g = delay_fo2(f, alphabet, args.k)
        out.update({"k": k, "input": F2.render_fo2(f), "delayed": F2.render_fo2(g),
                    "delayed_size": F2.fo2_size(g)})
        if args.check_len:
            from .checks import delay_suite

            rep = delay_suite([_text(args.formula)], alphabet, max(1, k - 1), args.check_len)
            out["check"] = {"words_checked": rep["words_checked"], "mismatches": rep["mismatches"]}
    if not out:
        raise DomainError("give --word (with --k) and/or --formula")
    return out


def cmd_tiling(args):
    from .sat import bounded_fo2_sat
    from .translate.reductions import TilingInstance, decode_tiling, encode_tiling, solve_tiling_brute

    try:
        inst = TilingInstance.from_json(_json_arg(args.instance))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed tiling instance: {exc}") from None
    enc = encode_tiling(inst)
    res = bounded_fo2_sat(enc.formula, enc.alphabet, args.max_len, max_states=args.max_states,
                          max_words=args.max_words)
    out = {"letters": len(enc.alphabet), "formula_size": F2.fo2_size(enc.formula), **res.to_dict(timing=True)}
    if res.model is not None:
        out["tiling"] = decode_tiling(res.model, enc)
    if args.brute_rows:
        out["brute_force"] = solve_tiling_brute(inst, args.brute_rows)
    return out


def cmd_corpus(args):
    from . import checks

    suite = args.suite
    kw: dict = {}
    if suite in ("translations", "sat", "threshold-reduction"):
        kw["seed"] = args.seed
        if args.count is not None:
            kw["n"] = args.count
    if args.max_len is not None and suite not in ("beta-size", "games"):
        kw["max_len"] = args.max_len
    if suite == "games":
        result = _games_suite(args)
    else:
        result = checks.SUITES[suite](**kw)
    if suite == "beta-size":
        result["mismatches"] = [] if result["exponent"] <= 3 else [{"exponent": result["exponent"]}]
        if args.figure_dir:
            from .plotting import size_fit_figure

            result["figures"] = [size_fit_figure(result["points"], result["worst"], result["exponent"],
                                                 Path(args.figure_dir) / "beta_size.png")]
        result.pop("points")
    result["passed"] = not result["mismatches"]
    return result


def _games_suite(args) -> dict:
    """Refinement of the threshold game, and a ≡_k matrix over short words."""
    import itertools

    from .games import decide_equiv_words

    max_len = args.max_len or 5
    words = [w for n in range(max_len + 1) for w in itertools.product("ab", repeat=n)]
    mismatches, checked = [], 0
    for base in ({"a": 1, "b": 1}, {"a": 2, "b": 1}):
        for b in "ab":
            finer = dict(base)
            finer[b] += 1
            for k in (1, 2):
                for w1, w2 in itertools.combinations(words, 2):
                    checked += 1
                    if decide_equiv_words(w1, w2, 2 * k, base) and not decide_equiv_words(w1, w2, k, finer):
                        mismatches.append({"words": ["".join(w1), "".join(w2)], "k": k,
                                           "theta": base, "finer": finer})
    out = {"suite": "games", "pairs_checked": checked, "max_len": max_len, "mismatches": mismatches}
    if args.figure_dir:
        from .plotting import equivalence_figure

        short = [w for w in words if len(w) <= 3]
        matrix = [[int(decide_equiv_words(u, v, args.rounds)) for v in short] for u in short]
        out["figures"] = [equivalence_figure(["".join(w) for w in short], matrix,
                                             Path(args.figure_dir) / "game_classes.png",
                                             f"{args.rounds}-round equivalence")]
    return out


COMMANDS = {
    "parse": cmd_parse, "eval": cmd_eval, "models": cmd_models, "translate": cmd_translate,
    "sat": cmd_sat, "model": lambda a: cmd_sat(a, model_only=True), "game": cmd_game,
    "classify": cmd_classify, "factorize": cmd_factorize, "expand": cmd_expand,
    "tiling": cmd_tiling, "corpus": cmd_corpus,
}


# ------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")
    common.add_argument("--pretty", action="store_true", help="human-readable text output")
    common.add_argument("--alphabet", help="letters, e.g. 'ab' or 'p,q,r'")
    common.add_argument("--max-words", type=int, default=DEFAULT_MAX_WORDS)
    common.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    common.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
    common.add_argument("--figure-dir", help="write figures for the report here")

    formula = argparse.ArgumentParser(add_help=False)
    formula.add_argument("--formula", help="formula text or @file")
    formula.add_argument("--fo2", action="store_true", help="read the formula as FO2")

    p = argparse.ArgumentParser(prog="betweentl", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("parse", parents=[common, formula], help="parse and measure a formula")
    s = sub.add_parser("eval", parents=[common, formula], help="evaluate on a word")
    s.add_argument("--word", default="")
    s.add_argument("--position", type=int, help="1-based position (temporal formulas)")
    s.add_argument("--x", type=int)
    s.add_argument("--y", type=int)
    s = sub.add_parser("models", parents=[common, formula], help="enumerate models")
    s.add_argument("--max-len", type=int, default=6)
    s = sub.add_parser("translate", parents=[common, formula],
                       help="translate to LTL (or FO2 thresholds to betweenness)")
    s.add_argument("--cap", type=int, default=8, help="largest threshold to unfold")
    for name in ("sat", "model"):
        s = sub.add_parser(name, parents=[common, formula],
                           help="decide satisfiability" if name == "sat" else "shortest model")
        s.add_argument("--method", choices=["auto", "pipeline", "direct"], default="auto")
        s.add_argument("--max-len", type=int, default=10, help="search bound for FO2 sentences")
    s = sub.add_parser("game", parents=[common], help="solve an Ehrenfeucht-Fraisse game")
    s.add_argument("--w1", required=True)
    s.add_argument("--w2", required=True)
    s.add_argument("--rounds", type=int, required=True)
    s.add_argument("--marks", type=int, nargs=2, metavar=("I1", "I2"))
    s.add_argument("--theta", help="thresholds, e.g. a=2,b=1 (default 1)")
    s = sub.add_parser("classify", parents=[common], help="algebraic classification")
    s.add_argument("--regex")
    s.add_argument("--dfa", help="DFA JSON or @file")
    s.add_argument("--delay-k", type=int, nargs="*", default=[2, 3])
    s = sub.add_parser("factorize", parents=[common], help="factorization sequence of an a-word")
    s.add_argument("--word", required=True)
    s.add_argument("--letter", required=True)
    s.add_argument("--order", help="subalphabets separated by ';', e.g. 'a;ab;ac'")
    s = sub.add_parser("expand", parents=[common, formula], help="window expansion and delay")
    s.add_argument("--word")
    s.add_argument("--k", type=int)
    s.add_argument("--check-len", type=int, help="verify the delay on all words up to this length")
    s = sub.add_parser("tiling", parents=[common], help="encode and solve a tiling instance")
    s.add_argument("--instance", required=True, help="JSON or @file")
    s.add_argument("--max-len", type=int, default=12)
    s.add_argument("--brute-rows", type=int, default=0)
    s = sub.add_parser("corpus", parents=[common], help="run an oracle suite")
    s.add_argument("--suite", required=True,
                   choices=["translations", "beta", "beta-size", "sat", "delay", "threshold-reduction",
                            "games"])
    s.add_argument("--count", type=int)
    s.add_argument("--max-len", type=int)
    s.add_argument("--rounds", type=int, default=2, help="rounds for the games matrix figure")
    return p


# ------------------------------------------------------------------ output
def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "wall_ms"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _pretty(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v, ensure_ascii=False)}")
    else:
        lines.append(pad + json.dumps(obj, ensure_ascii=False))
    return lines


def _emit(doc: dict, args, stream=None):
    stream = stream or sys.stdout
    if args.no_timing:
        doc = _strip_timing(doc)
    if args.pretty:
        stream.write("\n".join(_pretty(doc)) + "\n")
    else:
        stream.write(json.dumps(doc, ensure_ascii=False) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    doc = {"command": args.command}
    try:
        result = COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        doc["error"] = {"type": "budget-exceeded", "message": str(exc)}
        _emit(doc, args)
        return 1
    except (DomainError, ParseError, ValueError, OSError, json.JSONDecodeError) as exc:
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
        _emit(doc, args)
        return 1
    doc.update(result)
    _emit(doc, args)
    if args.command == "corpus" and not result.get("passed", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
