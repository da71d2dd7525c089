import json
import subprocess
import sys

import pytest

from betweentl.cli import main

AB_PLUS = "a & X b & !F(a & X a) & !F(b & X b) & F(b & !X(a | b))"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--no-timing")
    return code, json.loads(out)


class TestCommands:
    def test_parse(self, capsys):
        code, doc = run_json(capsys, "parse", "--alphabet", "ab", "--formula", "a & X b")
        assert code == 0 and doc["formula"] == "a & X b" and "LTL" in doc["fragments"]

    def test_eval(self, capsys):
        _, doc = run_json(capsys, "eval", "--alphabet", "ab", "--formula", "F a",
                          "--word", "ba", "--position", "1")
        assert doc["value"] is True

    def test_eval_fo2(self, capsys):
        _, doc = run_json(capsys, "eval", "--fo2", "--alphabet", "ab", "--formula",
                          "th(a,2)(x,y)", "--word", "aabaa", "--x", "1", "--y", "5")
        assert doc["value"] is True

    def test_models(self, capsys):
        _, doc = run_json(capsys, "models", "--alphabet", "ab", "--max-len", "4",
                          "--formula", AB_PLUS)
        assert doc["models"] == ["ab", "abab"]

    def test_sat(self, capsys):
        _, doc = run_json(capsys, "sat", "--alphabet", "ab", "--formula",
                          "F[#{a}=2 & #{b}=0] true")
        assert doc["satisfiable"] is True and doc["model"] == "aaaa"

    def test_model_unsat(self, capsys):
        code, doc = run_json(capsys, "model", "--alphabet", "ab", "--formula", "a & b")
        assert code == 0 and doc["satisfiable"] is False

    def test_game(self, capsys):
        _, doc = run_json(capsys, "game", "--w1", "ab", "--w2", "ba", "--rounds", "2")
        assert doc["equivalent"] is False and doc["strategy"]

    def test_classify(self, capsys):
        _, doc = run_json(capsys, "classify", "--regex", "(ab)*", "--alphabet", "ab",
                          "--delay-k", "2")
        assert doc["in_DA"] is False and doc["in_MeDA"] is True

    def test_factorize(self, capsys):
        _, doc = run_json(capsys, "factorize", "--alphabet", "abcd", "--letter", "a",
                          "--word", "adccdccadcaaaaddccdcccdbcdcaacabcbbd")
        assert all(set(f) == set("abcd") for f in doc["final"])

    def test_expand(self, capsys):
        _, doc = run_json(capsys, "expand", "--alphabet", "ab", "--word", "ababba", "--k", "3")
        assert doc["windows"] == ["**a", "*ab", "aba", "bab", "abb", "bba"]

    def test_tiling(self, capsys, tmp_path):
        p = tmp_path / "inst.json"
        p.write_text(json.dumps({"tiles": ["t"], "H": [["t", "t"]], "V": [["t", "t"]],
                                 "start": "t", "final": "t", "n": 1}))
        _, doc = run_json(capsys, "tiling", "--instance", f"@{p}")
        assert doc["status"] == "sat" and doc["tiling"] == [["t", "t"]]

    def test_formula_from_file(self, capsys, tmp_path):
        p = tmp_path / "f.tl"
        p.write_text("F a\n")
        _, doc = run_json(capsys, "parse", "--alphabet", "ab", "--formula", f"@{p}")
        assert doc["formula"] == "F a"

    def test_corpus(self, capsys):
        code, doc = run_json(capsys, "corpus", "--suite", "translations", "--count", "5",
                             "--max-len", "5")
        assert code == 0 and doc["passed"] is True

    def test_translate_figure(self, capsys, tmp_path):
        _, doc = run_json(capsys, "translate", "--alphabet", "ab", "--formula", "F[#{a}>=2] b",
                          "--figure-dir", str(tmp_path))
        assert (tmp_path / "stages.png").stat().st_size > 0
        assert doc["output"]

    def test_pretty(self, capsys):
        code, out = run(capsys, "models", "--alphabet", "ab", "--max-len", "4", "--pretty",
                        "--formula", AB_PLUS)
        assert code == 0 and "abab" in out and not out.lstrip().startswith("{")


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ["corpus", "--suite", "threshold-reduction", "--count", "3", "--max-len", "6"],
        ["sat", "--alphabet", "ab", "--formula", "F(F[#{a}=2 & #{b}=0] true)"],
    ])
    def test_repeatable(self, capsys, argv):
        _, a = run(capsys, *argv, "--no-timing", "--seed", "4")
        _, b = run(capsys, *argv, "--no-timing", "--seed", "4")
        assert a == b and "wall_ms" not in a


class TestErrors:
    def test_parse_error(self, capsys):
        code, doc = run_json(capsys, "parse", "--alphabet", "ab", "--formula", "F[#{a}=2 & ")
        assert code == 1 and doc["error"]["type"] == "ParseError"
        assert "end of input" in doc["error"]["message"]

    def test_missing_formula(self, capsys):
        code, doc = run_json(capsys, "parse", "--alphabet", "ab")
        assert code == 1 and doc["error"]["type"] == "DomainError"

    def test_missing_file(self, capsys, tmp_path):
        code, doc = run_json(capsys, "parse", "--alphabet", "ab", "--formula",
                             f"@{tmp_path / 'nope'}")
        assert code == 1

    def test_budget(self, capsys):
        code, doc = run_json(capsys, "sat", "--alphabet", "ab", "--max-states", "2",
                             "--formula", "F(F[#{a}=2 & #{b}=0] true)")
        assert code == 1 and doc["error"]["type"] == "budget-exceeded"

    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["bogus"])
        assert exc.value.code == 2


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "betweentl.cli", "game", "--w1", "ab", "--w2", "ba",
                          "--rounds", "1", "--no-timing"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["equivalent"] is True
