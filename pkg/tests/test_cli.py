import json
import pathlib
import subprocess

import pytest

import sheafdual
from sheafdual.cli import main

DATA = pathlib.Path(sheafdual.__file__).parent / "data"


def data(stem):
    return str(DATA / f"{stem}.json")


@pytest.fixture(autouse=True)
def clean_budget(monkeypatch):
    # main() writes --budget into the environment; setenv first so teardown restores it
    monkeypatch.setenv("SHEAFDUAL_BUDGET", "")
    monkeypatch.delenv("SHEAFDUAL_BUDGET")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    try:
        return code, json.loads(out)
    except json.JSONDecodeError:
        return code, out


def test_validate(capsys):
    code, rep = run(capsys, "validate", data("b4"))
    assert code == 0 and rep["valid"] and rep["boolean"]
    code, rep = run(capsys, "validate", data("l3_tampered"))
    assert code == 1 and set(rep["failures"]) == {"otimes-definition", "residuation"}


def test_invalid_input_exits_two(capsys):
    code, rep = run(capsys, "validate", data("broken_blo"))
    assert code == 2
    assert rep["error"] == "OperatorAxiomViolation" and (rep["line"], rep["column"]) == (11, 3)
    code, rep = run(capsys, "validate", "/nonexistent/file.json")
    assert code == 2 and rep["error"] == "FileNotFoundError"
    code, rep = run(capsys, "spectrum", data("l3"))
    assert code == 2 and rep["error"] == "WrongKind"


def test_spectrum_and_duality(capsys):
    code, rep = run(capsys, "spectrum", data("c3"))
    assert code == 0 and rep["points"] == ["{0}", "{0,m}"]
    assert rep["basis"] == {"0": [], "m": [0], "1": [0, 1]}
    code, rep = run(capsys, "duality-check", "--corpus", "3")
    assert code == 0 and rep["all_pass"] and len(rep["instances"]) == 5


def test_sheaf_reports(capsys):
    code, rep = run(capsys, "sheaf", data("c3"))
    assert code == 0 and rep["stalk_sizes"] == [3, 2] and rep["gamma_size"] == 6
    code, rep = run(capsys, "eta-diagnose", data("c3"))
    assert rep == {"homomorphism": True, "injective": True, "surjective": False,
                   "gamma_size": 6, "image_size": 3}
    code, rep = run(capsys, "regular-ideals", data("c3"))
    assert code == 0 and rep["bijection"] and rep["regular_ideals_fixed_point_reading"] == 6


def test_classify_and_gratzer_schmidt(capsys):
    code, rep = run(capsys, "classify", data("b4_blo"))
    assert code == 0 and rep["simple"] and not rep["regular"] and rep["strongly_regular"]
    code, rep = run(capsys, "gratzer-schmidt", "--corpus", "3")
    assert code == 0 and rep["all_pass"]


def test_mv_commands(capsys):
    code, rep = run(capsys, "mv-validate", "--lukasiewicz", "4")
    assert code == 0 and rep["passed"]
    code, rep = run(capsys, "mv-validate", "--algebra", data("l3_tampered"))
    assert code == 1 and rep["failures"]["residuation"] == ["1/2", "1/2", "0"]
    x = '[[[], "1/2"]]'
    code, rep = run(capsys, "mv-eval", "--lukasiewicz", "2", "--subset-mode", "paper-literal",
                    "--formula", "(eq x x)", "--env", f"x={x}")
    assert code == 0 and rep["value"] == "0"
    code, rep = run(capsys, "mv-eval", "--lukasiewicz", "2", "--formula", "(eq x x)",
                    "--env", f"x={x}")
    assert rep["value"] == "1"
    code, rep = run(capsys, "generic-check", "--algebra", data("b4_mv"), "--rank", "2",
                    "--max-domain", "1")
    assert code == 0 and rep["all_hold"] and rep["names"] == 21 and len(rep["ultrafilters"]) == 2


def test_kj_commands(capsys):
    site = data("site_chain2")
    code, rep = run(capsys, "kj-force", "--site", site, "--point", "p",
                    "--formula", "(tensor (mem a b) (mem a b))", "--env", "a=[]",
                    "--env", 'b=[["q", []]]')
    assert code == 0 and rep["forced"] is True
    code, rep = run(capsys, "kj-force", "--site", site, "--point", "p",
                    "--formula", "(mem a b)", "--env", "a=[]", "--env", 'b=[["q", []]]')
    assert rep["forced"] is False
    code, rep = run(capsys, "persistence", "--site", site)
    assert code == 0 and rep["holds"] and rep["checks"] > 0
    code, rep = run(capsys, "kj-force", "--site", data("site_v"), "--point", "top",
                    "--formula", "(tensor (eq x x) (eq x x))", "--env", "x=[]")
    assert code == 2 and rep["error"] == "TensorUnavailable"


def test_epi_search(capsys):
    code, rep = run(capsys, "epi-search", data("chain2"), data("c3"), "--map", "0,2")
    assert code == 0 and rep["result"] == "NotEpi" and not rep["surjective"]
    assert rep["f"] != rep["g"]


def test_budget_flag_exits_two(capsys):
    code, rep = run(capsys, "--budget", "10", "generic-check", "--algebra", data("b4_mv"),
                    "--rank", "2", "--max-domain", "2")
    assert code == 2 and rep["error"] == "UniverseTooLarge"


def test_corpus_run_is_deterministic(capsys):
    first = run(capsys, "corpus-run", "--max-poset", "3")
    second = run(capsys, "corpus-run", "--max-poset", "3")
    assert first == second and first[0] == 0 and first[1]["lattices"] == 5


def test_dot_output(capsys):
    code, out = run(capsys, "dot", data("c3"))
    assert code == 0 and out.startswith("digraph lattice {") and "n0 -> n1" in out
    code, out = run(capsys, "dot", "--sheaf", data("b4"))
    assert out.startswith("digraph sheaf {") and "|stalk|=2" in out
    code, out = run(capsys, "dot", data("site_v"))
    assert code == 0 and out.startswith("digraph")


def test_console_script():
    proc = subprocess.run(["sheafdual", "validate", data("c3")], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["size"] == 3
    proc = subprocess.run(["sheafdual", "validate", data("broken_blo")],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr.startswith("error:")
