import json
import shutil
import subprocess
import sys

import pytest

from fermat_pdde.cli import EXIT_FALSE, EXIT_OK, EXIT_USAGE, SEED_ENV, main
from fermat_pdde.corpus import corpus_root

EX11 = """m = 2
n1 = 2
m1 = 2
n2 = 2
m2 = 2
c = ["2*pi", "0"]
"""


@pytest.fixture
def ex11(tmp_path):
    p = tmp_path / "ex11.toml"
    p.write_text(EX11)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_identity(capsys, ex11):
    code, out, _ = run(capsys, "verify", "--spec", ex11, "--f1", "sin(z1+z2+z2^2)", "--f2", "sin(z1+z2+z2^2+pi)")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["verdict"] == "identity-zero" and rep["mode"] == "exact"


def test_verify_perturbed_pair(capsys, ex11):
    code, out, _ = run(capsys, "verify", "--spec", ex11, "--f1", "sin(z1+z2+z2^2)", "--f2", "sin(z1+z2+z2^3+pi)")
    assert code == EXIT_FALSE
    rep = json.loads(out)
    assert rep["verdict"] == "nonzero" and "point" in rep["witness"]


def test_verify_parse_error_reports_span(capsys, ex11):
    code, _, err = run(capsys, "verify", "--spec", ex11, "--f1", "sin(z1 +", "--f2", "0")
    assert code == EXIT_USAGE
    assert "f1 at 8..8" in err


def test_verify_from_files_and_output(capsys, ex11, tmp_path):
    (tmp_path / "a.expr").write_text("sin(z1+z2+z2^2)\n")
    out_path = tmp_path / "report.json"
    code, _, _ = run(
        capsys, "verify", "--spec", ex11, "--f1-file", str(tmp_path / "a.expr"), "--f2", "sin(z1+z2+z2^2+pi)", "-o", str(out_path)
    )
    assert code == EXIT_OK and json.loads(out_path.read_text())["verdict"] == "identity-zero"


def test_verify_needs_one_source(capsys, ex11):
    assert run(capsys, "verify", "--spec", ex11, "--f2", "0")[0] == EXIT_USAGE


def test_missing_spec_file(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", "--spec", str(tmp_path / "none.toml"), "--f1", "0", "--f2", "0")
    assert code == EXIT_USAGE


def test_examples_default(capsys):
    code, out, _ = run(capsys, "examples")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert len(lines) == 6 and all(line.startswith("PASS") for line in lines)


def test_examples_json(capsys):
    code, out, _ = run(capsys, "examples", "--json")
    reports = json.loads(out)
    assert code == EXIT_OK and len(reports) == 6
    assert all(r["verdict"] == "identity-zero" for r in reports)


def test_examples_broken_corpus(capsys, tmp_path):
    root = tmp_path / "corpus"
    shutil.copytree(corpus_root(), root)
    (root / "01_sine_c2" / "f2.expr").write_text("sin(z1 + z2 + z2^3 + pi)\n")
    code, out, err = run(capsys, "examples", "--corpus", str(root))
    assert code == EXIT_FALSE
    assert "FAIL 01_sine_c2" in out and "01_sine_c2" in err


@pytest.mark.parametrize(
    "q, want",
    [(("2", "2", "2", "1"), "NonExistence(2ii)"), (("2", "1", "2", "1"), "QuadraticFamily"), (("3", "1", "1", "2"), "Unknown")],
)
def test_classify(capsys, q, want):
    code, out, _ = run(capsys, "classify", *q, "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["verdict"] == want and d["clause"]


def test_classify_rejects_non_positive(capsys):
    assert run(capsys, "classify", "0", "1", "2", "1")[0] == EXIT_USAGE
    assert run(capsys, "classify", "a", "1", "2", "1")[0] == EXIT_USAGE


def test_solve_ab(capsys):
    code, out, _ = run(capsys, "solve-ab", "--m", "2", "--a", "1", "--b", "1", "--c", "2*pi,0")
    assert code == EXIT_OK and json.loads(out) == [[1, 1], [-1, -1]]


def test_family_valid_and_invalid(capsys, tmp_path):
    good = tmp_path / "good.toml"
    good.write_text('family = "sine"\nm = 2\nA = 1\nB = 1\na_coeffs = [1]\nb_coeffs = [1]\nQ1 = "z2^2"\nQ2 = "z2^2 + pi"\nc = ["2*pi", "0"]\n')
    code, out, _ = run(capsys, "family", "--config", str(good), "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["valid"] and d["verification"]["verdict"] == "identity-zero"
    bad = tmp_path / "bad.toml"
    bad.write_text(good.read_text().replace('Q2 = "z2^2 + pi"', 'Q2 = "z2^3"'))
    code, out, _ = run(capsys, "family", "--config", str(bad), "--json")
    assert code == EXIT_FALSE and not json.loads(out)["valid"]


def test_search_probe_on_solvable_is_usage_error(capsys):
    code, _, err = run(capsys, "search", "2", "2", "2", "2", "--c", "2*pi,0", "--probe", "--restarts", "1")
    assert code == EXIT_USAGE and "NonExistence" in err


def test_search_reports_are_byte_stable(capsys):
    argv = ("search", "1", "1", "1", "1", "--c", "i*pi,0", "--degree", "0", "--restarts", "2", "--no-time", "--seed", "3")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert json.loads(first[1])["seed"] == 3


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "9")
    code, out, _ = run(capsys, "search", "1", "1", "1", "1", "--c", "i*pi,0", "--degree", "0", "--restarts", "1", "--no-time")
    assert json.loads(out)["seed"] == 9
    monkeypatch.setenv(SEED_ENV, "nine")
    assert run(capsys, "examples")[0] == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fermat_pdde", "classify", "2", "2", "2", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("SineFamily")
