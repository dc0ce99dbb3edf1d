import io
import subprocess
import sys
from pathlib import Path

import pytest

from fracspec import cache
from fracspec.cli import EXIT_IO, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_caputo_compare_oracle():
    code, out = run("caputo", "--func", "monomial:2", "--alpha", "1.5", "--n", "3",
                    "--n-q", "15", "--points", "0.5", "--compare-oracle")
    assert code == EXIT_OK
    header, row = out.strip().splitlines()
    assert header == "point,approximation,oracle,abs_error"
    z, approx, ref, err = map(float, row.split(","))
    assert approx == pytest.approx(1.5957691216057308, abs=1e-12) and err <= 1e-12


def test_caputo_integer_order_uses_differentiation():
    code, out = run("caputo", "--func", "monomial:3", "--alpha", "1", "--n", "5", "--points", "0.5")
    assert code == EXIT_OK
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(0.75, abs=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ("caputo", "--func", "sin:1", "--alpha", "1.5"),
        ("caputo", "--func", "monomial:2", "--alpha", "-1"),
        ("caputo", "--func", "monomial:2", "--alpha", "1.5", "--points", "1.5"),
        ("caputo", "--func", "monomial:2", "--alpha", "1.5", "--lambda", "-0.9"),
        ("caputo", "--alpha", "1.5"),
        ("nosuchcommand",),
        ("sweep", "--func", "monomial:2", "--alpha", "1.5", "--n-range", "5:3"),
        ("solve-bt", "--problem", "/nonexistent/problem.json"),
    ],
)
def test_usage_errors(argv, capsys):
    code, _ = run(*argv)
    assert code == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_solve_bt(capsys):
    code, out = run("solve-bt", "--problem", str(PROBLEMS / "example1.json"), "--exact", "x^2")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "x,u,abs_error" and len(lines) == 51
    assert max(float(l.split(",")[2]) for l in lines[1:]) <= 1e-12
    err = capsys.readouterr().err
    assert "max_abs_error=" in err and "residual_norm=" in err


def test_solve_bt_bad_json(tmp_path):
    p = tmp_path / "p.json"
    p.write_text("{not json")
    assert run("solve-bt", "--problem", str(p))[0] == EXIT_USAGE


def test_sweep_deterministic_across_jobs():
    argv = ("sweep", "--func", "exp:0.1", "--alpha", "1.5", "--lambdas", "0,0.5,1",
            "--n-range", "3:7", "--points", "0.25,0.5")
    code1, out1 = run(*argv)
    code4, out4 = run(*argv, "--jobs", "4")
    assert code1 == code4 == EXIT_OK
    assert out1 == out4
    lines = out1.strip().splitlines()
    assert lines[0] == "lambda,n,point,abs_error,log10_abs_error"
    assert len(lines) == 1 + 3 * 5 * 2


def test_fsgim_cache_cycle(tmp_path, capsys):
    argv = ("fsgim", "--alpha", "1.5", "--n", "6", "--points", "0.1,0.5,0.9", "--cache-dir", str(tmp_path))
    code, out = run(*argv)
    assert code == EXIT_OK and out.strip().splitlines()[1] == "3,7,built"
    assert "cache miss" in capsys.readouterr().err
    code, out = run(*argv)
    assert out.strip().splitlines()[1] == "3,7,hit"
    assert "cache hit" in capsys.readouterr().err
    (path,) = tmp_path.iterdir()
    path.write_bytes(path.read_bytes()[:40])
    code, out = run(*argv)
    assert code == EXIT_OK and out.strip().splitlines()[1] == "3,7,rebuilt"


def test_fsgim_integer_alpha(tmp_path, capsys):
    code, _ = run("fsgim", "--alpha", "2", "--points", "0.5", "--out", str(tmp_path / "f.bin"))
    assert code == EXIT_USAGE
    assert "caputo" in capsys.readouterr().err


def test_fsgim_needs_destination(monkeypatch):
    monkeypatch.delenv(cache.CACHE_ENV, raising=False)
    assert run("fsgim", "--alpha", "1.5", "--points", "0.5")[0] == EXIT_USAGE


def test_io_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _ = run("fsgim", "--alpha", "1.5", "--points", "0.5", "--cache-dir", str(blocker / "sub"))
    assert code == EXIT_IO


def test_numerical_failure_exit(tmp_path):
    p = tmp_path / "p.json"
    # a = b = 0, c = 0 is rejected; c = 1e-300 with no derivative terms keeps a degenerate system
    p.write_text(
        '{"a": 0, "b": 0, "c": 1e-300, "alpha": 1.5, "gamma": [0, 1],'
        ' "forcing": {"kind": "builtin", "name": "bt2"},'
        ' "discretization": {"lambda": 0.5, "n": 4, "lambda_q": 0.5, "n_q": 4}}'
    )
    assert run("solve-bt", "--problem", str(p))[0] == EXIT_NUMERICAL


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "fracspec", "caputo", "--func", "monomial:2",
                        "--alpha", "1.5", "--points", "0,0.5"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.splitlines()[1] == "0.0,0.0"


def test_caputo_examples():
    code, out = run("caputo", "--func", "monomial:2", "--alpha", "1.5", "--n", "4",
                    "--points", "0.5", "--compare-oracle")
    assert code == EXIT_OK and float(out.splitlines()[1].split(",")[3]) <= 1e-12
    code, out = run("caputo", "--func", "monomial:1", "--alpha", "1.5", "--points", "0,0.3,0.7,1")
    assert code == EXIT_OK
    assert all(abs(float(l.split(",")[1])) <= 1e-12 for l in out.strip().splitlines()[1:])


def test_solve_bt_example3(capsys):
    code, out = run("solve-bt", "--problem", str(PROBLEMS / "example3.json"), "--exact", "x^2-x")
    assert code == EXIT_OK
    err = capsys.readouterr().err
    assert float(err.split("max_abs_error=")[1].split()[0]) <= 1e-12


def _sweep_rows(out):
    rows = [l.split(",") for l in out.strip().splitlines()[1:]]
    return [(float(r[0]), int(r[1]), float(r[3])) for r in rows]


def test_sweep_exponential_trend():
    code, out = run("sweep", "--func", "exp:0.1", "--alpha", "1.5", "--lambdas=-0.1,0,0.5,1,2",
                    "--n-range", "3:7", "--n-q", "15", "--lambda-q", "0.5", "--points", "0.5")
    assert code == EXIT_OK
    rows = _sweep_rows(out)
    for lam in (-0.1, 0.0, 0.5, 1.0, 2.0):
        errs = [e for l, _, e in rows if l == lam]
        assert all(b < a or b <= 1e-14 for a, b in zip(errs, errs[1:])), (lam, errs)


@pytest.mark.parametrize("N", [2, 5, 8])
def test_sweep_power_near_machine_precision(N):
    code, out = run("sweep", "--func", f"monomial:{N}", "--alpha", "1.5", "--lambdas", "0,0.5,1",
                    "--n-range", str(N + 1), "--points", "0.5")
    assert code == EXIT_OK
    assert max(e for _, _, e in _sweep_rows(out)) <= 1e-10


def test_sweep_empty_range():
    assert run("sweep", "--func", "monomial:2", "--alpha", "1.5", "--n-range", "")[0] == EXIT_USAGE
