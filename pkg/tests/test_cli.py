import subprocess
import sys

import numpy as np
import pytest

import gallagher_lab.acceptance as acceptance
import gallagher_lab.transforms as transforms
from gallagher_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_weight_eval(capsys):
    code, out, _ = run(capsys, "weight", "--spec", "cesaro:j=2,delta=1", "--eval", "0")
    assert code == 0
    assert out.splitlines()[1].startswith("0.0,0.33333333333333")


def test_weight_spline_and_min(capsys):
    code, out, _ = run(capsys, "weight", "--spec", "unit:delta=0.2", "--min", "1.0")
    assert code == 0 and out.splitlines()[0] == "T,argmin,m"
    code, out, _ = run(capsys, "weight", "--spec", "cesaro:j=1,delta=1")
    assert code == 0 and len(out.splitlines()) >= 2


def test_verify_lemma(tmp_path, capsys):
    f = tmp_path / "f.csv"
    rng = np.random.default_rng(0)
    nu = np.sort(rng.uniform(0, 100, 40))
    f.write_text("nu,re,im\n" + "".join(f"{float(a)!r},{float(b)!r},{float(c)!r}\n" for a, b, c in
                                       zip(nu, rng.uniform(-1, 1, 40), rng.uniform(-1, 1, 40))))
    code, out, _ = run(capsys, "verify-lemma", "--weight", "cesaro:j=1,delta=0.025", "--T", "10",
                       "--frequencies", str(f))
    assert code == 0
    assert out.splitlines()[1].endswith(",true")


def test_verify_lemma_violation_exit(monkeypatch, capsys):
    import gallagher_lab.cli as cli
    from gallagher_lab.expsum import InequalityReport
    monkeypatch.setattr(cli, "verify_lemma",
                        lambda s, w, T: InequalityReport(2.0, 1.0, 0.5, False, -1.0))
    code, out, _ = run(capsys, "verify-lemma", "--weight", "unit:delta=1", "--T", "0.1",
                       "--random", "5")
    assert code == 3 and out.splitlines()[1].endswith(",false")


def test_compare_example(capsys):
    code, out, _ = run(capsys, "compare", "--v", "cesaro:j=1,delta=0.045", "--w",
                       "unit:delta=0.045", "--T", "10", "--scan", "n=2048")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# verdict=almost_T_better")
    assert lines[1] == "y,ratio,threshold,violation"


def test_dirichlet_sweep(tmp_path, capsys):
    f = tmp_path / "a.csv"
    f.write_text("n,re\n" + "".join(f"{n},1\n" for n in range(10, 41)))
    code, out, _ = run(capsys, "dirichlet", "--coeffs", str(f), "--sweep", "5,20,100")
    assert code == 0 and len(out.splitlines()) == 4
    code, _, err = run(capsys, "dirichlet", "--coeffs", str(f), "--T", "0.5")
    assert code == 2 and "T must exceed 1" in err


@pytest.mark.parametrize("kind,extra", [("original", ["--H", "20"]), ("modified", []),
                                        ("jth", ["--j", "2"]),
                                        ("weighted", ["--weight", "cesaro:j=1,delta=10"])])
def test_selberg_kinds(kind, extra, capsys):
    code, out, _ = run(capsys, "selberg", "--fn", "d2", "--N", "1000", "--h", "10",
                       "--kind", kind, *extra)
    assert code == 0
    header, row = out.splitlines()
    assert header.startswith("N,h,H,j,kind,value") and f",{kind}," in row


def test_selberg_custom(tmp_path, capsys):
    f = tmp_path / "t.csv"
    f.write_text("logpoly,1\n" + "".join(f"{n},1\n" for n in range(1, 300)))
    code, out, _ = run(capsys, "selberg", "--fn", f"custom:{f}", "--N", "100", "--h", "5")
    assert code == 0 and out.splitlines()[1].endswith(",0.0")


def test_correlate(capsys):
    code, out, _ = run(capsys, "correlate", "--weight", "step:delta=16")
    assert code == 0 and "0,16.0,0.0" in out.splitlines()
    code, out, _ = run(capsys, "correlate", "--weight", "step:delta=4", "--emit", "dft",
                       "--points", "3")
    assert out.splitlines()[0] == "alpha,re,im" and len(out.splitlines()) == 4


def test_out_and_manifest(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code = main(["weight", "--spec", "unit:delta=1", "--eval", "0.5", "--out", str(out),
                 "--seed", "3"])
    assert code == 0 and capsys.readouterr().out == ""
    man = (tmp_path / "r.csv.manifest.txt").read_text()
    assert "param.seed = 3" in man and "version = " in man and f"output = {out}" in man
    assert out.read_text() == "x,w\n0.5,1.0\n"


def test_determinism(capsys):
    argv = ["verify-lemma", "--weight", "cesaro:j=2,delta=0.3", "--T", "1,2", "--random", "30",
            "--seed", "9"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


@pytest.mark.parametrize("argv", [["bogus"], ["weight"], ["weight", "--spec", "tri:delta=1"],
                                  ["selberg", "--fn", "d9x", "--N", "10", "--h", "1"],
                                  ["selberg", "--fn", "d2", "--N", "100", "--h", "60", "--H", "40"],
                                  ["suite", "--only", "11"]])
def test_parameter_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("GALLAGHER_LAB_THREADS", "zero")
    assert main(["weight", "--spec", "unit:delta=1"]) == 2
    monkeypatch.setenv("GALLAGHER_LAB_THREADS", "4")
    assert main(["weight", "--spec", "unit:delta=1"]) == 0


def test_internal_error_exit_1(monkeypatch, capsys):
    import gallagher_lab.cli as cli
    def boom(args):
        raise RuntimeError("kaboom")
    parser_defaults = cli.build_parser
    monkeypatch.setattr(cli, "build_parser", lambda: _with_func(parser_defaults(), boom))
    assert main(["weight", "--spec", "unit:delta=1"]) == 1


def _with_func(parser, fn):
    for action in parser._subparsers._group_actions:
        action.choices["weight"].set_defaults(func=fn)
    return parser


def test_suite_subset(capsys):
    code, out, _ = run(capsys, "suite", "quick", "--only", "4,5")
    assert code == 0 and out.count("[PASS]") == 2


def test_suite_detects_sign_mutation(monkeypatch, capsys):
    # flipping the sign of the closed-form Cesaro transform must fail the battery
    orig = transforms.closed_form

    def mutated(w, y):
        out = orig(w, y)
        return -out if w.transform_kind == "cesaro" else out

    monkeypatch.setattr(transforms, "closed_form", mutated)
    monkeypatch.setattr(acceptance, "closed_form", mutated)
    code, out, _ = run(capsys, "suite", "quick", "--only", "3")
    assert code == 3 and "[FAIL]" in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gallagher_lab", "weight", "--spec",
                        "cesaro:j=2,delta=1", "--eval", "0"], capture_output=True, text=True)
    assert r.returncode == 0 and "0.3333333333" in r.stdout
