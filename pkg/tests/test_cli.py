import io
import json
import subprocess
import sys

import pytest

from lodha_moore.cli import EXIT_CAP, EXIT_MATH, EXIT_OK, EXIT_USAGE, main, parse_range
from lodha_moore.ppsl2 import from_json
from lodha_moore.words import eval_R


def run(*argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_range():
    assert parse_range("0..4") == range(0, 5)
    assert parse_range("-8..8") == range(-8, 9)
    assert parse_range("3") == range(3, 4)
    assert parse_range("2..1") == range(2, 2)


def test_eval_g1():
    code, out, _ = run("eval", "--model", "R", "b c a^-1 c^-1 a b^-1")
    assert code == EXIT_OK
    f = from_json(out)
    assert f == eval_R("b c a^-1 c^-1 a b^-1") and len(f.breakpoints) == 3


def test_eval_identity():
    code, out, _ = run("eval", "--model", "R", "")
    assert code == EXIT_OK and json.loads(out) == {"breakpoints": [], "mats": [["1", "0", "0", "1"]]}


def test_eval_cantor_point():
    code, out, _ = run("eval", "--model", "cantor", "y_10", "--point", "10(1)")
    assert code == EXIT_OK and out.strip() == "10(1)"
    code, out, _ = run("eval", "--model", "cantor", "y_10", "--point", "10(01)")
    assert out.strip() == "10(10000111)"


def test_eval_cantor_table_and_not_in_f():
    code, out, _ = run("eval", "--model", "cantor", "x0")
    assert json.loads(out) == [["00", "0"], ["01", "10"], ["1", "11"]]
    code, out, _ = run("eval", "--model", "cantor", "y_10")
    assert code == EXIT_OK and json.loads(out) == {"in_F": False, "witness": "10"}


def test_eval_bs_model():
    code, out, _ = run("eval", "--model", "BS", "t x t^-1 x^-2")
    assert code == EXIT_OK and from_json(out).is_identity()


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "a^x"),
        ("eval", "--model", "R", "x0"),
        ("eval", "--model", "cantor", "a"),
        ("eval", "--model", "cantor", "y", "--point", "10"),
        ("eval", "a", "--point", "(1)"),
        ("bogus",),
        ("bs-grid", "--m", "2..1"),
        ("bs-grid", "--N", "x..y"),
        ("bs-grid", "--N", "0..0"),
        ("f-distortion", "--n-max", "0"),
        ("ball", "--radius", "-1"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, _, err = run(*argv)
    assert code == EXIT_USAGE and err


def test_invariants():
    code, out, _ = run("invariants", "b")
    data = json.loads(out)
    assert code == EXIT_OK
    assert (data["D"], data["M"], data["C"], data["word_length"], data["log_bound_holds"]) == (2, 3, 3, 1, True)


def test_ball_report():
    code, out, _ = run("ball", "--radius", "3")
    assert code == EXIT_OK
    assert out.splitlines() == [
        "radius,sphere,ball,max_C,log_bound_holds",
        "0,1,1,1,True",
        "1,6,7,3,True",
        "2,30,37,5,True",
        "3,150,187,9,True",
    ]


def test_ball_cap(monkeypatch):
    monkeypatch.setenv("LM_MAX_CELLS", "100")
    code, _, err = run("ball", "--radius", "3")
    assert code == EXIT_CAP and "187" in err
    monkeypatch.setenv("LM_MAX_CELLS", "lots")
    assert run("ball", "--radius", "1")[0] == EXIT_USAGE


def test_bs_grid_default_has_400_rows():
    code, out, _ = run("bs-grid")
    lines = out.splitlines()
    assert code == EXIT_OK and len(lines) == 401
    assert lines[0] == "m,N,n,D,M,C,D_inv,M_inv,C_inv,lhs_quarter_log_sum,rhs_sixth_sum"


def test_bs_grid_single_row():
    code, out, _ = run("bs-grid", "--m", "1..1", "--n", "1..1", "--N", "1..1")
    row = out.splitlines()[1].split(",")
    assert code == EXIT_OK and int(row[3]) >= 4


def test_bs_grid_cap(monkeypatch):
    monkeypatch.setenv("LM_MAX_CELLS", "10")
    code, _, err = run("bs-grid")
    assert code == EXIT_CAP and "400" in err


def test_bs_grid_json():
    code, out, _ = run("bs-grid", "--m", "0..1", "--n", "0..0", "--N", "1..2", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and len(data) == 4 and data[0]["m"] == "0"


def test_f_distortion_rows():
    code, out, _ = run("f-distortion", "--n-max", "5")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "n,carets,word_bound,ratio"
    assert lines[1] == "1,5,34,5/34"
    assert lines[5] == "5,35,50,7/10"


def test_f_distortion_depth_cap():
    code, _, err = run("f-distortion", "--n-max", "3", "--max-depth", "5")
    assert code == EXIT_CAP and "depth" in err


def test_f_distortion_carets_cap(monkeypatch):
    monkeypatch.setenv("LM_MAX_CELLS", "10")
    assert run("f-distortion", "--n-max", "4")[0] == EXIT_CAP


def test_outputs_are_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run("bs-grid", "--m", "0..2", "--n", "0..2", "--N", "-3..3", "--out", str(p))[0] == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_figures_and_gnuplot(tmp_path):
    data, script, fig = tmp_path / "f.csv", tmp_path / "f.gp", tmp_path / "f.png"
    code, _, _ = run("f-distortion", "--n-max", "4", "--out", str(data), "--gnuplot", str(script), "--plot", str(fig))
    assert code == EXIT_OK
    assert f'"{data}"' in script.read_text()
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    fig2 = tmp_path / "g.png"
    run("f-distortion", "--n-max", "4", "--plot", str(fig2))
    assert fig.read_bytes() == fig2.read_bytes()


def test_bs_grid_svg_figure(tmp_path):
    fig = tmp_path / "grid.svg"
    code, _, _ = run("bs-grid", "--m", "0..1", "--n", "0..1", "--N", "1..2", "--plot", str(fig))
    assert code == EXIT_OK and "<svg" in fig.read_text()


def test_gnuplot_needs_csv_file():
    code, _, err = run("f-distortion", "--n-max", "2", "--gnuplot", "x.gp")
    assert code == EXIT_USAGE and "--out" in err


def test_cross_check_small():
    code, out, _ = run("cross-check", "--words", "50", "--no-trivial")
    lines = out.splitlines()
    assert code == EXIT_OK and lines[0].startswith("words,") and lines[1].split(",")[3] == "0"


def test_check_lemmas_small():
    code, out, _ = run("check-lemmas", "--samples", "200", "--max-len", "8")
    assert code == EXIT_OK
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert rows and all(r[-1] == "0" for r in rows)


def test_math_exit_code(monkeypatch):
    import lodha_moore.cli as cli

    monkeypatch.setattr(cli.thompson, "caret_count", lambda p: 0)
    code, _, err = run("f-distortion", "--n-max", "1")
    assert code == EXIT_MATH and "carets" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lodha_moore", "eval", "a"], capture_output=True, text=True)
    assert proc.returncode == 0 and from_json(proc.stdout) == eval_R("a")
    proc = subprocess.run([sys.executable, "-m", "lodha_moore"], capture_output=True, text=True)
    assert proc.returncode == 2
