"""Deterministic CSV/JSON writers and figure rendering for the experiment reports."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence

FORMATS = ("csv", "json")


def render(header: Sequence[str], rows: Sequence[Sequence], fmt: str = "csv") -> str:
    """Rows as text.  Cells are written with ``str``; JSON keeps them as strings
    so exact integers and fractions never pass through floats."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([str(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        records = [dict(zip(header, (str(v) for v in row))) for row in rows]
        return json.dumps(records, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def emit(text: str, out: str | None, stream) -> None:
    if out is None or out == "-":
        stream.write(text)
    else:
        Path(out).write_text(text)


# --- gnuplot companions ----------------------------------------------------

_GNUPLOT = {
    "f-distortion": """\
set datafile separator ","
set key autotitle columnhead left top
set logscale y 2
set xlabel "n"
set ylabel "count"
set terminal pngcairo size 800,500
set output "{stem}-gnuplot.png"
plot "{data}" using 1:2 with linespoints title "carets", \\
     "" using 1:3 with linespoints title "word bound"
""",
    "bs-grid": """\
set datafile separator ","
set key autotitle columnhead left top
set xlabel "(ln|N| + m + n)/6"
set ylabel "(ln C(g) + ln C(g^-1))/4"
set terminal pngcairo size 700,600
set output "{stem}-gnuplot.png"
plot "{data}" using 11:10 with points pt 7 ps 0.6 title "rows", x with lines title "equality"
""",
}


def gnuplot_script(kind: str, data_path: str) -> str:
    """Companion script that plots a CSV report written to ``data_path``."""
    stem = str(Path(data_path).with_suffix(""))
    return _GNUPLOT[kind].format(data=data_path, stem=stem)


# --- matplotlib figures ----------------------------------------------------


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    return plt, fig, ax


def _save(plt, fig, path: str) -> None:
    fig.tight_layout()
    # no timestamps or version strings, so reruns give identical files
    meta = {"Software": None} if str(path).endswith(".png") else {}
    fig.savefig(path, metadata=meta)
    plt.close(fig)


def plot_f_distortion(rows: Sequence[tuple[int, int, int, Fraction]], path: str) -> None:
    """Caret counts against the word-length bound, log scale."""
    plt, fig, ax = _figure()
    ns = [r[0] for r in rows]
    ax.semilogy(ns, [r[1] for r in rows], "o-", label="carets of $a_n$", base=2)
    ax.semilogy(ns, [r[2] for r in rows], "s--", label="word bound $30+4n$", base=2)
    ax.set_xlabel("$n$")
    ax.set_ylabel("count")
    ax.set_xticks(ns)
    ax.legend(frameon=False)
    _save(plt, fig, path)


def plot_bs_grid(rows, path: str) -> None:
    """Both sides of the per-row inequality; every point should sit above the diagonal."""
    plt, fig, ax = _figure()
    xs = [float(r.rhs) for r in rows]
    ys = [float(r.lhs) for r in rows]
    colors = ["tab:blue" if r.ok else "tab:red" for r in rows]
    ax.scatter(xs, ys, s=10, c=colors)
    hi = max(xs + ys, default=1.0)
    ax.plot([0, hi], [0, hi], color="0.5", lw=0.8, label="equality")
    ax.set_xlabel(r"$(\ln|N| + m + n)/6$")
    ax.set_ylabel(r"$(\ln C(g) + \ln C(g^{-1}))/4$")
    ax.legend(frameon=False)
    _save(plt, fig, path)
