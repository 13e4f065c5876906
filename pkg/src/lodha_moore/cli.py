"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 resource cap exceeded,
4 a mathematical check failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bs12, cantor, reports, thompson
from .words import (
    BS,
    CANTOR,
    R_MODEL,
    AlphabetMismatch,
    WordParseError,
    ball,
    ball_size_estimate,
    complexity,
    eval_R,
    lemma_suite,
    log_bound_holds,
    parse_word,
    sphere_sizes,
)

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_MATH = 0, 2, 3, 4

# default caps, in "cells": ball elements, grid rows, carets
DEFAULT_CAPS = {"ball": 25_000, "bs-grid": 5_000, "f-distortion": 5_000}


class UsageError(Exception):
    pass


class CapError(Exception):
    pass


class MathError(Exception):
    pass


def max_cells(command: str) -> int:
    raw = os.environ.get("LM_MAX_CELLS")
    if raw is None:
        return DEFAULT_CAPS[command]
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"LM_MAX_CELLS must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("LM_MAX_CELLS must be positive")
    return value


def _check_cap(command: str, cells: int, what: str) -> None:
    cap = max_cells(command)
    if cells > cap:
        raise CapError(f"{command}: {what} needs about {cells} cells, cap is {cap} (set LM_MAX_CELLS to raise it)")


def parse_range(text: str) -> range:
    """``lo..hi`` (inclusive) or a single integer."""
    lo, sep, hi = text.partition("..")
    try:
        r = range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}") from None
    return r


# --- subcommands -----------------------------------------------------------


def cmd_eval(args, out) -> int:
    if args.model == "cantor":
        word = parse_word(args.word, CANTOR)
        if args.point is not None:
            try:
                point = cantor.EpSeq.parse(args.point)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            reports.emit(str(cantor.apply_word(word, point)) + "\n", args.out, out)
            return EXIT_OK
        try:
            table = cantor.to_prefix_table(word, args.max_depth)
        except cantor.NotInF as exc:
            reports.emit(json.dumps({"in_F": False, "witness": exc.witness}) + "\n", args.out, out)
            return EXIT_OK
        except cantor.DepthExceeded as exc:
            raise CapError(str(exc)) from None
        reports.emit(table.to_json() + "\n", args.out, out)
        return EXIT_OK
    if args.point is not None:
        raise UsageError("--point is only used with --model cantor")
    if args.model == "BS":
        f = bs12.embed(parse_word(args.word, BS))
    else:
        f = eval_R(parse_word(args.word, R_MODEL))
    reports.emit(f.to_json() + "\n", args.out, out)
    return EXIT_OK


def cmd_invariants(args, out) -> int:
    if args.model == "BS":
        word = parse_word(args.word, BS)
        f = bs12.embed(word)
    else:
        word = parse_word(args.word, R_MODEL)
        f = eval_R(word)
    rep = complexity(f)
    data = rep.to_dict()
    data["word_length"] = len(word)
    data["half_ln_C"] = str(rep.lower_bound())
    if args.model == "R":
        data["log_bound_holds"] = log_bound_holds(len(word), rep.C)
    reports.emit(json.dumps(data) + "\n", args.out, out)
    return EXIT_OK


def cmd_ball(args, out) -> int:
    if args.radius < 0:
        raise UsageError("--radius must be nonnegative")
    _check_cap("ball", ball_size_estimate(args.radius), f"radius {args.radius}")
    lengths = ball(args.radius, cap=args.radius)
    sizes = sphere_sizes(lengths)
    rows, total = [], 0
    for r, size in enumerate(sizes):
        members = [f for f, k in lengths.items() if k == r]
        total += size
        cs = [complexity(f).C for f in members]
        holds = all(log_bound_holds(r, c) for c in cs)
        rows.append((r, size, total, max(cs), holds))
        if not holds:
            raise MathError(f"the complexity bound fails at radius {r}")
    header = ("radius", "sphere", "ball", "max_C", "log_bound_holds")
    reports.emit(reports.render(header, rows, args.format), args.out, out)
    return EXIT_OK


def cmd_bs_grid(args, out) -> int:
    cells = bs12.grid(args.m, args.N, args.n)
    if not cells:
        raise UsageError("the grid is empty")
    if min(args.m.start, args.n.start) < 0:
        raise UsageError("m and n ranges must be nonnegative")
    _check_cap("bs-grid", len(cells), f"{len(cells)} rows")
    rows = bs12.undistortion_table(cells)
    bad = [r for r in rows if not (r.ok and r.cert.ok)]
    if bad:
        c = bad[0].cert
        raise MathError(f"{len(bad)} rows fail, first at m={c.m} N={c.N} n={c.n}")
    text = reports.render(bs12.UndistortionRow.CSV_HEADER, [r.csv_row() for r in rows], args.format)
    reports.emit(text, args.out, out)
    _companions(args, "bs-grid", lambda path: reports.plot_bs_grid(rows, path))
    return EXIT_OK


def f_distortion_rows(n_max: int, max_depth: int | None = None) -> list[tuple[int, int, int, Fraction]]:
    rows = []
    for n in range(1, n_max + 1):
        a = cantor.build_a_n(n)
        depth = max_depth if max_depth is not None else cantor.a_n_max_depth(n)
        try:
            table = cantor.to_prefix_table(a.word, depth)
        except cantor.NotInF as exc:
            raise MathError(f"a_{n} is not in F (witness {exc.witness})") from None
        except cantor.DepthExceeded as exc:
            raise CapError(str(exc)) from None
        carets = thompson.caret_count(thompson.from_prefix_table(table))
        if carets != 2**n + 3:
            raise MathError(f"a_{n} has {carets} carets, expected {2**n + 3}")
        if len(a.substituted) > a.word_bound:
            raise MathError(f"a_{n} has S-length {len(a.substituted)} > {a.word_bound}")
        rows.append((n, carets, a.word_bound, Fraction(carets, a.word_bound)))
    return rows


def cmd_f_distortion(args, out) -> int:
    if args.n_max < 1:
        raise UsageError("--n-max must be at least 1")
    _check_cap("f-distortion", 2**args.n_max + 3, f"n = {args.n_max}")
    rows = f_distortion_rows(args.n_max, args.max_depth)
    header = ("n", "carets", "word_bound", "ratio")
    reports.emit(reports.render(header, rows, args.format), args.out, out)
    _companions(args, "f-distortion", lambda path: reports.plot_f_distortion(rows, path))
    return EXIT_OK


def cmd_cross_check(args, out) -> int:
    if args.words < 0 or args.max_len < 0:
        raise UsageError("--words and --max-len must be nonnegative")
    extra = cantor.short_trivial_words() if args.trivial else []
    res = cantor.cross_check(args.words, args.max_len, args.seed, extra=extra)
    header = ("words", "r_trivial", "moved_corpus", "discrepancies", "nontrivial_fixing_corpus")
    rows = [(res.words, res.trivial, res.moved, len(res.discrepancies), res.undetected)]
    reports.emit(reports.render(header, rows, args.format), args.out, out)
    if not res.ok:
        raise MathError("trivial words moving corpus points: " + "; ".join(res.discrepancies[:5]))
    return EXIT_OK


def cmd_check_lemmas(args, out) -> int:
    if args.samples < 1 or args.max_len < 1:
        raise UsageError("--samples and --max-len must be positive")
    tally = lemma_suite(args.samples, args.max_len, args.seed)
    rows = [(name, tally.checked[name], tally.failed[name]) for name in tally.checked]
    reports.emit(reports.render(("inequality", "checked", "failed"), rows, args.format), args.out, out)
    if not tally.ok:
        raise MathError("estimate failures: " + "; ".join(tally.examples))
    return EXIT_OK


def _companions(args, kind: str, draw) -> None:
    if args.gnuplot:
        if not args.out or args.out == "-" or args.format != "csv":
            raise UsageError("--gnuplot needs --out with --format csv")
        with open(args.gnuplot, "w") as fh:
            fh.write(reports.gnuplot_script(kind, args.out))
    if args.plot:
        draw(args.plot)


# --- parser ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lodha-moore", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=True):
        p.add_argument("--out", help="output file (default: stdout)")
        if formats:
            p.add_argument("--format", choices=reports.FORMATS, default="csv")

    def figures(p):
        p.add_argument("--plot", metavar="PATH", help="also render a figure (png, pdf or svg)")
        p.add_argument("--gnuplot", metavar="PATH", help="write a gnuplot script for the CSV in --out")

    p = sub.add_parser("eval", help="evaluate a word in one of the models")
    p.add_argument("word")
    p.add_argument("--model", choices=(R_MODEL, CANTOR, BS), default=R_MODEL)
    p.add_argument("--point", help="eventually periodic point such as 10(1) (cantor model)")
    p.add_argument("--max-depth", type=int, default=32, help="refinement depth for prefix tables")
    common(p, formats=False)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("invariants", help="D, M and C of a word's map")
    p.add_argument("word")
    p.add_argument("--model", choices=(R_MODEL, BS), default=R_MODEL)
    common(p, formats=False)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("ball", help="exact ball over a, b, c and their inverses")
    p.add_argument("--radius", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("bs-grid", help="breakpoint certificates and the undistortion inequality")
    p.add_argument("--m", type=parse_range, default=range(0, 5))
    p.add_argument("--n", type=parse_range, default=range(0, 5))
    p.add_argument("--N", type=parse_range, default=range(-8, 9))
    common(p)
    figures(p)
    p.set_defaults(func=cmd_bs_grid)

    p = sub.add_parser("f-distortion", help="caret counts of a_n against their word length")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--max-depth", type=int, default=None)
    common(p)
    figures(p)
    p.set_defaults(func=cmd_f_distortion)

    p = sub.add_parser("cross-check", help="real-line triviality against the Cantor corpus")
    p.add_argument("--words", type=int, default=1000)
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--no-trivial", dest="trivial", action="store_false",
                   help="skip the searched trivial commutators")
    common(p)
    p.set_defaults(func=cmd_cross_check)

    p = sub.add_parser("check-lemmas", help="random test of the complexity estimates")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--max-len", type=int, default=14)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_check_lemmas)
    return parser


_RANGE_FLAGS = ("--m", "--n", "--N")


def _join_range_values(argv: list[str]) -> list[str]:
    # argparse takes "-8..8" for an option; glue it to its flag
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _RANGE_FLAGS:
            value = next(it, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_join_range_values(argv))
        return args.func(args, out)
    except (UsageError, WordParseError, AlphabetMismatch) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except CapError as exc:
        print(f"cap exceeded: {exc}", file=err)
        return EXIT_CAP
    except MathError as exc:
        print(f"check failed: {exc}", file=err)
        return EXIT_MATH
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
