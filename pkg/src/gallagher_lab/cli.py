"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 parameter error, 3 an inequality
violation (verify-lemma) or a failed acceptance criterion (suite).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .acceptance import CRITERIA, run_suite
from .arith import balanced_part, divisor_table, table_from_csv
from .compare import ScanSpec, is_T_better
from .correlation import IntWeight, autocorrelation, dft
from .dirichlet import DirichletPoly, theorem1_sweep
from .errors import GallagherLabError, ParameterDomainError, RangeCoverageError, ResourceError
from .expsum import ExpSumSpec, random_spec, verify_lemma
from .selberg import (length_inertia_check, modified_selberg_integral, selberg_integral,
                      weighted_selberg_integral)
from .transforms import min_sq_on_interval, transform
from .weights import eval_weight, parse_weight_spec

EXIT_OK, EXIT_INTERNAL, EXIT_PARAM, EXIT_VIOLATION = 0, 1, 2, 3
THREADS_ENV = "GALLAGHER_LAB_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunManifest:
    argv: list
    params: dict
    version: str = __version__
    wall_time: float = 0.0
    outputs: list = field(default_factory=list)

    def text(self) -> str:
        lines = [f"command = {' '.join(self.argv)}", f"version = {self.version}",
                 f"wall_time_s = {self.wall_time:.3f}"]
        lines += [f"param.{k} = {v}" for k, v in sorted(self.params.items())]
        lines += [f"output = {p}" for p in self.outputs]
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in rows:
        wr.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParameterDomainError(f"expected comma-separated numbers, got {text!r}") from None


def _read_numeric_rows(path: str) -> list[list[float]]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].lstrip().startswith("#"):
                continue
            try:
                rows.append([float(v) for v in rec if v.strip()])
            except ValueError:
                continue  # header line
    if not rows:
        raise ParameterDomainError(f"no numeric rows in {path}")
    return rows


def _read_expsum(path: str) -> ExpSumSpec:
    """Rows ``nu, re[, im]``."""
    rows = _read_numeric_rows(path)
    nu = [r[0] for r in rows]
    s = [complex(r[1], r[2] if len(r) > 2 else 0.0) for r in rows]
    order = np.argsort(nu)
    return ExpSumSpec(np.asarray(nu)[order], np.asarray(s)[order])


def _read_dirichlet(path: str) -> DirichletPoly:
    """Rows ``n, re[, im]``; missing ``n`` inside the range count as 0."""
    rows = _read_numeric_rows(path)
    ns = [int(r[0]) for r in rows]
    lo, hi = min(ns), max(ns)
    a = np.zeros(hi - lo + 1, dtype=complex)
    for r in rows:
        a[int(r[0]) - lo] += complex(r[1], r[2] if len(r) > 2 else 0.0)
    return DirichletPoly(lo, a)


# --- subcommands ---------------------------------------------------------------

def cmd_weight(args):
    w = parse_weight_spec(args.spec)
    if args.eval:
        xs = _parse_floats(args.eval)
        return 0, _csv_text(["x", "w"], [(x, eval_weight(w, x)) for x in xs])
    if args.transform:
        ys = np.asarray(_parse_floats(args.transform))
        vals = np.atleast_1d(transform(w, ys))
        return 0, _csv_text(["y", "re", "im", "abs_sq"],
                            [(y, v.real, v.imag, abs(v) ** 2) for y, v in zip(ys, vals)])
    if args.min_T is not None:
        r = min_sq_on_interval(w, args.min_T)
        return 0, _csv_text(["T", "argmin", "m"], [(r.T, r.argmin, r.m)])
    if args.grid:
        a, b, n = args.grid.split(":")
        xs = np.linspace(float(a), float(b), int(n))
        return 0, _csv_text(["x", "w"], zip(xs, np.atleast_1d(eval_weight(w, xs))))
    return 0, w.spline.to_csv()


def cmd_verify_lemma(args):
    w = parse_weight_spec(args.weight)
    if args.frequencies:
        spec = _read_expsum(args.frequencies)
    else:
        spec = random_spec(np.random.default_rng(args.seed), args.random)
    rows, bad = [], False
    for T in _parse_floats(args.T):
        rep = verify_lemma(spec, w, T)
        bad |= not rep.holds
        rows.append((T, rep.lhs, rep.m, rep.rhs, rep.slack, rep.holds))
    out = _csv_text(["T", "lhs", "m", "rhs", "slack", "holds"], rows)
    return (EXIT_VIOLATION if bad else 0), out


def cmd_dirichlet(args):
    D = _read_dirichlet(args.coeffs)
    Ts = _parse_floats(args.sweep) if args.sweep else [args.T]
    if any(T is None for T in Ts):
        raise ParameterDomainError("give --T or --sweep")
    rows = [(r.T, r.lhs, r.main, r.remainder, r.ratio) for r in theorem1_sweep(D, Ts)]
    return 0, _csv_text(["T", "lhs", "main", "remainder", "ratio"], rows)


def _table(fn: str, lo: int, hi: int):
    if fn.startswith("custom:"):
        return table_from_csv(fn.split(":", 1)[1])
    if fn.startswith("d") and fn[1:].isdigit():
        return divisor_table(int(fn[1:]), lo, hi)
    raise ParameterDomainError(f"unknown function {fn!r}; use d1, d2, d3 or custom:<file>")


def cmd_selberg(args):
    N, h = args.N, args.h
    H = args.H
    reach = max(h, H or 0) + 2
    f = _table(args.fn, max(1, N - reach), 2 * N + reach)
    header = ["N", "h", "H", "j", "kind", "value"]
    extra_h, extra = [], []
    kind = args.kind
    if kind == "original":
        val = selberg_integral(f, N, h).value
    elif kind == "modified":
        val = modified_selberg_integral(f, N, h, 1).value
    elif kind == "jth":
        ff = f if f.is_balanced else balanced_part(f)
        val = modified_selberg_integral(ff, N, h, args.j).value
    else:  # weighted
        if not args.weight:
            raise ParameterDomainError("--kind weighted needs --weight")
        ff = f if f.is_balanced else balanced_part(f)
        val = weighted_selberg_integral(ff, parse_weight_spec(args.weight), N, H).value
    if H is not None and kind in ("original", "modified"):
        orig, mod = length_inertia_check(f, N, h, H)
        extra_h = ["inertia_original_ratio", "inertia_modified_ratio"]
        extra = [orig.ratio, mod.ratio]
    row = [N, h, "" if H is None else H, args.j if kind == "jth" else "", kind, val] + extra
    return 0, _csv_text(header + extra_h, [row])


def cmd_correlate(args):
    w = IntWeight.from_weight(parse_weight_spec(args.weight))
    tab = autocorrelation(w)
    if args.emit == "table":
        rows = [(int(k), v.real, v.imag) for k, v in zip(tab.lags, tab.values)]
        return 0, _csv_text(["lag", "re", "im"], rows)
    al = np.linspace(-0.5, 0.5, args.points)
    vals = dft(w, al)
    return 0, _csv_text(["alpha", "re", "im"], [(a, v.real, v.imag) for a, v in zip(al, vals)])


def cmd_compare(args):
    v = parse_weight_spec(args.v)
    w = parse_weight_spec(args.w)
    rep = is_T_better(v, w, args.T, ScanSpec.parse(args.scan))
    comment = (f"verdict={rep.verdict} violation_fraction={rep.violation_fraction!r} "
               f"threshold={rep.ratio_threshold!r} gain_bound={rep.gain_bound!r}")
    return 0, _csv_text(["y", "ratio", "threshold", "violation"], rep.rows(), [comment])


def cmd_suite(args):
    only = [int(t) for t in args.only.split(",")] if args.only else None
    if only and any(not 1 <= n <= len(CRITERIA) for n in only):
        raise ParameterDomainError(f"criteria are numbered 1..{len(CRITERIA)}")
    results = run_suite(args.profile, args.seed, only)
    text = "\n".join(r.line() for r in results) + "\n"
    failed = sum(not r.passed for r in results)
    text += f"{len(results) - failed}/{len(results)} criteria passed\n"
    return (EXIT_VIOLATION if failed else 0), text


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gallagher-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here (default stdout) plus <out>.manifest.txt")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("weight", parents=[common], help="inspect a weight")
    s.add_argument("--spec", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--eval", help="comma-separated points")
    g.add_argument("--transform", help="comma-separated frequencies")
    g.add_argument("--min", dest="min_T", type=float, help="min |w^|^2 on [-T, T]")
    g.add_argument("--grid", help="a:b:n sample grid")
    s.set_defaults(func=cmd_weight)

    s = sub.add_parser("verify-lemma", parents=[common], help="both sides of the weighted inequality")
    s.add_argument("--weight", required=True)
    s.add_argument("--T", required=True, help="value or comma-separated values")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--frequencies", help="CSV rows nu, re[, im]")
    g.add_argument("--random", type=int, help="seeded random spec with this many terms")
    s.set_defaults(func=cmd_verify_lemma)

    s = sub.add_parser("dirichlet", parents=[common], help="Cesaro-weighted bound for a Dirichlet polynomial")
    s.add_argument("--coeffs", required=True, help="CSV rows n, re[, im]")
    s.add_argument("--T", type=float)
    s.add_argument("--sweep", help="comma-separated T values")
    s.set_defaults(func=cmd_dirichlet)

    s = sub.add_parser("selberg", parents=[common], help="Selberg-type integrals")
    s.add_argument("--fn", required=True, help="d1, d2, d3 or custom:<file.csv>")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--H", type=int)
    s.add_argument("--j", type=int, default=1)
    s.add_argument("--kind", choices=("original", "modified", "jth", "weighted"), default="original")
    s.add_argument("--weight")
    s.set_defaults(func=cmd_selberg)

    s = sub.add_parser("correlate", parents=[common], help="autocorrelation of integer samples")
    s.add_argument("--weight", required=True)
    s.add_argument("--emit", choices=("table", "dft"), default="table")
    s.add_argument("--points", type=int, default=257)
    s.set_defaults(func=cmd_correlate)

    s = sub.add_parser("compare", parents=[common], help="T-better scan")
    s.add_argument("--v", required=True)
    s.add_argument("--w", required=True)
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--scan", help="ymax=..,n=..")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("suite", parents=[common], help="acceptance battery")
    s.add_argument("profile", choices=("quick", "full"), nargs="?", default="quick")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_suite)
    return p


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ParameterDomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ParameterDomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    try:
        threads = _threads()
        code, text = args.func(args)
    except (ParameterDomainError, RangeCoverageError, GallagherLabError, ValueError,
            FileNotFoundError) as exc:
        if isinstance(exc, ResourceError):
            print(f"resource error: {exc}", file=sys.stderr)
            return EXIT_INTERNAL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except MemoryError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        params = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
        params["threads"] = threads
        man = RunManifest(["gallagher-lab"] + argv, params, wall_time=time.perf_counter() - t0,
                          outputs=[args.out])
        with open(args.out + ".manifest.txt", "w", encoding="utf-8") as fh:
            fh.write(man.text())
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # downstream closed early (e.g. piped into head); not an error here
            devnull = os.open(os.devnull, os.O_WRONLY)
            os.dup2(devnull, sys.stdout.fileno())
    return code


if __name__ == "__main__":
    sys.exit(main())
