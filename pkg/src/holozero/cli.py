"""Command-line interface: ``holozero {count,find,benchmark,demos}``.

Exit codes: 0 success, 2 quadrature failure (a zero on or near an edge),
3 non-integer count or subdivision budget exhausted, 64 bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import replace

from .demos import DEMOS, Problem, get_demo
from .engine import EngineConfig, RootFindingError, find_poles_manual, find_zeros
from .experiments import benchmark
from .exprparse import ParseError, expression_handle
from .geometry import Rectangle
from .numderiv import DerivConfig, wrap_derivative_free
from .quadrature import Integer, NonInteger, QuadConfig, QuadratureFailure, count_zeros

EXIT_OK = 0
EXIT_QUADRATURE = 2
EXIT_NONINTEGER = 3
EXIT_USAGE = 64

EXPRESSION_HELP = """\
expressions:
  a function of z built from numbers (2, 0.5, 1e-3, 2i), the constants
  pi, e, i, the operators + - * / ^ (or **) and parentheses, and the
  functions exp log sin cos tan sqrt. ^ binds tightest and is
  right-associative; unary minus binds looser than ^, so -z^2 = -(z^2).
  log and sqrt are principal branches with the cut on the negative real
  axis, taking the value from above the cut (sqrt(-1) = i).
  Without --dexpr the derivative is computed numerically.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_rect(text: str) -> Rectangle:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rectangle {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("rectangle needs four values re0,re1,im0,im1")
    try:
        return Rectangle(*vals)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex number {text!r}") from None


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def _default_threads() -> int:
    env = os.environ.get("HOLOZERO_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="holozero",
        description="Zeros of holomorphic functions in a rectangle by subdivision and AAA.",
        epilog=EXPRESSION_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def problem_args(sp):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--expr", help="f(z) as an expression")
        src.add_argument("--demo", choices=sorted(DEMOS), help="built-in problem")
        sp.add_argument("--dexpr", help="f'(z) as an expression (with --expr)")
        sp.add_argument("--rect", type=_parse_rect, help="search region re0,re1,im0,im1")
        sp.add_argument("--quad-rtol", type=float, default=None, help="relative quadrature tolerance")
        sp.add_argument("--quad-limit", type=int, default=None, help="max bisections per edge")
        sp.add_argument("--derivative-free", action="store_true", help="differentiate a demo numerically")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--alpha", type=int, default=2, help="funcchoice: multiplicity")
        sp.add_argument("--a", type=_parse_complex, default=None, help="funcchoice: zero location")
        sp.add_argument("--n", type=int, default=3, help="compfunc: zeros minus one")
        sp.add_argument("--depth", type=int, default=None, help="pole mode: subdivision depth")
        sp.add_argument("--out", help="write the document here instead of stdout")

    sp = sub.add_parser("count", help="number of zeros by the argument principle",
                        epilog=EXPRESSION_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    problem_args(sp)

    sp = sub.add_parser("find", help="locate all zeros with multiplicities",
                        epilog=EXPRESSION_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    problem_args(sp)
    sp.add_argument("--max-per-region", type=int, default=7, metavar="M")
    sp.add_argument("--polish", action="store_true", help="refine zeros by Newton's method")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--plot-data", metavar="FILE", help="write rectangles and zeros as JSON")
    sp.add_argument("--threads", type=int, default=None, help="worker threads (env HOLOZERO_THREADS)")
    sp.add_argument("--timing", action="store_true", help="include wall-clock time in the document")

    sp = sub.add_parser("benchmark", help="AAA versus Delves-Lyness evaluation counts")
    sp.add_argument("--n", type=int, default=3, help="the test function has n+1 zeros")
    sp.add_argument("--tolerances", type=_parse_floats, default=[1e-4, 1e-6, 1e-8, 1e-10])
    sp.add_argument("--out")

    sub.add_parser("demos", help="list built-in problems")
    return p


# ---------------------------------------------------------------------------


def _problem(args) -> Problem:
    if args.demo is not None:
        if args.dexpr is not None:
            raise UsageError("--dexpr requires --expr")
        params = {}
        if args.demo == "funcchoice":
            params = {"alpha": args.alpha, "a": args.a}
        elif args.demo == "compfunc":
            params = {"n": args.n}
        elif args.demo == "circulant-resolvent" and args.depth is not None:
            params = {"depth": args.depth}
        prob = get_demo(args.demo, seed=args.seed, **params)
        if args.derivative_free:
            prob.handle = wrap_derivative_free(prob.handle._f, DerivConfig(), name=prob.name)
    else:
        if args.rect is None:
            raise UsageError("--expr needs --rect")
        try:
            fh = expression_handle(args.expr, args.dexpr)
        except ParseError as exc:
            raise UsageError(f"{exc}\n  {exc.src}\n  {' ' * exc.offset}^") from None
        prob = Problem("expr", fh, args.rect)
    if args.rect is not None:
        prob.rect = args.rect
    return prob


def _quad_config(args, prob: Problem) -> QuadConfig:
    base = prob.quad or QuadConfig()
    changes = {}
    if args.quad_rtol is not None:
        changes["rel_tol"] = args.quad_rtol
    if args.quad_limit is not None:
        changes["max_interval_subdivisions"] = args.quad_limit
    try:
        return replace(base, **changes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _config_echo(args, prob: Problem, quad: QuadConfig, extra: dict | None = None) -> dict:
    cfg = {
        "source": "demo" if args.demo else "expr",
        "demo": args.demo,
        "expr": args.expr,
        "dexpr": args.dexpr,
        "rect": prob.rect.as_list(),
        "seed": args.seed,
        "derivative_free": bool(getattr(prob.handle, "derivative_free", False)),
        "quad_rtol": quad.rel_tol,
        "quad_limit": quad.max_interval_subdivisions,
    }
    cfg.update(extra or {})
    return cfg


def cmd_count(args) -> int:
    prob = _problem(args)
    quad = _quad_config(args, prob)
    outcome = count_zeros(prob.handle, prob.rect, quad)
    doc = {"status": "ok", "count": None}
    if isinstance(outcome, Integer):
        doc["count"] = outcome.value
        doc["raw"] = [outcome.raw.real, outcome.raw.imag]
        code = EXIT_OK
    elif isinstance(outcome, QuadratureFailure):
        e = outcome.edge
        doc["status"] = "failed"
        doc["reason"] = "quadrature-failure"
        doc["message"] = f"quadrature failed on edge {e.start} -> {e.end}; a zero may lie on or near it"
        doc["edge"] = [[e.start.real, e.start.imag], [e.end.real, e.end.imag]]
        code = EXIT_QUADRATURE
    else:
        assert isinstance(outcome, NonInteger)
        doc["status"] = "failed"
        doc["reason"] = "non-integer"
        doc["message"] = "argument principle did not give a nonnegative integer"
        doc["raw"] = [outcome.value.real, outcome.value.imag]
        code = EXIT_NONINTEGER
    doc["eval_counts"] = prob.handle.counts()
    doc["config"] = _config_echo(args, prob, quad)
    _emit(_json(doc), args.out)
    return code


def _zero_dicts(records, prob: Problem) -> list[dict]:
    out = []
    for rec in records:
        d = rec.to_dict()
        if prob.label is not None:
            d["sheet"] = prob.label(rec.location)
        out.append(d)
    return out


def _csv(rows: list[dict], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def cmd_find(args) -> int:
    prob = _problem(args)
    quad = _quad_config(args, prob)
    threads = args.threads if args.threads is not None else _default_threads()
    if args.max_per_region < 1 or threads < 1:
        raise UsageError("--max-per-region and --threads must be positive")
    cfg = EngineConfig(max_zeros=args.max_per_region, seed=args.seed, polish=args.polish,
                       threads=threads, quad=quad)
    pole_mode = prob.mode == "poles"
    t0 = time.perf_counter()
    records, report, error = [], None, None
    try:
        if pole_mode:
            records, report = find_poles_manual(prob.handle, prob.rect, prob.depth, cfg)
        else:
            records, report = find_zeros(prob.handle, prob.rect, cfg)
        code = EXIT_OK
    except RootFindingError as exc:
        error = exc
        code = exc.exit_code
    elapsed = time.perf_counter() - t0

    zeros = _zero_dicts(records, prob)
    doc = {
        "status": "ok" if error is None else "failed",
        "mode": "poles" if pole_mode else "zeros",
        "count": None,
        "zeros": zeros,
        "regions": [],
        "eval_counts": prob.handle.counts(),
        "config": _config_echo(args, prob, quad, {
            "max_per_region": args.max_per_region,
            "polish": args.polish,
            "depth": prob.depth if pole_mode else None,
        }),
    }
    if error is not None:
        doc["error"] = {"type": type(error).__name__, "message": str(error)}
    if report is not None:
        doc["count"] = sum(z["multiplicity"] for z in zeros if z["kind"] == "zero")
        doc["argument_principle_count"] = report.count
        doc["regions"] = [r.to_dict() for r in report.regions]
        doc["aaa_failures"] = report.aaa_failures
    if args.timing:
        doc["timing"] = {"elapsed_s": elapsed}
    print(f"holozero: {len(zeros)} points in {elapsed:.2f} s", file=sys.stderr)

    if args.format == "csv":
        header = ["re", "im", "multiplicity", "residue_re", "residue_im", "refined", "kind"]
        if prob.label is not None:
            header.append("sheet")
        _emit(_csv(zeros, header), args.out)
    else:
        _emit(_json(doc), args.out)
    if error is not None:
        print(f"holozero: {error}", file=sys.stderr)

    if args.plot_data:
        plot = {
            "rect": prob.rect.as_list(),
            "regions": [
                {"rect": r["rect"], "count": r["count"], "status": r["status"]} for r in doc["regions"]
            ],
            "zeros": [[z["re"], z["im"]] for z in zeros if z["kind"] == "zero"],
            "poles": [[z["re"], z["im"]] for z in zeros if z["kind"] == "pole"],
        }
        with open(args.plot_data, "w", encoding="utf-8") as fp:
            fp.write(_json(plot))
    return code


def cmd_benchmark(args) -> int:
    if args.n < 0 or not args.tolerances or any(t <= 0 for t in args.tolerances):
        raise UsageError("--n must be nonnegative and tolerances positive")
    rows = benchmark(args.n, args.tolerances)
    dicts = [
        {"method": r.method, "tolerance": repr(r.tolerance), "eval_count": r.eval_count,
         "max_zero_error": "inf" if math.isinf(r.max_zero_error) else repr(r.max_zero_error)}
        for r in rows
    ]
    _emit(_csv(dicts, ["method", "tolerance", "eval_count", "max_zero_error"]), args.out)
    return EXIT_OK


def cmd_demo_list(args=None) -> int:
    width = max(len(k) for k in DEMOS)
    for name, (_, desc) in DEMOS.items():
        print(f"{name:<{width}}  {desc}")
    return EXIT_OK


COMMANDS = {"count": cmd_count, "find": cmd_find, "benchmark": cmd_benchmark, "demos": cmd_demo_list}


_VALUE_FLAGS = ("--rect", "--a", "--tolerances", "--expr", "--dexpr")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--rect -1,1,-1,1`` into ``--rect=-1,1,-1,1`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"holozero: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
