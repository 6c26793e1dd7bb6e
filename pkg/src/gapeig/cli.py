"""``gapeig`` command-line front end.

Subcommands: ``solve`` (one truncation), ``study`` (a truncation sequence
with diagnostics), ``weyl`` (inspect a Weyl direction), ``oracle`` (dense
finite-difference reference), ``jacobi`` (discrete half-line operators) and
``catalog`` (list or show built-in problems).

Exit status is 0 on success, 1 for input or validation errors and 2 for
numerical failures; errors are also written to stderr as one JSON line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .catalog import DESCRIPTIONS, catalog, names
from .convergence import (CONV_TOL, StudyResult, count_monotonicity_check, detect_accumulation,
                          residual_window_check, run_study, solve_truncation)
from .errors import GapeigError, InputError, SchemeMismatch
from .io import base_config, dumps, fmt_float, study_csv, study_document, summary_table, window_record
from .jacobi import JacobiOperator, jacobi_study
from .ode import DEFAULT_TOL
from .oracle import dense_fd_oracle
from .problem import EndpointClass, SpectralWindow, parse_problem, render_problem
from .truncation import OneSidedLP, bc_angle_from_state, describe_scheme, parse_scheme, truncation_sequence
from .weyl import weyl_direction

# options whose values may legitimately start with a minus sign
_VALUE_OPTS = {"--window", "--interval", "--L", "--b", "--a", "--truncations", "--lambda", "--x", "--band",
               "--override", "--scheme"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _floats(text, n=None, what="value"):
    try:
        vals = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise InputError(f"cannot parse {what} {text!r} as comma-separated numbers") from None
    if n is not None and len(vals) != n:
        raise InputError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    return vals


def _window(text):
    lo, hi = _floats(text, 2, "window")
    return SpectralWindow(lo, hi)


def _load_problem(args):
    if args.catalog and args.problem:
        raise InputError("give either --catalog or --problem, not both")
    if args.catalog:
        return catalog(args.catalog), args.catalog
    if args.problem:
        path = Path(args.problem)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read problem file {str(path)!r}: {exc.strerror}") from None
        spec = parse_problem(text)
        return spec, spec.name or path.name
    raise InputError("a problem is required: --catalog NAME or --problem FILE")


def _scheme(args, spec):
    scheme = parse_scheme(args.scheme)
    if isinstance(scheme, OneSidedLP) and spec.right_class is not EndpointClass.LIMIT_POINT:
        raise SchemeMismatch("the one-sided scheme requires a limit-point right endpoint; "
                             f"{spec.name or 'this problem'} has a Regular right endpoint")
    return scheme


def _left_for(spec, size, a_opt=None):
    if spec.left_class is EndpointClass.REGULAR:
        return spec.a
    if a_opt is not None:
        return a_opt
    if math.isfinite(spec.a):
        return spec.a + 1.0 / size
    return -size


def _right_for(spec, size):
    if spec.right_class is EndpointClass.REGULAR:
        return spec.b
    if math.isfinite(spec.b):
        return spec.b - 1.0 / size
    return size


def _truncations(args, spec):
    if args.truncations:
        out = []
        for item in args.truncations.split(","):
            try:
                a, b = (float(v) for v in item.split(":"))
            except ValueError:
                raise InputError(f"truncation {item!r} must look like a:b") from None
            out.append((a, b))
        return out
    if args.L:
        return [(_left_for(spec, L), _right_for(spec, L)) for L in _floats(args.L)]
    if args.b:
        a_opt = None if args.a is None else _floats(args.a, 1, "--a")[0]
        return [(_left_for(spec, b, a_opt), b) for b in _floats(args.b)]
    if args.count:
        return truncation_sequence(spec, args.count, args.start, args.factor)
    if spec.left_class is EndpointClass.REGULAR and spec.right_class is EndpointClass.REGULAR:
        return [(spec.a, spec.b)]
    raise InputError("give the truncations: --L, --b, --truncations or --count")


def _emit(args, text_by_format, summary):
    fmt = args.format
    if fmt == "table":
        print(summary)
        return
    text = text_by_format[fmt]()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(summary)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# --- commands ----------------------------------------------------------------------


def _study_checks(args, study):
    checks = {"monotonicity": None, "residual": None, "accumulation": None}
    if args.reference is not None:
        mc = count_monotonicity_check(study, args.reference)
        checks["monotonicity"] = {
            "reference": mc.reference_count,
            "passed": mc.passed,
            "per_n": [{"n": n, "count": c, "ok": ok} for n, c, ok in mc.per_n],
        }
    acc = detect_accumulation(study, args.threshold)
    checks["accumulation"] = {"verdict": acc.verdict, "counts": list(acc.counts), "threshold": acc.threshold}
    if getattr(args, "residual", False):
        last = next((r for r in reversed(study.per_n) if r.ok), None)
        rows = []
        if last is not None:
            for t in study.trajectories:
                if t.converged:
                    rc = residual_window_check(study.spec, last.rp, t.limit, study.window, tol=study.tol)
                    rows.append({"lambda": t.limit, "ratio": rc.ratio, "passed": rc.passed})
        checks["residual"] = rows
    return checks


def cmd_study(args, single=False):
    spec, name = _load_problem(args)
    window = _window(args.window)
    scheme = _scheme(args, spec)
    truncs = _truncations(args, spec)
    if single:
        if len(truncs) != 1:
            raise InputError("solve takes exactly one truncation")
        (a_n, b_n), = truncs
        res = solve_truncation(spec, scheme, window, a_n, b_n, args.tol, eigen=not args.counts_only, strict=True)
        study = StudyResult(spec, scheme, window, truncs, args.tol, args.conv_tol, [res], [])
        checks = None
    else:
        study = run_study(spec, scheme, window, truncs, args.tol, args.conv_tol, eigen=not args.counts_only,
                          eigenfunctions=not args.counts_only, workers=args.threads)
        checks = _study_checks(args, study)
    config = base_config("solve" if single else "study", name, study)
    doc = study_document(config, study, checks)
    _emit(args, {"json": lambda: dumps(doc), "csv": lambda: study_csv(study)}, summary_table(study))
    return 0


def cmd_weyl(args):
    spec, name = _load_problem(args)
    lam = _floats(args.lam, 1, "--lambda")[0]
    x = _floats(args.x, 1, "--x")[0]
    wd = weyl_direction(spec, args.endpoint, lam, x, args.tol)
    doc = {
        "config": {"command": "weyl", "problem": name, "endpoint": args.endpoint, "lambda": lam, "x": x,
                   "tol": args.tol},
        "angle": bc_angle_from_state(wd.state),
        "direction": list(wd.direction),
        "decay_rate": wd.decay_rate,
        "stabilized": wd.stabilized,
        "far_point": wd.far_point,
        "rounds": wd.rounds,
    }
    summary = (f"{args.endpoint} Weyl direction at x={x:g}, lambda={lam:g}: angle {doc['angle']:.12f}, "
               f"decay rate {wd.decay_rate:.6g}")
    _emit(args, {"json": lambda: dumps(doc), "csv": lambda: _csv_rows(["angle", "decay_rate"],
                                                                       [[doc["angle"], wd.decay_rate]])}, summary)
    return 0


def _csv_rows(header, rows):
    lines = [",".join(header)]
    lines += [",".join(fmt_float(v) if isinstance(v, float) else str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_oracle(args):
    spec, name = _load_problem(args)
    window = _window(args.window)
    if args.interval:
        interval = tuple(_floats(args.interval, 2, "--interval"))
    elif math.isfinite(spec.a) and math.isfinite(spec.b):
        interval = (spec.a, spec.b)
    else:
        raise InputError("the oracle needs a finite --interval A,B")
    res = dense_fd_oracle(spec, interval, args.N, window)
    doc = {
        "config": {"command": "oracle", "problem": name, "interval": list(interval), "N": args.N,
                   "window": window_record(window)},
        "coarse": res.coarse.tolist(),
        "fine": res.fine.tolist(),
        "extrapolated": res.extrapolated.tolist(),
    }
    summary = "\n".join(f"{c:.12g}  {f:.12g}  {e:.14g}" for c, f, e in zip(res.coarse, res.fine, res.extrapolated))
    rows = [[i, c, f, e] for i, (c, f, e) in enumerate(zip(res.coarse, res.fine, res.extrapolated))]
    _emit(args, {"json": lambda: dumps(doc),
                 "csv": lambda: _csv_rows(["index", f"N={args.N}", f"N={2 * args.N}", "extrapolated"], rows)},
          summary or "no eigenvalues in window")
    return 0


def _overrides(items):
    a_ov, b_ov = {}, {}
    for item in items or []:
        try:
            key, val = item.split("=")
            which, idx = key[0], int(key[1:])
            if which not in "ab":
                raise ValueError
        except ValueError:
            raise InputError(f"override {item!r} must look like b0=2 or a3=0.5") from None
        (a_ov if which == "a" else b_ov)[idx] = _floats(val, 1, "override")[0]
    return a_ov, b_ov


def _indices(text):
    out = []
    for part in text.split(","):
        if ":" in part:
            lo, hi = (int(v) for v in part.split(":"))
            out.extend(range(lo, hi + 1))
        elif part.strip():
            out.append(int(part))
    return out


def cmd_jacobi(args):
    a_ov, b_ov = _overrides(args.override)
    band = tuple(_floats(args.band, 2, "--band")) if args.band else None
    op = JacobiOperator(args.a_expr, args.b_expr, a_ov, b_ov, band)
    window = _window(args.window)
    scheme = parse_scheme(args.scheme)
    try:
        ns = _indices(args.n)
    except ValueError:
        raise InputError(f"cannot parse --n {args.n!r}") from None
    study = jacobi_study(op, scheme, window, ns, args.conv_tol)
    config = {
        "command": "jacobi",
        "operator": {"a": args.a_expr, "b": args.b_expr, "overrides": sorted(args.override or [])},
        "window": window_record(window),
        "scheme": describe_scheme(scheme),
        "n": ns,
        "conv_tol": args.conv_tol,
    }
    checks = _study_checks(args, study)
    doc = study_document(config, study, checks)
    _emit(args, {"json": lambda: dumps(doc), "csv": lambda: study_csv(study)}, summary_table(study))
    return 0


def cmd_catalog(args):
    if args.name:
        print(render_problem(catalog(args.name)), end="")
    else:
        for n in names():
            print(f"{n:18s} {DESCRIPTIONS[n]}")
    return 0


# --- parser --------------------------------------------------------------------------


def _add_problem(p):
    p.add_argument("--catalog", help="built-in problem name (see `gapeig catalog`)")
    p.add_argument("--problem", help="problem file path")


def _add_output(p):
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--output", help="write the JSON/CSV artifact here and print a summary table")


def _add_truncations(p):
    p.add_argument("--L", help="symmetric truncations [-L, L] (comma list)")
    p.add_argument("--b", help="right truncation points b_n (comma list)")
    p.add_argument("--a", help="fixed left truncation point used with --b")
    p.add_argument("--truncations", help="explicit list a:b,a:b,...")
    p.add_argument("--count", type=int, help="generate this many geometric truncations")
    p.add_argument("--start", type=float, default=4.0)
    p.add_argument("--factor", type=float, default=math.sqrt(2.0))


def build_parser():
    parser = _Parser(prog="gapeig", description="Eigenvalues of singular operators in spectral gaps "
                                                  "via Weyl-corrected truncation.")
    parser.add_argument("--version", action="version", version=f"gapeig {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    for name, helptext in (("solve", "eigenvalues of one truncated problem"),
                           ("study", "truncation sequence with convergence diagnostics")):
        p = sub.add_parser(name, help=helptext)
        _add_problem(p)
        p.add_argument("--window", required=True, help="spectral window lambda0,lambda1")
        p.add_argument("--scheme", default="two-sided",
                       help="two-sided[:la[,lb]] | one-sided[:lambda0|lambda1[:la]] | dirichlet")
        _add_truncations(p)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--conv-tol", type=float, default=CONV_TOL)
        p.add_argument("--threads", type=int, default=None, help="worker processes (default: GAPEIG_THREADS or 1)")
        p.add_argument("--counts-only", action="store_true", help="count eigenvalues without refining them")
        if name == "study":
            p.add_argument("--reference", type=int, help="reference count for the count bound check")
            p.add_argument("--threshold", type=int, help="accumulation threshold (default: first count)")
            p.add_argument("--no-residual", dest="residual", action="store_false",
                           help="skip the residual window check on converged trajectories")
        _add_output(p)
        p.set_defaults(func=(lambda a: cmd_study(a, single=True)) if name == "solve" else cmd_study)

    p = sub.add_parser("weyl", help="Weyl solution direction at a point")
    _add_problem(p)
    p.add_argument("--endpoint", choices=("left", "right"), required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_output(p)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("oracle", help="dense finite-difference reference (r = 1, Dirichlet)")
    _add_problem(p)
    p.add_argument("--interval", help="finite interval A,B")
    p.add_argument("--N", type=int, default=2000)
    p.add_argument("--window", required=True)
    _add_output(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("jacobi", help="half-line Jacobi operator truncations")
    p.add_argument("--a-expr", default="1", help="off-diagonal a_k as an expression in k")
    p.add_argument("--b-expr", default="0", help="diagonal b_k as an expression in k")
    p.add_argument("--override", action="append", help="single entry such as b0=2 (repeatable)")
    p.add_argument("--band", help="essential band lo,hi (default: from the limits of a_k, b_k)")
    p.add_argument("--window", required=True)
    p.add_argument("--scheme", default="two-sided")
    p.add_argument("--n", required=True, help="truncation indices, e.g. 4:100 or 5,10,20")
    p.add_argument("--conv-tol", type=float, default=1e-12)
    p.add_argument("--reference", type=int)
    p.add_argument("--threshold", type=int)
    _add_output(p)
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("catalog", help="list built-in problems or show one as a problem file")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)
    return parser


def _join_negative_values(argv):
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv) and argv[i + 1].startswith("-") and len(argv[i + 1]) > 1 \
                and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _error_record(exc, code):
    rec = {"error": getattr(exc, "kind", type(exc).__name__), "message": str(exc), "exit_code": code}
    print(json.dumps(rec), file=sys.stderr)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_join_negative_values(argv))
        if not getattr(args, "func", None):
            raise InputError("a subcommand is required: solve, study, weyl, oracle, jacobi or catalog")
        return args.func(args)
    except GapeigError as exc:
        _error_record(exc, exc.exit_code)
        return exc.exit_code
    except (ValueError, KeyError, TypeError) as exc:
        _error_record(exc, 1)
        return 1
    except (ArithmeticError, RuntimeError) as exc:
        _error_record(exc, 2)
        return 2


if __name__ == "__main__":
    sys.exit(main())
