"""Machine-readable outputs: deterministic JSON and per-eigenvalue CSV.

Floats are written with 17 significant digits and dict order is kept as
built, so identical runs produce byte-identical files.  Non-finite floats
(an infinite residual ratio, say) are written as ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .truncation import describe_scheme

CSV_COLUMNS = ("n", "a_n", "b_n", "index", "lambda", "residual", "overlap")


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj, indent: int | None = 2) -> str:
    """JSON text with fixed float formatting."""
    return _encode(obj, indent, 0)


def _encode(obj, indent, level):
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def window_record(window):
    return [window.lambda0, window.lambda1]


def per_n_records(study):
    out = []
    for r in study.per_n:
        rec = {
            "n": r.n,
            "a_n": r.a_n,
            "b_n": r.b_n,
            "count": r.count,
            "eigenvalues": [] if r.eigen is None else r.eigen.values.tolist(),
        }
        if r.eigen is not None and r.eigen.edge_values:
            rec["edge_eigenvalues"] = list(r.eigen.edge_values)
        if r.error is not None:
            rec["error"] = r.error
        out.append(rec)
    return out


def trajectory_records(study):
    return [{
        "limits": t.limit,
        "values": list(t.values),
        "ns": list(t.ns),
        "converged": bool(t.converged),
        "overlaps": list(t.overlaps),
    } for t in study.trajectories]


def study_document(config: dict, study, checks: dict | None = None) -> dict:
    return {
        "config": config,
        "per_n": per_n_records(study),
        "trajectories": trajectory_records(study),
        "checks": checks or {"monotonicity": None, "residual": None, "accumulation": None},
    }


def base_config(command, problem_name, study):
    return {
        "command": command,
        "problem": problem_name,
        "window": window_record(study.window),
        "scheme": describe_scheme(study.scheme),
        "truncations": [list(t) for t in study.truncations],
        "tol": study.tol,
        "conv_tol": study.conv_tol,
    }


def _cell(x):
    return "" if x is None or not math.isfinite(x) else fmt_float(x)


def study_csv(study) -> str:
    """One row per (truncation, eigenvalue index)."""
    overlap_of = {}
    for t in study.trajectories:
        for k in range(1, len(t.ns)):
            if k - 1 < len(t.overlaps):
                overlap_of[(t.ns[k], t.slots[k])] = t.overlaps[k - 1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in study.per_n:
        if r.eigen is None:
            continue
        for i, lam in enumerate(r.eigen.values.tolist()):
            ef = r.eigenfunctions.get(i)
            ov = overlap_of.get((r.n, i))
            w.writerow([r.n, fmt_float(r.a_n), fmt_float(r.b_n), i, fmt_float(lam),
                        "" if ef is None else _cell(ef.residual), _cell(ov)])
    return buf.getvalue()


def summary_table(study) -> str:
    lines = [f"{'n':>3} {'a_n':>12} {'b_n':>12} {'count':>5}  eigenvalues"]
    for r in study.per_n:
        vals = "" if r.eigen is None else " ".join(f"{v:.10g}" for v in r.eigen.values)
        note = f"  [{r.error}]" if r.error else ""
        cnt = "-" if r.count is None else str(r.count)
        lines.append(f"{r.n:>3} {r.a_n:>12.6g} {r.b_n:>12.6g} {cnt:>5}  {vals}{note}")
    if study.trajectories:
        lines.append("")
        lines.append(f"{'trajectory':>10} {'limit':>20} {'converged':>10} {'last overlap':>14}")
        for i, t in enumerate(study.trajectories):
            ov = f"{t.overlaps[-1]:.12f}" if t.overlaps else "-"
            lines.append(f"{i:>10} {t.limit:>20.14g} {str(t.converged):>10} {ov:>14}")
    return "\n".join(lines)
