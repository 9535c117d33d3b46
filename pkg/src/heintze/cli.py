"""Command-line front end.

Exit codes: 0 success (or a pair distinguished), 1 property failure in
``check``, 2 invalid input, 3 parameter out of range, 10 pair not
distinguished.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import linalg as la
from .algebra import center, derived_subalgebra, lower_central_series
from .checks import run_corpus, run_document
from .errors import HeintzeError, InputError, ParameterOutOfRange
from .invariants import (
    HeintzeData,
    compare,
    foliation_subalgebras,
    is_carnot_type,
    jump_set,
    spectrum_profile,
)
from .io import Pair, dumps, parse_any, parse_heintze, parse_pair
from .metrics import (
    QuasiMetricModel,
    coset_divergence_experiment,
    diag_comparison_check,
    hausdorff_dim_estimate,
    lemma31_check,
    quasi_triangle_constant,
    segment,
)
from .polynomial import factored_string
from .subspace import Subspace

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_PARAMETER = 3
EXIT_NOT_DISTINGUISHED = 10

EXPERIMENTS = ("hausdorff", "lemma31", "diagsandwich", "cosets", "triangle")


@dataclass
class Report:
    command: str
    data: dict
    text: str
    exit_code: int = EXIT_OK

    def machine(self) -> dict:
        return {"command": self.command, "exit_code": self.exit_code, "report": self.data}


def _fmt(x) -> str:
    return la.format_fraction(x) if isinstance(x, Fraction) else str(x)


def _lines(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(width)} : {v}" for k, v in pairs)


def _heintze_summary(h: HeintzeData) -> dict:
    fol = foliation_subalgebras(h)
    roots = list(zip(h.eigen.eigenvalues, h.eigen.multiplicities))
    prof = spectrum_profile(h)
    return {
        "name": h.name,
        "dimension": h.dim,
        "nilpotency_class": h.algebra.nilpotency_class,
        "eigenvalues": [_fmt(v) for v in h.eigenvalue_list()],
        "char_poly": {"coefficients": h.char_poly().to_strings(), "factored": factored_string(roots)},
        "jordan": h.jordan.to_dict(),
        "diagonalizable": h.is_diagonalizable(),
        "trace": _fmt(h.trace),
        "carnot": is_carnot_type(h),
        "u_alpha_dim": fol.u_alpha.dim,
        "h_alpha_dim": fol.h_alpha.dim,
        "jump_set": [_fmt(j) for j in jump_set(h)],
        "profile": prof.to_dict(),
    }


def cmd_inspect(path: str) -> Report:
    obj = parse_any(path)
    if isinstance(obj, Pair):
        raise InputError("inspect takes a single algebra or Heintze document; use compare for pairs")
    if isinstance(obj, HeintzeData):
        d = _heintze_summary(obj)
        text = _lines([
            ("name", d["name"] or "-"),
            ("dimension", d["dimension"]),
            ("nilpotency class", d["nilpotency_class"]),
            ("eigenvalues", ", ".join(d["eigenvalues"])),
            ("char poly", d["char_poly"]["factored"]),
            ("jordan blocks", "; ".join(f"{k}: {v}" for k, v in d["jordan"].items())),
            ("trace", d["trace"]),
            ("carnot type", d["carnot"]),
            ("dim u_alpha", d["u_alpha_dim"]),
            ("dim h_alpha", d["h_alpha_dim"]),
            ("jump set", "{" + ", ".join(d["jump_set"]) + "}"),
            ("profile dims", d["profile"]["dims"]),
        ])
        return Report("inspect", d, text)
    a = obj
    d = {
        "dimension": a.dim,
        "nilpotency_class": a.nilpotency_class,
        "center_dim": center(a).dim,
        "derived_dim": derived_subalgebra(a).dim,
        "lower_central_dims": [s.dim for s in lower_central_series(a)],
    }
    text = _lines([(k.replace("_", " "), v) for k, v in d.items()])
    return Report("inspect", d, text)


def cmd_compare(path: str, second: str | None = None) -> Report:
    if second is None:
        pair = parse_pair(path)
    else:
        pair = Pair(parse_heintze(path), parse_heintze(second))
    v = compare(pair.first, pair.second)
    d = v.to_dict()
    code = EXIT_OK if v.distinguished else EXIT_NOT_DISTINGUISHED
    rows = [("verdict", d["outcome"]), ("scaling applied to second", d["normalization"])]
    if "char_poly" in d["evidence"]:
        p1, p2 = d["evidence"]["char_poly"]
        rows += [("char poly (first)", p1["factored"]), ("char poly (second)", p2["factored"])]
    text = _lines(rows)
    if d["notes"]:
        text += "\n" + "\n".join(f"note: {n}" for n in d["notes"])
    return Report("compare", d, text, code)


def parse_rational_list(text: str) -> list[Fraction]:
    try:
        return [la.to_fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad rational list {text!r}: {exc}") from exc


def cmd_profile(path: str, p_values: list[Fraction] | None = None) -> Report:
    h = parse_heintze(path)
    prof = spectrum_profile(h)
    evals = []
    for p in p_values or []:
        if p < 1:
            raise ParameterOutOfRange(f"p = {_fmt(p)} lies outside [1, inf)")
        if p in prof.jump_points:
            evals.append({"p": _fmt(p), "dim": None, "note": "jump point: the profile is only defined on open intervals"})
        else:
            evals.append({"p": _fmt(p), "dim": prof.evaluate(p)})
    d = {"profile": prof.to_dict(), "evaluations": evals}
    edges = ["1"] + [_fmt(j) for j in prof.jump_points] + ["inf"]
    rows = [(f"({edges[k]}, {edges[k + 1]})", prof.dims[k]) for k in range(len(prof.dims))]
    rows += [(f"p = {e['p']}", e["dim"] if e["dim"] is not None else f"refused ({e['note']})") for e in evals]
    return Report("profile", d, _lines(rows))


def _parse_mu(text: str | None) -> float | None:
    if text is None:
        return None
    try:
        return float(la.to_fraction(text))
    except (TypeError, ValueError):
        try:
            return float(text)
        except ValueError as exc:
            raise InputError(f"bad --mu value {text!r}") from exc


def cmd_estimate(path: str, experiment: str, seed: int = 0, samples: int | None = None, mu: str | None = None,
                 direction: int = 1, subalgebra: str = "1", element: str | None = None,
                 t_grid: str = "1,2,4,8,16,32") -> Report:
    h = parse_heintze(path)
    mu_val = _parse_mu(mu)
    if experiment not in EXPERIMENTS:
        raise InputError(f"unknown experiment {experiment!r}")
    d: dict = {"experiment": experiment, "seed": seed}
    if experiment == "hausdorff":
        if not 1 <= direction <= h.dim:
            raise ParameterOutOfRange(f"--direction must lie in 1..{h.dim}")
        m = QuasiMetricModel(h)
        unit = [0] * h.dim
        unit[direction - 1] = 1
        est = hausdorff_dim_estimate(m, segment(unit), samples=samples or 20000)
        d.update(est.to_dict())
        d["direction"] = direction
        rows = [("direction", direction), ("estimate", f"{est.value:.6f}"), ("residual", f"{est.residual:.3e}"),
                ("scale range", f"[{est.scale_range[0]:.4e}, {est.scale_range[1]:.4e}]")]
    elif experiment == "lemma31":
        m = QuasiMetricModel(h)
        mu_val = float(h.largest_eigenvalue) + 1 if mu_val is None else mu_val
        rep = lemma31_check(m, mu_val, samples or 100000, seed)
        d.update(rep.to_dict())
        rows = [("mu", mu_val), ("c_hat", f"{rep.c_hat:.6e}"), ("violations", rep.violations),
                ("trend slope", f"{rep.trend_slope:.4f}")]
    elif experiment == "diagsandwich":
        mu_val = 1.5 if mu_val is None else mu_val
        rep = diag_comparison_check(h, mu_val, samples or 2000, seed)
        d.update(rep.to_dict())
        rows = [("mu", mu_val), ("C", f"{rep.constant:.6f}"), ("samples", rep.samples),
                ("diagonalizable", rep.diagonalizable)]
    elif experiment == "cosets":
        idx = [int(t) for t in subalgebra.split(",") if t.strip()]
        if any(not 1 <= i <= h.dim for i in idx):
            raise ParameterOutOfRange(f"--subalgebra indices must lie in 1..{h.dim}")
        space = Subspace.span(h.dim, [la.unit(h.dim, i - 1) for i in idx])
        if element is None:
            x = la.unit(h.dim, 1 % h.dim)
        else:
            x = tuple(parse_rational_list(element))
            if len(x) != h.dim:
                raise InputError(f"--element needs {h.dim} coordinates")
        ts = [float(t) for t in t_grid.split(",") if t.strip()]
        rep = coset_divergence_experiment(h, space, x, ts, mu=mu_val, seed=seed)
        d.update(rep.to_dict())
        rows = [("branch", rep.branch), ("distances", ", ".join(f"{v:.6g}" for v in rep.distances))]
        if rep.growth_exponent is not None:
            rows += [("obstruction W", ", ".join(rep.obstruction)), ("growth exponent", f"{rep.growth_exponent:.4f}"),
                     ("1/mu", f"{rep.lower_bound_exponent:.4f}")]
    else:
        m = QuasiMetricModel(h)
        k = quasi_triangle_constant(m, samples or 10000, seed)
        d["K"] = k
        d["samples"] = samples or 10000
        rows = [("K", f"{k:.9f}")]
    return Report("estimate", d, _lines([("experiment", experiment), ("seed", seed)] + rows))


def cmd_check(path: str | None = None, seed: int = 0, samples: int = 200) -> Report:
    rep = run_document(path, seed, samples) if path else run_corpus(seed, samples)
    lines = []
    for r in rep.results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name} [{r.subject}] ({r.checked} checked)")
        if not r.passed:
            lines.append(f"     counterexample: {r.counterexample}")
    lines.append(f"{sum(r.passed for r in rep.results)}/{len(rep.results)} properties passed")
    return Report("check", rep.to_dict(), "\n".join(lines), EXIT_OK if rep.passed else EXIT_CHECK_FAILED)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the machine-readable report to this path")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int)
    parser = argparse.ArgumentParser(prog="heintze", description="Invariants of purely real Heintze groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("inspect", parents=[common], help="invariant report for one document")
    p.add_argument("file")
    p = sub.add_parser("compare", parents=[common], help="run the invariant pipeline on a pair")
    p.add_argument("file")
    p.add_argument("second", nargs="?")
    p = sub.add_parser("profile", parents=[common], help="spectrum-dimension profile")
    p.add_argument("file")
    p.add_argument("--p", dest="p_values", help="comma-separated rationals")
    p = sub.add_parser("estimate", parents=[common], help="numeric experiments")
    p.add_argument("file")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--mu")
    p.add_argument("--direction", type=int, default=1, help="1-based basis index for hausdorff")
    p.add_argument("--subalgebra", default="1", help="1-based basis indices spanning H for cosets")
    p.add_argument("--element", help="coordinates of log x for cosets")
    p.add_argument("--t-grid", default="1,2,4,8,16,32")
    p = sub.add_parser("check", parents=[common], help="property suite on the built-in corpus or a file")
    p.add_argument("file", nargs="?")
    return parser


def run(args: argparse.Namespace) -> Report:
    if args.command == "inspect":
        return cmd_inspect(args.file)
    if args.command == "compare":
        return cmd_compare(args.file, args.second)
    if args.command == "profile":
        return cmd_profile(args.file, parse_rational_list(args.p_values) if args.p_values else None)
    if args.command == "estimate":
        return cmd_estimate(args.file, args.experiment, args.seed, args.samples, args.mu,
                            args.direction, args.subalgebra, args.element, args.t_grid)
    return cmd_check(args.file, args.seed, args.samples or 200)


def emit(report: Report, out: str | None, stream=None) -> None:
    stream = stream or sys.stdout
    payload = dumps(report.machine())
    stream.write(report.text + "\n")
    if out:
        Path(out).write_text(payload + "\n")
        stream.write(f"machine-readable report written to {out}\n")
    else:
        stream.write("```json\n" + payload + "\n```\n")


def _describe(exc: Exception) -> str:
    msg = str(exc)
    name = type(exc).__name__
    return msg if msg.startswith(name) else f"{name}: {msg}"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except ParameterOutOfRange as exc:
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return EXIT_PARAMETER
    except HeintzeError as exc:
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return EXIT_INPUT
    emit(report, args.out)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
