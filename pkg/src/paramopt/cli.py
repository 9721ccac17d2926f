"""``paramopt solve [--method M] model.lp``: run a solver and print a checked answer."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from .exact_arith import render_rational
from .groebner_nlp import DegreeTooHigh, NlpProblem, NoCandidate, UnsupportedShape, solve_nlp
from .lp_model import LpProblem
from .model_io import ModelFile, ParseError, load_model
from .outcome import LpOutcome, Status

EXIT = {Status.OPTIMAL: 0, Status.INFEASIBLE: 2, Status.INCONSISTENT: 2, Status.UNBOUNDED: 3, Status.FALLBACK: 4}

LP_METHODS = ("parametric", "simplex", "geometric-centroid", "geometric-chord", "geometric-perp", "geometric-perp-edges")
IP_METHODS = ("dio1", "dio2", "ip-brute")
NLP_METHODS = ("groebner",)
METHODS = LP_METHODS + IP_METHODS + NLP_METHODS

_GEO = {
    "geometric-centroid": "centroid",
    "geometric-chord": "chord",
    "geometric-perp": "perp_planes",
    "geometric-perp-edges": "perp_edges",
}


class UsageError(ValueError):
    pass


def _r(x: Optional[Fraction]) -> Optional[str]:
    return None if x is None else render_rational(Fraction(x))


def _parse_rationals(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad rational list {text!r}") from e


def default_method(m: ModelFile) -> str:
    if m.kind == "nlp":
        return "groebner"
    return "dio1" if any(m.problem.integrality) else "parametric"  # type: ignore[union-attr]


def applicable(m: ModelFile) -> tuple[str, ...]:
    if m.kind == "nlp":
        return NLP_METHODS
    if any(m.problem.integrality):  # type: ignore[union-attr]
        return IP_METHODS
    return LP_METHODS


def _report(method: str, status: str, value: Optional[Fraction], names: Sequence[str], x: Sequence[Fraction],
            slacks: Sequence[Fraction], verified: Optional[bool], code: int, **extra: Any) -> dict[str, Any]:
    rep: dict[str, Any] = {
        "method": method,
        "status": status,
        "objective": _r(value),
        "x": {n: _r(v) for n, v in zip(names, x)},
        "slacks": {f"s{i + 1}": _r(v) for i, v in enumerate(slacks)},
        "verified": verified,
    }
    rep.update(extra)
    rep["_code"] = code
    return rep


def _lp_verified(p: LpProblem, out: LpOutcome, integer: bool) -> bool:
    if out.value is None or len(out.x) != p.n:
        return False
    ok = p.is_feasible(out.x) and p.value(out.x) == out.value
    if integer:
        ok = ok and all(Fraction(v).denominator == 1 for v in out.x)
    return ok


def _from_outcome(method: str, p: LpProblem, out: LpOutcome, integer: bool, trace: bool) -> dict[str, Any]:
    final = out.final_status
    status = final.value if out.tag is not Status.FALLBACK else f"fallback ({final.value})"
    verified = _lp_verified(p, out, integer) if final is Status.OPTIMAL else None
    extra: dict[str, Any] = {}
    if trace:
        extra["trace"] = list(out.trace)
    code = EXIT[Status.FALLBACK] if out.tag is Status.FALLBACK else EXIT[final]
    if final is Status.OPTIMAL:
        return _report(method, status, out.value, p.names, out.x, out.slacks, verified, code, **extra)
    return _report(method, status, None, p.names, (), (), verified, code, reason=out.info.get("reason"), **extra)


def run_method(method: str, m: ModelFile, args: argparse.Namespace) -> dict[str, Any]:
    if method not in applicable(m):
        raise UsageError(f"method {method!r} does not apply to this {m.kind} model"
                         + (" with integer variables" if m.kind == "lp" and any(m.problem.integrality) else ""))  # type: ignore[union-attr]
    p = m.problem
    if isinstance(p, NlpProblem):
        return _run_groebner(p, args)
    if method == "parametric":
        from .parametric_lp import solve_parametric

        return _from_outcome(method, p, solve_parametric(p), False, args.trace)
    if method == "simplex":
        from .oracle import simplex_solve

        return _from_outcome(method, p, simplex_solve(p), False, args.trace)
    if method in _GEO:
        return _run_geometric(method, p, args)
    if method == "ip-brute":
        from .oracle import BoxUnbounded, brute_force_ip, lp_box

        try:
            out = brute_force_ip(p, lp_box(p))
        except BoxUnbounded as e:
            return _report(method, "unbounded", None, p.names, (), (), None, EXIT[Status.UNBOUNDED], reason=str(e))
        return _from_outcome(method, p, out, True, args.trace)
    from .diophantine_ip import BudgetExceeded, search_first_method, search_second_method

    solver = search_first_method if method == "dio1" else search_second_method
    try:
        out = solver(p, budget=args.budget)
    except BudgetExceeded as e:
        return _report(method, "budget exceeded", None, p.names, (), (), None, 4, reason=str(e))
    rep = _from_outcome(method, p, out, True, args.trace)
    if out.final_status is Status.OPTIMAL:
        rep["parameters"] = out.info.get("params")
        if method == "dio2":
            rep["dual_certified"] = out.info.get("dual_certified")
    return rep


def _run_geometric(method: str, p: LpProblem, args: argparse.Namespace) -> dict[str, Any]:
    from .geometric_lp import GeoConfig, InfeasibleStart, InteriorPoint, objective_gap, oracle_optimum, solve_geometric

    cfg = GeoConfig(epsilon=args.eps, max_iters=args.max_iters)
    start = None
    if args.start is not None:
        if len(args.start) != p.n:
            raise UsageError(f"--start needs {p.n} values")
        start = InteriorPoint(args.start)
    try:
        res = solve_geometric(p, _GEO[method], start, cfg)
    except InfeasibleStart as e:
        return _report(method, "infeasible", None, p.names, (), (), None, EXIT[Status.INFEASIBLE], reason=str(e))
    if res.status is Status.UNBOUNDED or res.best is None:
        return _report(method, "unbounded", None, p.names, (), (), None, EXIT[Status.UNBOUNDED], reason=res.stop_reason)
    x = res.best
    verified = p.is_feasible(x) and p.value(x) == res.best_value
    ref = oracle_optimum(p)
    extra: dict[str, Any] = {"stop": res.stop_reason, "iterations": len(res.trajectory) - 1}
    if ref is not None and res.best_value is not None:
        extra["gap"] = f"{objective_gap(res.best_value, ref):.3e}"
    if args.trace:
        extra["trajectory"] = [
            {"x": [_r(v) for v in pt], "objective": _r(val), "objective_decimal": f"{float(val):.6f}"}
            for pt, val in res.trajectory
        ]
    return _report(method, "optimal", res.best_value, p.names, x, (), verified, 0, **extra)


def _run_groebner(p: NlpProblem, args: argparse.Namespace) -> dict[str, Any]:
    try:
        res = solve_nlp(p)
    except NoCandidate as e:
        return _report("groebner", "infeasible", None, p.names, (), (), None, EXIT[Status.INFEASIBLE], reason=str(e))
    except (UnsupportedShape, DegreeTooHigh) as e:
        raise UsageError(str(e)) from e
    x = res.info["x"]
    verified = p.is_feasible(x) and p.value(x) == res.d
    extra: dict[str, Any] = {}
    if args.trace:
        extra["basis"] = [str(g) for g in res.basis]
        extra["order"] = list(res.info["order"])
        extra["zeroed"] = list(res.info["zeroed"])
    return _report("groebner", "optimal", res.d, p.names, x, res.info["slacks"], verified, 0, **extra)


def render_text(rep: dict[str, Any]) -> str:
    lines = [f"method: {rep['method']}", f"status: {rep['status']}"]
    if rep.get("reason"):
        lines.append(f"reason: {rep['reason']}")
    if rep["objective"] is not None:
        lines.append(f"objective: {rep['objective']}")
        lines += [f"{k} = {v}" for k, v in rep["x"].items()]
        lines += [f"{k} = {v}" for k, v in rep["slacks"].items()]
    for key in ("parameters", "dual_certified", "stop", "iterations", "gap"):
        if rep.get(key) is not None:
            val = rep[key]
            if key == "parameters":
                val = ", ".join(render_rational(Fraction(v)) for v in val)
            elif isinstance(val, bool):
                val = str(val).lower()
            lines.append(f"{key}: {val}")
    if rep["verified"] is not None:
        lines.append(f"verified: {str(rep['verified']).lower()}")
    if "trajectory" in rep:
        lines.append("trajectory:")
        for i, step in enumerate(rep["trajectory"]):
            lines.append(f"  {i}: objective {step['objective']} ({step['objective_decimal']}) at ({', '.join(step['x'])})")
    if rep.get("trace"):
        lines.append("trace:")
        lines += [f"  {t}" for t in rep["trace"]]
    if "basis" in rep:
        lines.append(f"order: {' > '.join(rep['order'])}")
        lines.append("basis:")
        lines += [f"  {g}" for g in rep["basis"]]
        if rep["zeroed"]:
            lines.append(f"zeroed: {', '.join(rep['zeroed'])}")
    return "\n".join(lines)


def _public(rep: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in rep.items() if not k.startswith("_")}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="paramopt", description="Exact parametric-objective optimization.")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="solve a model file")
    s.add_argument("model", help="model file")
    s.add_argument("--method", choices=METHODS, help="solver (default depends on the model)")
    s.add_argument("--all-methods", action="store_true", help="run every applicable method and compare")
    s.add_argument("--start", type=_parse_rationals, help="interior start point for geometric methods")
    s.add_argument("--eps", type=Fraction, default=Fraction(0), help="boundary margin for geometric methods (0 = exact)")
    s.add_argument("--max-iters", type=int, default=100)
    s.add_argument("--budget", type=int, default=10**6, help="node budget for the integer searches")
    s.add_argument("--trace", action="store_true")
    s.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def _agreement(reports: list[dict[str, Any]]) -> bool:
    exact = [r for r in reports if not r["method"].startswith("geometric")]
    keys = {(r["status"].replace("fallback (", "").rstrip(")"), r["objective"]) for r in exact}
    return len(keys) <= 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        if args.eps < 0 or args.max_iters < 1 or args.budget < 1:
            raise UsageError("--eps must be >= 0, --max-iters and --budget >= 1")
        try:
            model = load_model(args.model)
        except OSError as e:
            raise UsageError(f"cannot read {args.model}: {e.strerror}") from e
        if args.all_methods:
            reports = [run_method(mth, model, args) for mth in applicable(model)]
            agree = _agreement(reports)
            if args.format == "json":
                print(json.dumps({"results": [_public(r) for r in reports], "agreement": agree}, indent=2))
            else:
                print("\n\n".join(render_text(r) for r in reports))
                print(f"\nagreement: {str(agree).lower()}")
            return reports[0]["_code"] if agree else 4
        rep = run_method(args.method or default_method(model), model, args)
    except ParseError as e:
        print(f"{args.model}: parse error at {e}", file=sys.stderr)
        return 1
    except UsageError as e:
        print(f"paramopt: {e}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(_public(rep), indent=2))
    else:
        print(render_text(rep))
    return rep["_code"]


def run_cli(argv: Sequence[str]) -> int:
    return main(list(argv))


if __name__ == "__main__":
    sys.exit(main())
