"""Command-line front end: ``qszego constants | kernel-eval | verify``.

Every command emits a RunReport (JSON by default, ``--text`` for a readable
summary).  Exit codes: 0 pass, 1 verification failure, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

import jsonschema

from . import constants as C
from .errors import NumericalFailure, RangeError, Singular, SizeMismatch, SzegoError
from .kernel import NORMALIZATIONS, KernelContext, kernel_arg, kernel_S, s_unnorm
from .quadrature import METHODS, QuadratureSpec
from .siegel import SiegelPoint
from .suites import SUITES, _jsonable, run_suite

SCHEMA_VERSION = "1"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    error_estimates: dict = field(default_factory=dict)
    spec_hash: Optional[str] = None
    wall_time: float = 0.0
    status: str = "pass"
    exit_code: int = EXIT_PASS
    message: Optional[str] = None

    def to_json(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "error_estimates": self.error_estimates,
            "spec_hash": self.spec_hash,
            "wall_time": self.wall_time,
            "status": self.status,
            "exit_code": self.exit_code,
        }
        if self.message is not None:
            d["message"] = self.message
        return d

    @classmethod
    def from_json(cls, d: dict) -> "RunReport":
        d = dict(d)
        d.pop("schema_version")
        return cls(**d)


def load_schema() -> dict:
    return json.loads(resources.files("qszego").joinpath("schemas/run_report.v1.json").read_text())


def validate_report(d: dict) -> None:
    jsonschema.validate(d, load_schema())


def exact_json(x) -> dict:
    """Exact value as ``{"coeff": "p/q", "pi_half_exponent": k, "float": ...}``."""
    if not isinstance(x, C.PiScaled):
        x = C.PiScaled.rational(Fraction(x))
    return {**x.to_json(), "float": float(x)}


def parse_point(text: str, n: int) -> SiegelPoint:
    try:
        xs = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse point {text!r}: {exc}") from exc
    if len(xs) != 4 * (n + 1):
        raise UsageError(f"point needs 4(n+1) = {4 * (n + 1)} comma separated coordinates, got {len(xs)}")
    from .quaternion import Quaternion

    quats = [Quaternion(*xs[i : i + 4]) for i in range(0, len(xs), 4)]
    return SiegelPoint(quats[0], tuple(quats[1:]))


# --- commands ---------------------------------------------------------------


def cmd_constants(n: int) -> RunReport:
    rep = RunReport("constants", {"n": n})
    try:
        alphas = [C.alpha(n, k) for k in range(2 * n + 1)]
        K = C.K_sum(n)
        c = C.c_paper(n)
    except RangeError as exc:
        raise UsageError(str(exc)) from exc
    rep.outputs = {
        "alpha": [_jsonable(a) for a in alphas],
        "K": exact_json(K),
        "c_paper": exact_json(c),
        "F_e": exact_json(C.F_e_closed(n)),
    }
    return rep


def cmd_kernel_eval(n: int, q: SiegelPoint, p: SiegelPoint, normalization: str) -> RunReport:
    rep = RunReport("kernel-eval", {"n": n, "q": _point_json(q), "p": _point_json(p), "normalization": normalization})
    ctx = KernelContext(n)
    try:
        sigma = kernel_arg(q, p)
    except SizeMismatch as exc:
        raise UsageError(str(exc)) from exc
    s = s_unnorm(sigma, n) if sigma != 0 else None
    if s is None:
        raise Singular("kernel argument vanishes")
    try:
        S = kernel_S(q, p, ctx, normalization)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep.outputs = {
        "sigma": [_exact_or_float(x) for x in sigma.components],
        "s_unnorm": [_exact_or_float(x) for x in s.components],
        "S": [_exact_or_float(x) for x in S.components],
        "S_float": [float(x) for x in S.components],
    }
    return rep


def cmd_verify(suite: str, n: int, spec: Optional[QuadratureSpec], normalization: str, seed: int, rel_tol: Optional[float]) -> RunReport:
    inputs = {"suite": suite, "n": n, "seed": seed, "normalization": normalization}
    if spec is not None:
        inputs["spec"] = spec.to_json()
    rep = RunReport("verify", inputs)
    if suite == "reproduce":
        from .suites import reproduce_suite

        res = reproduce_suite(n, seed, spec, normalization, threshold=rel_tol or 1e-3)
    else:
        res = run_suite(suite, n, seed, spec, normalization)
    rep.outputs = {"passed": res.passed, "checks": [c.to_json() for c in res.checks]}
    rep.error_estimates = {c.name: _float_or_none(c.info.get("abs_error_estimate")) for c in res.checks if "abs_error_estimate" in c.info}
    rep.spec_hash = res.spec_hash
    if not res.passed:
        rep.status, rep.exit_code = "fail", EXIT_FAIL
    return rep


def _float_or_none(v):
    return None if v is None else float(v)


def _exact_or_float(x):
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return {"exact": f"{f.numerator}/{f.denominator}", "float": float(f)}
    return {"float": float(x)}


def _point_json(q: SiegelPoint) -> list:
    return [str(Fraction(x)) if isinstance(x, (int, Fraction)) else float(x) for s in q.slots() for x in s.components]


# --- argument handling ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_output(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON RunReport (default)")
    g.add_argument("--text", dest="fmt", action="store_const", const="text", help="human-readable summary")
    p.set_defaults(fmt="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qszego", description="Cauchy-Szego kernel of the quaternionic Siegel upper half space.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="exact normalisation constant and its ingredients")
    p.add_argument("--n", type=int, required=True)
    _add_output(p)

    p = sub.add_parser("kernel-eval", help="evaluate the kernel at a pair of points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", required=True, help="4(n+1) comma separated coordinates (fractions allowed)")
    p.add_argument("--p", required=True, help="4(n+1) comma separated coordinates (fractions allowed)")
    p.add_argument("--normalization", choices=NORMALIZATIONS, default="paper")
    _add_output(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--normalization", choices=NORMALIZATIONS, default="empirical")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rel-tol", type=float, default=None, help="reproduction threshold and quadrature target")
    p.add_argument("--method", choices=METHODS, default=None)
    p.add_argument("--radial-nodes", type=int, default=None)
    p.add_argument("--angular-nodes", type=int, default=None)
    p.add_argument("--mc-samples", type=int, default=None)
    _add_output(p)
    return parser


def _spec_from_args(args) -> Optional[QuadratureSpec]:
    overrides = {
        "method": args.method,
        "radial_nodes": args.radial_nodes,
        "angular_nodes": args.angular_nodes,
        "mc_samples": args.mc_samples,
        "target_rel_tol": args.rel_tol,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if not overrides and args.seed == 0:
        return None
    from .suites import default_reproduce_spec

    base = default_reproduce_spec(max(args.n, 0), args.seed).to_json()
    base.update(overrides)
    base["seed"] = args.seed
    if base["truncation_radius"] == "inf":
        base["truncation_radius"] = float("inf")
    try:
        return QuadratureSpec(**base)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def render_text(rep: RunReport) -> str:
    lines = [f"{rep.command}: {rep.status} (exit {rep.exit_code}, {rep.wall_time:.2f} s)"]
    if rep.message:
        lines.append(f"  {rep.message}")
    out = rep.outputs
    if rep.command == "constants" and out:
        c = out["c_paper"]
        lines.append(f"  c_paper = {c['coeff']} * pi^({c['pi_half_exponent']}/2) = {c['float']:.12g}")
        K = out["K"]
        lines.append(f"  K = {K['coeff']}")
        lines.append("  alpha = " + ", ".join(out["alpha"]))
    elif rep.command == "kernel-eval" and out:
        for key in ("sigma", "s_unnorm", "S"):
            comps = [v.get("exact", f"{v['float']:.12g}") for v in out[key]]
            lines.append(f"  {key} = ({', '.join(comps)})")
    elif rep.command == "verify" and out:
        for c in out["checks"]:
            tag = "info" if c["informational"] else ("PASS" if c["passed"] else "FAIL")
            lines.append(f"  [{tag}] {c['name']}: measured={c['measured']} threshold={c['threshold']}")
    return "\n".join(lines)


def main(argv=None) -> int:
    t0 = time.perf_counter()
    parser = build_parser()
    command = "verify"
    fmt = "json"
    try:
        args = parser.parse_args(argv)
        command, fmt = args.command, args.fmt
        if args.n < 0:
            raise UsageError("n must be nonnegative")
        if command == "constants":
            rep = cmd_constants(args.n)
        elif command == "kernel-eval":
            rep = cmd_kernel_eval(args.n, parse_point(args.q, args.n), parse_point(args.p, args.n), args.normalization)
        else:
            rep = cmd_verify(args.suite, args.n, _spec_from_args(args), args.normalization, args.seed, args.rel_tol)
    except UsageError as exc:
        rep = RunReport(command, {"argv": list(sys.argv[1:] if argv is None else argv)}, status="error", exit_code=EXIT_USAGE, message=str(exc))
    except (Singular, NumericalFailure) as exc:
        rep = RunReport(command, {"argv": list(sys.argv[1:] if argv is None else argv)}, status="error", exit_code=EXIT_NUMERICAL, message=f"{type(exc).__name__}: {exc}")
    except (SzegoError, ValueError) as exc:
        rep = RunReport(command, {"argv": list(sys.argv[1:] if argv is None else argv)}, status="error", exit_code=EXIT_USAGE, message=str(exc))
    rep.wall_time = time.perf_counter() - t0
    doc = rep.to_json()
    validate_report(doc)
    if rep.exit_code == EXIT_USAGE:
        print(f"qszego: error: {rep.message}", file=sys.stderr)
    print(json.dumps(doc, indent=2) if fmt == "json" else render_text(rep))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
