"""Command-line front end.

Verbs:

    radext analyze      constants l, L, Lambda, K, alpha_gamma + star bounds
    radext verify       theorem-verification report (exit 0 iff no check fails)
    radext grid         dilatation-field CSV over a polar grid of the disk
    radext curves list  builtin curve registry
    radext parse-check  parse an expression and show its derivative

Curves come either from the builtin registry (--builtin NAME with repeated
--param k=v) or as expression text: --r EXPR gives the polar radius, an
optional --psi EXPR reparametrizes it by a circle homeomorphism lift (the
boundary map is then r(psi(t)) e^{i psi(t)}).

Exit codes: 0 success; 1 usage error; 2 curve/expression validation
failure; 3 degenerate (orientation-reversing) differential; 4 internal
numerical failure.
"""

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import dsl
from .bounds import ellipse_K_closed_form, star_bounds
from .curves import (
    BoundaryMap,
    CircleHomeomorphism,
    ParametricCurve,
    PolarCurve,
    builtin,
    builtin_registry,
    compose,
    tangent_profile,
)
from .errors import (
    ArityMismatch,
    DegenerateCurve,
    DegenerateDifferential,
    DomainError,
    ExprSyntaxError,
    GridTooLarge,
    InvalidAxes,
    InvalidParams,
    InvalidWidth,
    RadextError,
    UnboundedL,
    UnboundParameter,
    UnknownCurve,
    UnknownFunction,
)
from .extension import field_grid
from .lipschitz import lipschitz_report
from .periodic import TWO_PI, PeriodicFunction
from .verify import verify_curve

_CSV_HEADER = "r,t,x,y,abs_wz,abs_wzbar,op_norm,jacobian,dilatation,mu_abs"

_VALIDATION_ERRORS = (
    ExprSyntaxError, UnknownFunction, ArityMismatch, DomainError,
    UnboundParameter, DegenerateCurve, InvalidParams, UnknownCurve,
    InvalidAxes, InvalidWidth, UnboundedL,
)


@dataclass
class RunConfig:
    """Parsed command settings shared by the verbs."""
    builtin_name: str | None = None
    params: dict = field(default_factory=dict)
    r_expr: str | None = None
    psi_expr: str | None = None
    grid_n: int = 4096
    refine: int = 1
    tol: float | None = None
    out: str | None = None
    fmt: str = "json"
    seed: int | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(json.dumps({"error": "UsageError", "message": message}),
              file=sys.stderr)
        sys.exit(1)


def _add_curve_flags(sub):
    sub.add_argument("--builtin", metavar="NAME",
                     help="builtin curve: " + ", ".join(sorted(builtin_registry())))
    sub.add_argument("--param", metavar="K=V", action="append", default=[],
                     help="curve parameter (repeatable)")
    sub.add_argument("--r", metavar="EXPR", help="polar radius r(t) as expression text")
    sub.add_argument("--psi", metavar="EXPR",
                     help="circle homeomorphism lift psi(t); default identity")
    sub.add_argument("--grid-n", type=int, default=4096, metavar="N",
                     help="analysis grid size in [64, 65536] (default 4096)")
    sub.add_argument("--refine", type=int, default=1, metavar="N",
                     help="local refinement passes; 0 disables (default 1)")
    sub.add_argument("--tol", type=float, default=None, metavar="X",
                     help="tolerance override for verification checks")
    sub.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    sub.add_argument("--format", dest="fmt", choices=("json", "csv"),
                     default="json", help="output format")
    sub.add_argument("--seed", type=int, default=None, metavar="N",
                     help="seed for random curve families")


def _parse_params(pairs):
    out = {}
    for item in pairs:
        if "=" not in item:
            raise InvalidParams(f"--param needs K=V, got {item!r}")
        key, _, val = item.partition("=")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise InvalidParams(f"parameter {key!r} has non-numeric value {val!r}") \
                from None
    return out


def make_config(args):
    cfg = RunConfig(builtin_name=args.builtin, params=_parse_params(args.param),
                    r_expr=args.r, psi_expr=args.psi, grid_n=args.grid_n,
                    refine=args.refine, tol=args.tol, out=args.out,
                    fmt=args.fmt, seed=args.seed)
    if not (64 <= cfg.grid_n <= 65536):
        raise GridTooLarge(f"grid-n must lie in [64, 65536], got {cfg.grid_n}")
    return cfg


def build_curve(cfg):
    """Curve object from a RunConfig; psi defaults to the identity so a
    bare --r gives the polar parametrization."""
    if cfg.builtin_name and (cfg.r_expr or cfg.psi_expr):
        raise InvalidParams("give either --builtin or --r/--psi, not both")
    if cfg.builtin_name:
        return builtin(cfg.builtin_name, **cfg.params)
    if not (cfg.r_expr or cfg.psi_expr):
        raise InvalidParams("no curve given: use --builtin NAME or --r EXPR")
    r_text = cfg.r_expr or "1"
    r = PeriodicFunction.from_expression(r_text, params=cfg.params)
    polar = PolarCurve(r, curve_id=f"r={r_text}")
    if not cfg.psi_expr:
        return polar
    psi = CircleHomeomorphism(
        PeriodicFunction.from_expression(cfg.psi_expr, params=cfg.params,
                                         period_offset=TWO_PI),
        curve_id=f"psi={cfg.psi_expr}")
    bmap = compose(polar, psi)
    bmap.curve_id = f"r={r_text},psi={cfg.psi_expr}"
    return bmap


# --- output helpers ----------------------------------------------------

def _write_text(text, out_path):
    if out_path:
        directory = os.path.dirname(os.path.abspath(out_path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, out_path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        sys.stdout.write(text)


def _emit_json(obj, out_path):
    _write_text(json.dumps(obj, indent=2) + "\n", out_path)


def _error_exit(exc, code):
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
          file=sys.stderr)
    return code


# --- verbs --------------------------------------------------------------

def _ellipse_flags(cfg, measured_L, flags):
    a, b = cfg.params.get("a", 1.0), cfg.params.get("b", 1.0)
    ellipse_K_closed_form(a, b)
    flags.append("eqK-radicand-discrepancy-check")
    printed = 4 * (a ** 2 + b ** 2) ** 3 / (27 * a ** 2 * b ** 2) \
        if a ** 2 >= 2 * b ** 2 else a
    if abs(printed - measured_L ** 2) <= 1e-3 * max(1.0, printed) \
            and abs(printed - measured_L) > 1e-6:
        flags.append("ellipse-lip-printed-is-square")


def cmd_analyze(cfg):
    """Constants report as a JSON document with fields
    {curve, l, L, Lambda, K_qc, alpha_gamma, star_bounds, flags}."""
    curve = build_curve(cfg)
    curve.require_valid()
    rep = lipschitz_report(curve, cfg.grid_n, refine=cfg.refine > 0)
    flags = []

    alpha_gamma = None
    sb = None
    if not isinstance(curve, ParametricCurve):
        alpha_gamma = tangent_profile(curve, cfg.grid_n).alpha_gamma
        try:
            sb = star_bounds(curve, cfg.grid_n).to_dict()
        except UnboundedL:
            flags.append("unbounded-L")
    if rep.K_qc is None:
        flags.append("orientation-reversing")
    if cfg.builtin_name == "ellipse":
        _ellipse_flags(cfg, rep.L, flags)

    doc = {
        "curve": curve.curve_id,
        "l": rep.l,
        "L": rep.L,
        "Lambda": rep.Lambda,
        "K_qc": rep.K_qc,
        "alpha_gamma": alpha_gamma,
        "star_bounds": sb,
        "flags": flags,
    }
    _emit_json(doc, cfg.out)
    return 0


def cmd_verify(cfg):
    """Theorem verification; exit 0 iff no check reports 'fail'
    (flagged checks do not fail the run)."""
    curve = build_curve(cfg)
    curve.require_valid()
    report = verify_curve(curve, cfg.grid_n, cfg.tol)
    _emit_json(report.to_dict(), cfg.out)
    return 0 if report.passed else 4


def cmd_grid(cfg, radial_n, angular_n):
    """Dilatation-field CSV, rows in row-major order (r outer, t inner),
    17 significant digits."""
    if radial_n * angular_n > 10 ** 7:
        raise GridTooLarge(f"radial_n * angular_n capped at 1e7, "
                           f"got {radial_n * angular_n}")
    curve = build_curve(cfg)
    curve.require_valid()
    data = field_grid(curve, radial_n, angular_n)
    cols = _CSV_HEADER.split(",")
    lines = [_CSV_HEADER]
    stacked = np.column_stack([data[c] for c in cols])
    for row in stacked:
        lines.append(",".join(f"{v:.17g}" for v in row))
    _write_text("\n".join(lines) + "\n", cfg.out)
    return 0


def cmd_curves_list(out_path):
    reg = builtin_registry()
    _emit_json([{"name": name, "params": desc} for name, desc in
                sorted(reg.items())], out_path)
    return 0


def cmd_parse_check(text, out_path):
    expr = dsl.parse(text)
    doc = {
        "ok": True,
        "expression": dsl.to_text(expr),
        "derivative": dsl.to_text(dsl.diff(expr)),
        "parameters": sorted(dsl.free_params(expr)),
    }
    _emit_json(doc, out_path)
    return 0


def make_parser():
    parser = _Parser(prog="radext",
                     description="radial extensions of starlike Jordan curves")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="compute constants and bounds")
    _add_curve_flags(p_analyze)

    p_verify = sub.add_parser("verify", help="run the theorem checks")
    _add_curve_flags(p_verify)

    p_grid = sub.add_parser("grid", help="export the dilatation field as CSV")
    _add_curve_flags(p_grid)
    p_grid.add_argument("--radial-n", type=int, default=1, metavar="N")
    p_grid.add_argument("--angular-n", type=int, default=4096, metavar="N")

    p_curves = sub.add_parser("curves", help="builtin curve registry")
    curves_sub = p_curves.add_subparsers(dest="curves_command", required=True)
    p_list = curves_sub.add_parser("list", help="list builtin curves")
    p_list.add_argument("--out", metavar="PATH")

    p_pc = sub.add_parser("parse-check", help="parse an expression")
    p_pc.add_argument("expr", metavar="EXPR")
    p_pc.add_argument("--out", metavar="PATH")

    return parser


def run(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "curves":
            return cmd_curves_list(args.out)
        if args.command == "parse-check":
            return cmd_parse_check(args.expr, args.out)
        cfg = make_config(args)
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "grid":
            return cmd_grid(cfg, args.radial_n, args.angular_n)
        parser.error(f"unknown command {args.command!r}")
    except GridTooLarge as exc:
        return _error_exit(exc, 1)
    except DegenerateDifferential as exc:
        return _error_exit(exc, 3)
    except _VALIDATION_ERRORS as exc:
        return _error_exit(exc, 2)
    except RadextError as exc:
        return _error_exit(exc, 4)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        return _error_exit(exc, 4)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
