"""Command-line front end.

    homhardy area --d 4
    homhardy tau --d 3 --p 1.25 --weight constant:1
    homhardy report --d 3 --p 1.125 --weight cap:1,1.5708

Weights: ``constant:<c>``, ``cap:<a>,<theta_c>``, ``polar_power:<a>,<beta>``,
``cosine_series:<c0>,<c1>,...`` or ``tabulated:@<file.json>``.

Exit codes: 0 success, 2 invalid input, 3 an inequality check failed,
4 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from . import alpha_mu, constants, rearrangement, spectral, sphere, verifier, weights
from .errors import ConvergenceError, HardyError, UsageError

EXIT_OK, EXIT_INVALID, EXIT_FAILED, EXIT_NONCONVERGED = 0, 2, 3, 4

REPORT_COLUMNS = ("theorem_id", "d", "p", "kappa", "nu", "weight_desc", "lp_norm", "tau", "nu0",
                  "lambda1", "mu", "alpha", "lhs", "rhs", "gap", "holds")

REPORT_L = 64
REPORT_MAX_L = 1024
REPORT_EPS = 1e-2
CURVE_MAX_RATIO = 40.0


# --- weight parsing ---------------------------------------------------------------

def _numbers(kind: str, body: str, names: Sequence[str]) -> List[float]:
    parts = [s for s in body.split(",") if s.strip()]
    if names and len(parts) != len(names):
        raise UsageError(f"{kind}: expected {len(names)} value(s) '{','.join(names)}', got {body!r}")
    out = []
    for name, s in zip(names or [f"c{i}" for i in range(len(parts))], parts):
        try:
            out.append(float(s))
        except ValueError:
            raise UsageError(f"{kind}: field {name!r} is not a number: {s!r}") from None
    return out


def load_weight_file(path: str) -> weights.WeightSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read weight file {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"weight file {path!r} is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict) or data.get("type") != "tabulated":
        raise UsageError(f"weight file {path!r}: field 'type' must be \"tabulated\"")
    for key in ("angles", "values"):
        if not isinstance(data.get(key), list):
            raise UsageError(f"weight file {path!r}: field {key!r} must be a list of numbers")
    return weights.Tabulated(tuple(map(float, data["angles"])), tuple(map(float, data["values"])))


def parse_weight(text: str) -> weights.WeightSpec:
    kind, sep, body = text.partition(":")
    if not sep:
        raise UsageError(f"weight {text!r}: expected '<type>:<parameters>'")
    kind = kind.strip().lower()
    if kind == "constant":
        return weights.Constant(*_numbers(kind, body, ("c",)))
    if kind == "cap":
        return weights.CapIndicator(*_numbers(kind, body, ("amplitude", "angle")))
    if kind == "polar_power":
        return weights.PolarPower(*_numbers(kind, body, ("amplitude", "beta")))
    if kind == "cosine_series":
        return weights.CosineSeries(tuple(_numbers(kind, body, ())))
    if kind == "tabulated":
        if not body.startswith("@"):
            raise UsageError("tabulated: expected '@<file.json>'")
        return load_weight_file(body[1:])
    raise UsageError(f"unknown weight type {kind!r}; expected constant, cap, polar_power, "
                     "cosine_series or tabulated")


# --- output -------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_rows(rows: List[dict], columns: Sequence[str], fmt: str, out) -> None:
    if fmt == "json":
        json.dump([{c: r.get(c) for c in columns} for r in rows], out, indent=2)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])


def read_report_json(text: str) -> List[verifier.HardyReport]:
    return [verifier.HardyReport.from_dict(d) for d in json.loads(text)]


# --- the report pipeline ------------------------------------------------------------

@dataclass
class ReportResult:
    rows: List[dict] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    nonconverged: bool = False

    @property
    def all_hold(self) -> bool:
        return all(r["holds"] for r in self.rows)


def _report_row(rep: verifier.HardyReport, lambda1=None) -> dict:
    row = rep.to_dict()
    if lambda1 is not None:
        row["lambda1"] = lambda1
    return row


def _covering_curve(d: int, p: float, alpha_needed: float, mu_needed: float) -> alpha_mu.AlphaMuCurve:
    th = alpha_mu.linear_threshold(d, p)
    ratio = max(1.5, 1.05 * alpha_needed / th)
    while True:
        n = int(min(48, max(8, 4 * math.log2(ratio) + 8)))
        curve = alpha_mu.build_curve(d, p, n_samples=n, max_ratio=ratio)
        if curve.max_mu >= mu_needed or ratio >= CURVE_MAX_RATIO:
            return curve
        ratio = min(CURVE_MAX_RATIO, 2 * ratio)


def _theorem_constants(d, p, norm, theorem_id, nu, curve):
    if theorem_id == "main":
        return constants.constants_main(d, p, norm)
    if theorem_id == "main2":
        return constants.constants_main2(d, p, norm)
    return constants.constants_theorem4(d, p, nu, norm, curve)


def _scaled(c: constants.HardyConstants, factor: float) -> constants.HardyConstants:
    if factor == 1.0:
        return c
    return constants.HardyConstants(**{**c.__dict__, "tau": c.tau * factor})


def run_report(d: int, p: float, phi: weights.WeightSpec, nu: float = 1.0,
               kappa: Optional[float] = None, tau_scale: float = 1.0,
               theorems: Optional[Sequence[str]] = None, L: int = REPORT_L,
               max_L: int = REPORT_MAX_L) -> ReportResult:
    """Norms, lambda1, curve, constants and Hardy gaps for every applicable theorem.

    ``tau_scale`` multiplies every tau before the checks (negative control).
    """
    out = ReportResult()
    norm = weights.lp_norm(phi, p, d)
    if not norm > 0:
        raise UsageError("weight has zero L^p norm; nothing to verify")
    S = sphere.surface_area(d)
    cand = theorems or ("main", "main2", "theorem4")
    todo = [t for t in cand if weights.admissible(phi, d, p, t)[0]]
    if theorems and len(todo) < len(theorems):
        bad = [t for t in theorems if t not in todo]
        raise UsageError(f"p={p} not admissible for {bad} at d={d}")
    classical = (d - 2) ** 2 / 4
    curve = None
    if "theorem4" in todo or tau_scale != 1.0:
        th = alpha_mu.linear_threshold(d, p)
        curve = _covering_curve(d, p, max(classical * nu, th), tau_scale * classical)
    for tid in todo:
        base = _theorem_constants(d, p, norm, tid, nu, curve)
        cst = _scaled(base, tau_scale)
        eig = spectral.lowest_eigenvalue(phi.scaled(cst.tau), d, L, max_L=max_L)
        trials = [verifier.TrialFunction(verifier.Gaussian(1.0), verifier.constant_mode(d)),
                  verifier.TrialFunction(verifier.Gaussian(1.0), verifier.basis_mode(d, 1)),
                  verifier.TrialFunction(verifier.CompactBump(0.5, 2.0), verifier.basis_mode(d, 2)),
                  verifier.TrialFunction(verifier.PowerCutoff(REPORT_EPS, d), verifier.eigen_profile(eig))]
        for u in trials:
            out.rows.append(_report_row(verifier.hardy_gap(u, phi, d, p, tid, cst), eig.lambda1))
        if not eig.converged:
            out.nonconverged = True
            out.warnings.append(f"{tid}: lambda1 not converged at L={eig.L_used}; lemma row skipped")
        else:
            u = trials[-1]
            lem = verifier.lemma_decomposition_check(u, phi, cst.tau, eig)
            out.rows.append({"theorem_id": "lemma", "d": d, "p": p, "kappa": 1.0, "nu": cst.nu,
                             "weight_desc": phi.describe(), "lp_norm": norm, "tau": cst.tau,
                             "nu0": cst.nu0, "lambda1": eig.lambda1, "mu": None, "alpha": None,
                             "lhs": lem.lhs, "rhs": lem.rhs, "gap": lem.gap, "holds": lem.holds,
                             "trial": u.describe()})
        # eigenvalue bound for the potential tau Phi
        mu = cst.tau * norm / S ** (1 / p)
        th = alpha_mu.linear_threshold(d, p)
        if mu <= th * (1 + 1e-12):
            alpha = min(mu, th)
        elif curve is not None and mu <= curve.max_mu:
            alpha = curve.alpha(mu)
        else:
            out.warnings.append(f"{tid}: mu={mu:.6g} beyond the sampled curve; bound row skipped")
            continue
        slack = alpha - abs(eig.lambda1)
        out.rows.append({"theorem_id": "corollary", "d": d, "p": p, "kappa": 1.0, "nu": cst.nu,
                         "weight_desc": phi.describe(), "lp_norm": norm, "tau": cst.tau,
                         "nu0": cst.nu0, "lambda1": eig.lambda1, "mu": mu, "alpha": alpha,
                         "lhs": alpha, "rhs": abs(eig.lambda1), "gap": slack,
                         "holds": slack >= -spectral.BOUND_TOL, "trial": ""})
    if kappa is None and p >= d / 2:
        kappa = d / (2 * p)
    if kappa is not None:
        fnorm = weights.lp_norm(phi, d / (2 * kappa), d)
        cst = _scaled(constants.constants_fractional(d, kappa, fnorm), tau_scale)
        out.rows.append(_report_row(verifier.fractional_gaussian_check(d, kappa, phi, cst)))
    return out


# --- commands -----------------------------------------------------------------------

def _emit(args, rows, columns):
    buf = io.StringIO()
    write_rows(rows, columns, args.format, buf)
    text = buf.getvalue()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scalar(args, name, value):
    if args.format == "json" or args.output:
        _emit(args, [{name: value}], (name,))
    else:
        print(_fmt(float(value)))


def cmd_area(args):
    _scalar(args, "area", sphere.surface_area(args.d))
    return EXIT_OK


def cmd_norm(args):
    _scalar(args, "lp_norm", weights.lp_norm(parse_weight(args.weight), args.p, args.d))
    return EXIT_OK


def _default_theorem(d, p):
    for tid in ("main", "main2"):
        if p in weights.p_range(d, tid):
            return tid
    raise UsageError(f"p={p} is in neither the main range {weights.p_range(d, 'main').describe()} "
                     f"nor {weights.p_range(d, 'main2').describe()} for d={d}; pass --theorem")


def cmd_tau(args):
    phi = parse_weight(args.weight)
    tid = args.theorem or ("fractional" if args.kappa is not None else _default_theorem(args.d, args.p))
    if tid == "fractional":
        if args.kappa is None:
            raise UsageError("--theorem fractional needs --kappa")
        c = constants.constants_fractional(args.d, args.kappa,
                                           weights.lp_norm(phi, args.d / (2 * args.kappa), args.d))
    else:
        ok, rng = weights.admissible(phi, args.d, args.p, tid)
        if not ok:
            raise UsageError(f"p={args.p} with weight {phi.describe()} not admissible for {tid}: "
                             f"range {rng.describe()}")
        norm = weights.lp_norm(phi, args.p, args.d)
        curve = None
        if tid == "theorem4":
            curve = _covering_curve(args.d, args.p, args.nu * (args.d - 2) ** 2 / 4, 0.0)
        c = _theorem_constants(args.d, args.p, norm, tid, args.nu, curve)
    if args.format == "json" or args.output:
        _emit(args, [c.to_dict()], tuple(c.to_dict()))
    else:
        print(_fmt(c.tau))
    return EXIT_OK


def cmd_eig(args):
    phi = parse_weight(args.weight)
    r = spectral.lowest_eigenvalue(phi, args.d, args.L, max_L=args.max_L)
    row = {"d": args.d, "weight_desc": phi.describe(), "lambda1": r.lambda1,
           "lambda1_coarse": r.lambda1_coarse, "L_used": r.L_used, "residual": r.residual,
           "converged": r.converged}
    _emit(args, [row], tuple(row))
    return EXIT_OK if r.converged else EXIT_NONCONVERGED


def cmd_curve(args):
    c = alpha_mu.build_curve(args.d, args.p, n_samples=args.samples, max_ratio=args.max_ratio,
                             endpoint=args.endpoint)
    rows = [{"alpha": c.threshold * t, "mu": c.threshold * t, "residual": 0.0}
            for t in (0.0, 0.5)] + c.rows()
    _emit(args, rows, ("alpha", "mu", "residual"))
    return EXIT_OK


def cmd_rearrange(args):
    phi = parse_weight(args.weight)
    w = rearrangement.HomogeneousWeight(phi, args.kappa, args.d)
    coeff = rearrangement.rearranged_weight(w).coefficient
    dev = rearrangement.numeric_rearrangement_check(w, [0.25, 0.5, 1.0, 2.0, 4.0])
    row = {"d": args.d, "kappa": args.kappa, "weight_desc": phi.describe(),
           "coefficient": coeff, "layer_cake_deviation": dev}
    _emit(args, [row], tuple(row))
    return EXIT_OK


def _run_pipeline(args, theorems):
    phi = parse_weight(args.weight)
    res = run_report(args.d, args.p, phi, nu=args.nu, kappa=args.kappa,
                     tau_scale=args.tau_scale, theorems=theorems)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(args, res.rows, REPORT_COLUMNS + (("trial",) if args.format == "json" else ()))
    if not res.all_hold:
        return EXIT_FAILED
    if res.nonconverged:
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_verify(args):
    return _run_pipeline(args, [args.theorem])


def cmd_report(args):
    return _run_pipeline(args, None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homhardy", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, d=True):
        sp = sub.add_parser(name, help=help_text)
        if d:
            sp.add_argument("--d", type=int, required=True, help="ambient dimension")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", help="write to this file instead of stdout")
        sp.set_defaults(func=func)
        return sp

    add("area", cmd_area, "surface area of S^{d-1}")
    sp = add("norm", cmd_norm, "L^p norm of a weight")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--weight", required=True)
    sp = add("tau", cmd_tau, "Hardy constant tau")
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--weight", required=True)
    sp.add_argument("--theorem", choices=("main", "main2", "theorem4", "fractional"))
    sp.add_argument("--nu", type=float, default=1.0)
    sp.add_argument("--kappa", type=float, default=None)
    sp = add("eig", cmd_eig, "lowest eigenvalue of -Laplace_Beltrami - Phi")
    sp.add_argument("--weight", required=True)
    sp.add_argument("--L", type=int, default=spectral.DEFAULT_L)
    sp.add_argument("--max-L", dest="max_L", type=int, default=None)
    sp = add("curve", cmd_curve, "sampled mu(alpha) curve")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--samples", type=int, default=48)
    sp.add_argument("--max-ratio", dest="max_ratio", type=float, default=40.0)
    sp.add_argument("--endpoint", action="store_true")
    sp = add("rearrange", cmd_rearrange, "decreasing rearrangement of Phi/|x|^{2 kappa}")
    sp.add_argument("--weight", required=True)
    sp.add_argument("--kappa", type=float, default=1.0)
    for name, func, text in (("verify", cmd_verify, "Hardy gaps for one theorem"),
                             ("report", cmd_report, "full verification pipeline")):
        sp = add(name, func, text)
        sp.add_argument("--p", type=float, required=True)
        sp.add_argument("--weight", required=True)
        sp.add_argument("--nu", type=float, default=1.0)
        sp.add_argument("--kappa", type=float, default=None)
        sp.add_argument("--tau-scale", dest="tau_scale", type=float, default=1.0,
                        help="multiply every tau (negative control)")
        if name == "verify":
            sp.add_argument("--theorem", choices=("main", "main2", "theorem4"), required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "tau" and args.p is None and args.kappa is None:
        parser.error("tau needs --p (or --kappa with --theorem fractional)")
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except (HardyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
