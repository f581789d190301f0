"""Command-line entry point: ``charlier-sobolev <subcommand> [options]``.

Exit codes: 0 success, 1 failed check or slope, 2 invalid parameters,
3 Laguerre-Freud divergence in ``coeffs``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .arith import PrecisionPolicy, relative_error
from .asymptotics import (
    DegenerateFit,
    alpha3_estimate,
    alpha_residuals,
    beta_residuals,
    d2_estimate,
    d3_estimate,
    fit_order,
    gamma_residuals,
    limit_checks,
    omega_residuals,
    sigma_coeffs,
    sigma_difference_residuals,
)
from .charlier import DivergedFromOracle, build_coeffs_laguerre_freud, build_Pn_gram
from .families import build_families
from .functional import MomentTable, Params
from .sobolev import build_Sn
from .verify import run_verify

EXPECTED_ORDER = -4
SLOPE_SLACK = 0.5


class UsageError(ValueError):
    """Invalid configuration; reported with exit code 2."""


def digits_for(bits: int) -> int:
    return max(1, int(bits * 3 // 10) - 10)


class Formatter:
    """Renders reals with a fixed number of significant decimal digits."""

    def __init__(self, policy: PrecisionPolicy):
        self.policy = policy
        self.digits = digits_for(policy.working_bits)

    def text(self, v):
        if v is None:
            return None
        if isinstance(v, bool):
            return v
        if isinstance(v, int):
            return str(v)
        if isinstance(v, Fraction):
            v = self.policy.real(v)
        if isinstance(v, float):
            return repr(v)
        if not v:
            return "0"
        return self.policy.ctx.nstr(v, self.digits, min_fixed=-4, max_fixed=16)

    def json(self, v):
        """Plain JSON number when at most 15 significant digits survive, else a string."""
        if v is None or isinstance(v, bool):
            return v
        if isinstance(v, int):
            return v if abs(v) < 10**15 else str(v)
        if isinstance(v, float):
            return v
        s = self.text(v)
        mantissa = s.lstrip("-").split("e")[0].replace(".", "").lstrip("0")
        if len(mantissa) > 15:
            return s
        out = float(s)
        return int(out) if out.is_integer() and abs(out) < 10**15 and "e" not in s else out


def parse_window(text: str) -> tuple:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window must be LO:HI with integers") from None
    if not 1 <= lo < hi:
        raise argparse.ArgumentTypeError("window needs 1 <= LO < HI")
    if hi - lo < 4:
        raise argparse.ArgumentTypeError("window needs at least 5 points")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--b", default="1/2", help="b > -1 (decimal or p/q, default 1/2)")
    common.add_argument("--z", default="1", help="z > 0 (default 1)")
    common.add_argument("--lambda", dest="lam", default="1", help="lambda >= 0 (default 1)")
    common.add_argument("--n", type=int, default=20, help="largest index n_max (default 20)")
    common.add_argument("--precision", type=int, default=512, help="working bits (default 512)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", help="write output to FILE instead of stdout")

    parser = argparse.ArgumentParser(
        prog="charlier-sobolev",
        description="Generalized Charlier and Delta-Sobolev orthogonal polynomials in high precision.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[common], help="moments nu_n and Gram matrices")
    p.add_argument("--matrices", action="store_true", help="include nu_{i,j} and mu_{i,j} (json only)")

    p = sub.add_parser("coeffs", parents=[common], help="beta, gamma, h, htilde, a, xi")
    p.add_argument("--route", choices=("gram", "lf", "both"), default="gram")

    p = sub.add_parser("polys", parents=[common], help="coefficients of P_n and S_n")
    p.add_argument("--basis", choices=("factorial", "monomial", "both"), default="both")

    sub.add_parser("verify", parents=[common], help="run the invariant suite")

    p = sub.add_parser("asymptotics", parents=[common], help="large-n expansion fits")
    p.add_argument("--window", type=parse_window, default=(30, 60), help="fit window LO:HI (default 30:60)")
    p.add_argument("--x", default="-1", help="evaluation point for P_n/phi_n and S_n/phi_n (default -1)")
    p.add_argument("--plateau", type=int, default=80, help="n for the plateau estimates (default 80)")

    p = sub.add_parser("bench", parents=[common], help="Laguerre-Freud digit loss against the Gram route")
    p.add_argument("--sweep", help="comma-separated list of working bits (default: --precision)")
    return parser


def make_config(args):
    if args.n < 1:
        raise UsageError("n must be at least 1")
    if args.precision < 64:
        raise UsageError("precision must be at least 64 bits")
    if args.threads < 1:
        raise UsageError("threads must be at least 1")
    params = Params(args.b, args.z, args.lam)
    return params, PrecisionPolicy.from_bits(args.precision)


def report(params, policy, checks, tables, fmt: Formatter) -> dict:
    return {
        "params": params.as_dict(),
        "precision_bits": policy.working_bits,
        "checks": [check_dict(c, fmt) for c in checks],
        "tables": tables,
    }


def check_dict(c, fmt: Formatter) -> dict:
    out = {
        "name": c.name,
        "value": fmt.json(c.value),
        "target": fmt.json(c.target),
        "tolerance": fmt.json(c.tolerance),
        "pass": bool(c.passed),
    }
    if c.note:
        out["note"] = c.note
    return out


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _lf_against_gram(N, params, policy, table, seqs):
    """LF sequences and the first n where they disagree with the Gram route beyond the comparison tolerance."""
    diverged = None
    try:
        lf = build_coeffs_laguerre_freud(N, params, seqs.beta[0], seqs.gamma[1], policy, h0=seqs.h[0])
    except DivergedFromOracle as exc:
        lf = exc.partial
        diverged = len(lf.beta)
    disc = [None]
    for n in range(1, len(lf.beta)):
        d = max(relative_error(lf.beta[n], seqs.beta[n]), relative_error(lf.gamma[n], seqs.gamma[n]))
        disc.append(d)
        if diverged is None and d > policy.comparison_tolerance:
            diverged = n
    return lf, disc, diverged


def cmd_moments(args, params, policy, fmt):
    table = MomentTable.build(params, args.n, policy)
    nu = table.nu[: args.n + 1]
    if args.format == "csv":
        return render_csv(["n", "nu"], [[n, fmt.text(v)] for n, v in enumerate(nu)]), 0
    tables = {"nu": [fmt.json(v) for v in nu]}
    if args.matrices:
        tables["nu2"] = [[fmt.json(v) for v in row] for row in table.nu2]
        tables["mu2"] = [[fmt.json(v) for v in row] for row in table.mu2]
    return render_json(report(params, policy, [], tables, fmt)), 0


def cmd_coeffs(args, params, policy, fmt):
    N = args.n
    table = MomentTable.build(params, N + 1, policy)
    _, seqs = build_Pn_gram(N, table)
    S = build_Sn(N, table, seqs)
    lf = disc = diverged = None
    if args.route != "gram":
        lf, disc, diverged = _lf_against_gram(N, params, policy, table, seqs)

    columns = []
    if args.route in ("gram", "both"):
        columns += [
            ("beta", seqs.beta), ("gamma", seqs.gamma), ("h", seqs.h),
            ("htilde", S.h_tilde), ("a", S.a), ("xi", seqs.xi),
        ]
    if args.route == "lf":
        columns += [("beta", lf.beta), ("gamma", lf.gamma), ("h", lf.h), ("xi", lf.xi)]
    elif args.route == "both":
        columns += [("beta_lf", lf.beta), ("gamma_lf", lf.gamma), ("rel_discrepancy", disc)]

    def cell(seq, n):
        return seq[n] if seq is not None and n < len(seq) else None

    rows = [[n] + [cell(seq, n) for _, seq in columns] for n in range(N + 1)]
    status = 3 if diverged is not None else 0
    if args.format == "csv":
        out = render_csv(["n"] + [name for name, _ in columns], [[r[0]] + [fmt.text(v) or "" for v in r[1:]] for r in rows])
        if diverged is not None:
            print(f"warning: Laguerre-Freud route diverged at n={diverged}", file=sys.stderr)
        return out, status
    tables = {name: [fmt.json(cell(seq, n)) for n in range(N + 1)] for name, seq in columns}
    tables["route"] = args.route
    if args.route != "gram":
        tables["lf_diverged_at"] = diverged
    return render_json(report(params, policy, [], tables, fmt)), status


def cmd_polys(args, params, policy, fmt):
    N = args.n
    table = MomentTable.build(params, N + 1, policy)
    P, _ = build_Pn_gram(N, table)
    S = build_Sn(N, table)
    bases = ("factorial", "monomial") if args.basis == "both" else (args.basis,)
    records = []
    for family, polys in (("P", P), ("S", S)):
        for n in range(N + 1):
            p = polys[n]
            for basis in bases:
                coeffs = p.coeffs if basis == "factorial" else p.to_monomial()
                records.append((n, family, basis, coeffs))
    if args.format == "csv":
        rows = [[n, fam, basis, " ".join(fmt.text(c) for c in coeffs)] for n, fam, basis, coeffs in records]
        return render_csv(["n", "family", "basis", "coefficients"], rows), 0
    tables = {}
    for n, fam, basis, coeffs in records:
        tables.setdefault(f"{fam}_{basis}", []).append([fmt.json(c) for c in coeffs])
    return render_json(report(params, policy, [], tables, fmt)), 0


def cmd_verify(args, params, policy, fmt):
    checks = run_verify(params, args.n, policy, threads=args.threads)
    status = 0 if all(c.passed for c in checks) else 1
    if args.format == "csv":
        rows = [[c.name, fmt.text(c.value) or "", fmt.text(c.target) or "", fmt.text(c.tolerance) or "", "PASS" if c.passed else "FAIL"] for c in checks]
        return render_csv(["name", "value", "target", "tolerance", "pass"], rows), status
    return render_json(report(params, policy, checks, {}, fmt)), status


class _Check:
    def __init__(self, name, value, target, tolerance, passed, note=""):
        self.name, self.value, self.target, self.tolerance, self.passed, self.note = name, value, target, tolerance, passed, note


def _slope_check(name, residuals, policy, gating=True):
    try:
        fit = fit_order(residuals, tolerance=policy.ctx.ldexp(1, policy.guard_bits - policy.working_bits))
    except DegenerateFit:
        return _Check(name, None, EXPECTED_ORDER, SLOPE_SLACK, True, "residuals at working precision"), None
    slope = round(fit.fitted_slope, 6)
    ok = abs(slope - EXPECTED_ORDER) <= SLOPE_SLACK
    note = "" if gating else "reported only"
    return _Check(name, slope, EXPECTED_ORDER, SLOPE_SLACK, ok, note), fit


def _relative_check(name, value, target, tol, note=""):
    dev = abs(value / target - 1) if target else abs(value)
    return _Check(name, value, target, tol, bool(dev < tol), note)


def cmd_asymptotics(args, params, policy, fmt):
    lo, hi = args.window
    n_plateau = args.plateau
    N = max(hi, n_plateau)
    fam = build_families(params, N, policy)
    x = Fraction(args.x)
    series = {
        "gamma": gamma_residuals(fam, (lo, hi)),
        "beta": beta_residuals(fam, (lo, hi)),
        "omega": omega_residuals(fam, x, (lo, hi)),
    }
    gating = {"gamma": True, "beta": True, "omega": True}
    if params.lam > 0:
        series["alpha"] = alpha_residuals(fam, (lo, hi))
        series["sigma_difference"] = sigma_difference_residuals(fam, x, (lo, hi), corrected=True)
        series["sigma_difference_bare_x"] = sigma_difference_residuals(fam, x, (lo, hi), corrected=False)
        gating.update(alpha=True, sigma_difference=True, sigma_difference_bare_x=False)

    checks, status = [], 0
    for name, res in series.items():
        c, _ = _slope_check(f"slope.{name}", res, policy, gating[name])
        checks.append(c)
        if gating[name] and not c.passed:
            status = 1

    _, z, lam = params.reals(policy)
    if params.lam > 0:
        b = policy.real(params.b)
        a3 = 1 + 3 * b * (b - 1) - z / lam
        checks.append(_relative_check("plateau.alpha3", alpha3_estimate(fam, n_plateau), a3, 0.05))
        checks.append(_relative_check("plateau.d2", d2_estimate(fam, n_plateau, x), z, 0.05))
        d_bare_x = sigma_coeffs(x, params, policy, corrected=False)["d"]
        d_fixed = sigma_coeffs(x, params, policy, corrected=True)["d"]
        d3 = d3_estimate(fam, n_plateau, x)
        checks.append(_relative_check("plateau.d3_bare_x", d3, d_bare_x[3], 0.10, "reported only"))
        checks.append(_relative_check("plateau.d3", d3, d_fixed[3], 0.10))
        lim = limit_checks(fam, (lo, n_plateau) if n_plateau > lo else (lo, hi))
        for key, item in lim.items():
            checks.append(_Check(f"limit.{key}", item["values"][-1][1], item["target"], 0.05, item["pass"]))

    if args.format == "csv":
        names = list(series)
        header = ["n"] + [f"{name}_residual" for name in names] + [f"{name}_normalized" for name in names]
        rows = []
        for i, n in enumerate(range(lo, hi + 1)):
            r = [series[name][i][1] for name in names]
            rows.append([n] + [fmt.text(v) for v in r] + [fmt.text(v * n**4) for v in r])
        return render_csv(header, rows), status

    tables = {
        name: [{"n": n, "residual": fmt.json(r), "normalized": fmt.json(r * n**4)} for n, r in res]
        for name, res in series.items()
    }
    if params.lam > 0:
        tables["targets"] = {
            "x": str(x),
            "alpha": [fmt.json(v) for v in (policy.ctx.one, 1 - 2 * policy.real(params.b), a3)],
            "d_bare_x": [fmt.json(v) for v in d_bare_x],
            "d": [fmt.json(v) for v in d_fixed],
            "z_squared_over_lambda": fmt.json(z**2 / lam),
            "lambda_over_z": fmt.json(lam / z),
        }
    return render_json(report(params, policy, checks, tables, fmt)), status


def cmd_bench(args, params, policy, fmt):
    bits_list = [args.precision]
    if args.sweep:
        try:
            bits_list = [int(t) for t in args.sweep.split(",")]
        except ValueError:
            raise UsageError("sweep must be a comma-separated list of integers") from None
        if min(bits_list) < 64:
            raise UsageError("precision must be at least 64 bits")
    N = args.n
    summary, rows = [], []
    for bits in bits_list:
        pol = PrecisionPolicy.from_bits(bits)
        f = Formatter(pol)
        table = MomentTable.build(params, N + 1, pol)
        _, seqs = build_Pn_gram(N, table)
        _, disc, diverged = _lf_against_gram(N, params, pol, table, seqs)
        for n, d in enumerate(disc):
            if d is None:
                continue
            correct = min(bits, round(-float(pol.ctx.log(d, 2)), 1)) if d else bits
            rows.append((bits, n, f.text(d), correct))
        summary.append({"precision_bits": bits, "diverged_at": diverged})
    if args.format == "csv":
        return render_csv(["precision_bits", "n", "rel_discrepancy", "correct_bits"], rows), 0
    tables = {
        "summary": summary,
        "digit_loss": [{"precision_bits": b, "n": n, "rel_discrepancy": d, "correct_bits": c} for b, n, d, c in rows],
    }
    return render_json(report(params, policy, [], tables, fmt)), 0


COMMANDS = {
    "moments": cmd_moments,
    "coeffs": cmd_coeffs,
    "polys": cmd_polys,
    "verify": cmd_verify,
    "asymptotics": cmd_asymptotics,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        params, policy = make_config(args)
        text, status = COMMANDS[args.command](args, params, policy, Formatter(policy))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
