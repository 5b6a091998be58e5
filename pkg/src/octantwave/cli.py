"""Batch command-line front door.

Subcommands: eval-fa3, eval-kernel, verify, solve, audit-smallt.
Exit codes: 0 success / all checks pass, 1 failed verification check,
2 validation error, 3 evaluation error.

A config file of KEY=VALUE lines (# comments) may supply defaults for any
long flag; explicit flags win. CSV output uses a fixed header and 17
significant digits; JSON reports carry a schema tag. Every emitted number
is checked to be finite.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .control import EvaluationControl
from .errors import DomainError, OctantWaveError
from . import lauricella as la
from . import lightcone_coords as lc
from . import kernel as ke
from . import solver as so
from .specfun import gamma_fn

SCHEMA = "octantwave-report/1"


class CliValidationError(Exception):
    pass


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise OctantWaveError(f"non-finite value {x!r} in output")
    return f"{x:.17g}"


def _triple(text: str, flag: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise CliValidationError(f"{flag} expects three comma-separated numbers, got '{text}'")
    try:
        return tuple(float(v) for v in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise CliValidationError(f"{flag}: {exc}") from exc


def _load_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CliValidationError(f"{path}:{line_no}: expected KEY=VALUE")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _emit(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _branch_from_bits(params: ke.PotentialParams, bits_text: str) -> ke.BranchSelection:
    bits_text = bits_text.strip()
    if len(bits_text) != 3 or any(c not in "01" for c in bits_text):
        raise CliValidationError(f"--branch expects three bits like 010, got '{bits_text}'")
    bits = tuple(int(c) for c in bits_text)
    for sel in ke.branch_exponents(params):
        if sel.bits == bits:
            return sel
    raise CliValidationError("branch not found")  # unreachable


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("OCTANTWAVE_WORKERS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------- eval-fa3 --

def cmd_eval_fa3(args) -> int:
    a = args.a
    b = _triple(args.b, "--b")
    c = _triple(args.c, "--c")
    points = [_triple(w, "--w") for w in args.w]
    ctrl = EvaluationControl(rel_tol=args.rel_tol)
    params = la.Fa3Parameters(a, *b, *c)
    rows = ["w1,w2,w3,series,euler,value,path,series_euler_dev"]
    for w in points:
        pt = la.Fa3Point(*w)
        series = euler = None
        try:
            if pt.sum_norm < 1.0:
                series = la.fa3_series(params, pt, ctrl)
        except OctantWaveError:
            series = None
        try:
            euler = la.fa3_euler_integral(params, pt, ctrl)
        except OctantWaveError:
            euler = None
        ev = la.fa3_eval(params, pt, ctrl)
        dev = (abs(series - euler) / max(abs(euler), 1e-300)
               if series is not None and euler is not None else None)
        rows.append(",".join([
            _fmt(w[0]), _fmt(w[1]), _fmt(w[2]),
            _fmt(series) if series is not None else "",
            _fmt(euler) if euler is not None else "",
            _fmt(ev.value), ev.path,
            _fmt(dev) if dev is not None else "",
        ]))
    _emit(args.out, "\n".join(rows) + "\n")
    return 0


# -------------------------------------------------------------- eval-kernel --

def cmd_eval_kernel(args) -> int:
    params = ke.PotentialParams(*_triple(args.nu, "--nu"))
    t = args.t
    p = _triple(args.p, "--p")
    pp = _triple(args.pp, "--pp")
    ctrl = EvaluationControl(rel_tol=args.rel_tol)
    sels = (ke.branch_exponents(params) if args.branch == "all"
            else [_branch_from_bits(params, args.branch)])
    rows = ["bits,b1,b2,b3,magnitude,phase_units,region"]
    for sel in sels:
        kv = ke.kernel_w(t, p, pp, params, sel, ctrl)
        rows.append(",".join([
            "".join(str(b) for b in sel.bits),
            _fmt(sel.b1), _fmt(sel.b2), _fmt(sel.b3),
            _fmt(kv.magnitude), _fmt(kv.phase_units), kv.region,
        ]))
    _emit(args.out, "\n".join(rows) + "\n")
    return 0


# ------------------------------------------------------------------- verify --

def _verify_wave_config(task):
    (t, p, pp, nus, bits_list, step) = task
    params = ke.PotentialParams(*nus)
    sels = [s for s in ke.branch_exponents(params) if s.bits in bits_list]
    out = []
    for sel in sels:
        r1 = ke.wave_operator_residual(t, p, pp, params, sel, step)
        r2 = ke.wave_operator_residual(t, p, pp, params, sel, 2.0 * step)
        out.append((r1, r2))
    return out


def _wave_configs(nus, n_points: int, seed: int):
    rng = np.random.default_rng(seed)
    configs = []
    while len(configs) < n_points:
        p = rng.uniform(0.6, 1.6, 3)
        pp = rng.uniform(0.6, 1.6, 3)
        if rng.random() < 0.7:
            t = float(rng.uniform(3.8, 6.0))
            cv = lc.cone_variables(t, p, pp)
            if cv.a < 1.5:
                continue
        else:
            pp = pp + 1.4
            t = float(rng.uniform(0.3, 0.42 * float(np.linalg.norm(p - pp))))
            cv = lc.cone_variables(t, p, pp)
            if cv.a > -1.5 or float(cv.w.sum()) > 0.85:
                continue
        configs.append((t, tuple(p), tuple(pp)))
    return configs


def cmd_verify(args) -> int:
    nus = _triple(args.nu, "--nu")
    params = ke.PotentialParams(*nus)
    sels = ke.branch_exponents(params)          # validates non-degeneracy
    betas = params.betas
    step = args.step
    rng = np.random.default_rng(args.seed)
    checks = []

    def add(name, configurations, max_residual, tolerance, order=None):
        checks.append({
            "name": name,
            "configurations": configurations,
            "max_residual": max_residual,
            "convergence_order": order,
            "tolerance": tolerance,
            "pass": bool(max_residual <= tolerance)
            and (order is None or abs(order - 2.0) <= 0.3),
        })

    # Gamma duplication
    zs = rng.uniform(0.05, 10.0, 200)
    dup = max(abs(2.0 ** (2 * z - 1) * gamma_fn(z) * gamma_fn(z + 0.5)
                  - math.sqrt(math.pi) * gamma_fn(2 * z))
              / (math.sqrt(math.pi) * gamma_fn(2 * z)) for z in zs)
    add("gamma_duplication", 200, dup, 1e-11)

    # chain-rule identities
    worst = 0.0
    for _ in range(100):
        p = rng.uniform(0.3, 2.0, 3)
        pp = rng.uniform(0.3, 2.0, 3)
        t = float(rng.uniform(3.6, 6.0)) if rng.random() < 0.5 else float(rng.uniform(0.2, 1.5))
        worst = max(worst, float(lc.chain_rule_identities_residual(t, p, pp, betas).max()))
    add("chain_rule_identities", 100, worst, 1e-11)

    # hypergeometric system residuals, all 8 basis elements
    alpha = -1.0 - sum(betas)
    pt = la.Fa3Point(-0.1, -0.1, -0.1)
    worst = 0.0
    orders = []
    for idx in range(1, 9):
        r1 = max(la.lauricella_system_residual(alpha, betas, pt, idx, step))
        r2 = max(la.lauricella_system_residual(alpha, betas, pt, idx, 2 * step))
        worst = max(worst, r1)
        orders.append(math.log2(r2 / r1))
    add("hypergeometric_system", 8, worst, 1e-4, order=float(np.median(orders)))

    # wave-operator residuals
    configs = _wave_configs(nus, args.points, args.seed + 1)
    bits_list = [s.bits for s in sels]
    tasks = [(t, p, pp, nus, bits_list, step) for (t, p, pp) in configs]
    workers = args.workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_verify_wave_config, tasks))
    else:
        results = [_verify_wave_config(task) for task in tasks]
    worst = 0.0
    orders = []
    for per_config in results:
        for r1, r2 in per_config:
            worst = max(worst, r1)
            if r1 > 5e-8:
                orders.append(math.log2(r2 / r1))
    add("wave_operator_residual", len(configs) * len(sels), worst, 1e-4,
        order=float(np.median(orders)))

    # derivative identity
    worst = 0.0
    ctrl = EvaluationControl()
    for _ in range(20):
        a_var = float(rng.uniform(2.0, 6.0))
        hkl = -rng.uniform(0.5, 4.0, 3)
        alpha_d = float(-rng.uniform(1.5, 3.0))
        lap = la.Fa3LaplaceInput(a_var, *hkl, alpha_d)
        der = la.fa3_a_derivative(lap, betas, ctrl)
        dh = 1e-4 * a_var

        def g(av):
            lp = la.Fa3LaplaceInput(av, *hkl, alpha_d)
            return av ** alpha_d * la._scaled_fa3(lp, betas, ctrl)

        fd = (g(a_var + dh) - g(a_var - dh)) / (2 * dh)
        worst = max(worst, abs(der - fd) / max(abs(fd), 1e-300))
    add("scale_derivative_identity", 20, worst, 1e-6)

    # Laplace-Bessel ratio constancy
    ratios = []
    for a_var in (2.0, 4.0, 8.0):
        lap = la.Fa3LaplaceInput(a_var, -4.0, -4.0, -4.0, -2.1)
        lhs = la.fa3_laplace_bessel(lap, betas, ctrl)
        rhs = a_var ** -2.1 * gamma_fn(2.1) * la._scaled_fa3(lap, betas, ctrl)
        ratios.append(lhs / rhs)
    ratios_arr = np.array(ratios)
    cv = float(ratios_arr.std() / ratios_arr.mean())
    add("laplace_bessel_ratio_constancy", 3, cv, 1e-5)
    measured_constant = float(ratios_arr.mean())

    report = {
        "schema": SCHEMA,
        "command": "verify",
        "nu": list(nus),
        "step": step,
        "laplace_bessel_constant": measured_constant,
        "checks": checks,
        "all_pass": all(c["pass"] for c in checks),
    }
    for c in checks:
        for key in ("max_residual", "convergence_order"):
            if c[key] is not None and not math.isfinite(c[key]):
                raise OctantWaveError(f"non-finite value in report: {c}")
    _emit(args.out, json.dumps(report, indent=2) + "\n")
    return 0 if report["all_pass"] else 1


# -------------------------------------------------------------------- solve --

def _make_data(args) -> so.InitialData:
    center = _triple(args.center, "--center")
    return so.initial_data_catalog(args.f, center, args.scale, args.amplitude)


def cmd_solve(args) -> int:
    params = ke.PotentialParams(*_triple(args.nu, "--nu"))
    sel = _branch_from_bits(params, args.branch)
    data = _make_data(args)
    reg = so.RegularizationSpec(args.cutoff_eps, args.levels)
    points = [_triple(p, "--p") for p in args.p]
    oracle_field = None
    if args.oracle == "fdtd":
        margin = args.t + 3.5 * args.grid_h
        lo = np.asarray(data.support_lo) - margin
        hi = np.asarray(data.support_hi) + margin
        if np.any(lo <= 0):
            raise CliValidationError("--oracle fdtd: causal grid would leave the octant")
        grid = so.GridSpec(tuple(lo), tuple(hi - lo), args.grid_h)
        oracle_field = so.fdtd_reference(data, params, grid, args.t)

    rows = ["t,x,y,z,u_kernel,u_oracle,rel_diff,cutoff_levels_used"]
    for p in points:
        res = so.solve_cauchy(data, args.t, p, params, sel, reg, region=args.region)
        if args.oracle == "kirchhoff":
            oracle = so.kirchhoff_classical(data, args.t, p)
        elif args.oracle == "fdtd":
            oracle = float(oracle_field.sample(np.array([p]))[0])
        else:
            oracle = None
        rel = (abs(res.value - oracle) / max(abs(oracle), 1e-300)
               if oracle is not None else None)
        rows.append(",".join([
            _fmt(args.t), _fmt(p[0]), _fmt(p[1]), _fmt(p[2]),
            _fmt(res.value),
            _fmt(oracle) if oracle is not None else "",
            _fmt(rel) if rel is not None else "",
            str(res.cutoff_levels_used),
        ]))
    _emit(args.out, "\n".join(rows) + "\n")
    return 0


# ------------------------------------------------------------- audit-smallt --

def cmd_audit_smallt(args) -> int:
    params = ke.PotentialParams(*_triple(args.nu, "--nu"))
    sel = _branch_from_bits(params, args.branch)
    data = _make_data(args)
    p = _triple(args.p, "--p")
    t_seq = [float(v) for v in args.t_seq.split(",")]
    aud = so.smallt_audit(data, p, params, sel, t_seq)
    report = {
        "schema": SCHEMA,
        "command": "audit-smallt",
        "t_values": list(aud.t_values),
        "u_values": list(aud.u_values),
        "slope": aud.slope,
        "r_squared": aud.r_squared,
        "normalization_ratio": aud.normalization_ratio,
        "raw_constant_measured": aud.raw_constant_measured,
        "raw_constant_predicted": aud.raw_constant_predicted,
        "fit_warning": aud.fit_warning,
    }
    for key in ("slope", "r_squared", "normalization_ratio",
                "raw_constant_measured", "raw_constant_predicted"):
        if not math.isfinite(report[key]):
            raise OctantWaveError(f"non-finite {key} in report")
    _emit(args.out, json.dumps(report, indent=2) + "\n")
    return 0


# ------------------------------------------------------------------ parser ---

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="octantwave",
                                 description="Octant wave kernels: evaluation and verification")
    ap.add_argument("--config", default=None, help="KEY=VALUE defaults file; flags win")
    sub = ap.add_subparsers(dest="command", required=True)

    fa = sub.add_parser("eval-fa3", help="evaluate F_A(3) by all applicable routes")
    fa.add_argument("--a", type=float, required=True)
    fa.add_argument("--b", required=True, help="b1,b2,b3")
    fa.add_argument("--c", required=True, help="c1,c2,c3")
    fa.add_argument("--w", action="append", required=True, help="w1,w2,w3 (repeatable)")
    fa.add_argument("--rel-tol", type=float, default=1e-10)
    fa.add_argument("--out", default=None)
    fa.set_defaults(func=cmd_eval_fa3)

    kk = sub.add_parser("eval-kernel", help="evaluate branch kernels")
    kk.add_argument("--nu", default="0.3,0.2,0.1")
    kk.add_argument("--branch", default="all", help="three bits like 010, or 'all'")
    kk.add_argument("--t", type=float, required=True)
    kk.add_argument("--p", required=True)
    kk.add_argument("--pp", required=True)
    kk.add_argument("--rel-tol", type=float, default=1e-10)
    kk.add_argument("--out", default=None)
    kk.set_defaults(func=cmd_eval_kernel)

    vf = sub.add_parser("verify", help="run the residual/identity verification suite")
    vf.add_argument("--nu", default="0.3,0.2,0.1")
    vf.add_argument("--points", type=int, default=20)
    vf.add_argument("--step", type=float, default=1e-3)
    vf.add_argument("--seed", type=int, default=7)
    vf.add_argument("--workers", type=int, default=_default_workers())
    vf.add_argument("--out", default=None)
    vf.set_defaults(func=cmd_verify)

    sv = sub.add_parser("solve", help="kernel-driven Cauchy solution at points")
    sv.add_argument("--nu", default="0.3,0.2,0.1")
    sv.add_argument("--branch", default="000")
    sv.add_argument("--f", default="bump", choices=["bump", "gaussian"])
    sv.add_argument("--center", default="1.3,1.3,1.3")
    sv.add_argument("--scale", type=float, default=0.4)
    sv.add_argument("--amplitude", type=float, default=1.0)
    sv.add_argument("--t", type=float, required=True)
    sv.add_argument("--p", action="append", required=True, help="x,y,z (repeatable)")
    sv.add_argument("--oracle", default="none", choices=["none", "kirchhoff", "fdtd"])
    sv.add_argument("--region", default="minus", choices=["minus", "plus"])
    sv.add_argument("--cutoff-eps", type=float, default=0.25)
    sv.add_argument("--levels", type=int, default=8)
    sv.add_argument("--grid-h", type=float, default=0.015)
    sv.add_argument("--out", default=None)
    sv.set_defaults(func=cmd_solve)

    au = sub.add_parser("audit-smallt", help="small-time limit audit")
    au.add_argument("--nu", default="0.3,0.2,0.1")
    au.add_argument("--branch", default="000")
    au.add_argument("--f", default="bump", choices=["bump", "gaussian"])
    au.add_argument("--center", default="1.3,1.3,1.3")
    au.add_argument("--scale", type=float, default=0.4)
    au.add_argument("--amplitude", type=float, default=1.0)
    au.add_argument("--p", default="1.3,1.3,1.3")
    au.add_argument("--t-seq", default="0.1,0.08,0.064,0.05,0.04")
    au.add_argument("--out", default=None)
    au.set_defaults(func=cmd_audit_smallt)
    return ap


def _extract_config_path(argv: list[str]) -> str | None:
    for i, arg in enumerate(argv):
        if arg == "--config":
            if i + 1 >= len(argv):
                raise CliValidationError("--config expects a path")
            return argv[i + 1]
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        config_path = _extract_config_path(argv)
    except CliValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    if config_path:
        try:
            cfg = _load_config(config_path)
        except (OSError, CliValidationError) as exc:
            sys.stderr.write(f"error: {exc}\n")
            return 2
        # apply config values as defaults on every subparser; flags still win
        for sp_name, sp in ap._subparsers._group_actions[0].choices.items():  # type: ignore[union-attr]
            defaults = {}
            for act in sp._actions:
                key = act.dest.replace("-", "_")
                if key in cfg:
                    val = cfg[key]
                    if isinstance(act, argparse._AppendAction):
                        defaults[act.dest] = [val]
                    elif act.type is float:
                        defaults[act.dest] = float(val)
                    elif act.type is int:
                        defaults[act.dest] = int(val)
                    else:
                        defaults[act.dest] = val
                    act.required = False
            sp.set_defaults(**defaults)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except DomainError as exc:
        # precondition violations are configuration mistakes
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OctantWaveError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
