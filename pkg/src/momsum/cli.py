"""Configuration-driven experiment runner.

Each subcommand reads a JSON config (with a mandatory schema_version field;
unknown fields are rejected), runs one pipeline, and writes deterministic
JSON/CSV artifacts plus a short human-readable summary into --out.

Exit codes: 0 success, 2 config error, 3 numeric/accuracy failure,
4 singular-direction abort.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import (AccuracyError, ConfigError, DegenerateInputError,
                     DomainError, ShapeError, SingularDirectionError)
from .growth import fit_growth
from .kernels import cauchy_kernel_identity, make_gevrey_kernel
from .sequences import check_strongly_regular, estimate_omega, make_sequence
from .serialize import (bivariate_from_dict, dumps_json, germ_from_dict,
                        sequence_from_dict, series_from_dict,
                        solution_to_dict, sum_result_to_csv,
                        sum_result_to_dict, write_atomic)
from .solver import (CauchyProblem, SingularlyPerturbedProblem, extract_traces,
                     solve_cauchy, solve_main)
from .summation import Multidirection, borel_sum, multisum

SCHEMA_VERSION = 1

_ALLOWED_FIELDS = {
    "check-sequence": {"schema_version", "sequence"},
    "borel-sum": {"schema_version", "series", "M", "s", "d", "grid"},
    "multisum": {"schema_version", "series", "levels", "d1", "d2", "grid"},
    "solve": {"schema_version", "problem", "N_eps", "N_z"},
    "solve-cauchy": {"schema_version", "problem", "N_t", "N_z"},
    "analyze-growth": {"schema_version", "mags", "log_mags", "base", "window"},
    "kernel-check": {"schema_version", "s", "samples"},
}


def _load_config(path, command):
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    if cfg.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(
            f"config must declare schema_version = {SCHEMA_VERSION}")
    unknown = set(cfg) - _ALLOWED_FIELDS[command]
    if unknown:
        raise ConfigError(f"unknown config fields for {command}: "
                          f"{sorted(unknown)}")
    return cfg


def _grid_points(cfg):
    try:
        return [complex(p[0], p[1]) for p in cfg["grid"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise ConfigError("grid must be a list of [re, im] pairs") from exc


def _mode_of(args):
    return "exact" if args.mode == "rational" else "float"


def _emit(args, name, payload, summary_lines, csv_text=None):
    out = args.out
    payload = dict(payload)
    payload["seed"] = args.seed
    write_atomic(os.path.join(out, f"{name}.json"), dumps_json(payload))
    if csv_text is not None:
        write_atomic(os.path.join(out, f"{name}.csv"), csv_text)
    write_atomic(os.path.join(out, "summary.txt"),
                 "\n".join(summary_lines) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check_sequence(args):
    cfg = _load_config(args.config, "check-sequence")
    seq = sequence_from_dict(cfg["sequence"], mode=_mode_of(args))
    report = check_strongly_regular(seq)
    payload = {"kind": seq.kind, "N": seq.N,
               "lc_ok": report.lc_ok, "mg_ok": report.mg_ok,
               "A1": report.A1, "snq_ok": report.snq_ok, "A2": report.A2,
               "notes": list(report.notes)}
    lines = [f"sequence {seq.kind} N={seq.N}",
             f"  log-convex: {report.lc_ok}",
             f"  moderate growth: {report.mg_ok} (A1={report.A1:.4g})",
             f"  strong non-quasianalyticity: {report.snq_ok} "
             f"(A2={report.A2:.4g})"]
    try:
        om = estimate_omega(seq)
        payload["omega"] = om.value
        payload["omega_uncertainty"] = om.uncertainty
        lines.append(f"  growth index: {om.value:.4g} "
                     f"(+- {om.uncertainty:.2g})")
    except (AccuracyError, DomainError) as exc:
        payload["omega_error"] = str(exc)
        lines.append(f"  growth index: unavailable ({exc})")
    _emit(args, "check-sequence", payload, lines)
    return 0


def _cmd_borel_sum(args):
    cfg = _load_config(args.config, "borel-sum")
    u = series_from_dict(cfg["series"])
    s = float(cfg.get("s", 1.0))
    k = make_gevrey_kernel(s)
    if "M" in cfg:
        M = sequence_from_dict(cfg["M"])
    else:
        M = make_sequence("factorial_power", max(u.N, 2), s=s)
    grid = _grid_points(cfg)
    res = borel_sum(u, M, k, float(cfg.get("d", 0.0)), grid)
    lines = [f"borel-sum along d={cfg.get('d', 0.0)} (order s={s})"]
    for z, v, e in zip(res.grid, res.values, res.err_est):
        lines.append(f"  z={z:.6g}: {v:.10g} (err_est {e:.2g})")
    _emit(args, "borel-sum", sum_result_to_dict(res), lines,
          csv_text=sum_result_to_csv(res))
    return 0


def _cmd_multisum(args):
    cfg = _load_config(args.config, "multisum")
    u = series_from_dict(cfg["series"])
    try:
        s1 = float(cfg["levels"][0]["s"])
        s2 = float(cfg["levels"][1]["s"])
    except (KeyError, IndexError, TypeError) as exc:
        raise ConfigError("levels must be two objects with an 's' field") from exc
    k1, k2 = make_gevrey_kernel(s1), make_gevrey_kernel(s2)
    N = max(u.N, 2)
    M1 = make_sequence("factorial_power", N, s=s1)
    M2 = make_sequence("factorial_power", N, s=s2)
    md = Multidirection(float(cfg.get("d1", 0.0)), float(cfg.get("d2", 0.0)),
                        s1, s2)
    grid = _grid_points(cfg)
    res = multisum(u, (M1, k1), (M2, k2), md, grid)
    lines = [f"multisum along (d1,d2)=({md.d1},{md.d2}), levels ({s1},{s2})"]
    for z, v, e in zip(res.grid, res.values, res.err_est):
        lines.append(f"  z={z:.6g}: {v:.10g} (err_est {e:.2g})")
    _emit(args, "multisum", sum_result_to_dict(res), lines,
          csv_text=sum_result_to_csv(res))
    return 0


def _problem_sequences(pd, mode, N_needed_m1, N_needed_m2):
    s1, s2 = float(pd["s1"]), float(pd["s2"])
    m1 = make_sequence("factorial_power", N_needed_m1, s=s1, mode=mode)
    m2 = make_sequence("factorial_power", N_needed_m2, s=s2, mode=mode)
    if "baseM" in pd:
        baseM = sequence_from_dict(pd["baseM"], mode=mode)
    else:
        baseM = make_sequence("factorial_power", N_needed_m2, s=1.0, mode=mode)
    return m1, m2, baseM


def _cmd_solve(args):
    cfg = _load_config(args.config, "solve")
    mode = _mode_of(args)
    pd = cfg["problem"]
    k, p = int(pd["k"]), int(pd["p"])
    N_eps = int(cfg.get("N_eps", 30 if mode == "exact" else 60))
    N_z = int(cfg.get("N_z", p * (N_eps // k) + 10))
    m1, m2, baseM = _problem_sequences(pd, mode, N_eps + k, N_z + p)
    prob = SingularlyPerturbedProblem(
        k=k, p=p, m1=m1, m2=m2, baseM=baseM,
        s1=float(pd["s1"]), s2=float(pd["s2"]),
        a=germ_from_dict(pd["a"], mode=mode),
        f=bivariate_from_dict(pd["f"], mode=mode),
        N_eps=N_eps, N_z=N_z)
    sol = solve_main(prob)
    traces = extract_traces(sol, prob)
    sol = FormalSolutionWithTraces(sol, traces)
    payload = solution_to_dict(sol)
    lines = [f"solve: k={k} p={p}, eps-order {N_eps}, z-order {N_z}",
             f"  residual max |lhs - rhs| = {sol.residual_norm:.3g}"]
    _emit(args, "solve", payload, lines)
    return 0


class FormalSolutionWithTraces:
    """Lightweight view attaching extracted traces to a solution."""

    def __init__(self, sol, traces):
        self.series = sol.series
        self.frontier = sol.frontier
        self.tag = sol.tag
        self.residual_norm = sol.residual_norm
        self.traces = traces


def _cmd_solve_cauchy(args):
    cfg = _load_config(args.config, "solve-cauchy")
    mode = _mode_of(args)
    pd = cfg["problem"]
    k, p = int(pd["k"]), int(pd["p"])
    N_t = int(cfg.get("N_t", 30 if mode == "exact" else 60))
    N_z = int(cfg.get("N_z", p * (N_t // k) + 10))
    m1, m2, _ = _problem_sequences(pd, mode, N_t + k, N_z + p)
    prob = CauchyProblem(
        k=k, p=p, m1=m1, m2=m2,
        a=germ_from_dict(pd["a"], mode=mode),
        f=bivariate_from_dict(pd["f"], mode=mode),
        phi=tuple(germ_from_dict(g, mode=mode) for g in pd["phi"]),
        N_t=N_t, N_z=N_z)
    sol = solve_cauchy(prob)
    payload = solution_to_dict(sol)
    lines = [f"solve-cauchy: k={k} p={p}, t-order {N_t}, z-order {N_z}",
             f"  residual max |lhs - rhs| = {sol.residual_norm:.3g}"]
    _emit(args, "solve-cauchy", payload, lines)
    return 0


def _cmd_analyze_growth(args):
    cfg = _load_config(args.config, "analyze-growth")
    base = sequence_from_dict(cfg["base"])
    window = tuple(cfg["window"]) if "window" in cfg else None
    if "log_mags" in cfg:
        fit = fit_growth(cfg["log_mags"], base, window=window, logs=True)
    elif "mags" in cfg:
        fit = fit_growth(cfg["mags"], base, window=window)
    else:
        raise ConfigError("analyze-growth needs 'mags' or 'log_mags'")
    payload = {"s_est": fit.s_est, "logA": fit.logA, "logC": fit.logC,
               "residual": fit.residual, "window": list(fit.window)}
    lines = [f"growth fit over window {fit.window}",
             f"  level s_est = {fit.s_est:.4g}",
             f"  logA = {fit.logA:.4g}, logC = {fit.logC:.4g}, "
             f"rms residual {fit.residual:.3g}"]
    _emit(args, "analyze-growth", payload, lines)
    return 0


def _cmd_kernel_check(args):
    cfg = _load_config(args.config, "kernel-check")
    s = float(cfg["s"])
    k = make_gevrey_kernel(s)
    results = []
    lines = [f"kernel-check, order s={s}"]
    for sample in cfg.get("samples", []):
        try:
            z = complex(sample[0][0], sample[0][1])
            w = complex(sample[1][0], sample[1][1])
            tau = float(sample[2])
        except (TypeError, IndexError) as exc:
            raise ConfigError("each sample must be [[zre,zim],[wre,wim],tau]") \
                from exc
        val = cauchy_kernel_identity(k, z, w, tau)
        exact = 1.0 / (w - z)
        dev = abs(val - exact)
        results.append({"z": [z.real, z.imag], "w": [w.real, w.imag],
                        "tau": tau, "value": [val.real, val.imag],
                        "deviation": dev})
        lines.append(f"  z={z:.4g} w={w:.4g} tau={tau:.4g}: "
                     f"deviation from 1/(w-z) = {dev:.3g}")
    slope = k.smallz_slope()
    C_flat, K_flat = k.flatness_fit()
    payload = {"s": s, "samples": results,
               "smallz_slope": slope,
               "flatness": {"C": C_flat, "K": K_flat}}
    lines.append(f"  small-z log-log slope of e: {slope:.4g} (expect {1/s:.4g})")
    lines.append(f"  flatness fit: C={C_flat:.4g}, K={K_flat:.4g}")
    _emit(args, "kernel-check", payload, lines)
    return 0


_COMMANDS = {
    "check-sequence": _cmd_check_sequence,
    "borel-sum": _cmd_borel_sum,
    "multisum": _cmd_multisum,
    "solve": _cmd_solve,
    "solve-cauchy": _cmd_solve_cauchy,
    "analyze-growth": _cmd_analyze_growth,
    "kernel-check": _cmd_kernel_check,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="momsum",
        description="Moment-summability toolkit experiment runner")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", default=".")
        sp.add_argument("--mode", choices=("float", "rational"),
                        default="float")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
    return parser


def _write_error(args, exc, code):
    record = dumps_json({"error": type(exc).__name__, "message": str(exc),
                         "exit_code": code})
    try:
        write_atomic(os.path.join(args.out, "error.json"), record)
    except OSError:
        pass
    print(f"error: {exc}", file=sys.stderr)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ShapeError, DomainError, DegenerateInputError,
            KeyError) as exc:
        _write_error(args, exc, 2)
        return 2
    except SingularDirectionError as exc:
        _write_error(args, exc, 4)
        return 4
    except (AccuracyError, ArithmeticError) as exc:
        _write_error(args, exc, 3)
        return 3


def entrypoint():
    sys.exit(main())
