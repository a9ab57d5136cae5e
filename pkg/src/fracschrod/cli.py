"""Command-line harness: ``fracschrod converge | energy | run``.

Exit codes: 0 success, 2 configuration error, 3 solver failure,
4 acceptance-band failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from fracschrod import fileio, problems
from fracschrod.config import ConfigError, RunConfig, load_config
from fracschrod.stepper import run

log = logging.getLogger("fracschrod")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_BAND = 4


def build_problem(cfg: RunConfig, alpha: float):
    if cfg.problem == "example1":
        return problems.example1(alpha)
    if cfg.problem == "example2":
        return problems.example2()
    if cfg.initial == "gaussian":
        return problems.gaussian(cfg.amplitude, cfg.x0, cfg.y0, cfg.width)
    return problems.zero_problem()


def _config_echo(cfg: RunConfig) -> dict:
    d = dataclasses.asdict(cfg)
    return json.loads(json.dumps(d, default=list))


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ------------------------------------------------------------------ converge


def _converge_job(cfg: RunConfig, alpha: float, level: float) -> dict:
    grid = cfg.level_grid(alpha, level)
    t0 = time.perf_counter()
    res = run(build_problem(cfg, alpha), grid, settings=cfg.solver, method=cfg.method)
    log.info("alpha=%g level=%g Mx=%d: error %s (%.1fs)", alpha, level, grid.Mx,
             res.final_error, time.perf_counter() - t0)
    its = [r.solver.iterations for r in res.records if r.solver is not None]
    return {
        "alpha": alpha,
        "level": level,
        "mx": grid.Mx,
        "h": grid.hx,
        "tau": grid.tau,
        "steps": grid.N,
        "error": res.final_error if res.ok else None,
        "max_iterations": max(its) if its else 0,
        "failure": res.failure,
    }


def _map_jobs(fn, jobs, threads):
    if threads <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, *job) for job in jobs]
        return [f.result() for f in futures]


def observed_orders(levels, errors):
    """log(e_coarse / e_fine) / log(level_coarse / level_fine) per transition."""
    out = []
    for (l0, e0), (l1, e1) in zip(zip(levels, errors), zip(levels[1:], errors[1:])):
        if e0 is None or e1 is None or e0 <= 0 or e1 <= 0:
            out.append(None)
        else:
            out.append(math.log(e0 / e1) / math.log(l0 / l1))
    return out


def cmd_converge(cfg: RunConfig) -> tuple[dict, int]:
    cfg = cfg.resolve("converge")
    if cfg.problem != "example1":
        raise ConfigError("converge needs problem = example1 (exact solution required)")
    alphas = sorted(cfg.sweep_alphas("converge"))
    levels = sorted(set(cfg.levels), reverse=True)
    for lv in levels:
        cfg.level_grid(alphas[0], lv)  # validate before running anything
    jobs = [(cfg, a, lv) for a in alphas for lv in levels]
    rows = _map_jobs(_converge_job, jobs, cfg.threads)
    rows.sort(key=lambda r: (r["alpha"], -r["level"]))

    lo, hi = cfg.order_band
    results, failed = [], False
    for a in alphas:
        mine = [r for r in rows if r["alpha"] == a]
        errors = [r["error"] for r in mine]
        orders = observed_orders(levels, errors)
        passing = sum(1 for o in orders if o is not None and lo <= o <= hi)
        need = cfg.min_passing if cfg.min_passing is not None else max(1, len(orders) - 1)
        fails = [f"level {r['level']:g}: {r['failure']}" for r in mine if r["failure"]]
        failed |= bool(fails)
        results.append({
            "alpha": a,
            "levels": levels,
            "errors": errors,
            "orders": orders,
            "passing": passing,
            "pass": (passing >= need) if orders else None,
            "failures": fails,
        })
        for r, o in zip(mine, [None] + orders):
            r["order"] = o

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "converge.csv", "w") as fh:
        fh.write("alpha,level,mx,h,tau,steps,linf_error,order,max_iterations,status\n")
        for r in rows:
            fh.write(",".join([fileio.fmt(r["alpha"]), fileio.fmt(r["level"]), str(r["mx"]),
                               fileio.fmt(r["h"]), fileio.fmt(r["tau"]), str(r["steps"]),
                               fileio.fmt(r["error"]), fileio.fmt(r["order"]),
                               str(r["max_iterations"]), "failed" if r["failure"] else "ok"]) + "\n")
    summary = {
        "command": "converge",
        "config": _config_echo(cfg),
        "order_band": [lo, hi],
        "results": results,
        "all_pass": all(r["pass"] is not False for r in results) and not failed,
    }
    _write_json(out / "converge.json", summary)

    print(f"{'alpha':>6} {'level':>10} {'Mx':>5} {'Linf error':>12} {'order':>7}")
    for r in rows:
        order = "" if r["order"] is None else f"{r['order']:.2f}"
        err = "FAILED" if r["error"] is None else f"{r['error']:.3e}"
        print(f"{r['alpha']:>6g} {r['level']:>10.6g} {r['mx']:>5d} {err:>12} {order:>7}")

    if failed:
        return summary, EXIT_SOLVER
    return summary, EXIT_OK if summary["all_pass"] else EXIT_BAND


# -------------------------------------------------------------------- energy


def _energy_job(cfg: RunConfig, alpha: float):
    grid = cfg.grid(alpha)
    t0 = time.perf_counter()
    res = run(build_problem(cfg, alpha), grid, settings=cfg.solver, method=cfg.method)
    log.info("alpha=%g: %d steps (%.1fs)", alpha, grid.N, time.perf_counter() - t0)
    return alpha, grid, res


def report_levels(tau: float, T: float, every: float) -> list[int]:
    step = round(every / tau)
    if step < 1 or abs(step * tau - every) > 1e-9 * every:
        raise ConfigError(f"report_every={every} is not a multiple of tau={tau}")
    N = round(T / tau)
    return list(range(step, N + 1, step))


def relative_drift(energies) -> float:
    E = np.asarray(energies, dtype=float)
    ref = abs(E[0])
    dev = float(np.max(np.abs(E - E[0])))
    if ref == 0.0:
        return dev
    return dev / ref


def cmd_energy(cfg: RunConfig) -> tuple[dict, int]:
    cfg = cfg.resolve("energy")
    alphas = sorted(cfg.sweep_alphas("energy"))
    levels = report_levels(cfg.tau, cfg.T, cfg.report_every)
    outcomes = _map_jobs(_energy_job, [(cfg, a) for a in alphas], cfg.threads)

    results, failed = [], False
    table = {}
    for alpha, grid, res in sorted(outcomes, key=lambda o: o[0]):
        by_n = {r.n: r for r in res.records}
        if not res.ok:
            failed = True
            log.error("alpha=%g failed: %s", alpha, res.failure)
        ns = [n for n in levels if n in by_n]
        E = [by_n[n].energy for n in ns]
        times = [n * grid.tau for n in ns]
        drift = relative_drift(E) if E else math.inf
        table[alpha] = dict(zip(ns, E))
        results.append({"alpha": alpha, "times": times, "energies": E,
                        "max_rel_drift": drift, "pass": bool(drift <= cfg.drift_tol)})

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = ["t"] + [f"E_alpha={a:g}" for a in alphas]
    lines = [",".join(header)]
    for n in levels:
        lines.append(",".join([fileio.fmt(n * cfg.tau)] + [fileio.fmt(table[a].get(n)) for a in alphas]))
    (out / "energy.csv").write_text("\n".join(lines) + "\n")
    summary = {
        "command": "energy",
        "config": _config_echo(cfg),
        "drift_tol": cfg.drift_tol,
        "results": results,
        "all_pass": all(r["pass"] for r in results) and not failed,
    }
    _write_json(out / "energy.json", summary)

    print("  ".join(f"{h:>20}" for h in header))
    for line in lines[1:]:
        print("  ".join(f"{v:>20}" for v in line.split(",")))
    for r in results:
        print(f"alpha={r['alpha']:g}: max relative drift {r['max_rel_drift']:.3e} "
              f"({'ok' if r['pass'] else 'ABOVE ' + format(cfg.drift_tol, 'g')})")

    if failed:
        return summary, EXIT_SOLVER
    return summary, EXIT_OK if summary["all_pass"] else EXIT_BAND


# ----------------------------------------------------------------------- run


def cmd_run(cfg: RunConfig) -> tuple[dict, int]:
    cfg = cfg.resolve("run")
    grid = cfg.grid()
    out = Path(cfg.out_dir)
    snap_dir = out / "snapshots"
    snap_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def on_snapshot(n, t, U):
        stem = snap_dir / f"snap_{n:06d}"
        fileio.write_snapshot_csv(stem.with_suffix(".csv"), grid, U)
        fileio.write_snapshot_bin(stem.with_suffix(".fsnap"), grid, U, t)
        written.append(stem.name)

    res = run(build_problem(cfg, cfg.alpha), grid, settings=cfg.solver, method=cfg.method,
              snapshot_times=cfg.snapshot_times, on_snapshot=on_snapshot)
    fileio.write_diagnostics_csv(out / "diagnostics.csv", res.records)
    summary = {"command": "run", "steps": res.state.n, "snapshots": written,
               "failure": res.failure}
    last = res.records[-1]
    print(f"t={last.t:g} n={last.n} mass={last.mass:.12g} energy={last.energy:.17g}"
          + (f" linf_error={last.linf_error:.3e}" if last.linf_error is not None else ""))
    if not res.ok:
        print(f"run failed: {res.failure}", file=sys.stderr)
        return summary, EXIT_SOLVER
    return summary, EXIT_OK


# ---------------------------------------------------------------------- main

COMMANDS = {"converge": cmd_converge, "energy": cmd_energy, "run": cmd_run}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI-style configuration file")
    common.add_argument("--alpha", help="fractional order(s), comma separated")
    common.add_argument("--levels", help="tau = h levels, e.g. 1/16,1/32,1/64")
    common.add_argument("--tol", help="relative residual tolerance of each solve")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threads", type=int, help="parallel sweep width")
    common.add_argument("--seed", type=int, help="seed echoed into outputs")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fracschrod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("converge", parents=[common], help="order study on the manufactured problem")
    sub.add_parser("energy", parents=[common], help="discrete energy table on the Gaussian problem")
    sub.add_parser("run", parents=[common], help="single run with snapshots and diagnostics")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config, alphas=args.alpha, levels=args.levels, tol=args.tol,
                          out=args.out, threads=args.threads, seed=args.seed)
        _, code = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
