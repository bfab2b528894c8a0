"""Command-line runner.

Usage: ``blackstock <subcommand> --config <path> [--output <dir>] [--jobs N]``
with subcommands ``simulate``, ``fit``, ``threshold``, ``weighted-study``,
``verify-inequalities`` and ``sweep``.  The environment variable
``BLACKSTOCK_SEED`` overrides the configured seed.

Exit codes: 0 success, 1 configuration errors, 2 divergence of a simulate
run, 3 precondition failures (unbracketed thresholds, bad fit windows,
inadmissible parameters, failed inequality checks).
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import os
import sys
from multiprocessing import Pool
from pathlib import Path

from .config import ConfigError, RunConfig, load_config, parse_config
from .experiments import (
    fit_decay,
    threshold_bisection,
    weighted_regularity_study,
)
from .fields import InitialDataSpec, build_initial
from .inequalities import (
    agmon_ratio,
    empirical_max_ratio,
    gronwall_verify,
    interpolation_ratio,
    random_admissible_gronwall,
    random_trig_fields,
)
from .integrate import simulate
from .storage import (
    read_series_csv,
    save_checkpoint,
    write_json,
    write_series_csv,
)

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2
EXIT_PRECONDITION = 3

SUBCOMMANDS = (
    "simulate",
    "fit",
    "threshold",
    "weighted-study",
    "verify-inequalities",
    "sweep",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blackstock",
        description="Spectral simulator and diagnostics for the strongly damped "
        "Blackstock acoustic wave equation",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--output", default=None, help="output directory override")
        sp.add_argument(
            "--jobs",
            type=int,
            default=None,
            help="worker count for sweep (default: logical cores)",
        )
    return parser


def _output_dir(cfg: RunConfig, override: str | None) -> Path:
    out = Path(override or cfg.output_dir or "blackstock_out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _apply_seed_override(cfg: RunConfig) -> RunConfig:
    env = os.environ.get("BLACKSTOCK_SEED")
    if env is None:
        return cfg
    return dataclasses.replace(cfg, seed=int(env))


def _termination_payload(series) -> dict:
    return {
        "kind": series.termination.kind,
        "time": series.termination.time,
    }


def _run_simulate(cfg: RunConfig, out: Path) -> int:
    state = build_initial(cfg.psi0, cfg.psi1, cfg.grid)
    series = simulate(
        state,
        cfg.T,
        cfg.step,
        cfg.medium,
        sample_every=cfg.sample_every,
        gammas=cfg.gammas,
    )
    write_series_csv(out / "series.csv", series)
    last = series.samples[-1]
    summary = {
        "termination": _termination_payload(series),
        "final_time": series.times[-1],
        "final_energy": last.E,
        "final_lyapunov": last.L,
        "cumulative_dissipation": last.D_cum,
        "weighted_grad_accel_integral": last.w_grad_ptt,
        "max_picard_iterations": series.max_picard_iterations,
        "seed": cfg.seed,
    }
    if series.snapshots:
        t_final, final_state = series.snapshots[-1]
        save_checkpoint(out / "state.ckpt", final_state)
        summary["checkpoint_time"] = t_final
    write_json(out / "summary.json", summary)
    return EXIT_OK if series.termination.completed else EXIT_DIVERGED


def _run_fit(cfg: RunConfig, config_path: Path, out: Path) -> int:
    section = cfg.fit
    csv_name = section.get("series_csv")
    if not csv_name:
        raise ConfigError("fit requires fit.series_csv in the configuration")
    csv_path = Path(csv_name)
    if not csv_path.is_absolute():
        csv_path = config_path.parent / csv_path
    series = read_series_csv(csv_path)
    window = section.get("window")
    fit = fit_decay(series, tuple(window) if window else None)
    write_json(
        out / "fit.json",
        {
            "zeta": fit.zeta,
            "window": list(fit.window),
            "r_squared": fit.r_squared,
            "classification": fit.classification,
            "c_factor": fit.c_factor,
        },
    )
    return EXIT_OK


def _run_threshold(cfg: RunConfig, out: Path) -> int:
    section = cfg.threshold
    lo = float(section.get("lo", 0.01))
    hi = float(section.get("hi", 100.0))
    iters = int(section.get("iters", 12))
    window = section.get("window")
    report = threshold_bisection(
        cfg.medium,
        (cfg.psi0, cfg.psi1),
        lo,
        hi,
        iters,
        grid=cfg.grid,
        T=cfg.T,
        cfg=cfg.step,
        sample_every=max(cfg.sample_every, 10),
        window=tuple(window) if window else None,
    )
    write_json(
        out / "threshold.json",
        {
            "amplitude_lo": report.amplitude_lo,
            "amplitude_hi": report.amplitude_hi,
            "delta_star": report.delta_star,
            "runs": [{"amplitude": a, "classification": c} for a, c in report.runs],
        },
    )
    return EXIT_OK


def _run_weighted_study(cfg: RunConfig, out: Path) -> int:
    section = cfg.study
    resolutions = section.get("resolutions", [64, 128, 256])
    T = float(section.get("T", 4.0))
    dt = float(section.get("dt", cfg.step.dt))
    scheme = section.get("scheme", "imex1")
    amplitude = float(section.get("amplitude", 0.01))
    exponent = float(section.get("exponent", 2.0))
    study = weighted_regularity_study(
        cfg.medium,
        resolutions,
        T,
        dt,
        extent=cfg.grid.extents[0],
        spec1=InitialDataSpec.power_law(exponent, amplitude),
        scheme=scheme,
    )
    write_json(
        out / "study.json",
        {
            "resolutions": list(study.resolutions),
            "sup_lap_v": list(study.sup_lap_v),
            "sup_weighted_lap_v": list(study.sup_weighted_lap_v),
            "unweighted_growth": study.unweighted_growth,
            "weighted_change": study.weighted_change,
            "passed": study.passed,
        },
    )
    return EXIT_OK


def _run_verify_inequalities(cfg: RunConfig, out: Path) -> int:
    section = cfg.inequalities
    count = int(section.get("samples", 2000))
    draws = int(section.get("gronwall_draws", 100))
    grid = cfg.grid
    seed = cfg.seed

    agmon_max, agmon_const = empirical_max_ratio(grid, "agmon", count, seed=seed)
    interp4_max, interp4_const = empirical_max_ratio(
        grid, "interpolation", count, seed=seed, q=4
    )
    interp3_max, interp3_const = empirical_max_ratio(
        grid, "interpolation", count, seed=seed, q=3
    )

    scale_ok = True
    for u in random_trig_fields(grid, 10, seed + 1):
        for fn in (agmon_ratio, lambda w: interpolation_ratio(w, 4)):
            if abs(fn(u * 5.0) / fn(u) - 1.0) > 1e-10:
                scale_ok = False

    gron_results = []
    all_ok = True
    for g in random_admissible_gronwall(draws, seed=seed + 2):
        check = gronwall_verify(g, T=10.0, dt=1e-3)
        gron_results.append(check.ok)
        all_ok = all_ok and check.ok

    payload = {
        "agmon": {"max_ratio": agmon_max, "calibrated_constant": agmon_const},
        "interpolation_q3": {"max_ratio": interp3_max, "calibrated_constant": interp3_const},
        "interpolation_q4": {"max_ratio": interp4_max, "calibrated_constant": interp4_const},
        "scale_invariance_ok": scale_ok,
        "gronwall": {"draws": draws, "all_ok": all_ok},
        "samples": count,
        "seed": seed,
    }
    write_json(out / "inequalities.json", payload)
    return EXIT_OK if (scale_ok and all_ok) else EXIT_PRECONDITION


def _expand_sweep(cfg_raw: dict) -> list[dict]:
    sweep = cfg_raw.get("sweep", {})
    params = sweep.get("parameters", {})
    if not params:
        raise ConfigError("sweep requires sweep.parameters")
    keys = sorted(params)
    combos = list(itertools.product(*(params[k] for k in keys)))
    variants = []
    for combo in combos:
        variant = json.loads(json.dumps(cfg_raw))
        variant.pop("sweep", None)
        label_parts = []
        for key, value in zip(keys, combo):
            node = variant
            *parents, leaf = key.split(".")
            for part in parents:
                node = node.setdefault(part, {})
            node[leaf] = value
            label_parts.append(f"{leaf}={value}")
        variants.append({"label": "__".join(label_parts), "config": variant})
    return variants


def _sweep_worker(job: tuple[str, dict, str]) -> tuple[str, int]:
    label, raw, out_dir = job
    cfg = parse_config(raw)
    cfg = _apply_seed_override(cfg)
    out = Path(out_dir) / label
    out.mkdir(parents=True, exist_ok=True)
    code = _run_simulate(cfg, out)
    return label, code


def _run_sweep(cfg_raw: dict, out: Path, jobs: int | None) -> int:
    variants = _expand_sweep(cfg_raw)
    jobs = jobs or os.cpu_count() or 1
    work = [(v["label"], v["config"], str(out)) for v in variants]
    if jobs == 1:
        results = [_sweep_worker(w) for w in work]
    else:
        with Pool(processes=jobs) as pool:
            results = pool.map(_sweep_worker, work)
    write_json(
        out / "sweep.json",
        {"runs": [{"label": label, "exit_code": code} for label, code in results]},
    )
    return max((code for _label, code in results), default=EXIT_OK)


def run(subcommand: str, config_path: str | Path, output: str | None = None, jobs: int | None = None) -> int:
    """Dispatch one subcommand; returns the process exit code."""
    config_path = Path(config_path)
    cfg = load_config(config_path)
    cfg = _apply_seed_override(cfg)
    out = _output_dir(cfg, output)
    if subcommand == "simulate":
        return _run_simulate(cfg, out)
    if subcommand == "fit":
        return _run_fit(cfg, config_path, out)
    if subcommand == "threshold":
        return _run_threshold(cfg, out)
    if subcommand == "weighted-study":
        return _run_weighted_study(cfg, out)
    if subcommand == "verify-inequalities":
        return _run_verify_inequalities(cfg, out)
    if subcommand == "sweep":
        raw = json.loads(Path(config_path).read_text())
        return _run_sweep(raw, out, jobs)
    raise ConfigError(f"unknown subcommand {subcommand!r}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return run(args.subcommand, args.config, args.output, args.jobs)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
