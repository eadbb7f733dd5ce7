"""Command-line harness: run a scenario config or a named preset, and
compare the trajectory ensemble against the Lindblad oracle.

Exit codes: 0 = success (and PASS for compare), 1 = validation error,
2 = compare FAIL.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import (
    ABS_BUDGET,
    SIGMA_FACTOR,
    ConfigError,
    ScenarioConfig,
    get_preset,
    parse_config,
)
from .lindblad import (
    DensityMatrix,
    build_jump_operators,
    integrate,
    stability_bound,
)
from .model import build_chain_hamiltonian
from .output import emit_csv, emit_events_csv, emit_heatmap
from .state import init_basis_state
from .trajectory import EnsembleResult, run_ensemble, run_trajectory
from .trotter import build_step


def _lindblad_run(cfg: ScenarioConfig):
    """Integrate the master-equation oracle on the trajectory recording
    grid."""
    if cfg.run.N_t % cfg.run.record_every != 0:
        raise ConfigError(
            ["lindblad/compare modes need N_t divisible by record_every"]
        )
    H = build_chain_hamiltonian(cfg.chain).to_matrix()
    jumps = build_jump_operators(
        cfg.contacts, cfg.chain.L, include_depolarizing=cfg.include_depolarizing
    )
    rho0_state = init_basis_state(cfg.chain.L, cfg.init_occupations)
    rho0 = DensityMatrix(cfg.chain.L, np.outer(rho0_state.amps, rho0_state.amps.conj()))
    dt = cfg.run.dt
    substeps = max(1, math.ceil(stability_bound(H, jumps) * dt / 0.09))
    return integrate(
        rho0,
        H,
        jumps,
        t_final=cfg.run.t_final,
        steps=cfg.run.N_t * substeps,
        record_every=substeps * cfg.run.record_every,
    )


def _lindblad_as_ensemble(lind) -> EnsembleResult:
    return EnsembleResult(
        times=lind.times,
        mean_density=lind.densities,
        stderr=np.zeros_like(lind.densities),
        events=[],
        n_traj=0,
    )


def compare_verdict(ens: EnsembleResult, lind) -> dict:
    diff = np.abs(ens.mean_density - lind.densities)
    excess = diff - SIGMA_FACTOR * ens.stderr
    return {
        "sigma_factor": SIGMA_FACTOR,
        "abs_budget": ABS_BUDGET,
        "max_abs_deviation": float(diff.max()),
        "max_excess_over_sigma": float(excess.max()),
        "pass": bool(excess.max() <= ABS_BUDGET),
        "oracle_max_trace_drift": lind.max_trace_drift,
        "oracle_max_hermiticity_defect": lind.max_hermiticity_defect,
        "oracle_min_eigenvalue": lind.min_eigenvalue,
    }


def run_scenario(
    cfg: ScenarioConfig,
    out_dir,
    workers: int | None = None,
    single: bool = False,
) -> int:
    """Execute one scenario and write its output files.  Returns the
    process exit code."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ham = build_chain_hamiltonian(cfg.chain)
    plan = build_step(ham, cfg.run.dt)

    if cfg.mode == "closed":
        run = replace(cfg.run, N_traj=1)
        ens = run_ensemble(plan, (), run, cfg.init_occupations, workers=1)
        emit_csv(ens, out / "density.csv")
        emit_events_csv(ens.events, out / "events.csv")
        if cfg.emit_heatmap:
            emit_heatmap(ens, out / "heatmap.svg", n_steps=run.N_t)
        return 0

    if cfg.mode == "open":
        ens = run_ensemble(plan, cfg.contacts, cfg.run, cfg.init_occupations, workers=workers)
        emit_csv(ens, out / "density.csv")
        emit_events_csv(ens.events, out / "events.csv")
        if cfg.emit_heatmap:
            emit_heatmap(ens, out / "heatmap.svg", n_steps=cfg.run.N_t)
        if single:
            rec = run_trajectory(plan, cfg.contacts, cfg.run, cfg.init_occupations, 0)
            solo = EnsembleResult(
                times=rec.times,
                mean_density=rec.density,
                stderr=np.zeros_like(rec.density),
                events=rec.events,
                n_traj=1,
            )
            emit_csv(solo, out / "single_density.csv")
            emit_events_csv(solo.events, out / "single_events.csv")
            emit_heatmap(solo, out / "single_heatmap.svg", n_steps=cfg.run.N_t)
        return 0

    if cfg.mode == "lindblad-check":
        lind = _lindblad_run(cfg)
        emit_csv(_lindblad_as_ensemble(lind), out / "density.csv")
        return 0

    if cfg.mode == "compare":
        ens = run_ensemble(plan, cfg.contacts, cfg.run, cfg.init_occupations, workers=workers)
        lind = _lindblad_run(cfg)
        emit_csv(ens, out / "density.csv")
        emit_csv(_lindblad_as_ensemble(lind), out / "lindblad.csv")
        emit_events_csv(ens.events, out / "events.csv")
        if cfg.emit_heatmap:
            emit_heatmap(ens, out / "heatmap.svg", n_steps=cfg.run.N_t)
        verdict = compare_verdict(ens, lind)
        (out / "verdict.json").write_text(json.dumps(verdict, indent=2) + "\n")
        print(f"compare: max|diff| = {verdict['max_abs_deviation']:.4f}, "
              f"{'PASS' if verdict['pass'] else 'FAIL'}")
        return 0 if verdict["pass"] else 2

    raise ConfigError([f"unknown mode {cfg.mode!r}"])


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="openchain",
        description="Open fermionic chain: stochastic measure-and-reset "
        "trajectories with a Lindblad oracle",
    )
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario from a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--out", default=None, help="output directory")
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--single", action="store_true",
                     help="also emit one seeded trajectory (open mode)")

    pre = sub.add_parser("preset", help="run a named preset")
    pre.add_argument("name")
    pre.add_argument("--out", default=None)
    pre.add_argument("--seed", type=int, default=None)
    pre.add_argument("--traj", type=int, default=None)
    pre.add_argument("--workers", type=int, default=None)
    pre.add_argument("--single", action="store_true")

    cmp_ = sub.add_parser("compare", help="trajectory-vs-Lindblad comparison")
    cmp_.add_argument("--config", required=True)
    cmp_.add_argument("--out", default=None)
    cmp_.add_argument("--workers", type=int, default=None)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            cfg = get_preset(args.name, seed=args.seed, n_traj=args.traj)
            out = args.out or f"out_{args.name}"
        else:
            cfg = parse_config(Path(args.config).read_text())
            if args.command == "compare" and cfg.mode != "compare":
                raise ConfigError(
                    [f"compare subcommand needs mode='compare', config has {cfg.mode!r}"]
                )
            out = args.out or cfg.output_path or "out"
        single = getattr(args, "single", False)
        return run_scenario(cfg, out, workers=args.workers, single=single)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
