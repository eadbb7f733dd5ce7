#!/usr/bin/env python3
"""Trajectory ensemble vs the dense Lindblad oracle, swept over step count.

For a small source-drain chain, runs the stochastic ensemble at several
N_t and prints the maximum density deviation from the master-equation
solution.  The deviation shrinks roughly linearly in dt, which separates
the O(dt) method bias from Monte-Carlo noise (roughly 3 * stderr).
"""

import argparse

import numpy as np

from openchain import build_chain_hamiltonian, build_step, run_ensemble
from openchain.lindblad import DensityMatrix, build_jump_operators, integrate, stability_bound
from openchain.model import ChainSpec
from openchain.state import init_basis_state
from openchain.trajectory import ContactSpec, RunConfig


def oracle_densities(chain, contacts, t_final, grid_steps, record_every, init):
    H = build_chain_hamiltonian(chain).to_matrix()
    jumps = build_jump_operators(contacts, chain.L)
    psi = init_basis_state(chain.L, init)
    rho0 = DensityMatrix(chain.L, np.outer(psi.amps, psi.amps.conj()))
    dt = t_final / grid_steps
    substeps = max(1, int(np.ceil(stability_bound(H, jumps) * dt / 0.09)))
    res = integrate(rho0, H, jumps, t_final=t_final,
                    steps=grid_steps * substeps,
                    record_every=substeps * record_every)
    return res


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sites", type=int, default=2, choices=range(1, 9))
    ap.add_argument("--gamma", type=float, default=3.0)
    ap.add_argument("--v", type=float, default=10.0)
    ap.add_argument("--coupling", type=float, default=0.5)
    ap.add_argument("--t-final", type=float, default=10.0)
    ap.add_argument("--traj", type=int, default=4000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--steps", type=int, nargs="+", default=[20, 40, 80, 160])
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    chain = ChainSpec(L=args.sites, gamma=args.gamma, v=args.v)
    contacts = (ContactSpec(0, args.coupling, 1.0, "S"),
                ContactSpec(args.sites - 1, args.coupling, 0.0, "D"))
    init = (0,) if args.sites > 0 else ()

    print(f"{'N_t':>6} {'dt':>8} {'max|diff|':>10} {'3*stderr':>9}")
    for n_t in args.steps:
        record_every = max(1, n_t // 20)
        cfg = RunConfig(t_final=args.t_final, N_t=n_t, N_traj=args.traj,
                        seed=args.seed, record_every=record_every)
        plan = build_step(build_chain_hamiltonian(chain), cfg.dt)
        ens = run_ensemble(plan, contacts, cfg, init, workers=args.workers)
        lind = oracle_densities(chain, contacts, args.t_final, n_t, record_every, init)
        diff = np.abs(ens.mean_density - lind.densities)
        print(f"{n_t:>6} {cfg.dt:>8.4f} {diff.max():>10.4f} "
              f"{3.0 * ens.stderr.max():>9.4f}")


if __name__ == "__main__":
    main()
