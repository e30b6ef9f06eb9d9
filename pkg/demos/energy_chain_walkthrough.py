"""Walk through the energy-state chain: policy -> kernel -> stationary law.

Two nodes share a fixed pool of energy units over a noiseless binary
channel. Sending "1" costs the sender one unit and hands it to the
receiver, so the number of units at node 1 performs a birth-death walk.
This script builds the walk for a few policies, solves it in closed
form, and checks the solution against a long simulated run.
"""

import numpy as np

from twoway_energy import (
    MarginalPolicy,
    build_kernel,
    simulate_chain,
    stationary,
    uniform_policy,
)


def show(policy, label, steps=200_000, seed=0):
    kernel = build_kernel(policy)
    pi = stationary(kernel)
    occ = simulate_chain(kernel, steps=steps, initial_state=policy.units // 2, seed=seed)
    print(f"\n--- {label} (U={policy.units}) ---")
    print("transition kernel (rows = from-state):")
    for row in kernel.matrix:
        print("   " + "  ".join(f"{q:.4f}" for q in row))
    print("stationary law:       " + "  ".join(f"{p:.4f}" for p in pi))
    print(f"simulated occupancy:  " + "  ".join(f"{p:.4f}" for p in occ)
          + f"   ({steps} steps)")
    print(f"largest deviation:    {np.abs(occ - pi).max():.2e}")


if __name__ == "__main__":
    # the even-coin baseline: both nodes flip fair coins whenever they can
    show(uniform_policy(1, 0.5), "uniform p=0.5, single unit")
    show(uniform_policy(2, 0.5), "uniform p=0.5")

    # an asymmetric policy: node 1 hoards, node 2 spends eagerly
    asym = MarginalPolicy(
        p1=np.array([0.0, 0.2, 0.3, 0.4]),
        p2=np.array([0.0, 0.8, 0.9, 0.95]),
    )
    show(asym, "asymmetric (node 1 hoards, node 2 spends)")

    # a symmetric policy always gives a state-reversal-symmetric law
    sym = MarginalPolicy(
        p1=np.array([0.0, 0.3, 0.6, 0.8]),
        p2=np.array([0.0, 0.3, 0.6, 0.8]),
    )
    show(sym, "shared monotone policy")
    pi = stationary(build_kernel(sym))
    print(f"\nreversal symmetry check: max|pi - reverse(pi)| = "
          f"{np.abs(pi - pi[::-1]).max():.2e}")
