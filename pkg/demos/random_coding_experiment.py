"""Monte Carlo check of the level-multiplexed random-coding scheme.

Each node draws one codebook per energy level it can hold; symbols are
multiplexed over channel uses according to the realized state sequence,
with Bernoulli padding after a codeword runs out. Decoders demultiplex
via the shared state sequence. Two failure modes exist: a state visited
fewer times than its codeword length (occupancy shortfall), and two
messages sharing a codeword (collision). Both margins - epsilon on the
occupancy, delta on the code rate - control them.

The experiment shows the scheme is reliable with positive margins and
collapses once the rate margin is pushed past the codebook entropy.
"""

import numpy as np

from twoway_energy import (
    SearchConfig,
    build_codebooks,
    monte_carlo_error,
    optimize_sum_rate,
    rates_for_policy,
)

if __name__ == "__main__":
    policy = optimize_sum_rate(2, search=SearchConfig(restarts=4, seed=3)).policy
    achievable = rates_for_policy(policy).total
    print("optimized policy for U=2:")
    print(f"  p1 = {np.round(policy.p1, 4)}")
    print(f"  p2 = {np.round(policy.p2, 4)}")
    print(f"  achievable sum rate: {achievable:.6f} bits/c.u.\n")

    print("margins (epsilon, delta) -> code rate and estimated error:")
    n = 50_000
    for epsilon, delta in ((0.04, 0.2), (0.02, 0.1), (0.01, 0.05)):
        books = build_codebooks(policy, n, epsilon, delta, seed=11)
        report = monte_carlo_error(books, trials=40, seed=12)
        occ_dev = np.abs(report.mean_occupancy - books.pi).max()
        print(
            f"  eps={epsilon:.2f} delta={delta:.2f}: rate {books.sum_rate():.4f} "
            f"({books.sum_rate() / achievable:6.1%} of achievable), "
            f"error {report.error_rate:.3f}, occupancy dev {occ_dev:.4f}"
        )
    print("  shrinking margins push the code rate toward the achievable "
          "value while the error stays at zero.\n")

    print("pushing the rate past the packing condition (delta < 0):")
    hot = build_codebooks(policy, 1_000, 0.02, -0.1, seed=13)
    crash = monte_carlo_error(hot, trials=40, seed=14)
    print(f"  rate {hot.sum_rate():.4f} > achievable {achievable:.4f} "
          f"-> error {crash.error_rate:.2f}")
    events = {k: v for k, v in crash.e2_counts.items() if v}
    print(f"  collision counts per (node, level): {events}")
