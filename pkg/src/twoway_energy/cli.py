"""Command-line surface: stationary | inner | outer | sweep | simulate | u1.

Every command is deterministic given --seed. Option precedence is
flags > --config JSON > built-in defaults; the defaults are shown by
--help. Exit codes: 0 ok, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .chain import MarginalPolicy, build_kernel, simulate_chain, stationary, uniform_policy
from .inner import SearchConfig, optimize_sum_rate, rates_for_policy
from .outer import JointStatePolicy, optimize_outer_sum, optimize_outer_weighted
from .protocol import (
    build_codebooks,
    monte_carlo_error,
    naive_frame_rate,
    optimal_timeshare_sim,
    variable_length_sim,
)

DEFAULTS = {
    "budget": 2,
    "lam": 0.5,
    "restarts": 32,
    "tol": 1e-6,
    "seed": 0,
    "blocklength": 100_000,
    "epsilon": 0.01,
    "delta": 0.02,
    "trials": 100,
    "p": 0.5,
    "bits": 10_000,
    "frame": 2,
}


class UsageError(Exception):
    """Bad invocation or malformed input file."""


@dataclass(frozen=True)
class SweepRow:
    """One line of the bounds-versus-units comparison."""

    units: int
    sum_conventional: float
    sum_optimized: float
    sum_outer: float


def _add_common(parser: argparse.ArgumentParser, keys) -> None:
    opt = {
        "budget": ("--budget", int, "total number of energy units U"),
        "lam": ("--lambda", float, "weight on node 1's rate in the objective"),
        "restarts": ("--restarts", int, "multi-start count for the optimizers"),
        "tol": ("--tol", float, "stationarity tolerance of the coordinate ascent"),
        "seed": ("--seed", int, "RNG seed; all commands are deterministic given it"),
        "blocklength": ("--blocklength", int, "channel uses per random-coding trial"),
        "epsilon": ("--epsilon", float, "occupancy margin of the codeword lengths"),
        "delta": ("--delta", float, "rate margin below each codebook's entropy"),
        "trials": ("--trials", int, "Monte Carlo trial count"),
        "p": ("--p", float, "uniform send-'1' probability at positive energy"),
        "bits": ("--bits", int, "information bits per node for the U=1 strategies"),
        "frame": ("--frame", int, "frame size (power of two) for position coding"),
    }
    for key in keys:
        flag, typ, help_text = opt[key]
        parser.add_argument(
            flag, dest=key, type=typ, default=None,
            help=f"{help_text} (default: {DEFAULTS[key]})",
        )
    parser.add_argument(
        "--config", type=str, default=None,
        help="JSON file with defaults for any of the above keys",
    )


def _resolve(args, key):
    given = getattr(args, key, None)
    if given is not None:
        return given
    return args._config.get(key, DEFAULTS[key])


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        restarts=_resolve(args, "restarts"),
        tol=_resolve(args, "tol"),
        seed=_resolve(args, "seed"),
    )


def _load_policy_file(path: str) -> MarginalPolicy:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        return MarginalPolicy(
            p1=np.asarray(raw["p1"], dtype=float),
            p2=np.asarray(raw["p2"], dtype=float),
        )
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid policy file {path!r}: {exc}") from exc


def _policy_from_args(args) -> MarginalPolicy:
    if getattr(args, "policy", None):
        return _load_policy_file(args.policy)
    units = _resolve(args, "budget")
    if getattr(args, "optimized", False):
        return optimize_sum_rate(units, _resolve(args, "lam"), _search_config(args)).policy
    return uniform_policy(units, _resolve(args, "p"))


# -- commands ----------------------------------------------------------------


def cmd_stationary(args) -> int:
    policy = _policy_from_args(args)
    kernel = build_kernel(policy)
    pi = stationary(kernel)
    units = policy.units
    print(f"energy units: {units}")
    print(f"policy p1: {_fmt_vec(policy.p1)}")
    print(f"policy p2: {_fmt_vec(policy.p2)}")
    print("state  pi        kernel row")
    for u in range(units + 1):
        row = " ".join(f"{q:.6f}" for q in kernel.matrix[u])
        print(f"{u:>5}  {pi[u]:.6f}  {row}")
    steps = getattr(args, "simulate_steps", None)
    if steps:
        occ = simulate_chain(kernel, steps, initial_state=0, seed=_resolve(args, "seed"))
        print(f"simulated occupancy ({steps} steps): {_fmt_vec(occ)}")
    return 0


def cmd_inner(args) -> int:
    units = _resolve(args, "budget")
    lam = _resolve(args, "lam")
    result = optimize_sum_rate(units, lam, _search_config(args))
    print(f"energy units: {units}  lambda: {lam:.4f}")
    print(f"objective 2*(lam*R1+(1-lam)*R2): {result.objective:.6f}")
    print(f"R1: {result.rates.r1:.6f}  R2: {result.rates.r2:.6f}  sum: {result.rates.total:.6f}")
    print(f"optimal p1: {_fmt_vec(result.policy.p1)}")
    print(f"optimal p2: {_fmt_vec(result.policy.p2)}")
    print(f"stationary: {_fmt_vec(result.stationary)}")
    return 0


def cmd_outer(args) -> int:
    units = _resolve(args, "budget")
    lam = _resolve(args, "lam")
    config = _search_config(args)
    if lam == 0.5:
        policy, values = optimize_outer_sum(units, config)
        print(f"energy units: {units}  objective: joint-entropy sum-rate bound")
    else:
        policy, values = optimize_outer_weighted(units, lam, config)
        print(f"energy units: {units}  objective: weighted bound, lambda={lam:.4f}")
    print(f"r1_bound: {values.r1_bound:.6f}  r2_bound: {values.r2_bound:.6f}")
    print(f"sum_bound: {values.sum_bound:.6f}")
    print(f"stationary: {_fmt_vec(values.stationary)}")
    print("state  P(00)     P(01)     P(10)     P(11)")
    for u, d in enumerate(policy.dists):
        print(f"{u:>5}  {d.p00:.6f}  {d.p01:.6f}  {d.p10:.6f}  {d.p11:.6f}")
    return 0


def sweep_details(u_max: int, search: SearchConfig):
    """Rows plus the inner optimization results, for reuse by callers."""
    if u_max < 1:
        raise ValueError("budget (maximum U) must be >= 1")
    rows = []
    inner_results = []
    for units in range(1, u_max + 1):
        conventional = rates_for_policy(uniform_policy(units)).total
        inner = optimize_sum_rate(units, 0.5, search)
        _, outer_vals = optimize_outer_sum(
            units, search, seed_policies=[JointStatePolicy.from_marginal(inner.policy)]
        )
        rows.append(
            SweepRow(
                units=units,
                sum_conventional=conventional,
                sum_optimized=inner.objective,
                sum_outer=outer_vals.sum_bound,
            )
        )
        inner_results.append(inner)
    return rows, inner_results


def render_sweep_csv(rows) -> str:
    """CSV text for a sweep: 6-decimal fixed point, newline-terminated rows,
    plus a footer comment locating where the bounds first nearly meet."""
    lines = ["U,sum_conventional,sum_optimized,sum_outer"]
    for row in rows:
        lines.append(
            f"{row.units},{row.sum_conventional:.6f},"
            f"{row.sum_optimized:.6f},{row.sum_outer:.6f}"
        )
    threshold = next(
        (row.units for row in rows if row.sum_outer - row.sum_optimized <= 1e-2), None
    )
    if threshold is None:
        lines.append("# sum_optimized never within 0.01 of sum_outer in this sweep")
    else:
        lines.append(f"# sum_optimized within 0.01 of sum_outer from U={threshold}")
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    u_max = _resolve(args, "budget")
    rows, _ = sweep_details(u_max, _search_config(args))
    for row in rows:
        if not (
            row.sum_conventional <= row.sum_optimized <= row.sum_outer + 1e-6
            and row.sum_outer <= 2.0
        ):
            raise RuntimeError(f"bound ordering violated at U={row.units}: {row}")
    text = render_sweep_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    trials = _resolve(args, "trials")
    if trials < 1:
        raise UsageError("trials must be >= 1")
    units = _resolve(args, "budget")
    n = _resolve(args, "blocklength")
    epsilon = _resolve(args, "epsilon")
    delta = _resolve(args, "delta")
    seed = _resolve(args, "seed")
    policy = _policy_from_args(args)
    books = build_codebooks(policy, n, epsilon, delta, seed=seed)
    report = monte_carlo_error(books, trials, seed=seed)
    achievable = rates_for_policy(policy).total

    print(
        f"units={units} blocklength={n} epsilon={epsilon:.4f} "
        f"delta={delta:.4f} trials={trials} seed={seed}"
    )
    print(f"error rate: {report.error_rate:.4f} "
          f"({round(report.error_rate * trials)}/{trials} trials failed)")
    print("event counts per (node, level): occupancy-shortfall / collision")
    for key in sorted(report.e1_counts):
        node, level = key
        print(f"  node {node} level {level}: {report.e1_counts[key]} / {report.e2_counts[key]}")
    print("occupancy (analytic vs mean empirical):")
    for u in range(units + 1):
        print(f"  state {u}: {books.pi[u]:.6f} vs {report.mean_occupancy[u]:.6f}")
    print("rates (bits/channel use):")
    print(f"  empirical code rate:   {report.empirical_rate:.6f}")
    print(f"  achievable-rate value: {achievable:.6f}")
    return 0


def cmd_u1(args) -> int:
    m = _resolve(args, "bits")
    seed = _resolve(args, "seed")
    frame = _resolve(args, "frame")
    if m < 1:
        raise UsageError("bits must be >= 1")

    print(f"single-unit strategies with m={m} bits per node, seed={seed}")
    print(f"position coding, frame {frame}: sum rate {naive_frame_rate(frame):.6f}")

    vl = variable_length_sim(m, seed=seed)
    ok = bool(
        np.array_equal(vl.decoded_bits1, vl.sent_bits1)
        and np.array_equal(vl.decoded_bits2, vl.sent_bits2)
    )
    print(
        f"variable-length code:   sum rate {vl.sum_rate:.6f} "
        f"({vl.transcript.length} uses, decode exact: {ok})"
    )

    rng = np.random.default_rng(seed)
    bits1 = (rng.random(m) < 0.5).astype(np.uint8)
    bits2 = (rng.random(m) < 0.5).astype(np.uint8)
    ts = optimal_timeshare_sim(bits1, bits2)
    ok = bool(
        np.array_equal(ts.decoded_bits1, bits1) and np.array_equal(ts.decoded_bits2, bits2)
    )
    print(
        f"verbatim time sharing:  sum rate {ts.sum_rate:.6f} "
        f"({ts.transcript.length} uses, {ts.handover_uses} handover uses, decode exact: {ok})"
    )
    return 0


# -- wiring ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoway-energy",
        description=(
            "Inner and outer bounds on the rate region of a two-way binary "
            "noiseless channel with a fixed pool of exchangeable energy "
            "units, plus Monte Carlo validation of the achievable scheme."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stationary", help="energy-chain table for a policy")
    _add_common(p, ["budget", "p", "restarts", "tol", "seed", "lam"])
    p.add_argument("--policy", type=str, default=None,
                   help="JSON file with explicit p1/p2 arrays")
    p.add_argument("--optimized", action="store_true",
                   help="use the optimized policy instead of the uniform one")
    p.add_argument("--simulate-steps", type=int, default=None,
                   help="also print simulated occupancy over this many steps")
    p.set_defaults(run=cmd_stationary)

    p = sub.add_parser("inner", help="maximize the achievable weighted sum rate")
    _add_common(p, ["budget", "lam", "restarts", "tol", "seed"])
    p.set_defaults(run=cmd_inner)

    p = sub.add_parser("outer", help="maximize the outer bound")
    _add_common(p, ["budget", "lam", "restarts", "tol", "seed"])
    p.set_defaults(run=cmd_outer)

    p = sub.add_parser("sweep", help="bounds versus units, as CSV")
    _add_common(p, ["budget", "restarts", "tol", "seed"])
    p.add_argument("--out", type=str, default=None, help="CSV output path (default: stdout)")
    p.set_defaults(run=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo run of the random-coding scheme")
    _add_common(
        p,
        ["budget", "blocklength", "epsilon", "delta", "trials", "seed", "p",
         "restarts", "tol", "lam"],
    )
    p.add_argument("--policy", type=str, default=None,
                   help="JSON file with explicit p1/p2 arrays")
    p.add_argument("--optimized", action="store_true",
                   help="simulate the optimized policy instead of the uniform one")
    p.set_defaults(run=cmd_simulate)

    p = sub.add_parser("u1", help="run the three single-unit strategies")
    _add_common(p, ["bits", "frame", "seed"])
    p.set_defaults(run=cmd_u1)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.config:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
            if not isinstance(loaded, dict):
                raise UsageError(f"config {args.config!r} must hold a JSON object")
            unknown = set(loaded) - set(DEFAULTS)
            if unknown:
                raise UsageError(f"config {args.config!r} has unknown keys: {sorted(unknown)}")
            args._config = loaded
        else:
            args._config = {}
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, json.JSONDecodeError) else 1
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _fmt_vec(values) -> str:
    return "[" + " ".join(f"{v:.6f}" for v in np.asarray(values)) + "]"


if __name__ == "__main__":
    sys.exit(main())
