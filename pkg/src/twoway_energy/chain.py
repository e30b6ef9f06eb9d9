"""Energy-state birth-death chain induced by a transmission policy.

The channel state u counts the energy units held by node 1; node 2
holds the remaining units - u. One channel use moves the state by at
most one step: the pair (x1,x2)=(1,0) spends a unit at node 1 (down),
(0,1) transfers one to node 1 (up), and (0,0)/(1,1) leave the state
unchanged. A node with no energy is forced to send "0", which pins the
boundary behaviour of the chain.

All construction and solving is exact and O(units); the Monte Carlo
walk in simulate_chain is the independent check on the closed-form
stationary solution. Everything is pure given its inputs, and the
simulator owns a private RNG per call, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import JointSymbolDist, joint_from_marginals

_ROW_TOL = 1e-12


class NotIrreducibleError(ValueError):
    """The chain cannot visit every state from every state."""


@dataclass(frozen=True)
class MarginalPolicy:
    """Per-node probability of sending "1", indexed by that node's own energy.

    p1[e] applies to node 1 when it holds e units, p2[e] to node 2 when
    it holds e units (which happens in channel state units - e). Both
    arrays have length units + 1 and must start with a forced zero,
    since a node without energy cannot send "1".
    """

    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        p1 = np.asarray(self.p1, dtype=float)
        p2 = np.asarray(self.p2, dtype=float)
        if p1.ndim != 1 or p1.shape != p2.shape:
            raise ValueError("p1 and p2 must be 1-d arrays of equal length")
        if len(p1) < 2:
            raise ValueError("need at least one energy unit (arrays of length >= 2)")
        for name, arr in (("p1", p1), ("p2", p2)):
            if np.any(arr < 0.0) or np.any(arr > 1.0):
                raise ValueError(f"{name} entries must lie in [0,1]")
            if arr[0] != 0.0:
                raise ValueError(f"{name}[0] must be 0: a node with no energy sends '0'")
        p1.flags.writeable = False
        p2.flags.writeable = False
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)

    @property
    def units(self) -> int:
        return len(self.p1) - 1

    def state_dist(self, u: int) -> JointSymbolDist:
        """Joint symbol distribution in state u (node 2 holds units - u)."""
        return joint_from_marginals(float(self.p1[u]), float(self.p2[self.units - u]))

    def swapped(self) -> "MarginalPolicy":
        """Policy with the two nodes' roles exchanged."""
        return MarginalPolicy(p1=self.p2.copy(), p2=self.p1.copy())


def uniform_policy(units: int, p: float = 0.5) -> MarginalPolicy:
    """Both nodes send "1" with the same probability p at every positive level."""
    if units < 1:
        raise ValueError("units must be >= 1")
    arr = np.full(units + 1, p, dtype=float)
    arr[0] = 0.0
    return MarginalPolicy(p1=arr, p2=arr.copy())


@dataclass(frozen=True)
class TransitionKernel:
    """Row-stochastic tridiagonal transition matrix over states 0..units."""

    matrix: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.matrix, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] < 2:
            raise ValueError("kernel must be a square matrix over >= 2 states")
        if np.any(q < 0.0):
            raise ValueError("transition probabilities must be nonnegative")
        rows = q.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > _ROW_TOL):
            raise ValueError(f"rows must sum to 1 within {_ROW_TOL}, got {rows}")
        off = np.abs(np.arange(q.shape[0])[:, None] - np.arange(q.shape[0])[None, :])
        if np.any(q[off > 1] != 0.0):
            raise ValueError("kernel must be tridiagonal (birth-death moves only)")
        q.flags.writeable = False
        object.__setattr__(self, "matrix", q)

    @property
    def units(self) -> int:
        return self.matrix.shape[0] - 1

    def up(self, u: int) -> float:
        """Probability of moving u -> u+1."""
        return float(self.matrix[u, u + 1])

    def down(self, u: int) -> float:
        """Probability of moving u -> u-1."""
        return float(self.matrix[u, u - 1])


def build_kernel(policy) -> TransitionKernel:
    """Transition kernel of the chain driven by a policy.

    Accepts any policy exposing units and state_dist(u): both
    MarginalPolicy (independent symbols) and the per-state joint
    policies used by the outer bound. In state u the down-move
    probability is the (1,0) mass, the up-move the (0,1) mass, and the
    rest is the self-loop. The forced zeros at the boundary states make
    infeasible moves impossible by construction; a policy that violates
    them is rejected.
    """
    units = policy.units
    q = np.zeros((units + 1, units + 1))
    for u in range(units + 1):
        d = policy.state_dist(u)
        if u == 0 and d.p10 + d.p11 != 0.0:
            raise ValueError("state 0: node 1 has no energy but sends '1' with positive probability")
        if u == units and d.p01 + d.p11 != 0.0:
            raise ValueError(f"state {units}: node 2 has no energy but sends '1' with positive probability")
        if u > 0:
            q[u, u - 1] = d.p10
        if u < units:
            q[u, u + 1] = d.p01
        stay = 1.0 - d.p10 - d.p01
        # guard tiny negative residue from float cancellation
        if stay < 0.0:
            if stay < -_ROW_TOL:
                raise ValueError(f"state {u}: move probabilities exceed 1")
            stay = 0.0
        q[u, u] = stay
    return TransitionKernel(matrix=q)


def _stationary_updown(up: list[float], down: list[float]) -> list[float]:
    """Stationary law from up[u]=q(u,u+1), down[u]=q(u+1,u); detailed balance."""
    for u, r in enumerate(up):
        if r <= 0.0:
            raise NotIrreducibleError(
                f"state {u} cannot reach state {u + 1} (up-move probability is 0)"
            )
    for u, r in enumerate(down):
        if r <= 0.0:
            raise NotIrreducibleError(
                f"state {u + 1} cannot reach state {u} (down-move probability is 0)"
            )
    w = [1.0]
    for u in range(len(up)):
        w.append(w[-1] * up[u] / down[u])
    total = sum(w)
    return [x / total for x in w]


def stationary(kernel: TransitionKernel) -> np.ndarray:
    """Unique stationary distribution of an irreducible birth-death kernel.

    Solved in closed form by the detailed-balance recursion
    pi[u+1] = pi[u] * q(u,u+1) / q(u+1,u), then normalized. Raises
    NotIrreducibleError naming the first unreachable boundary when some
    adjacent move has probability zero.
    """
    units = kernel.units
    up = [kernel.up(u) for u in range(units)]
    down = [kernel.down(u + 1) for u in range(units)]
    return np.array(_stationary_updown(up, down))


def simulate_chain(
    kernel: TransitionKernel,
    steps: int,
    initial_state: int = 0,
    seed: int = 0,
) -> np.ndarray:
    """Empirical occupancy of each state over a simulated walk.

    Counts the state at each of `steps` channel uses, starting from
    initial_state. Deterministic given seed; this is the ergodic-theorem
    oracle for stationary().
    """
    units = kernel.units
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not 0 <= initial_state <= units:
        raise ValueError(f"initial_state must lie in [0,{units}]")
    down = [kernel.down(u) if u > 0 else 0.0 for u in range(units + 1)]
    up_edge = [down[u] + (kernel.up(u) if u < units else 0.0) for u in range(units + 1)]
    rng = np.random.default_rng(seed)
    visits = [0] * (units + 1)
    u = initial_state
    remaining = steps
    while remaining > 0:
        block = min(remaining, 1 << 16)
        draws = rng.random(block)
        for r in draws:
            visits[u] += 1
            if r < down[u]:
                u -= 1
            elif r < up_edge[u]:
                u += 1
        remaining -= block
    return np.array(visits, dtype=float) / steps
