"""Outer bounds on the rate region from per-state joint symbol
distributions consistent with the stationary energy chain.

Relaxing the independent-codebook restriction, the nodes may correlate
their symbols within each state u through a joint distribution. Any
achievable pair then satisfies

    r1 <= sum_u pi[u] * sum_b P(x2=b|u) H(P(x1=1|x2=b,u))
    r2 <= the symmetric expression in x1
    r1 + r2 <= sum_u pi[u] H(joint at u)

where pi is the stationary law of the chain whose up/down moves are the
(0,1)/(1,0) masses of the same joints. Treating pi as a function of the
joints eliminates the balance condition, so the feasible set is a
product of per-state simplices and local search is well-posed.

The sum-rate maximizer seeds itself with the best product-form policy
(a quick run of the inner optimizer) besides the usual grid and random
restarts; ascent can only improve, which keeps the outer value above
the inner one by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import MarginalPolicy, _stationary_updown, build_kernel, stationary, uniform_policy
from .entropy import JointSymbolDist
from .inner import SearchConfig, _ascend, _h, optimize_sum_rate


@dataclass(frozen=True)
class JointStatePolicy:
    """One joint symbol distribution per energy state 0..units.

    The boundary states carry forced zeros: node 1 cannot send "1" in
    state 0 and node 2 cannot send "1" in state units.
    """

    dists: tuple[JointSymbolDist, ...]

    def __post_init__(self):
        dists = tuple(self.dists)
        if len(dists) < 2:
            raise ValueError("need at least one energy unit (>= 2 states)")
        lo, hi = dists[0], dists[-1]
        if lo.p10 != 0.0 or lo.p11 != 0.0:
            raise ValueError("state 0: node 1 has no energy, its '1' mass must be 0")
        if hi.p01 != 0.0 or hi.p11 != 0.0:
            raise ValueError(f"state {len(dists) - 1}: node 2 has no energy, its '1' mass must be 0")
        object.__setattr__(self, "dists", dists)

    @property
    def units(self) -> int:
        return len(self.dists) - 1

    def state_dist(self, u: int) -> JointSymbolDist:
        return self.dists[u]

    @classmethod
    def from_marginal(cls, policy: MarginalPolicy) -> "JointStatePolicy":
        """Product-form joints of an independent-symbol policy."""
        return cls(dists=tuple(policy.state_dist(u) for u in range(policy.units + 1)))


@dataclass(frozen=True)
class OuterBoundValues:
    """The three bound expressions evaluated at one policy.

    The three are separate inequalities; in particular sum_bound is not
    constrained by r1_bound + r2_bound.
    """

    r1_bound: float
    r2_bound: float
    sum_bound: float
    stationary: np.ndarray


def _outer_terms(dists):
    """(r1, r2, sum, pi) from raw 4-tuples; zero-weight conditionals skipped."""
    units = len(dists) - 1
    up = [dists[u][1] for u in range(units)]
    down = [dists[u][2] for u in range(1, units + 1)]
    pi = _stationary_updown(up, down)
    r1 = r2 = total = 0.0
    for u in range(units + 1):
        p00, p01, p10, p11 = dists[u]
        h = 0.0
        for p in (p00, p01, p10, p11):
            if p > 0.0:
                h -= p * math.log2(p)
        total += pi[u] * h
        x2_0, x2_1 = p00 + p10, p01 + p11
        if x2_0 > 0.0:
            r1 += pi[u] * x2_0 * _h(p10 / x2_0)
        if x2_1 > 0.0:
            r1 += pi[u] * x2_1 * _h(p11 / x2_1)
        x1_0, x1_1 = p00 + p01, p10 + p11
        if x1_0 > 0.0:
            r2 += pi[u] * x1_0 * _h(p01 / x1_0)
        if x1_1 > 0.0:
            r2 += pi[u] * x1_1 * _h(p11 / x1_1)
    return r1, r2, total, pi


def outer_values(policy: JointStatePolicy) -> OuterBoundValues:
    """Evaluate the three bound expressions at one joint-state policy.

    Raises NotIrreducibleError when the induced chain is reducible
    (e.g. a state that never moves)."""
    raw = [d.as_tuple() for d in policy.dists]
    r1, r2, total, pi = _outer_terms(raw)
    return OuterBoundValues(
        r1_bound=r1, r2_bound=r2, sum_bound=total, stationary=np.array(pi)
    )


# -- maximization over joint-state policies ---------------------------------
#
# Free coordinates per state: boundary states have one ((0,1) mass at
# state 0, (1,0) mass at state units), interior states three ((0,1),
# (1,0), (1,1)); the (0,0) mass absorbs the remainder. Every entry is
# kept >= clamp so the chain stays irreducible and entropies smooth.


def _unpack(x, units: int):
    dists = []
    k = 0
    for u in range(units + 1):
        if u == 0:
            b = x[k]
            k += 1
            dists.append((1.0 - b, b, 0.0, 0.0))
        elif u == units:
            a = x[k]
            k += 1
            dists.append((1.0 - a, 0.0, a, 0.0))
        else:
            p01, p10, p11 = x[k], x[k + 1], x[k + 2]
            k += 3
            dists.append((1.0 - p01 - p10 - p11, p01, p10, p11))
    return dists


def _pack(dists, units: int, clamp: float):
    x = []
    for u in range(units + 1):
        if u == 0:
            x.append(dists[u][1])
        elif u == units:
            x.append(dists[u][2])
        else:
            x.extend(dists[u][1:4])
    return np.clip(np.array(x, dtype=float), clamp, 1.0 - clamp)


def _coord_layout(units: int):
    """(state, slot, offsets of sibling coords) per free coordinate."""
    layout = []
    k = 0
    for u in range(units + 1):
        if u in (0, units):
            layout.append((u, None))
            k += 1
        else:
            for j in range(3):
                siblings = [k + t for t in range(3) if t != j]
                layout.append((u, siblings))
            k += 3
    return layout


def _joint_policy(dists) -> JointStatePolicy:
    return JointStatePolicy(
        dists=tuple(JointSymbolDist(*(max(0.0, p) for p in d)) for d in dists)
    )


def _optimize_outer(units, weight, search, seed_policies):
    config = search or SearchConfig()
    clamp = config.clamp
    layout = _coord_layout(units)
    nfree = len(layout)

    def obj(x):
        dists = _unpack(x, units)
        for d in dists:
            if d[0] < clamp * 0.5:
                return -math.inf
        r1, r2, total, _ = _outer_terms(dists)
        return weight(r1, r2, total)

    def bounds(x, i):
        _, siblings = layout[i]
        if siblings is None:
            return clamp, 1.0 - clamp
        room = 1.0 - sum(x[s] for s in siblings) - clamp
        return clamp, max(clamp, room)

    starts = [_pack([d.as_tuple() for d in sp.dists], units, clamp) for sp in seed_policies]
    rng = np.random.default_rng(config.seed)
    while len(starts) < max(config.restarts, len(starts)):
        if len(starts) == len(seed_policies):
            x = _pack(
                [d.as_tuple() for d in JointStatePolicy.from_marginal(uniform_policy(units)).dists],
                units,
                clamp,
            )
        else:
            vals = []
            for u in range(units + 1):
                if u in (0, units):
                    vals.append(rng.uniform(0.1, 0.9))
                else:
                    vals.extend(rng.dirichlet((1.0, 1.0, 1.0, 1.0))[1:4])
            x = np.clip(np.array(vals), clamp, 1.0 - clamp)
        starts.append(x)

    best_x, best_f = None, -math.inf
    for start in starts:
        x, f = _ascend(start.copy(), obj, bounds, config.tol)
        if f > best_f + 1e-9:
            best_x, best_f = x.copy(), f

    policy = _joint_policy(_unpack(best_x, units))
    return policy, outer_values(policy)


def optimize_outer_sum(
    units: int,
    search: SearchConfig | None = None,
    seed_policies=(),
) -> tuple[JointStatePolicy, OuterBoundValues]:
    """Maximize the joint-entropy sum-rate bound over joint-state policies.

    seed_policies are extra starting points (e.g. a previously optimized
    product policy); when none are given a quick inner optimization
    supplies one, so the returned bound dominates the best product
    policy it can find.
    """
    if units < 1:
        raise ValueError("units must be >= 1")
    config = search or SearchConfig()
    seeds = list(seed_policies)
    if not seeds:
        quick = SearchConfig(
            restarts=max(2, config.restarts // 8),
            tol=config.tol,
            seed=config.seed + 1,
            clamp=config.clamp,
        )
        seeds.append(JointStatePolicy.from_marginal(optimize_sum_rate(units, 0.5, quick).policy))
    return _optimize_outer(units, lambda r1, r2, s: s, config, seeds)


def optimize_outer_weighted(
    units: int,
    lam: float = 0.5,
    search: SearchConfig | None = None,
    seed_policies=(),
) -> tuple[JointStatePolicy, OuterBoundValues]:
    """Maximize 2*(lam*r1_bound + (1-lam)*r2_bound) over joint-state policies."""
    if units < 1:
        raise ValueError("units must be >= 1")
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0,1]")
    config = search or SearchConfig()
    seeds = list(seed_policies)
    if not seeds:
        quick = SearchConfig(
            restarts=max(2, config.restarts // 8),
            tol=config.tol,
            seed=config.seed + 1,
            clamp=config.clamp,
        )
        seeds.append(JointStatePolicy.from_marginal(optimize_sum_rate(units, lam, quick).policy))
    return _optimize_outer(
        units, lambda r1, r2, s: 2.0 * (lam * r1 + (1.0 - lam) * r2), config, seeds
    )
