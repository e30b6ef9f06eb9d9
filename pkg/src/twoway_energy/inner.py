"""Achievable rate pairs of independent per-level codebooks, and their
maximization over transmission policies.

A marginal policy achieves R1 = sum_u pi[u] H(p1[u]) and
R2 = sum_u pi[u] H(p2[units-u]) where pi is the stationary law of the
induced energy chain. The weighted objective 2*(lam*R1 + (1-lam)*R2)
reduces to the plain sum-rate at lam = 0.5.

The objective is smooth but nonconvex in the 2*units free
probabilities, so the maximizer runs multi-start coordinate ascent:
constant grid seeds plus random restarts, each refined by coordinate-
wise golden-section search on [clamp, 1-clamp]. The clamp keeps every
policy strictly interior, hence the chain irreducible; the boundary of
the rate region is approached but never evaluated at degenerate
policies. Restarts are independent and the reduction (max by objective,
first within 1e-9 wins) is deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import MarginalPolicy, _stationary_updown, build_kernel, stationary

GRID_SEEDS = (0.5, 0.2, 0.35, 0.65, 0.8)
_GOLDEN_XTOL = 1e-6
_MAX_SWEEPS = 200
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RatePair:
    """Rates in bits per channel use."""

    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0.0 or self.r2 < 0.0:
            raise ValueError("rates must be nonnegative")
        if self.r1 + self.r2 > 2.0 + 1e-12:
            raise ValueError("sum rate cannot exceed 2 bits per channel use")

    @property
    def total(self) -> float:
        return self.r1 + self.r2


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the multi-start local search (shared by both bounds)."""

    restarts: int = 32
    tol: float = 1e-6
    seed: int = 0
    clamp: float = 1e-6

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not 0.0 < self.clamp < 0.5:
            raise ValueError("clamp must lie in (0, 0.5)")


@dataclass(frozen=True)
class OptimizationResult:
    policy: MarginalPolicy
    rates: RatePair
    stationary: np.ndarray
    objective: float
    restarts_used: int


def _h(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def _rates_updown(p1, p2):
    """(r1, r2, pi) for policy lists with the forced zeros at index 0."""
    units = len(p1) - 1
    up = [(1.0 - p1[u]) * p2[units - u] for u in range(units)]
    down = [p1[u] * (1.0 - p2[units - u]) for u in range(1, units + 1)]
    pi = _stationary_updown(up, down)
    r1 = sum(pi[u] * _h(p1[u]) for u in range(units + 1))
    r2 = sum(pi[u] * _h(p2[units - u]) for u in range(units + 1))
    return r1, r2, pi


def rates_for_policy(policy: MarginalPolicy) -> RatePair:
    """Achievable rate pair of a policy; raises NotIrreducibleError when
    the induced chain cannot visit every state."""
    r1, r2, _ = _rates_updown(policy.p1.tolist(), policy.p2.tolist())
    return RatePair(r1=r1, r2=r2)


def _golden_max(f, lo: float, hi: float, xtol: float = _GOLDEN_XTOL):
    """Golden-section maximization of a unimodal-ish f on [lo, hi]."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _ascend(x, obj, bounds, tol):
    """Coordinate-wise golden-section ascent until a full sweep gains < tol."""
    f = obj(x)
    for _ in range(_MAX_SWEEPS):
        gained = 0.0
        for i in range(len(x)):
            lo, hi = bounds(x, i)
            if hi - lo <= _GOLDEN_XTOL:
                continue

            def along(v, i=i):
                old = x[i]
                x[i] = v
                val = obj(x)
                x[i] = old
                return val

            xi, fi = _golden_max(along, lo, hi)
            if fi > f:
                gained += fi - f
                x[i] = xi
                f = fi
        if gained < tol:
            break
    return x, f


def _policy_from_vector(v, units: int) -> MarginalPolicy:
    p1 = np.concatenate(([0.0], v[:units]))
    p2 = np.concatenate(([0.0], v[units:]))
    return MarginalPolicy(p1=p1, p2=p2)


def _starts(nfree: int, config: SearchConfig):
    rng = np.random.default_rng(config.seed)
    out = [np.full(nfree, g) for g in GRID_SEEDS[: min(len(GRID_SEEDS), config.restarts)]]
    while len(out) < config.restarts:
        out.append(rng.uniform(0.1, 0.9, nfree))
    return out


def optimize_sum_rate(
    units: int,
    lam: float = 0.5,
    search: SearchConfig | None = None,
) -> OptimizationResult:
    """Best policy found for the weighted objective 2*(lam*R1 + (1-lam)*R2).

    Multi-start coordinate ascent as described in the module docstring;
    always returns the best policy found, deterministic given
    search.seed.
    """
    if units < 1:
        raise ValueError("units must be >= 1")
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0,1]")
    config = search or SearchConfig()
    clamp = config.clamp

    p1 = [0.0] * (units + 1)
    p2 = [0.0] * (units + 1)

    def obj(v):
        for e in range(units):
            p1[e + 1] = v[e]
            p2[e + 1] = v[units + e]
        r1, r2, _ = _rates_updown(p1, p2)
        return 2.0 * (lam * r1 + (1.0 - lam) * r2)

    def bounds(v, i):
        return clamp, 1.0 - clamp

    best_v, best_f = None, -math.inf
    for start in _starts(2 * units, config):
        v, f = _ascend(np.clip(start, clamp, 1.0 - clamp), obj, bounds, config.tol)
        if f > best_f + 1e-9:
            best_v, best_f = v.copy(), f

    policy = _policy_from_vector(best_v, units)
    rates = rates_for_policy(policy)
    pi = stationary(build_kernel(policy))
    return OptimizationResult(
        policy=policy,
        rates=rates,
        stationary=pi,
        objective=best_f,
        restarts_used=config.restarts,
    )


def region_sweep(
    units: int,
    lams,
    search: SearchConfig | None = None,
) -> list[OptimizationResult]:
    """One weighted optimization per lam, returned sorted by lam.

    The sweep explores weighted objectives only; no claim is made that
    it traces the full region boundary.
    """
    lams = list(lams)
    if not lams:
        raise ValueError("need at least one weight")
    return [optimize_sum_rate(units, lam, search) for lam in sorted(lams)]
