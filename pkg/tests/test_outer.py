import numpy as np
import pytest

from conftest import random_policy
from twoway_energy import (
    JointStatePolicy,
    JointSymbolDist,
    NotIrreducibleError,
    SearchConfig,
    optimize_outer_sum,
    optimize_outer_weighted,
    optimize_sum_rate,
    outer_values,
    rates_for_policy,
    uniform_policy,
)

FAST = SearchConfig(restarts=6, tol=1e-6, seed=0)


def test_boundary_zero_validation():
    good = JointStatePolicy(
        dists=(
            JointSymbolDist(0.5, 0.5, 0.0, 0.0),
            JointSymbolDist(0.5, 0.0, 0.5, 0.0),
        )
    )
    assert good.units == 1
    with pytest.raises(ValueError):
        JointStatePolicy(
            dists=(
                JointSymbolDist(0.5, 0.0, 0.5, 0.0),  # node 1 sends '1' at state 0
                JointSymbolDist(0.5, 0.0, 0.5, 0.0),
            )
        )
    with pytest.raises(ValueError):
        JointStatePolicy(
            dists=(
                JointSymbolDist(0.5, 0.5, 0.0, 0.0),
                JointSymbolDist(0.5, 0.5, 0.0, 0.0),  # node 2 sends '1' at state U
            )
        )


def test_outer_values_u1_single_bit_per_state():
    pol = JointStatePolicy(
        dists=(
            JointSymbolDist(0.5, 0.5, 0.0, 0.0),
            JointSymbolDist(0.5, 0.0, 0.5, 0.0),
        )
    )
    vals = outer_values(pol)
    assert vals.stationary == pytest.approx(np.array([0.5, 0.5]))
    assert vals.sum_bound == pytest.approx(1.0)


def test_outer_values_of_product_policy_match_inner_rates():
    rng = np.random.default_rng(0)
    for _ in range(30):
        units = int(rng.integers(1, 10))
        pol = random_policy(rng, units)
        rates = rates_for_policy(pol)
        vals = outer_values(JointStatePolicy.from_marginal(pol))
        # independence: joint entropy splits, conditionals equal marginals
        assert vals.sum_bound == pytest.approx(rates.total, abs=1e-10)
        assert vals.r1_bound == pytest.approx(rates.r1, abs=1e-10)
        assert vals.r2_bound == pytest.approx(rates.r2, abs=1e-10)


def test_outer_values_frozen_policy_is_reducible():
    frozen = JointStatePolicy(
        dists=(
            JointSymbolDist(1.0, 0.0, 0.0, 0.0),
            JointSymbolDist(1.0, 0.0, 0.0, 0.0),
        )
    )
    with pytest.raises(NotIrreducibleError):
        outer_values(frozen)


def test_sum_bound_capped_by_boundary_occupancy():
    rng = np.random.default_rng(1)
    for _ in range(30):
        units = int(rng.integers(1, 10))
        vals = outer_values(JointStatePolicy.from_marginal(random_policy(rng, units)))
        pi = vals.stationary
        assert vals.sum_bound <= 2.0 - pi[0] - pi[-1] + 1e-12


def test_optimize_outer_u1_is_one_bit():
    _, vals = optimize_outer_sum(1, search=FAST)
    assert vals.sum_bound == pytest.approx(1.0, abs=1e-6)


def test_optimize_outer_dominates_inner():
    for units in (1, 2, 3, 5):
        inner = optimize_sum_rate(units, search=FAST)
        _, vals = optimize_outer_sum(units, search=FAST)
        assert vals.sum_bound >= inner.objective - 1e-6


def test_optimize_outer_accepts_seed_policies():
    inner = optimize_sum_rate(3, search=FAST)
    seed_pol = JointStatePolicy.from_marginal(inner.policy)
    _, vals = optimize_outer_sum(3, search=FAST, seed_policies=[seed_pol])
    assert vals.sum_bound >= inner.objective - 1e-9


def test_optimize_outer_nondecreasing_in_units():
    values = []
    for units in range(1, 7):
        _, vals = optimize_outer_sum(units, search=FAST)
        values.append(vals.sum_bound)
    for lo, hi in zip(values, values[1:]):
        assert hi >= lo - 1e-3


def test_outer_result_respects_entropy_cap():
    for units in (1, 2, 4):
        _, vals = optimize_outer_sum(units, search=FAST)
        pi = vals.stationary
        assert vals.sum_bound <= 2.0 - pi[0] - pi[-1] + 1e-9
        assert vals.sum_bound <= 2.0


def test_optimize_outer_weighted_balanced_weight_bounds_sum():
    # at even weights the weighted objective is r1+r2 <= joint sum bound
    _, weighted = optimize_outer_weighted(2, 0.5, search=FAST)
    _, summed = optimize_outer_sum(2, search=FAST)
    assert weighted.r1_bound + weighted.r2_bound <= summed.sum_bound + 1e-6


def test_optimize_outer_validates_arguments():
    with pytest.raises(ValueError):
        optimize_outer_sum(0)
    with pytest.raises(ValueError):
        optimize_outer_weighted(2, lam=-0.1)


def test_from_marginal_round_trip():
    pol = uniform_policy(2, 0.5)
    joint = JointStatePolicy.from_marginal(pol)
    assert joint.units == 2
    assert joint.dists[0].p01 == pytest.approx(0.5)
    assert joint.dists[1].as_tuple() == pytest.approx((0.25, 0.25, 0.25, 0.25))
    assert joint.dists[2].p10 == pytest.approx(0.5)
