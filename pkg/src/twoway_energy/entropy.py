"""Exact probability and entropy helpers for binary symbol pairs.

Everything here is a pure function on small immutable values: Bernoulli
parameters and joint distributions over the four outcomes of a symbol
pair (x1, x2). Entropies are in bits, with the usual convention
0*log2(0) = 0. No smoothing is applied inside entropy computations;
clamping away from degenerate probabilities is the optimizers' job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

_NORM_TOL = 1e-12


def binary_entropy(p: float) -> float:
    """Entropy of a Bern(p) symbol in bits; raises ValueError outside [0,1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Bernoulli parameter must lie in [0,1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


@dataclass(frozen=True)
class JointSymbolDist:
    """Distribution of one symbol pair: outcomes (0,0), (0,1), (1,0), (1,1).

    p_ab is the probability that node 1 sends a and node 2 sends b.
    Entries must be nonnegative and sum to 1 within 1e-12.
    """

    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self):
        probs = (self.p00, self.p01, self.p10, self.p11)
        if any(p < 0.0 for p in probs):
            raise ValueError(f"negative probability in {probs}")
        total = sum(probs)
        if abs(total - 1.0) > _NORM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p00, self.p01, self.p10, self.p11)


class JointFactorization(NamedTuple):
    """Marginals and conditionals of a JointSymbolDist.

    p_x1 / p_x2 are the marginal probabilities of sending "1".
    p_x1_given_x2[b] is P(x1=1 | x2=b); None marks a conditional on a
    zero-probability symbol, which is undefined. Wherever such a
    conditional appears in a weighted entropy sum its weight is the zero
    marginal, so the term contributes nothing.
    """

    p_x1: float
    p_x2: float
    p_x1_given_x2: tuple[Optional[float], Optional[float]]
    p_x2_given_x1: tuple[Optional[float], Optional[float]]


def joint_entropy(d: JointSymbolDist) -> float:
    """Shannon entropy of the symbol pair in bits."""
    h = 0.0
    for p in d.as_tuple():
        if p > 0.0:
            h -= p * math.log2(p)
    return h


def marginals_and_conditionals(d: JointSymbolDist) -> JointFactorization:
    """Factor a joint symbol distribution into marginals and conditionals."""
    p_x1 = d.p10 + d.p11
    p_x2 = d.p01 + d.p11
    px2 = (d.p00 + d.p10, p_x2)  # P(x2=0), P(x2=1)
    px1 = (d.p00 + d.p01, p_x1)
    ones_given_x2 = (d.p10, d.p11)  # P(x1=1, x2=b)
    ones_given_x1 = (d.p01, d.p11)
    c1 = tuple(
        ones_given_x2[b] / px2[b] if px2[b] > 0.0 else None for b in (0, 1)
    )
    c2 = tuple(
        ones_given_x1[a] / px1[a] if px1[a] > 0.0 else None for a in (0, 1)
    )
    return JointFactorization(p_x1, p_x2, c1, c2)


def joint_from_marginals(p1: float, p2: float) -> JointSymbolDist:
    """Product distribution of independent Bern(p1) and Bern(p2) symbols."""
    for p in (p1, p2):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Bernoulli parameter must lie in [0,1], got {p}")
    return JointSymbolDist(
        p00=(1.0 - p1) * (1.0 - p2),
        p01=(1.0 - p1) * p2,
        p10=p1 * (1.0 - p2),
        p11=p1 * p2,
    )
