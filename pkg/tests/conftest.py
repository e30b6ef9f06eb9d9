import numpy as np

from twoway_energy import MarginalPolicy


def random_policy(rng, units: int, lo: float = 0.05, hi: float = 0.95) -> MarginalPolicy:
    """Random interior policy (irreducible chain guaranteed)."""
    p1 = np.concatenate(([0.0], rng.uniform(lo, hi, units)))
    p2 = np.concatenate(([0.0], rng.uniform(lo, hi, units)))
    return MarginalPolicy(p1=p1, p2=p2)


def stationary_linear_oracle(matrix: np.ndarray) -> np.ndarray:
    """Stationary law via least squares on (Q^T - I) pi = 0, sum(pi) = 1.

    Independent of the closed-form detailed-balance solver under test.
    """
    n = matrix.shape[0]
    a = np.vstack([matrix.T - np.eye(n), np.ones(n)])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    return sol
