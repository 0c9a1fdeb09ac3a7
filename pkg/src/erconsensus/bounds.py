"""Closed-form convergence-rate bounds for the sampled consensus dynamics.

Two bounds, both driven by the contraction eigenvalue 1 + n*mu of the
expected one-step propagator acting on the disagreement subspace:

* the conditional expected one-step decrease of the Lyapunov value V is at
  most (n*mu) * |zhat|^2, and
* the probability that the squared disagreement ever reaches gamma from
  step N onward is at most (|zhat(0)|^2 / gamma) * (1 + n*mu)^N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .csvio import write_table
from .moments import lambda_second_largest, mu


def decrease_coefficient(n: int, p: float, delta: float | None = None) -> float:
    """The expected-decrease slope, n*mu, computed as the contraction
    eigenvalue minus one so the two quantities agree exactly in floating
    point (the subtraction is exact for eigenvalues in [0.5, 2])."""
    return lambda_second_largest(n, p, delta) - 1.0


def expected_decrease_bound(n: int, p: float, delta: float | None,
                            zhat_norm_sq: float) -> float:
    """Upper bound on E[V(next) - V(current) | current]: n*mu times the
    current squared disagreement norm (non-positive on the supported grid)."""
    if zhat_norm_sq < 0:
        raise ValueError("zhat_norm_sq must be non-negative")
    return decrease_coefficient(n, p, delta) * zhat_norm_sq


def _contraction(n: int, p: float, delta: float | None) -> float:
    lam = lambda_second_largest(n, p, delta)
    if lam <= 0:
        raise ValueError(
            "contraction factor 1 + n*mu is not positive for this "
            "configuration; the tail bound does not apply")
    return lam


def tail_probability_bound(n: int, p: float, delta: float | None,
                           zhat0_norm_sq: float, gamma: float, big_n: int) -> float:
    """min(1, (|zhat(0)|^2 / gamma) * (1 + n*mu)^N).

    The raw geometric value can exceed 1, where it is vacuous as a
    probability, so it is capped here; ``bound_report`` keeps the raw value
    alongside for plotting. Configurations with 1 + n*mu <= 0 are rejected
    rather than extrapolated.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if zhat0_norm_sq < 0:
        raise ValueError("zhat0_norm_sq must be non-negative")
    if big_n < 0:
        raise ValueError("N must be non-negative")
    lam = _contraction(n, p, delta)
    return min(1.0, (zhat0_norm_sq / gamma) * lam**big_n)


@dataclass(frozen=True)
class BoundReport:
    """Tail-bound sequence plus the constants behind it."""

    n: int
    p: float
    delta: float
    gamma: float
    zhat0_norm_sq: float
    n_mu: float
    decrease_bound_coefficient: float
    N: np.ndarray
    tail_capped: np.ndarray
    tail_raw: np.ndarray

    def to_json(self) -> dict:
        return {
            "n": self.n, "p": self.p, "delta": self.delta,
            "gamma": self.gamma, "zhat0_norm_sq": self.zhat0_norm_sq,
            "n_mu": self.n_mu,
            "decrease_bound_coefficient": self.decrease_bound_coefficient,
            "tail_capped": self.tail_capped.tolist(),
            "tail_raw": self.tail_raw.tolist(),
        }

    def write_csv(self, path) -> None:
        write_table(path, {
            "n": self.n, "p": self.p, "delta": self.delta,
            "gamma": self.gamma, "zhat0_norm_sq": self.zhat0_norm_sq,
        }, [("N", self.N), ("bound_capped", self.tail_capped),
            ("bound_raw", self.tail_raw)])


def bound_report(n: int, p: float, delta: float | None, zhat0_norm_sq: float,
                 gamma: float, horizon: int) -> BoundReport:
    """Evaluate the tail bound for N = 0..horizon."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    lam = _contraction(n, p, delta)
    big_n = np.arange(horizon + 1)
    raw = (zhat0_norm_sq / gamma) * lam**big_n
    resolved = delta if delta is not None else 1.0 / n
    return BoundReport(
        n=n, p=p, delta=float(resolved), gamma=float(gamma),
        zhat0_norm_sq=float(zhat0_norm_sq),
        n_mu=n * mu(n, p, delta),
        decrease_bound_coefficient=decrease_coefficient(n, p, delta),
        N=big_n, tail_capped=np.minimum(1.0, raw), tail_raw=raw)
