"""Closed-form moments of random-graph Laplacians, the contraction-rate
constant mu(n, p), and independent oracles for validating both.

For every k >= 1, node exchangeability and the all-ones kernel force
E[L^k] = kappa_k * (nI - J) for some scalar kappa_k; the first four are
available in closed form below. The same structure makes
E[e^{-2 delta L}] = I + m * (nI - J) exactly, and mu is the 4-term
truncation of m, so 1 + n*mu approximates the second-largest eigenvalue of
the expected propagator. Two oracles are provided: complete enumeration of
all 2^C(n,2) graphs for n <= 5, and Monte Carlo sampling beyond that.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .graphs import pair_count
from .rng import RandomSource
from .spectral import as_symmetric

EXHAUSTIVE_MAX_N = 5

# Chunk size for Monte Carlo draws; fixed so accumulation order, and hence
# the exact output bytes, never depend on the total sample count's layout.
_MC_DRAW_CHUNK = 2048


def _check_np(n: int, p: float) -> None:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError("n must be an integer >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")


def _resolve_delta(n: int, delta: float | None) -> float:
    if delta is None:
        return 1.0 / n
    if delta <= 0:
        raise ValueError("delta must be positive")
    return float(delta)


def lhat(n: int) -> np.ndarray:
    """nI - J, the disagreement quadratic-form matrix."""
    return n * np.eye(n) - np.ones((n, n))


def kappa_coefficients(n: int, p: float) -> tuple[float, float, float, float]:
    """The scalars kappa_1..kappa_4 with E[L^k] = kappa_k * (nI - J)."""
    _check_np(n, p)
    k1 = p
    k2 = (n - 2) * p**2 + 2 * p
    k3 = (n - 2) * (n - 4) * p**3 + 6 * (n - 2) * p**2 + 4 * p
    k4 = ((n - 7) * (n - 3) * (n - 2) * p**4
          + 6 * (2 * n - 7) * (n - 2) * p**3
          + 25 * (n - 2) * p**2
          + 8 * p)
    return k1, k2, k3, k4


def mu(n: int, p: float, delta: float | None = None) -> float:
    """Rate constant: alternating 4-term combination of the kappa coefficients.

    mu = -2 d k1 + 2 d^2 k2 - (4/3) d^3 k3 + (2/3) d^4 k4, i.e. the order-4
    truncation of the scalar m with E[e^{-2 d L}] = I + m (nI - J). The
    default d = 1/n shortens the hold interval as the network grows;
    1 + n*mu then approximates the propagator's second-largest eigenvalue.
    """
    d = _resolve_delta(n, delta)
    k1, k2, k3, k4 = kappa_coefficients(n, p)
    return -2 * d * k1 + 2 * d * d * k2 - (4.0 / 3.0) * d**3 * k3 + (2.0 / 3.0) * d**4 * k4


@dataclass(frozen=True)
class MomentSet:
    """The closed-form constants for one (n, p, delta) configuration."""

    n: int
    p: float
    delta: float
    kappa1: float
    kappa2: float
    kappa3: float
    kappa4: float
    mu: float

    @property
    def n_mu(self) -> float:
        return self.n * self.mu

    @property
    def lambda_n_minus_1(self) -> float:
        """Approximate second-largest eigenvalue of E[e^{-2 delta L}]."""
        return 1.0 + self.n * self.mu

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "delta": self.delta,
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
            "kappa3": self.kappa3,
            "kappa4": self.kappa4,
            "mu": self.mu,
            "n_mu": self.n_mu,
            "lambda_n_minus_1": self.lambda_n_minus_1,
        }


def moment_set(n: int, p: float, delta: float | None = None) -> MomentSet:
    k1, k2, k3, k4 = kappa_coefficients(n, p)
    d = _resolve_delta(n, delta)
    return MomentSet(int(n), float(p), d, k1, k2, k3, k4, mu(n, p, d))


def expected_laplacian_power(n: int, p: float, k: int) -> np.ndarray:
    """Closed-form E[L^k] = kappa_k * (nI - J) for k in {1, 2, 3, 4}."""
    kappas = kappa_coefficients(n, p)
    if k not in (1, 2, 3, 4):
        raise ValueError("k must be in {1, 2, 3, 4}")
    return kappas[k - 1] * lhat(n)


def _enumerate_weighted_laplacians(n: int, p: float):
    """Yield (weight, L) over every labeled graph on n nodes."""
    pairs = list(itertools.combinations(range(n), 2))
    m = len(pairs)
    for bits in range(1 << m):
        a = np.zeros((n, n))
        edges = 0
        for t, (i, j) in enumerate(pairs):
            if bits >> t & 1:
                a[i, j] = a[j, i] = 1.0
                edges += 1
        yield p**edges * (1 - p) ** (m - edges), np.diag(a.sum(axis=1)) - a


def _fsum_matrices(terms: list[np.ndarray], n: int) -> np.ndarray:
    # math.fsum per entry: the enumeration is the precision reference, so the
    # only rounding left is in forming the individual weighted terms.
    stacked = np.stack(terms)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = math.fsum(stacked[:, i, j].tolist())
    return out


def exhaustive_expected_power(n: int, p: float, k: int) -> np.ndarray:
    """E[L^k] by complete enumeration of all 2^C(n,2) graphs (n <= 5).

    Laplacian powers have exact integer entries, so each term is exact and
    the fsum accumulation keeps the result good to the last bit of the
    Bernoulli weights. Any k >= 1 is accepted.
    """
    _check_np(n, p)
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(
            f"exhaustive enumeration is capped at n <= {EXHAUSTIVE_MAX_N} "
            f"(2^C(n,2) graphs); use the Monte Carlo oracle beyond that")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError("k must be a positive integer")
    terms = [w * np.linalg.matrix_power(lap, k)
             for w, lap in _enumerate_weighted_laplacians(n, p)]
    return _fsum_matrices(terms, n)


def exhaustive_expected_exponential(n: int, p: float, t: float) -> np.ndarray:
    """Exact E[e^{-t L}] by enumeration with a full expm per graph (n <= 5)."""
    _check_np(n, p)
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive enumeration is capped at n <= {EXHAUSTIVE_MAX_N}")
    if t < 0:
        raise ValueError("t must be non-negative")
    terms = []
    for w, lap in _enumerate_weighted_laplacians(n, p):
        vals, vecs = np.linalg.eigh(lap)
        terms.append(w * ((vecs * np.exp(-t * vals)) @ vecs.T))
    return _fsum_matrices(terms, n)


def expected_exp_approx(n: int, p: float, delta: float | None = None) -> np.ndarray:
    """Truncated expected propagator I + mu * (nI - J): equal diagonal entries,
    equal off-diagonal entries, rows summing to one."""
    return np.eye(n) + mu(n, p, delta) * lhat(n)


def lambda_second_largest(n: int, p: float, delta: float | None = None) -> float:
    """1 + n*mu: the (n-1)-fold eigenvalue of the truncated expected propagator.

    Via the closed-form spectrum of a*I + b*(J - I) with a = 1 + (n-1)*mu and
    b = -mu, the remaining eigenvalue is exactly 1.
    """
    return 1.0 + n * mu(n, p, delta)


@dataclass(frozen=True)
class ExpectedExponentialEstimate:
    """Monte Carlo estimate of E[e^{-2 delta L}] with element-wise standard errors."""

    mean: np.ndarray
    stderr: np.ndarray
    samples: int

    def second_largest_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.mean)[-2])


def mc_expected_exponential(n: int, p: float, delta: float | None,
                            samples: int, rng: RandomSource) -> ExpectedExponentialEstimate:
    """Sample-mean estimate of E[e^{-2 delta L}] over independent graphs.

    Accumulates in fixed-size chunks in stream order, so the result is
    reproducible bit-for-bit for a given (backend, seed) regardless of
    thread count. p = 0 and p = 1 reproduce the deterministic endpoint
    matrices exactly.
    """
    _check_np(n, p)
    d = _resolve_delta(n, delta)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    gen = rng.generator()
    m = pair_count(n)
    acc = np.zeros((n, n))
    acc2 = np.zeros((n, n))
    remaining = int(samples)
    while remaining:
        c = min(_MC_DRAW_CHUNK, remaining)
        part, part2 = kernels().batch_expm_moments(gen.random((c, m)), n, p, 2.0 * d)
        acc += part
        acc2 += part2
        remaining -= c
    mean = acc / samples
    if samples > 1:
        var = np.maximum(acc2 - samples * mean * mean, 0.0) / (samples - 1)
        stderr = np.sqrt(var / samples)
    else:
        stderr = np.zeros((n, n))
    return ExpectedExponentialEstimate(as_symmetric(mean, tol=1e-9), stderr, int(samples))
