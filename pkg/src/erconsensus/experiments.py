"""Monte Carlo harnesses behind the package's two reference experiments and
the moment-validation study, all emitting reproducible CSV.

The expected-decrease experiment tracks one trajectory and, at every step,
estimates the conditional expected drop of the Lyapunov value from a batch
of freshly sampled graphs before advancing. The tail-probability experiment
runs many independent trajectories and compares the empirical suffix
exceedance frequency against the geometric tail bound. Moment validation
pits the closed-form constants against the enumeration oracle (small n) or
the Monte Carlo oracle (any n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import backend_name, kernels
from .bounds import bound_report, decrease_coefficient
from .consensus import RunConfig, lyapunov, resolve_initial
from .csvio import write_table
from .graphs import pair_count
from .moments import (
    EXHAUSTIVE_MAX_N,
    exhaustive_expected_exponential,
    exhaustive_expected_power,
    expected_laplacian_power,
    kappa_coefficients,
    lambda_second_largest,
    lhat,
    mc_expected_exponential,
    mu,
)
from .rng import RandomSource

# Trials are simulated in fixed-size blocks: small enough to keep the
# uniform buffers modest, large enough to amortize batched LAPACK calls.
_TRIAL_CHUNK = 128

ESTIMATORS = ("double-step", "one-step")


@dataclass(frozen=True)
class VdiffResult:
    """Per-step rows of the expected-decrease experiment."""

    k: np.ndarray
    empirical: np.ndarray
    bound: np.ndarray
    V: np.ndarray
    inner_samples: int
    estimator: str
    config: dict = field(default_factory=dict)

    def write_csv(self, path) -> None:
        write_table(path, self.config, [
            ("k", self.k), ("empirical", self.empirical),
            ("bound", self.bound), ("V", self.V)])


def vdiff_experiment(config: RunConfig, inner_samples: int,
                     rng: RandomSource | None = None,
                     estimator: str = "double-step") -> VdiffResult:
    """Estimate the expected per-step decrease of V along one trajectory and
    pair it with the closed-form bound.

    At step k the conditional expectation E[V(next) - V(z(k)) | z(k)] is
    estimated from ``inner_samples`` freshly sampled graphs (a dedicated
    stream per step, so the estimation never perturbs the trajectory's own
    randomness); only then does the trajectory advance with its own graph.

    estimator:
      ``double-step``  propagate the disagreement with e^{-2 delta L} per
                       inner sample. This is how the reference figure's
                       empirical curve is computed, and it leaves the bound
                       a clear margin at every step.
      ``one-step``     propagate with e^{-delta L}, the literal single-step
                       dynamics. Its true mean coincides with the bound to
                       about 1e-7 relative, so with any finite number of
                       inner samples the estimate lands on either side of
                       the bound in roughly half the steps; use it for
                       mean-level studies, not domination plots.
    """
    if inner_samples < 1:
        raise ValueError("inner_samples must be at least 1")
    if estimator not in ESTIMATORS:
        raise ValueError(f"estimator must be one of {ESTIMATORS}")
    source = rng if rng is not None else RandomSource(config.master_seed)
    z0, init_label = resolve_initial(config, source)
    n, d = z0.shape
    delta = config.resolved_delta
    steps = config.steps
    m = pair_count(n)
    kern = kernels()
    t_inner = 2.0 * delta if estimator == "double-step" else delta
    coeff = decrease_coefficient(n, config.p, delta)

    ks = np.arange(steps)
    empirical = np.empty(steps)
    bound = np.empty(steps)
    v_col = np.empty(steps)
    z = z0
    for k in range(steps):
        zh = z - z.mean(axis=0, keepdims=True)
        v_now = lyapunov(z)
        inner = source.spawn(steps + k).uniforms((inner_samples, m))
        dv = kern.batch_vdiff(inner, n, config.p, t_inner, zh)
        empirical[k] = dv.mean()
        bound[k] = coeff * v_now
        v_col[k] = v_now
        lap = kern.laplacians_from_uniforms(
            source.spawn(k).uniforms(m).reshape(1, m), n, config.p)[0]
        z = kern.expm_neg(lap, delta) @ z

    echo = {
        "n": n, "p": config.p, "delta": delta, "steps": steps, "dims": d,
        "init": init_label, "master_seed": source.master_seed,
        "inner_samples": inner_samples, "estimator": estimator,
        "backend": backend_name(),
    }
    return VdiffResult(ks, empirical, bound, v_col, inner_samples, estimator, echo)


@dataclass(frozen=True)
class ProbResult:
    """Per-N rows of the tail-probability experiment."""

    N: np.ndarray
    empirical: np.ndarray
    bound_capped: np.ndarray
    bound_raw: np.ndarray
    trials: int
    gamma: float
    config: dict = field(default_factory=dict)

    def write_csv(self, path) -> None:
        write_table(path, self.config, [
            ("N", self.N), ("empirical", self.empirical),
            ("bound_capped", self.bound_capped), ("bound_raw", self.bound_raw)])


def prob_experiment(config: RunConfig, gamma: float, trials: int,
                    horizon: int | None = None,
                    rng: RandomSource | None = None) -> ProbResult:
    """Empirical P[sup_{k >= N} |zhat(k)|^2 >= gamma] over independent trials,
    paired with the geometric tail bound for every N up to the horizon.

    Trial t draws its whole trajectory from stream (t,), one row of pair
    uniforms per step, so trials are reproducible and embarrassingly
    parallel; results are reduced in trial order regardless of scheduling.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    source = rng if rng is not None else RandomSource(config.master_seed)
    z0, init_label = resolve_initial(config, source)
    n, d = z0.shape
    delta = config.resolved_delta
    steps = int(horizon) if horizon is not None else config.steps
    if steps < 1:
        raise ValueError("horizon must be at least 1")
    m = pair_count(n)
    kern = kernels()

    v = np.empty((trials, steps + 1))
    for lo in range(0, trials, _TRIAL_CHUNK):
        hi = min(lo + _TRIAL_CHUNK, trials)
        unif = np.empty((hi - lo, steps, m))
        for i, t in enumerate(range(lo, hi)):
            unif[i] = source.spawn(t).uniforms((steps, m))
        v[lo:hi] = kern.run_trials_v(unif, n, config.p, delta, z0)

    # Suffix maximum over k >= N, computed explicitly even though the
    # dynamics are pathwise non-increasing; the equality of the two is a
    # standing self-check on the dynamics.
    suffix_max = np.maximum.accumulate(v[:, ::-1], axis=1)[:, ::-1]
    if not np.allclose(suffix_max, v, rtol=1e-12, atol=0.0):
        raise RuntimeError(
            "suffix maximum deviates from the pathwise value: the dynamics "
            "are no longer non-increasing and the shortcut assumptions fail")
    empirical = (suffix_max >= gamma).mean(axis=0)

    report = bound_report(n, config.p, delta, lyapunov(z0), gamma, steps)
    echo = {
        "n": n, "p": config.p, "delta": delta, "horizon": steps, "dims": d,
        "init": init_label, "master_seed": source.master_seed,
        "gamma": gamma, "trials": trials, "backend": backend_name(),
    }
    return ProbResult(report.N, empirical, report.tail_capped,
                      report.tail_raw, trials, float(gamma), echo)


@dataclass(frozen=True)
class MomentValidationReport:
    """Deviations of the closed-form moment machinery from an oracle."""

    mode: str
    n: int
    p: float
    delta: float
    samples: int | None
    power_deviation: dict
    power_stderr: dict | None
    exp_deviation: float
    lambda_value: float
    lambda_expected: float
    lambda_deviation: float
    lambda_tolerance: float
    lambda_stderr: float | None
    passed: bool

    def to_json(self) -> dict:
        out = {
            "mode": self.mode, "n": self.n, "p": self.p, "delta": self.delta,
            "power_deviation": {str(k): v for k, v in self.power_deviation.items()},
            "exp_deviation": self.exp_deviation,
            "lambda_value": self.lambda_value,
            "lambda_expected": self.lambda_expected,
            "lambda_deviation": self.lambda_deviation,
            "lambda_tolerance": self.lambda_tolerance,
            "passed": self.passed,
        }
        if self.samples is not None:
            out["samples"] = self.samples
        if self.power_stderr is not None:
            out["power_stderr"] = {str(k): v for k, v in self.power_stderr.items()}
        if self.lambda_stderr is not None:
            out["lambda_stderr"] = self.lambda_stderr
        return out


POWER_TOL = 1e-12


def _fifth_taylor_term(n: int, p: float, delta: float) -> float:
    """Magnitude of the first omitted expansion term on the disagreement
    eigenvalue, measured from the enumerated E[L^5] (n <= 5 only)."""
    e5 = exhaustive_expected_power(n, p, 5)
    c5 = float(e5[0, 0]) / (n - 1)
    return (2.0 * delta) ** 5 / math.factorial(5) * n * c5


def moment_validation(n: int, p: float, mode: str, samples: int | None = None,
                      delta: float | None = None,
                      rng: RandomSource | None = None,
                      tol: float | None = None) -> MomentValidationReport:
    """Compare closed-form E[L^k], the truncated expected propagator and its
    second-largest eigenvalue against an independent oracle.

    ``exhaustive`` (n <= 5): enumeration is exact, so the k = 1..4 powers
    must match to POWER_TOL and the eigenvalue must sit within the measured
    fifth-order expansion term of the exact value.

    ``mc``: sample-mean oracles with element-wise standard errors; the pass
    criterion is on the eigenvalue deviation against ``tol`` (default 5e-3,
    sized for ~2e4 samples at moderate n). Power deviations and their
    standard errors are reported but not gated, since they shrink only as
    1/sqrt(samples).
    """
    if mode not in ("exhaustive", "mc"):
        raise ValueError("mode must be 'exhaustive' or 'mc'")
    d = float(delta) if delta is not None else 1.0 / n
    if d <= 0:
        raise ValueError("delta must be positive")
    lam_expected = lambda_second_largest(n, p, d)

    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise ValueError(
                f"exhaustive validation is capped at n <= {EXHAUSTIVE_MAX_N}; "
                "use --mode mc beyond that")
        power_dev = {}
        for k in (1, 2, 3, 4):
            dev = np.abs(expected_laplacian_power(n, p, k)
                         - exhaustive_expected_power(n, p, k)).max()
            power_dev[k] = float(dev)
        exact_exp = exhaustive_expected_exponential(n, p, 2.0 * d)
        exp_dev = float(np.abs(exact_exp - (np.eye(n) + mu(n, p, d) * lhat(n))).max())
        lam_exact = float(np.linalg.eigvalsh(exact_exp)[-2])
        lam_dev = abs(lam_exact - lam_expected)
        lam_tol = _fifth_taylor_term(n, p, d) if tol is None else float(tol)
        passed = max(power_dev.values()) <= POWER_TOL and lam_dev <= lam_tol
        return MomentValidationReport(
            mode="exhaustive", n=n, p=p, delta=d, samples=None,
            power_deviation=power_dev, power_stderr=None,
            exp_deviation=exp_dev, lambda_value=lam_exact,
            lambda_expected=lam_expected, lambda_deviation=lam_dev,
            lambda_tolerance=lam_tol, lambda_stderr=None, passed=passed)

    if samples is None or samples < 2:
        raise ValueError("mc mode needs samples >= 2")
    source = rng if rng is not None else RandomSource(0)
    est = mc_expected_exponential(n, p, d, samples, source)
    # Independent draw for the power oracle so the two estimates do not share
    # randomness with the propagator estimate.
    gen = source.spawn(1).generator()
    m = pair_count(n)
    sums = {k: np.zeros((n, n)) for k in (1, 2, 3, 4)}
    sums_sq = {k: np.zeros((n, n)) for k in (1, 2, 3, 4)}
    remaining = int(samples)
    while remaining:
        c = min(2048, remaining)
        laps = kernels().laplacians_from_uniforms(gen.random((c, m)), n, p)
        power = laps
        for k in (1, 2, 3, 4):
            if k > 1:
                power = power @ laps
            sums[k] += power.sum(axis=0)
            sums_sq[k] += (power * power).sum(axis=0)
        remaining -= c
    power_dev = {}
    power_se = {}
    for k in (1, 2, 3, 4):
        mean = sums[k] / samples
        var = np.maximum(sums_sq[k] - samples * mean * mean, 0.0) / (samples - 1)
        power_dev[k] = float(np.abs(mean - expected_laplacian_power(n, p, k)).max())
        power_se[k] = float(np.sqrt(var / samples).max())
    exp_dev = float(np.abs(est.mean - (np.eye(n) + mu(n, p, d) * lhat(n))).max())
    lam_mc = est.second_largest_eigenvalue()
    lam_dev = abs(lam_mc - lam_expected)
    # Spectral-norm scale of the mean's sampling noise: a random symmetric
    # perturbation with rms entry sigma has norm ~ 2 sigma sqrt(n).
    lam_se = 2.0 * math.sqrt(n) * float(np.sqrt((est.stderr**2).mean()))
    lam_tol = 5e-3 if tol is None else float(tol)
    return MomentValidationReport(
        mode="mc", n=n, p=p, delta=d, samples=int(samples),
        power_deviation=power_dev, power_stderr=power_se,
        exp_deviation=exp_dev, lambda_value=lam_mc,
        lambda_expected=lam_expected, lambda_deviation=lam_dev,
        lambda_tolerance=lam_tol, lambda_stderr=lam_se,
        passed=lam_dev <= lam_tol)
