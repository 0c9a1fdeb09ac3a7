import numpy as np
import pytest

from erconsensus import (
    RandomSource,
    RunConfig,
    exhaustive_expected_exponential,
    moment_validation,
    prob_experiment,
    run,
    vdiff_experiment,
)


def two_node_config(steps=1):
    return RunConfig(n=2, p=0.5, steps=steps, delta=0.5, init="explicit:1,-1")


def test_vdiff_without_communication_is_identically_zero():
    res = vdiff_experiment(RunConfig(n=6, p=0.0, steps=10), 50)
    assert np.all(res.empirical == 0.0)
    assert np.all(res.bound == 0.0)
    assert np.all(res.V == res.V[0])


def test_vdiff_rejects_bad_arguments():
    with pytest.raises(ValueError):
        vdiff_experiment(RunConfig(n=4, p=0.5, steps=2), 0)
    with pytest.raises(ValueError):
        vdiff_experiment(RunConfig(n=4, p=0.5, steps=2), 10, estimator="midpoint")


def _two_graph_vdiff_oracle(t):
    """Exact conditional mean of V(e^{-t L} zhat) - V(zhat) for zhat = (1,-1)
    under G(2, 1/2): the empty graph contributes 0, the edge graph contracts
    the difference mode by e^{-2t}, so V goes from 2 to 2 e^{-4t}."""
    jump = 2.0 * (np.exp(-4.0 * t) - 1.0)
    mean = 0.5 * jump
    sd = abs(jump) * 0.5  # Bernoulli(1/2) spread
    return mean, sd


def test_vdiff_one_step_estimator_matches_mixture():
    inner = 4000
    res = vdiff_experiment(two_node_config(), inner, estimator="one-step")
    mean, sd = _two_graph_vdiff_oracle(0.5)
    assert abs(res.empirical[0] - mean) <= 3 * sd / np.sqrt(inner)
    # exact conditional mean, quadratic-form route: zhat^T (E[e^{-2dL}] - I) zhat
    zhat = np.array([1.0, -1.0])
    exact = zhat @ (exhaustive_expected_exponential(2, 0.5, 1.0) - np.eye(2)) @ zhat
    assert abs(mean - exact) < 1e-12


def test_vdiff_double_step_estimator_matches_mixture():
    inner = 4000
    res = vdiff_experiment(two_node_config(), inner, estimator="double-step")
    mean, sd = _two_graph_vdiff_oracle(1.0)
    assert abs(res.empirical[0] - mean) <= 3 * sd / np.sqrt(inner)


def test_vdiff_main_trajectory_matches_run():
    cfg = RunConfig(n=12, p=0.3, steps=25, master_seed=21)
    res = vdiff_experiment(cfg, 5)
    trace = run(cfg)
    assert np.allclose(res.V, trace.V[:-1], rtol=1e-12, atol=0)


def test_vdiff_bound_dominates_in_double_step_mode():
    cfg = RunConfig(n=50, p=0.03, steps=15, master_seed=2)
    res = vdiff_experiment(cfg, 150, estimator="double-step")
    assert (res.bound >= res.empirical).all()


def test_vdiff_bound_dominates_across_seeds():
    # scaled-down multi-seed version of the reference setup: the margin is
    # tens of standard errors, so domination must hold at every (seed, step)
    total = violations = 0
    for seed in range(10):
        cfg = RunConfig(n=50, p=0.03, steps=10, master_seed=seed)
        res = vdiff_experiment(cfg, 200, estimator="double-step")
        violations += int((res.empirical > res.bound).sum())
        total += len(res.k)
    assert violations <= 0.01 * total


def test_vdiff_csv_reproducible(tmp_path):
    cfg = RunConfig(n=8, p=0.4, steps=6, master_seed=11)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    vdiff_experiment(cfg, 40).write_csv(out1)
    vdiff_experiment(cfg, 40).write_csv(out2)
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().strip().split("\n")
    ncom = sum(1 for l in lines if l.startswith("#"))
    assert lines[ncom] == "k,empirical,bound,V"
    assert len(lines) == ncom + 1 + 6


def test_prob_small_gamma_gives_probability_one():
    # without communication the disagreement never moves, so any threshold
    # below V0 is exceeded at every N
    res = prob_experiment(RunConfig(n=5, p=0.0, steps=30), gamma=1.0, trials=10)
    assert np.all(res.empirical == 1.0)


def test_prob_gamma_above_initial_gives_probability_zero():
    # pathwise non-increasing: the suffix maximum never exceeds V0
    res = prob_experiment(RunConfig(n=5, p=0.3, steps=30), gamma=1e9, trials=10)
    assert np.all(res.empirical == 0.0)


def test_prob_empirical_is_non_increasing():
    res = prob_experiment(RunConfig(n=10, p=0.05, steps=150), gamma=3.0, trials=60)
    assert (np.diff(res.empirical) <= 0).all()


def test_prob_bound_columns_match_report():
    from erconsensus import bound_report, init_circle, lyapunov

    cfg = RunConfig(n=10, p=0.01, steps=40)
    res = prob_experiment(cfg, gamma=3.0, trials=8)
    rep = bound_report(10, 0.01, 0.1, lyapunov(init_circle(10, 100.0)), 3.0, 40)
    assert np.array_equal(res.bound_raw, rep.tail_raw)
    assert np.array_equal(res.bound_capped, np.minimum(1.0, res.bound_raw))


def test_prob_horizon_overrides_steps():
    res = prob_experiment(RunConfig(n=5, p=0.2, steps=7), gamma=1.0, trials=4,
                          horizon=19)
    assert len(res.N) == 20


def test_prob_csv_reproducible(tmp_path):
    cfg = RunConfig(n=6, p=0.1, steps=25, master_seed=9)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    prob_experiment(cfg, 2.0, 30).write_csv(out1)
    prob_experiment(cfg, 2.0, 30).write_csv(out2)
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().strip().split("\n")
    ncom = sum(1 for l in lines if l.startswith("#"))
    assert lines[ncom] == "N,empirical,bound_capped,bound_raw"


def test_prob_rejects_bad_arguments():
    cfg = RunConfig(n=5, p=0.2, steps=5)
    with pytest.raises(ValueError):
        prob_experiment(cfg, gamma=0.0, trials=5)
    with pytest.raises(ValueError):
        prob_experiment(cfg, gamma=1.0, trials=0)


def test_moment_validation_exhaustive_passes():
    rep = moment_validation(3, 0.5, "exhaustive")
    assert rep.passed
    assert max(rep.power_deviation.values()) <= 1e-12
    assert rep.lambda_deviation <= rep.lambda_tolerance
    payload = rep.to_json()
    assert payload["mode"] == "exhaustive" and "samples" not in payload


def test_moment_validation_exhaustive_rejects_large_n():
    with pytest.raises(ValueError):
        moment_validation(6, 0.5, "exhaustive")


def test_moment_validation_rejects_unknown_mode():
    with pytest.raises(ValueError):
        moment_validation(3, 0.5, "guess")


def test_moment_validation_mc_reports_errors():
    # the default pass tolerance is sized for ~2e4 samples, so give the
    # small-sample smoke run an explicit generous one
    rep = moment_validation(5, 0.3, "mc", samples=4000, rng=RandomSource(17),
                            tol=0.05)
    assert rep.mode == "mc" and rep.samples == 4000
    assert rep.lambda_stderr is not None and rep.lambda_stderr > 0
    assert set(rep.power_stderr) == {1, 2, 3, 4}
    # against the enumerated truth at this small n, the sampled eigenvalue
    # deviation should be at the Monte Carlo noise scale
    exact = np.linalg.eigvalsh(exhaustive_expected_exponential(5, 0.3, 0.4))[-2]
    assert abs(rep.lambda_value - exact) < 10 * rep.lambda_stderr + 1e-6
    assert rep.passed


def test_moment_validation_mc_needs_samples():
    with pytest.raises(ValueError):
        moment_validation(5, 0.3, "mc", samples=None)
