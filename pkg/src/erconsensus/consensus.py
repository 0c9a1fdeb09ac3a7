"""Time-sampled consensus over freshly sampled random communication graphs.

Each step k holds one sampled graph for the whole interval and advances the
state with the exact propagator e^{-delta L_k}; all state dimensions share
the step's graph, which is what applying the same n x n propagator column by
column amounts to. The recorded instrumentation tracks the disagreement
Lyapunov value V, the squared disagreement norm, and the per-dimension mean
(which the dynamics preserve).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import backend_name, kernels
from .csvio import write_table
from .graphs import Graph, laplacian, pair_count
from .rng import DEFAULT_SEED, INIT_STREAM, RandomSource
from .spectral import expm_scaled, project_disagreement


def init_circle(n: int, radius: float) -> np.ndarray:
    """Agents evenly spaced on an origin-centered circle; two state dimensions.

    Agent i sits at (radius cos(2 pi i / n), radius sin(2 pi i / n)). For
    n >= 2 the per-dimension mean is zero, so the squared disagreement norm
    is exactly n * radius^2.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if radius <= 0:
        raise ValueError("radius must be positive")
    theta = 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


def init_gaussian(n: int, dims: int, sd: float, rng: RandomSource) -> np.ndarray:
    """Independent N(0, sd^2) coordinates, drawn from the reserved init stream."""
    if sd <= 0:
        raise ValueError("standard deviation must be positive")
    return rng.spawn(INIT_STREAM).generator().normal(0.0, sd, size=(n, dims))


@dataclass(frozen=True)
class RunConfig:
    """Configuration of one simulated trajectory.

    ``delta`` defaults to 1/n. ``dims`` may be left unset, in which case it
    is resolved from the initial-condition spec: 2 for a circle, 1 for
    gaussian, and inferred for explicit values. ``init`` accepts
    ``circle:<radius>``, ``gaussian:<sd>``, ``explicit:v1,v2,...`` or a
    ready-made (n,) / (n, d) array.
    """

    n: int
    p: float
    steps: int
    delta: float | None = None
    dims: int | None = None
    init: str | np.ndarray = "circle:100"
    master_seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")
        if self.delta is not None and self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.dims is not None and self.dims < 1:
            raise ValueError("dims must be at least 1")

    @property
    def resolved_delta(self) -> float:
        return float(self.delta) if self.delta is not None else 1.0 / self.n


def resolve_initial(config: RunConfig, rng: RandomSource) -> tuple[np.ndarray, str]:
    """Materialize the initial (n, d) state block and a label for echoes."""
    n = config.n
    init = config.init
    if isinstance(init, np.ndarray):
        z0 = np.asarray(init, dtype=np.float64)
        if z0.ndim == 1:
            z0 = z0.reshape(n, 1)
        if z0.shape[0] != n or z0.ndim != 2:
            raise ValueError("explicit initial state must have n rows")
        if config.dims is not None and z0.shape[1] != config.dims:
            raise ValueError("explicit initial state does not match dims")
        return z0.copy(), "explicit"
    kind, _, arg = str(init).partition(":")
    if kind == "circle":
        if config.dims not in (None, 2):
            raise ValueError("circle initial conditions are two-dimensional")
        radius = float(arg) if arg else 100.0
        return init_circle(n, radius), f"circle:{radius:g}"
    if kind == "gaussian":
        sd = float(arg) if arg else 1.0
        dims = config.dims if config.dims is not None else 1
        return init_gaussian(n, dims, sd, rng), f"gaussian:{sd:g}"
    if kind == "explicit":
        values = np.array([float(v) for v in arg.split(",") if v != ""])
        dims = config.dims
        if dims is None:
            if values.size % n:
                raise ValueError("explicit value count must be a multiple of n")
            dims = values.size // n
        if values.size != n * dims:
            raise ValueError(f"explicit init needs n*dims = {n * dims} values, got {values.size}")
        return values.reshape(n, dims), "explicit"
    raise ValueError(f"unknown init spec {init!r}")


@dataclass(frozen=True)
class Trace:
    """Per-step record of one trajectory.

    ``V`` is the disagreement Lyapunov value and ``zhat_norm_sq`` the squared
    norm of the mean-removed state; the two are evaluated through different
    formulas but agree to round-off at every step. ``states`` is populated
    only when snapshots were requested.
    """

    k: np.ndarray
    V: np.ndarray
    zhat_norm_sq: np.ndarray
    means: np.ndarray
    config: dict = field(default_factory=dict)
    states: np.ndarray | None = None

    def final_v(self) -> float:
        return float(self.V[-1])

    def steps_below(self, threshold: float) -> int | None:
        """First step index with zhat_norm_sq below ``threshold``, if any."""
        hits = np.nonzero(self.zhat_norm_sq < threshold)[0]
        return int(hits[0]) if hits.size else None

    def write_csv(self, path) -> None:
        dims = self.means.shape[1]
        cols = [("k", self.k), ("V", self.V), ("zhat_norm_sq", self.zhat_norm_sq)]
        cols += [(f"mean_dim{c}", self.means[:, c]) for c in range(dims)]
        write_table(path, self.config, cols)

    def write_states_csv(self, path) -> None:
        if self.states is None:
            raise ValueError("trace was recorded without state snapshots")
        steps, n, d = self.states.shape
        ks = np.repeat(np.arange(steps), n * d)
        agents = np.tile(np.repeat(np.arange(n), d), steps)
        dims = np.tile(np.arange(d), steps * n)
        write_table(path, self.config, [
            ("k", ks), ("agent", agents), ("dim", dims),
            ("value", self.states.reshape(-1)),
        ])


def lyapunov(z) -> float:
    """Disagreement Lyapunov value: the (nI - J)/n quadratic form of the state,
    summed over dimensions; equals the squared distance to agreement.

    Evaluated on the mean-centered state, which is exact algebra (the form
    kills the all-ones direction) and numerically stable for states with a
    large common offset.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        z = z.reshape(-1, 1)
    n = z.shape[0]
    zh = project_disagreement(z)
    s1 = zh.sum(axis=0)
    return float((zh * zh).sum() - (s1 * s1).sum() / n)


def step(z, g: Graph, delta: float) -> np.ndarray:
    """One sampled-graph step: every dimension multiplied by e^{-delta L(g)}.

    Preserves the per-dimension mean (the propagator is doubly stochastic)
    and never increases the disagreement norm.
    """
    z = np.asarray(z, dtype=np.float64)
    rows = z.shape[0]
    if rows != g.n:
        raise ValueError(f"state has {rows} agents but graph has {g.n}")
    return expm_scaled(laplacian(g), delta) @ z


def run(config: RunConfig, rng: RandomSource | None = None,
        record_states: bool = False) -> Trace:
    """Simulate a trajectory: at each step k sample a fresh graph from stream
    id k of the run's source, advance with e^{-delta L_k}, and record V,
    |zhat|^2 and the per-dimension means.

    The per-step stream layout means a prefix of a run can be replayed
    without simulating the rest. Identical configs (and seed) produce
    bit-identical traces on a given backend.
    """
    source = rng if rng is not None else RandomSource(config.master_seed)
    z0, init_label = resolve_initial(config, source)
    n, d = z0.shape
    delta = config.resolved_delta
    m = pair_count(n)
    unif = np.empty((config.steps, m))
    for k in range(config.steps):
        unif[k] = source.spawn(k).uniforms(m)
    v, zsq, means, states = kernels().run_trajectory(
        unif, n, config.p, delta, z0, record_states)
    echo = {
        "n": n, "p": config.p, "delta": delta, "steps": config.steps,
        "dims": d, "init": init_label, "master_seed": source.master_seed,
        "backend": backend_name(),
    }
    return Trace(np.arange(config.steps + 1), v, zsq, means, echo,
                 states if record_states else None)
