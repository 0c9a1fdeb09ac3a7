"""Vectorized numpy implementations of the hot simulation kernels.

Same contracts as ``_kernels_numba``; selected with ERCONSENSUS_BACKEND=numpy
or used as the automatic fallback when numba is unavailable. Work is batched
across samples/trials so the LAPACK calls dominate instead of Python loop
overhead.
"""

from __future__ import annotations

import numpy as np

# Fixed chunk sizes keep both memory and accumulation order independent of
# input size and thread configuration, so outputs are byte-reproducible.
_EXPM_CHUNK = 256
_VDIFF_CHUNK = 4096


def expm_neg(sym: np.ndarray, t: float) -> np.ndarray:
    """e^{-t * sym} of one symmetric matrix via full eigendecomposition."""
    w, q = np.linalg.eigh(sym)
    r = (q * np.exp(-t * w)) @ q.T
    return (r + r.T) / 2.0


def laplacians_from_uniforms(unif: np.ndarray, n: int, p: float) -> np.ndarray:
    """(S, m) pair uniforms -> (S, n, n) Laplacians, pair order row-major over i<j."""
    s = unif.shape[0]
    iu, ju = np.triu_indices(n, 1)
    bern = (unif < p).astype(np.float64)
    a = np.zeros((s, n, n))
    a[:, iu, ju] = bern
    a[:, ju, iu] = bern
    lap = -a
    idx = np.arange(n)
    lap[:, idx, idx] = a.sum(axis=2)
    return lap


def _expm_batch(laps: np.ndarray, t: float) -> np.ndarray:
    w, q = np.linalg.eigh(laps)
    e = np.exp(-t * w)
    return (q * e[:, None, :]) @ np.transpose(q, (0, 2, 1))


def _v_single(z: np.ndarray, n: int) -> tuple[float, float]:
    """(V, |zhat|^2) of one (n, d) state.

    Both are evaluated on the agreement-centered state: centering first is
    exact algebra (the all-ones direction is in the quadratic form's kernel)
    and avoids catastrophic cancellation when the common offset is large.
    """
    zh = z - z.mean(axis=0, keepdims=True)
    s1 = zh.sum(axis=0)
    zsq = float((zh * zh).sum())
    v = zsq - float((s1 * s1).sum()) / n
    return v, zsq


def _v_batch(z: np.ndarray, n: int) -> np.ndarray:
    """V for a (T, n, d) batch of states."""
    zh = z - z.mean(axis=1, keepdims=True)
    s1 = zh.sum(axis=1)
    return (zh * zh).sum(axis=(1, 2)) - (s1 * s1).sum(axis=1) / n


def batch_vdiff(unif: np.ndarray, n: int, p: float, t: float,
                zhat: np.ndarray) -> np.ndarray:
    """Per-sample V(e^{-t L} zhat) - V(zhat) over independently sampled graphs."""
    total = unif.shape[0]
    out = np.empty(total)
    v0, _ = _v_single(zhat, n)
    for lo in range(0, total, _VDIFF_CHUNK):
        chunk = unif[lo:lo + _VDIFF_CHUNK]
        props = _expm_batch(laplacians_from_uniforms(chunk, n, p), t)
        znext = props @ zhat
        out[lo:lo + chunk.shape[0]] = _v_batch(znext, n) - v0
    return out


def batch_expm_moments(unif: np.ndarray, n: int, p: float,
                       t: float) -> tuple[np.ndarray, np.ndarray]:
    """Element-wise (sum, sum of squares) of e^{-t L} over sampled graphs."""
    acc = np.zeros((n, n))
    acc2 = np.zeros((n, n))
    for lo in range(0, unif.shape[0], _EXPM_CHUNK):
        props = _expm_batch(laplacians_from_uniforms(unif[lo:lo + _EXPM_CHUNK], n, p), t)
        acc += props.sum(axis=0)
        acc2 += (props * props).sum(axis=0)
    return acc, acc2


def run_trajectory(unif: np.ndarray, n: int, p: float, delta: float,
                   z0: np.ndarray, record_states: bool):
    """One trajectory; row k of ``unif`` is the pair draw for step k.

    Returns (V, |zhat|^2, per-dimension means, states); the states array is
    empty unless ``record_states``.
    """
    steps = unif.shape[0]
    d = z0.shape[1]
    v = np.empty(steps + 1)
    zsq = np.empty(steps + 1)
    means = np.empty((steps + 1, d))
    states = np.empty((steps + 1 if record_states else 0, n, d))
    z = z0.astype(np.float64).copy()

    def record(k: int) -> None:
        means[k] = z.mean(axis=0)
        v[k], zsq[k] = _v_single(z, n)
        if record_states:
            states[k] = z

    record(0)
    for k in range(steps):
        lap = laplacians_from_uniforms(unif[k:k + 1], n, p)[0]
        z = expm_neg(lap, delta) @ z
        record(k + 1)
    return v, zsq, means, states


def run_trials_v(unif: np.ndarray, n: int, p: float, delta: float,
                 z0: np.ndarray) -> np.ndarray:
    """V trajectories for a (T, K, m) block of trials, stepped in lockstep."""
    trials, steps = unif.shape[0], unif.shape[1]
    d = z0.shape[1]
    v = np.empty((trials, steps + 1))
    z = np.broadcast_to(z0.astype(np.float64), (trials, n, d)).copy()
    v[:, 0] = _v_batch(z, n)
    for k in range(steps):
        props = _expm_batch(laplacians_from_uniforms(unif[:, k, :], n, p), delta)
        z = props @ z
        v[:, k + 1] = _v_batch(z, n)
    return v
