"""Numba-jitted implementations of the hot simulation kernels.

Same contracts as ``_kernels_numpy``. prange parallelism only ever writes to
per-sample or per-trial output slots and never does a cross-thread floating
reduction, so results are bit-identical for any thread count.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _expm_neg_sym(sym, t):
    w, q = np.linalg.eigh(sym)
    r = (q * np.exp(-t * w)) @ q.T
    return (r + r.T) / 2.0


@njit(cache=True)
def _laplacian_from_row(u, n, p):
    lap = np.zeros((n, n))
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if u[idx] < p:
                lap[i, j] = -1.0
                lap[j, i] = -1.0
                lap[i, i] += 1.0
                lap[j, j] += 1.0
            idx += 1
    return lap


@njit(cache=True)
def _v_pair(z, n):
    # (V, |zhat|^2) on the agreement-centered state; centering first is exact
    # algebra and keeps both values stable under large common offsets.
    d = z.shape[1]
    v = 0.0
    zsq = 0.0
    for c in range(d):
        mean = 0.0
        for i in range(n):
            mean += z[i, c]
        mean /= n
        s1 = 0.0
        s2 = 0.0
        for i in range(n):
            zh = z[i, c] - mean
            s1 += zh
            s2 += zh * zh
        zsq += s2
        v += s2 - s1 * s1 / n
    return v, zsq


@njit(cache=True, parallel=True)
def _batch_vdiff(unif, n, p, t, zhat):
    total = unif.shape[0]
    out = np.empty(total)
    v0, _ = _v_pair(zhat, n)
    for s in prange(total):
        lap = _laplacian_from_row(unif[s], n, p)
        w, q = np.linalg.eigh(lap)
        prop = (q * np.exp(-t * w)) @ q.T
        v1, _ = _v_pair(prop @ zhat, n)
        out[s] = v1 - v0
    return out


@njit(cache=True)
def _batch_expm_moments(unif, n, p, t):
    acc = np.zeros((n, n))
    acc2 = np.zeros((n, n))
    for s in range(unif.shape[0]):
        lap = _laplacian_from_row(unif[s], n, p)
        w, q = np.linalg.eigh(lap)
        prop = (q * np.exp(-t * w)) @ q.T
        acc += prop
        acc2 += prop * prop
    return acc, acc2


@njit(cache=True)
def _run_trajectory(unif, n, p, delta, z0, record_states):
    steps = unif.shape[0]
    d = z0.shape[1]
    v = np.empty(steps + 1)
    zsq = np.empty(steps + 1)
    means = np.empty((steps + 1, d))
    if record_states:
        states = np.empty((steps + 1, n, d))
    else:
        states = np.empty((0, n, d))
    z = z0.copy()
    for c in range(d):
        acc = 0.0
        for i in range(n):
            acc += z[i, c]
        means[0, c] = acc / n
    v[0], zsq[0] = _v_pair(z, n)
    if record_states:
        states[0] = z
    for k in range(steps):
        lap = _laplacian_from_row(unif[k], n, p)
        w, q = np.linalg.eigh(lap)
        prop = (q * np.exp(-delta * w)) @ q.T
        z = prop @ z
        for c in range(d):
            acc = 0.0
            for i in range(n):
                acc += z[i, c]
            means[k + 1, c] = acc / n
        v[k + 1], zsq[k + 1] = _v_pair(z, n)
        if record_states:
            states[k + 1] = z
    return v, zsq, means, states


@njit(cache=True, parallel=True)
def _run_trials_v(unif, n, p, delta, z0):
    trials = unif.shape[0]
    steps = unif.shape[1]
    v = np.empty((trials, steps + 1))
    for tr in prange(trials):
        z = z0.copy()
        vk, _ = _v_pair(z, n)
        v[tr, 0] = vk
        for k in range(steps):
            lap = _laplacian_from_row(unif[tr, k], n, p)
            w, q = np.linalg.eigh(lap)
            prop = (q * np.exp(-delta * w)) @ q.T
            z = prop @ z
            vk, _ = _v_pair(z, n)
            v[tr, k + 1] = vk
    return v


@njit(cache=True)
def _laplacians_batch(unif, n, p):
    out = np.empty((unif.shape[0], n, n))
    for s in range(unif.shape[0]):
        out[s] = _laplacian_from_row(unif[s], n, p)
    return out


def _f64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def expm_neg(sym: np.ndarray, t: float) -> np.ndarray:
    return _expm_neg_sym(_f64(sym), float(t))


def laplacians_from_uniforms(unif: np.ndarray, n: int, p: float) -> np.ndarray:
    return _laplacians_batch(_f64(unif), int(n), float(p))


def batch_vdiff(unif: np.ndarray, n: int, p: float, t: float,
                zhat: np.ndarray) -> np.ndarray:
    return _batch_vdiff(_f64(unif), int(n), float(p), float(t), _f64(zhat))


def batch_expm_moments(unif: np.ndarray, n: int, p: float,
                       t: float) -> tuple[np.ndarray, np.ndarray]:
    return _batch_expm_moments(_f64(unif), int(n), float(p), float(t))


def run_trajectory(unif: np.ndarray, n: int, p: float, delta: float,
                   z0: np.ndarray, record_states: bool):
    v, zsq, means, states = _run_trajectory(
        _f64(unif), int(n), float(p), float(delta), _f64(z0), bool(record_states))
    return v, zsq, means, states


def run_trials_v(unif: np.ndarray, n: int, p: float, delta: float,
                 z0: np.ndarray) -> np.ndarray:
    return _run_trials_v(_f64(unif), int(n), float(p), float(delta), _f64(z0))
