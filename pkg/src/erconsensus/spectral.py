"""Dense symmetric linear algebra: eigensolves, propagator exponentials, and
the agreement-subspace projection used throughout the simulations."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._backend import kernels

SYMMETRY_TOL = 1e-12


def as_symmetric(m, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Validate near-symmetry and return the exactly symmetrized matrix.

    Asymmetry up to ``tol * max(1, |m|_max)`` is attributed to round-off and
    averaged away; anything larger is rejected.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    gap = float(np.abs(m - m.T).max(initial=0.0))
    if gap > tol * scale:
        raise ValueError(f"matrix is not symmetric (max asymmetry {gap:.3e})")
    return (m + m.T) / 2.0


class SpectrumResult(NamedTuple):
    """Eigenvalues sorted ascending; orthonormal eigenvector columns, column i
    paired with eigenvalue i. Index n-2 is therefore the second largest."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sym_eigen(m) -> SpectrumResult:
    """Full eigendecomposition of a symmetric matrix.

    Backed by LAPACK's symmetric solver; if its fixed internal iteration
    budget is exhausted the resulting LinAlgError propagates unchanged.
    """
    w, q = np.linalg.eigh(as_symmetric(m))
    return SpectrumResult(w, q)


def expm_scaled(m, t: float) -> np.ndarray:
    """e^{-t m} for symmetric positive semi-definite ``m``.

    Computed through the full eigendecomposition, so it is exact to solver
    precision rather than a series truncation. For a graph Laplacian the
    result is symmetric doubly stochastic with strictly positive diagonal:
    the all-ones vector is a fixed eigenvector, so row and column sums stay
    at 1, and all eigenvalues lie in (0, 1] for t > 0.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    return kernels().expm_neg(as_symmetric(m), float(t))


def structured_eigs(a: float, b: float, n: int) -> tuple[float, float]:
    """Closed-form spectrum of a*I + b*(J - I).

    Returns (a + (n-1)*b, a - b): the first has multiplicity one (eigenvector
    all-ones), the second multiplicity n-1.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    return a + (n - 1) * b, a - b


def project_disagreement(z) -> np.ndarray:
    """Subtract the per-dimension mean: the projection onto the orthogonal
    complement of the agreement line span{1}.

    Accepts a 1-D state or an (n, d) block; returns the same shape. The
    result is orthogonal to the all-ones vector in every dimension and the
    projection is idempotent.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        return z - z.mean()
    if z.ndim == 2:
        return z - z.mean(axis=0, keepdims=True)
    raise ValueError("state must be 1-D or 2-D")


def dist_to_agreement(z) -> float:
    """Euclidean distance from ``z`` to the set where all agents agree."""
    zh = project_disagreement(z)
    return float(np.sqrt(np.sum(zh * zh)))
