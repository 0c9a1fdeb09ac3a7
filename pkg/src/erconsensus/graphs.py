"""Undirected simple graphs sampled from the G(n, p) edge-probability model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import RandomSource


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: boolean adjacency with an empty diagonal.

    Instances are immutable (the adjacency buffer is marked read-only) and
    safe to share across threads.
    """

    n: int
    adjacency: np.ndarray

    def __post_init__(self) -> None:
        a = self.adjacency
        if a.shape != (self.n, self.n) or a.dtype != np.bool_:
            raise ValueError("adjacency must be an (n, n) boolean matrix")
        if np.any(a != a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a)):
            raise ValueError("self loops are not allowed")
        a.setflags(write=False)

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.adjacency)) // 2


def pair_count(n: int) -> int:
    """Number of unordered node pairs, i.e. candidate edges."""
    return n * (n - 1) // 2


def adjacency_from_uniforms(u: np.ndarray, n: int, p: float) -> np.ndarray:
    """Boolean adjacency from one uniform draw per pair.

    Entry j of ``u`` corresponds to the j-th node pair in row-major order
    over i < j, and the edge is present iff u[j] < p. Fixing this order is
    what makes sampled graphs reproducible across platforms and across the
    numba/numpy kernel backends, which rebuild adjacency from the same rows.
    """
    iu, ju = np.triu_indices(n, 1)
    a = np.zeros((n, n), dtype=np.bool_)
    hit = u < p
    a[iu, ju] = hit
    a[ju, iu] = hit
    return a


def sample_er(n: int, p: float, rng: RandomSource) -> Graph:
    """Sample a G(n, p) graph: each pair is an edge independently w.p. p.

    The draw is a pure function of ``rng``: the same (master_seed, stream)
    always yields the same graph. p = 0 and p = 1 are accepted and produce
    the empty and the complete graph exactly.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("n must be a positive integer")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    u = rng.uniforms(pair_count(int(n)))
    return Graph(int(n), adjacency_from_uniforms(u, int(n), float(p)))


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian: degree matrix minus adjacency, as float64.

    Entries are small exact integers, so each row sums to zero exactly and
    the matrix is symmetric positive semi-definite.
    """
    a = g.adjacency.astype(np.float64)
    return np.diag(a.sum(axis=1)) - a


def is_connected(g: Graph) -> bool:
    """True iff every node is reachable from node 0.

    Computed by breadth-first traversal rather than spectrally, so there is
    no eigenvalue tolerance to pick; the spectral characterization (second
    smallest Laplacian eigenvalue positive) is kept as a test property.
    """
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in np.nonzero(g.adjacency[i])[0]:
                if not seen[j]:
                    seen[j] = True
                    nxt.append(int(j))
        frontier = nxt
    return bool(seen.all())


def to_edgelist(g: Graph) -> str:
    """Edge-list dump: header ``n=<n>``, then one ``i j`` pair per line, 1-indexed."""
    lines = [f"n={g.n}"]
    iu, ju = np.triu_indices(g.n, 1)
    present = g.adjacency[iu, ju]
    for i, j, hit in zip(iu, ju, present):
        if hit:
            lines.append(f"{i + 1} {j + 1}")
    return "\n".join(lines) + "\n"


def write_edgelist(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(to_edgelist(g))
