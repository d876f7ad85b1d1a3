"""Weighted undirected graphs, K-NN graph construction, and Laplacians."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import squareform, pdist

from .exceptions import DegenerateFeaturesError


class LaplacianKind(Enum):
    COMBINATORIAL = "combinatorial"
    SYMMETRIC_NORMALIZED = "symmetric-normalized"


@dataclass(frozen=True)
class Graph:
    """Immutable weighted undirected graph.

    Attributes
    ----------
    n : int
        Number of nodes, indexed 0..n-1.
    edges : tuple of (i, j, w)
        Undirected edges with i < j and strictly positive weight w.
    weights : ndarray, shape (n, n)
        Symmetric adjacency matrix; absent edges are exact zero.
    degrees : ndarray, shape (n,)
        Row sums of the adjacency matrix.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    weights: np.ndarray
    degrees: np.ndarray

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def build_from_edges(n: int, edges) -> Graph:
    """Build a graph from an undirected edge list.

    Each edge is a triple ``(i, j, w)`` with ``0 <= i, j < n``, ``i != j`` and
    ``w > 0``. Listing the same unordered pair twice is an error.
    """
    if n < 1:
        raise ValueError(f"node count must be >= 1, got {n}")
    W = np.zeros((n, n))
    canonical: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for edge in edges:
        i, j, w = edge
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"node index out of range in edge ({i}, {j}, {w})")
        if i == j:
            raise ValueError(f"self-loop in edge ({i}, {j}, {w})")
        if not w > 0:
            raise ValueError(f"nonpositive weight in edge ({i}, {j}, {w})")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"duplicate edge ({i}, {j}, {w})")
        seen.add(key)
        W[i, j] = w
        W[j, i] = w
        canonical.append((key[0], key[1], w))
    degrees = W.sum(axis=1)
    W.setflags(write=False)
    degrees.setflags(write=False)
    return Graph(n=n, edges=tuple(canonical), weights=W, degrees=degrees)


def knn_graph(features, k: int, sigma="auto") -> Graph:
    """Build a Gaussian-weighted K-nearest-neighbor graph from feature rows.

    An edge (i, j) is present when j is among the k nearest Euclidean
    neighbors of i or vice versa (union symmetrization), with weight
    ``exp(-dist(i, j)**2 / sigma**2)``.

    Parameters
    ----------
    features : array_like, shape (N, d)
        One row per data point; all entries must be finite and N >= 2.
    k : int
        Neighbor count, ``1 <= k < N``.
    sigma : float or "auto"
        Kernel width. With ``"auto"``, sigma is the mean over i of the
        distance from i to its k-th nearest neighbor.
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"feature matrix must be 2-d, got shape {X.shape}")
    n = X.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 data points, got {n}")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature matrix contains non-finite entries")
    k = int(k)
    if not 1 <= k < n:
        raise ValueError(f"neighbor count must satisfy 1 <= k < {n}, got {k}")

    sq_dist = squareform(pdist(X, metric="sqeuclidean"))
    np.fill_diagonal(sq_dist, np.inf)
    # Stable argsort keeps neighbor choice deterministic under distance ties.
    order = np.argsort(sq_dist, axis=1, kind="stable")

    if sigma == "auto":
        kth_sq = sq_dist[np.arange(n), order[:, k - 1]]
        sigma_val = float(np.mean(np.sqrt(kth_sq)))
    else:
        sigma_val = float(sigma)
    if sigma_val <= 0.0:
        raise DegenerateFeaturesError(
            "degenerate features: resolved kernel width sigma is zero"
        )

    pairs: set[tuple[int, int]] = set()
    for i in range(n):
        for j in order[i, :k]:
            pairs.add((min(i, int(j)), max(i, int(j))))
    edges = [
        (i, j, float(np.exp(-sq_dist[i, j] / sigma_val**2)))
        for i, j in sorted(pairs)
    ]
    return build_from_edges(n, edges)


def laplacian(g: Graph, kind: LaplacianKind = LaplacianKind.COMBINATORIAL) -> np.ndarray:
    """Laplacian matrix of a graph: D - W, or its symmetric normalized form."""
    L = np.diag(g.degrees) - g.weights
    if kind is LaplacianKind.COMBINATORIAL:
        return L
    if kind is LaplacianKind.SYMMETRIC_NORMALIZED:
        if np.any(g.degrees <= 0):
            isolated = int(np.flatnonzero(g.degrees <= 0)[0])
            raise ValueError(
                f"normalized Laplacian undefined: node {isolated} is isolated"
            )
        inv_sqrt = 1.0 / np.sqrt(g.degrees)
        return inv_sqrt[:, None] * L * inv_sqrt[None, :]
    raise ValueError(f"unknown Laplacian kind: {kind!r}")


def is_connected(g: Graph) -> bool:
    """True iff the graph has a single connected component (BFS).

    A single node with no edges counts as connected.
    """
    if g.n == 1:
        return True
    adjacency = [np.flatnonzero(g.weights[i]) for i in range(g.n)]
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(int(v))
    return count == g.n
