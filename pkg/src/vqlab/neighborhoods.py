"""Neighborhood weight families built from Heaviside steps of squared distances.

Every family computes, for a datum v and prototypes w, a weight vector
psi in [0, 1]^n that depends on the squared distances d_p^2 only through
the signs of their pairwise differences:

* ``KMeansWinner``    -- 1 on the lowest-index closest prototype, 0 elsewhere.
* ``KMeansAllWinners``-- 1 on every closest prototype (ties included).
* ``SOM``             -- h_sigma of the hop distance to the winner on a graph.
* ``NeuralGas``       -- h_sigma of the distance rank of each prototype.
* ``RecruitingNG``    -- Neural-Gas scaled by the winner's recruiting factor.
* ``RecruitingSOM``   -- SOM with a per-winner neighborhood width.

``h_sigma(u) = exp(-u / sigma)``; at sigma = 0 it degenerates to the
indicator of u == 0, which collapses SOM and Neural-Gas to hard
competitive learning.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .geometry import as_prototype_array, squared_distances_batch

_CHUNK = 1 << 16


class NeighborGraph:
    """Undirected graph on nodes 1..n with cached all-pairs hop distances."""

    def __init__(self, n: int, edges):
        if n < 1:
            raise ValueError("graph needs at least one node")
        seen = set()
        for a, b in edges:
            if not (1 <= a <= n) or not (1 <= b <= n):
                raise ValueError(f"edge ({a}, {b}) references an invalid node")
            if a == b:
                raise ValueError(f"self-loop at node {a}")
            seen.add((min(a, b), max(a, b)))
        self.n = n
        self.edges = tuple(sorted(seen))
        self._dist: np.ndarray | None = None

    @classmethod
    def chain(cls, n: int) -> "NeighborGraph":
        return cls(n, [(i, i + 1) for i in range(1, n)])

    @classmethod
    def grid2d(cls, rows: int, cols: int) -> "NeighborGraph":
        """Row-major grid; node of cell (r, c) is r * cols + c + 1."""
        if rows < 1 or cols < 1:
            raise ValueError("grid needs at least one row and one column")
        edges = []
        for r in range(rows):
            for c in range(cols):
                node = r * cols + c + 1
                if c + 1 < cols:
                    edges.append((node, node + 1))
                if r + 1 < rows:
                    edges.append((node, node + cols))
        return cls(rows * cols, edges)

    @classmethod
    def explicit(cls, n: int, edges) -> "NeighborGraph":
        return cls(n, edges)

    def distances(self) -> np.ndarray:
        """(n, n) hop-count matrix; math.inf marks unreachable pairs."""
        if self._dist is None:
            n = self.n
            adj = [[] for _ in range(n + 1)]
            for a, b in self.edges:
                adj[a].append(b)
                adj[b].append(a)
            dist = np.full((n, n), np.inf)
            for s in range(1, n + 1):
                dist[s - 1, s - 1] = 0
                q = deque([s])
                while q:
                    u = q.popleft()
                    for nb in adj[u]:
                        if not np.isfinite(dist[s - 1, nb - 1]):
                            dist[s - 1, nb - 1] = dist[s - 1, u - 1] + 1
                            q.append(nb)
            self._dist = dist
        return self._dist


def graph_distance(g: NeighborGraph, a: int, b: int) -> float:
    """Shortest hop count between nodes a and b; math.inf if unreachable."""
    if not (1 <= a <= g.n) or not (1 <= b <= g.n):
        raise ValueError(f"node ids must lie in 1..{g.n}")
    return float(g.distances()[a - 1, b - 1])


def h_sigma(u: float, sigma: float) -> float:
    """exp(-u / sigma); at sigma = 0, the indicator of u == 0."""
    if u < 0:
        raise ValueError("u must be nonnegative")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return 1.0 if u == 0 else 0.0
    return math.exp(-u / sigma)


def _h_sigma_arr(u: np.ndarray, sigma: float) -> np.ndarray:
    if sigma == 0:
        return (u == 0).astype(float)
    return np.where(np.isfinite(u), np.exp(-np.asarray(u, dtype=float) / sigma), 0.0)


# --- specs -----------------------------------------------------------------


@dataclass(frozen=True)
class KMeansWinner:
    pass


@dataclass(frozen=True)
class KMeansAllWinners:
    pass


@dataclass(frozen=True)
class SOM:
    graph: NeighborGraph
    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True)
class NeuralGas:
    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True)
class RecruitingNG:
    sigma: float
    epsilons: tuple

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        eps = tuple(float(e) for e in self.epsilons)
        if any(e < 0 or e > 1 for e in eps):
            raise ValueError("recruiting factors must lie in [0, 1]")
        object.__setattr__(self, "epsilons", eps)


@dataclass(frozen=True)
class RecruitingSOM:
    graph: NeighborGraph
    sigmas: tuple

    def __post_init__(self):
        s = tuple(float(x) for x in self.sigmas)
        if any(x < 0 or x > 1 for x in s):
            raise ValueError("per-winner widths must lie in [0, 1]")
        object.__setattr__(self, "sigmas", s)


NeighborhoodSpec = (
    KMeansWinner | KMeansAllWinners | SOM | NeuralGas | RecruitingNG | RecruitingSOM
)


def _check_spec(spec, n: int) -> None:
    if isinstance(spec, (SOM, RecruitingSOM)) and spec.graph.n != n:
        raise ValueError(f"graph has {spec.graph.n} nodes but there are {n} prototypes")
    if isinstance(spec, RecruitingNG) and len(spec.epsilons) != n:
        raise ValueError(f"expected {n} recruiting factors, got {len(spec.epsilons)}")
    if isinstance(spec, RecruitingSOM) and len(spec.sigmas) != n:
        raise ValueError(f"expected {n} widths, got {len(spec.sigmas)}")


# --- weight computation ----------------------------------------------------


def _ranks_from_sq(sq: np.ndarray) -> np.ndarray:
    """rank[t, p] = number of prototypes strictly closer than p (ties share)."""
    out = np.empty(sq.shape, dtype=np.int64)
    for s in range(0, sq.shape[0], _CHUNK):
        block = sq[s : s + _CHUNK]
        out[s : s + _CHUNK] = (block[:, :, None] > block[:, None, :]).sum(axis=2)
    return out


def psi_from_sq(spec, sq: np.ndarray) -> np.ndarray:
    """Weights from an (N, n) squared-distance matrix.

    Only sign comparisons of entries enter, so adding a constant to every
    column of a row leaves the result unchanged.
    """
    sq = np.asarray(sq, dtype=float)
    n = sq.shape[1]
    _check_spec(spec, n)
    kmat = sq <= sq.min(axis=1, keepdims=True)  # Voronoi indicators K_p
    winner = np.argmin(sq, axis=1)  # lowest-index winner

    if isinstance(spec, KMeansAllWinners):
        return kmat.astype(float)
    if isinstance(spec, KMeansWinner):
        out = np.zeros_like(sq)
        out[np.arange(sq.shape[0]), winner] = 1.0
        return out
    if isinstance(spec, SOM):
        hrow = _h_sigma_arr(spec.graph.distances(), spec.sigma)
        return hrow[winner]
    if isinstance(spec, NeuralGas):
        return _h_sigma_arr(_ranks_from_sq(sq).astype(float), spec.sigma)
    if isinstance(spec, RecruitingNG):
        base = _h_sigma_arr(_ranks_from_sq(sq).astype(float), spec.sigma)
        eps = np.asarray(spec.epsilons)
        return base * eps[winner][:, None]
    if isinstance(spec, RecruitingSOM):
        dw = spec.graph.distances()[winner]  # (N, n) hops from each winner
        sig = np.asarray(spec.sigmas)[winner][:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(np.isfinite(dw), np.exp(-dw / sig), 0.0)
        return np.where(sig == 0, (dw == 0).astype(float), out)
    raise TypeError(f"unknown neighborhood spec {type(spec).__name__}")


def psi_batch(spec, w, V) -> np.ndarray:
    """(N, n) weights for a batch of data points."""
    return psi_from_sq(spec, squared_distances_batch(w, V))


def psi_vector(spec, w, v) -> np.ndarray:
    """Weight vector over all prototypes at one datum."""
    return psi_batch(spec, w, np.atleast_1d(np.asarray(v, dtype=float)).reshape(1, -1))[0]


def psi(spec, w, v, p: int) -> float:
    """Weight of prototype p (1-based) at datum v."""
    a = as_prototype_array(w)
    if not (1 <= p <= a.shape[0]):
        raise ValueError(f"prototype index {p} out of range 1..{a.shape[0]}")
    return float(psi_vector(spec, a, v)[p - 1])


def voronoi_indicator(w, v, p: int) -> int:
    """K_p: 1 iff w_p is among the closest prototypes (all ties included)."""
    return int(psi(KMeansAllWinners(), w, v, p))


def winner_selector(w, v, p: int) -> int:
    """A_p: 1 iff p is the lowest index among the closest prototypes."""
    return int(psi(KMeansWinner(), w, v, p))


def rank(w, v, p: int) -> int:
    """Number of prototypes strictly closer to v than w_p; ties share ranks."""
    a = as_prototype_array(w)
    if not (1 <= p <= a.shape[0]):
        raise ValueError(f"prototype index {p} out of range 1..{a.shape[0]}")
    sq = squared_distances_batch(a, np.atleast_1d(np.asarray(v, dtype=float)).reshape(1, -1))
    return int(_ranks_from_sq(sq)[0, p - 1])
