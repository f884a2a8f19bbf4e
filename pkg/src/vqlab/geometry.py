"""Distances, winner selection and cellular-manifold membership.

The cellular manifold is realized by a squared-distance gap test: a point
belongs to it when every non-winning prototype is farther than the winner by
more than ``theta = eta**2`` in squared distance.  The complement (the
"tube") contains the Voronoi boundaries, where neighborhood functions are
discontinuous.  All functions here are pure and accept prototype sets as
(n, d) arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def as_prototype_array(w) -> np.ndarray:
    a = np.asarray(w, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[0] < 1:
        raise ValueError("prototypes must form a nonempty (n, d) array")
    return a


@dataclass(frozen=True)
class PrototypeSet:
    """Ordered prototypes w_1..w_n; indices are 1-based and stable."""

    points: tuple

    @classmethod
    def of(cls, w) -> "PrototypeSet":
        return cls(tuple(map(tuple, as_prototype_array(w))))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0])


def heaviside(x: float) -> int:
    """Step function: 1 for x >= 0, 0 for x < 0."""
    if math.isnan(x):
        raise ValueError("heaviside is undefined for NaN")
    return 1 if x >= 0 else 0


def squared_distances(w, v) -> np.ndarray:
    a = as_prototype_array(w)
    p = np.atleast_1d(np.asarray(v, dtype=float))
    if p.shape[0] != a.shape[1]:
        raise ValueError(f"point dimension {p.shape[0]} != prototype dimension {a.shape[1]}")
    diff = a - p
    return np.einsum("ij,ij->i", diff, diff)


def squared_distances_batch(w, V) -> np.ndarray:
    """(N, n) squared distances from each row of V to each prototype."""
    a = as_prototype_array(w)
    V = np.asarray(V, dtype=float)
    if V.ndim == 1:
        V = V.reshape(-1, 1)
    if V.shape[1] != a.shape[1]:
        raise ValueError(f"point dimension {V.shape[1]} != prototype dimension {a.shape[1]}")
    d = V[:, None, :] - a[None, :, :]
    return np.einsum("tpj,tpj->tp", d, d)


@dataclass(frozen=True)
class DistanceProfile:
    """Squared distances to every prototype and the (1-based) winner index."""

    squared: np.ndarray
    winner: int


def distance_profile(w, v) -> DistanceProfile:
    sq = squared_distances(w, v)
    return DistanceProfile(squared=sq, winner=int(np.argmin(sq)) + 1)


@dataclass(frozen=True)
class CellularParams:
    """Gap threshold theta = eta**2 and the perturbation bounds mu, nu."""

    eta: float
    theta: float
    mu: float
    nu: float


def perturbation_bound(eta: float, delta: float) -> CellularParams:
    """Cellular parameters for tube width eta on a support of diameter delta.

    nu is the prototype-perturbation radius below which all Heaviside
    comparisons are invariant on the cellular manifold:
    mu = sqrt(4 delta^2 + eta^2 / 2) - 2 delta, nu = min(mu, eta^2 / (10 delta)).
    """
    if eta <= 0 or delta <= 0:
        raise ValueError("eta and delta must be positive")
    mu = math.sqrt(4.0 * delta * delta + 0.5 * eta * eta) - 2.0 * delta
    nu = min(mu, eta * eta / (10.0 * delta))
    return CellularParams(eta=float(eta), theta=float(eta * eta), mu=mu, nu=nu)


def winner_gap(w, v) -> float:
    """Smallest squared-distance margin of the winner over the runner-up.

    Infinite for a single prototype (no boundary); zero when two prototypes
    coincide or tie at v.
    """
    sq = squared_distances(w, v)
    if sq.shape[0] == 1:
        return math.inf
    part = np.partition(sq, 1)
    return float(part[1] - part[0])


def winner_gap_batch(w, V) -> np.ndarray:
    sq = squared_distances_batch(w, V)
    if sq.shape[1] == 1:
        return np.full(sq.shape[0], np.inf)
    part = np.partition(sq, 1, axis=1)
    return part[:, 1] - part[:, 0]


def in_cellular_manifold(w, v, cp: CellularParams) -> bool:
    """True iff every r != winner satisfies d_r^2 - d_winner^2 > theta."""
    return winner_gap(w, v) > cp.theta


def tube_indicator(w, v, cp: CellularParams) -> int:
    """1 on the tubular manifold (complement of the cellular manifold)."""
    return 0 if in_cellular_manifold(w, v, cp) else 1


def min_pairwise_gap(w, v) -> float:
    """Smallest |d_r^2 - d_p^2| over all prototype pairs; inf for n = 1.

    Points where this exceeds theta have a Heaviside matrix that is stable
    under prototype perturbations smaller than nu, for every pair, not only
    those involving the winner.
    """
    sq = np.sort(squared_distances(w, v))
    if sq.shape[0] == 1:
        return math.inf
    return float(np.min(np.diff(sq)))


def min_pairwise_gap_batch(w, V) -> np.ndarray:
    sq = np.sort(squared_distances_batch(w, V), axis=1)
    if sq.shape[1] == 1:
        return np.full(sq.shape[0], np.inf)
    return np.min(np.diff(sq, axis=1), axis=1)


def heaviside_matrix(w, v) -> np.ndarray:
    """(n, n) matrix H(d_r^2 - d_p^2) over all ordered pairs (r, p)."""
    sq = squared_distances(w, v)
    return (sq[:, None] - sq[None, :] >= 0)
