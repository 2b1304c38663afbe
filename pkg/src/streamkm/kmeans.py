"""Weighted k-means primitives.

Point sets are (n, d) float64 arrays with a parallel (n,) array of positive
weights; centers are (k, d) arrays.  Provides the clustering objective,
D^2-sampled seeding, Lloyd refinement, a best-of-several-runs wrapper, and
the one-pass sequential clusterer used as a streaming baseline.

All randomness flows through an explicit ``numpy.random.Generator`` so that
identical seeds reproduce identical results bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class CenterSet:
    """k cluster centers plus the accumulated weight each center carries.

    The weights matter only to the sequential/online maintenance paths,
    which move a center to the weighted centroid of it and a new point.
    """

    centers: np.ndarray  # (k, d)
    weights: np.ndarray  # (k,)

    @classmethod
    def from_centers(cls, centers: np.ndarray) -> "CenterSet":
        centers = np.asarray(centers, dtype=np.float64)
        return cls(centers, np.zeros(len(centers)))

    @property
    def k(self) -> int:
        return len(self.centers)

    def copy(self) -> "CenterSet":
        return CenterSet(self.centers.copy(), self.weights.copy())


def squared_distance(x, y) -> float:
    """Squared Euclidean distance between two points of equal dimension."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    return float(diff @ diff)


def sq_dists_to_centers(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(n, k) matrix of squared distances; small negatives from the GEMM
    expansion are clipped to zero."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if points.shape[1] != centers.shape[1]:
        raise ValueError(
            f"dimension mismatch: points d={points.shape[1]}, centers d={centers.shape[1]}"
        )
    p2 = np.einsum("ij,ij->i", points, points)
    c2 = np.einsum("ij,ij->i", centers, centers)
    d2 = p2[:, None] + c2[None, :] - 2.0 * (points @ centers.T)
    return np.maximum(d2, 0.0)


def assign_to_centers(points, centers) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-center index and squared distance per point.

    Ties go to the lowest center index (argmin semantics), which keeps
    assignments deterministic.
    """
    d2 = sq_dists_to_centers(points, centers)
    idx = np.argmin(d2, axis=1)
    return idx, d2[np.arange(len(d2)), idx]


def clustering_cost(points, centers, weights=None) -> float:
    """Sum over points of weight times squared distance to the nearest center.

    An empty point set costs 0; an empty center set is an error.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if centers.size == 0:
        raise ValueError("clustering_cost requires at least one center")
    points = np.asarray(points, dtype=np.float64)
    if points.size == 0:
        return 0.0
    points = np.atleast_2d(points)
    _, d2 = assign_to_centers(points, centers)
    if weights is None:
        return float(np.sum(d2))
    return float(np.dot(np.asarray(weights, dtype=np.float64), d2))


def _draw(prob: np.ndarray, rng: np.random.Generator) -> int:
    """Index drawn proportionally to prob (not necessarily normalized)."""
    cum = np.cumsum(prob)
    idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return min(idx, len(prob) - 1)


def d2_sample(points: np.ndarray, weights: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of up to k seeds: first drawn by weight, the rest by
    weight times squared distance to the seeds chosen so far.

    Stops early once every point coincides with a chosen seed, so the
    result never contains duplicate coordinates.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    weights = np.asarray(weights, dtype=np.float64)
    n = len(points)
    if n == 0:
        raise ValueError("cannot sample seeds from an empty point set")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    def d2_to(idx: int) -> np.ndarray:
        diff = points - points[idx]
        return np.einsum("ij,ij->i", diff, diff)

    chosen = [_draw(weights, rng)]
    closest = d2_to(chosen[-1])
    while len(chosen) < k:
        prob = weights * closest
        if prob.sum() <= 0.0:
            break  # every remaining point duplicates a chosen seed
        chosen.append(_draw(prob, rng))
        np.minimum(closest, d2_to(chosen[-1]), out=closest)
    return np.array(chosen, dtype=np.intp)


def kmeans_pp(points, weights, k: int, rng: np.random.Generator) -> np.ndarray:
    """D^2-sampling seeding; returns up to k distinct centers drawn from the set."""
    idx = d2_sample(points, weights, k, rng)
    return np.atleast_2d(np.asarray(points, dtype=np.float64))[idx].copy()


def lloyd_refine(points, centers, weights=None, max_iters: int = 20) -> np.ndarray:
    """Weighted Lloyd iterations from the given centers.

    Stops after max_iters or as soon as assignments repeat; a cluster that
    loses all points keeps its previous center.  Cost never increases.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64)).copy()
    if weights is None:
        weights = np.ones(len(points))
    weights = np.asarray(weights, dtype=np.float64)
    k = len(centers)
    weighted_points = points * weights[:, None]
    prev_assign = None
    for _ in range(max_iters):
        assign, _ = assign_to_centers(points, centers)
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            break
        prev_assign = assign
        wsum = np.bincount(assign, weights=weights, minlength=k)
        sums = np.stack(
            [
                np.bincount(assign, weights=weighted_points[:, j], minlength=k)
                for j in range(points.shape[1])
            ],
            axis=1,
        )
        occupied = wsum > 0
        centers[occupied] = sums[occupied] / wsum[occupied, None]
    return centers


def best_of_runs(
    points,
    weights,
    k: int,
    rng: np.random.Generator,
    runs: int = 5,
    lloyd_iters: int = 20,
) -> np.ndarray:
    """Best of several independent seed-then-refine runs, by cost on the inputs."""
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    sub_seeds = rng.integers(0, 2**63, size=runs)
    best_centers = None
    best_cost = np.inf
    for seed in sub_seeds:
        sub_rng = np.random.default_rng(int(seed))
        centers = kmeans_pp(points, weights, k, sub_rng)
        if lloyd_iters > 0:
            centers = lloyd_refine(points, centers, weights, max_iters=lloyd_iters)
        cost = clustering_cost(points, centers, weights)
        if cost < best_cost:
            best_cost = cost
            best_centers = centers
    return best_centers


class SequentialKMeans:
    """One-pass streaming clusterer.

    The first k stream points become the centers (weight 1 each); every
    later point moves its nearest center to the weighted centroid
    (w*c + p) / (w + 1) and increments that center's weight.
    """

    def __init__(self, k: int):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k
        self._centers: np.ndarray | None = None
        self._weights: np.ndarray | None = None
        self._seeded = 0

    @property
    def initialized(self) -> bool:
        return self._seeded >= self.k

    def update(self, p) -> None:
        p = np.asarray(p, dtype=np.float64)
        if self._centers is None:
            self._centers = np.zeros((self.k, p.shape[0]))
            self._weights = np.zeros(self.k)
        if self._seeded < self.k:
            self._centers[self._seeded] = p
            self._weights[self._seeded] = 1.0
            self._seeded += 1
            return
        d2 = sq_dists_to_centers(p[None, :], self._centers)[0]
        j = int(np.argmin(d2))
        w = self._weights[j]
        self._centers[j] = (w * self._centers[j] + p) / (w + 1.0)
        self._weights[j] = w + 1.0

    def center_set(self) -> CenterSet:
        """Current centers; before k points arrive, the seeded prefix."""
        if self._seeded == 0:
            raise RuntimeError("no points seen yet")
        s = self._seeded
        return CenterSet(self._centers[:s].copy(), self._weights[:s].copy())

    def stored_points(self) -> int:
        return self.k


def sequential_update(state: CenterSet, p) -> None:
    """Single MacQueen step on an initialized CenterSet, in place."""
    p = np.asarray(p, dtype=np.float64)
    if state.centers is None or len(state.centers) == 0:
        raise ValueError("sequential update requires an initialized center set")
    d2 = sq_dists_to_centers(p[None, :], state.centers)[0]
    j = int(np.argmin(d2))
    w = state.weights[j]
    state.centers[j] = (w * state.centers[j] + p) / (w + 1.0)
    state.weights[j] = w + 1.0
