"""Hybrid online clusterer: sequential center maintenance with a cached
coreset tree standing by for recomputation.

Every arriving point nudges its nearest center toward it (the one-pass
centroid rule) and also flows into a cached coreset tree in the
background.  phi_now tracks an upper bound on the current clustering cost:
it grows by the squared distance of each point to its pre-move nearest
center.  A query normally just returns the maintained centers; only when
phi_now exceeds alpha times the cost recorded at the last recomputation
does the query rebuild centers from the coreset, which resets the bound to
phi_prev / (1 - eps).
"""

from __future__ import annotations

import numpy as np

from .cache import CachedCoresetTree
from .coreset import Bucket, CoresetConfig
from .kmeans import (
    CenterSet,
    assign_to_centers,
    best_of_runs,
    clustering_cost,
    kmeans_pp,
    sq_dists_to_centers,
)


class OnlineClusterer:
    """Sequential k-means with threshold-triggered coreset fallback."""

    def __init__(
        self,
        cfg: CoresetConfig,
        r: int = 2,
        alpha: float = 1.2,
        eps: float = 0.1,
        warmup: int | None = None,
        seed: int | np.random.SeedSequence | None = None,
        refine_runs: int = 5,
        lloyd_iters: int = 20,
    ):
        if alpha <= 1.0:
            raise ValueError(f"alpha must exceed 1, got {alpha}")
        if not 0.0 < eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {eps}")
        self.cfg = cfg
        self.alpha = alpha
        self.eps = eps
        self.warmup = 2 * cfg.k if warmup is None else warmup
        if self.warmup < cfg.k:
            raise ValueError(f"warmup {self.warmup} smaller than k={cfg.k}")
        self.refine_runs = refine_runs
        self.lloyd_iters = lloyd_iters

        root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(
            cfg.seed if seed is None else seed
        )
        entropy, key = root.entropy, tuple(root.spawn_key)
        self.cc = CachedCoresetTree(
            cfg, r, seed=np.random.SeedSequence(entropy, spawn_key=key + (0,))
        )
        self._rng = np.random.default_rng(
            np.random.SeedSequence(entropy, spawn_key=key + (1,))
        )

        self.centers: np.ndarray | None = None
        self.center_weights: np.ndarray | None = None
        self.phi_prev = 0.0
        self.phi_now = 0.0
        self._warm: list[np.ndarray] = []
        self._partial: list[np.ndarray] = []
        self._delivered = 0
        self.query_count = 0
        self.fallback_count = 0
        self.last_fell_back: bool | None = None

    @property
    def initialized(self) -> bool:
        return self.centers is not None

    def ingest(self, p) -> None:
        """Stream entry point: buffers the warmup prefix, then updates."""
        if self.centers is None:
            self._warm.append(np.asarray(p, dtype=np.float64))
            if len(self._warm) == self.warmup:
                self.initialize(np.array(self._warm))
                self._warm = []
            return
        self.update(p)

    def initialize(self, s0) -> None:
        """Seed centers from the warmup set and start the cost bound there.

        The warmup points also enter the background coreset pipeline so a
        later fallback summarizes the stream from its very first point.
        """
        s0 = np.atleast_2d(np.asarray(s0, dtype=np.float64))
        if len(s0) < self.cfg.k:
            raise ValueError(f"warmup set has {len(s0)} points, need >= {self.cfg.k}")
        ones = np.ones(len(s0))
        self.centers = kmeans_pp(s0, ones, self.cfg.k, self._rng)
        assign, _ = assign_to_centers(s0, self.centers)
        self.center_weights = np.bincount(assign, minlength=len(self.centers)).astype(
            np.float64
        )
        cost = clustering_cost(s0, self.centers, ones)
        self.phi_prev = cost
        self.phi_now = cost
        for p in s0:
            self._push_partial(p)

    def _push_partial(self, p: np.ndarray) -> None:
        self._partial.append(p)
        if len(self._partial) == self.cfg.m:
            self._delivered += 1
            bucket = Bucket(
                np.array(self._partial),
                np.ones(self.cfg.m),
                self._delivered,
                self._delivered,
                level=0,
            )
            self.cc.update(bucket)
            self._partial = []

    def update(self, p) -> None:
        """Absorb one point: bump phi_now, move the nearest center, buffer."""
        if self.centers is None:
            raise RuntimeError("clusterer not initialized; feed warmup points first")
        p = np.asarray(p, dtype=np.float64)
        d2 = sq_dists_to_centers(p[None, :], self.centers)[0]
        j = int(np.argmin(d2))
        self.phi_now += float(d2[j])
        w = self.center_weights[j]
        self.centers[j] = (w * self.centers[j] + p) / (w + 1.0)
        self.center_weights[j] = w + 1.0
        self._push_partial(p)

    def query(self) -> CenterSet:
        """Current centers; recomputed from the coreset only past threshold."""
        if self.centers is None:
            raise RuntimeError("clusterer not initialized; feed warmup points first")
        self.query_count += 1
        if self.phi_now > self.alpha * self.phi_prev:
            self._fallback()
            self.last_fell_back = True
        else:
            self.last_fell_back = False
        return CenterSet(self.centers.copy(), self.center_weights.copy())

    def _fallback(self) -> None:
        pools = []
        pool_weights = []
        if self.cc.n > 0:
            summary = self.cc.coreset()
            pools.append(summary.points)
            pool_weights.append(summary.weights)
        if self._partial:
            pools.append(np.array(self._partial))
            pool_weights.append(np.ones(len(self._partial)))
        points = np.concatenate(pools)
        weights = np.concatenate(pool_weights)
        self.centers = best_of_runs(
            points,
            weights,
            self.cfg.k,
            self._rng,
            runs=self.refine_runs,
            lloyd_iters=self.lloyd_iters,
        )
        assign, _ = assign_to_centers(points, self.centers)
        self.center_weights = np.bincount(
            assign, weights=weights, minlength=len(self.centers)
        )
        self.phi_prev = clustering_cost(points, self.centers, weights)
        self.phi_now = self.phi_prev / (1.0 - self.eps)
        self.fallback_count += 1

    def stored_points(self) -> int:
        return self.cc.stored_points() + len(self._partial) + len(self._warm) + self.cfg.k
