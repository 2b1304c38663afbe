"""Stream-clustering driver.

Batches raw points into level-0 buckets of size m, hands them to a tree or
cache structure, and answers center queries by clustering the structure's
summary together with the not-yet-flushed partial batch.
"""

from __future__ import annotations

import numpy as np

from .coreset import Bucket, CoresetConfig
from .kmeans import CenterSet, assign_to_centers, best_of_runs


class StreamClusterer:
    """Feeds any bucket structure and answers k-means center queries.

    The structure must expose update(bucket) plus either coreset_buckets()
    (plain trees, unioned by the driver) or coreset() (cached structures
    that hand back one reduced bucket).
    """

    def __init__(
        self,
        structure,
        cfg: CoresetConfig,
        query_seed: int | np.random.SeedSequence | None = None,
        runs: int = 5,
        lloyd_iters: int = 20,
    ):
        self.structure = structure
        self.cfg = cfg
        self.runs = runs
        self.lloyd_iters = lloyd_iters
        if query_seed is None:
            query_seed = np.random.SeedSequence(cfg.seed, spawn_key=(1,))
        self._rng = np.random.default_rng(query_seed)
        self._partial: list[np.ndarray] = []
        self.points_seen = 0
        self.buckets_delivered = 0
        self._dim: int | None = None
        self.last_query_parts = 0

    def push(self, p) -> None:
        """Buffer one point; every m-th point flushes a bucket downstream."""
        p = np.asarray(p, dtype=np.float64)
        if self._dim is None:
            self._dim = p.shape[0]
        elif p.shape[0] != self._dim:
            raise ValueError(f"point has dimension {p.shape[0]}, stream is {self._dim}")
        self._partial.append(p)
        self.points_seen += 1
        if len(self._partial) == self.cfg.m:
            self.buckets_delivered += 1
            bucket = Bucket(
                np.array(self._partial),
                np.ones(self.cfg.m),
                self.buckets_delivered,
                self.buckets_delivered,
                level=0,
            )
            self.structure.update(bucket)
            self._partial = []

    def query(self) -> CenterSet:
        """Cluster the structure summary plus the partial batch."""
        if self.points_seen == 0:
            raise ValueError("no points ingested yet")
        if hasattr(self.structure, "coreset_buckets"):
            parts = self.structure.coreset_buckets()
        elif self.structure.n > 0:
            parts = [self.structure.coreset()]
        else:
            parts = []
        self.last_query_parts = len(parts)

        pools = [b.points for b in parts]
        pool_weights = [b.weights for b in parts]
        if self._partial:
            pools.append(np.array(self._partial))
            pool_weights.append(np.ones(len(self._partial)))
        points = np.concatenate(pools)
        weights = np.concatenate(pool_weights)
        centers = best_of_runs(
            points, weights, self.cfg.k, self._rng, runs=self.runs, lloyd_iters=self.lloyd_iters
        )
        assign, _ = assign_to_centers(points, centers)
        per_center = np.bincount(assign, weights=weights, minlength=len(centers))
        return CenterSet(centers, per_center)

    def stored_points(self) -> int:
        return self.structure.stored_points() + len(self._partial)

    def total_weight(self) -> float:
        """Weight of the current summary plus buffer; equals points_seen."""
        if hasattr(self.structure, "coreset_buckets"):
            structure_weight = sum(b.total_weight() for b in self.structure.coreset_buckets())
        else:
            structure_weight = self.structure.cfg.m * self.structure.n
        return float(structure_weight + len(self._partial))
