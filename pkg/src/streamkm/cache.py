"""Coreset tree with a query-time cache of full-prefix summaries.

Answering a query for all N ingested buckets usually means merging one
cached summary of buckets [1, major(N, r)] with the tree buckets covering
the minor part, touching at most r buckets instead of one bucket per tree
level.  Results are cached under the bucket count N and pruned back to
prefixsum(N, r) plus N itself, so under frequent queries the major part is
always available.  If it is not (queries were sparse), the query falls
back to merging every active tree bucket, exactly like the plain tree.
"""

from __future__ import annotations

import numpy as np

from . import radix
from .coreset import Bucket, CoresetConfig, build_coreset
from .tree import CoresetTree


class CachedCoresetTree:
    """Merge-degree-r coreset tree plus cached query summaries."""

    def __init__(
        self,
        cfg: CoresetConfig,
        r: int = 2,
        seed: int | np.random.SeedSequence | None = None,
    ):
        self.cfg = cfg
        self.r = r
        self._rng = np.random.default_rng(cfg.seed if seed is None else seed)
        self.tree = CoresetTree(cfg, r, rng=self._rng)
        self.cache: dict[int, Bucket] = {}
        self.query_builds = 0
        self.last_query_width = 0  # buckets unioned by the most recent query
        self.last_query_path: str | None = None
        self.last_returned_level: int | None = None

    @property
    def n(self) -> int:
        """Number of buckets ingested so far."""
        return self.tree.n_ingested

    def update(self, bucket: Bucket) -> None:
        """Ingest a bucket; the cache is only touched by queries."""
        self.tree.update(bucket)

    def coreset(self) -> Bucket:
        """Summary of everything ingested, spanning buckets [1, N]."""
        n = self.tree.n_ingested
        if n == 0:
            raise ValueError("no buckets ingested yet")
        if n in self.cache:
            # Repeat query with no intervening update: hand back the entry
            # untouched, no eviction.
            self.last_query_width = 0
            self.last_query_path = "cached"
            self.last_returned_level = self.cache[n].level
            return self.cache[n].copy()

        n1 = radix.major(n, self.r)
        beta, alpha = radix.decompose(n, self.r)[0]
        if n1 == 0:
            candidate = self._minor_buckets(beta, alpha)
            self.last_query_path = "tree-only"
        elif n1 in self.cache:
            prefix = self.cache[n1]
            minor_part = self._minor_buckets(beta, alpha)
            # The cached prefix must abut the minor-part buckets exactly.
            assert prefix.span_right + 1 == minor_part[0].span_left, (
                f"cache entry [{prefix.span_left},{prefix.span_right}] does not "
                f"abut tree buckets starting at {minor_part[0].span_left}"
            )
            candidate = [prefix] + minor_part
            self.last_query_path = "cache-hit"
        else:
            candidate = self.tree.coreset_buckets()
            self.last_query_path = "fallback"
        self.last_query_width = len(candidate)

        if len(candidate) == 1:
            # Single already-reduced bucket: keep it as-is so the level does
            # not climb on the tree-only path.
            out = candidate[0].copy()
        else:
            out = build_coreset(self.cfg, candidate, self._rng)
            self.query_builds += 1

        self.cache[n] = out
        allowed = set(radix.prefixsum(n, self.r))
        allowed.add(n)
        for key in sorted(self.cache):
            if key not in allowed:
                del self.cache[key]
        self.last_returned_level = out.level
        return out.copy()

    def _minor_buckets(self, beta: int, alpha: int) -> list[Bucket]:
        """The beta slot-alpha tree buckets covering the minor part of N."""
        slot = self.tree.slots[alpha] if alpha < len(self.tree.slots) else []
        assert len(slot) == beta, (
            f"digit invariant violated: slot {alpha} holds {len(slot)} buckets, "
            f"expected {beta}"
        )
        assert slot[-1].span_right == self.tree.last_right
        return list(slot)

    def cache_keys(self) -> list[int]:
        return sorted(self.cache)

    @property
    def builds(self) -> int:
        """Total coreset constructions (tree merges plus query reductions)."""
        return self.tree.builds + self.query_builds

    def bucket_count(self) -> int:
        return self.tree.bucket_count() + len(self.cache)

    def stored_points(self) -> int:
        return self.tree.stored_points() + sum(b.n_points for b in self.cache.values())
