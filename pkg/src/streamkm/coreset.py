"""Buckets and the coreset construction used by every tree and cache.

A Bucket is a weighted point set that summarizes a contiguous span of base
buckets (inclusive 1-based indices) at a given nesting level.  Level 0
means raw stream points; each reduction of one or more buckets into a
size-m summary increments the level by one past the deepest input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kmeans import assign_to_centers, d2_sample


@dataclass(frozen=True)
class CoresetConfig:
    """Clustering parameters shared by all structures.

    m is the bucket/summary size in points; the usual setting is 20*k.
    The seed drives every reduction so runs are reproducible.
    """

    k: int
    m: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.m is None:
            object.__setattr__(self, "m", 20 * self.k)
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.m < self.k:
            raise ValueError(f"bucket size m={self.m} must be >= k={self.k}")


@dataclass
class Bucket:
    """Weighted point set with its stream span and coreset level."""

    points: np.ndarray  # (n, d)
    weights: np.ndarray  # (n,)
    span_left: int
    span_right: int
    level: int = 0

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if len(self.points) != len(self.weights):
            raise ValueError(
                f"{len(self.points)} points but {len(self.weights)} weights"
            )
        if np.any(self.weights <= 0):
            raise ValueError("bucket weights must be positive")
        if self.span_left > self.span_right:
            raise ValueError(f"bad span [{self.span_left}, {self.span_right}]")
        self._total_weight: float | None = None

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def span(self) -> tuple[int, int]:
        return (self.span_left, self.span_right)

    def total_weight(self) -> float:
        # memoized; weights never mutate after construction (pairwise sum)
        if self._total_weight is None:
            self._total_weight = float(np.sum(self.weights))
        return self._total_weight

    def copy(self) -> "Bucket":
        return Bucket(
            self.points.copy(), self.weights.copy(), self.span_left, self.span_right, self.level
        )


def _ordered_contiguous(inputs: list[Bucket]) -> list[Bucket]:
    """Sort buckets by span and verify the spans tile one interval."""
    if not inputs:
        raise ValueError("need at least one input bucket")
    ordered = sorted(inputs, key=lambda b: b.span_left)
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.span_left != prev.span_right + 1:
            raise ValueError(
                f"bucket spans must be disjoint and contiguous; "
                f"got [{prev.span_left},{prev.span_right}] then "
                f"[{cur.span_left},{cur.span_right}]"
            )
    return ordered


def union_buckets(inputs: list[Bucket]) -> Bucket:
    """Concatenate bucket point sets without reduction.

    Level is the max input level; span is the union of the input spans.
    """
    ordered = _ordered_contiguous(inputs)
    return Bucket(
        np.concatenate([b.points for b in ordered]),
        np.concatenate([b.weights for b in ordered]),
        ordered[0].span_left,
        ordered[-1].span_right,
        max(b.level for b in ordered),
    )


def build_coreset(cfg: CoresetConfig, inputs: list[Bucket], rng: np.random.Generator) -> Bucket:
    """Reduce contiguous buckets to one bucket of at most m weighted points.

    Seeds are drawn from the combined set by weighted D^2 sampling; every
    input point then contributes its weight to its nearest seed.  When the
    combined set already has at most m points it passes through unchanged
    (every point becomes a seed).  The output level is one past the deepest
    input level either way.
    """
    ordered = _ordered_contiguous(inputs)
    points = np.concatenate([b.points for b in ordered])
    weights = np.concatenate([b.weights for b in ordered])
    level = 1 + max(b.level for b in ordered)
    span_l, span_r = ordered[0].span_left, ordered[-1].span_right

    if len(points) <= cfg.m:
        return Bucket(points.copy(), weights.copy(), span_l, span_r, level)

    seed_idx = d2_sample(points, weights, cfg.m, rng)
    seeds = points[seed_idx]
    assign, _ = assign_to_centers(points, seeds)
    agg = np.bincount(assign, weights=weights, minlength=len(seed_idx))
    return Bucket(seeds.copy(), agg, span_l, span_r, level)
