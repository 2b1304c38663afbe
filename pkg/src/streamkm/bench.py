"""Benchmark runner: streams a dataset into one algorithm, fires scheduled
queries, and records quality (SSQ over the retained prefix), timings, and a
memory estimate of 8 bytes per stored dimension."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .cache import CachedCoresetTree
from .coreset import CoresetConfig
from .driver import StreamClusterer
from .kmeans import CenterSet, SequentialKMeans, best_of_runs, clustering_cost
from .online import OnlineClusterer
from .recursive import RecursiveCachedTree
from .tree import CoresetTree

ALGORITHMS = ("seq", "ct", "cc", "rcc", "online")
CSV_HEADER = "algo,seed,point_index,ssq,query_ns,update_ns_cum,mem_bytes"


@dataclass
class QueryRecord:
    point_index: int
    ssq: float
    query_ns: int
    update_ns_cum: int
    mem_bytes: int


@dataclass
class RunMetrics:
    algo: str
    seed: int
    records: list[QueryRecord] = field(default_factory=list)
    update_ns_total: int = 0
    peak_stored_points: int = 0
    fallbacks: int = 0

    @property
    def final_ssq(self) -> float:
        return self.records[-1].ssq if self.records else math.nan

    @property
    def query_ns_total(self) -> int:
        return sum(r.query_ns for r in self.records)


class _Algo:
    """Uniform view over the five streaming algorithms."""

    def __init__(self, name: str, cfg: CoresetConfig, seed_seq, opts):
        self.name = name
        if name == "seq":
            self.impl = SequentialKMeans(cfg.k)
        elif name == "ct":
            rng = np.random.default_rng(seed_seq)
            self.impl = StreamClusterer(
                CoresetTree(cfg, opts.r, rng=rng),
                cfg,
                query_seed=_spawn(seed_seq, 1),
                runs=opts.best_of,
                lloyd_iters=opts.lloyd_iters,
            )
        elif name == "cc":
            self.impl = StreamClusterer(
                CachedCoresetTree(cfg, opts.r, seed=_spawn(seed_seq, 0)),
                cfg,
                query_seed=_spawn(seed_seq, 1),
                runs=opts.best_of,
                lloyd_iters=opts.lloyd_iters,
            )
        elif name == "rcc":
            self.impl = StreamClusterer(
                RecursiveCachedTree(cfg, opts.rcc_order, seed=_spawn(seed_seq, 0)),
                cfg,
                query_seed=_spawn(seed_seq, 1),
                runs=opts.best_of,
                lloyd_iters=opts.lloyd_iters,
            )
        elif name == "online":
            self.impl = OnlineClusterer(
                cfg,
                opts.r,
                alpha=opts.alpha,
                eps=opts.eps,
                warmup=opts.warmup,
                seed=seed_seq,
                refine_runs=opts.best_of,
                lloyd_iters=opts.lloyd_iters,
            )
        else:
            raise ValueError(f"unknown algorithm {name!r}; pick one of {ALGORITHMS}")

    def ingest(self, p) -> None:
        if self.name == "seq":
            self.impl.update(p)
        elif self.name == "online":
            self.impl.ingest(p)
        else:
            self.impl.push(p)

    def query(self) -> CenterSet:
        if self.name == "seq":
            return self.impl.center_set()
        return self.impl.query()

    def stored_points(self) -> int:
        return self.impl.stored_points()

    @property
    def fallbacks(self) -> int:
        return self.impl.fallback_count if self.name == "online" else 0


@dataclass
class BenchOptions:
    r: int = 2
    rcc_order: int = 3
    alpha: float = 1.2
    eps: float = 0.1
    warmup: int | None = None
    best_of: int = 5
    lloyd_iters: int = 20
    exact_ssq: bool = True
    timing: bool = True
    final_query: bool = True


def _spawn(seed_seq: np.random.SeedSequence, idx: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        entropy=seed_seq.entropy, spawn_key=tuple(seed_seq.spawn_key) + (idx,)
    )


def run_benchmark(
    algo: str,
    points: np.ndarray,
    query_indices: list[int],
    cfg: CoresetConfig,
    seed: int,
    opts: BenchOptions | None = None,
) -> RunMetrics:
    """Stream `points` into `algo`, querying at the given 1-based indices."""
    opts = opts or BenchOptions()
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n, d = points.shape
    alg = _Algo(algo, cfg, np.random.SeedSequence(seed), opts)
    qset = set(query_indices)
    if opts.final_query:
        qset.add(n)
    metrics = RunMetrics(algo=algo, seed=seed)
    clock = time.perf_counter_ns if opts.timing else (lambda: 0)

    update_ns = 0
    for i in range(1, n + 1):
        t0 = clock()
        alg.ingest(points[i - 1])
        update_ns += clock() - t0
        if i in qset:
            t0 = clock()
            centers = alg.query()
            query_ns = clock() - t0
            if opts.exact_ssq:
                ssq = clustering_cost(points[:i], centers.centers)
            else:
                ssq = math.nan
            stored = alg.stored_points()
            metrics.peak_stored_points = max(metrics.peak_stored_points, stored)
            metrics.records.append(
                QueryRecord(i, ssq, query_ns, update_ns, stored * d * 8)
            )
    metrics.update_ns_total = update_ns
    metrics.fallbacks = alg.fallbacks
    return metrics


def batch_reference(points, k: int, seed: int, runs: int = 5, lloyd_iters: int = 20) -> float:
    """SSQ of the offline best-of-runs clustering on the full dataset."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    weights = np.ones(len(points))
    rng = np.random.default_rng(seed)
    centers = best_of_runs(points, weights, k, rng, runs=runs, lloyd_iters=lloyd_iters)
    return clustering_cost(points, centers, weights)


def format_csv(runs: list[RunMetrics]) -> str:
    lines = [CSV_HEADER]
    for run in runs:
        for rec in run.records:
            lines.append(
                f"{run.algo},{run.seed},{rec.point_index},{rec.ssq!r},"
                f"{rec.query_ns},{rec.update_ns_cum},{rec.mem_bytes}"
            )
    return "\n".join(lines) + "\n"


def summarize(runs: list[RunMetrics]) -> dict:
    """Per-algorithm medians across runs, JSON-ready."""
    by_algo: dict[str, list[RunMetrics]] = {}
    for run in runs:
        by_algo.setdefault(run.algo, []).append(run)
    summary = {}
    for algo, group in sorted(by_algo.items()):
        summary[algo] = {
            "runs": len(group),
            "median_final_ssq": float(np.median([g.final_ssq for g in group])),
            "median_update_ns": int(np.median([g.update_ns_total for g in group])),
            "median_query_ns": int(np.median([g.query_ns_total for g in group])),
            "median_peak_mem_bytes": int(
                np.median([max(r.mem_bytes for r in g.records) for g in group])
            ),
            "queries_per_run": len(group[0].records),
        }
    return summary


def write_outputs(out_dir, runs: list[RunMetrics], config: dict) -> None:
    """Write results.csv and summary.json under out_dir."""
    import pathlib

    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(format_csv(runs))
    payload = {"config": config, "algorithms": summarize(runs)}
    (out / "summary.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
