import math

import numpy as np
import pytest

from streamkm import Bucket, CoresetConfig, build_coreset, clustering_cost, union_buckets


def make_bucket(rng, span_left, span_right, n=20, level=0, d=2, shift=0.0):
    pts = rng.normal(size=(n, d)) + shift
    return Bucket(pts, rng.uniform(0.5, 2.0, n), span_left, span_right, level)


class TestBucket:
    def test_weight_positive_enforced(self):
        with pytest.raises(ValueError):
            Bucket([[1.0, 2.0]], [0.0], 1, 1, 0)

    def test_span_order_enforced(self):
        with pytest.raises(ValueError):
            Bucket([[1.0, 2.0]], [1.0], 3, 2, 0)

    def test_total_weight(self):
        b = Bucket([[1.0, 0], [2, 0]], [1.5, 2.5], 1, 1, 0)
        assert b.total_weight() == pytest.approx(4.0)

    def test_copy_is_independent(self):
        b = Bucket([[1.0, 0]], [1.0], 1, 1, 0)
        c = b.copy()
        c.points[0, 0] = 99.0
        assert b.points[0, 0] == 1.0


class TestUnion:
    def test_single_identity(self):
        rng = np.random.default_rng(0)
        b = make_bucket(rng, 1, 3, level=1)
        u = union_buckets([b])
        assert np.array_equal(u.points, b.points)
        assert u.span == (1, 3)
        assert u.level == 1

    def test_two_adjacent(self):
        rng = np.random.default_rng(1)
        a = make_bucket(rng, 1, 3, n=5, level=1)
        b = make_bucket(rng, 4, 6, n=7, level=1)
        u = union_buckets([b, a])  # order independent
        assert u.span == (1, 6)
        assert u.level == 1
        assert u.n_points == 12
        assert u.total_weight() == pytest.approx(a.total_weight() + b.total_weight())

    def test_gap_rejected(self):
        rng = np.random.default_rng(2)
        with pytest.raises(ValueError):
            union_buckets([make_bucket(rng, 1, 2), make_bucket(rng, 4, 5)])

    def test_overlap_rejected(self):
        rng = np.random.default_rng(3)
        with pytest.raises(ValueError):
            union_buckets([make_bucket(rng, 1, 3), make_bucket(rng, 3, 5)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            union_buckets([])


class TestBuildCoreset:
    def test_small_input_passes_through(self):
        cfg = CoresetConfig(k=2, m=50, seed=0)
        rng = np.random.default_rng(4)
        b = make_bucket(rng, 1, 1, n=10, level=0)
        out = build_coreset(cfg, [b], np.random.default_rng(0))
        assert np.array_equal(out.points, b.points)
        assert np.array_equal(out.weights, b.weights)
        assert out.level == 1

    def test_level_and_span_arithmetic(self):
        cfg = CoresetConfig(k=2, m=8, seed=0)
        rng = np.random.default_rng(5)
        a = make_bucket(rng, 1, 3, n=30, level=0)
        b = make_bucket(rng, 4, 6, n=30, level=0)
        out = build_coreset(cfg, [a, b], np.random.default_rng(1))
        assert out.level == 1
        assert out.span == (1, 6)
        assert out.n_points == 8
        mixed = build_coreset(cfg, [out, make_bucket(rng, 7, 7, level=2)], np.random.default_rng(2))
        assert mixed.level == 3  # 1 + max(1, 2)

    def test_weight_conservation(self):
        cfg = CoresetConfig(k=3, m=10, seed=0)
        rng = np.random.default_rng(6)
        inputs = [make_bucket(rng, i, i, n=40) for i in range(1, 5)]
        total = math.fsum(b.total_weight() for b in inputs)
        out = build_coreset(cfg, inputs, np.random.default_rng(3))
        assert out.total_weight() == pytest.approx(total, rel=1e-9)
        assert np.all(out.weights > 0)

    def test_points_are_subset_of_inputs(self):
        cfg = CoresetConfig(k=2, m=5, seed=0)
        rng = np.random.default_rng(7)
        b = make_bucket(rng, 1, 1, n=50)
        out = build_coreset(cfg, [b], np.random.default_rng(4))
        in_rows = {tuple(row) for row in b.points}
        assert all(tuple(row) in in_rows for row in out.points)

    def test_deterministic_under_seed(self):
        cfg = CoresetConfig(k=2, m=6, seed=0)
        rng = np.random.default_rng(8)
        inputs = [make_bucket(rng, i, i, n=30) for i in (1, 2)]
        a = build_coreset(cfg, inputs, np.random.default_rng(42))
        b = build_coreset(cfg, inputs, np.random.default_rng(42))
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.weights, b.weights)

    def test_span_validation(self):
        cfg = CoresetConfig(k=2, m=6, seed=0)
        rng = np.random.default_rng(9)
        with pytest.raises(ValueError):
            build_coreset(cfg, [make_bucket(rng, 1, 2), make_bucket(rng, 5, 6)],
                          np.random.default_rng(0))
        with pytest.raises(ValueError):
            build_coreset(cfg, [], np.random.default_rng(0))

    def test_cost_preservation_on_clustered_data(self):
        # 1000 points in 10 tight clusters reduced to m=200: the cost of a
        # fixed random center set changes by under 15% (median over 50 seeds).
        rng = np.random.default_rng(10)
        centers = rng.uniform(0, 100, size=(10, 2))
        pts = np.concatenate([c + rng.normal(0, 1.0, (100, 2)) for c in centers])
        buckets = [
            Bucket(pts[i * 100 : (i + 1) * 100], np.ones(100), i + 1, i + 1, 0)
            for i in range(10)
        ]
        probe = rng.uniform(0, 100, size=(10, 2))
        raw_cost = clustering_cost(pts, probe)
        cfg = CoresetConfig(k=10, m=200, seed=0)
        errors = []
        for s in range(50):
            cs = build_coreset(cfg, buckets, np.random.default_rng(s))
            cs_cost = clustering_cost(cs.points, probe, cs.weights)
            errors.append(abs(cs_cost - raw_cost) / raw_cost)
        assert np.median(errors) <= 0.15


class TestCoresetConfig:
    def test_default_m(self):
        assert CoresetConfig(k=7).m == 140

    def test_m_smaller_than_k_rejected(self):
        with pytest.raises(ValueError):
            CoresetConfig(k=10, m=5)

    def test_k_positive(self):
        with pytest.raises(ValueError):
            CoresetConfig(k=0)
