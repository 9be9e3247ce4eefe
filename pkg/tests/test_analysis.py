import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cloneaudit.analysis import (
    bucket_for,
    bucketize,
    calibration_table,
    cluster_candidates,
    extract_candidates,
    prevalence_report,
    standard_buckets,
    wilson_interval,
)


def _rec(a, b, score):
    return {"a": a, "b": b, "group": "mcp-mcp", "metric": "jaccard", "score": score}


class TestBuckets:
    def test_standard_edges(self):
        buckets = standard_buckets()
        assert [(b.lo, b.hi) for b in buckets] == [
            (0.0, 20.0), (20.0, 40.0), (40.0, 60.0), (60.0, 80.0), (80.0, 100.0)
        ]
        assert [b.closed_hi for b in buckets] == [False, False, False, False, True]

    def test_boundary_80_goes_up(self):
        assert bucket_for(80.0).lo == 80.0

    def test_just_below_boundary(self):
        assert bucket_for(19.999).lo == 0.0

    def test_100_in_top_bucket(self):
        assert bucket_for(100.0).lo == 80.0

    def test_partition_conservation(self):
        rnd = random.Random(9)
        records = [_rec(f"a{i}", f"b{i}", rnd.uniform(0, 100)) for i in range(300)]
        counts = bucketize(records)
        assert sum(counts.values()) == 300

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            bucket_for(101.0)


class TestCandidates:
    def test_inclusive_threshold(self):
        records = [_rec("a", "b", 79.9), _rec("c", "d", 80.0), _rec("e", "f", 95.0)]
        hits = extract_candidates(records, 80.0)
        assert len(hits) == 2
        assert hits[0]["score"] == 95.0

    def test_empty(self):
        assert extract_candidates([], 80.0) == []

    def test_threshold_monotonicity(self):
        rnd = random.Random(12)
        records = [_rec(f"a{i}", f"b{i}", rnd.uniform(0, 100)) for i in range(200)]
        prev = None
        for thr in (0, 20, 40, 60, 80, 100):
            rep = prevalence_report(extract_candidates(records, thr), "jaccard", "mcp-mcp", thr)
            if prev is not None:
                assert rep.candidate_pairs <= prev.candidate_pairs
                assert rep.repos_involved <= prev.repos_involved
                assert rep.largest_cluster <= prev.largest_cluster
            prev = rep


def _bfs_components(edges):
    adj = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    seen = set()
    comps = []
    for start in adj:
        if start in seen:
            continue
        comp = set()
        frontier = [start]
        while frontier:
            node = frontier.pop()
            if node in comp:
                continue
            comp.add(node)
            frontier.extend(adj[node] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return set(comps)


class TestClustering:
    def test_transitive_chain(self):
        clusters = cluster_candidates([_rec("A", "B", 90), _rec("B", "C", 90)])
        assert clusters == [["A", "B", "C"]]

    def test_empty(self):
        assert cluster_candidates([]) == []

    def test_matches_bfs_oracle_on_random_graphs(self):
        rnd = random.Random(13)
        for _ in range(30):
            n = rnd.randrange(2, 200)
            m = rnd.randrange(1, 3 * n)
            edges = set()
            while len(edges) < m:
                a, b = rnd.sample(range(n), 2)
                edges.add((f"n{min(a,b):03d}", f"n{max(a,b):03d}"))
            records = [_rec(a, b, 90) for a, b in edges]
            mine = {frozenset(c) for c in cluster_candidates(records)}
            assert mine == _bfs_components(edges)

    def test_cluster_size_sum_equals_repos_involved(self):
        rnd = random.Random(14)
        records = [
            _rec(f"n{rnd.randrange(50):02d}", f"m{rnd.randrange(50):02d}", 85)
            for _ in range(120)
        ]
        clusters = cluster_candidates(records)
        rep = prevalence_report(records, "jaccard", "mcp-mcp", 80)
        assert sum(len(c) for c in clusters) == rep.repos_involved


class TestPrevalence:
    def test_single_pair(self):
        rep = prevalence_report([_rec("A", "B", 90)], "jaccard", "mcp-mcp", 80)
        assert (rep.candidate_pairs, rep.repos_involved, rep.largest_cluster) == (1, 2, 2)

    def test_two_components(self):
        records = [_rec("A", "B", 90), _rec("B", "C", 90), _rec("D", "E", 90)]
        rep = prevalence_report(records, "jaccard", "mcp-mcp", 80)
        assert (rep.candidate_pairs, rep.repos_involved, rep.largest_cluster) == (3, 5, 3)

    def test_empty(self):
        rep = prevalence_report([], "jaccard", "mcp-mcp", 80)
        assert (rep.candidate_pairs, rep.repos_involved, rep.largest_cluster) == (0, 0, 0)


def _round2(x):
    from decimal import Decimal, ROUND_HALF_UP

    return float(Decimal(str(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


class TestWilson:
    @pytest.mark.parametrize(
        "k,n,prop,lo,hi",
        [
            (12, 20, 0.60, 0.39, 0.78),
            (0, 20, 0.00, 0.00, 0.16),
            (2, 2, 1.00, 0.34, 1.00),
            (17, 20, 0.85, 0.64, 0.95),
        ],
    )
    def test_published_rows(self, k, n, prop, lo, hi):
        w_lo, w_hi = wilson_interval(k, n)
        assert _round2(k / n) == prop
        assert _round2(w_lo) == lo
        assert _round2(w_hi) == hi

    def test_contains_point_estimate(self):
        for n in range(1, 201):
            for k in (0, n // 2, n):
                lo, hi = wilson_interval(k, n)
                assert lo <= k / n <= hi
                assert 0.0 <= lo <= hi <= 1.0

    def test_extremes_clamped(self):
        assert wilson_interval(0, 20)[0] == 0.0
        assert wilson_interval(20, 20)[1] == 1.0

    def test_width_shrinks_with_n(self):
        prev = None
        for n in (10, 20, 40, 80, 160):
            lo, hi = wilson_interval(n // 2, n)
            width = hi - lo
            if prev is not None:
                assert width < prev
            prev = width

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            wilson_interval(1, 0)
        with pytest.raises(ValueError):
            wilson_interval(5, 3)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 200), st.integers(1, 200))
    def test_property_bounds(self, k, n):
        if k > n:
            k = n
        lo, hi = wilson_interval(k, n)
        assert 0.0 <= lo <= k / n <= hi <= 1.0


class TestCalibration:
    def _labels(self, n, clones, bucket_lo=80.0):
        labs = []
        for i in range(n):
            labs.append(
                {
                    "a": f"a{i}",
                    "b": f"b{i}",
                    "metric": "jaccard",
                    "group": "mcp-mcp",
                    "bucket_lo": bucket_lo,
                    "label": "clone" if i < clones else "non-clone",
                }
            )
        return labs

    def test_published_row_shape(self):
        buckets = standard_buckets()
        counts = {b: 0 for b in buckets}
        counts[buckets[-1]] = 758
        rows = calibration_table(self._labels(20, 12), counts, "jaccard", "mcp-mcp")
        top = rows[-1]
        assert (top.total_pairs, top.sampled, top.clones) == (758, 20, 12)
        assert _round2(top.proportion) == 0.60
        assert (_round2(top.ci_lo), _round2(top.ci_hi)) == (0.39, 0.78)

    def test_unsampled_bucket(self):
        counts = {b: 5 for b in standard_buckets()}
        rows = calibration_table([], counts, "jaccard", "mcp-mcp")
        assert all(r.sampled == 0 and r.proportion is None for r in rows)

    def test_clones_never_exceed_sampled(self):
        rnd = random.Random(15)
        for _ in range(50):
            n = rnd.randrange(1, 30)
            clones = rnd.randrange(0, n + 1)
            counts = {b: 100 for b in standard_buckets()}
            rows = calibration_table(self._labels(n, clones), counts, "jaccard", "mcp-mcp")
            for row in rows:
                assert row.clones <= row.sampled <= row.total_pairs
