"""
Tests for the random partition experiment on regular tournaments
"""

import dataclasses
import math

import numpy as np
import pytest

from cyclepack import (
    DomainError,
    PartitionOutcome,
    RegularTournament,
    SamplerConfig,
    canonical_regular_tournament,
    chernoff_tail_estimate,
    pair_graph,
    partition_vertices,
    randomize_tournament,
    run_partition_experiment,
    verify_packing,
)
from cyclepack.config import default_steps_tournament


def random_tournament(n, seed=0):
    start = canonical_regular_tournament(n)
    return randomize_tournament(start, SamplerConfig(seed=seed, steps=default_steps_tournament(n)))


def singleton_outcome(n):
    zeros = np.zeros((n, n), dtype=np.int64)
    return PartitionOutcome(
        n=n,
        m=n,
        assignment=tuple(range(n)),
        classes=tuple((v,) for v in range(n)),
        d_plus=zeros,
        d_minus=zeros,
        delta_observed=0.0,
    )


@pytest.mark.unit
class TestPartitionVertices:
    """Test random class assignment and class degrees"""

    def test_single_class_is_balanced(self):
        """Test m = 1 keeps every vertex at (n-1)/2 in and out"""
        for n in (3, 9):
            outcome = partition_vertices(canonical_regular_tournament(n), 1)
            assert outcome.class_sizes == (n,)
            assert outcome.delta_observed == 0.0
            assert outcome.deviation_fraction(0.0) == 0.0

    def test_classes_partition_vertices(self, t9):
        """Test every vertex lands in exactly one class"""
        outcome = partition_vertices(t9, 3, seed=4)
        assert sum(outcome.class_sizes) == 9
        assert sorted(v for c in outcome.classes for v in c) == list(range(9))
        for v, i in enumerate(outcome.assignment):
            assert v in outcome.classes[i]

    def test_class_degrees_add_up(self):
        """Test d+ + d- = |V_i| - [v in V_i]"""
        T = random_tournament(25, seed=2)
        outcome = partition_vertices(T, 5, seed=1)
        for i, members in enumerate(outcome.classes):
            for v in range(T.n):
                total = outcome.d_plus[i][v] + outcome.d_minus[i][v]
                assert total == len(members) - (v in members)

    def test_deterministic(self, t9):
        """Test the same seed gives the same assignment"""
        assert partition_vertices(t9, 3, 8).assignment == partition_vertices(t9, 3, 8).assignment

    def test_delta_target_marks_pairs(self, t9):
        """Test the all-pairs flag is only set when a target is given"""
        assert partition_vertices(t9, 3, 0).all_pairs_delta_eulerian is None
        outcome = partition_vertices(t9, 3, 0, delta_target=1.0)
        assert outcome.all_pairs_delta_eulerian is True

    def test_size_bounds_use_twice_the_class_count(self, t9):
        """Test every class must hold between M and 2m vertices"""
        outcome = partition_vertices(t9, 3, seed=4)
        even = dataclasses.replace(outcome, classes=((0, 1, 2), (3, 4, 5), (6, 7, 8)))
        assert even.size_bounds_ok
        crowded = dataclasses.replace(outcome, classes=((0, 1, 2, 3, 4, 5, 6), (7,), (8,)))
        assert not crowded.size_bounds_ok
        assert not dataclasses.replace(even, min_class_size=4).size_bounds_ok
        assert not partition_vertices(t9, 1).size_bounds_ok

    def test_needs_a_class(self, t9):
        """Test m >= 1"""
        with pytest.raises(DomainError):
            partition_vertices(t9, 0)


@pytest.mark.unit
class TestPairGraph:
    """Test bipartite tournaments between two classes"""

    def test_singletons_are_maximally_unbalanced(self):
        """Test a lone arc between two singleton classes has delta 1"""
        T = canonical_regular_tournament(3)
        pg = pair_graph(T, singleton_outcome(3), 0, 1)
        assert (pg.host.m, pg.host.n) == (1, 1)
        assert pg.validation.delta_margin == 1.0

    def test_orientation_follows_tournament(self, t9):
        """Test +1 entries are arcs from the row class to the column class"""
        outcome = partition_vertices(t9, 3, seed=5)
        pg = pair_graph(t9, outcome, 0, 1)
        if pg is None:
            pytest.skip("empty class for this seed")
        for r, u in enumerate(pg.rows):
            for c, v in enumerate(pg.cols):
                assert (pg.host.orient[r, c] == 1) == bool(t9.adj[u, v])

    def test_same_class(self, t9):
        """Test a pair needs two classes"""
        with pytest.raises(DomainError):
            pair_graph(t9, partition_vertices(t9, 3), 1, 1)

    def test_empty_class(self, t9):
        """Test None when a class is empty"""
        outcome = partition_vertices(t9, 12, seed=0)
        empty = outcome.class_sizes.index(0)
        other = 1 if empty == 0 else 0
        assert pair_graph(t9, outcome, empty, other) is None


@pytest.mark.unit
class TestChernoff:
    """Test the concentration estimates"""

    def test_tail_estimate(self):
        """Test 4 n^2 exp(-delta^2 n / 128)"""
        assert chernoff_tail_estimate(1024, 0.5) == pytest.approx(4194304 * math.exp(-2))

    def test_tail_estimate_drops_below_one(self):
        """Test large n makes the union bound useful"""
        assert chernoff_tail_estimate(200000, 0.5) < 1


@pytest.mark.unit
class TestPartitionExperiment:
    """Test the full partition-pack-lift pipeline"""

    def test_too_small(self):
        """Test n >= 9"""
        with pytest.raises(DomainError):
            run_partition_experiment(canonical_regular_tournament(7))

    def test_non_regular(self):
        """Test a transitive triangle is rejected"""
        with pytest.raises(DomainError):
            run_partition_experiment(RegularTournament.from_rows(["011", "001", "000"]))

    def test_n25(self):
        """Test arc accounting and the lifted packing"""
        T = random_tournament(25, seed=3)
        report = run_partition_experiment(T, seed=11, budget=50)
        assert report.m == 5
        assert sum(report.class_sizes) == 25
        assert report.cross_arcs + report.within_class_arcs == 25 * 24 // 2
        assert report.cross_arcs == (625 - report.within_class_loss) // 2
        assert report.total_packed == sum(report.per_pair_packings)
        assert 4 * report.total_packed <= report.cross_arcs
        assert len(report.pairs) + len(report.skipped_pairs) == 10
        assert report.ratio == pytest.approx(report.total_packed / report.target)
        verify_packing(T, report.packing)

    def test_deterministic(self):
        """Test the same tournament and seed reproduce the report"""
        T = random_tournament(25, seed=3)
        first = run_partition_experiment(T, seed=2, budget=20)
        second = run_partition_experiment(T, seed=2, budget=20)
        assert first == second
        assert first.packing == second.packing

    def test_explicit_class_count(self, t9):
        """Test a user-chosen m"""
        report = run_partition_experiment(t9, seed=0, m=2, budget=10)
        assert report.m == 2
        assert len(report.pairs) + len(report.skipped_pairs) == 1

    @pytest.mark.slow
    def test_parallel_matches_serial(self, jobs):
        """Test worker processes do not change the result"""
        T = random_tournament(49, seed=1)
        serial = run_partition_experiment(T, seed=6, budget=30, jobs=1)
        parallel = run_partition_experiment(T, seed=6, budget=30, jobs=max(jobs, 2))
        assert serial == parallel
        assert serial.packing == parallel.packing


@pytest.mark.slow
class TestPartitionTrend:
    """Test the partition experiment across tournament sizes"""

    def test_ratio_trend(self, jobs):
        """Test verified packings and a non-decreasing mean ratio over n"""
        means = []
        for n in (49, 101, 225):
            ratios = []
            for seed in range(10):
                T = random_tournament(n, seed=seed)
                report = run_partition_experiment(T, seed=seed, jobs=jobs)
                verify_packing(T, report.packing)
                assert report.cross_arcs == (n * n - report.within_class_loss) // 2
                ratios.append(report.ratio)
            means.append(sum(ratios) / len(ratios))
        assert means == sorted(means)
        assert means[0] > 0
