"""
Tests for canonical instances, Markov chains and enumeration
"""

import networkx as nx
import pytest

from cyclepack import (
    DomainError,
    ResourceError,
    SamplerConfig,
    canonical_bipartite,
    canonical_regular_tournament,
    enumerate_eulerian_bipartite,
    enumerate_matrix_class,
    interchange_graph,
    randomize_bipartite,
    randomize_tournament,
    validate_bipartite,
    validate_tournament,
)
from cyclepack.config import Limits, default_steps_bipartite, spawn_seeds


@pytest.mark.unit
class TestCanonical:
    """Test the cyclic-shift constructions"""

    def test_k22(self):
        """Test the two rows of K_{2,2}"""
        assert canonical_bipartite(2, 2).to_rows() == ["+-", "-+"]

    def test_k24(self):
        """Test the two rows of K_{2,4}"""
        assert canonical_bipartite(2, 4).to_rows() == ["++--", "--++"]

    @pytest.mark.parametrize("m, n", [(2, 2), (4, 4), (2, 6), (6, 4), (4, 10), (8, 8)])
    def test_is_eulerian(self, m, n):
        """Test every vertex is balanced"""
        assert validate_bipartite(canonical_bipartite(m, n)).is_eulerian

    @pytest.mark.parametrize("m, n", [(3, 4), (2, 5), (0, 2), (2, 0)])
    def test_odd_or_empty_sizes(self, m, n):
        """Test impossible sizes"""
        with pytest.raises(DomainError):
            canonical_bipartite(m, n)

    @pytest.mark.parametrize("n", [3, 5, 9, 25])
    def test_regular_tournament(self, n):
        """Test the rotational tournament is regular"""
        T = canonical_regular_tournament(n)
        assert validate_tournament(T).is_eulerian
        assert all(row.count("1") == (n - 1) // 2 for row in T.to_rows())

    @pytest.mark.parametrize("n", [1, 2, 4, 10])
    def test_regular_tournament_needs_odd_n(self, n):
        """Test even or trivial n"""
        with pytest.raises(DomainError):
            canonical_regular_tournament(n)


@pytest.mark.unit
class TestBipartiteChain:
    """Test the interchange chain on sign matrices"""

    def test_zero_steps_is_identity(self, k24):
        """Test no moves"""
        assert randomize_bipartite(k24, SamplerConfig(seed=5, steps=0)) == k24

    def test_stays_eulerian(self):
        """Test every output is Eulerian, with per-move checks on"""
        start = canonical_bipartite(6, 8)
        for seed in range(5):
            cfg = SamplerConfig(seed=seed, steps=default_steps_bipartite(6, 8))
            G = randomize_bipartite(start, cfg, debug=True)
            assert validate_bipartite(G).is_eulerian

    def test_deterministic(self):
        """Test the same seed gives the same instance"""
        start = canonical_bipartite(8, 8)
        cfg = SamplerConfig(seed=42, steps=500)
        assert randomize_bipartite(start, cfg) == randomize_bipartite(start, cfg)

    def test_moves_away_from_start(self):
        """Test a long run changes the instance for some seed"""
        start = canonical_bipartite(6, 6)
        outputs = {randomize_bipartite(start, SamplerConfig(seed=s, steps=200)) for s in range(10)}
        assert len(outputs) > 1

    def test_rejects_non_eulerian(self):
        """Test the chain needs an Eulerian start"""
        with pytest.raises(DomainError):
            randomize_bipartite(canonical_bipartite(4, 4).flipped(0, 0), SamplerConfig(steps=1))

    def test_chain_visits_every_k24_orientation(self, all_k24):
        """Test the walk on K_{2,4} reaches all six orientations"""
        G = canonical_bipartite(2, 4)
        seen = {G}
        for seed in spawn_seeds(7, 2000):
            G = randomize_bipartite(G, SamplerConfig(seed=seed, steps=1))
            seen.add(G)
        assert seen == set(all_k24)

    def test_sampler_config_validation(self):
        """Test negative steps and out-of-range seeds"""
        with pytest.raises(DomainError):
            SamplerConfig(steps=-1)
        with pytest.raises(DomainError):
            SamplerConfig(seed=-1)
        with pytest.raises(DomainError):
            SamplerConfig(seed=2**64)


@pytest.mark.unit
class TestTournamentChain:
    """Test triangle reversals"""

    def test_stays_regular(self, t9):
        """Test out-degrees never change"""
        for seed in range(5):
            T = randomize_tournament(t9, SamplerConfig(seed=seed, steps=400), debug=True)
            assert validate_tournament(T).is_eulerian

    def test_zero_steps_is_identity(self, t9):
        """Test no moves"""
        assert randomize_tournament(t9, SamplerConfig(seed=1, steps=0)) == t9

    def test_deterministic(self):
        """Test the same seed gives the same tournament"""
        T = canonical_regular_tournament(11)
        cfg = SamplerConfig(seed=3, steps=300)
        assert randomize_tournament(T, cfg) == randomize_tournament(T, cfg)


@pytest.mark.unit
class TestEnumeration:
    """Test exhaustive Eulerian enumeration"""

    @pytest.mark.parametrize("m, n, count", [(2, 2, 2), (2, 4, 6), (4, 2, 6), (4, 4, 90)])
    def test_counts(self, m, n, count):
        """Test the number of Eulerian orientations"""
        found = list(enumerate_eulerian_bipartite(m, n))
        assert len(found) == count
        assert len(set(found)) == count
        assert all(validate_bipartite(G).is_eulerian for G in found)

    def test_lexicographic_order(self, all_k44):
        """Test rows come out sorted"""
        keys = [G.to_rows() for G in all_k44]
        assert keys == sorted(keys)
        assert all_k44[0].to_rows() == ["++--", "++--", "--++", "--++"]

    def test_odd_sizes(self):
        """Test odd sizes raise immediately"""
        with pytest.raises(DomainError):
            enumerate_eulerian_bipartite(3, 4)

    def test_cell_guard(self):
        """Test oversized requests raise before any work"""
        with pytest.raises(ResourceError):
            enumerate_eulerian_bipartite(6, 8)
        with pytest.raises(ResourceError):
            enumerate_eulerian_bipartite(4, 4, Limits().with_max_cells(8))

    def test_agrees_with_matrix_class(self, all_k44):
        """Test A -> 2A - J maps A(2222, 2222) onto the Eulerian orientations"""
        matrices = enumerate_matrix_class([2, 2, 2, 2], [2, 2, 2, 2])
        signs = {tuple(map(tuple, (2 * A.entries.astype(int) - 1).tolist())) for A in matrices}
        orients = {tuple(map(tuple, G.orient.tolist())) for G in all_k44}
        assert signs == orients

    def test_interchange_graph_connected(self):
        """Test the chain's state space is connected for K_{4,4}"""
        graph = interchange_graph([2, 2, 2, 2], [2, 2, 2, 2])
        assert graph.number_of_nodes() == 90
        assert nx.is_connected(graph)
