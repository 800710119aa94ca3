"""
Tests for verification sweeps
"""

import pytest

from cyclepack import (
    DomainError,
    Limits,
    canonical_bipartite,
    enumerate_eulerian_bipartite,
    enumerate_matrix_class,
    verify_sweep,
)
from cyclepack import verify as verify_module
from cyclepack.formats import load_bipartite, load_matrix
from cyclepack.verify import DEFAULT_CLASSES, EXHAUSTIVE_CLASS, Target, check_orientation


@pytest.mark.unit
class TestCheckOrientation:
    """Test single-instance checks"""

    def test_census_identities(self, k24):
        """Test all identities hold on an Eulerian orientation"""
        result = check_orientation(Target.CENSUS_IDENTITIES, k24)
        assert result["passed"]
        assert result["pair_identity"]
        assert all(v == 0 for v in result["residuals"].values())

    def test_lemma21(self, k22):
        """Test 32x >= m^2 n^2 on K_{2,2}"""
        result = check_orientation(Target.LEMMA21, k22)
        assert result["x"] == 1
        assert result["ratio"] == 2.0
        assert result["passed"]

    def test_lemma22(self):
        """Test the alpha bound on a canonical K_{4,4}"""
        result = check_orientation(Target.LEMMA22, canonical_bipartite(4, 4))
        assert result["passed"]
        assert result["max_arc_ok"]
        assert result["ratio"] >= 1.0


@pytest.mark.unit
class TestVerifySweep:
    """Test batch sweeps and their reports"""

    def test_census_identities_exhaustive(self, limits):
        """Test the default sizes are swept exhaustively"""
        report = verify_sweep("census_identities", limits=limits)
        assert report.subcommand == "verify"
        assert report.passed
        assert report.payload["checked"] == 2 + 6 + 90
        assert set(report.payload["modes"].values()) == {"exhaustive"}
        assert report.payload["counterexamples"] == []

    def test_lemma21_minimum(self, limits):
        """Test the smallest x over all Eulerian K_{4,4}"""
        report = verify_sweep(Target.LEMMA21, sizes=[(4, 4)], limits=limits)
        assert report.passed
        assert report.payload["min_x"] >= 9

    def test_sampled_sizes(self, limits):
        """Test larger sizes are sampled"""
        report = verify_sweep("lemma22", sizes=[(4, 6)], samples=5, seed=3, limits=limits)
        assert report.payload["modes"] == {"4x6": "sampled"}
        assert report.payload["checked"] == 5
        assert report.passed
        assert report.seeds == [3]

    def test_walkup_small_class(self, limits):
        """Test every pair of 3 x 3 permutation matrices"""
        report = verify_sweep("walkup", classes=[((1, 1, 1), (1, 1, 1))], limits=limits)
        assert report.passed
        assert report.payload["checked"] == 15
        assert report.payload["modes"] == {"1,1,1|1,1,1": "exhaustive"}
        assert all(i["certified"] for i in report.payload["instances"])

    def test_walkup_sampled_class(self, limits):
        """Test the 120 permutation matrices of order 5 are sampled"""
        report = verify_sweep("walkup", classes=[((1,) * 5, (1,) * 5)], samples=8, limits=limits)
        assert report.passed
        assert report.payload["checked"] == 8
        assert report.payload["modes"] == {"1,1,1,1,1|1,1,1,1,1": "sampled"}

    def test_single_matrix_class(self, limits):
        """Test a class with one matrix has no pairs"""
        report = verify_sweep("walkup", classes=[((2, 2), (2, 2))], limits=limits)
        assert report.passed
        assert report.payload["checked"] == 0
        assert report.payload["modes"] == {"2,2|2,2": "exhaustive"}

    def test_default_classes(self):
        """Test the default walkup classes include the 90-matrix class"""
        assert ((2, 2), (2, 2)) in DEFAULT_CLASSES
        assert ((2, 2, 2, 2), (2, 2, 2, 2)) in DEFAULT_CLASSES
        assert len(enumerate_matrix_class((2, 2, 2, 2), (2, 2, 2, 2))) <= EXHAUSTIVE_CLASS

    def test_deterministic(self, limits):
        """Test identical seeds give identical JSON"""
        first = verify_sweep("lemma22", sizes=[(4, 6)], samples=3, seed=9, limits=limits)
        second = verify_sweep("lemma22", sizes=[(4, 6)], samples=3, seed=9, limits=limits)
        assert first.to_json(include_wall_time=False) == second.to_json(include_wall_time=False)

    def test_bad_samples(self):
        """Test samples must be positive"""
        with pytest.raises(DomainError):
            verify_sweep("lemma21", samples=0)

    def test_unknown_target(self):
        """Test target names are checked"""
        with pytest.raises(ValueError):
            verify_sweep("lemma99")

    @pytest.mark.slow
    def test_default_walkup_classes(self, limits):
        """Test the default class list"""
        report = verify_sweep("walkup", samples=30, limits=limits)
        assert report.passed
        assert report.payload["failed"] == 0


@pytest.mark.slow
class TestAcceptanceSweeps:
    """Test the sampled acceptance sweeps"""

    def test_lemma22_sampled(self, limits):
        """Test 200 random K_{8,8} and K_{6,10}"""
        report = verify_sweep("lemma22", sizes=[(8, 8), (6, 10)], samples=200, limits=limits)
        assert report.payload["checked"] == 400
        assert report.passed

    def test_walkup_all_pairs_of_90(self, limits):
        """Test every pair of A((2,2,2,2), (2,2,2,2))"""
        report = verify_sweep(
            "walkup", classes=[((2, 2, 2, 2), (2, 2, 2, 2))], samples=5, limits=limits
        )
        assert report.payload["modes"] == {"2,2,2,2|2,2,2,2": "exhaustive"}
        assert report.payload["checked"] == 90 * 89 // 2
        assert all(i["certified"] for i in report.payload["instances"])
        assert report.passed


@pytest.mark.unit
class TestCounterexamples:
    """Test failing instances are written and read back"""

    @pytest.fixture
    def failing_checks(self, monkeypatch):
        monkeypatch.setattr(
            verify_module, "_check_orientation", lambda target, G: {"x": 0, "passed": False}
        )

    @pytest.fixture
    def failing_pairs(self, monkeypatch):
        monkeypatch.setattr(
            verify_module,
            "check_matrix_pair",
            lambda A, B, distance, limits: {"i_bfs": distance, "passed": False},
        )

    def test_orientations_round_trip(self, tmp_path, failing_checks):
        """Test each written file parses back to the failing orientation"""
        report = verify_sweep(
            "lemma21", sizes=[(2, 2)], limits=Limits(), counterexample_dir=tmp_path
        )
        assert not report.passed
        assert report.payload["failed"] == 2
        written = report.payload["counterexamples"]
        assert len(written) == 2
        expected = list(enumerate_eulerian_bipartite(2, 2))
        for instance, path in zip(report.payload["instances"], written):
            assert load_bipartite(path) == expected[instance["index"]]

    def test_matrix_pairs_round_trip(self, tmp_path, failing_pairs):
        """Test both matrices of a failing pair are written"""
        report = verify_sweep(
            "walkup",
            classes=[((1, 1, 1), (1, 1, 1))],
            limits=Limits(),
            counterexample_dir=tmp_path,
        )
        assert report.payload["failed"] == 15
        written = report.payload["counterexamples"]
        assert len(written) == 30
        matrices = enumerate_matrix_class((1, 1, 1), (1, 1, 1))
        for k, instance in enumerate(report.payload["instances"]):
            assert load_matrix(written[2 * k]) == matrices[instance["a"]]
            assert load_matrix(written[2 * k + 1]) == matrices[instance["b"]]

    def test_default_directory(self, tmp_path, monkeypatch, failing_checks):
        """Test failures land in ./counterexamples without an explicit directory"""
        monkeypatch.chdir(tmp_path)
        report = verify_sweep("lemma21", sizes=[(2, 2)], limits=Limits())
        assert len(report.payload["counterexamples"]) == 2
        assert len(list((tmp_path / "counterexamples").iterdir())) == 2

    def test_passing_sweep_writes_nothing(self, tmp_path, monkeypatch):
        """Test no directory is created when every instance passes"""
        monkeypatch.chdir(tmp_path)
        assert verify_sweep("lemma21", sizes=[(2, 2)], limits=Limits()).passed
        assert not (tmp_path / "counterexamples").exists()

    def test_opt_out(self, tmp_path, monkeypatch, failing_checks):
        """Test None skips writing"""
        monkeypatch.chdir(tmp_path)
        report = verify_sweep("lemma21", sizes=[(2, 2)], limits=Limits(), counterexample_dir=None)
        assert report.payload["counterexamples"] == []
        assert not (tmp_path / "counterexamples").exists()
