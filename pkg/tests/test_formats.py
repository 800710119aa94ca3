"""
Tests for the text formats
"""

import numpy as np
import pytest

from cyclepack import EncodingError, MarginMatrix, canonical_bipartite
from cyclepack.formats import (
    dump,
    format_bipartite,
    format_matrix,
    format_tournament,
    load_bipartite,
    load_matrix,
    load_tournament,
    parse_bipartite,
    parse_matrix,
    parse_tournament,
)


@pytest.mark.unit
class TestBipartiteFormat:
    """Test the '+/-' orientation format"""

    def test_format(self, k24):
        """Test header and rows"""
        assert format_bipartite(k24) == "2 4\n++--\n--++\n"

    def test_parse_without_trailing_newline(self):
        """Test the final newline is optional"""
        G = parse_bipartite("2 2\n+-\n-+")
        assert G.to_rows() == ["+-", "-+"]

    def test_round_trip_through_file(self, tmp_path):
        """Test dump then load"""
        G = canonical_bipartite(4, 6)
        path = dump(format_bipartite(G), tmp_path / "nested" / "g.txt")
        assert load_bipartite(path) == G

    @pytest.mark.parametrize(
        "text, line",
        [
            ("", 1),
            ("2\n+-\n-+\n", 1),
            ("2 x\n+-\n-+\n", 1),
            ("2 2\n+-\n", 2),
            ("2 2\n+-\n-+-\n", 3),
            ("2 2\n+-\n-*\n", 3),
            ("2 2\n+-\n-+\n\n", 4),
        ],
    )
    def test_malformed_input_names_the_line(self, text, line):
        """Test parse errors carry a line number"""
        with pytest.raises(EncodingError) as info:
            parse_bipartite(text)
        assert info.value.line == line

    def test_non_ascii_file(self, tmp_path):
        """Test undecodable content"""
        path = tmp_path / "bad.txt"
        path.write_bytes("2 2\n+-\n-é\n".encode())
        with pytest.raises(EncodingError):
            load_bipartite(path)


@pytest.mark.unit
class TestTournamentFormat:
    """Test the 0/1 adjacency format"""

    def test_round_trip(self, t9, tmp_path):
        """Test format then load"""
        path = dump(format_tournament(t9), tmp_path / "t.txt")
        assert load_tournament(path) == t9

    def test_format_three(self):
        """Test the cyclic triangle"""
        T = parse_tournament("3\n010\n001\n100\n")
        assert T.to_rows() == ["010", "001", "100"]
        assert format_tournament(T) == "3\n010\n001\n100\n"

    def test_bad_character(self):
        """Test entries other than 0/1"""
        with pytest.raises(EncodingError):
            parse_tournament("3\n012\n001\n100\n")


@pytest.mark.unit
class TestMatrixFormat:
    """Test the 0/1 matrix format"""

    def test_parse_derives_margins(self):
        """Test margins are recomputed from the entries"""
        A = parse_matrix("2 3\n101\n010\n")
        assert A.row_sums == (2, 1)
        assert A.col_sums == (1, 1, 1)

    def test_round_trip(self, identity3, tmp_path):
        """Test format then load"""
        path = dump(format_matrix(identity3), tmp_path / "a.txt")
        assert load_matrix(path) == identity3

    def test_format(self):
        """Test header and rows"""
        A = MarginMatrix.of(np.array([[0, 1], [1, 0]]))
        assert format_matrix(A) == "2 2\n01\n10\n"
