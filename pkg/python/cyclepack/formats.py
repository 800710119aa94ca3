"""
Text formats for orientations and 0/1 matrices.

Bipartite::

    m n
    +-+-...        (m lines of n characters, '+' means row -> column)

Tournament::

    n
    0110...        (n lines of n characters, '1' means row -> column)

Matrix::

    m n
    0101...        (m lines of n characters)

The trailing newline is optional; any other deviation is an EncodingError.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import EncodingError
from .interchange import MarginMatrix
from .model import BipartiteTournament, RegularTournament


def _split_lines(text: str) -> list[str]:
    if text.endswith("\n"):
        text = text[:-1]
    if not text:
        raise EncodingError("empty input", line=1)
    return text.split("\n")


def _parse_int(token: str, line: int) -> int:
    if not token.isascii() or not token.isdigit():
        raise EncodingError(f"expected a decimal integer, got {token!r}", line=line)
    return int(token)


def _parse_header(header: str, count: int) -> list[int]:
    tokens = header.split(" ")
    if len(tokens) != count:
        raise EncodingError(f"header must hold {count} space-separated integers", line=1)
    return [_parse_int(token, 1) for token in tokens]


def _parse_grid(lines: list[str], rows: int, cols: int, alphabet: dict[str, int]) -> np.ndarray:
    body = lines[1:]
    if len(body) != rows:
        raise EncodingError(f"expected {rows} rows, found {len(body)}", line=len(lines))
    grid = np.empty((rows, cols), dtype=np.int8)
    for i, row in enumerate(body):
        line = i + 2
        if len(row) != cols:
            raise EncodingError(f"expected {cols} characters, found {len(row)}", line=line)
        for j, ch in enumerate(row):
            try:
                grid[i, j] = alphabet[ch]
            except KeyError:
                raise EncodingError(
                    f"unexpected character {ch!r} in column {j}", line=line
                ) from None
    return grid


def parse_bipartite(text: str) -> BipartiteTournament:
    lines = _split_lines(text)
    m, n = _parse_header(lines[0], 2)
    if m < 1 or n < 1:
        raise EncodingError("dimensions must be positive", line=1)
    orient = _parse_grid(lines, m, n, {"+": 1, "-": -1})
    return BipartiteTournament(m, n, orient)


def format_bipartite(G: BipartiteTournament) -> str:
    return "\n".join([f"{G.m} {G.n}", *G.to_rows()]) + "\n"


def parse_tournament(text: str) -> RegularTournament:
    lines = _split_lines(text)
    (n,) = _parse_header(lines[0], 1)
    if n < 1:
        raise EncodingError("size must be positive", line=1)
    adj = _parse_grid(lines, n, n, {"0": 0, "1": 1})
    return RegularTournament(n, adj)


def format_tournament(T: RegularTournament) -> str:
    return "\n".join([str(T.n), *T.to_rows()]) + "\n"


def parse_matrix(text: str) -> MarginMatrix:
    lines = _split_lines(text)
    m, n = _parse_header(lines[0], 2)
    if m < 1 or n < 1:
        raise EncodingError("dimensions must be positive", line=1)
    entries = _parse_grid(lines, m, n, {"0": 0, "1": 1})
    return MarginMatrix.of(entries)


def format_matrix(A: MarginMatrix) -> str:
    rows = ["".join(str(int(v)) for v in row) for row in A.entries.tolist()]
    return "\n".join([f"{A.m} {A.n}", *rows]) + "\n"


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as e:
        raise EncodingError(f"{path}: non-ASCII content") from e


def load_bipartite(path: str | Path) -> BipartiteTournament:
    return parse_bipartite(_read(path))


def load_tournament(path: str | Path) -> RegularTournament:
    return parse_tournament(_read(path))


def load_matrix(path: str | Path) -> MarginMatrix:
    return parse_matrix(_read(path))


def dump(text: str, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="ascii")
    return path
