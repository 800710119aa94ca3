"""
Canonical instances, measure-preserving Markov chains and exhaustive enumeration.

The bipartite chain move is an interchange on the sign matrix: a 2x2
submatrix with pattern ``[[+, -], [-, +]]`` (or its mirror) is negated, which
keeps every row and column sum. The tournament chain reverses directed
triangles, which keeps every out-degree. Chains count attempted moves, so the
runtime depends only on ``steps``.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator

import numpy as np

from .config import Limits, SamplerConfig
from .errors import CertificateError, DomainError, ResourceError
from .model import BipartiteTournament, RegularTournament, require_eulerian, require_regular

logger = logging.getLogger(__name__)


def _require_even(m: int, n: int) -> None:
    if m < 2 or n < 2 or m % 2 or n % 2:
        raise DomainError(f"K_{{{m},{n}}} has no Eulerian orientation: sizes must be even and >= 2")


def canonical_bipartite(m: int, n: int) -> BipartiteTournament:
    """Cyclic-shift Eulerian orientation of K_{m,n}.

    Row i holds '+' in columns (floor(i*n/m) + t) mod n for t < n/2. Rows i
    and i + m/2 are complementary, so every column holds m/2 '+' entries.
    """
    _require_even(m, n)
    orient = -np.ones((m, n), dtype=np.int8)
    for i in range(m):
        shift = (i * n) // m
        cols = [(shift + t) % n for t in range(n // 2)]
        orient[i, cols] = 1
    return BipartiteTournament(m, n, orient)


def _distinct_pairs(rng: np.random.Generator, size: int, steps: int) -> tuple[list, list]:
    first = rng.integers(0, size, size=steps)
    second = rng.integers(0, size - 1, size=steps)
    second = second + (second >= first)
    return first.tolist(), second.tolist()


def randomize_bipartite(
    G: BipartiteTournament, cfg: SamplerConfig, debug: bool = False
) -> BipartiteTournament:
    """Run ``cfg.steps`` attempted interchange moves from ``G``"""
    require_eulerian(G)
    if cfg.steps == 0:
        return G

    rng = cfg.generator()
    rows_i, rows_j = _distinct_pairs(rng, G.m, cfg.steps)
    cols_k, cols_l = _distinct_pairs(rng, G.n, cfg.steps)
    grid = G.orient.astype(np.int8).tolist()

    accepted = 0
    for i, j, k, l in zip(rows_i, rows_j, cols_k, cols_l):
        a = grid[i][k]
        if a == grid[j][l] and grid[i][l] == grid[j][k] == -a:
            grid[i][k] = -a
            grid[j][l] = -a
            grid[i][l] = a
            grid[j][k] = a
            accepted += 1
            if debug:
                _check_move(grid, (i, j), (k, l))

    logger.debug("bipartite chain: %d of %d moves accepted", accepted, cfg.steps)
    return BipartiteTournament(G.m, G.n, np.array(grid, dtype=np.int8))


def _check_move(grid: list[list[int]], rows: tuple[int, int], cols: tuple[int, int]) -> None:
    for r in rows:
        if sum(grid[r]) != 0:
            raise CertificateError(f"interchange broke the balance of row {r}")
    for c in cols:
        if sum(row[c] for row in grid) != 0:
            raise CertificateError(f"interchange broke the balance of column {c}")


def canonical_regular_tournament(n: int) -> RegularTournament:
    """Rotational tournament: i -> j iff (j - i) mod n lies in 1..(n-1)/2"""
    if n < 3 or n % 2 == 0:
        raise DomainError(f"no regular tournament on {n} vertices: n must be odd and >= 3")
    half = (n - 1) // 2
    idx = np.arange(n)
    diff = (idx[None, :] - idx[:, None]) % n
    adj = ((diff >= 1) & (diff <= half)).astype(np.int8)
    return RegularTournament(n, adj)


def _distinct_triples(rng: np.random.Generator, n: int, steps: int):
    a = rng.integers(0, n, size=steps)
    b = rng.integers(0, n - 1, size=steps)
    b = b + (b >= a)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    c = rng.integers(0, n - 2, size=steps)
    c = c + (c >= lo)
    c = c + (c >= hi)
    return a.tolist(), b.tolist(), c.tolist()


def randomize_tournament(
    T: RegularTournament, cfg: SamplerConfig, debug: bool = False
) -> RegularTournament:
    """Run ``cfg.steps`` attempted directed-triangle reversals from ``T``"""
    require_regular(T)
    if cfg.steps == 0:
        return T

    rng = cfg.generator()
    adj = T.adj.astype(np.int8).tolist()
    half = (T.n - 1) // 2

    accepted = 0
    for a, b, c in zip(*_distinct_triples(rng, T.n, cfg.steps)):
        if adj[a][b] == adj[b][c] == adj[c][a]:
            for u, v in ((a, b), (b, c), (c, a)):
                adj[u][v], adj[v][u] = adj[v][u], adj[u][v]
            accepted += 1
            if debug and any(sum(adj[v]) != half for v in (a, b, c)):
                raise CertificateError("triangle reversal changed an out-degree")

    logger.debug("tournament chain: %d of %d moves accepted", accepted, cfg.steps)
    return RegularTournament(T.n, np.array(adj, dtype=np.int8))


def enumerate_eulerian_bipartite(
    m: int, n: int, limits: Limits | None = None
) -> Iterator[BipartiteTournament]:
    """Every Eulerian orientation of K_{m,n}, in lexicographic order of the '+/-' rows"""
    limits = limits or Limits()
    _require_even(m, n)
    if m * n > limits.max_cells:
        raise ResourceError(
            f"enumerating K_{{{m},{n}}} exceeds the {limits.max_cells}-cell guard"
        )
    return _enumerate_orientations(m, n)


def _enumerate_orientations(m: int, n: int) -> Iterator[BipartiteTournament]:
    half_m = m // 2
    # combinations come out in lexicographic order, and '+' sorts before '-'
    patterns = []
    for plus in itertools.combinations(range(n), n // 2):
        row = -np.ones(n, dtype=np.int8)
        row[list(plus)] = 1
        patterns.append(row)

    rows: list[np.ndarray] = []
    col_plus = np.zeros(n, dtype=np.int64)

    def extend(r: int) -> Iterator[BipartiteTournament]:
        nonlocal col_plus
        if r == m:
            yield BipartiteTournament(m, n, np.array(rows))
            return
        remaining = m - r - 1
        for row in patterns:
            counts = col_plus + (row == 1)
            if (counts > half_m).any() or (counts + remaining < half_m).any():
                continue
            saved = col_plus
            col_plus = counts
            rows.append(row)
            yield from extend(r + 1)
            rows.pop()
            col_plus = saved

    yield from extend(0)
