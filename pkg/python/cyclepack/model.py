"""
Orientation types, arc indexing and validation predicates.

Vertex ids form one dense space: for a bipartite tournament the row class A is
``0..m-1`` and the column class B is ``m..m+n-1``; tournament vertices are
``0..n-1``.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Union

import networkx as nx
import numpy as np

from .errors import DomainError, EncodingError, StructuralError

logger = logging.getLogger(__name__)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BipartiteTournament:
    """Orientation of K_{m,n} as an m x n sign matrix.

    ``orient[i, j] == +1`` means a_i -> b_j, ``-1`` means b_j -> a_i.
    Construction does not validate; use :func:`validate_bipartite`.
    """

    m: int
    n: int
    orient: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "orient", _frozen(self.orient))

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> BipartiteTournament:
        """Build from '+'/'-' strings, one per row"""
        if not rows:
            raise StructuralError("at least one row is required")
        n = len(rows[0])
        table = {"+": 1, "-": -1}
        orient = np.empty((len(rows), n), dtype=np.int8)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise StructuralError(f"row {i} has length {len(row)}, expected {n}")
            for j, ch in enumerate(row):
                if ch not in table:
                    raise EncodingError(f"unexpected character {ch!r} at ({i}, {j})")
                orient[i, j] = table[ch]
        return cls(len(rows), n, orient)

    def to_rows(self) -> list[str]:
        return ["".join("+" if v == 1 else "-" for v in row) for row in self.orient.tolist()]

    def reversed(self) -> BipartiteTournament:
        """Every arc reversed"""
        return BipartiteTournament(self.m, self.n, -self.orient)

    def flipped(self, i: int, j: int) -> BipartiteTournament:
        """The arc between a_i and b_j reversed"""
        orient = self.orient.copy()
        orient[i, j] = -orient[i, j]
        return BipartiteTournament(self.m, self.n, orient)

    @property
    def num_arcs(self) -> int:
        return self.m * self.n

    @property
    def num_vertices(self) -> int:
        return self.m + self.n

    def key(self) -> bytes:
        return self.orient.astype(np.int8).tobytes()

    def __eq__(self, other):
        if not isinstance(other, BipartiteTournament):
            return NotImplemented
        return (
            self.m == other.m
            and self.n == other.n
            and self.orient.shape == other.orient.shape
            and bool(np.array_equal(self.orient, other.orient))
        )

    def __hash__(self):
        return hash((self.m, self.n, self.key()))

    def __repr__(self):
        return f"BipartiteTournament(m={self.m}, n={self.n}, rows={self.to_rows()!r})"


@dataclass(frozen=True, eq=False)
class RegularTournament:
    """Tournament on ``n`` vertices as a 0/1 adjacency matrix (``adj[i, j] == 1``: i -> j)"""

    n: int
    adj: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "adj", _frozen(self.adj))

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> RegularTournament:
        n = len(rows)
        adj = np.zeros((n, n), dtype=np.int8)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise StructuralError(f"row {i} has length {len(row)}, expected {n}")
            for j, ch in enumerate(row):
                if ch not in "01":
                    raise EncodingError(f"unexpected character {ch!r} at ({i}, {j})")
                adj[i, j] = int(ch)
        return cls(n, adj)

    def to_rows(self) -> list[str]:
        return ["".join(str(int(v)) for v in row) for row in self.adj.tolist()]

    @property
    def num_arcs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def num_vertices(self) -> int:
        return self.n

    def key(self) -> bytes:
        return self.adj.astype(np.int8).tobytes()

    def __eq__(self, other):
        if not isinstance(other, RegularTournament):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.adj, other.adj))

    def __hash__(self):
        return hash((self.n, self.key()))

    def __repr__(self):
        return f"RegularTournament(n={self.n}, rows={self.to_rows()!r})"


Host = Union[BipartiteTournament, RegularTournament]


@dataclass(frozen=True, order=True)
class ArcRef:
    """Arc ``tail -> head`` with its dense index in the host's arc universe"""

    index: int
    tail: int
    head: int


@dataclass(frozen=True)
class ValidationReport:
    is_complete: bool
    is_eulerian: bool
    delta_margin: float
    violations: tuple[tuple[int, int, int], ...]

    def is_delta_eulerian(self, delta: float) -> bool:
        return self.delta_margin <= delta


def _deficiency(out_deg: np.ndarray, in_deg: np.ndarray, total: int) -> np.ndarray:
    # smallest delta with min(out, in) >= (1 - delta) * total / 2
    if total == 0:
        return np.zeros(len(out_deg))
    low = np.minimum(out_deg, in_deg)
    return np.clip((total - 2 * low) / total, 0.0, 1.0)


def validate_bipartite(G: BipartiteTournament) -> ValidationReport:
    """Check completeness, the Eulerian predicate and the delta margin of ``G``"""
    orient = G.orient
    if G.m < 1 or G.n < 1 or orient.ndim != 2 or orient.shape != (G.m, G.n):
        raise StructuralError(
            f"orientation has shape {orient.shape}, declared {G.m} x {G.n}"
        )
    if not np.isin(orient, (1, -1)).all():
        raise EncodingError("orientation entries must be +1 or -1")

    out_a = (orient == 1).sum(axis=1)
    in_a = G.n - out_a
    out_b = (orient == -1).sum(axis=0)
    in_b = G.m - out_b

    delta = max(
        float(_deficiency(out_a, in_a, G.n).max()),
        float(_deficiency(out_b, in_b, G.m).max()),
    )
    violations = [
        (i, int(out_a[i]), int(in_a[i])) for i in range(G.m) if out_a[i] != in_a[i]
    ] + [
        (G.m + j, int(out_b[j]), int(in_b[j])) for j in range(G.n) if out_b[j] != in_b[j]
    ]
    return ValidationReport(
        is_complete=True,
        is_eulerian=not violations,
        delta_margin=delta,
        violations=tuple(violations),
    )


def validate_tournament(T: RegularTournament) -> ValidationReport:
    """Check antisymmetry and regularity of ``T``"""
    adj = T.adj
    if T.n < 1 or adj.ndim != 2 or adj.shape != (T.n, T.n):
        raise StructuralError(f"adjacency has shape {adj.shape}, declared {T.n} x {T.n}")
    if T.n % 2 == 0:
        raise DomainError(f"no regular tournament exists on an even number of vertices ({T.n})")
    if not np.isin(adj, (0, 1)).all():
        raise EncodingError("adjacency entries must be 0 or 1")
    if np.diagonal(adj).any():
        raise EncodingError("adjacency has a loop")
    pair_sum = adj + adj.T
    off_diagonal = ~np.eye(T.n, dtype=bool)
    bad = np.argwhere((pair_sum != 1) & off_diagonal)
    if len(bad):
        i, j = (int(v) for v in bad[0])
        raise EncodingError(f"adj[{i}][{j}] == adj[{j}][{i}]: not antisymmetric")

    out_deg = adj.sum(axis=1)
    in_deg = adj.sum(axis=0)
    delta = float(_deficiency(out_deg, in_deg, T.n - 1).max())
    violations = tuple(
        (v, int(out_deg[v]), int(in_deg[v])) for v in range(T.n) if out_deg[v] != in_deg[v]
    )
    return ValidationReport(
        is_complete=True,
        is_eulerian=not violations,
        delta_margin=delta,
        violations=violations,
    )


def require_eulerian(G: BipartiteTournament) -> ValidationReport:
    """Validate ``G`` and raise DomainError unless it is Eulerian"""
    report = validate_bipartite(G)
    if not report.is_eulerian:
        raise DomainError(
            f"K_{{{G.m},{G.n}}} orientation is not Eulerian "
            f"({len(report.violations)} unbalanced vertices)"
        )
    return report


def require_regular(T: RegularTournament) -> ValidationReport:
    report = validate_tournament(T)
    if not report.is_eulerian:
        raise DomainError(f"tournament on {T.n} vertices is not regular")
    return report


def bipartite_arc(G: BipartiteTournament, i: int, j: int) -> ArcRef:
    """The arc between a_i and b_j"""
    if G.orient[i, j] == 1:
        return ArcRef(i * G.n + j, i, G.m + j)
    return ArcRef(i * G.n + j, G.m + j, i)


def tournament_arc_index(n: int, u: int, v: int) -> int:
    """Dense index of the arc between u and v (either orientation)"""
    i, j = (u, v) if u < v else (v, u)
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def tournament_arc(T: RegularTournament, u: int, v: int) -> ArcRef:
    index = tournament_arc_index(T.n, u, v)
    if T.adj[u, v]:
        return ArcRef(index, u, v)
    return ArcRef(index, v, u)


def arcs(G: Host) -> list[ArcRef]:
    """All arcs of ``G``; the arc at position i has index i.

    Bipartite hosts are listed row-major over (a_i, b_j), tournaments over
    pairs i < j in lexicographic order.
    """
    if isinstance(G, BipartiteTournament):
        return [bipartite_arc(G, i, j) for i in range(G.m) for j in range(G.n)]
    return [tournament_arc(G, i, j) for i in range(G.n) for j in range(i + 1, G.n)]


def orientation_digraph(G: Host) -> nx.DiGraph:
    """``G`` as a networkx digraph; every arc carries its dense ``index``"""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(G.num_vertices))
    for arc in arcs(G):
        digraph.add_edge(arc.tail, arc.head, index=arc.index)
    return digraph
