"""
Matrix classes A(R, S), interchange graphs and interchange distances.

Vertex ids of difference digraphs follow the host convention of
:mod:`cyclepack.model`: row i is vertex ``i`` and column j is vertex ``m + j``.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .census import ANTIPODAL_CONSTANT
from .config import Limits, SamplerConfig, default_steps_bipartite, spawn_seeds
from .errors import CertificateError, DomainError, EncodingError, ResourceError, StructuralError
from .model import BipartiteTournament
from .packing import (
    build_c4_hypergraph,
    exact_max_pack,
    local_search_pack,
    max_cycle_decomposition,
    verify_decomposition,
    verify_packing,
)
from .sampling import canonical_bipartite, randomize_bipartite

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MarginMatrix:
    """0/1 matrix together with its row and column sums"""

    m: int
    n: int
    entries: np.ndarray
    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.uint8, copy=True)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "row_sums", tuple(int(v) for v in self.row_sums))
        object.__setattr__(self, "col_sums", tuple(int(v) for v in self.col_sums))
        if entries.shape != (self.m, self.n):
            raise StructuralError(
                f"entries have shape {entries.shape}, declared {self.m} x {self.n}"
            )
        if self.row_sums != tuple(entries.sum(axis=1).tolist()):
            raise StructuralError("recorded row sums do not match the entries")
        if self.col_sums != tuple(entries.sum(axis=0).tolist()):
            raise StructuralError("recorded column sums do not match the entries")

    @classmethod
    def of(cls, entries) -> MarginMatrix:
        """Wrap a 0/1 array, deriving its margins"""
        arr = np.asarray(entries)
        if arr.ndim != 2 or 0 in arr.shape:
            raise StructuralError(f"expected a non-empty 2-d array, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise EncodingError("matrix entries must be 0 or 1")
        arr = arr.astype(np.uint8)
        m, n = arr.shape
        return cls(m, n, arr, arr.sum(axis=1).tolist(), arr.sum(axis=0).tolist())

    def complement(self) -> MarginMatrix:
        """J - A"""
        return MarginMatrix.of(1 - self.entries)

    def key(self) -> bytes:
        """Row-major bitstring, packed"""
        return np.packbits(self.entries.ravel()).tobytes()

    def to_rows(self) -> list[str]:
        return ["".join(str(v) for v in row) for row in self.entries.tolist()]

    def __eq__(self, other):
        if not isinstance(other, MarginMatrix):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and bool(
            np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.m, self.n, self.key()))

    def __repr__(self):
        return f"MarginMatrix(rows={self.to_rows()!r})"


def _check_margins(row_sums: Sequence[int], col_sums: Sequence[int]) -> None:
    if not row_sums or not col_sums:
        raise StructuralError("margins must be non-empty")
    if any(v < 0 for v in itertools.chain(row_sums, col_sums)):
        raise StructuralError("margins must be non-negative")
    if sum(row_sums) != sum(col_sums):
        raise StructuralError(
            f"row sums total {sum(row_sums)} but column sums total {sum(col_sums)}"
        )


def gale_ryser_feasible(row_sums: Sequence[int], col_sums: Sequence[int]) -> bool:
    """Whether some 0/1 matrix has these margins.

    Compares the partial sums of the sorted column sums with those of the
    conjugate of the row sums.
    """
    m, n = len(row_sums), len(col_sums)
    if sum(row_sums) != sum(col_sums) or any(v < 0 for v in (*row_sums, *col_sums)):
        return False
    if any(r > n for r in row_sums) or any(c > m for c in col_sums):
        return False
    conjugate = [sum(1 for r in row_sums if r >= k) for k in range(1, n + 1)]
    cols = sorted(col_sums, reverse=True)
    return all(
        sum(cols[: k + 1]) <= sum(conjugate[: k + 1]) for k in range(n)
    )


def _check_pair(A: MarginMatrix, B: MarginMatrix) -> None:
    if (A.m, A.n) != (B.m, B.n):
        raise StructuralError(f"{A.m} x {A.n} and {B.m} x {B.n} matrices")
    if A.row_sums != B.row_sums or A.col_sums != B.col_sums:
        raise StructuralError("matrices have different margins")


def enumerate_matrix_class(
    row_sums: Sequence[int], col_sums: Sequence[int], limits: Limits | None = None
) -> list[MarginMatrix]:
    """Every matrix of A(R, S) in lexicographic row-major order.

    Infeasible margins give an empty list.
    """
    limits = limits or Limits()
    row_sums, col_sums = list(row_sums), list(col_sums)
    _check_margins(row_sums, col_sums)
    if not gale_ryser_feasible(row_sums, col_sums):
        return []

    m, n = len(row_sums), len(col_sums)
    found = []
    for entries in _fill_rows(row_sums, col_sums):
        found.append(MarginMatrix(m, n, entries, row_sums, col_sums))
        if len(found) > limits.max_class:
            raise ResourceError(
                f"class A(R, S) has more than {limits.max_class} matrices",
                partial=found[: limits.max_class],
            )
    logger.debug("enumerated %d matrices with margins %s / %s", len(found), row_sums, col_sums)
    return found


def _fill_rows(row_sums: list[int], col_sums: list[int]) -> Iterator[np.ndarray]:
    m, n = len(row_sums), len(col_sums)
    grid = np.zeros((m, n), dtype=np.uint8)
    need = np.array(col_sums, dtype=np.int64)

    def extend(r: int) -> Iterator[np.ndarray]:
        nonlocal need
        if r == m:
            yield grid.copy()
            return
        rows_left = m - r - 1
        # lexicographic zero positions give lexicographic rows
        for zeros in itertools.combinations(range(n), n - row_sums[r]):
            row = np.ones(n, dtype=np.uint8)
            row[list(zeros)] = 0
            rest = need - row
            if (rest < 0).any() or (rest > rows_left).any():
                continue
            saved, need = need, rest
            grid[r] = row
            yield from extend(r + 1)
            need = saved
        grid[r] = 0

    yield from extend(0)


def interchange_neighbors(A: MarginMatrix) -> list[MarginMatrix]:
    """Matrices one interchange away from ``A``, without duplicates"""
    E = A.entries.astype(np.int8)
    seen: set[bytes] = set()
    result = []
    for i, j in itertools.combinations(range(A.m), 2):
        diff = E[i] - E[j]
        plus = np.flatnonzero(diff == 1).tolist()
        minus = np.flatnonzero(diff == -1).tolist()
        for k in plus:
            for l in minus:
                swapped = A.entries.copy()
                swapped[[i, i, j, j], [k, l, k, l]] = swapped[[j, j, i, i], [k, l, k, l]]
                neighbor = MarginMatrix.of(swapped)
                if neighbor.row_sums != A.row_sums or neighbor.col_sums != A.col_sums:
                    raise CertificateError("interchange changed the margins")
                if neighbor.key() not in seen:
                    seen.add(neighbor.key())
                    result.append(neighbor)
    return result


def bfs_distance(A: MarginMatrix, B: MarginMatrix, limits: Limits | None = None) -> int:
    """Fewest interchanges turning A into B"""
    limits = limits or Limits()
    _check_pair(A, B)
    target = B.key()
    if A.key() == target:
        return 0
    seen = {A.key()}
    frontier = deque([(A, 0)])
    while frontier:
        current, dist = frontier.popleft()
        for neighbor in interchange_neighbors(current):
            key = neighbor.key()
            if key == target:
                return dist + 1
            if key not in seen:
                seen.add(key)
                if len(seen) > limits.max_class:
                    raise ResourceError(
                        f"BFS visited more than {limits.max_class} matrices"
                    )
                frontier.append((neighbor, dist + 1))
    raise CertificateError("B is unreachable from A: the interchange graph is disconnected")


def difference_digraph(A: MarginMatrix, B: MarginMatrix) -> nx.DiGraph:
    """Digraph of A - B: +1 at (i, j) is the arc i -> m+j, -1 the arc m+j -> i"""
    _check_pair(A, B)
    diff = A.entries.astype(np.int8) - B.entries.astype(np.int8)
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(A.m + A.n))
    for i, j in np.argwhere(diff == 1).tolist():
        digraph.add_edge(i, A.m + j)
    for i, j in np.argwhere(diff == -1).tolist():
        digraph.add_edge(A.m + j, i)
    return digraph


@dataclass(frozen=True)
class DistanceRecord:
    d_ab: int
    q_ab: int
    i_walkup: int
    i_bfs: int | None = None
    certified: bool = True

    @property
    def matches_bfs(self) -> bool | None:
        if self.i_bfs is None:
            return None
        return self.i_bfs == self.i_walkup


def walkup_distance(
    A: MarginMatrix, B: MarginMatrix, limits: Limits | None = None, with_bfs: bool = False
) -> DistanceRecord:
    """Interchange distance as d/2 - q from a maximum cycle decomposition of A - B.

    Above the exact decomposition limit the heuristic q is used and the
    record is flagged non-certified.
    """
    limits = limits or Limits()
    digraph = difference_digraph(A, B)
    d = digraph.number_of_edges()
    try:
        decomposition = max_cycle_decomposition(digraph, limits)
    except ResourceError as e:
        logger.info("exact decomposition gave up: %s", e)
        decomposition = e.partial
    verify_decomposition(digraph, decomposition)
    certified = decomposition.certified_optimal
    record = DistanceRecord(
        d_ab=d,
        q_ab=decomposition.q,
        i_walkup=d // 2 - decomposition.q,
        certified=certified,
    )
    if with_bfs:
        i_bfs = bfs_distance(A, B, limits)
        if certified and i_bfs != record.i_walkup:
            raise CertificateError(
                f"BFS distance {i_bfs} differs from d/2 - q = {record.i_walkup}"
            )
        record = DistanceRecord(d, decomposition.q, record.i_walkup, i_bfs, certified)
    return record


def interchange_graph(
    row_sums: Sequence[int], col_sums: Sequence[int], limits: Limits | None = None
) -> nx.Graph:
    """G(R, S) with nodes keyed by :meth:`MarginMatrix.key`; ``matrix`` holds the vertex"""
    graph = nx.Graph()
    for A in enumerate_matrix_class(row_sums, col_sums, limits):
        graph.add_node(A.key(), matrix=A)
    for key, data in list(graph.nodes(data=True)):
        for neighbor in interchange_neighbors(data["matrix"]):
            graph.add_edge(key, neighbor.key())
    return graph


@dataclass(frozen=True)
class DiameterReport:
    diameter: int
    witness: tuple[MarginMatrix, MarginMatrix]
    class_size: int
    mn: int

    @property
    def conjectured_bound(self) -> float:
        return self.mn / 4

    @property
    def known_bound(self) -> float:
        return 5 * self.mn / 12

    @property
    def within_conjectured(self) -> bool:
        return 4 * self.diameter <= self.mn

    @property
    def within_known(self) -> bool:
        return 12 * self.diameter <= 5 * self.mn


def diameter(
    row_sums: Sequence[int], col_sums: Sequence[int], limits: Limits | None = None
) -> DiameterReport:
    """Largest interchange distance in A(R, S), by BFS from every vertex"""
    graph = interchange_graph(row_sums, col_sums, limits)
    if graph.number_of_nodes() == 0:
        raise DomainError("the class A(R, S) is empty")
    order = list(graph.nodes)
    best = (0, order[0], order[0])
    for source in order:
        lengths = nx.single_source_shortest_path_length(graph, source)
        if len(lengths) != len(order):
            raise CertificateError("interchange graph is disconnected")
        for target in order:
            if lengths[target] > best[0]:
                best = (lengths[target], source, target)
    dist, a, b = best
    A = graph.nodes[a]["matrix"]
    logger.info("diameter %d over %d matrices", dist, len(order))
    return DiameterReport(
        diameter=dist,
        witness=(A, graph.nodes[b]["matrix"]),
        class_size=len(order),
        mn=A.m * A.n,
    )


@dataclass(frozen=True)
class AntipodalPair:
    matrix: MarginMatrix
    record: DistanceRecord
    packing_size: int

    @property
    def i_upper_from_packing(self) -> int:
        return self.matrix.m * self.matrix.n // 2 - self.packing_size


@dataclass(frozen=True)
class AntipodalReport:
    m: int
    n: int
    exhaustive: bool
    class_size: int | None
    pairs: tuple[AntipodalPair, ...] = field(repr=False)

    @property
    def lower_bound(self) -> float:
        return self.m * self.n / 4

    @property
    def upper_constant_bound(self) -> float:
        return ANTIPODAL_CONSTANT * self.m * self.n

    @property
    def i_min(self) -> int:
        return min(p.record.i_walkup for p in self.pairs)

    @property
    def i_max(self) -> int:
        return max(p.record.i_walkup for p in self.pairs)

    @property
    def all_certified(self) -> bool:
        return all(p.record.certified for p in self.pairs)

    @property
    def lower_ok(self) -> bool:
        return 4 * self.i_min >= self.m * self.n

    @property
    def upper_ok(self) -> bool:
        return self.i_max <= math.ceil(self.upper_constant_bound)

    @property
    def i_upper_from_packing_max(self) -> int:
        return max(p.i_upper_from_packing for p in self.pairs)


def _antipodal_matrices(m: int, n: int, limits: Limits, samples: int | None, seed: int):
    rows, cols = [n // 2] * m, [m // 2] * n
    if samples is None:
        try:
            matrices = enumerate_matrix_class(rows, cols, limits)
        except ResourceError:
            logger.info("A(R, S) exceeds %d matrices, sampling instead", limits.max_class)
        else:
            # one representative per unordered {A, J - A}
            keep = [A for A in matrices if A.key() < A.complement().key()]
            return keep, True, len(matrices)
        samples = 32

    start = canonical_bipartite(m, n)
    steps = default_steps_bipartite(m, n)
    chosen = []
    for child in spawn_seeds(seed, samples):
        G = randomize_bipartite(start, SamplerConfig(seed=child, steps=steps))
        chosen.append(MarginMatrix.of((G.orient + 1) // 2))
    return chosen, False, None


def antipodal_audit(
    m: int,
    n: int,
    limits: Limits | None = None,
    samples: int | None = None,
    seed: int = 0,
) -> AntipodalReport:
    """Interchange distances between matrices and their complements.

    Margins are n/2 on every row and m/2 on every column. The whole class is
    audited when it fits in ``limits.max_class`` and ``samples`` is None;
    otherwise ``samples`` matrices (32 by default) are drawn with the
    Eulerian orientation chain.
    """
    limits = limits or Limits()
    if m < 2 or n < 2 or m % 2 or n % 2:
        raise DomainError(f"antipodal pairs need even m, n >= 2, got {m} x {n}")
    if samples is not None and samples < 1:
        raise DomainError("samples must be positive")
    matrices, exhaustive, class_size = _antipodal_matrices(m, n, limits, samples, seed)

    pairs = []
    for A in matrices:
        record = walkup_distance(A, A.complement(), limits)
        # A - (J - A) = 2A - J is a sign matrix of an Eulerian orientation
        G = BipartiteTournament(m, n, 2 * A.entries.astype(np.int8) - 1)
        H = build_c4_hypergraph(G)
        if H.num_edges <= limits.max_edges:
            try:
                packing = exact_max_pack(G, limits, seed=seed, hypergraph=H)
            except ResourceError as e:
                packing = e.partial
        else:
            packing = local_search_pack(G, seed, budget=H.num_edges, hypergraph=H)
        verify_packing(G, packing)
        pair = AntipodalPair(A, record, packing.size)
        if record.certified and record.i_walkup > pair.i_upper_from_packing:
            raise CertificateError(
                f"i = {record.i_walkup} exceeds mn/2 - packing = {pair.i_upper_from_packing}"
            )
        pairs.append(pair)

    report = AntipodalReport(m, n, exhaustive, class_size, tuple(pairs))
    logger.info(
        "antipodal audit %dx%d: %d pairs, i in [%d, %d]",
        m,
        n,
        len(pairs),
        report.i_min,
        report.i_max,
    )
    return report


def walkup_lower_bound(d_ab: int) -> int:
    """Every cycle of a bipartite difference digraph has at least 4 arcs"""
    return math.ceil(d_ab / 4)
