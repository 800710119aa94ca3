"""
Random partition experiment on regular tournaments.

Every vertex picks one of m classes uniformly at random. The complete
bipartite tournaments between two classes are packed separately and the
packings are lifted back onto the tournament; arcs inside a class are lost.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .census import TOURNAMENT_CONSTANT
from .config import make_rng, spawn_seeds
from .errors import DomainError
from .model import (
    ArcRef,
    BipartiteTournament,
    RegularTournament,
    ValidationReport,
    require_regular,
    tournament_arc,
    validate_bipartite,
)
from .packing import Packing, PackMethod, local_search_pack, verify_packing
from .parallel import run_tasks

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PartitionOutcome:
    """Class assignment plus the out/in neighbour counts of every vertex in every class.

    ``d_plus[i][v]`` counts out-neighbours of v in class i, ``d_minus[i][v]``
    in-neighbours.
    """

    n: int
    m: int
    assignment: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    d_plus: np.ndarray
    d_minus: np.ndarray
    delta_observed: float
    delta_target: float | None = None
    all_pairs_delta_eulerian: bool | None = None
    min_class_size: int = 1

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def expected_degree(self) -> float:
        return (self.n - 1) / (2 * self.m)

    def relative_deviation(self) -> np.ndarray:
        expected = self.expected_degree
        return np.maximum(
            np.abs(self.d_plus - expected), np.abs(self.d_minus - expected)
        ) / expected

    def deviation_fraction(self, delta: float) -> float:
        """Fraction of (vertex, class) pairs whose deviation exceeds ``delta``"""
        return float((self.relative_deviation() > delta).mean())

    @property
    def size_bounds_ok(self) -> bool:
        return all(self.min_class_size <= s <= 2 * self.m for s in self.class_sizes)


@dataclass(frozen=True)
class PairGraph:
    i: int
    j: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    host: BipartiteTournament
    validation: ValidationReport

    def lift(self, T: RegularTournament, packing: Packing) -> tuple[tuple[ArcRef, ...], ...]:
        """Map the cycles of a packing of this pair onto the arcs of ``T``"""
        ids = self.rows + self.cols
        return tuple(
            tuple(tournament_arc(T, ids[arc.tail], ids[arc.head]) for arc in cycle)
            for cycle in packing.cycles
        )


def partition_vertices(
    T: RegularTournament,
    m: int,
    seed: int = 0,
    delta_target: float | None = None,
    min_class_size: int = 1,
) -> PartitionOutcome:
    """Assign each vertex a uniform class in 0..m-1 and tabulate its class degrees"""
    require_regular(T)
    if m < 1:
        raise DomainError(f"need at least one class, got m={m}")
    n = T.n
    assignment = make_rng(seed).integers(0, m, size=n)
    member = np.zeros((m, n), dtype=np.int64)
    member[assignment, np.arange(n)] = 1
    adj = T.adj.astype(np.int64)
    d_plus = member @ adj.T
    d_minus = member @ adj

    expected = (n - 1) / (2 * m)
    deviation = np.maximum(np.abs(d_plus - expected), np.abs(d_minus - expected)) / expected
    classes = tuple(tuple(np.flatnonzero(assignment == i).tolist()) for i in range(m))

    outcome = PartitionOutcome(
        n=n,
        m=m,
        assignment=tuple(assignment.tolist()),
        classes=classes,
        d_plus=d_plus,
        d_minus=d_minus,
        delta_observed=float(deviation.max()),
        delta_target=delta_target,
        min_class_size=min_class_size,
    )
    if delta_target is None:
        return outcome

    clean = all(
        pg.validation.is_delta_eulerian(delta_target)
        for pg in (pair_graph(T, outcome, i, j) for i, j in itertools.combinations(range(m), 2))
        if pg is not None
    )
    return PartitionOutcome(
        n=n,
        m=m,
        assignment=outcome.assignment,
        classes=classes,
        d_plus=d_plus,
        d_minus=d_minus,
        delta_observed=outcome.delta_observed,
        delta_target=delta_target,
        all_pairs_delta_eulerian=clean,
        min_class_size=min_class_size,
    )


def pair_graph(T: RegularTournament, outcome: PartitionOutcome, i: int, j: int) -> PairGraph | None:
    """Bipartite tournament between classes i and j, or None when one is empty"""
    if i == j:
        raise DomainError("a pair graph needs two different classes")
    rows, cols = outcome.classes[i], outcome.classes[j]
    if not rows or not cols:
        return None
    block = T.adj[np.ix_(rows, cols)].astype(np.int8)
    host = BipartiteTournament(len(rows), len(cols), 2 * block - 1)
    return PairGraph(i, j, rows, cols, host, validate_bipartite(host))


def chernoff_tail_estimate(n: int, delta: float) -> float:
    """4 n^2 exp(-delta^2 n / 128); below 1 means no vertex is expected to deviate"""
    return 4 * n * n * math.exp(-(delta**2) * n / 128)


def chernoff_vertex_bound(n: int, m: int, delta: float) -> float:
    """Two-sided tail for one vertex and one class, including the cubic correction"""
    return 2 * math.exp(-(delta**2) * (n - 1) / (64 * m) + (delta**3) * (n - 1) / (128 * m))


@dataclass(frozen=True)
class PairResult:
    i: int
    j: int
    rows: int
    cols: int
    size: int
    delta_margin: float
    delta_clean: bool


@dataclass(frozen=True)
class ExperimentReport:
    n: int
    m: int
    seed: int
    delta_target: float
    delta_observed: float
    deviation_fraction: float
    size_bounds_ok: bool
    all_pairs_delta_eulerian: bool
    class_sizes: tuple[int, ...]
    pairs: tuple[PairResult, ...]
    skipped_pairs: tuple[tuple[int, int], ...]
    total_packed: int
    within_class_arcs: int
    cross_arcs: int
    chernoff_tail_estimate: float
    chernoff_vertex_bound: float
    packing: Packing = field(repr=False, compare=False)

    @property
    def per_pair_packings(self) -> tuple[int, ...]:
        return tuple(p.size for p in self.pairs)

    @property
    def delta_clean_pairs(self) -> int:
        return sum(p.delta_clean for p in self.pairs)

    @property
    def within_class_loss(self) -> int:
        """sum |V_i|^2, the term subtracted from n^2 in the cross-arc count"""
        return sum(s * s for s in self.class_sizes)

    @property
    def target(self) -> float:
        return TOURNAMENT_CONSTANT * self.n * self.n

    @property
    def ratio(self) -> float:
        return self.total_packed / self.target


def _pack_pair(host: BipartiteTournament, seed: int, budget: int) -> Packing:
    packing = local_search_pack(host, seed, budget)
    verify_packing(host, packing)
    return packing


def run_partition_experiment(
    T: RegularTournament,
    seed: int = 0,
    delta_target: float = 0.5,
    budget: int | None = None,
    m: int | None = None,
    min_class_size: int = 1,
    jobs: int = 1,
) -> ExperimentReport:
    """Partition, pack every pair graph, lift and verify the union on ``T``.

    ``m`` defaults to round(sqrt(n)); ``budget`` (local search attempts per
    pair) defaults to the pair's arc count.
    """
    require_regular(T)
    if T.n < 9:
        raise DomainError(f"the partition experiment needs n >= 9, got {T.n}")
    n = T.n
    m = m or round(math.sqrt(n))
    index_pairs = list(itertools.combinations(range(m), 2))
    partition_seed, *pair_seeds = spawn_seeds(seed, 1 + len(index_pairs))

    outcome = partition_vertices(T, m, partition_seed, delta_target, min_class_size)
    graphs, skipped = [], []
    for (i, j), pair_seed in zip(index_pairs, pair_seeds):
        pg = pair_graph(T, outcome, i, j)
        if pg is None:
            skipped.append((i, j))
        else:
            graphs.append((pg, pair_seed))

    calls = [
        (pg.host, pair_seed, pg.host.num_arcs if budget is None else budget)
        for pg, pair_seed in graphs
    ]
    packings = run_tasks(_pack_pair, calls, jobs)

    cycles = []
    results = []
    for (pg, _), packing in zip(graphs, packings):
        cycles.extend(pg.lift(T, packing))
        results.append(
            PairResult(
                i=pg.i,
                j=pg.j,
                rows=len(pg.rows),
                cols=len(pg.cols),
                size=packing.size,
                delta_margin=pg.validation.delta_margin,
                delta_clean=pg.validation.is_delta_eulerian(delta_target),
            )
        )
    combined = Packing(tuple(cycles), PackMethod.LOCAL)
    verify_packing(T, combined)

    sizes = outcome.class_sizes
    report = ExperimentReport(
        n=n,
        m=m,
        seed=seed,
        delta_target=delta_target,
        delta_observed=outcome.delta_observed,
        deviation_fraction=outcome.deviation_fraction(delta_target),
        size_bounds_ok=outcome.size_bounds_ok,
        all_pairs_delta_eulerian=bool(outcome.all_pairs_delta_eulerian),
        class_sizes=sizes,
        pairs=tuple(results),
        skipped_pairs=tuple(skipped),
        total_packed=combined.size,
        within_class_arcs=sum(s * (s - 1) // 2 for s in sizes),
        cross_arcs=(n * n - sum(s * s for s in sizes)) // 2,
        chernoff_tail_estimate=chernoff_tail_estimate(n, delta_target),
        chernoff_vertex_bound=chernoff_vertex_bound(n, m, delta_target),
        packing=combined,
    )
    logger.info(
        "partition experiment n=%d m=%d: %d C4s packed, ratio %.4f",
        n,
        m,
        report.total_packed,
        report.ratio,
    )
    return report
