"""
Arc-disjoint C4 packings and maximum cycle decompositions.

Packers work on the C4 hypergraph of a bipartite orientation: its vertices
are the mn arcs and its edges the directed 4-cycles. Every packer returns a
:class:`Packing` that :func:`verify_packing` re-checks against the raw host.
Ties are broken by a seed-driven permutation first and arc/edge index second.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Hashable
from dataclasses import dataclass
from enum import Enum

import networkx as nx
import numpy as np

from .census import enumerate_four_cycles
from .config import Limits, make_rng
from .errors import CertificateError, DomainError, ResourceError
from .model import ArcRef, BipartiteTournament, Host, arcs, validate_bipartite

logger = logging.getLogger(__name__)


class PackMethod(str, Enum):
    GREEDY = "greedy"
    LOCAL = "local"
    COLOR = "color"
    EXACT = "exact"


C4 = tuple[ArcRef, ArcRef, ArcRef, ArcRef]


@dataclass(frozen=True)
class Packing:
    cycles: tuple[C4, ...]
    method: PackMethod
    certified_optimal: bool = False
    colors_used: int | None = None

    @property
    def size(self) -> int:
        return len(self.cycles)

    def arc_indices(self) -> list[list[int]]:
        return [[arc.index for arc in cycle] for cycle in self.cycles]


@dataclass(frozen=True, eq=False)
class C4Hypergraph:
    """4-uniform hypergraph whose vertices are arcs and whose edges are C4 copies"""

    num_vertices: int
    edges: np.ndarray
    degree: np.ndarray
    max_degree: int
    max_codegree: int
    incidence: tuple[tuple[int, ...], ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def build_c4_hypergraph(G: BipartiteTournament) -> C4Hypergraph:
    edges = enumerate_four_cycles(G)
    mn = G.m * G.n
    degree = np.bincount(edges.ravel(), minlength=mn)

    incidence: list[list[int]] = [[] for _ in range(mn)]
    for e, row in enumerate(edges.tolist()):
        for arc in row:
            incidence[arc].append(e)

    max_codegree = 0
    if len(edges):
        pair_keys = [
            np.minimum(edges[:, s], edges[:, t]) * mn + np.maximum(edges[:, s], edges[:, t])
            for s, t in itertools.combinations(range(4), 2)
        ]
        _, counts = np.unique(np.concatenate(pair_keys), return_counts=True)
        max_codegree = int(counts.max())

    return C4Hypergraph(
        num_vertices=mn,
        edges=edges,
        degree=degree,
        max_degree=int(degree.max()) if mn else 0,
        max_codegree=max_codegree,
        incidence=tuple(tuple(ids) for ids in incidence),
    )


def _cycle_refs(universe: list[ArcRef], edge: list[int]) -> C4:
    a, b, c, d = (universe[i] for i in edge)
    return (a, b, c, d)


def _prepare(G: BipartiteTournament, hypergraph: C4Hypergraph | None):
    validate_bipartite(G)
    return hypergraph or build_c4_hypergraph(G), arcs(G)


def _greedy_order(edges: list[list[int]], order: list[int], owner: list[int]) -> list[int]:
    chosen = []
    for e in order:
        if all(owner[a] < 0 for a in edges[e]):
            for a in edges[e]:
                owner[a] = e
            chosen.append(e)
    return chosen


def greedy_pack(
    G: BipartiteTournament, seed: int = 0, hypergraph: C4Hypergraph | None = None
) -> Packing:
    """Maximal packing: scan the C4s in a seeded random order, keep each that fits"""
    H, universe = _prepare(G, hypergraph)
    edges = H.edges.tolist()
    order = make_rng(seed).permutation(len(edges)).tolist()
    chosen = _greedy_order(edges, order, [-1] * H.num_vertices)
    return Packing(
        cycles=tuple(_cycle_refs(universe, edges[e]) for e in chosen),
        method=PackMethod.GREEDY,
    )


def local_search_pack(
    G: BipartiteTournament,
    seed: int = 0,
    budget: int = 0,
    hypergraph: C4Hypergraph | None = None,
) -> Packing:
    """Greedy packing improved by ``budget`` attempted 1-out/2-in swaps.

    An attempt removes one packed C4 and looks for two disjoint C4s on the
    freed and unused arcs. The packing is kept maximal, so only C4s through
    the freed arcs can become available.
    """
    if budget < 0:
        raise DomainError("budget must be non-negative")
    H, universe = _prepare(G, hypergraph)
    edges = H.edges.tolist()
    owner = [-1] * H.num_vertices
    order = make_rng(seed).permutation(len(edges)).tolist()
    chosen = _greedy_order(edges, order, owner)
    cap = H.num_vertices // 4

    rng = make_rng(np.random.SeedSequence(seed, spawn_key=(1,)))
    improvements = 0
    for _ in range(budget):
        if not chosen or len(chosen) >= cap:
            break
        slot = int(rng.integers(len(chosen)))
        out = chosen[slot]
        for a in edges[out]:
            owner[a] = -1

        touching = {e for a in edges[out] for e in H.incidence[a] if e != out}
        free = sorted(e for e in touching if all(owner[a] < 0 for a in edges[e]))
        free = [free[i] for i in rng.permutation(len(free)).tolist()]
        swap = _disjoint_pair(edges, free)
        if swap is None:
            for a in edges[out]:
                owner[a] = out
            continue

        chosen.pop(slot)
        added = _greedy_order(edges, list(swap) + free, owner)
        chosen.extend(added)
        improvements += len(added) - 1

    logger.debug("local search: %d improvements over %d attempts", improvements, budget)
    return Packing(
        cycles=tuple(_cycle_refs(universe, edges[e]) for e in chosen),
        method=PackMethod.LOCAL,
    )


def _disjoint_pair(edges: list[list[int]], candidates: list[int]) -> tuple[int, int] | None:
    for pos, first in enumerate(candidates):
        arcs_first = set(edges[first])
        for second in candidates[pos + 1 :]:
            if arcs_first.isdisjoint(edges[second]):
                return first, second
    return None


def color_pack(
    G: BipartiteTournament, seed: int = 0, hypergraph: C4Hypergraph | None = None
) -> Packing:
    """Largest color class of a greedy proper edge coloring of the C4 hypergraph.

    Edges are colored in a seeded random order, each taking the least color
    not already used on one of its arcs.
    """
    H, universe = _prepare(G, hypergraph)
    edges = H.edges.tolist()
    order = make_rng(seed).permutation(len(edges)).tolist()
    at_arc: list[set[int]] = [set() for _ in range(H.num_vertices)]
    color_of: dict[int, int] = {}
    for e in order:
        taken = set().union(*(at_arc[a] for a in edges[e]))
        color = 0
        while color in taken:
            color += 1
        color_of[e] = color
        for a in edges[e]:
            at_arc[a].add(color)

    colors_used = max(color_of.values(), default=-1) + 1
    if colors_used == 0:
        return Packing(cycles=(), method=PackMethod.COLOR, colors_used=0)
    sizes = np.bincount(list(color_of.values()), minlength=colors_used)
    best = int(np.argmax(sizes))
    logger.debug("color pack: %d colors, max degree %d", colors_used, H.max_degree)
    return Packing(
        cycles=tuple(_cycle_refs(universe, edges[e]) for e in order if color_of[e] == best),
        method=PackMethod.COLOR,
        colors_used=colors_used,
    )


class _BudgetExhausted(Exception):
    pass


def exact_max_pack(
    G: BipartiteTournament,
    limits: Limits | None = None,
    seed: int = 0,
    hypergraph: C4Hypergraph | None = None,
) -> Packing:
    """Maximum C4 packing by branch and bound over the C4 hypergraph.

    The search branches on the lowest arc still coverable: either one of the
    available C4s through it is taken, or the arc is left unused. A node is
    pruned when the available C4s, or the arcs they cover divided by four,
    cannot beat the incumbent.
    """
    limits = limits or Limits()
    H, universe = _prepare(G, hypergraph)
    edges = H.edges.tolist()
    incumbent = local_search_pack(G, seed, budget=len(edges), hypergraph=H)

    if len(edges) > limits.max_edges:
        raise ResourceError(
            f"{len(edges)} C4s exceed the exact-search limit of {limits.max_edges}",
            partial=Packing(incumbent.cycles, PackMethod.EXACT, certified_optimal=False),
        )

    masks = [sum(1 << a for a in edge) for edge in edges]
    index_of = {tuple(cycle_arc.index for cycle_arc in c): c for c in incumbent.cycles}
    best: list[int] = [e for e, edge in enumerate(edges) if tuple(edge) in index_of]
    nodes = 0

    def search(available: list[int], blocked: int, chosen: list[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > limits.max_search_nodes:
            raise _BudgetExhausted
        if len(chosen) > len(best):
            best = list(chosen)
        if not available:
            return
        cover = 0
        for e in available:
            cover |= masks[e]
        if len(chosen) + min(len(available), cover.bit_count() // 4) <= len(best):
            return

        low = cover & -cover
        for e in available:
            if masks[e] & low:
                taken = blocked | masks[e]
                rest = [f for f in available if not masks[f] & taken]
                search(rest, taken, chosen + [e])
        blocked |= low
        search([f for f in available if not masks[f] & low], blocked, chosen)

    try:
        search(list(range(len(edges))), 0, [])
    except _BudgetExhausted:
        raise ResourceError(
            f"exact search exceeded {limits.max_search_nodes} nodes",
            partial=Packing(
                tuple(_cycle_refs(universe, edges[e]) for e in best),
                PackMethod.EXACT,
                certified_optimal=False,
            ),
        ) from None

    logger.debug("exact pack: optimum %d after %d nodes", len(best), nodes)
    return Packing(
        cycles=tuple(_cycle_refs(universe, edges[e]) for e in best),
        method=PackMethod.EXACT,
        certified_optimal=True,
    )


def verify_packing(host: Host, packing: Packing) -> None:
    """Re-check a packing against the raw host; raise CertificateError on any defect"""
    universe = arcs(host)
    seen: set[int] = set()
    for pos, cycle in enumerate(packing.cycles):
        if len(cycle) != 4:
            raise CertificateError(f"cycle {pos} has {len(cycle)} arcs")
        for arc in cycle:
            if not 0 <= arc.index < len(universe) or universe[arc.index] != arc:
                raise CertificateError(f"cycle {pos}: {arc} is not an arc of the host")
            if arc.index in seen:
                raise CertificateError(f"arc {arc.index} is used twice")
            seen.add(arc.index)
        for s in range(4):
            if cycle[s].head != cycle[(s + 1) % 4].tail:
                raise CertificateError(f"cycle {pos} is not a directed closed walk")
        if len({arc.tail for arc in cycle}) != 4:
            raise CertificateError(f"cycle {pos} repeats a vertex")
        if isinstance(host, BipartiteTournament):
            sides = [arc.tail < host.m for arc in cycle]
            if sides != [sides[0], not sides[0]] * 2:
                raise CertificateError(f"cycle {pos} does not alternate between the classes")
    if packing.size > len(universe) // 4:
        raise CertificateError(f"{packing.size} cycles exceed the {len(universe) // 4} cap")


Arc = tuple[Hashable, Hashable]


@dataclass(frozen=True)
class Decomposition:
    """Arc-disjoint directed cycles (as arc sequences) covering every arc once"""

    cycles: tuple[tuple[Arc, ...], ...]
    certified_optimal: bool

    @property
    def q(self) -> int:
        return len(self.cycles)


def _require_balanced(D: nx.DiGraph) -> None:
    for v in D.nodes:
        if D.in_degree(v) != D.out_degree(v):
            raise DomainError(
                f"vertex {v!r} has in-degree {D.in_degree(v)} and out-degree {D.out_degree(v)}"
            )


def max_cycle_decomposition(D: nx.DiGraph, limits: Limits | None = None) -> Decomposition:
    """Decompose a balanced digraph into the most cycles.

    Up to ``limits.max_arcs`` arcs the search is exhaustive and certified:
    it branches on every simple cycle through the least remaining arc. Larger
    inputs peel off globally shortest cycles and are not certified. Node
    labels must be mutually orderable.
    """
    limits = limits or Limits()
    _require_balanced(D)
    arc_list = sorted(D.edges())
    if not arc_list:
        return Decomposition((), certified_optimal=True)
    if len(arc_list) > limits.max_arcs:
        return _shortest_first(D, arc_list)
    try:
        return _exact_decomposition(D, arc_list, limits)
    except _BudgetExhausted:
        raise ResourceError(
            f"exact decomposition exceeded {limits.max_search_nodes} nodes",
            partial=_shortest_first(D, arc_list),
        ) from None


def _oriented_bipartite(D: nx.DiGraph) -> bool:
    return nx.is_bipartite(D) and not any(D.has_edge(v, u) for u, v in D.edges)


def _exact_decomposition(D: nx.DiGraph, arc_list: list[Arc], limits: Limits) -> Decomposition:
    girth = 4 if _oriented_bipartite(D) else 2
    index = {arc: i for i, arc in enumerate(arc_list)}
    out_arcs: dict[Hashable, list[tuple[Hashable, int]]] = {v: [] for v in D.nodes}
    for (tail, head), i in index.items():
        out_arcs[tail].append((head, i))

    def cycles_through(first: int, remaining: int):
        tail, head = arc_list[first]
        path = [first]
        visited = {head}

        def walk(v):
            for w, i in out_arcs[v]:
                if not remaining >> i & 1:
                    continue
                if w == tail:
                    yield path + [i]
                elif w not in visited:
                    visited.add(w)
                    path.append(i)
                    yield from walk(w)
                    path.pop()
                    visited.discard(w)

        yield from walk(head)

    memo: dict[int, tuple[int, tuple[tuple[int, ...], ...]]] = {}
    nodes = 0

    def best(remaining: int) -> tuple[int, tuple[tuple[int, ...], ...]]:
        nonlocal nodes
        if remaining == 0:
            return 0, ()
        if remaining in memo:
            return memo[remaining]
        nodes += 1
        if nodes > limits.max_search_nodes:
            raise _BudgetExhausted
        ceiling = remaining.bit_count() // girth
        first = (remaining & -remaining).bit_length() - 1
        top: tuple[int, tuple[tuple[int, ...], ...]] = (-1, ())
        for cycle in cycles_through(first, remaining):
            mask = sum(1 << i for i in cycle)
            rest = remaining & ~mask
            if 1 + rest.bit_count() // girth <= top[0]:
                continue
            count, chosen = best(rest)
            if count + 1 > top[0]:
                top = (count + 1, (tuple(cycle),) + chosen)
                if top[0] == ceiling:
                    break
        if top[0] < 0:
            raise DomainError("balanced digraph has an arc on no cycle")
        memo[remaining] = top
        return top

    count, chosen = best((1 << len(arc_list)) - 1)
    logger.debug("exact decomposition: q=%d over %d arcs, %d states", count, len(arc_list), nodes)
    return Decomposition(
        cycles=tuple(tuple(arc_list[i] for i in cycle) for cycle in chosen),
        certified_optimal=True,
    )


def _shortest_first(D: nx.DiGraph, arc_list: list[Arc]) -> Decomposition:
    rest = nx.DiGraph()
    rest.add_edges_from(arc_list)
    cycles = []
    while rest.number_of_edges():
        shortest = None
        for tail, head in sorted(rest.edges()):
            try:
                back = nx.shortest_path(rest, head, tail)
            except nx.NetworkXNoPath:
                continue
            # back runs head -> ... -> tail, so the cycle has len(back) vertices
            if shortest is None or len(back) < len(shortest):
                shortest = [tail] + back[:-1]
            if len(shortest) == 2:
                break
        if shortest is None:
            raise DomainError("balanced digraph has an arc on no cycle")
        cycle = tuple(zip(shortest, shortest[1:] + shortest[:1]))
        rest.remove_edges_from(cycle)
        cycles.append(cycle)
    return Decomposition(tuple(cycles), certified_optimal=False)


def verify_decomposition(D: nx.DiGraph, decomposition: Decomposition) -> None:
    """Check that ``decomposition`` partitions the arcs of ``D`` into directed cycles"""
    expected = set(D.edges())
    seen: set[Arc] = set()
    bipartite = _oriented_bipartite(D)
    for pos, cycle in enumerate(decomposition.cycles):
        if len(cycle) < 2:
            raise CertificateError(f"cycle {pos} is too short")
        for s, arc in enumerate(cycle):
            if arc not in expected:
                raise CertificateError(f"cycle {pos}: {arc} is not an arc of the digraph")
            if arc in seen:
                raise CertificateError(f"arc {arc} is covered twice")
            seen.add(arc)
            if arc[1] != cycle[(s + 1) % len(cycle)][0]:
                raise CertificateError(f"cycle {pos} is not a directed closed walk")
        if len({arc[0] for arc in cycle}) != len(cycle):
            raise CertificateError(f"cycle {pos} repeats a vertex")
        if bipartite and (len(cycle) % 2 or len(cycle) < 4):
            raise CertificateError(f"cycle {pos} has length {len(cycle)} in a bipartite digraph")
    if seen != expected:
        raise CertificateError(f"{len(expected - seen)} arcs are not covered")
