"""
Exact 4-cycle census of bipartite orientations.

Every 2+2 vertex subset {a_i, a_j, b_k, b_l} induces an orientation of an
undirected 4-cycle. It is either a directed C4 (counted in ``x``) or one of
three non-cyclic orientations H1, H2, H3, told apart by the length of their
longest directed path. The 16 possible sign patterns are classified once by
brute force on the induced digraph; the subset scan then only tallies
pattern codes.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CertificateError
from .model import ArcRef, BipartiteTournament, bipartite_arc, require_eulerian, validate_bipartite

logger = logging.getLogger(__name__)

BALANCE_POINT = 1 / 8 - math.sqrt(1 / 128)
PACKING_CONSTANT = (2 - math.sqrt(2)) / 4
TOURNAMENT_CONSTANT = 1 / (8 + math.sqrt(32))
ANTIPODAL_CONSTANT = math.sqrt(2) / 4

CYCLIC = 0


@dataclass(frozen=True)
class PatternClass:
    kind: int  # 0 for C4, otherwise the longest path length
    sources: int


@lru_cache(maxsize=None)
def classify_pattern(code: int) -> PatternClass:
    """Classify the 4-vertex orientation with sign pattern ``code``.

    Vertices are 0=a_i, 1=a_j, 2=b_k, 3=b_l; bit 0..3 of ``code`` is set when
    (i,k), (i,l), (j,k), (j,l) respectively point from A to B.
    """
    arcs = set()
    for bit, (a, b) in enumerate(((0, 2), (0, 3), (1, 2), (1, 3))):
        arcs.add((a, b) if code >> bit & 1 else (b, a))

    out_deg = [sum(1 for t, _ in arcs if t == v) for v in range(4)]
    in_deg = [sum(1 for _, h in arcs if h == v) for v in range(4)]
    sources = sum(1 for v in range(4) if in_deg[v] == 0)
    if all(o == 1 and i == 1 for o, i in zip(out_deg, in_deg)):
        return PatternClass(CYCLIC, sources)

    longest = 0
    for length in range(1, 4):
        for path in itertools.permutations(range(4), length + 1):
            if all((path[s], path[s + 1]) in arcs for s in range(length)):
                longest = length
                break
    return PatternClass(longest, sources)


@dataclass(frozen=True)
class Census:
    m: int
    n: int
    x: int
    h1: int
    h2: int
    h3: int
    t: int
    eulerian: bool

    @property
    def subsets(self) -> int:
        return math.comb(self.m, 2) * math.comb(self.n, 2)

    def residuals(self) -> dict[str, int]:
        """Left minus right side of each counting identity (all zero when they hold)"""
        m, n = self.m, self.n
        out = {
            "subsets": self.x + self.h1 + self.h2 + self.h3 - self.subsets,
            "sources": 2 * self.h1 + self.h2 + self.h3 - self.t,
        }
        if self.eulerian:
            out["cyclic_excess"] = (self.x - self.h1) - (m * n // 4) * (m // 2 + n // 2 - 1)
            out["source_total"] = self.t - (
                n * (n - 1) * math.comb(m // 2, 2) + m * (m - 1) * math.comb(n // 2, 2)
            )
        return out

    @property
    def identities_ok(self) -> bool:
        return all(v == 0 for v in self.residuals().values())


def _pair_index(size: int) -> tuple[np.ndarray, np.ndarray]:
    first, second = np.triu_indices(size, k=1)
    return first, second


def four_cycle_census(G: BipartiteTournament) -> Census:
    """Count C4, H1, H2, H3 and sources over all 2+2 subsets of ``G``"""
    report = validate_bipartite(G)
    plus = (G.orient == 1).astype(np.int64)
    k_idx, l_idx = _pair_index(G.n)

    tally = np.zeros(16, dtype=np.int64)
    for i, j in zip(*_pair_index(G.m)):
        codes = plus[i, k_idx] | plus[i, l_idx] << 1 | plus[j, k_idx] << 2 | plus[j, l_idx] << 3
        tally += np.bincount(codes, minlength=16)

    counts = {CYCLIC: 0, 1: 0, 2: 0, 3: 0}
    sources = 0
    for code, amount in enumerate(tally.tolist()):
        cls = classify_pattern(code)
        counts[cls.kind] += amount
        sources += cls.sources * amount

    census = Census(
        m=G.m,
        n=G.n,
        x=counts[CYCLIC],
        h1=counts[1],
        h2=counts[2],
        h3=counts[3],
        t=sources,
        eulerian=report.is_eulerian,
    )
    fast = fast_four_cycle_count(G)
    if fast != census.x:
        raise CertificateError(f"subset scan found {census.x} C4s, co-degree count {fast}")
    logger.debug("census of K_{%d,%d}: %s", G.m, G.n, census)
    return census


def fast_four_cycle_count(G: BipartiteTournament) -> int:
    """Number of C4 copies from co-neighbourhood products, O(m^2 n)"""
    plus = (G.orient == 1).astype(np.int64)
    minus = 1 - plus
    split = plus @ minus.T
    return int((split * split.T).sum()) // 2


@dataclass(frozen=True, eq=False)
class CoDegreeTable:
    """Common out/in neighbour counts and C4 counts for all same-class pairs.

    Matrices are indexed by class-local positions; ``k(u, v)`` takes global ids.
    """

    m: int
    n: int
    out_a: np.ndarray
    in_a: np.ndarray
    out_b: np.ndarray
    in_b: np.ndarray
    c4_a: np.ndarray
    c4_b: np.ndarray
    eulerian: bool

    def k(self, u: int, v: int) -> int:
        if u < self.m and v < self.m:
            return int(self.out_a[u, v])
        if u >= self.m and v >= self.m:
            return int(self.out_b[u - self.m, v - self.m])
        raise ValueError("co-degree is defined for same-class pairs only")

    def c4_through(self, u: int, v: int) -> int:
        if u < self.m and v < self.m:
            return int(self.c4_a[u, v])
        if u >= self.m and v >= self.m:
            return int(self.c4_b[u - self.m, v - self.m])
        raise ValueError("pair counts are defined for same-class pairs only")

    def pairs(self):
        """(u, v, k_uv) for every same-class pair, A pairs first"""
        for i, j in zip(*_pair_index(self.m)):
            yield int(i), int(j), int(self.out_a[i, j])
        for i, j in zip(*_pair_index(self.n)):
            yield self.m + int(i), self.m + int(j), int(self.out_b[i, j])

    @property
    def in_out_symmetric(self) -> bool:
        return bool(np.array_equal(self.out_a, self.in_a) and np.array_equal(self.out_b, self.in_b))

    @property
    def pair_formula_ok(self) -> bool | None:
        """C4s through a pair equal (half-degree - k)^2; None when not Eulerian"""
        if not self.eulerian:
            return None
        iu, ju = _pair_index(self.m)
        ib, jb = _pair_index(self.n)
        a_ok = np.array_equal(self.c4_a[iu, ju], (self.n // 2 - self.out_a[iu, ju]) ** 2)
        b_ok = np.array_equal(self.c4_b[ib, jb], (self.m // 2 - self.out_b[ib, jb]) ** 2)
        return bool(a_ok and b_ok)

    def pair_sum(self) -> int:
        """Sum over same-class pairs of (half-degree - k)^2 + 2*C(k, 2) (Eulerian hosts)"""
        total = 0
        sides = ((self.m, self.n // 2, self.out_a), (self.n, self.m // 2, self.out_b))
        for size, half, table in sides:
            k = table[_pair_index(size)]
            total += int(((half - k) ** 2 + k * (k - 1)).sum())
        return total


def codegree_table(G: BipartiteTournament) -> CoDegreeTable:
    report = validate_bipartite(G)
    plus = (G.orient == 1).astype(np.int64)
    minus = 1 - plus
    split_a = plus @ minus.T
    split_b = minus.T @ plus
    table = CoDegreeTable(
        m=G.m,
        n=G.n,
        out_a=plus @ plus.T,
        in_a=minus @ minus.T,
        out_b=minus.T @ minus,
        in_b=plus.T @ plus,
        c4_a=split_a * split_a.T,
        c4_b=split_b * split_b.T,
        eulerian=report.is_eulerian,
    )
    if table.eulerian and not (table.pair_formula_ok and table.in_out_symmetric):
        raise CertificateError("co-degree identities fail on an Eulerian orientation")
    return table


def pair_identity_holds(census: Census, table: CoDegreeTable) -> bool:
    """2x + 2h1 equals the co-degree pair sum"""
    return 2 * census.x + 2 * census.h1 == table.pair_sum()


def enumerate_four_cycles(G: BipartiteTournament) -> np.ndarray:
    """All C4 copies as rows of 4 arc indices in cycle order.

    Each cycle a_i -> b_k -> a_j -> b_l -> a_i (i < j) is listed once, starting
    from the arc leaving a_i; rows are ordered by (i, j, k, l).
    """
    validate_bipartite(G)
    orient = G.orient
    n = G.n
    blocks = []
    for i, j in zip(*_pair_index(G.m)):
        ks = np.flatnonzero((orient[i] == 1) & (orient[j] == -1))
        ls = np.flatnonzero((orient[i] == -1) & (orient[j] == 1))
        if not len(ks) or not len(ls):
            continue
        kk, ll = np.meshgrid(ks, ls, indexing="ij")
        kk, ll = kk.ravel(), ll.ravel()
        blocks.append(np.stack([i * n + kk, j * n + kk, j * n + ll, i * n + ll], axis=1))
    if not blocks:
        return np.zeros((0, 4), dtype=np.int64)
    return np.concatenate(blocks).astype(np.int64)


@dataclass(frozen=True, eq=False)
class ArcProfile:
    """Per-arc C4 degrees ``d`` (m x n, indexed like the orientation) and balance measures"""

    m: int
    n: int
    d: np.ndarray
    alpha: np.ndarray
    alpha_scaled: np.ndarray  # 4mn * alpha, exact
    alpha_g: float
    argmin_arc: ArcRef
    d_max: int
    argmax_arc: ArcRef

    @property
    def alpha_g_scaled(self) -> int:
        return int(self.alpha_scaled.min())


def arc_profile(G: BipartiteTournament, cycles: np.ndarray | None = None) -> ArcProfile:
    """d(e), alpha(e) and alpha(G) for an Eulerian orientation.

    d(e) for e = (x, y) counts arcs from N+(y) to N-(x); it is cross-checked
    against the number of enumerated C4s through e.
    """
    require_eulerian(G)
    mn = G.m * G.n
    plus = (G.orient == 1).astype(np.int64)
    minus = 1 - plus
    d = np.where(G.orient == 1, minus @ plus.T @ minus, plus @ minus.T @ plus)

    if cycles is None:
        cycles = enumerate_four_cycles(G)
    through = np.bincount(cycles.ravel(), minlength=mn).reshape(G.m, G.n)
    if not np.array_equal(through, d):
        raise CertificateError("arc C4 degrees disagree with the C4 enumeration")

    alpha_scaled = np.minimum(4 * d, mn - 4 * d)
    flat_min = int(np.argmin(alpha_scaled))
    flat_max = int(np.argmax(d))
    return ArcProfile(
        m=G.m,
        n=G.n,
        d=d,
        alpha=alpha_scaled / (4 * mn),
        alpha_scaled=alpha_scaled,
        alpha_g=float(alpha_scaled.flat[flat_min]) / (4 * mn),
        argmin_arc=bipartite_arc(G, *divmod(flat_min, G.n)),
        d_max=int(d.flat[flat_max]),
        argmax_arc=bipartite_arc(G, *divmod(flat_max, G.n)),
    )


def balanced_objective(z: float) -> float:
    """max{(1/32)/(1/4 - z), (1/16 - z + 4z^2)/(1/4 - z)}, minimal at BALANCE_POINT"""
    denom = 0.25 - z
    if denom <= 0:
        return math.inf
    return max((1 / 32) / denom, (1 / 16 - z + 4 * z * z) / denom)


@dataclass(frozen=True)
class BoundReport:
    x: int
    bound_l21: float
    bound_l21_sharp: float
    bound_l22: float
    effective_bound: float
    satisfied_l21: bool
    satisfied_l21_sharp: bool
    satisfied_l22: bool
    satisfied: bool
    alpha_g: float
    d_max: int
    max_arc_ok: bool
    objective_at_alpha_g: float
    objective_at_max_arc: float
    packing_estimate: float
    packing_target: float
    balance_point: float = BALANCE_POINT
    balanced_minimum: float = PACKING_CONSTANT


def evaluate_bounds(
    G: BipartiteTournament,
    census: Census | None = None,
    profile: ArcProfile | None = None,
) -> BoundReport:
    """Evaluate both C4 lower bounds and the balanced packing objective for ``G``"""
    require_eulerian(G)
    census = census or four_cycle_census(G)
    profile = profile or arc_profile(G)
    m, n = G.m, G.n
    mn = m * n
    sq = mn * mn
    x = census.x
    a = profile.alpha_g_scaled

    l22 = Fraction(sq - 4 * mn * a + 4 * a * a, 16)
    sharp = Fraction(
        2 * math.comb(m, 2) * (n * n - 2 * n - 1)
        + 2 * math.comb(n, 2) * (m * m - 2 * m - 1)
        + 4 * mn * (m + n - 2),
        64,
    )
    ok_l21 = 32 * x >= sq
    ok_l22 = x >= l22
    bound_l21 = sq / 32
    effective = max(bound_l21, float(l22))
    return BoundReport(
        x=x,
        bound_l21=bound_l21,
        bound_l21_sharp=float(sharp),
        bound_l22=float(l22),
        effective_bound=effective,
        satisfied_l21=ok_l21,
        satisfied_l21_sharp=x >= sharp,
        satisfied_l22=bool(ok_l22),
        satisfied=bool(ok_l21 and ok_l22),
        alpha_g=profile.alpha_g,
        d_max=profile.d_max,
        max_arc_ok=8 * profile.d_max >= mn,
        objective_at_alpha_g=balanced_objective(profile.alpha_g),
        objective_at_max_arc=balanced_objective(0.25 - profile.d_max / mn),
        packing_estimate=effective / profile.d_max if profile.d_max else 0.0,
        packing_target=mn * PACKING_CONSTANT,
    )
