"""
Resource limits and sampler settings.

``Limits`` is immutable; the ``with_*`` methods return a modified copy so calls
can be chained::

    limits = Limits().with_max_edges(128).with_jobs(4)
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

RNG_ALGORITHM = "numpy.PCG64"

ENV_PREFIX = "CYCLEPACK_"


@dataclass(frozen=True)
class Limits:
    max_edges: int = 64
    max_arcs: int = 32
    max_class: int = 20000
    max_cells: int = 36
    max_search_nodes: int = 2_000_000
    jobs: int = 1

    def __post_init__(self):
        for name in ("max_edges", "max_arcs", "max_class", "max_cells", "max_search_nodes"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None) -> Limits:
        """Build limits from CYCLEPACK_* environment variables"""
        env = os.environ if environ is None else environ
        overrides = {}
        for field_name in ("jobs", "max_edges", "max_arcs", "max_class"):
            raw = env.get(ENV_PREFIX + field_name.upper())
            if raw is not None and raw.strip():
                try:
                    overrides[field_name] = int(raw)
                except ValueError as e:
                    raise ValueError(f"{ENV_PREFIX}{field_name.upper()} must be an integer") from e
        return cls(**overrides)

    def with_max_edges(self, max_edges: int) -> Limits:
        return replace(self, max_edges=max_edges)

    def with_max_arcs(self, max_arcs: int) -> Limits:
        return replace(self, max_arcs=max_arcs)

    def with_max_class(self, max_class: int) -> Limits:
        return replace(self, max_class=max_class)

    def with_max_cells(self, max_cells: int) -> Limits:
        return replace(self, max_cells=max_cells)

    def with_max_search_nodes(self, max_search_nodes: int) -> Limits:
        return replace(self, max_search_nodes=max_search_nodes)

    def with_jobs(self, jobs: int) -> Limits:
        return replace(self, jobs=jobs)


@dataclass(frozen=True)
class SamplerConfig:
    """Seed and number of attempted chain moves"""

    seed: int = 0
    steps: int = 0

    def __post_init__(self):
        if self.steps < 0:
            raise DomainError("steps must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        return make_rng(self.seed)


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Deterministic generator for ``seed``"""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_seeds(seed: int, count: int) -> list[int]:
    """Independent child seeds derived from ``seed``.

    Children are returned as plain 64-bit integers so they can be recorded in
    reports and passed to worker processes.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def default_steps_bipartite(m: int, n: int) -> int:
    return 20 * m * n


def default_steps_tournament(n: int) -> int:
    return 20 * n * n
