"""
JSON run reports.

Every subcommand wraps its payload in a :class:`RunReport`. Floats are cut to
12 significant digits and keys are sorted, so identical inputs and seeds give
byte-identical output once the wall time is dropped.
"""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import math
from collections.abc import Iterable
from pathlib import Path
from typing import Any

import numpy as np

from ._version import __version__
from .config import RNG_ALGORITHM

SIGNIFICANT_DIGITS = 12


def to_jsonable(value: Any) -> Any:
    """Plain JSON types for payload values; non-finite floats become None"""
    if isinstance(value, enum.Enum):
        return to_jsonable(value.value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    return value


def input_digest(contents: Iterable[bytes]) -> str | None:
    """sha256 over the sha256 of each input, in order"""
    outer = hashlib.sha256()
    count = 0
    for blob in contents:
        outer.update(hashlib.sha256(blob).digest())
        count += 1
    return outer.hexdigest() if count else None


def digest_files(paths: Iterable[str | Path]) -> str | None:
    return input_digest(Path(p).read_bytes() for p in paths)


@dataclasses.dataclass
class RunReport:
    subcommand: str
    payload: dict[str, Any]
    seeds: list[int] = dataclasses.field(default_factory=list)
    input_digest: str | None = None
    wall_time: float | None = None
    tool_version: str = __version__
    rng: str = RNG_ALGORITHM

    @property
    def passed(self) -> bool:
        return bool(self.payload.get("passed", True))

    def to_dict(self, include_wall_time: bool = True) -> dict[str, Any]:
        out = {
            "subcommand": self.subcommand,
            "input_digest": self.input_digest,
            "seeds": list(self.seeds),
            "tool_version": self.tool_version,
            "rng": self.rng,
            "payload": self.payload,
        }
        if include_wall_time:
            out["wall_time"] = self.wall_time
        return to_jsonable(out)

    def to_json(self, include_wall_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_wall_time), sort_keys=True, indent=2) + "\n"
