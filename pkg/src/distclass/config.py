"""Run configurations shared by the CLI and the experiment scripts."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .geometry import EPS

DEFAULT_OUT = "distclass_out"


def default_out() -> Path:
    return Path(os.environ.get("DISTCLASS_OUT", DEFAULT_OUT))


@dataclass(frozen=True)
class CatalogConfig:
    eps: float = EPS
    entries: tuple[int, ...] = tuple(range(1, 28))
    override: str | None = None  # JSON file whose entries replace the built-in ones


@dataclass(frozen=True)
class CandiConfig:
    eps: float = EPS
    seeds: tuple[int, ...] = tuple(range(1, 27))
    diff_paper: bool = False
    jobs: int = 1


@dataclass(frozen=True)
class GraphConfig:
    n: int = 12
    amax: int = 4
    budget: float | None = 1800.0
    sample_branches: int = 10**6
    sample_seed: int = 0


@dataclass(frozen=True)
class ClassifyConfig:
    target: int = 12
    seeds: tuple[int, ...] | None = None  # None: all 26 seeds plus the pentagon
    jobs: int = 1
    budget: float | None = None


@dataclass
class RunManifest:
    command: str
    parameters: dict
    version: str
    wall_clock_s: float = 0.0
    outcome: dict = field(default_factory=dict)
    digests: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)
