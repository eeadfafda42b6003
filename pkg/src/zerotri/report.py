"""Reduction reports: configuration, tallies, and flags for one driver run.

Reports serialize to canonical JSON.  Wall-clock figures are only filled
in when timing is explicitly enabled, so default report files are
byte-deterministic for a fixed seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


@dataclass
class ReductionReport:
    seed: int = 0
    t: float | None = None
    p: int | None = None
    q: int | None = None
    stage_edges: dict = field(default_factory=dict)
    degree_max: dict = field(default_factory=dict)
    false_positives: int | None = None
    oracle_calls: dict = field(default_factory=dict)
    wall_ms: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def bump(self, key: str, amount: int = 1) -> None:
        self.oracle_calls[key] = self.oracle_calls.get(key, 0) + amount

    def add_edges(self, stage: str, count: int) -> None:
        self.stage_edges[stage] = self.stage_edges.get(stage, 0) + count

    def note_degree(self, stage: str, degree: int) -> None:
        if degree > self.degree_max.get(stage, -1):
            self.degree_max[stage] = degree

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "t": self.t,
            "p": self.p,
            "q": self.q,
            "stage_edges": dict(sorted(self.stage_edges.items())),
            "degree_max": dict(sorted(self.degree_max.items())),
            "false_positives": self.false_positives,
            "oracle_calls": dict(sorted(self.oracle_calls.items())),
            "wall_ms": dict(sorted(self.wall_ms.items())),
            "flags": dict(sorted(self.flags.items())),
            "extra": dict(sorted(self.extra.items())),
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())
