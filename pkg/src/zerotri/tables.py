"""Result tables shared between the oracles and the reductions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class EdgeFlagTable:
    """Per-edge triangle membership flags, keyed by (u, v) with u < v."""

    flags: dict

    def get(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return self.flags[(u, v)]

    def any(self) -> bool:
        return any(self.flags.values())

    def __len__(self) -> int:
        return len(self.flags)


@dataclass(frozen=True)
class NodeFlagTable:
    """Per-node triangle membership flags, aligned to global node ids."""

    flags: tuple

    def get(self, gid: int) -> bool:
        return self.flags[gid]

    def any(self) -> bool:
        return any(self.flags)

    def __len__(self) -> int:
        return len(self.flags)


@dataclass(frozen=True)
class WitnessTable:
    """Near-zero witness table: (a, b) -> (c, s) with s the triple sum.

    An absent key means no witness exists for that pair within tolerance.
    """

    entries: dict
    tol: int = 3

    def get(self, a: int, b: int):
        return self.entries.get((a, b))

    def has(self, a: int, b: int) -> bool:
        return (a, b) in self.entries

    def existence(self) -> set:
        return set(self.entries)

    def to_canonical_json(self) -> str:
        rows = [[a, b, c, s] for (a, b), (c, s) in sorted(self.entries.items())]
        return json.dumps({"tol": self.tol, "rows": rows},
                          sort_keys=True, separators=(",", ":")) + "\n"

    def __len__(self) -> int:
        return len(self.entries)
