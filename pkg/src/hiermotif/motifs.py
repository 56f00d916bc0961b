"""The five three- and four-node motifs used as generative units.

Node indices run 1..q in the letter order a, b, c, d.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Union


class MotifId(str, enum.Enum):
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"
    M5 = "M5"

    @classmethod
    def parse(cls, value: Union[str, "MotifId"]) -> "MotifId":
        if isinstance(value, MotifId):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(
                f"unknown motif {value!r}; expected one of m1..m5"
            ) from None


@dataclass(frozen=True)
class MotifSpec:
    id: MotifId
    q: int
    edges: tuple[tuple[int, int], ...]

    @property
    def r(self) -> int:
        return len(self.edges)

    @property
    def base_degrees(self) -> tuple[int, ...]:
        """Degree of each motif node, in node order 1..q."""
        deg = [0] * self.q
        for i, j in self.edges:
            deg[i - 1] += 1
            deg[j - 1] += 1
        return tuple(deg)

    @property
    def is_regular(self) -> bool:
        return len(set(self.base_degrees)) == 1

    @property
    def is_complete(self) -> bool:
        return self.r == self.q * (self.q - 1) // 2


_EDGES = {
    # triangle a, b, c
    MotifId.M1: ((1, 2), (1, 3), (2, 3)),
    # triangle a, b, c with pendant d hanging off c
    MotifId.M2: ((1, 2), (1, 3), (2, 3), (3, 4)),
    # square a-b-c-d
    MotifId.M3: ((1, 2), (2, 3), (3, 4), (1, 4)),
    # square a-b-c-d with diagonal a-c
    MotifId.M4: ((1, 2), (1, 3), (2, 3), (3, 4), (1, 4)),
    MotifId.M5: tuple(combinations(range(1, 5), 2)),
}

_CATALOG = {
    mid: MotifSpec(mid, 3 if mid is MotifId.M1 else 4, edges)
    for mid, edges in _EDGES.items()
}


def get_motif(motif: Union[str, MotifId, MotifSpec]) -> MotifSpec:
    if isinstance(motif, MotifSpec):
        return motif
    return _CATALOG[MotifId.parse(motif)]


def all_motifs() -> list[MotifSpec]:
    return [_CATALOG[m] for m in MotifId]
