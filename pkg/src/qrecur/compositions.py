"""Integer compositions, the index set for operator words and polynomials.

A composition is a nonempty ordered sequence of positive integers.
Order matters everywhere in this package (the operator words they index
do not commute), so equality is sequence equality and no partition-style
normalization ever happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence


@dataclass(frozen=True, order=True)
class Composition:
    """Nonempty sequence of positive integers."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("composition must be nonempty")
        if any(e < 1 for e in self.entries):
            raise ValueError(f"composition entries must be >= 1: {self.entries}")

    @staticmethod
    def of(*entries: int) -> "Composition":
        return Composition(tuple(entries))

    @staticmethod
    def parse(text: str) -> "Composition":
        """Parse the comma-joined serialization, e.g. ``"1,2,1"``."""
        try:
            entries = tuple(int(part) for part in text.split(","))
        except ValueError as exc:
            raise ValueError(f"unparseable composition {text!r}") from exc
        return Composition(entries)

    @property
    def size(self) -> int:
        return sum(self.entries)

    @property
    def length(self) -> int:
        return len(self.entries)

    @property
    def last(self) -> int:
        return self.entries[-1]

    def serialize(self) -> str:
        return ",".join(str(e) for e in self.entries)

    def __str__(self) -> str:
        return "(" + self.serialize() + ")"

    def __add__(self, other: "Composition") -> "Composition":
        return Composition(self.entries + other.entries)

    def canonical_key(self) -> tuple[int, int, tuple[int, ...]]:
        """Sort key for the canonical order: size, then length, then lex."""
        return (self.size, self.length, self.entries)


def enumerate_compositions(size: int) -> list[Composition]:
    """All 2^(size-1) compositions of ``size`` in canonical order.

    Canonical order is ascending length with lexicographic tie-break on
    entries, so the output is deterministic across runs.
    """
    if size <= 0:
        raise ValueError(f"composition size must be >= 1, got {size}")
    out = []
    positions = list(range(1, size))
    for r in range(len(positions) + 1):
        for cuts in combinations(positions, r):
            bounds = [0, *cuts, size]
            out.append(
                Composition(tuple(b - a for a, b in zip(bounds, bounds[1:])))
            )
    out.sort(key=Composition.canonical_key)
    return out


def iter_compositions_up_to(max_size: int) -> Iterator[Composition]:
    """Compositions of every size from 1 to ``max_size``, canonically."""
    for size in range(1, max_size + 1):
        yield from enumerate_compositions(size)


def subdivisions(comp: Composition) -> list[list[Composition]]:
    """All 2^(length-1) splittings of ``comp`` into consecutive blocks.

    Concatenating the blocks of any returned subdivision reproduces the
    input exactly.
    """
    entries = comp.entries
    out = []
    positions = list(range(1, len(entries)))
    for r in range(len(positions) + 1):
        for cuts in combinations(positions, r):
            bounds = [0, *cuts, len(entries)]
            out.append(
                [Composition(entries[a:b]) for a, b in zip(bounds, bounds[1:])]
            )
    return out


def split_last(comp: Composition) -> tuple[Optional[Composition], int]:
    """Split off the final entry: (J, k) with comp = (J, k).

    For a single-entry composition the leading part is None (the empty
    marker).
    """
    if comp.length == 1:
        return None, comp.entries[0]
    return Composition(comp.entries[:-1]), comp.entries[-1]


def prefix_splits(comp: Composition) -> list[tuple[Composition, Composition]]:
    """All splits comp = (prefix | suffix) with both parts nonempty.

    Returned in order of increasing prefix length; empty for length 1.
    """
    entries = comp.entries
    return [
        (Composition(entries[:i]), Composition(entries[i:]))
        for i in range(1, len(entries))
    ]


def concat(parts: Sequence[Composition]) -> Composition:
    entries: tuple[int, ...] = ()
    for part in parts:
        entries += part.entries
    return Composition(entries)
