"""Coarsest symmetric block partition and the reduced matrix ``red(A)``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .sign_algebra import SignMatrix


@dataclass(frozen=True)
class BlockPartition:
    """Consecutive half-open index ranges covering ``0..n-1``."""

    boundaries: tuple

    def __post_init__(self):
        prev = 0
        for a, b in self.boundaries:
            if a != prev or b <= a:
                raise ValueError(f"ranges must be nonempty and consecutive: {self.boundaries}")
            prev = b

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> "BlockPartition":
        out, acc = [], 0
        for s in sizes:
            out.append((acc, acc + s))
            acc += s
        return cls(tuple(out))

    @property
    def sizes(self) -> tuple:
        return tuple(b - a for a, b in self.boundaries)

    @property
    def n(self) -> int:
        return self.boundaries[-1][1] if self.boundaries else 0

    def __len__(self) -> int:
        return len(self.boundaries)


@dataclass(frozen=True)
class ReducedMatrix:
    entries: SignMatrix
    class_sizes: tuple

    @property
    def m(self) -> int:
        return self.entries.n


def coarsest_partition(A: SignMatrix) -> BlockPartition:
    """Merge each index into its predecessor's class when both the rows and
    the columns of the two indices coincide."""
    n = A.n
    if not A.is_proper():
        raise ValueError("coarsest partition is defined here for proper patterns only")
    if n == 0:
        return BlockPartition(())
    ranges = []
    start = 0
    for p in range(1, n):
        if A.row(p) != A.row(p - 1) or A.column(p) != A.column(p - 1):
            ranges.append((start, p))
            start = p
    ranges.append((start, n))
    return BlockPartition(tuple(ranges))


def red(A: SignMatrix) -> ReducedMatrix:
    part = coarsest_partition(A)
    firsts = [a for a, _ in part.boundaries]
    return ReducedMatrix(A.submatrix(firsts), part.sizes)


def expand(R, sizes: Sequence[int] = None) -> SignMatrix:
    """Blow each entry of ``R`` up to a constant block of the given class sizes.

    ``R`` is either a :class:`ReducedMatrix` or a square pattern together
    with explicit ``sizes``.
    """
    if isinstance(R, ReducedMatrix):
        M, sizes = R.entries, R.class_sizes if sizes is None else sizes
    else:
        M = R
    if sizes is None:
        raise ValueError("class sizes required")
    sizes = tuple(sizes)
    if len(sizes) != M.n or any(s < 1 for s in sizes):
        raise ValueError(f"need {M.n} positive class sizes, got {sizes}")
    owner = [c for c, s in enumerate(sizes) for _ in range(s)]
    return M.submatrix(owner)
