"""Single-pass construction of reduced upper-triangular sign idempotent patterns.

Cells are filled column by column (left to right) and, inside a column,
from the superdiagonal upwards.  Every cell is decided once; the choice at
``(i, j)`` only looks at already fixed cells.
"""

from __future__ import annotations

from typing import Sequence, Union

from .search import ALL, DepthFirstRun, Sample, Stuck, count_assignments  # noqa: F401
from .sign_algebra import AMB, MUL, PLUS, ZERO, Sign, SignMatrix


class InternalConsistencyError(AssertionError):
    """An ambiguous partial sum showed up on a prefix the builder produced."""


def parse_diag(diag: Union[str, Sequence]) -> tuple:
    if isinstance(diag, str):
        diag = [Sign.from_symbol(c) for c in diag.strip()]
    out = tuple(Sign.of(d) for d in diag)
    if not out:
        raise ValueError("diagonal needs at least one entry")
    if any(d not in (ZERO, PLUS) for d in out):
        raise ValueError("reduced idempotent diagonals take only 0 and +")
    return out


def _partial_sum(a, l, i, j) -> int:
    """``sum_{p=i+1}^{j-1} a[l][p] a[p][j]``."""
    acc = 0
    for p in range(i + 1, j):
        acc |= MUL[a[l][p]][a[p][j]]
    return acc


def _choices(a, i, j, d):
    both_zero = not d[i] and not d[j]
    if i == j - 1:
        return (0,) if both_zero else (0, 1, 2)
    x = _partial_sum(a, i, i, j)
    if x == AMB:
        return Stuck((i, j), "X is ambiguous")
    if x:
        return (x,)
    if both_zero:
        return (0,)
    allowed = {1, 2}
    for l in range(i):
        xl = _partial_sum(a, l, i, j)
        if xl == AMB:
            return Stuck((i, j), f"X^{l} is ambiguous")
        if a[l][i] and xl:
            allowed &= {s for s in (1, 2) if MUL[a[l][i]][s] == xl}
    return (0,) + tuple(sorted(allowed))


def free_choices(partial: SignMatrix, i: int, j: int, diag) -> frozenset:
    """Admissible signs for cell ``(i, j)`` (0-based) given the fixed prefix."""
    d = parse_diag(diag)
    if not 0 <= i < j < len(d) or partial.n != len(d):
        raise ValueError(f"bad cell ({i}, {j}) for order {len(d)}")
    a = partial.row_lists()
    opts = _choices(a, i, j, d)
    if isinstance(opts, Stuck):
        raise InternalConsistencyError(f"cell {opts.cell}: {opts.reason}")
    return frozenset(Sign(o) for o in opts)


def idempotent_cells(n: int) -> list:
    return [(i, j) for j in range(1, n) for i in range(j - 1, -1, -1)]


class IdempotentRun(DepthFirstRun):
    def __init__(self, diag, mode=ALL, fixed=None):
        self.diag = parse_diag(diag)
        n = len(self.diag)
        self.n = n
        fixed = {cell: int(Sign.of(s)) for cell, s in (fixed or {}).items()}
        super().__init__(idempotent_cells(n), mode, fixed)
        self._grid = [[0] * n for _ in range(n)]
        for i, s in enumerate(self.diag):
            self._grid[i][i] = int(s)

    def _choices(self, cell):
        i, j = cell
        return _choices(self._grid, i, j, self.diag)

    def _assign(self, cell, value):
        i, j = cell
        self._grid[i][j] = value

    def _unassign(self, cell):
        i, j = cell
        self._grid[i][j] = 0

    def _emit(self):
        return SignMatrix.from_codes(self._grid)


def generate_idempotent(diag, mode=ALL, fixed=None) -> IdempotentRun:
    """All (``mode="all"``) or sampled (``mode=Sample(count, seed)``) reduced
    upper-triangular sign idempotent patterns with the given diagonal.

    ``fixed`` maps cells to a sign; branches disagreeing with it are pruned.
    """
    return IdempotentRun(diag, mode, fixed)

