"""Shared depth-first bookkeeping for the two pattern generators."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

MASK64 = (1 << 64) - 1


class Lcg64:
    """64-bit linear congruential generator used for every sampled choice.

    ``state <- (6364136223846793005 * state + 1442695040888963407) mod 2**64``;
    a choice among ``k`` options takes ``(state >> 33) % k`` of the new state.
    The constants are Knuth's MMIX ones, so samples are reproducible from
    the seed alone in any language.
    """

    MULTIPLIER = 6364136223846793005
    INCREMENT = 1442695040888963407

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.MULTIPLIER * self.state + self.INCREMENT) & MASK64
        return self.state

    def index(self, k: int) -> int:
        if k < 1:
            raise ValueError("cannot choose from an empty set")
        return (self.next() >> 33) % k


@dataclass(frozen=True)
class Sample:
    """Draw ``count`` independent descents, one uniform branch per cell."""

    count: int
    seed: int = 0
    max_attempts: int = 1000


ALL = "all"


@dataclass
class Stuck:
    cell: tuple
    reason: str


@dataclass
class RunStats:
    cells: tuple = ()
    completed: int = 0
    emitted: int = 0
    pruned: int = 0
    stuck: list = field(default_factory=list)
    assignment_counts: Counter = field(default_factory=Counter)

    def record_branch(self, counts) -> None:
        self.completed += 1
        self.assignment_counts[tuple(counts)] += 1


class DepthFirstRun:
    """Iterable over the emitted patterns; statistics fill in as it is consumed.

    Subclasses implement ``_choices(state, cell)`` (returning the ordered
    options, or a :class:`Stuck`), ``_assign``/``_unassign`` and ``_emit``.
    """

    def __init__(self, cells, mode=ALL, fixed=None):
        self.mode = mode
        self.fixed = dict(fixed or {})
        self.stats = RunStats(cells=tuple(cells))
        self._counts = [0] * len(cells)
        self._consumed = False

    @property
    def cells(self) -> tuple:
        return self.stats.cells

    def __iter__(self):
        if self._consumed:
            raise RuntimeError("a run can only be iterated once")
        self._consumed = True
        if isinstance(self.mode, Sample):
            return self._sample(self.mode)
        if self.mode != ALL:
            raise ValueError(f"unknown mode {self.mode!r}")
        return self._walk(0)

    def _options(self, pos):
        cell = self.cells[pos]
        opts = self._choices(cell)
        if isinstance(opts, Stuck):
            return opts
        if cell in self.fixed:
            want = self.fixed[cell]
            opts = [o for o in opts if o == want]
        return opts

    def _walk(self, pos):
        if pos == len(self.cells):
            self.stats.record_branch(self._counts)
            out = self._emit()
            if out is not None:
                self.stats.emitted += 1
                yield out
            return
        opts = self._options(pos)
        if isinstance(opts, Stuck):
            self.stats.stuck.append(opts)
            return
        if not opts:
            self.stats.pruned += 1
            return
        cell = self.cells[pos]
        for o in opts:
            self._assign(cell, o)
            self._counts[pos] += 1
            yield from self._walk(pos + 1)
            self._counts[pos] -= 1
            self._unassign(cell)

    def _sample(self, mode: Sample):
        rng = Lcg64(mode.seed)
        produced = 0
        attempts = 0
        while produced < mode.count and attempts < mode.max_attempts * max(mode.count, 1):
            attempts += 1
            out = self._descend(rng)
            if out is not None:
                produced += 1
                self.stats.emitted += 1
                yield out

    def _descend(self, rng):
        assigned = []
        try:
            for pos, cell in enumerate(self.cells):
                opts = self._options(pos)
                if isinstance(opts, Stuck):
                    self.stats.stuck.append(opts)
                    return None
                if not opts:
                    self.stats.pruned += 1
                    return None
                self._assign(cell, opts[rng.index(len(opts))])
                self._counts[pos] += 1
                assigned.append((pos, cell))
            self.stats.record_branch(self._counts)
            return self._emit()
        finally:
            for pos, cell in reversed(assigned):
                self._counts[pos] -= 1
                self._unassign(cell)

    # subclass hooks
    def _choices(self, cell):
        raise NotImplementedError

    def _assign(self, cell, value):
        raise NotImplementedError

    def _unassign(self, cell):
        raise NotImplementedError

    def _emit(self):
        raise NotImplementedError


def count_assignments(run: DepthFirstRun) -> Counter:
    """Per-branch assignment counts of a consumed run.

    Keys are tuples with one count per cell (in ``run.cells`` order); values
    say how many completed branches showed that tuple.
    """
    return Counter(run.stats.assignment_counts)
