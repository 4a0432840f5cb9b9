"""Construction of reduced sign k-potent patterns in cyclic normal form.

Diagonal blocks are ``P_m``, ``Q_m`` or a 1x1 zero.  Off-diagonal blocks
between two cyclic blocks are taken from the circulant/anticirculant
families that commute with the diagonal blocks; blocks next to a zero
diagonal block are free row or column vectors.  Cells are filled column by
column, bottom to top, exactly as in the idempotent builder.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from enum import Enum
from typing import Optional, Sequence

from .cyclic_forms import BlockTag, parse_tags, potence_index_cnf
from .search import ALL, DepthFirstRun, Stuck
from .sign_algebra import (
    AMB,
    SignMatrix,
    mat_mul,
    mat_pow,
    mat_sum,
    potence_index,
    subpattern,
)

_NEG = (0, 2, 1, 3)


class FamilyKind(str, Enum):
    CIRCULANT = "circulant"
    ANTICIRCULANT = "anticirculant"
    ZERO_FORCED = "zero"
    ROW_VECTOR = "row"
    COL_VECTOR = "column"


@dataclass(frozen=True)
class CirculantSpec:
    """One member of a block family: its kind and coefficient vector ``b``."""

    kind: FamilyKind
    g: int
    b: tuple = ()
    alternation: bool = False

    def __post_init__(self):
        if self.kind is FamilyKind.ZERO_FORCED:
            if self.b:
                raise ValueError("a zero-forced block carries no coefficients")
        elif len(self.b) != self.g:
            raise ValueError(f"need {self.g} coefficients, got {len(self.b)}")


def _core(spec: CirculantSpec) -> list:
    """The ``g x g`` circulant (or anticirculant) ``sum_h b_h X^h``."""
    g, b = spec.g, spec.b
    C = [[0] * g for _ in range(g)]
    for r in range(g):
        for c in range(g):
            x = b[(c - r) % g]
            # powers of Q_g pick up a minus sign on every wrapped entry
            if spec.kind is FamilyKind.ANTICIRCULANT and c < r:
                x = _NEG[x]
            C[r][c] = x
    return C


def materialize(spec: CirculantSpec, rows: int, cols: int) -> SignMatrix:
    """Tile the family member into a ``rows x cols`` block (class sizes 1)."""
    kind = spec.kind
    if kind is FamilyKind.ZERO_FORCED:
        return SignMatrix.zeros(rows, cols)
    if kind is FamilyKind.ROW_VECTOR:
        if rows != 1 or cols != spec.g:
            raise ValueError(f"row vector of length {spec.g} cannot fill {rows}x{cols}")
        return SignMatrix.from_codes([spec.b])
    if kind is FamilyKind.COL_VECTOR:
        if cols != 1 or rows != spec.g:
            raise ValueError(f"column vector of length {spec.g} cannot fill {rows}x{cols}")
        return SignMatrix.from_codes([[x] for x in spec.b])
    g = spec.g
    if rows % g or cols % g:
        raise ValueError(f"{rows}x{cols} block is not tiled by {g}x{g} copies")
    C = _core(spec)
    out = []
    for r in range(rows):
        a, rr = divmod(r, g)
        line = []
        for c in range(cols):
            bb, cc = divmod(c, g)
            x = C[rr][cc]
            if spec.alternation and (a + bb) % 2:
                x = _NEG[x]
            line.append(x)
        out.append(line)
    return SignMatrix.from_codes(out)


@dataclass(frozen=True)
class BlockFamily:
    """Every admissible off-diagonal block between two diagonal block types."""

    kind: FamilyKind
    g: int
    rows: int
    cols: int
    alternation: bool = False

    def specs(self):
        """Members in lexicographic order of ``b`` over (0, +, -)."""
        if self.kind is FamilyKind.ZERO_FORCED:
            yield CirculantSpec(self.kind, self.g)
            return
        for b in itertools.product((0, 1, 2), repeat=self.g):
            yield CirculantSpec(self.kind, self.g, b, self.alternation)

    def members(self):
        for spec in self.specs():
            yield materialize(spec, self.rows, self.cols)

    def __len__(self) -> int:
        return 1 if self.kind is FamilyKind.ZERO_FORCED else 3**self.g

    def spec_of(self, B: SignMatrix) -> Optional[CirculantSpec]:
        """The member equal to ``B``, or None."""
        if B.shape != (self.rows, self.cols):
            return None
        if self.kind is FamilyKind.ZERO_FORCED:
            return CirculantSpec(self.kind, self.g) if B.is_zero() else None
        if self.kind is FamilyKind.COL_VECTOR:
            b = B.column(0)
        else:
            # first row of the first tile carries b unchanged
            b = B.row(0)[: self.g]
        spec = CirculantSpec(self.kind, self.g, tuple(int(x) for x in b), self.alternation)
        return spec if materialize(spec, self.rows, self.cols) == B else None

    def __contains__(self, B: SignMatrix) -> bool:
        return self.spec_of(B) is not None


def block_family(ti, tj, adjacent: bool = True) -> BlockFamily:
    """Admissible blocks ``A_ij`` between diagonal blocks of types ``ti``, ``tj``.

    ``adjacent`` only matters when both blocks are zero: next to each other
    the block must vanish, otherwise its value is forced by the rest of the
    column and any 1x1 sign is listed.
    """
    ti = ti if isinstance(ti, BlockTag) else BlockTag.parse(ti)
    tj = tj if isinstance(tj, BlockTag) else BlockTag.parse(tj)
    m, n = ti.size, tj.size
    if ti.is_zero and tj.is_zero:
        if adjacent:
            return BlockFamily(FamilyKind.ZERO_FORCED, 1, 1, 1)
        return BlockFamily(FamilyKind.ROW_VECTOR, 1, 1, 1)
    if ti.is_zero:
        return BlockFamily(FamilyKind.ROW_VECTOR, n, 1, n)
    if tj.is_zero:
        return BlockFamily(FamilyKind.COL_VECTOR, m, m, 1)
    g = math.gcd(m, n)
    if ti.kind == "P" and tj.kind == "P":
        return BlockFamily(FamilyKind.CIRCULANT, g, m, n)
    if ti.kind == "P":
        vanishes = (m // g) % 2 == 1
    elif tj.kind == "P":
        vanishes = (n // g) % 2 == 1
    else:
        vanishes = ((m + n) // g) % 2 == 1
    if vanishes:
        return BlockFamily(FamilyKind.ZERO_FORCED, g, m, n)
    return BlockFamily(FamilyKind.ANTICIRCULANT, g, m, n, alternation=True)


def commute_check(Aii: SignMatrix, B: SignMatrix, Ajj: SignMatrix) -> bool:
    """``Aii B == B Ajj`` with both products proper."""
    left, right = mat_mul(Aii, B), mat_mul(B, Ajj)
    return left.is_proper() and left == right


@dataclass(frozen=True)
class KPotentPattern:
    """An emitted pattern with the target ``k`` of its specification.

    ``index`` is the true potence index, computed on first access.
    """

    matrix: SignMatrix
    k: int

    @cached_property
    def index(self) -> Optional[int]:
        return potence_index(self.matrix, self.k).k


def zero_runs(tags: Sequence[BlockTag]) -> int:
    runs, prev = 0, False
    for t in tags:
        if t.is_zero and not prev:
            runs += 1
        prev = t.is_zero
    return runs


def _is_amb(M: SignMatrix) -> bool:
    return AMB in M.data


class KPotentRun(DepthFirstRun):
    STRATEGIES = ("single_pass", "filtered")

    def __init__(self, tags, strategy="filtered", mode=ALL, fixed=None):
        tags = parse_tags(tags)
        if strategy == "single":
            strategy = "single_pass"
        if strategy not in self.STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        if strategy == "single_pass" and zero_runs(tags) > 1:
            raise ValueError(
                "single_pass needs at most one run of consecutive zero blocks; "
                "use the filtered strategy for this specification"
            )
        self.tags = tags
        self.strategy = strategy
        self.k = potence_index_cnf(tags)
        N = len(tags)
        cells = [(i, j) for j in range(1, N) for i in range(j - 1, -1, -1)]
        super().__init__(cells, mode, fixed)
        self.unsound = []
        k = self.k
        self._size = [t.size for t in tags]
        self._A = {(i, i): t.matrix() for i, t in enumerate(tags)}
        # D^e for e = 0..k; a zero block has D^0 = I and D^e = 0 afterwards
        self._pow = [[mat_pow(self._A[i, i], e) for e in range(k + 1)] for i in range(N)]
        self._fam = {
            (i, j): block_family(tags[i], tags[j], adjacent=(j == i + 1)) for i, j in cells
        }
        self._members = {c: list(f.members()) for c, f in self._fam.items()}

    # helpers over the current partial assignment

    def _zero(self, i, j) -> SignMatrix:
        return SignMatrix.zeros(self._size[i], self._size[j])

    def _sum(self, terms, i, j) -> SignMatrix:
        return mat_sum(terms, self._size[i], self._size[j])

    def _sandwich(self, i, X, j) -> SignMatrix:
        """``sum_{p=1}^{k} D_i^{k-p} X D_j^{p-1}``."""
        k, Pi, Pj = self.k, self._pow[i], self._pow[j]
        return self._sum((mat_mul(mat_mul(Pi[k - p], X), Pj[p - 1]) for p in range(1, k + 1)), i, j)

    def _lookahead_ok(self, l, i, j, C) -> bool:
        """Whether the row-``l`` sum stays unambiguous once ``A_ij = C``."""
        A, k = self._A, self.k
        Xl = self._sum(
            (mat_mul(A[l, r], C if r == i else A[r, j]) for r in range(i, j)), l, j
        )
        if _is_amb(Xl):
            return False
        tail = self._sum(
            (
                mat_mul(mat_mul(A[l, r], self._pow[r][k - 1]), C if r == i else A[r, j])
                for r in range(i, j)
            ),
            l,
            j,
        )
        total = self._sum((self._sandwich(l, Xl, j), tail), l, j)
        return not _is_amb(total)

    def _choices(self, cell):
        i, j = cell
        tags, A, k = self.tags, self._A, self.k
        single = self.strategy == "single_pass"
        members = self._members[cell]
        if i == j - 1:
            opts = members
            if single:
                opts = [C for C in opts if all(self._lookahead_ok(l, i, j, C) for l in range(i))]
            return opts or Stuck(cell, "no family member keeps the row sums unambiguous")
        if tags[i].is_zero and tags[j].is_zero:
            val = self._sum(
                (mat_mul(mat_mul(A[i, r], self._pow[r][k - 1]), A[r, j]) for r in range(i + 1, j)),
                i,
                j,
            )
            if _is_amb(val):
                return Stuck(cell, "forced value between zero blocks is ambiguous")
            return [val]
        X = self._sum((mat_mul(A[i, r], A[r, j]) for r in range(i + 1, j)), i, j)
        if _is_amb(X):
            return Stuck(cell, "X is ambiguous")
        Z = self._sandwich(i, X, j)
        if _is_amb(Z):
            return Stuck(cell, "sum over powers of X is ambiguous")
        if not X.has_zero_entry():
            if Z not in self._fam[cell]:
                return Stuck(cell, "forced block lies outside the family")
            return [Z]
        opts = [C for C in members if subpattern(Z, C)]
        if single:
            opts = [C for C in opts if all(self._lookahead_ok(l, i, j, C) for l in range(i))]
        return opts or Stuck(cell, "no family member contains the forced part")

    def _assign(self, cell, value):
        self._A[cell] = value

    def _unassign(self, cell):
        del self._A[cell]

    def assemble(self) -> SignMatrix:
        offsets = list(itertools.accumulate([0] + self._size))
        n = offsets[-1]
        grid = [[0] * n for _ in range(n)]
        for (i, j), B in self._A.items():
            for r in range(B.rows):
                row = B.row(r)
                grid[offsets[i] + r][offsets[j] : offsets[j] + B.cols] = [int(x) for x in row]
        return SignMatrix.from_codes(grid)

    def _emit(self):
        M = self.assemble()
        if mat_pow(M, self.k + 1) != M:
            self.unsound.append(M)
            return None
        return KPotentPattern(M, self.k)


def generate_kpotent(tags, strategy="filtered", mode=ALL, fixed=None) -> KPotentRun:
    """Reduced sign k-potent patterns with the given diagonal blocks.

    ``tags`` is a sequence of block tags or a string like ``"P2,0,P2,Q1"``.
    The run yields :class:`KPotentPattern` items carrying the matrix, the
    target ``k`` and the true potence index.  ``fixed`` maps block cells
    ``(i, j)`` to a block; branches disagreeing with it are pruned.
    """
    return KPotentRun(tags, strategy, mode, fixed)


def condition_of_kpotence(A: SignMatrix, sizes: Sequence[int], k: int) -> dict:
    """Check ``sum over i <= i_1 <= ... <= i_k <= j`` of block chain products
    against ``A_ij`` for every block pair ``i < j``.

    Returns ``{(i, j): bool}``; an ambiguous chain sum counts as failure.
    """
    offsets = list(itertools.accumulate([0] + list(sizes)))
    if offsets[-1] != A.n:
        raise ValueError("block sizes do not add up to the order")
    N = len(sizes)
    blk = {
        (i, j): A.block(offsets[i], offsets[i + 1], offsets[j], offsets[j + 1])
        for i in range(N)
        for j in range(i, N)
    }
    out = {}
    for i in range(N):
        # paths[t][j]: sum of products of t+1 blocks along weakly increasing chains i..j
        cur = {j: blk[i, j] for j in range(i, N)}
        for _ in range(k):
            nxt = {}
            for j in range(i, N):
                nxt[j] = mat_sum(
                    (mat_mul(cur[r], blk[r, j]) for r in range(i, j + 1)), sizes[i], sizes[j]
                )
            cur = nxt
        for j in range(i + 1, N):
            out[i, j] = not _is_amb(cur[j]) and cur[j] == blk[i, j]
    return out


