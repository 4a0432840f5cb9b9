"""Which sign k-potent patterns allow k-potence, and an exact witness when they do.

A pattern allows k-potence when some real matrix ``B`` with the same sign
pattern satisfies ``B^(k+1) = B``.  In cyclic normal form this happens
exactly when no nonzero off-diagonal block joins two nonzero diagonal
blocks (the PPO class).  Witnesses are built with exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cyclic_forms import CyclicForm, NotSignPotentError, to_cyclic_normal_form
from .sign_algebra import (
    AMB,
    MINUS,
    PLUS,
    ZERO,
    Sign,
    SignMatrix,
    mat_mul,
    mat_sum,
    potence_index,
)
from .structure import strip_extraneous


class RationalMatrix:
    """Square matrix of exact rationals."""

    __slots__ = ("n", "entries")

    def __init__(self, entries):
        rows = tuple(tuple(Fraction(x) for x in r) for r in entries)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("rational matrix must be square")
        self.n = len(rows)
        self.entries = rows

    @classmethod
    def zeros(cls, n: int) -> "RationalMatrix":
        return cls([[0] * n for _ in range(n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n != other.n:
            raise ValueError("order mismatch")
        cols = list(zip(*other.entries))
        return RationalMatrix(
            [[sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in cols]
             for row in self.entries]
        )

    def __pow__(self, e: int) -> "RationalMatrix":
        if e < 0:
            raise ValueError("exponent must be non-negative")
        out = RationalMatrix([[int(i == j) for j in range(self.n)] for i in range(self.n)])
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def signs(self) -> SignMatrix:
        return SignMatrix.from_rows([[Sign.of(x) for x in r] for r in self.entries])

    def to_strings(self) -> list:
        return [[str(x) for x in r] for r in self.entries]

    @classmethod
    def from_strings(cls, rows) -> "RationalMatrix":
        return cls([[Fraction(x) for x in r] for r in rows])

    def __repr__(self) -> str:
        return f"RationalMatrix({self.to_strings()})"


@dataclass(frozen=True)
class PpoReport:
    is_ppo: bool
    violations: tuple

    def __bool__(self) -> bool:
        return self.is_ppo


def _form_and_image(A: SignMatrix, cnf: Optional[CyclicForm]):
    if cnf is None:
        return to_cyclic_normal_form(A)
    T = cnf.apply(A)
    ranges = cnf.block_ranges
    if sum(cnf.block_sizes) != A.n:
        raise ValueError("cyclic form does not match the order of the pattern")
    for s, (r0, r1) in enumerate(ranges):
        for c0, c1 in ranges[:s]:
            if not T.block(r0, r1, c0, c1).is_zero():
                raise ValueError("cyclic form is inconsistent with the pattern")
    return cnf, T


def is_ppo(A: SignMatrix, cnf: Optional[CyclicForm] = None) -> PpoReport:
    """Scan block pairs ``i < j`` (0-based, in cyclic normal form order) for a
    nonzero block between two nonzero diagonal blocks."""
    cnf, T = _form_and_image(A, cnf)
    ranges = cnf.block_ranges
    nonzero = [not t.is_zero for t in cnf.block_types]
    bad = []
    for i, j in itertools.combinations(range(len(ranges)), 2):
        if nonzero[i] and nonzero[j]:
            (r0, r1), (c0, c1) = ranges[i], ranges[j]
            if not T.block(r0, r1, c0, c1).is_zero():
                bad.append((i, j))
    return PpoReport(not bad, tuple(bad))


def allows_kpotence(A: SignMatrix) -> tuple:
    """``(allows, k)`` for a sign k-potent pattern.

    Extraneous zero rows and columns are dropped first.  Raises
    :class:`NotSignPotentError` when the pattern has no potence index.
    """
    k = _potence_or_raise(A)
    S, _ = strip_extraneous(A)
    if S.n == 0:
        return True, k
    return is_ppo(S).is_ppo, k


def _potence_or_raise(A: SignMatrix) -> int:
    if not A.is_proper():
        raise NotSignPotentError("pattern has ambiguous entries")
    report = potence_index(A)
    if report.k is None:
        raise NotSignPotentError("pattern is not sign k-potent for any k within the search bound")
    return report.k


_VALUE = {0: Fraction(0), 1: Fraction(1), 2: Fraction(-1)}


def build_realization(A: SignMatrix, cnf: Optional[CyclicForm] = None) -> RationalMatrix:
    """Exact ``B`` with the sign pattern of ``A`` and ``B^(k+1) = B``.

    Raises ``ValueError`` listing the offending block pairs when ``A`` is
    not in PPO, and :class:`NotSignPotentError` when it is not k-potent.
    """
    k = _potence_or_raise(A)
    cnf, T = _form_and_image(A, cnf)
    report = is_ppo(A, cnf)
    if not report:
        raise ValueError(f"pattern does not allow {k}-potence: PPO violations {list(report.violations)}")
    n = A.n
    ranges = cnf.block_ranges
    # cyclic class of each position inside its diagonal block
    cls_of, cls_size = [0] * n, [1] * n
    for (r0, _), sizes in zip(ranges, cnf.class_sizes):
        pos = r0
        for c, s in enumerate(sizes):
            for t in range(pos, pos + s):
                cls_of[t], cls_size[t] = c, s
            pos += s

    Bt = [[Fraction(0)] * n for _ in range(n)]
    nb = len(ranges)
    for b, ((r0, r1), tag) in enumerate(zip(ranges, cnf.block_types)):
        if tag.is_zero:
            continue
        g = len(cnf.class_sizes[b])
        for u in range(r0, r1):
            for v in range(r0, r1):
                x = T.code(u, v)
                if x:
                    # only edges class c -> c+1 exist; the closing one carries alpha
                    closing = cls_of[u] == g - 1
                    expected = int(cnf.alpha[b]) if closing else 1
                    if x != expected:
                        raise ValueError("diagonal block is not in the expected cyclic form")
                    Bt[u][v] = _VALUE[x] / cls_size[u]

    for j in range(nb):
        for i in range(j - 1, -1, -1):
            (r0, r1), (c0, c1) = ranges[i], ranges[j]
            zi, zj = cnf.block_types[i].is_zero, cnf.block_types[j].is_zero
            if not zi and not zj:
                continue
            if zi and zj:
                for r in range(r0, r1):
                    for c in range(c0, c1):
                        Bt[r][c] = _chain_sum(Bt, ranges, i, j, k, r, c)
                continue
            for r in range(r0, r1):
                for c in range(c0, c1):
                    x = T.code(r, c)
                    if x:
                        # divide by the class size of the cyclic side
                        size = cls_size[r] if not zi else cls_size[c]
                        Bt[r][c] = _VALUE[x] / size

    # undo P^T D A D P: B[perm[s]][perm[t]] = d_s d_t Bt[s][t]
    perm, sig = cnf.perm, cnf.signature
    out = [[Fraction(0)] * n for _ in range(n)]
    for s in range(n):
        for t in range(n):
            if Bt[s][t]:
                flip = (sig[perm[s]] == MINUS) != (sig[perm[t]] == MINUS)
                out[perm[s]][perm[t]] = -Bt[s][t] if flip else Bt[s][t]
    B = RationalMatrix(out)
    if not verify_realization(B, A, k):
        raise AssertionError("constructed realization failed verification")
    return B


def _chain_sum(Bt, ranges, i, j, k, r, c) -> Fraction:
    """Entry ``(r, c)`` of the sum over chains ``i+1 <= t_1 <= ... <= t_k <= j-1``
    of ``B_{i t_1} B_{t_1 t_2} ... B_{t_k j}``."""
    if j == i + 1:
        return Fraction(0)
    lo, hi = ranges[i + 1][0], ranges[j - 1][1]
    owner = {}
    for b in range(i + 1, j):
        for t in range(*ranges[b]):
            owner[t] = b
    inner = range(lo, hi)
    # vec[t]: sum of products from r to position t after the current number of steps
    vec = {t: Bt[r][t] for t in inner if Bt[r][t]}
    for _ in range(k - 1):
        nxt = {}
        for t, x in vec.items():
            for u in inner:
                if owner[u] >= owner[t] and Bt[t][u]:
                    nxt[u] = nxt.get(u, Fraction(0)) + x * Bt[t][u]
        vec = nxt
    return sum((x * Bt[t][c] for t, x in vec.items() if Bt[t][c]), Fraction(0))


def verify_realization(B: RationalMatrix, A: SignMatrix, k: int) -> bool:
    """Exact check of ``B^(k+1) = B`` and ``sign(B) = A``."""
    if B.n != A.n or k < 1:
        return False
    if B.signs() != A:
        return False
    return B ** (k + 1) == B


def forbidden_sum_check(A: SignMatrix, cnf: Optional[CyclicForm], k: int) -> dict:
    """For block pairs ``i + 1 < j`` with a nonzero diagonal end, whether the
    chain sum over ``i <= i_1 <= ... <= i_k <= j`` restricted to chains that
    visit a block other than ``i`` and ``j`` is the zero block."""
    cnf, T = _form_and_image(A, cnf)
    ranges = cnf.block_ranges
    sizes = cnf.block_sizes
    N = len(ranges)
    blk = {
        (a, b): T.block(ranges[a][0], ranges[a][1], ranges[b][0], ranges[b][1])
        for a in range(N)
        for b in range(a, N)
    }
    out = {}
    for i in range(N):
        for j in range(i + 2, N):
            if cnf.block_types[i].is_zero and cnf.block_types[j].is_zero:
                continue
            # state (block, visited_other): sums of products from i
            cur = {}
            for b in range(i, j + 1):
                cur[b, b not in (i, j)] = blk[i, b]
            for _ in range(k - 1):
                nxt = {}
                for (a, f), M in cur.items():
                    for b in range(a, j + 1):
                        key = (b, f or b not in (i, j))
                        nxt.setdefault(key, []).append(mat_mul(M, blk[a, b]))
                cur = {key: mat_sum(v, sizes[i], sizes[key[0]]) for key, v in nxt.items()}
            total = mat_sum(
                (mat_mul(M, blk[a, j]) for (a, f), M in cur.items() if f), sizes[i], sizes[j]
            )
            out[i, j] = AMB not in total.data and total.is_zero()
    return out


def two_by_two_allows(A: SignMatrix, k: int) -> bool:
    """Closed-form decision for a 2x2 upper triangular pattern.

    ``B = [[x, y], [0, z]]`` with ``B^(k+1) = B`` forces ``x, z`` into
    ``{0, 1, -1}`` (``-1`` only for even ``k``), and a nonzero ``y`` needs
    ``sum_{s=0}^{k} x^(k-s) z^s = 1``.
    """
    if A.shape != (2, 2) or A.code(1, 0):
        raise ValueError("expects a 2x2 upper triangular pattern")
    values = []
    for d in (A[0, 0], A[1, 1]):
        if d == ZERO:
            values.append(0)
        elif d == PLUS:
            values.append(1)
        elif d == MINUS and k % 2 == 0:
            values.append(-1)
        else:
            return False
    x, z = values
    if A[0, 1] == ZERO:
        return True
    return sum(x ** (k - s) * z**s for s in range(k + 1)) == 1


