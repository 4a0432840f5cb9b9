"""Four-valued sign arithmetic and dense sign matrices.

Signs are coded in two bits: bit 0 marks a possible positive value, bit 1 a
possible negative one.  So ``0`` is zero, ``1`` is ``+``, ``2`` is ``-`` and
``3`` is the ambiguous sign ``#``.  With this coding the sum of two signs is
a bitwise OR, which is what makes the ambiguity bookkeeping cheap.

Matrix indices are 0-based throughout the library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional, Sequence


class Sign(IntEnum):
    ZERO = 0
    PLUS = 1
    MINUS = 2
    AMB = 3

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @classmethod
    def from_symbol(cls, ch: str) -> "Sign":
        try:
            return cls(_CODES[ch])
        except KeyError:
            raise ValueError(f"not a sign symbol: {ch!r}") from None

    @classmethod
    def of(cls, x) -> "Sign":
        """Sign of a real (or exact rational) number; signs pass through."""
        if isinstance(x, Sign):
            return x
        if x > 0:
            return cls.PLUS
        if x < 0:
            return cls.MINUS
        return cls.ZERO

    def __neg__(self) -> "Sign":
        return Sign(_NEG[self])

    def __add__(self, other):
        if not isinstance(other, Sign):
            return NotImplemented
        return sign_add(self, other)

    def __mul__(self, other):
        if not isinstance(other, Sign):
            return NotImplemented
        return sign_mul(self, other)

    def __str__(self) -> str:
        return self.symbol


_SYMBOLS = ("0", "+", "-", "#")
_CODES = {"0": 0, "+": 1, "-": 2, "#": 3}
_NEG = (0, 2, 1, 3)

# product table; a zero factor kills the term even when the other one is #
MUL = (
    (0, 0, 0, 0),
    (0, 1, 2, 3),
    (0, 2, 1, 3),
    (0, 3, 3, 3),
)

ZERO, PLUS, MINUS, AMB = Sign.ZERO, Sign.PLUS, Sign.MINUS, Sign.AMB


def sign_add(a: Sign, b: Sign) -> Sign:
    return Sign(a | b)


def sign_mul(a: Sign, b: Sign) -> Sign:
    return Sign(MUL[a][b])


class DimensionError(ValueError):
    pass


class SignMatrix:
    """Immutable dense matrix over the four signs, stored row-major as codes.

    Most of the library works with square patterns; rectangular instances
    exist so that off-diagonal blocks can use the same arithmetic.
    """

    __slots__ = ("rows", "cols", "data", "_hash")

    def __init__(self, rows: int, cols: int, data: Iterable[int]):
        data = tuple(int(x) for x in data)
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise DimensionError(f"{len(data)} entries cannot fill a {rows}x{cols} matrix")
        if any(x < 0 or x > 3 for x in data):
            raise ValueError("sign codes must lie in 0..3")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SignMatrix is immutable")

    @classmethod
    def _raw(cls, rows: int, cols: int, data: tuple) -> "SignMatrix":
        self = object.__new__(cls)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "_hash", None)
        return self

    # construction helpers

    @classmethod
    def from_rows(cls, rows: Sequence) -> "SignMatrix":
        """Build from rows given as strings (``"+-0"``) or sequences of signs."""
        out = []
        width = None
        for row in rows:
            if isinstance(row, str):
                codes = [_CODES[ch] if ch in _CODES else Sign.from_symbol(ch) for ch in row]
            else:
                codes = [_coerce(x) for x in row]
            if width is None:
                width = len(codes)
            elif len(codes) != width:
                raise DimensionError("ragged rows")
            out.extend(codes)
        nrows = len(rows)
        return cls(nrows, width or 0, out)

    @classmethod
    def from_codes(cls, rows: Sequence[Sequence[int]]) -> "SignMatrix":
        """Build from rows of raw 2-bit codes (0, 1=+, 2=-, 3=#)."""
        rows = [tuple(r) for r in rows]
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        data = tuple(c for r in rows for c in r)
        if any(c not in (0, 1, 2, 3) for c in data):
            raise ValueError("sign codes are 0..3")
        return cls._raw(len(rows), width, data)

    @classmethod
    def from_string(cls, text: str) -> "SignMatrix":
        lines = [ln.strip() for ln in text.splitlines()]
        return cls.from_rows([ln for ln in lines if ln])

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "SignMatrix":
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "SignMatrix":
        return cls._raw(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def all_plus(cls, rows: int, cols: Optional[int] = None) -> "SignMatrix":
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, (1,) * (rows * cols))

    @classmethod
    def diagonal(cls, signs: Sequence) -> "SignMatrix":
        n = len(signs)
        codes = [_coerce(s) for s in signs]
        return cls._raw(n, n, tuple(codes[i] if i == j else 0 for i in range(n) for j in range(n)))

    # basic protocol

    @property
    def n(self) -> int:
        if self.rows != self.cols:
            raise DimensionError(f"{self.rows}x{self.cols} pattern is not square")
        return self.rows

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Sign:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return Sign(self.data[i * self.cols + j])

    def code(self, i: int, j: int) -> int:
        return self.data[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.data[j::self.cols]

    def row_lists(self) -> list:
        return [list(map(Sign, self.row(i))) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.data == other.data

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.rows, self.cols, self.data))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"SignMatrix({'/'.join(self.text_rows())!r})"

    def __str__(self) -> str:
        return "\n".join(self.text_rows())

    def text_rows(self) -> list:
        return ["".join(_SYMBOLS[x] for x in self.row(i)) for i in range(self.rows)]

    def packed(self) -> int:
        """Two bits per entry, first entry in the lowest bits."""
        v = 0
        for x in reversed(self.data):
            v = (v << 2) | x
        return v

    def is_proper(self) -> bool:
        return 3 not in self.data

    def is_zero(self) -> bool:
        return not any(self.data)

    def has_zero_entry(self) -> bool:
        return 0 in self.data

    # arithmetic

    def __matmul__(self, other: "SignMatrix") -> "SignMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "SignMatrix") -> "SignMatrix":
        return mat_add(self, other)

    def __neg__(self) -> "SignMatrix":
        return negate(self)

    @property
    def T(self) -> "SignMatrix":
        return transpose(self)

    def submatrix(self, rows: Sequence[int], cols: Optional[Sequence[int]] = None) -> "SignMatrix":
        cols = rows if cols is None else cols
        d, c = self.data, self.cols
        return SignMatrix._raw(len(rows), len(cols), tuple(d[i * c + j] for i in rows for j in cols))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "SignMatrix":
        return self.submatrix(range(r0, r1), range(c0, c1))

    def scale(self, s) -> "SignMatrix":
        """Multiply every entry by the sign ``s``."""
        s = _coerce(s)
        return SignMatrix._raw(self.rows, self.cols, tuple(MUL[s][x] for x in self.data))


def _coerce(x) -> int:
    if isinstance(x, str):
        return _CODES[x] if x in _CODES else int(Sign.from_symbol(x))
    if isinstance(x, Sign):
        return int(x)
    if isinstance(x, int) and not isinstance(x, bool) and x in (-1, 0, 1):
        return (0, 1, 2)[x] if x >= 0 else 2
    raise ValueError(f"cannot interpret {x!r} as a sign")


def make_J(rows: int, cols: Optional[int] = None) -> SignMatrix:
    """The all-plus pattern."""
    return SignMatrix.all_plus(rows, cols)


def mat_mul(A: SignMatrix, B: SignMatrix) -> SignMatrix:
    if A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    a, b = A.data, B.data
    m, p = A.cols, B.cols
    bcols = [b[j::p] for j in range(p)]
    out = []
    for i in range(A.rows):
        nz = [(k, x) for k, x in enumerate(a[i * m:(i + 1) * m]) if x]
        for col in bcols:
            acc = 0
            for k, x in nz:
                y = col[k]
                if y:
                    acc |= MUL[x][y]
                    if acc == 3:
                        break
            out.append(acc)
    return SignMatrix._raw(A.rows, p, tuple(out))


def mat_add(A: SignMatrix, B: SignMatrix) -> SignMatrix:
    if A.shape != B.shape:
        raise DimensionError(f"cannot add {A.shape} and {B.shape}")
    return SignMatrix._raw(A.rows, A.cols, tuple(x | y for x, y in zip(A.data, B.data)))


def mat_sum(terms: Iterable[SignMatrix], rows: int, cols: int) -> SignMatrix:
    acc = [0] * (rows * cols)
    for t in terms:
        if t.shape != (rows, cols):
            raise DimensionError(f"term of shape {t.shape} in a {rows}x{cols} sum")
        for idx, x in enumerate(t.data):
            if x:
                acc[idx] |= x
    return SignMatrix._raw(rows, cols, tuple(acc))


def mat_pow(A: SignMatrix, e: int) -> SignMatrix:
    """``A**e`` by repeated right multiplication, ``A^(t+1) = A^t A``."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    if e == 0:
        return SignMatrix.identity(A.n)
    A.n  # square check
    out = A
    for _ in range(e - 1):
        out = mat_mul(out, A)
    return out


@dataclass(frozen=True)
class PotenceReport:
    k: Optional[int]
    period_entered: bool
    powers_examined: int

    @property
    def potent(self) -> bool:
        return self.k is not None


def default_kmax(n: int) -> int:
    return min(2 * math.lcm(*range(1, n + 1)) if n > 0 else 2, 2520)


def potence_index(A: SignMatrix, k_max: Optional[int] = None) -> PotenceReport:
    """Smallest ``k <= k_max`` with ``A^(k+1) == A``.

    Powers are memoised; once a power repeats without ``A`` having come
    back, the sequence is periodic and ``A`` can never recur.
    """
    n = A.n
    if n == 0:
        raise ValueError("empty pattern has no potence index")
    if not A.is_proper():
        raise ValueError("potence index is defined for proper patterns only")
    if k_max is None:
        k_max = default_kmax(n)
    # the row-major code tuple serves as the serialized power
    target = A.data
    seen = {target: 1}
    power = A
    for t in range(1, k_max + 1):
        power = mat_mul(power, A)
        key = power.data
        if key == target:
            return PotenceReport(t, True, t)
        if key in seen:
            return PotenceReport(None, True, t)
        seen[key] = t + 1
    return PotenceReport(None, False, k_max)


def subpattern(A: SignMatrix, B: SignMatrix) -> bool:
    """True when ``B`` is obtained from ``A`` by filling some zero entries."""
    if A.shape != B.shape:
        raise DimensionError(f"cannot compare {A.shape} with {B.shape}")
    return all(x == 0 or x == y for x, y in zip(A.data, B.data))


def _check_perm(perm: Sequence[int], n: int) -> list:
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


def permutation_similarity(A: SignMatrix, perm: Sequence[int]) -> SignMatrix:
    """``P^T A P``: position ``t`` of the result holds original index ``perm[t]``."""
    n = A.n
    perm = _check_perm(perm, n)
    d = A.data
    return SignMatrix._raw(n, n, tuple(d[p * n + q] for p in perm for q in perm))


def signature_similarity(A: SignMatrix, signature: Sequence) -> SignMatrix:
    """``D A D`` for the diagonal sign pattern ``D = diag(signature)``."""
    n = A.n
    if len(signature) != n:
        raise DimensionError("signature length differs from the order")
    d = [_coerce(s) for s in signature]
    if any(s not in (1, 2) for s in d):
        raise ValueError("signature entries must be + or -")
    data = A.data
    return SignMatrix._raw(
        n, n, tuple(MUL[MUL[d[i]][data[i * n + j]]][d[j]] for i in range(n) for j in range(n))
    )


def transpose(A: SignMatrix) -> SignMatrix:
    r, c, d = A.rows, A.cols, A.data
    return SignMatrix._raw(c, r, tuple(d[i * c + j] for j in range(c) for i in range(r)))


def negate(A: SignMatrix) -> SignMatrix:
    return SignMatrix._raw(A.rows, A.cols, tuple(_NEG[x] for x in A.data))


def transform(A: SignMatrix, kind: str, arg=None) -> SignMatrix:
    """One equivalence operation: ``"permutation"`` (``arg`` = perm),
    ``"signature"`` (``arg`` = signs), ``"transpose"`` or ``"negate"``."""
    if kind == "permutation":
        return permutation_similarity(A, arg)
    if kind == "signature":
        return signature_similarity(A, arg)
    if kind == "transpose":
        return transpose(A)
    if kind == "negate":
        return negate(A)
    raise ValueError(f"unknown transform {kind!r}")


def sign_matrix_of(B) -> SignMatrix:
    """Entrywise sign of a numeric square matrix (rows of numbers or ``.entries``)."""
    rows = B.entries if hasattr(B, "entries") else B
    rows = [list(r) for r in rows]
    return SignMatrix.from_rows([[Sign.of(x) for x in r] for r in rows]) if rows else SignMatrix.zeros(0)


def qualitative_member(B, A: SignMatrix) -> bool:
    """Whether the numeric matrix ``B`` lies in the qualitative class of ``A``."""
    S = sign_matrix_of(B)
    if S.shape != A.shape:
        raise DimensionError(f"matrix of shape {S.shape} vs pattern of shape {A.shape}")
    return S == A
