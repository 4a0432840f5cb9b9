"""Brute-force enumeration of small sign patterns and equivalence classes.

Everything here is deliberately independent of the generators: candidates
are decoded from base-3 counters and tested with a vectorised re-implementation
of the sign product (bit 0 = "has a + term", bit 1 = "has a - term").
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .sign_algebra import SignMatrix, default_kmax

CAP_FULL = 4
CAP_UPPER = 6
CHUNK = 1 << 16

PREDICATES = ("idempotent", "kpotent", "potent_any")
SHAPES = ("full", "upper")


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class EnumSpec:
    """What to enumerate.

    ``shape="upper"`` keeps the strictly lower part zero; ``diag`` then fixes
    the diagonal (codes or symbols), or leaves it free when None.
    ``predicate="kpotent"`` needs ``k`` and keeps patterns whose potence
    index is exactly ``k``.
    """

    n: int
    shape: str = "full"
    predicate: str = "idempotent"
    k: Optional[int] = None
    diag: Optional[tuple] = None
    kmax: Optional[int] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("order must be positive")
        if self.shape not in SHAPES:
            raise ValueError(f"shape must be one of {SHAPES}")
        if self.predicate not in PREDICATES:
            raise ValueError(f"predicate must be one of {PREDICATES}")
        if self.predicate == "kpotent" and (self.k is None or self.k < 1):
            raise ValueError("kpotent predicate needs k >= 1")
        if self.diag is not None:
            if self.shape != "upper":
                raise ValueError("a fixed diagonal only applies to the upper shape")
            if len(self.diag) != self.n:
                raise ValueError("diagonal length differs from n")

    @property
    def free_cells(self) -> list:
        n = self.n
        if self.shape == "full":
            return [(i, j) for i in range(n) for j in range(n)]
        lo = 1 if self.diag is not None else 0
        return [(i, j) for i in range(n) for j in range(i + lo, n)]

    @property
    def candidates(self) -> int:
        return 3 ** len(self.free_cells)

    def check_cap(self, cap_full: int = CAP_FULL, cap_upper: int = CAP_UPPER) -> None:
        cap = cap_full if self.shape == "full" else cap_upper
        if self.n > cap:
            raise CapExceeded(
                f"n={self.n} exceeds the {self.shape} cap of {cap} "
                f"({self.candidates} candidates would be required)"
            )

    def diag_codes(self) -> tuple:
        return tuple(_code(x) for x in self.diag) if self.diag is not None else ()

    def power_bound(self) -> int:
        if self.predicate == "idempotent":
            return 1
        if self.predicate == "kpotent":
            return self.k
        return self.kmax or default_kmax(self.n)


def _code(x) -> int:
    if isinstance(x, str):
        return {"0": 0, "+": 1, "-": 2}[x]
    return int(x)


# vectorised sign arithmetic on uint8 code arrays of shape (batch, r, c)


def batch_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    ap, am = (A & 1).astype(np.int32), (A >> 1).astype(np.int32)
    bp, bm = (B & 1).astype(np.int32), (B >> 1).astype(np.int32)
    plus = (ap @ bp + am @ bm) > 0
    minus = (ap @ bm + am @ bp) > 0
    return (plus.astype(np.uint8) | (minus.astype(np.uint8) << 1))


def first_return(X: np.ndarray, bound: int) -> np.ndarray:
    """Smallest ``t <= bound`` with ``X^(t+1) == X`` per batch item, else 0."""
    found = np.zeros(len(X), dtype=np.int64)
    alive = np.arange(len(X))
    power = X
    for t in range(1, bound + 1):
        if not len(alive):
            break
        power = batch_mul(power, X[alive])
        hit = (power == X[alive]).all(axis=(1, 2))
        found[alive[hit]] = t
        alive, power = alive[~hit], power[~hit]
    return found


def _decode(start: int, stop: int, width: int) -> np.ndarray:
    """Base-3 digits of ``start..stop-1``, most significant digit first."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), width), dtype=np.uint8)
    for c in range(width - 1, -1, -1):
        out[:, c] = idx % 3
        idx //= 3
    return out


def _keep(X: np.ndarray, spec: EnumSpec) -> np.ndarray:
    first = first_return(X, spec.power_bound())
    if spec.predicate == "kpotent":
        return first == spec.k
    return first > 0


def _scan(spec: EnumSpec, start: int, stop: int) -> np.ndarray:
    n, cells = spec.n, spec.free_cells
    digits = _decode(start, stop, len(cells))
    X = np.zeros((len(digits), n, n), dtype=np.uint8)
    for c, (i, j) in enumerate(cells):
        X[:, i, j] = digits[:, c]
    for i, d in enumerate(spec.diag_codes()):
        X[:, i, i] = d
    return X[_keep(X, spec)]


def _ranges(total: int, chunk: int):
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def enumerate_patterns(spec: EnumSpec, jobs: int = 1, chunk: int = CHUNK) -> Iterator[SignMatrix]:
    """All patterns of the spec's shape satisfying its predicate.

    Candidates run in lexicographic order over (0, +, -) with the first free
    cell (row-major) most significant; the output keeps that order for any
    number of worker processes.
    """
    spec.check_cap()
    parts = _ranges(spec.candidates, chunk)
    if jobs > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_scan, itertools.repeat(spec), *zip(*parts))
            for block in results:
                yield from _to_matrices(block)
    else:
        for s, e in parts:
            yield from _to_matrices(_scan(spec, s, e))


def _to_matrices(block: np.ndarray):
    for M in block:
        yield SignMatrix.from_codes(M.tolist())


# canonical forms under permutation, signature, negation and transposition

CANON_CAP = 8


def _signature_min(a: Sequence[Sequence[int]], n: int) -> tuple:
    """Lexicographically least ``D a D`` over signatures, row-major, with
    0 < + < - < #.  Greedy is exact: each time a nonzero entry joins two
    components with no fixed relative sign, choosing ``+`` there is strictly
    better whatever comes later."""
    parent = list(range(n))
    parity = [0] * n  # sign of d_v relative to its root (0 = same)

    def find(v):
        p = 0
        while parent[v] != v:
            p ^= parity[v]
            v = parent[v]
        return v, p

    out = []
    for i in range(n):
        for j in range(n):
            x = a[i][j]
            if x in (0, 3) or i == j:
                out.append(x)
                continue
            ri, pi = find(i)
            rj, pj = find(j)
            if ri != rj:
                # choose d_i d_j so that the entry becomes +
                want = pi ^ pj ^ (1 if x == 2 else 0)
                parent[rj] = ri
                parity[rj] = want
                out.append(1)
            else:
                flip = pi ^ pj
                out.append(x if not flip else (3 - x))
    return tuple(out)


def canonical_key(A: SignMatrix) -> tuple:
    n = A.n
    if n > CANON_CAP:
        raise CapExceeded(f"canonical forms are limited to order {CANON_CAP}")
    rows = A.row_lists()
    variants = []
    for base in (rows, [list(r) for r in zip(*rows)]):
        variants.append(base)
        variants.append([[(0, 2, 1, 3)[x] for x in r] for r in base])
    best = None
    for v in variants:
        for perm in itertools.permutations(range(n)):
            a = [[v[p][q] for q in perm] for p in perm]
            key = _signature_min(a, n)
            if best is None or key < best:
                best = key
    return best


def canonical_form(A: SignMatrix) -> SignMatrix:
    """Least member of the equivalence class of ``A`` (row-major order)."""
    key = canonical_key(A)
    n = A.n
    return SignMatrix.from_codes([key[i * n:(i + 1) * n] for i in range(n)])


@dataclass(frozen=True)
class Census:
    total: int
    classes: int


def census(spec: EnumSpec, jobs: int = 1) -> Census:
    keys = set()
    total = 0
    for A in enumerate_patterns(spec, jobs=jobs):
        total += 1
        keys.add(canonical_key(A))
    return Census(total, len(keys))


# block-structured oracle for the k-potent generator


def _all_blocks(rows: int, cols: int) -> np.ndarray:
    digits = _decode(0, 3 ** (rows * cols), rows * cols)
    return digits.reshape(-1, rows, cols)


def _commuting_blocks(Dii: np.ndarray, Djj: np.ndarray) -> np.ndarray:
    """All blocks ``B`` with ``Dii B = B Djj``, both sides proper.

    Every k-potent pattern has such blocks between two cyclic diagonal
    blocks, so the oracle may restrict to them.
    """
    Bs = _all_blocks(Dii.shape[0], Djj.shape[0])
    left = batch_mul(np.broadcast_to(Dii, (len(Bs),) + Dii.shape), Bs)
    right = batch_mul(Bs, np.broadcast_to(Djj, (len(Bs),) + Djj.shape))
    ok = (left == right).all(axis=(1, 2)) & (left != 3).all(axis=(1, 2))
    return Bs[ok]


def block_structured_kpotent(diagonal_blocks: Sequence[SignMatrix], k: int) -> list:
    """Every block upper triangular pattern with the given diagonal blocks and
    ``A^(k+1) = A``.

    Off-diagonal blocks range over all sign blocks, except that blocks
    between two nonzero diagonal blocks range over the commuting ones.
    Columns are added one at a time and each leading principal part is
    filtered, which is exact because powers of a block triangular matrix
    restrict to its leading principal parts.
    """
    D = [np.array(B.row_lists(), dtype=np.uint8) for B in diagonal_blocks]
    sizes = [d.shape[0] for d in D]
    offsets = list(itertools.accumulate([0] + sizes))
    n = offsets[-1]
    nonzero = [bool(d.any()) for d in D]

    def options(i, j):
        if nonzero[i] and nonzero[j]:
            return _commuting_blocks(D[i], D[j])
        return _all_blocks(sizes[i], sizes[j])

    cur = np.zeros((1, n, n), dtype=np.uint8)
    r0, r1 = offsets[0], offsets[1]
    cur[:, r0:r1, r0:r1] = D[0]
    cur = cur[_keep_power(cur[:, :r1, :r1], k)]
    for j in range(1, len(D)):
        c0, c1 = offsets[j], offsets[j + 1]
        cur[:, c0:c1, c0:c1] = D[j]
        column = [(offsets[i], offsets[i + 1], options(i, j)) for i in range(j)]
        kept = []
        for s in range(0, len(cur), 256):
            part = cur[s:s + 256]
            for a0, a1, opts in column:
                rep = np.repeat(part, len(opts), axis=0)
                rep[:, a0:a1, c0:c1] = np.tile(opts, (len(part), 1, 1))
                part = rep
            kept.append(part[_keep_power(part[:, :c1, :c1], k)])
        cur = np.concatenate(kept) if kept else cur[:0]
    return [SignMatrix.from_codes(M.tolist()) for M in cur]


def _keep_power(X: np.ndarray, k: int) -> np.ndarray:
    if not len(X):
        return np.zeros(0, dtype=bool)
    power = X
    for _ in range(k):
        power = batch_mul(power, X)
    return (power == X).all(axis=(1, 2))

