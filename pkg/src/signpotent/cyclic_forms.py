"""Cyclic patterns ``P_m``/``Q_m`` and recognition of the cyclic normal form."""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .sign_algebra import (
    MUL,
    PLUS,
    Sign,
    SignMatrix,
    permutation_similarity,
    signature_similarity,
)
from .structure import BlockKind, frobenius_normal_form, is_irreducible


def make_P(m: int) -> SignMatrix:
    """Circulant permutation pattern: ``+`` on the superdiagonal and at ``(m-1, 0)``."""
    return _cycle(m, 1)


def make_Q(m: int) -> SignMatrix:
    """``make_P(m)`` with the closing entry negated."""
    return _cycle(m, 2)


def _cycle(m: int, closing: int) -> SignMatrix:
    if m < 1:
        raise ValueError("cycle order must be positive")
    data = [0] * (m * m)
    for r in range(m - 1):
        data[r * m + r + 1] = 1
    data[(m - 1) * m] = closing
    return SignMatrix._raw(m, m, tuple(data))


_TAG_RE = re.compile(r"^\s*(?:([PQ])\s*(\d+)|0)\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class BlockTag:
    """Diagonal block type: ``P(m)``, ``Q(m)`` or the 1x1 zero block."""

    kind: str
    m: int = 1

    def __post_init__(self):
        if self.kind not in ("P", "Q", "0"):
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.m < 1 or (self.kind == "0" and self.m != 1):
            raise ValueError(f"bad block order {self.m} for kind {self.kind}")

    @classmethod
    def parse(cls, text: str) -> "BlockTag":
        mo = _TAG_RE.match(text)
        if not mo:
            raise ValueError(f"cannot parse block tag {text!r} (expected P<m>, Q<m> or 0)")
        if mo.group(1) is None:
            return ZERO_BLOCK
        return cls(mo.group(1).upper(), int(mo.group(2)))

    @property
    def is_zero(self) -> bool:
        return self.kind == "0"

    @property
    def size(self) -> int:
        """Order of the block in reduced form."""
        return self.m

    @property
    def index(self) -> int:
        """Potence index contributed by this block."""
        return {"P": self.m, "Q": 2 * self.m, "0": 1}[self.kind]

    def matrix(self) -> SignMatrix:
        if self.kind == "P":
            return make_P(self.m)
        if self.kind == "Q":
            return make_Q(self.m)
        return SignMatrix.zeros(1)

    def __str__(self) -> str:
        return "0" if self.is_zero else f"{self.kind}{self.m}"


ZERO_BLOCK = BlockTag("0")


def P(m: int) -> BlockTag:
    return BlockTag("P", m)


def Q(m: int) -> BlockTag:
    return BlockTag("Q", m)


def parse_tags(spec: Union[str, Sequence]) -> tuple:
    if isinstance(spec, str):
        spec = [s for s in spec.split(",") if s.strip()]
    return tuple(t if isinstance(t, BlockTag) else BlockTag.parse(t) for t in spec)


def potence_index_cnf(tags: Sequence[BlockTag]) -> int:
    """``lcm`` of the per-block indices (``m`` for ``P_m``, ``2m`` for ``Q_m``)."""
    tags = parse_tags(tags)
    if not tags or all(t.is_zero for t in tags):
        raise ValueError("at least one nonzero diagonal block is required")
    return math.lcm(*(t.index for t in tags))


@dataclass(frozen=True)
class CyclicStructure:
    """Recognised cyclic structure of one irreducible pattern (local indices)."""

    perm: tuple
    signature: tuple
    tag: BlockTag
    class_sizes: tuple
    alpha: Sign


@dataclass(frozen=True)
class CyclicFailure:
    reason: str

    def __bool__(self) -> bool:
        return False


def cyclic_structure(A: SignMatrix) -> Union[CyclicStructure, CyclicFailure]:
    """Recognise an irreducible pattern as signature/permutation similar to an
    expanded ``P_g`` or ``Q_g``.  A :class:`CyclicFailure` means the pattern
    is not sign k-potent for any k."""
    if not A.is_proper() or not is_irreducible(A):
        raise ValueError("cyclic_structure needs a proper irreducible pattern")
    return _recognise(A)


def _recognise(A: SignMatrix) -> Union[CyclicStructure, CyclicFailure]:
    # caller guarantees a proper irreducible pattern
    n = A.n
    succ = [[j for j in range(n) if A.code(i, j)] for i in range(n)]

    depth = [-1] * n
    depth[0] = 0
    order, parent = [0], [None] * n
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                parent[v] = u
                order.append(v)
                queue.append(v)
    g = 0
    for u in range(n):
        for v in succ[u]:
            g = math.gcd(g, abs(depth[u] + 1 - depth[v]))
    cls = [d % g for d in depth]

    for u in range(n):
        for v in range(n):
            consecutive = cls[v] == (cls[u] + 1) % g
            if consecutive and not A.code(u, v):
                return CyclicFailure(f"missing edge {u}->{v} between consecutive classes")
            if not consecutive and A.code(u, v):
                return CyclicFailure(f"edge {u}->{v} skips a class")

    # sign of one g-cycle through the root; invariant under signature similarity
    by_class = [[v for v in range(n) if cls[v] == c] for c in range(g)]
    walk = [0] + [by_class[c][0] for c in range(1, g)] + [0]
    alpha = 1
    for u, v in zip(walk, walk[1:]):
        alpha = MUL[alpha][A.code(u, v)]

    def weight(u):
        return alpha if cls[u] == g - 1 else 1

    sig = [0] * n
    sig[0] = 1
    for v in order[1:]:
        u = parent[v]
        sig[v] = MUL[MUL[sig[u]][A.code(u, v)]][weight(u)]
    for u in range(n):
        for v in succ[u]:
            if MUL[MUL[sig[u]][A.code(u, v)]][sig[v]] != weight(u):
                return CyclicFailure(f"edge {u}->{v} has the wrong sign after signature similarity")

    perm = tuple(sorted(range(n), key=lambda v: (cls[v], v)))
    tag = BlockTag("P" if alpha == 1 else "Q", g)
    return CyclicStructure(
        perm=perm,
        signature=tuple(Sign(s) for s in sig),
        tag=tag,
        class_sizes=tuple(len(c) for c in by_class),
        alpha=Sign(alpha),
    )


class NotSignPotentError(ValueError):
    """Raised when a pattern has no cyclic normal form (so no potence index)."""

    def __init__(self, message: str, block: Optional[int] = None):
        super().__init__(message)
        self.block = block


@dataclass(frozen=True)
class CyclicForm:
    perm: tuple
    signature: tuple
    block_types: tuple
    class_sizes: tuple
    alpha: tuple

    @property
    def block_sizes(self) -> tuple:
        return tuple(sum(cs) for cs in self.class_sizes)

    @property
    def block_ranges(self) -> list:
        out, acc = [], 0
        for s in self.block_sizes:
            out.append((acc, acc + s))
            acc += s
        return out

    @property
    def k(self) -> int:
        return potence_index_cnf(self.block_types)

    def apply(self, A: SignMatrix) -> SignMatrix:
        """``P^T D A D P`` for the stored signature ``D`` and permutation ``P``."""
        return permutation_similarity(signature_similarity(A, self.signature), self.perm)


def to_cyclic_normal_form(A: SignMatrix) -> tuple:
    """Frobenius form plus per-block cyclic recognition.

    Returns ``(form, transformed)``; raises :class:`NotSignPotentError`
    naming the first diagonal block that is not cyclic.
    """
    fnf = frobenius_normal_form(A)
    n = A.n
    perm, signature = [], [PLUS] * n
    types, sizes, alphas = [], [], []
    for b, members in enumerate(fnf.blocks()):
        if fnf.kinds[b] is BlockKind.ZERO_ONE:
            perm.extend(members)
            types.append(ZERO_BLOCK)
            sizes.append((1,))
            alphas.append(None)
            continue
        cs = _recognise(A.submatrix(members))
        if not cs:
            raise NotSignPotentError(f"diagonal block {b} is not cyclic: {cs.reason}", block=b)
        perm.extend(members[p] for p in cs.perm)
        for v, s in enumerate(cs.signature):
            signature[members[v]] = s
        types.append(cs.tag)
        sizes.append(cs.class_sizes)
        alphas.append(cs.alpha)
    form = CyclicForm(tuple(perm), tuple(signature), tuple(types), tuple(sizes), tuple(alphas))
    return form, form.apply(A)

