"""Digraph view of a sign pattern: irreducibility and Frobenius normal form."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum

import networkx as nx

from .sign_algebra import SignMatrix, permutation_similarity


class BlockKind(str, Enum):
    IRREDUCIBLE = "irreducible"
    ZERO_ONE = "zero"


def digraph(A: SignMatrix) -> nx.DiGraph:
    """Edge ``i -> j`` for every nonzero ``a_ij`` (loops included)."""
    n = A.n
    G = nx.DiGraph()
    G.add_nodes_from(range(n))
    d = A.data
    G.add_edges_from((i, j) for i in range(n) for j in range(n) if d[i * n + j])
    return G


def is_irreducible(A: SignMatrix) -> bool:
    n = A.n
    if n == 0:
        return False
    if n == 1:
        return A.code(0, 0) != 0
    return nx.is_strongly_connected(digraph(A))


@dataclass(frozen=True)
class FrobeniusForm:
    perm: tuple
    block_sizes: tuple
    kinds: tuple

    @property
    def m(self) -> int:
        return len(self.block_sizes)

    @property
    def offsets(self) -> tuple:
        out, acc = [], 0
        for s in self.block_sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    def block_ranges(self) -> list:
        return [(o, o + s) for o, s in zip(self.offsets, self.block_sizes)]

    def blocks(self) -> list:
        """Original indices belonging to each diagonal block."""
        return [self.perm[a:b] for a, b in self.block_ranges()]

    def apply(self, A: SignMatrix) -> SignMatrix:
        return permutation_similarity(A, self.perm)


def frobenius_normal_form(A: SignMatrix) -> FrobeniusForm:
    """Permutation putting ``A`` in block upper triangular form.

    Diagonal blocks are the strongly connected components.  Among components
    that may come next, the one holding the smallest original index goes
    first; inside a component the original order is kept.
    """
    if not A.is_proper():
        raise ValueError("Frobenius normal form needs a proper pattern")
    G = digraph(A)
    comps = sorted(sorted(c) for c in nx.strongly_connected_components(G))
    perm, sizes, kinds = [], [], []
    for c in _component_order(G, comps):
        members = comps[c]
        perm.extend(members)
        sizes.append(len(members))
        if len(members) == 1 and A.code(members[0], members[0]) == 0:
            kinds.append(BlockKind.ZERO_ONE)
        else:
            kinds.append(BlockKind.IRREDUCIBLE)
    return FrobeniusForm(tuple(perm), tuple(sizes), tuple(kinds))


def _component_order(G: nx.DiGraph, comps: list) -> list:
    """Topological order of the condensation (Kahn), lowest index first on ties.

    ``comps`` is sorted by smallest member, so component ids double as keys.
    """
    owner = {v: c for c, members in enumerate(comps) for v in members}
    succ = [set() for _ in comps]
    indeg = [0] * len(comps)
    for u, v in G.edges():
        cu, cv = owner[u], owner[v]
        if cu != cv and cv not in succ[cu]:
            succ[cu].add(cv)
            indeg[cv] += 1
    ready = [c for c in range(len(comps)) if not indeg[c]]
    heapq.heapify(ready)
    order = []
    while ready:
        c = heapq.heappop(ready)
        order.append(c)
        for d in succ[c]:
            indeg[d] -= 1
            if not indeg[d]:
                heapq.heappush(ready, d)
    return order


def check_frobenius(A: SignMatrix, form: FrobeniusForm) -> bool:
    """Post-hoc check: zero below the block diagonal, valid diagonal blocks."""
    B = form.apply(A)
    ranges = form.block_ranges()
    for s, (r0, r1) in enumerate(ranges):
        for c0, c1 in ranges[:s]:
            if not B.block(r0, r1, c0, c1).is_zero():
                return False
        D = B.block(r0, r1, r0, r1)
        if form.kinds[s] is BlockKind.ZERO_ONE:
            if D.shape != (1, 1) or not D.is_zero():
                return False
        elif not is_irreducible(D):
            return False
    return sum(form.block_sizes) == A.n


def strip_extraneous(A: SignMatrix) -> tuple:
    """Drop every index whose row and column are both entirely zero."""
    n = A.n
    kept = [i for i in range(n) if any(A.row(i)) or any(A.column(i))]
    return A.submatrix(kept), tuple(kept)
