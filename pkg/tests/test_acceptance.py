"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; the
lines are repeated in the terminal summary.
"""

import functools
import itertools
import random
import sys
import time

import numpy as np
import pytest

from signpotent.cyclic_forms import P, Q, BlockTag, make_P, make_Q, parse_tags
from signpotent.idem_builder import count_assignments, free_choices, generate_idempotent
from signpotent.kpotent_builder import block_family, commute_check, generate_kpotent, zero_runs
from signpotent.oracle import EnumSpec, enumerate_patterns
from signpotent.realization import (
    allows_kpotence,
    build_realization,
    two_by_two_allows,
    verify_realization,
)
from signpotent.reduction import expand, red
from signpotent.sign_algebra import AMB, MINUS, SignMatrix, mat_mul, mat_pow, potence_index

from conftest import ACCEPTANCE_LINES
from patterns import (
    COUNTEREXAMPLE_4X4,
    NOT_ALLOWING_2X2,
    STALLED_PREFIX,
    WORKED_IDEMPOTENT,
    WORKED_IDEMPOTENT_DIAG,
    WORKED_KPOTENT,
    WORKED_KPOTENT_BLOCKS,
    stalled,
)


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            ok = False
            try:
                fn(*args, **kwargs)
                ok = True
            finally:
                line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - start:.1f}s) {title}"
                ACCEPTANCE_LINES.append(line)
                print(line)

        return run

    return wrap


# shared fixtures, computed once whichever criterion asks first


def all_diags(max_n=5):
    for n in range(1, max_n + 1):
        for d in itertools.product("0+", repeat=n):
            yield "".join(d)


@functools.lru_cache(maxsize=None)
def idempotent_runs():
    """``{diag: (patterns, assignment counts, stuck, cell count)}`` for every diag of length <= 5."""
    out = {}
    for d in all_diags():
        run = generate_idempotent(d)
        pats = list(run)
        out[d] = (pats, count_assignments(run), list(run.stats.stuck), len(run.cells))
    return out


def idempotent_fixtures():
    for d, (pats, _, _, _) in idempotent_runs().items():
        for A in pats:
            yield A, tuple(1 if c == "+" else 0 for c in d), 1


def spec_strings(tags, blocks):
    for t in itertools.product(tags, repeat=blocks):
        if any(x != "0" for x in t):
            yield ",".join(t)


# k-potent fixture specs: every spec over {0,P1,Q1,P2} with at most 3 blocks,
# every spec over {0,P1,Q1} with 4 blocks, and a seeded sample of 5-block specs
FIVE_BLOCK_SAMPLE = 16


def kpotent_specs():
    specs = [s for b in (1, 2, 3) for s in spec_strings(("0", "P1", "Q1", "P2"), b)]
    specs += list(spec_strings(("0", "P1", "Q1"), 4))
    five = list(spec_strings(("0", "P1", "Q1"), 5))
    specs += random.Random(2024).sample(five, FIVE_BLOCK_SAMPLE)
    return specs


@functools.lru_cache(maxsize=None)
def kpotent_fixtures():
    out = []
    for s in kpotent_specs():
        tags = parse_tags(s)
        run = generate_kpotent(tags)
        for p in run:
            out.append((p.matrix, tags, p.k))
        assert not run.unsound
    return out


def structural_ppo(A, sizes, nonzero):
    """Block-level PPO scan using the generator's own block layout."""
    offsets = list(itertools.accumulate([0] + list(sizes)))
    for i, j in itertools.combinations(range(len(sizes)), 2):
        if nonzero[i] and nonzero[j]:
            if not A.block(offsets[i], offsets[i + 1], offsets[j], offsets[j + 1]).is_zero():
                return False
    return True


# criteria


@criterion(1, "4x4 counterexample is not sign idempotent; its square has # at (1,4)")
def test_criterion_01_counterexample():
    square = mat_mul(COUNTEREXAMPLE_4X4, COUNTEREXAMPLE_4X4)
    assert square[0, 3] == AMB
    assert square != COUNTEREXAMPLE_4X4
    assert potence_index(COUNTEREXAMPLE_4X4).k != 1


@criterion(2, "stalled 5x5: no k <= 100 for any corner; Minus excluded at (3,5)")
def test_criterion_02_stalled_pattern():
    for corner in "+-0":
        A = stalled(corner)
        assert mat_mul(A, A)[0, 4] == AMB
        assert potence_index(A, 100).k is None
    choices = free_choices(STALLED_PREFIX, 2, 4, "+0+++")
    assert MINUS not in choices


@criterion(3, "worked 5x5 idempotent: A^2 = A and emitted for diag +0+++")
def test_criterion_03_worked_idempotent():
    assert mat_pow(WORKED_IDEMPOTENT, 2) == WORKED_IDEMPOTENT
    assert WORKED_IDEMPOTENT in set(generate_idempotent(WORKED_IDEMPOTENT_DIAG))


@criterion(4, "worked 6x6: A^3 = A and emitted for blocks P2,0,P2,Q1")
def test_criterion_04_worked_kpotent():
    assert mat_pow(WORKED_KPOTENT, 3) == WORKED_KPOTENT
    assert WORKED_KPOTENT in {p.matrix for p in generate_kpotent(WORKED_KPOTENT_BLOCKS)}


@criterion(5, "potence_index(P_n) = n and potence_index(Q_n) = 2n for n = 1..8")
def test_criterion_05_cycle_indices():
    for n in range(1, 9):
        assert potence_index(make_P(n)).k == n
        assert potence_index(make_Q(n)).k == 2 * n


@criterion(6, "idempotent generator equals the oracle on all 62 diagonals of length <= 5")
def test_criterion_06_idempotent_completeness():
    runs = idempotent_runs()
    assert len(runs) == 62
    for d, (pats, _, _, _) in runs.items():
        assert len(pats) == len(set(pats))
        spec = EnumSpec(len(d), shape="upper", predicate="idempotent", diag=tuple(d))
        assert set(pats) == set(enumerate_patterns(spec)), d


@criterion(7, "every cell assigned once per branch (62 diagonals, single-zero-run specs <= 4 blocks)")
def test_criterion_07_single_pass():
    for d, (pats, counts, stuck, ncells) in idempotent_runs().items():
        assert not stuck
        assert set(counts) <= {(1,) * ncells}
        assert sum(counts.values()) == len(pats)
    checked = 0
    for b in (1, 2, 3, 4):
        for s in spec_strings(("0", "P1", "Q1", "P2"), b):
            if zero_runs(parse_tags(s)) > 1:
                continue
            run = generate_kpotent(s, strategy="single_pass")
            emitted = sum(1 for _ in run)
            assert not run.stats.stuck and not run.unsound, s
            assert set(count_assignments(run)) <= {(1,) * len(run.cells)}, s
            assert emitted == run.stats.completed
            checked += 1
    assert checked == 300


def commutant(Ai, Aj):
    """Every sign block ``B`` with ``Ai B = B Aj`` and no ambiguous entry.

    Exhaustive over all ``3^(m n)`` blocks: rows of ``B`` become plus/minus
    bit masks, so each product row is an OR of masks over a grid with one
    axis per row of ``B``.
    """
    m, n = Ai.n, Aj.n
    rows = list(itertools.product((0, 1, 2), repeat=n))
    plus = np.array([sum(1 << c for c, x in enumerate(r) if x == 1) for r in rows], dtype=np.uint16)
    minus = np.array([sum(1 << c for c, x in enumerate(r) if x == 2) for r in rows], dtype=np.uint16)
    # row r of B Aj depends only on row r of B
    right_p = np.zeros(len(rows), dtype=np.uint16)
    right_m = np.zeros(len(rows), dtype=np.uint16)
    for idx, r in enumerate(rows):
        for c in range(n):
            prods = [(x, Aj.code(t, c)) for t, x in enumerate(r)]
            if any(a and b and a == b for a, b in prods):
                right_p[idx] |= 1 << c
            if any(a and b and a != b for a, b in prods):
                right_m[idx] |= 1 << c

    def along(v, axis):
        shape = [1] * m
        shape[axis] = len(rows)
        return v.reshape(shape)

    ok = np.ones([len(rows)] * m, dtype=bool)
    for r in range(m):
        lp = np.zeros([1] * m, dtype=np.uint16)
        lm = np.zeros([1] * m, dtype=np.uint16)
        for t in range(m):
            a = Ai.code(r, t)
            if a == 1:
                lp, lm = lp | along(plus, t), lm | along(minus, t)
            elif a == 2:
                lp, lm = lp | along(minus, t), lm | along(plus, t)
        ok &= ((lp & lm) == 0) & (lp == along(right_p, r)) & (lm == along(right_m, r))
    return {
        SignMatrix.from_codes([rows[b] for b in combo]) for combo in zip(*np.nonzero(ok))
    }


CYCLIC_TAGS = [BlockTag(kind, m) for kind in "PQ" for m in range(1, 5)]


@criterion(8, "block families equal the commutant for every P/Q pair with m, n <= 4")
def test_criterion_08_commutation_tables():
    for ti, tj in itertools.product(CYCLIC_TAGS, repeat=2):
        Ai, Aj = ti.matrix(), tj.matrix()
        fam = block_family(ti, tj)
        members = set(fam.members())
        assert len(members) == len(fam)
        brute = commutant(Ai, Aj)
        assert members == brute, (ti, tj)
        assert all(commute_check(Ai, B, Aj) for B in members)
        if ti.size * tj.size <= 9:
            for codes in itertools.product((0, 1, 2), repeat=ti.size * tj.size):
                B = SignMatrix(ti.size, tj.size, codes)
                assert commute_check(Ai, B, Aj) == (B in fam) == (B in members)
    # the three parity cases in which only the zero block commutes
    for ti, tj in ((P(3), Q(1)), (Q(1), P(3)), (Q(1), Q(2)), (P(1), Q(1)), (Q(2), Q(4))):
        assert commutant(ti.matrix(), tj.matrix()) == {SignMatrix.zeros(ti.size, tj.size)}
    # and their even counterparts, which do not vanish
    for ti, tj in ((P(2), Q(1)), (Q(1), P(2)), (Q(1), Q(1))):
        assert len(commutant(ti.matrix(), tj.matrix())) == 3


@criterion(9, "PPO fixtures from both generators realized exactly; non-PPO fixtures refused")
def test_criterion_09_allow_and_realize():
    realized = refused = 0
    fixtures = [(A, (1,) * A.n, diag, 1) for A, diag, _ in idempotent_fixtures()]
    fixtures += [
        (A, tuple(t.size for t in tags), tuple(not t.is_zero for t in tags), k)
        for A, tags, k in kpotent_fixtures()
    ]
    for A, sizes, nonzero, k in fixtures:
        ppo = structural_ppo(A, sizes, nonzero)
        allows, index = allows_kpotence(A)
        assert allows == ppo
        assert k % index == 0
        if ppo:
            B = build_realization(A)
            assert verify_realization(B, A, index)
            assert B ** (k + 1) == B
            realized += 1
        else:
            refused += 1
    assert realized and refused
    assert allows_kpotence(NOT_ALLOWING_2X2) == (False, 1)
    assert not two_by_two_allows(NOT_ALLOWING_2X2, 1)
    print(f"  realized {realized}, refused {refused}")


def random_block_pattern(rng):
    m = rng.randint(1, 5)
    upper = rng.random() < 0.7
    density = rng.choice([0.3, 0.5, 0.7])
    codes = [
        [
            rng.choice([1, 2]) if (not upper or j >= i) and rng.random() < density else 0
            for j in range(m)
        ]
        for i in range(m)
    ]
    R = SignMatrix.from_codes(codes)
    return expand(R, [rng.randint(1, 3) for _ in range(m)])


@criterion(10, "red(A^k) = red(red(A)^k) on 1000 random patterns; red(A)^(k+1) = red(A) on fixtures")
def test_criterion_10_red_commutes_with_powers():
    rng = random.Random(10)
    accepted = attempts = 0
    while accepted < 1000:
        attempts += 1
        assert attempts < 200000
        A = random_block_pattern(rng)
        k = rng.randint(1, 4)
        powers = [mat_pow(A, e) for e in range(1, k + 1)]
        R = red(A).entries
        Rk = mat_pow(R, k)
        if not all(M.is_proper() for M in powers) or not Rk.is_proper():
            continue
        assert red(powers[-1]).entries == red(Rk).entries
        accepted += 1
    fixtures = [(A, 1) for A, _, _ in idempotent_fixtures()]
    fixtures += [(A, k) for A, _, k in kpotent_fixtures()]
    for A, k in fixtures:
        R = red(A).entries
        assert mat_pow(R, k + 1) == R
    print(f"  random patterns {accepted} of {attempts} drawn, fixtures {len(fixtures)}")


@criterion(11, "allows(A) = allows(red(A)) on all fixtures after random expansion (sizes <= 3)")
def test_criterion_11_allow_is_red_invariant():
    rng = random.Random(11)
    fixtures = [A for A, _, _ in idempotent_fixtures()]
    fixtures += [A for A, _, _ in kpotent_fixtures()]
    for F in fixtures:
        A = expand(F, [rng.randint(1, 3) for _ in range(F.n)])
        assert allows_kpotence(A) == allows_kpotence(red(A).entries)
    print(f"  fixtures {len(fixtures)}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
