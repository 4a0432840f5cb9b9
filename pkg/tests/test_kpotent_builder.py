import itertools

import pytest

from signpotent.cyclic_forms import P, Q, ZERO_BLOCK, make_P, make_Q, parse_tags
from signpotent.kpotent_builder import (
    CirculantSpec,
    FamilyKind,
    block_family,
    commute_check,
    condition_of_kpotence,
    generate_kpotent,
    materialize,
    zero_runs,
)
from signpotent.oracle import block_structured_kpotent
from signpotent.search import Sample, count_assignments
from signpotent.sign_algebra import SignMatrix, mat_mul, mat_pow, subpattern

from patterns import (
    COUNTEREXAMPLE_4X4,
    STUCK_BLOCKS,
    STUCK_FIXED,
    WORKED_KPOTENT,
    WORKED_KPOTENT_BLOCKS,
    WORKED_KPOTENT_SIZES,
)


def test_family_examples():
    fam = block_family(P(2), P(2))
    assert fam.kind is FamilyKind.CIRCULANT and fam.g == 2 and len(list(fam.members())) == 9
    assert block_family(Q(1), Q(2)).kind is FamilyKind.ZERO_FORCED
    fam = block_family(Q(1), P(2))
    assert fam.kind is FamilyKind.ANTICIRCULANT and fam.alternation
    assert block_family(ZERO_BLOCK, P(3)).kind is FamilyKind.ROW_VECTOR
    assert block_family(Q(2), ZERO_BLOCK).kind is FamilyKind.COL_VECTOR
    assert block_family(ZERO_BLOCK, ZERO_BLOCK).kind is FamilyKind.ZERO_FORCED
    assert len(block_family(ZERO_BLOCK, ZERO_BLOCK, adjacent=False)) == 3


def test_materialize_examples():
    spec = CirculantSpec(FamilyKind.CIRCULANT, 2, (1, 0))
    assert materialize(spec, 2, 2) == SignMatrix.identity(2)
    spec = CirculantSpec(FamilyKind.ANTICIRCULANT, 1, (1,), alternation=True)
    assert materialize(spec, 1, 2) == SignMatrix.from_rows(["+-"])
    worked = WORKED_KPOTENT.block(0, 2, 3, 5)
    assert worked == SignMatrix.from_rows(["-+", "+-"])
    assert block_family(P(2), P(2)).spec_of(worked).b == (2, 1)
    with pytest.raises(ValueError):
        materialize(CirculantSpec(FamilyKind.CIRCULANT, 2, (1, 0)), 3, 2)
    with pytest.raises(ValueError):
        CirculantSpec(FamilyKind.CIRCULANT, 2, (1,))


def test_commute_examples():
    B = materialize(CirculantSpec(FamilyKind.CIRCULANT, 2, (1, 2)), 2, 2)
    assert commute_check(make_P(2), B, make_P(2))
    assert not commute_check(make_P(2), SignMatrix.from_rows(["+0", "00"]), make_P(2))
    assert commute_check(make_P(2), SignMatrix.zeros(2), make_P(2))


def all_blocks(r, c):
    for codes in itertools.product((0, 1, 2), repeat=r * c):
        yield SignMatrix(r, c, codes)


@pytest.mark.parametrize("ti,tj", [
    (a, b)
    for a in (P(1), P(2), P(3), Q(1), Q(2), Q(3))
    for b in (P(1), P(2), P(3), Q(1), Q(2), Q(3))
    if a.size * b.size <= 6
])
def test_family_is_the_commutant(ti, tj):
    fam = block_family(ti, tj)
    Ai, Aj = ti.matrix(), tj.matrix()
    members = set(fam.members())
    for B in all_blocks(ti.size, tj.size):
        assert (B in members) == commute_check(Ai, B, Aj) == (B in fam)


def test_worked_example_is_emitted():
    run = generate_kpotent(WORKED_KPOTENT_BLOCKS)
    mats = [p.matrix for p in run]
    assert WORKED_KPOTENT in mats
    assert mat_pow(WORKED_KPOTENT, 3) == WORKED_KPOTENT
    assert run.k == 2 and not run.unsound


def test_stuck_prefix_is_pruned():
    run = generate_kpotent(STUCK_BLOCKS, fixed=STUCK_FIXED)
    assert list(run) == []
    assert [s.cell for s in run.stats.stuck] == [(0, 3)]


def test_single_block():
    assert [p.matrix for p in generate_kpotent("P3")] == [make_P(3)]


def test_single_pass_needs_one_zero_run():
    assert zero_runs(parse_tags(STUCK_BLOCKS)) == 2
    with pytest.raises(ValueError):
        generate_kpotent(STUCK_BLOCKS, strategy="single_pass")


def test_condition_examples():
    cond = condition_of_kpotence(WORKED_KPOTENT, WORKED_KPOTENT_SIZES, 2)
    assert all(cond.values())
    cond = condition_of_kpotence(COUNTEREXAMPLE_4X4, (1, 1, 1, 1), 1)
    assert cond[0, 3] is False
    for k in (1, 2, 5):
        assert all(condition_of_kpotence(SignMatrix.zeros(3), (1, 2), k).values())


def blocks_of(tags, A):
    offsets = list(itertools.accumulate([0] + [t.size for t in tags]))
    return {
        (i, j): A.block(offsets[i], offsets[i + 1], offsets[j], offsets[j + 1])
        for i in range(len(tags))
        for j in range(i, len(tags))
    }


SMALL_SPECS = ["P1,P1", "0,P2", "P2,0", "Q1,0,P1", "P2,P2", "Q1,Q1,0", "0,P1,0", "P1,0,0,Q1",
               "0,P2,0,P1", "P2,0,P2,Q1"]


@pytest.mark.parametrize("spec", SMALL_SPECS)
def test_matches_block_oracle(spec):
    tags = parse_tags(spec)
    run = generate_kpotent(tags)
    got = [p.matrix for p in run]
    assert len(got) == len(set(got))
    oracle = block_structured_kpotent([t.matrix() for t in tags], run.k)
    assert set(got) == set(oracle)
    assert not run.unsound


@pytest.mark.parametrize("spec", [s for s in SMALL_SPECS if zero_runs(parse_tags(s)) <= 1])
def test_single_pass_agrees(spec):
    run = generate_kpotent(spec, strategy="single_pass")
    got = {p.matrix for p in run}
    assert got == {p.matrix for p in generate_kpotent(spec)}
    assert not run.stats.stuck and not run.unsound
    assert set(count_assignments(run)) <= {(1,) * len(run.cells)}


@pytest.mark.parametrize("spec", ["P2,0,P2,Q1", "Q1,0,P1", "0,P2,0,P1"])
def test_blocks_are_subpatterns_of_their_sandwiches(spec):
    tags = parse_tags(spec)
    for p in generate_kpotent(tags):
        k = p.k
        blk = blocks_of(tags, p.matrix)
        for (i, j), Aij in blk.items():
            if i == j:
                continue
            for h in range(k + 1):
                left = mat_pow(blk[i, i], k - h)
                right = mat_pow(blk[j, j], h)
                assert subpattern(mat_mul(mat_mul(left, Aij), right), Aij)


def test_index_divides_spec_k():
    for p in generate_kpotent("P2,Q1"):
        assert p.k == 2
        assert p.index in (1, 2)


def test_sampling_is_reproducible():
    a = [p.matrix for p in generate_kpotent("P2,0,P2,Q1", mode=Sample(4, seed=3))]
    b = [p.matrix for p in generate_kpotent("P2,0,P2,Q1", mode=Sample(4, seed=3))]
    assert a == b and len(a) == 4
