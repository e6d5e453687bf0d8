import re

import pytest
from hypothesis import given, strategies as st

from conftest import same_up_to_labels
from dimercontract import fixtures
from dimercontract.contraction import (
    ContractionError,
    DriverError,
    Tri,
    check_relations_preserved,
    contract_arrow,
    contract_set,
    is_cancellative,
    maximal_contraction_sequence,
    parse_tie_break,
    psi_path,
    seeded,
    step_lines,
)
from dimercontract.generate import random_instance
from dimercontract.matchings import classify
from dimercontract.quiver import Path, homology_class, validate


def test_contracting_a_in_nc5_gives_the_conifold():
    q = fixtures.NC5
    step = contract_arrow(q, q.arrow_id("a"))
    assert validate(step.target).ok
    assert step.arrow_map[q.arrow_id("a")] is None
    assert step.vertex_map == (0, 1, 1)
    assert same_up_to_labels(step.target, fixtures.CONIFOLD)


def test_loops_cannot_be_contracted():
    with pytest.raises(ContractionError):
        contract_arrow(fixtures.C3, 0)


def test_contract_set_refuses_unoriented_cycles():
    q = fixtures.CONIFOLD
    with pytest.raises(ContractionError):
        contract_set(q, ["a1", "b1"])


def test_contract_set_nc5_ab_gives_c3():
    seq = contract_set(fixtures.NC5, ["a", "b"])
    assert not seq.maximal
    t = seq.target
    # C3 up to labels and a change of lattice basis
    assert (t.n_vertices, t.n_arrows) == (1, 3)
    assert sorted((f.sign, len(f.boundary)) for f in t.faces) == [(-1, 3), (1, 3)]
    assert validate(t).ok
    assert seq.contracted == {3, 4}


def test_psi_keeps_cycle_classes():
    q = fixtures.NC5
    seq = contract_set(q, ["a"])
    for f in q.faces:
        p = q.face_path(f.id)
        assert homology_class(seq.target, psi_path(seq, p)) == homology_class(q, p)
    p = q.path("y", "a", "b")
    assert homology_class(seq.target, psi_path(seq, p)) == (0, 1)


@given(st.integers(0, 10_000), st.data())
def test_forest_contractions_preserve_relations(seed, data):
    q = random_instance(seed)
    arrows = data.draw(st.lists(st.integers(0, q.n_arrows - 1), max_size=3, unique=True))
    try:
        seq = contract_set(q, arrows)
    except ContractionError:
        return
    assert check_relations_preserved(seq).ok


def test_relations_preserved_for_worked_contractions():
    for arrows in (["a"], ["a", "b"]):
        assert check_relations_preserved(contract_set(fixtures.NC5, arrows)).ok
    q = fixtures.FIG1_Q
    assert check_relations_preserved(contract_set(q, ["delta"])).ok


def test_driver_on_nc5():
    seq = maximal_contraction_sequence(fixtures.NC5)
    assert seq.maximal and len(seq.steps) == 1
    assert fixtures.NC5.arrow_name(seq.steps[0].arrow) == "a"
    assert same_up_to_labels(seq.target, fixtures.CONIFOLD)


def test_after_contracting_a_b_is_rigid():
    t = contract_arrow(fixtures.NC5, fixtures.NC5.arrow_id("a")).target
    assert not classify(t).nonrigid_arrows


def test_driver_refuses_degenerate_input():
    with pytest.raises(DriverError):
        maximal_contraction_sequence(fixtures.DEG4)


def test_driver_on_fig1():
    q = fixtures.FIG1_Q
    seq = maximal_contraction_sequence(q)
    assert [q.arrow_name(s.arrow) for s in seq.steps] == ["delta"]


def test_driver_on_fig3_default_order():
    q = fixtures.FIG3_SEQ
    seq = maximal_contraction_sequence(q)
    names = [s.source.arrow_name(s.arrow) for s in seq.steps]
    assert names == ["u", "n"]
    assert 1 in {len(f.boundary) for f in seq.target.faces}


def test_fig3_parallel_arrow_branch_meets_a_nonrigid_loop():
    # documented divergence: contracting n first leaves m as a loop that lies
    # in no perfect matching, so the next pick can be a nonrigid loop
    q = fixtures.FIG3_SEQ
    picks = iter(["n", "m"])
    tb = lambda cur, cands: cur.arrow_id(next(picks))
    with pytest.raises(DriverError, match="is a loop"):
        maximal_contraction_sequence(q, tb)


def test_every_step_contracts_a_nonrigid_arrow():
    for seed in range(10):
        q = random_instance(seed)
        seq = maximal_contraction_sequence(q, seeded(seed))
        for s in seq.steps:
            assert s.arrow in classify(s.source).nonrigid_arrows
            assert validate(s.target).ok
        assert not classify(seq.target).nonrigid_arrows


def test_is_cancellative_verdicts():
    assert is_cancellative(fixtures.CONIFOLD) is Tri.YES
    assert is_cancellative(fixtures.C3) is Tri.YES
    assert is_cancellative(fixtures.NC5) is Tri.NO
    assert is_cancellative(fixtures.FIG1_Q) is Tri.NO


def test_tie_break_parsing():
    assert parse_tie_break("id")(None, [5, 2, 7]) == 2
    pick = parse_tie_break("seed:4")
    assert pick(None, [1, 2, 3]) in (1, 2, 3)
    with pytest.raises(ValueError):
        parse_tie_break("random")


def test_seeded_tie_break_is_reproducible():
    a = [seeded(9)(None, list(range(10))) for _ in range(1)]
    b = [seeded(9)(None, list(range(10))) for _ in range(1)]
    assert a == b


def test_step_line_format():
    lines = step_lines(contract_set(fixtures.NC5, ["a", "b"]))
    assert lines == [
        "step 0: contract arrow 3 (1->2), |Q0| 3 -> 2",
        "step 1: contract arrow 3 (1->0), |Q0| 2 -> 1",
    ]
    for line in lines:
        assert re.fullmatch(r"step \d+: contract arrow \d+ \(\d+->\d+\), \|Q0\| \d+ -> \d+", line)
