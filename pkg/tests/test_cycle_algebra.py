import itertools

import pytest

from dimercontract import fixtures
from dimercontract.contraction import ContractionSequence, contract_set, maximal_contraction_sequence
from dimercontract.cycle_algebra import (
    Bounds,
    Comparison,
    ContainmentError,
    Cyclicity,
    MembershipOverflow,
    NotCancellative,
    compare,
    cross_order_data,
    format_generators,
    generators,
    monomial_name,
    semigroup_contains,
    tau_bar,
    tau_bar_psi,
    verify_cyclic,
)
from dimercontract.pathalg import enumerate_cycles, paths_equal_mod_I, rewrites
from dimercontract.quiver import Path

CONIFOLD = fixtures.CONIFOLD
# simple matchings {a1},{a2},{b1},{b2} -> x, y, z, w
X, Y, Z, W = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)


def add(*ms):
    return tuple(map(sum, zip(*ms)))


def test_conifold_monomials():
    assert tau_bar(CONIFOLD, CONIFOLD.path("a1", "b1")) == add(X, Z)
    assert tau_bar(CONIFOLD, Path(0, ())) == (0, 0, 0, 0)
    assert tau_bar(CONIFOLD, CONIFOLD.face_path(0)) == (1, 1, 1, 1)


def test_tau_bar_psi_on_nc5():
    q = fixtures.NC5
    seq_a = contract_set(q, ["a"])
    # variables of the target: {x}, {y}, {z}, {b}
    assert tau_bar_psi(seq_a, q.path("x", "a", "b")) == (1, 0, 0, 1)
    assert tau_bar_psi(seq_a, q.face_path(0)) == (1, 1, 1, 1)
    seq_ab = contract_set(q, ["a", "b"])
    assert tau_bar_psi(seq_ab, q.path("x", "a", "b")) == (1, 0, 0)


def test_unit_cycles_map_to_sigma(fixture_quiver):
    q = fixture_quiver
    if q.name == "DEG4":
        return
    seq = maximal_contraction_sequence(q, check_postconditions=False)
    n = len(generators(seq.target, Bounds(1)).variables)
    for f in q.faces:
        assert tau_bar_psi(seq, q.face_path(f.id)) == (1,) * n


@pytest.mark.parametrize("name", ["CONIFOLD", "C3", "FIG1_Q"])
def test_tau_bar_constant_on_rewrite_classes(name):
    q = fixtures.get(name)
    seq = maximal_contraction_sequence(q)
    for base in range(q.n_vertices):
        for p in enumerate_cycles(q, base, 4):
            for r in rewrites(q, base, p.arrows, len(p) + q.max_face_length):
                assert tau_bar_psi(seq, Path(base, r)) == tau_bar_psi(seq, p)


def test_conifold_generators():
    g = generators(CONIFOLD)
    assert set(g.vectors) == {(1, 1, 1, 1), add(X, Z), add(X, W), add(Y, Z), add(Y, W)}
    assert g.vectors[0] == g.sigma


def test_c3_generators():
    assert set(generators(fixtures.C3).vectors) == {(1, 1, 1), (1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_nc5_ab_generators():
    g = generators(contract_set(fixtures.NC5, ["a", "b"]))
    x, y, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert set(g.vectors) == {(1, 1, 1), x, y, add(x, z), add(y, z)}


def test_generators_are_sigma_free_except_sigma(fixture_quiver):
    q = fixture_quiver
    if q.name == "DEG4":
        return
    g = generators(maximal_contraction_sequence(q).target)
    assert sum(v == g.sigma for v in g.vectors) == 1
    for v in g.vectors:
        assert v == g.sigma or min(v) == 0


def _brute_semigroup(gens, m):
    """Every combination with multiplicities bounded by the target."""
    ranges = []
    for g in gens:
        sup = [i for i, e in enumerate(g) if e]
        ranges.append(range(min(m[i] // g[i] for i in sup) + 1))
    for ks in itertools.product(*ranges):
        if tuple(sum(k * g[i] for k, g in zip(ks, gens)) for i in range(len(m))) == tuple(m):
            return True
    return False


def test_semigroup_membership_examples():
    gens = generators(CONIFOLD).vectors
    assert semigroup_contains(gens, add(X, Z, Y, W))
    assert not semigroup_contains(gens, X)
    assert semigroup_contains(gens, (0, 0, 0, 0))
    with pytest.raises(ValueError):
        semigroup_contains(gens, (-1, 0, 0, 0))


def test_semigroup_membership_matches_brute_force():
    gens = list(generators(CONIFOLD).vectors)
    for m in itertools.product(range(3), repeat=4):
        assert semigroup_contains(gens, m) == _brute_semigroup(gens, m)


def test_membership_overflow_is_distinct():
    gens = [(2, 1), (1, 2)]
    with pytest.raises(MembershipOverflow):
        semigroup_contains(gens, (40, 41), node_cap=1)
    assert semigroup_contains(gens, (40, 41)) == _brute_semigroup(gens, (40, 41))


def test_compare_nc5_cases():
    q = fixtures.NC5
    for arrows, expected in ((["a"], Comparison.EQUAL), (["a", "b"], Comparison.PROPER_SUBSET)):
        seq = contract_set(q, arrows)
        b = Bounds(20)
        assert compare(generators(seq, b), generators(seq.target, b)) is expected


def test_compare_identity_is_equal():
    seq = ContractionSequence(CONIFOLD, ())
    assert verify_cyclic(seq).verdict is Cyclicity.CYCLIC


def test_compare_rejects_mismatched_bounds_and_variables():
    seq = contract_set(fixtures.NC5, ["a"])
    assert compare(generators(seq, Bounds(12)), generators(seq.target, Bounds(16))) is Comparison.INCONCLUSIVE
    with pytest.raises(ValueError):
        compare(generators(CONIFOLD), generators(fixtures.C3))


def test_containment_failure_is_a_hard_error():
    S2 = generators(fixtures.C3)
    S = generators(contract_set(fixtures.NC5, ["a", "b"]))
    with pytest.raises(ContainmentError):
        compare(S2.__class__(S.variables, S2.generators, S.bounds), S.__class__(S.variables, S.generators, S.bounds))
    assert compare(S2.__class__(S.variables, S2.generators, S.bounds), S, strict=False) is Comparison.INCOMPARABLE


def test_verify_refuses_non_cancellative_target():
    with pytest.raises(NotCancellative):
        verify_cyclic(ContractionSequence(fixtures.NC5, ()))


def test_report_lines():
    r = verify_cyclic(contract_set(fixtures.NC5, ["a", "b"]))
    assert r.lines() == [
        "S  = k[xD0*xD1*xD2, xD1, xD0, xD1*xD2, xD0*xD2]",
        "S' = k[xD0*xD1*xD2, xD2, xD1, xD0]",
        "verdict: not-cyclic (bounds: len=20, |u|<=3)",
    ]


def test_monomial_names():
    assert monomial_name((0, 0)) == "1"
    assert monomial_name((2, 0, 1)) == "xD0^2*xD2"


def test_monomial_class_shares_one_sigma_free_part():
    # within a class u, every cycle monomial is g * sigma^m for one g
    for name in ["CONIFOLD", "C3"]:
        q = fixtures.get(name)
        parts = {}
        for base in range(q.n_vertices):
            for p in enumerate_cycles(q, base, 6):
                m = tau_bar(q, p)
                k = min(m)
                g = tuple(e - k for e in m)
                u = tuple(int(x) for x in q.windings[list(p.arrows)].sum(axis=0))
                parts.setdefault(u, set()).add(g)
        assert all(len(s) == 1 for s in parts.values())


def test_cross_order_data_is_label_free():
    a = cross_order_data(contract_set(fixtures.NC5, ["a"]).target)
    b = cross_order_data(contract_set(fixtures.NC5, ["b"]).target)
    assert a == b == cross_order_data(CONIFOLD)
