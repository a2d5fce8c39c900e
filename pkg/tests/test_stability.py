"""Stability classification, Hilbert data, graded objects, stratification."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import assume, given, settings, strategies as st

from fiberjac.fibers import (
    IrreducibleFiberError,
    KodairaType,
    Polarization,
    build_fiber,
    euler_characteristic,
    proper_connected_subcurves,
    subcurve,
)
from fiberjac.stability import (
    DegreeVectorError,
    GradedObject,
    LineBundle,
    MultiDegree,
    NodalTorsionFree,
    NotSemistableError,
    SearchSpaceError,
    SingularPointDual,
    StabilityClass,
    SubsheafOnSubcurve,
    UnsupportedSheafError,
    classify_by_rule,
    classify_sheaf,
    enumerate_stratification,
    graded_object,
    hilbert_data,
    iter_degree_vectors,
    oracle_classify,
    s_equivalent,
)

REDUCIBLE = [KodairaType("I", n) for n in range(2, 7)] + [
    KodairaType("III"),
    KodairaType("IV"),
]

fiber_types = st.sampled_from(REDUCIBLE)


@st.composite
def fiber_and_degrees(draw, max_abs=3):
    kodaira = draw(fiber_types)
    n = kodaira.component_count
    head = draw(
        st.lists(st.integers(-max_abs, max_abs), min_size=n - 1, max_size=n - 1)
    )
    last = -sum(head)
    assume(abs(last) <= max_abs)
    return kodaira, tuple(head) + (last,)


def graph_automorphisms(kodaira):
    """Permutations of components preserving the intersection matrix."""
    n = kodaira.component_count
    if kodaira.symbol == "IV":
        return [tuple(p) for p in permutations(range(3))]
    if n == 2:
        return [(0, 1), (1, 0)]
    out = []
    for shift in range(n):
        out.append(tuple((i + shift) % n for i in range(n)))
        out.append(tuple((shift - i) % n for i in range(n)))
    return out


# -- Hilbert data -------------------------------------------------------------


def test_trivial_bundle_has_rank_one_degree_zero():
    g = build_fiber(KodairaType("I", 2))
    data = hilbert_data(g, (1, 1), LineBundle((0, 0)))
    assert (data.rank, data.degree, data.slope) == (1, 0, 0)


def test_point_extension_classes_have_rank_one_degree_zero():
    g2 = build_fiber(KodairaType("I", 2))
    for sheaf in (
        LineBundle((1, -1)),
        NodalTorsionFree(node=0, pullback_degrees=(-1, 0)),
    ):
        data = hilbert_data(g2, None, sheaf)
        assert (data.rank, data.degree) == (1, 0)
    g3 = build_fiber(KodairaType("III"))
    data = hilbert_data(g3, (3, 4), SingularPointDual("tacnode"))
    assert (data.rank, data.degree, data.slope) == (1, 0, 0)


def test_restricted_subsheaf_of_trivial_bundle_on_i2():
    # chi of the subsheaf supported on C1 is 0 - 2 + 1 = -1; with weights
    # (1, 1) its polarized rank is 1/2, so the slope is -2
    g = build_fiber(KodairaType("I", 2))
    sub = subcurve(g, [0])
    data = hilbert_data(g, (1, 1), SubsheafOnSubcurve((0, 0), sub))
    assert data.degree == -1
    assert data.rank == Fraction(1, 2)
    assert data.slope == -2


def test_hilbert_rejects_skyscraper_support():
    from fiberjac.fibers import Subcurve

    g = build_fiber(KodairaType("I", 2))
    with pytest.raises(Exception):
        hilbert_data(g, None, SubsheafOnSubcurve((0, 0), Subcurve((), True)))


@pytest.mark.parametrize(
    "kodaira",
    [KodairaType("I", n) for n in range(2, 9)] + [KodairaType("III"), KodairaType("IV")],
)
def test_chi_additivity_over_all_proper_connected_subcurves(kodaira):
    # chi(L) = chi(L_D) + chi(L restricted to the complement), where the
    # restriction to the complement has chi = deg + chi(O) there
    g = build_fiber(kodaira)
    n = g.n
    samples = [(0,) * n, tuple(1 if i == 0 else (-1 if i == 1 else 0) for i in range(n))]
    if n >= 3:
        samples.append(tuple(2 if i == 0 else (-2 if i == n - 1 else 0) for i in range(n)))
    for degrees in samples:
        total_chi = sum(degrees)
        for sub in proper_connected_subcurves(g):
            complement = subcurve(g, set(range(n)) - set(sub.indices))
            if not complement.connected:
                continue
            chi_sub = hilbert_data(g, None, SubsheafOnSubcurve(degrees, sub)).degree
            chi_restriction = sum(degrees[i] for i in complement.indices) + (
                euler_characteristic(g, complement)
            )
            assert chi_sub + chi_restriction == total_chi


def test_disconnected_subsheaf_chi_is_sum_over_pieces():
    g = build_fiber(KodairaType("I", 6))
    degrees = (1, 0, -1, 1, 0, -1)
    whole = subcurve(g, [0, 3])
    assert not whole.connected
    chi = hilbert_data(g, None, SubsheafOnSubcurve(degrees, whole)).degree
    parts = [
        hilbert_data(g, None, SubsheafOnSubcurve(degrees, subcurve(g, [i]))).degree
        for i in (0, 3)
    ]
    assert chi == sum(parts)


def test_multidegree_input_gives_full_support_data():
    g = build_fiber(KodairaType("I", 3))
    data = hilbert_data(g, None, MultiDegree((1, -1, 0)))
    assert (data.rank, data.degree, data.slope) == (1, 0, 0)


def test_hilbert_polynomial_reproduces_twisted_chi():
    from fiberjac.stability import hilbert_polynomial_value

    # chi of L_D twisted by O(nH) is chi(L_D) + n h_D, computed directly
    # on the support; the Hilbert polynomial must match for every n
    g = build_fiber(KodairaType("I", 4))
    pol = Polarization((2, 1, 3, 1))
    degrees = (1, 0, 0, -1)
    for sub in proper_connected_subcurves(g):
        data = hilbert_data(g, pol, SubsheafOnSubcurve(degrees, sub))
        h_d = sum(pol.weights[i] for i in sub.indices)
        for n in range(-3, 4):
            twisted_chi = data.degree + n * h_d
            assert hilbert_polynomial_value(data, n, pol.total) == twisted_chi
    # the full-support class has P(n) = n h
    data = hilbert_data(g, pol, LineBundle(degrees))
    for n in range(-3, 4):
        assert hilbert_polynomial_value(data, n, pol.total) == n * pol.total


# -- combinatorial rule -------------------------------------------------------


def test_rule_zero_vector_is_stable():
    g = build_fiber(KodairaType("I", 2))
    assert classify_by_rule(g, (0, 0)).verdict is StabilityClass.STABLE


def test_rule_alternating_after_zero_removal_is_semistable():
    g = build_fiber(KodairaType("I", 3))
    assert (
        classify_by_rule(g, (1, -1, 0)).verdict is StabilityClass.STRICTLY_SEMISTABLE
    )


def test_rule_entry_outside_unit_box_is_unstable():
    g = build_fiber(KodairaType("I", 4))
    verdict = classify_by_rule(g, (1, 0, 1, -2))
    assert verdict.verdict is StabilityClass.UNSTABLE
    assert oracle_classify(g, None, (1, 0, 1, -2)).verdict is StabilityClass.UNSTABLE


def test_rule_adjacent_equal_nonzero_is_unstable():
    g = build_fiber(KodairaType("I", 4))
    assert classify_by_rule(g, (1, 1, -1, -1)).verdict is StabilityClass.UNSTABLE
    # zeros between the two +1 entries do not separate them
    g6 = build_fiber(KodairaType("I", 6))
    assert classify_by_rule(g6, (1, 0, 1, 0, -1, -1)).verdict is StabilityClass.UNSTABLE


def test_rule_wraparound_adjacency_counts():
    g = build_fiber(KodairaType("I", 4))
    assert classify_by_rule(g, (1, -1, -1, 1)).verdict is StabilityClass.UNSTABLE
    assert (
        classify_by_rule(g, (1, -1, 1, -1)).verdict
        is StabilityClass.STRICTLY_SEMISTABLE
    )


def test_rule_on_iv_is_order_independent():
    g = build_fiber(KodairaType("IV"))
    for degrees in set(permutations((1, -1, 0))):
        assert (
            classify_by_rule(g, degrees).verdict is StabilityClass.STRICTLY_SEMISTABLE
        )


def test_rule_rejects_irreducible_fibers_and_bad_vectors():
    with pytest.raises(IrreducibleFiberError):
        classify_by_rule(build_fiber(KodairaType("I", 1)), (0,))
    g = build_fiber(KodairaType("I", 3))
    with pytest.raises(DegreeVectorError):
        classify_by_rule(g, (1, -1))
    with pytest.raises(DegreeVectorError):
        classify_by_rule(g, (1, 1, 1))


# -- subcurve oracle ----------------------------------------------------------


def test_oracle_semistable_with_witness():
    g = build_fiber(KodairaType("I", 2))
    verdict = oracle_classify(g, (1, 1), (1, -1))
    assert verdict.verdict is StabilityClass.STRICTLY_SEMISTABLE
    assert verdict.witness.indices == (0,)
    data = hilbert_data(g, (1, 1), SubsheafOnSubcurve((1, -1), verdict.witness))
    assert data.degree == 0


def test_oracle_unstable_with_witness():
    g = build_fiber(KodairaType("I", 2))
    verdict = oracle_classify(g, (1, 1), (2, -2))
    assert verdict.verdict is StabilityClass.UNSTABLE
    assert verdict.witness.indices == (0,)
    data = hilbert_data(g, (1, 1), SubsheafOnSubcurve((2, -2), verdict.witness))
    assert data.degree == 1


def test_oracle_stable_zero_vector():
    g = build_fiber(KodairaType("I", 4))
    verdict = oracle_classify(g, None, (0, 0, 0, 0))
    assert verdict.verdict is StabilityClass.STABLE
    assert verdict.witness is None
    # every proper connected subcurve has chi = -1 there
    for sub in proper_connected_subcurves(g):
        assert hilbert_data(g, None, SubsheafOnSubcurve((0, 0, 0, 0), sub)).degree == -1


def test_oracle_rejects_irreducible():
    with pytest.raises(IrreducibleFiberError):
        oracle_classify(build_fiber(KodairaType("II")), None, (0,))


@settings(deadline=None, max_examples=300)
@given(fiber_and_degrees())
def test_rule_matches_oracle(case):
    kodaira, degrees = case
    g = build_fiber(kodaira)
    assert (
        classify_by_rule(g, degrees).verdict
        is oracle_classify(g, None, degrees).verdict
    )


@settings(deadline=None, max_examples=150)
@given(fiber_and_degrees(), st.data())
def test_oracle_verdict_ignores_polarization(case, data):
    kodaira, degrees = case
    g = build_fiber(kodaira)
    weights = data.draw(
        st.lists(st.integers(1, 10), min_size=g.n, max_size=g.n)
    )
    base = oracle_classify(g, None, degrees)
    other = oracle_classify(g, Polarization(tuple(weights)), degrees)
    assert base.verdict is other.verdict
    assert base.witness == other.witness


@settings(deadline=None, max_examples=150)
@given(fiber_and_degrees(), st.data())
def test_verdict_invariant_under_graph_automorphisms(case, data):
    kodaira, degrees = case
    g = build_fiber(kodaira)
    sigma = data.draw(st.sampled_from(graph_automorphisms(kodaira)))
    permuted = tuple(degrees[sigma[i]] for i in range(g.n))
    assert (
        oracle_classify(g, None, degrees).verdict
        is oracle_classify(g, None, permuted).verdict
    )


@settings(deadline=None, max_examples=150)
@given(fiber_and_degrees())
def test_disconnected_candidates_never_change_the_verdict(case):
    kodaira, degrees = case
    g = build_fiber(kodaira)
    a = oracle_classify(g, None, degrees).verdict
    b = oracle_classify(g, None, degrees, include_disconnected=True).verdict
    assert a is b


# -- sheaf-class classification ------------------------------------------------


def test_classify_sheaf_point_extension_families():
    g = build_fiber(KodairaType("I", 3))
    nodal = NodalTorsionFree(node=1, pullback_degrees=(-1, 0, 0))
    assert classify_sheaf(g, nodal).verdict is StabilityClass.STRICTLY_SEMISTABLE
    giii = build_fiber(KodairaType("III"))
    assert (
        classify_sheaf(giii, SingularPointDual("tacnode")).verdict
        is StabilityClass.STRICTLY_SEMISTABLE
    )


def test_classify_sheaf_on_integral_fibers_is_stable():
    g1 = build_fiber(KodairaType("I", 1))
    assert (
        classify_sheaf(g1, NodalTorsionFree(node=0, pullback_degrees=(-1,))).verdict
        is StabilityClass.STABLE
    )
    g2 = build_fiber(KodairaType("II"))
    assert classify_sheaf(g2, SingularPointDual("cusp")).verdict is StabilityClass.STABLE
    assert classify_sheaf(g2, LineBundle((0,))).verdict is StabilityClass.STABLE


def test_classify_sheaf_rejects_unsupported_shapes():
    g = build_fiber(KodairaType("I", 3))
    with pytest.raises(UnsupportedSheafError):
        classify_sheaf(g, NodalTorsionFree(node=0, pullback_degrees=(1, -1, -1)))
    with pytest.raises(UnsupportedSheafError):
        classify_sheaf(g, SingularPointDual("tacnode"))
    with pytest.raises(Exception):
        NodalTorsionFree(node=0, pullback_degrees=(0, 0, 0))
    with pytest.raises(Exception):
        LineBundle((1, 0, 0))


# -- graded objects and S-equivalence ------------------------------------------


def test_graded_object_of_semistable_collapses_to_minus_one_factors():
    g = build_fiber(KodairaType("I", 2))
    graded = graded_object(g, (1, -1))
    assert graded.stable_factor is None
    assert graded.factors == ((0, -1), (1, -1))


def test_graded_object_of_stable_class_is_itself():
    g = build_fiber(KodairaType("I", 5))
    graded = graded_object(g, (0,) * 5)
    assert graded == GradedObject(stable_factor=LineBundle((0,) * 5), factors=())


def test_graded_object_of_tacnode_class():
    g = build_fiber(KodairaType("III"))
    graded = graded_object(g, SingularPointDual("tacnode"))
    assert graded.factors == ((0, -1), (1, -1))


def test_graded_object_rejects_unstable():
    g = build_fiber(KodairaType("I", 2))
    with pytest.raises(NotSemistableError):
        graded_object(g, (2, -2))


def test_s_equivalence_examples():
    g = build_fiber(KodairaType("I", 2))
    assert s_equivalent(g, (1, -1), (-1, 1))
    assert not s_equivalent(g, (0, 0), (1, -1))
    assert s_equivalent(g, (1, -1), (1, -1))
    assert s_equivalent(g, (0, 0), (0, 0))
    # the nodal point-extension class sits in the same class as (1, -1)
    assert s_equivalent(g, NodalTorsionFree(node=0, pullback_degrees=(-1, 0)), (1, -1))


# -- stratification -------------------------------------------------------------


def test_stratification_i2_bound_one():
    g = build_fiber(KodairaType("I", 2))
    report = enumerate_stratification(g, 1)
    assert report.counts == {"Stable": 1, "StrictlySemistable": 2, "Unstable": 0}
    assert report.rule_counts == report.counts
    assert report.vectors["Stable"] == [(0, 0)]
    assert report.vectors["StrictlySemistable"] == [(-1, 1), (1, -1)]
    assert report.disagreements == []


def test_stratification_i3_bound_one():
    g = build_fiber(KodairaType("I", 3))
    report = enumerate_stratification(g, 1)
    assert report.counts["Stable"] == 1
    assert report.counts["StrictlySemistable"] == 6
    assert report.counts["Unstable"] == 0
    assert report.vectors["Stable"] == [(0, 0, 0)]


def test_stratification_iv_bound_two_has_no_disagreements():
    g = build_fiber(KodairaType("IV"))
    report = enumerate_stratification(g, 2)
    assert report.disagreements == []
    assert report.vectors["Stable"] == [(0, 0, 0)]


def test_stratification_vector_lists_are_sorted():
    g = build_fiber(KodairaType("I", 3))
    report = enumerate_stratification(g, 2)
    for vectors in report.vectors.values():
        assert vectors == sorted(vectors)
    assert sum(report.counts.values()) == sum(
        1 for _ in iter_degree_vectors(3, 2)
    )


def test_stratification_cap_refusal_names_required_cap():
    g = build_fiber(KodairaType("I", 6))
    with pytest.raises(SearchSpaceError) as err:
        enumerate_stratification(g, 2, cap=100)
    assert str(5 ** 6) in str(err.value)


def test_stratification_rejects_irreducible_and_bad_bound():
    with pytest.raises(IrreducibleFiberError):
        enumerate_stratification(build_fiber(KodairaType("I", 1)), 1)
    with pytest.raises(Exception):
        enumerate_stratification(build_fiber(KodairaType("I", 2)), 0)


def test_iter_degree_vectors_is_lexicographic_and_complete():
    vectors = list(iter_degree_vectors(2, 1))
    assert vectors == [(-1, 1), (0, 0), (1, -1)]
    vectors = list(iter_degree_vectors(3, 1))
    assert len(vectors) == 7
    assert vectors == sorted(vectors)
