"""Dual graph construction, subcurve combinatorics and fiber points."""

from __future__ import annotations

import json
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from fiberjac.fibers import (
    FiberDescriptionError,
    FiberError,
    IrreducibleFiberError,
    KodairaType,
    NodePoint,
    Polarization,
    SmoothPoint,
    TangencyPoint,
    TriplePoint,
    boundary,
    boundary_points,
    build_fiber,
    connected_pieces,
    euler_characteristic,
    load_fiber_description,
    node_components,
    parse_fiber_description,
    parse_fiber_label,
    proper_connected_subcurves,
    singular_points,
    subcurve,
    validate_point,
)

REDUCIBLE = [KodairaType("I", n) for n in range(2, 7)] + [
    KodairaType("III"),
    KodairaType("IV"),
]


def brute_force_connected_subsets(graph):
    """Independent connectivity check: union-find over all subsets."""
    n = graph.n
    out = []
    for size in range(1, n):
        for combo in combinations(range(n), size):
            parent = {i: i for i in combo}

            def find(i):
                while parent[i] != i:
                    parent[i] = parent[parent[i]]
                    i = parent[i]
                return i

            for i, j in combinations(combo, 2):
                if graph.pairwise(i, j) > 0:
                    parent[find(i)] = find(j)
            if len({find(i) for i in combo}) == 1:
                out.append(combo)
    return sorted(out)


# -- construction -----------------------------------------------------------


def test_i2_two_components_meeting_twice():
    g = build_fiber(KodairaType("I", 2))
    assert g.components == ("C1", "C2")
    assert g.intersections == ((0, 2), (2, 0))
    assert g.singularities == "nodes"


def test_iii_tangent_pair():
    g = build_fiber(KodairaType("III"))
    assert g.intersections == ((0, 2), (2, 0))
    assert g.singularities == "tangency"


def test_iv_three_concurrent_lines():
    g = build_fiber(KodairaType("IV"))
    assert g.intersections == ((0, 1, 1), (1, 0, 1), (1, 1, 0))
    assert g.singularities == "triple_point"


def test_smooth_single_component_empty_matrix():
    g = build_fiber(KodairaType("smooth"))
    assert g.components == ("C1",)
    assert g.intersections == ((0,),)
    assert g.singularities == "none"


@pytest.mark.parametrize("n", [3, 4, 5, 8])
def test_cycle_matrix(n):
    g = build_fiber(KodairaType("I", n))
    for i in range(n):
        for j in range(n):
            expected = 1 if (j - i) % n in (1, n - 1) and i != j else 0
            assert g.pairwise(i, j) == expected


def test_single_component_types():
    for label in ("smooth", "I1", "II"):
        assert build_fiber(parse_fiber_label(label)).n == 1


def test_build_is_deterministic():
    for k in REDUCIBLE:
        assert build_fiber(k) == build_fiber(k)


def test_rejects_nonpositive_n():
    with pytest.raises(FiberError):
        KodairaType("I", 0)
    with pytest.raises(FiberError):
        KodairaType("I", -3)
    with pytest.raises(FiberError):
        KodairaType("II", 2)
    with pytest.raises(FiberError):
        KodairaType("V")


def test_label_parsing():
    assert parse_fiber_label("I4") == KodairaType("I", 4)
    assert parse_fiber_label("smooth") == KodairaType("smooth")
    assert parse_fiber_label("I0") == KodairaType("smooth")
    assert parse_fiber_label(" III ") == KodairaType("III")
    with pytest.raises(FiberError):
        parse_fiber_label("IX")


# -- subcurve enumeration ----------------------------------------------------


def test_i3_has_six_proper_connected_subcurves():
    g = build_fiber(KodairaType("I", 3))
    subs = [s.indices for s in proper_connected_subcurves(g)]
    assert subs == [(0,), (0, 1), (0, 2), (1,), (1, 2), (2,)]


def test_i2_and_iii_have_two_subcurves():
    for k in (KodairaType("I", 2), KodairaType("III")):
        g = build_fiber(k)
        assert [s.indices for s in proper_connected_subcurves(g)] == [(0,), (1,)]


def test_iv_has_six_subcurves():
    g = build_fiber(KodairaType("IV"))
    assert len(proper_connected_subcurves(g)) == 6


def test_single_component_fiber_has_no_proper_subcurves():
    for label in ("smooth", "I1", "II"):
        assert proper_connected_subcurves(build_fiber(parse_fiber_label(label))) == ()


@pytest.mark.parametrize("n", range(3, 9))
def test_cycle_subcurve_count_matches_arc_formula_and_brute_force(n):
    # proper connected subcurves of an N-cycle are its arcs: N starting
    # points times N-1 lengths
    g = build_fiber(KodairaType("I", n))
    library = [s.indices for s in proper_connected_subcurves(g)]
    assert library == brute_force_connected_subsets(g)
    assert len(library) == n * (n - 1)


def test_subcurves_match_brute_force_on_all_reducible_types():
    for k in REDUCIBLE:
        g = build_fiber(k)
        assert [s.indices for s in proper_connected_subcurves(g)] == (
            brute_force_connected_subsets(g)
        )


def test_subcurve_factory_validation():
    g = build_fiber(KodairaType("I", 4))
    assert subcurve(g, [2, 0]).indices == (0, 2)
    assert not subcurve(g, [0, 2]).connected
    assert subcurve(g, [0, 1]).connected
    with pytest.raises(FiberError):
        subcurve(g, [])
    with pytest.raises(FiberError):
        subcurve(g, range(4))
    with pytest.raises(FiberError):
        subcurve(g, [7])


def test_connected_pieces():
    g = build_fiber(KodairaType("I", 6))
    assert connected_pieces(g, [0, 2, 3]) == ((0,), (2, 3))
    assert connected_pieces(g, [5, 0]) == ((0, 5),)


# -- boundary degree and Euler characteristic --------------------------------


def test_boundary_examples():
    g4 = build_fiber(KodairaType("I", 4))
    assert boundary(g4, subcurve(g4, [0, 1])) == 2
    g3 = build_fiber(KodairaType("III"))
    assert boundary(g3, subcurve(g3, [0])) == 2
    giv = build_fiber(KodairaType("IV"))
    # complement of {C1, C2} is C3; both meet it once at the common point
    assert giv.pairwise(0, 2) + giv.pairwise(1, 2) == 2
    assert boundary(giv, subcurve(giv, [0, 1])) == 2


def test_euler_examples():
    g5 = build_fiber(KodairaType("I", 5))
    assert euler_characteristic(g5, subcurve(g5, [0, 1, 2])) == 1
    assert euler_characteristic(g5) == 0
    giv = build_fiber(KodairaType("IV"))
    # two components minus their single intersection point
    assert euler_characteristic(giv, subcurve(giv, [0, 1])) == 1


def test_every_proper_connected_subcurve_has_boundary_two_and_chi_one():
    types = [KodairaType("I", n) for n in range(2, 13)]
    types += [KodairaType("III"), KodairaType("IV")]
    for k in types:
        g = build_fiber(k)
        for sub in proper_connected_subcurves(g):
            assert boundary(g, sub) == 2
            assert euler_characteristic(g, sub) == 1
        assert euler_characteristic(g) == 0


def test_boundary_rejects_empty_and_full():
    g = build_fiber(KodairaType("I", 3))
    from fiberjac.fibers import Subcurve

    with pytest.raises(FiberError):
        boundary(g, Subcurve((), True))
    with pytest.raises(FiberError):
        boundary(g, Subcurve((0, 1, 2), True))


def test_euler_rejects_disconnected():
    g = build_fiber(KodairaType("I", 4))
    with pytest.raises(FiberError):
        euler_characteristic(g, subcurve(g, [0, 2]))


@given(st.integers(min_value=3, max_value=12), st.data())
def test_random_arcs_have_boundary_two(n, data):
    g = build_fiber(KodairaType("I", n))
    start = data.draw(st.integers(min_value=0, max_value=n - 1))
    length = data.draw(st.integers(min_value=1, max_value=n - 1))
    arc = [(start + i) % n for i in range(length)]
    sub = subcurve(g, arc)
    assert sub.connected
    assert boundary(g, sub) == 2
    assert euler_characteristic(g, sub) == 1


# -- points -------------------------------------------------------------------


def test_singular_points_per_type():
    assert singular_points(build_fiber(KodairaType("smooth"))) == ()
    assert singular_points(build_fiber(KodairaType("I", 1))) == (NodePoint(0),)
    assert len(singular_points(build_fiber(KodairaType("I", 5)))) == 5
    assert singular_points(build_fiber(KodairaType("III"))) == (TangencyPoint(),)
    assert singular_points(build_fiber(KodairaType("IV"))) == (TriplePoint(),)


def test_node_components():
    g = build_fiber(KodairaType("I", 4))
    assert node_components(g, NodePoint(3)) == (3, 0)
    g1 = build_fiber(KodairaType("I", 1))
    assert node_components(g1, NodePoint(0)) == (0, 0)


def test_boundary_points():
    g = build_fiber(KodairaType("I", 4))
    assert boundary_points(g, 0) == (NodePoint(0), NodePoint(3))
    assert boundary_points(g, 2) == (NodePoint(1), NodePoint(2))
    g2 = build_fiber(KodairaType("I", 2))
    assert boundary_points(g2, 0) == (NodePoint(0), NodePoint(1))
    assert boundary_points(g2, 1) == (NodePoint(0), NodePoint(1))
    assert boundary_points(build_fiber(KodairaType("III")), 1) == (TangencyPoint(),)
    assert boundary_points(build_fiber(KodairaType("IV")), 2) == (TriplePoint(),)
    with pytest.raises(IrreducibleFiberError):
        boundary_points(build_fiber(KodairaType("II")), 0)


def test_validate_point():
    g = build_fiber(KodairaType("III"))
    validate_point(g, SmoothPoint(1, 3))
    validate_point(g, TangencyPoint())
    with pytest.raises(FiberError):
        validate_point(g, SmoothPoint(2, 0))
    with pytest.raises(FiberError):
        validate_point(g, NodePoint(0))
    with pytest.raises(FiberError):
        validate_point(g, TriplePoint())


# -- description files --------------------------------------------------------


def test_parse_fiber_description():
    kodaira, pol = parse_fiber_description({"type": "I", "n": 4})
    assert kodaira == KodairaType("I", 4)
    assert pol is None
    kodaira, pol = parse_fiber_description(
        {"type": "III", "polarization": [2, 5]}
    )
    assert kodaira == KodairaType("III")
    assert pol == Polarization((2, 5))


@pytest.mark.parametrize(
    "obj, fragment",
    [
        ({"type": "I"}, "'n'"),
        ({"type": "V"}, "symbol"),
        ({"type": "III", "n": 2}, "'n'"),
        ({"type": "I", "n": "4"}, "'n'"),
        ({"type": "I", "n": 2, "polarisation": [1, 1]}, "unknown fields"),
        ({"type": "I", "n": 2, "polarization": [1]}, "2 components"),
        ({"type": "I", "n": 2, "polarization": [1, 0]}, ">= 1"),
        ([1, 2], "object"),
    ],
)
def test_parse_fiber_description_errors(obj, fragment):
    with pytest.raises(FiberError) as err:
        parse_fiber_description(obj)
    assert fragment in str(err.value)


def test_load_fiber_description(tmp_path):
    path = tmp_path / "fiber.json"
    path.write_text(json.dumps({"type": "I", "n": 6, "polarization": [1, 2, 3, 4, 5, 6]}))
    kodaira, pol = load_fiber_description(path)
    assert kodaira == KodairaType("I", 6)
    assert pol.total == 21


def test_load_fiber_description_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"type": "I",\n "n": }')
    with pytest.raises(FiberDescriptionError) as err:
        load_fiber_description(path)
    assert "line 2" in str(err.value)
