from __future__ import annotations

import pytest

from maltcat.algebra import Homomorphism, ValidationError, identity
from maltcat.congruence import full_congruence, kernel_pair, tc_commutator
from maltcat.generators import (
    cyclic_group,
    discrete_double,
    discrete_groupoid,
    groupoid_from_hom,
    symmetric_group_3,
    trivial_algebra,
    vertically_discrete_double,
)
from maltcat.internal import (
    DoubleReflexiveGraph,
    GraphMorphism,
    ReflexiveGraph,
    check_double_groupoid,
    check_reflexive_graph,
    discrete_graph,
    groupoid_structure,
    groupoid_structures_exhaustive,
    is_internal_functor,
    is_regular_epi,
    is_two_groupoid,
)
from maltcat.search import graph_morphisms


def test_discrete_graph_is_reflexive(z4):
    assert check_reflexive_graph(discrete_graph(z4))


def test_pair_groupoid_graph_is_reflexive():
    g = groupoid_from_hom(2, 2, 1).graph
    # evaluate the three composites directly
    assert all(g.d(g.e(h)) == h for h in g.C0.elements())
    assert all(g.c(g.e(h)) == h for h in g.C0.elements())
    assert check_reflexive_graph(g)


def test_bad_section_rejected(z2, klein):
    g = groupoid_from_hom(2, 2, 1).graph
    # e(h) = (h, 1) is not even a homomorphism, so the raw form says no
    bad_e = (1, 3)
    assert not check_reflexive_graph((g.C1, g.C0, g.d.map, g.c.map, bad_e))


def test_groupoid_structure_matches_affine_formula():
    gpd = groupoid_from_hom(2, 2, 1)
    g = gpd.graph
    # oracle: arrows are (h, g) with index 2h + g; the composite of
    # (h, g) and (h + g, g') must be (h, g + g')
    for h in range(2):
        for a in range(2):
            for b in range(2):
                left = 2 * h + a
                right = 2 * ((h + a) % 2) + b
                assert gpd.compose(left, right) == 2 * h + (a + b) % 2
    assert gpd.i.map == tuple(2 * ((x // 2 + x % 2) % 2) + x % 2 for x in range(4))


def test_discrete_groupoid_structure(z4):
    gpd = discrete_groupoid(z4)
    assert gpd.i.is_identity()
    for k in range(gpd.pairs.algebra.size):
        assert gpd.m(k) == gpd.pairs.p1(k)


def test_no_structure_over_point(graphs, s3):
    g = graphs["s3-over-point"]
    assert groupoid_structure(g) is None
    full = full_congruence(s3)
    ed = g.e @ g.d
    assert kernel_pair(ed) == full
    # the obstruction is exactly the non-trivial commutator
    assert not tc_commutator(s3, full, full).is_identity()
    assert groupoid_structures_exhaustive(g) == ()


def test_structure_search_agrees_with_commutator(graphs):
    for name, graph in graphs.items():
        found = groupoid_structures_exhaustive(graph)
        assert len(found) <= 1
        assert (groupoid_structure(graph) is None) == (len(found) == 0)


def test_is_internal_functor_identity():
    gpd = groupoid_from_hom(2, 2, 1)
    phi = GraphMorphism(gpd.graph, gpd.graph, identity(gpd.graph.C1), identity(gpd.graph.C0))
    assert is_internal_functor(phi, gpd, gpd)


def test_is_internal_functor_quotient_to_point(point):
    gpd = groupoid_from_hom(2, 2, 1)
    target = discrete_groupoid(point)
    f1 = Homomorphism(gpd.graph.C1, point, (0,) * 4)
    f0 = Homomorphism(gpd.graph.C0, point, (0,) * 2)
    phi = GraphMorphism(gpd.graph, target.graph, f1, f0)
    assert is_internal_functor(phi, gpd, target)


def test_graph_morphisms_preserve_composition(groupoids):
    pairs = 0
    for cg in groupoids.values():
        for dg in groupoids.values():
            if cg.graph.C1.signature != dg.graph.C1.signature:
                continue
            for phi in graph_morphisms(cg.graph, dg.graph):
                assert is_internal_functor(phi, cg, dg)
                pairs += 1
    assert pairs > 0


def test_is_regular_epi(z4, z2, point):
    gpd = groupoid_from_hom(2, 2, 1)
    ident = GraphMorphism(
        gpd.graph, gpd.graph, identity(gpd.graph.C1), identity(gpd.graph.C0)
    )
    assert is_regular_epi(ident)
    target = discrete_groupoid(point)
    quot = GraphMorphism(
        gpd.graph,
        target.graph,
        Homomorphism(gpd.graph.C1, point, (0,) * 4),
        Homomorphism(gpd.graph.C0, point, (0,) * 2),
    )
    assert is_regular_epi(quot)
    disc = discrete_groupoid(z2)
    include = GraphMorphism(
        disc.graph,
        gpd.graph,
        Homomorphism(z2, gpd.graph.C1, (0, 2)),
        identity(z2),
    )
    assert not is_regular_epi(include)


# ---------------------------------------------------------------------------
# double structures


def test_double_graph_square_violation_is_named(z2):
    gpd = groupoid_from_hom(2, 2, 1)
    g = gpd.graph
    one1, one0 = identity(g.C1), identity(g.C0)
    with pytest.raises(ValidationError, match="square"):
        DoubleReflexiveGraph(
            C11=g.C1, C10=g.C0, C01=g.C1, C00=g.C0,
            dh1=g.d, ch1=g.c, eh1=g.e,
            dh0=g.c, ch0=g.d, eh0=g.e,  # swapped row maps break the squares
            dv1=one1, cv1=one1, ev1=one1,
            dv0=one0, cv0=one0, ev0=one0,
        )


def test_check_double_groupoid_discrete(z4):
    assert check_double_groupoid(discrete_double(z4).graph) is not None


def test_check_double_groupoid_vertically_discrete():
    dg = vertically_discrete_double(groupoid_from_hom(2, 2, 1))
    assert check_double_groupoid(dg.graph) is not None


def test_check_double_groupoid_rejects_bad_rows(graphs, s3):
    bad_rows = graphs["s3-over-point"]
    point = bad_rows.C0
    one1, one0 = identity(s3), identity(point)
    graph = DoubleReflexiveGraph(
        C11=s3, C10=point, C01=s3, C00=point,
        dh1=bad_rows.d, ch1=bad_rows.c, eh1=bad_rows.e,
        dh0=bad_rows.d, ch0=bad_rows.c, eh0=bad_rows.e,
        dv1=one1, cv1=one1, ev1=one1,
        dv0=one0, cv0=one0, ev0=one0,
    )
    assert check_double_groupoid(graph) is None


def test_levelwise_quotients_of_groupoids_are_groupoids(groupoids):
    """Quotient closure at the graph level: every levelwise-surjective
    image of a corpus groupoid carries a groupoid structure."""
    from maltcat.search import graph_quotients

    checked = 0
    for name, gpd in groupoids.items():
        if gpd.graph.C1.size > 6:
            continue
        for graph, structure, projection in graph_quotients(gpd):
            assert is_regular_epi(projection)
            assert structure is not None, name
            checked += 1
    assert checked > 0


def test_is_two_groupoid_on_fixtures(doubles):
    expected = {
        "dd-Z2": True,
        "dd-Z4": True,
        "dd-Z2xZ2": True,
        "dd-S3": True,
        "dd-point": True,
        "dd-point-group": True,
        "vd-pair-Z2": False,
        "hd-pair-Z2": True,
        "vd-pair-Z4-zero": False,
        "vd-pair-Z4-double": False,
    }
    for name, dg in doubles.items():
        assert is_two_groupoid(dg) == expected[name], name
