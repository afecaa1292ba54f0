"""Exhaustive enumeration helpers: morphism sets, subobjects, quotients.

Everything here is deliberately brute force; the fixtures are small enough
that full enumeration doubles as the verification oracle for universal
properties.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Optional

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    ValidationError,
    hom_set,
    subalgebra,
    _flat_index,
)
from .congruence import (
    Congruence,
    all_congruences,
    factor_through_surjection,
    quotient,
)
from .internal import (
    DoubleFunctor,
    DoubleGroupoid,
    DoubleReflexiveGraph,
    GraphMorphism,
    InternalGroupoid,
    ReflexiveGraph,
    check_double_groupoid,
    groupoid_structure,
)


def graph_morphisms(dom: ReflexiveGraph, cod: ReflexiveGraph) -> tuple[GraphMorphism, ...]:
    """All level pairs satisfying the three reflexive-graph equations."""
    if dom.C1.signature != cod.C1.signature:
        return ()
    found = []
    for f0 in hom_set(dom.C0, cod.C0):
        for f1 in hom_set(dom.C1, cod.C1):
            if f0 @ dom.d != cod.d @ f1:
                continue
            if f0 @ dom.c != cod.c @ f1:
                continue
            if f1 @ dom.e != cod.e @ f0:
                continue
            found.append(GraphMorphism(dom, cod, f1, f0))
    return tuple(found)


def double_functors(dom: DoubleGroupoid, cod: DoubleGroupoid) -> tuple[DoubleFunctor, ...]:
    """All double functors, enumerated corner by corner with early square
    filtering; composition preservation is asserted on construction."""
    g, h = dom.graph, cod.graph
    if g.C11.signature != h.C11.signature:
        return ()
    found = []
    for f00 in hom_set(g.C00, h.C00):
        for f01 in hom_set(g.C01, h.C01):
            if f00 @ g.dh0 != h.dh0 @ f01 or f00 @ g.ch0 != h.ch0 @ f01:
                continue
            if f01 @ g.eh0 != h.eh0 @ f00:
                continue
            for f10 in hom_set(g.C10, h.C10):
                if f00 @ g.dv0 != h.dv0 @ f10 or f00 @ g.cv0 != h.cv0 @ f10:
                    continue
                if f10 @ g.ev0 != h.ev0 @ f00:
                    continue
                for f11 in hom_set(g.C11, h.C11):
                    if f10 @ g.dh1 != h.dh1 @ f11 or f10 @ g.ch1 != h.ch1 @ f11:
                        continue
                    if f11 @ g.eh1 != h.eh1 @ f10:
                        continue
                    if f01 @ g.dv1 != h.dv1 @ f11 or f01 @ g.cv1 != h.cv1 @ f11:
                        continue
                    if f11 @ g.ev1 != h.ev1 @ f01:
                        continue
                    found.append(DoubleFunctor(dom, cod, f11, f10, f01, f00))
    return tuple(found)


def find_double_isomorphism(dom: DoubleGroupoid, cod: DoubleGroupoid) -> Optional[DoubleFunctor]:
    for f in double_functors(dom, cod):
        if f.is_levelwise_bijective():
            return f
    return None


def find_graph_isomorphism(dom: ReflexiveGraph, cod: ReflexiveGraph) -> Optional[GraphMorphism]:
    for phi in graph_morphisms(dom, cod):
        if phi.f1.is_bijective() and phi.f0.is_bijective():
            return phi
    return None


# ---------------------------------------------------------------------------
# Subobjects


def closed_subsets(alg: FiniteAlgebra) -> tuple[frozenset[int], ...]:
    """All non-empty subuniverses, by filtering the power set; only
    sensible for small carriers."""
    if alg.size > 8:
        raise ValidationError("subset enumeration is limited to carriers of size <= 8")
    constants = alg.constants()
    ops = [
        (arity, table)
        for (name, arity), table in zip(alg.signature.operations, alg.tables)
        if arity > 0
    ]
    found = []
    for bits in range(1, 2**alg.size):
        subset = frozenset(i for i in range(alg.size) if bits >> i & 1)
        if not constants <= subset:
            continue
        closed = True
        for arity, table in ops:
            for args in itertools.product(sorted(subset), repeat=arity):
                if table[_flat_index(args, alg.size)] not in subset:
                    closed = False
                    break
            if not closed:
                break
        if closed:
            found.append(subset)
    return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))


def _restrict(f: Homomorphism, sub_dom, sub_cod) -> Homomorphism:
    position = {v: k for k, v in enumerate(sub_cod.inclusion.map)}
    return Homomorphism(
        sub_dom.algebra,
        sub_cod.algebra,
        tuple(position[f(v)] for v in sub_dom.inclusion.map),
    )


def sub_double_groupoids(
    dg: DoubleGroupoid,
) -> Iterator[tuple[Optional[DoubleGroupoid], Optional[DoubleFunctor]]]:
    """Every quadruple of subuniverses closed under all twelve structure
    maps, restricted and re-checked; yields (substructure, inclusion)."""
    g = dg.graph
    choices = [closed_subsets(c) for c in g.corners()]
    arrows = (
        ("dh1", 0, 1), ("ch1", 0, 1), ("dv1", 0, 2), ("cv1", 0, 2),
        ("eh1", 1, 0), ("ev0", 3, 1), ("dv0", 1, 3), ("cv0", 1, 3),
        ("dh0", 2, 3), ("ch0", 2, 3), ("eh0", 3, 2), ("ev1", 2, 0),
    )
    for quad in itertools.product(*choices):
        fine = True
        for name, src, tgt in arrows:
            f = getattr(g, name)
            if any(f(x) not in quad[tgt] for x in quad[src]):
                fine = False
                break
        if not fine:
            continue
        subs = [subalgebra(corner, subset) for corner, subset in zip(g.corners(), quad)]
        s11, s10, s01, s00 = subs
        graph = DoubleReflexiveGraph(
            C11=s11.algebra, C10=s10.algebra, C01=s01.algebra, C00=s00.algebra,
            dh1=_restrict(g.dh1, s11, s10), ch1=_restrict(g.ch1, s11, s10),
            eh1=_restrict(g.eh1, s10, s11),
            dh0=_restrict(g.dh0, s01, s00), ch0=_restrict(g.ch0, s01, s00),
            eh0=_restrict(g.eh0, s00, s01),
            dv1=_restrict(g.dv1, s11, s01), cv1=_restrict(g.cv1, s11, s01),
            ev1=_restrict(g.ev1, s01, s11),
            dv0=_restrict(g.dv0, s10, s00), cv0=_restrict(g.cv0, s10, s00),
            ev0=_restrict(g.ev0, s00, s10),
        )
        sub_dg = check_double_groupoid(graph)
        if sub_dg is None:
            yield None, None  # surfaced to callers as a closure counterexample
            continue
        inclusion = DoubleFunctor(
            sub_dg, dg, s11.inclusion, s10.inclusion, s01.inclusion, s00.inclusion
        )
        yield sub_dg, inclusion


# ---------------------------------------------------------------------------
# Quotients


def _descends(f: Homomorphism, dom_cong: Congruence, cod_cong: Congruence) -> bool:
    return all(cod_cong.related(f(a), f(dom_cong.rep[a])) for a in f.dom.elements())


def double_groupoid_quotients(
    dg: DoubleGroupoid,
) -> Iterator[tuple[Optional[DoubleGroupoid], Optional[DoubleFunctor]]]:
    """Every corner-congruence quadruple along which all twelve maps
    descend; yields (quotient, projection) with None for a quotient that
    fails to be a double groupoid (a closure counterexample)."""
    g = dg.graph
    lattices = [all_congruences(c) for c in g.corners()]
    arrows = (
        ("dh1", 0, 1), ("ch1", 0, 1), ("eh1", 1, 0),
        ("dh0", 2, 3), ("ch0", 2, 3), ("eh0", 3, 2),
        ("dv1", 0, 2), ("cv1", 0, 2), ("ev1", 2, 0),
        ("dv0", 1, 3), ("cv0", 1, 3), ("ev0", 3, 1),
    )
    for quad in itertools.product(*lattices):
        if any(not _descends(getattr(g, name), quad[src], quad[tgt]) for name, src, tgt in arrows):
            continue
        quots = [quotient(corner, cong) for corner, cong in zip(g.corners(), quad)]
        q11, q10, q01, q00 = quots

        def induced(name: str, src: int, tgt: int) -> Homomorphism:
            return factor_through_surjection(
                quots[src].projection, quots[tgt].projection @ getattr(g, name)
            )

        graph = DoubleReflexiveGraph(
            C11=q11.algebra, C10=q10.algebra, C01=q01.algebra, C00=q00.algebra,
            dh1=induced("dh1", 0, 1), ch1=induced("ch1", 0, 1), eh1=induced("eh1", 1, 0),
            dh0=induced("dh0", 2, 3), ch0=induced("ch0", 2, 3), eh0=induced("eh0", 3, 2),
            dv1=induced("dv1", 0, 2), cv1=induced("cv1", 0, 2), ev1=induced("ev1", 2, 0),
            dv0=induced("dv0", 1, 3), cv0=induced("cv0", 1, 3), ev0=induced("ev0", 3, 1),
        )
        quot_dg = check_double_groupoid(graph)
        if quot_dg is None:
            yield None, None
            continue
        projection = DoubleFunctor(
            dg, quot_dg, q11.projection, q10.projection, q01.projection, q00.projection
        )
        yield quot_dg, projection


def graph_quotients(
    gpd: InternalGroupoid,
) -> Iterator[tuple[ReflexiveGraph, Optional[InternalGroupoid], GraphMorphism]]:
    """Levelwise quotients of a groupoid's underlying graph; yields the
    quotient graph, its structure (or None) and the projection."""
    g = gpd.graph
    for theta1 in all_congruences(g.C1):
        for theta0 in all_congruences(g.C0):
            if not (
                _descends(g.d, theta1, theta0)
                and _descends(g.c, theta1, theta0)
                and _descends(g.e, theta0, theta1)
            ):
                continue
            q1 = quotient(g.C1, theta1)
            q0 = quotient(g.C0, theta0)
            graph = ReflexiveGraph(
                q1.algebra,
                q0.algebra,
                factor_through_surjection(q1.projection, q0.projection @ g.d),
                factor_through_surjection(q1.projection, q0.projection @ g.c),
                factor_through_surjection(q0.projection, q1.projection @ g.e),
            )
            projection = GraphMorphism(g, graph, q1.projection, q0.projection)
            yield graph, groupoid_structure(graph), projection


def reflexive_relation_subalgebras(alg: FiniteAlgebra) -> tuple[frozenset[int], ...]:
    """All subuniverses of the square that contain the diagonal, found by
    closure extension rather than power-set filtering."""
    from .algebra import product, subalgebra_generated

    square = product(alg, alg).algebra
    diagonal = frozenset(a * alg.size + a for a in alg.elements())
    start = subalgebra_generated(square, diagonal)
    found = {start}
    frontier = [start]
    while frontier:
        base = frontier.pop()
        for extra in range(square.size):
            if extra in base:
                continue
            bigger = subalgebra_generated(square, base | {extra})
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))
