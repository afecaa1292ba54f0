"""Reflexive graphs, internal groupoids, double groupoids and 2-groupoids.

In a Mal'tsev variety a reflexive graph carries at most one groupoid
structure, and it carries one exactly when the commutator of the two
kernel congruences of its endpoint maps vanishes.  ``groupoid_structure``
first decides that commutator condition, then builds the candidate
composition from the designated Mal'tsev term and verifies every axiom,
falling back to an exhaustive search if the candidate fails; correctness
of the formula is never assumed.

The one-sorted presentation encodes a groupoid as its algebra of arrows
with extra idempotent unary operations (``s``/``t`` for rows and ``u``/``v``
for columns in the double case).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Optional, Sequence, Union

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    PullbackResult,
    ValidationError,
    all_homomorphisms,
    identity,
    is_homomorphism,
    maltsev_apply,
    pullback,
    subalgebra,
    _same,
)
from .congruence import kernel_pair, tc_commutator


class StructureError(RuntimeError):
    """A structure that must exist could not be built; signals a bug or a
    non-Mal'tsev input."""


class LodayIdentityError(ValidationError):
    """A one-sorted presentation violates one of its defining identities."""


class NontrivialCommutatorError(ValidationError):
    """A one-sorted presentation has a non-vanishing kernel commutator."""


# ---------------------------------------------------------------------------
# Reflexive graphs


@dataclass(frozen=True)
class ReflexiveGraph:
    """A parallel pair d, c : C1 -> C0 with a common section e."""

    C1: FiniteAlgebra
    C0: FiniteAlgebra
    d: Homomorphism
    c: Homomorphism
    e: Homomorphism

    def __post_init__(self) -> None:
        for name, hom, dom, cod in (
            ("d", self.d, self.C1, self.C0),
            ("c", self.c, self.C1, self.C0),
            ("e", self.e, self.C0, self.C1),
        ):
            if not _same(hom.dom, dom) or not _same(hom.cod, cod):
                raise ValidationError(f"graph map {name} has mismatched endpoints")
        if not (self.d @ self.e).is_identity():
            raise ValidationError("d . e = identity fails")
        if not (self.c @ self.e).is_identity():
            raise ValidationError("c . e = identity fails")

    @cached_property
    def _hash(self) -> int:
        return hash((self.C1, self.C0, self.d, self.c, self.e))

    def __hash__(self) -> int:
        return self._hash


def check_reflexive_graph(g) -> bool:
    """True iff the data forms a reflexive graph (d.e = c.e = identity).

    Accepts a ``ReflexiveGraph`` or a raw tuple ``(C1, C0, d, c, e)`` whose
    maps may be plain index sequences; the raw form never raises and is the
    diagnostic entry point for unvalidated data.
    """
    if isinstance(g, ReflexiveGraph):
        return (g.d @ g.e).is_identity() and (g.c @ g.e).is_identity()
    C1, C0, d, c, e = g
    try:
        dd = d if isinstance(d, Homomorphism) else Homomorphism(C1, C0, tuple(d))
        cc = c if isinstance(c, Homomorphism) else Homomorphism(C1, C0, tuple(c))
        ee = e if isinstance(e, Homomorphism) else Homomorphism(C0, C1, tuple(e))
        ReflexiveGraph(C1, C0, dd, cc, ee)
    except ValidationError:
        return False
    return True


def discrete_graph(alg: FiniteAlgebra) -> ReflexiveGraph:
    one = identity(alg)
    return ReflexiveGraph(alg, alg, one, one, one)


@dataclass(frozen=True)
class GraphMorphism:
    """A pair of level maps commuting with d, c and e."""

    dom: ReflexiveGraph
    cod: ReflexiveGraph
    f1: Homomorphism
    f0: Homomorphism

    def __post_init__(self) -> None:
        if not _same(self.f1.dom, self.dom.C1) or not _same(self.f1.cod, self.cod.C1):
            raise ValidationError("arrow-level map has mismatched endpoints")
        if not _same(self.f0.dom, self.dom.C0) or not _same(self.f0.cod, self.cod.C0):
            raise ValidationError("object-level map has mismatched endpoints")
        if self.f0 @ self.dom.d != self.cod.d @ self.f1:
            raise ValidationError("f0 . d = d . f1 fails")
        if self.f0 @ self.dom.c != self.cod.c @ self.f1:
            raise ValidationError("f0 . c = c . f1 fails")
        if self.f1 @ self.dom.e != self.cod.e @ self.f0:
            raise ValidationError("f1 . e = e . f0 fails")

    @cached_property
    def _hash(self) -> int:
        return hash((self.dom, self.cod, self.f1, self.f0))

    def __hash__(self) -> int:
        return self._hash


# ---------------------------------------------------------------------------
# Internal groupoids


@dataclass(frozen=True)
class InternalGroupoid:
    """A reflexive graph with verified composition and inverse maps.

    ``pairs`` is the pullback of composable arrows: the subalgebra of pairs
    (f, g) with c(f) = d(g); ``m`` composes such a pair, ``i`` inverts an
    arrow.  Every axiom is re-verified on construction.
    """

    graph: ReflexiveGraph
    pairs: PullbackResult
    m: Homomorphism
    i: Homomorphism

    def __post_init__(self) -> None:
        g = self.graph
        if self.pairs != pullback(g.c, g.d):
            raise ValidationError("pairs object is not the composable-arrow pullback")
        if not _same(self.m.dom, self.pairs.algebra) or not _same(self.m.cod, g.C1):
            raise ValidationError("composition map has mismatched endpoints")
        if not _same(self.i.dom, g.C1) or not _same(self.i.cod, g.C1):
            raise ValidationError("inverse map has mismatched endpoints")
        if g.d @ self.m != g.d @ self.pairs.p1:
            raise ValidationError("d(m(f,g)) = d(f) fails")
        if g.c @ self.m != g.c @ self.pairs.p2:
            raise ValidationError("c(m(f,g)) = c(g) fails")
        index = self.pair_index
        ed, ec = g.e @ g.d, g.e @ g.c
        for f in g.C1.elements():
            if self.m(index[ed(f), f]) != f:
                raise ValidationError("left unit law fails")
            if self.m(index[f, ec(f)]) != f:
                raise ValidationError("right unit law fails")
        if g.d @ self.i != g.c or g.c @ self.i != g.d:
            raise ValidationError("inverse must swap endpoints")
        for f in g.C1.elements():
            if self.m(index[f, self.i(f)]) != ed(f):
                raise ValidationError("f . f^-1 = unit fails")
            if self.m(index[self.i(f), f]) != ec(f):
                raise ValidationError("f^-1 . f = unit fails")
        for k in range(self.pairs.algebra.size):
            f, g2 = self.pairs.p1(k), self.pairs.p2(k)
            for h in g.C1.elements():
                if g.d(h) != g.c(g2):
                    continue
                lhs = self.m(index[self.m(k), h])
                rhs = self.m(index[f, self.m(index[g2, h])])
                if lhs != rhs:
                    raise ValidationError("associativity fails")

    @cached_property
    def _hash(self) -> int:
        return hash((self.graph, self.m, self.i))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def pair_index(self) -> dict[tuple[int, int], int]:
        return {
            (self.pairs.p1(k), self.pairs.p2(k)): k for k in range(self.pairs.algebra.size)
        }

    def compose(self, f: int, g: int) -> int:
        """Composite of the composable pair (f, g); diagrammatic order."""
        return self.m(self.pair_index[f, g])


def _candidate_structure(g: ReflexiveGraph) -> InternalGroupoid:
    """Composition p(f, e(c(f)), g) and inverse p(e(d(f)), f, e(c(f)))."""
    pairs = pullback(g.c, g.d)
    ed, ec = g.e @ g.d, g.e @ g.c
    m_map = []
    for k in range(pairs.algebra.size):
        f, h = pairs.p1(k), pairs.p2(k)
        m_map.append(maltsev_apply(g.C1, f, ec(f), h))
    i_map = [maltsev_apply(g.C1, ed(f), f, ec(f)) for f in g.C1.elements()]
    m = Homomorphism(pairs.algebra, g.C1, tuple(m_map))
    i = Homomorphism(g.C1, g.C1, tuple(i_map))
    return InternalGroupoid(g, pairs, m, i)


def groupoid_structures_exhaustive(g: ReflexiveGraph) -> tuple[InternalGroupoid, ...]:
    """All groupoid structures on the graph, by exhaustive search over
    composition homomorphisms with the unit values pinned."""
    pairs = pullback(g.c, g.d)
    index = {(pairs.p1(k), pairs.p2(k)): k for k in range(pairs.algebra.size)}
    ed, ec = g.e @ g.d, g.e @ g.c
    pinned: dict[int, int] = {}
    for f in g.C1.elements():
        for key, value in ((index[ed(f), f], f), (index[f, ec(f)], f)):
            if pinned.setdefault(key, value) != value:
                return ()
    found = []
    for m in all_homomorphisms(pairs.algebra, g.C1, partial=pinned):
        if g.d @ m != g.d @ pairs.p1 or g.c @ m != g.c @ pairs.p2:
            continue
        # inverses are forced pointwise when they exist
        i_map = []
        for f in g.C1.elements():
            candidates = [
                h
                for h in g.C1.elements()
                if g.d(h) == g.c(f)
                and g.c(h) == g.d(f)
                and m(index[f, h]) == ed(f)
                and m(index[h, f]) == ec(f)
            ]
            if len(candidates) != 1:
                i_map = []
                break
            i_map.append(candidates[0])
        if not i_map:
            continue
        try:
            found.append(
                InternalGroupoid(g, pairs, m, Homomorphism(g.C1, g.C1, tuple(i_map)))
            )
        except ValidationError:
            continue
    return tuple(found)


@lru_cache(maxsize=None)
def groupoid_structure(g: ReflexiveGraph) -> Optional[InternalGroupoid]:
    """The unique groupoid structure on the graph, or None.

    Returns None exactly when the commutator of the kernel congruences of
    e.d and e.c is non-trivial.  When it is trivial, the Mal'tsev-term
    candidate is verified axiom by axiom; if the candidate fails, an
    exhaustive search must produce the structure, and failure of that
    search is a hard error.
    """
    ed, ec = g.e @ g.d, g.e @ g.c
    comm = tc_commutator(g.C1, kernel_pair(ed), kernel_pair(ec))
    if not comm.is_identity():
        return None
    try:
        return _candidate_structure(g)
    except ValidationError:
        pass
    found = groupoid_structures_exhaustive(g)
    if len(found) != 1:
        raise StructureError(
            "kernel commutator is trivial but no unique groupoid structure exists"
        )
    return found[0]


def is_internal_functor(
    phi: GraphMorphism, dom: InternalGroupoid, cod: InternalGroupoid
) -> bool:
    """Graph-morphism equations plus preservation of the composition."""
    if phi.dom != dom.graph or phi.cod != cod.graph:
        raise ValidationError("morphism endpoints do not match the groupoids")
    for k in range(dom.pairs.algebra.size):
        f, g = dom.pairs.p1(k), dom.pairs.p2(k)
        if phi.f1(dom.m(k)) != cod.compose(phi.f1(f), phi.f1(g)):
            return False
    return True


def is_regular_epi(phi: Union[GraphMorphism, "DoubleFunctor"]) -> bool:
    """True iff every level component is surjective."""
    if isinstance(phi, GraphMorphism):
        return phi.f1.is_surjective() and phi.f0.is_surjective()
    return all(f.is_surjective() for f in (phi.f11, phi.f10, phi.f01, phi.f00))


# ---------------------------------------------------------------------------
# Double reflexive graphs and double groupoids


@dataclass(frozen=True)
class DoubleReflexiveGraph:
    """Four corner algebras with two horizontal and two vertical reflexive
    graphs whose structure maps commute.

    Horizontal maps: dh1, ch1 : C11 -> C10 with section eh1, and
    dh0, ch0 : C01 -> C00 with section eh0.  Vertical maps:
    dv1, cv1 : C11 -> C01 with section ev1, and dv0, cv0 : C10 -> C00
    with section ev0.
    """

    C11: FiniteAlgebra
    C10: FiniteAlgebra
    C01: FiniteAlgebra
    C00: FiniteAlgebra
    dh1: Homomorphism
    ch1: Homomorphism
    eh1: Homomorphism
    dh0: Homomorphism
    ch0: Homomorphism
    eh0: Homomorphism
    dv1: Homomorphism
    cv1: Homomorphism
    ev1: Homomorphism
    dv0: Homomorphism
    cv0: Homomorphism
    ev0: Homomorphism

    def __post_init__(self) -> None:
        # rows and columns must each be reflexive graphs
        self.top_row()
        self.bottom_row()
        self.left_col()
        self.right_col()
        squares = (
            ("dh0 . dv1 = dv0 . dh1", self.dh0 @ self.dv1, self.dv0 @ self.dh1),
            ("dh0 . cv1 = cv0 . dh1", self.dh0 @ self.cv1, self.cv0 @ self.dh1),
            ("ch0 . dv1 = dv0 . ch1", self.ch0 @ self.dv1, self.dv0 @ self.ch1),
            ("ch0 . cv1 = cv0 . ch1", self.ch0 @ self.cv1, self.cv0 @ self.ch1),
            ("dh1 . ev1 = ev0 . dh0", self.dh1 @ self.ev1, self.ev0 @ self.dh0),
            ("ch1 . ev1 = ev0 . ch0", self.ch1 @ self.ev1, self.ev0 @ self.ch0),
            ("eh0 . dv0 = dv1 . eh1", self.eh0 @ self.dv0, self.dv1 @ self.eh1),
            ("eh0 . cv0 = cv1 . eh1", self.eh0 @ self.cv0, self.cv1 @ self.eh1),
            ("eh1 . ev0 = ev1 . eh0", self.eh1 @ self.ev0, self.ev1 @ self.eh0),
        )
        for law, lhs, rhs in squares:
            if lhs != rhs:
                raise ValidationError(f"double-graph square {law} fails")

    @cached_property
    def _hash(self) -> int:
        return hash(
            (self.C11, self.C10, self.C01, self.C00, self.dh1, self.dv1, self.eh0, self.ev0)
        )

    def __hash__(self) -> int:
        return self._hash

    def top_row(self) -> ReflexiveGraph:
        return ReflexiveGraph(self.C11, self.C10, self.dh1, self.ch1, self.eh1)

    def bottom_row(self) -> ReflexiveGraph:
        return ReflexiveGraph(self.C01, self.C00, self.dh0, self.ch0, self.eh0)

    def left_col(self) -> ReflexiveGraph:
        return ReflexiveGraph(self.C11, self.C01, self.dv1, self.cv1, self.ev1)

    def right_col(self) -> ReflexiveGraph:
        return ReflexiveGraph(self.C10, self.C00, self.dv0, self.cv0, self.ev0)

    def corners(self) -> tuple[FiniteAlgebra, FiniteAlgebra, FiniteAlgebra, FiniteAlgebra]:
        return (self.C11, self.C10, self.C01, self.C00)


@dataclass(frozen=True)
class DoubleGroupoid:
    """A double reflexive graph whose rows and columns carry verified
    groupoid structures that are functorial over each other."""

    graph: DoubleReflexiveGraph
    top: InternalGroupoid
    bottom: InternalGroupoid
    left: InternalGroupoid
    right: InternalGroupoid

    def __post_init__(self) -> None:
        g = self.graph
        if (
            self.top.graph != g.top_row()
            or self.bottom.graph != g.bottom_row()
            or self.left.graph != g.left_col()
            or self.right.graph != g.right_col()
        ):
            raise ValidationError("groupoid structures do not match the double graph")

    @cached_property
    def _hash(self) -> int:
        return hash(self.graph)

    def __hash__(self) -> int:
        return self._hash


def _interchange_holds(dg: DoubleGroupoid) -> bool:
    """Row composition commutes with column composition wherever both are
    defined (checked as functoriality of the composition maps)."""
    g = dg.graph
    top, left = dg.top, dg.left
    bottom = dg.bottom
    for ka in range(top.pairs.algebra.size):
        a1, a2 = top.pairs.p1(ka), top.pairs.p2(ka)
        for kb in range(top.pairs.algebra.size):
            b1, b2 = top.pairs.p1(kb), top.pairs.p2(kb)
            if g.cv1(a1) != g.dv1(b1) or g.cv1(a2) != g.dv1(b2):
                continue
            row_then_col = left.compose(top.m(ka), top.m(kb))
            col_then_row = top.compose(left.compose(a1, b1), left.compose(a2, b2))
            if row_then_col != col_then_row:
                return False
    # the level-0 component of the row composition must match column units
    for ka in range(top.pairs.algebra.size):
        a1, a2 = top.pairs.p1(ka), top.pairs.p2(ka)
        if g.dv1(top.m(ka)) != bottom.compose(g.dv1(a1), g.dv1(a2)):
            return False
        if g.cv1(top.m(ka)) != bottom.compose(g.cv1(a1), g.cv1(a2)):
            return False
    return True


@lru_cache(maxsize=None)
def check_double_groupoid(dg: DoubleReflexiveGraph) -> Optional[DoubleGroupoid]:
    """Find groupoid structures on both rows and both columns and verify
    that every structure map is an internal functor crosswise; returns the
    assembled double groupoid or None."""
    top = groupoid_structure(dg.top_row())
    bottom = groupoid_structure(dg.bottom_row())
    left = groupoid_structure(dg.left_col())
    right = groupoid_structure(dg.right_col())
    if top is None or bottom is None or left is None or right is None:
        return None
    functor_checks = (
        (GraphMorphism(dg.left_col(), dg.right_col(), dg.dh1, dg.dh0), left, right),
        (GraphMorphism(dg.left_col(), dg.right_col(), dg.ch1, dg.ch0), left, right),
        (GraphMorphism(dg.right_col(), dg.left_col(), dg.eh1, dg.eh0), right, left),
        (GraphMorphism(dg.top_row(), dg.bottom_row(), dg.dv1, dg.dv0), top, bottom),
        (GraphMorphism(dg.top_row(), dg.bottom_row(), dg.cv1, dg.cv0), top, bottom),
        (GraphMorphism(dg.bottom_row(), dg.top_row(), dg.ev1, dg.ev0), bottom, top),
    )
    for phi, dom, cod in functor_checks:
        if not is_internal_functor(phi, dom, cod):
            return None
    assembled = DoubleGroupoid(dg, top, bottom, left, right)
    if not _interchange_holds(assembled):
        return None
    return assembled


def is_two_groupoid(dg: DoubleGroupoid) -> bool:
    """True iff the lower horizontal section is an isomorphism; its inverse
    is then both lower endpoint maps."""
    g = dg.graph
    if not g.eh0.is_bijective():
        return False
    inv = g.eh0.inverse()
    return g.dh0 == inv and g.ch0 == inv


@dataclass(frozen=True)
class DoubleFunctor:
    """Four corner maps commuting with all twelve structure maps and
    preserving the four compositions."""

    dom: DoubleGroupoid
    cod: DoubleGroupoid
    f11: Homomorphism
    f10: Homomorphism
    f01: Homomorphism
    f00: Homomorphism

    def __post_init__(self) -> None:
        g, h = self.dom.graph, self.cod.graph
        endpoints = (
            (self.f11, g.C11, h.C11),
            (self.f10, g.C10, h.C10),
            (self.f01, g.C01, h.C01),
            (self.f00, g.C00, h.C00),
        )
        for f, dom_alg, cod_alg in endpoints:
            if not _same(f.dom, dom_alg) or not _same(f.cod, cod_alg):
                raise ValidationError("double functor component has mismatched endpoints")
        squares = (
            ("dh1", self.f10 @ g.dh1, h.dh1 @ self.f11),
            ("ch1", self.f10 @ g.ch1, h.ch1 @ self.f11),
            ("eh1", self.f11 @ g.eh1, h.eh1 @ self.f10),
            ("dh0", self.f00 @ g.dh0, h.dh0 @ self.f01),
            ("ch0", self.f00 @ g.ch0, h.ch0 @ self.f01),
            ("eh0", self.f01 @ g.eh0, h.eh0 @ self.f00),
            ("dv1", self.f01 @ g.dv1, h.dv1 @ self.f11),
            ("cv1", self.f01 @ g.cv1, h.cv1 @ self.f11),
            ("ev1", self.f11 @ g.ev1, h.ev1 @ self.f01),
            ("dv0", self.f00 @ g.dv0, h.dv0 @ self.f10),
            ("cv0", self.f00 @ g.cv0, h.cv0 @ self.f10),
            ("ev0", self.f10 @ g.ev0, h.ev0 @ self.f00),
        )
        for name, lhs, rhs in squares:
            if lhs != rhs:
                raise ValidationError(f"double functor square at {name} fails")
        levels = (
            (GraphMorphism(g.top_row(), h.top_row(), self.f11, self.f10), self.dom.top, self.cod.top),
            (GraphMorphism(g.bottom_row(), h.bottom_row(), self.f01, self.f00), self.dom.bottom, self.cod.bottom),
            (GraphMorphism(g.left_col(), h.left_col(), self.f11, self.f01), self.dom.left, self.cod.left),
            (GraphMorphism(g.right_col(), h.right_col(), self.f10, self.f00), self.dom.right, self.cod.right),
        )
        for phi, dom_gpd, cod_gpd in levels:
            if not is_internal_functor(phi, dom_gpd, cod_gpd):
                raise ValidationError("double functor does not preserve a composition")

    @cached_property
    def _hash(self) -> int:
        return hash((self.dom, self.cod, self.f11, self.f10, self.f01, self.f00))

    def __hash__(self) -> int:
        return self._hash

    def components(self) -> tuple[Homomorphism, Homomorphism, Homomorphism, Homomorphism]:
        return (self.f11, self.f10, self.f01, self.f00)

    def __matmul__(self, other: "DoubleFunctor") -> "DoubleFunctor":
        if other.cod != self.dom:
            raise ValidationError("double functor composition endpoints do not match")
        return DoubleFunctor(
            other.dom,
            self.cod,
            self.f11 @ other.f11,
            self.f10 @ other.f10,
            self.f01 @ other.f01,
            self.f00 @ other.f00,
        )

    def is_levelwise_bijective(self) -> bool:
        return all(f.is_bijective() for f in self.components())


def identity_double_functor(dg: DoubleGroupoid) -> DoubleFunctor:
    g = dg.graph
    return DoubleFunctor(
        dg, dg, identity(g.C11), identity(g.C10), identity(g.C01), identity(g.C00)
    )


# ---------------------------------------------------------------------------
# One-sorted presentations

RESERVED_OPS = ("s", "t", "u", "v")


def strip_reserved(alg: FiniteAlgebra) -> FiniteAlgebra:
    keep = [
        (op, table)
        for op, table in zip(alg.signature.operations, alg.tables)
        if op[0] not in RESERVED_OPS
    ]
    return FiniteAlgebra(
        alg.size,
        alg.signature.without(RESERVED_OPS),
        tuple(table for _, table in keep),
        alg.maltsev_term,
    )


@dataclass(frozen=True)
class LodayAlgebra:
    """A one-sorted groupoid presentation: an algebra with adjoined unary
    operations ``s``, ``t`` (and ``u``, ``v`` for double structures)."""

    algebra: FiniteAlgebra

    def __post_init__(self) -> None:
        sig = self.algebra.signature
        for name in ("s", "t"):
            if name not in sig or sig.arity(name) != 1:
                raise ValidationError(f"presentation requires a unary operation {name!r}")
        if ("u" in sig) != ("v" in sig):
            raise ValidationError("operations u and v must come together")
        if "u" in sig and (sig.arity("u") != 1 or sig.arity("v") != 1):
            raise ValidationError("operations u and v must be unary")

    @property
    def has_double(self) -> bool:
        return "u" in self.algebra.signature

    def unary(self, name: str) -> tuple[int, ...]:
        return self.algebra.table(name)

    @cached_property
    def base(self) -> FiniteAlgebra:
        return strip_reserved(self.algebra)


def loday_encode(gpd: InternalGroupoid) -> LodayAlgebra:
    """Adjoin s = e.d and t = e.c to the algebra of arrows."""
    g = gpd.graph
    s_tab = tuple((g.e @ g.d).map)
    t_tab = tuple((g.e @ g.c).map)
    sig = g.C1.signature.extend((("s", 1), ("t", 1)))
    alg = FiniteAlgebra(g.C1.size, sig, g.C1.tables + (s_tab, t_tab), g.C1.maltsev_term)
    return LodayAlgebra(alg)


def loday_encode_double(dg: DoubleGroupoid) -> LodayAlgebra:
    """Adjoin s, t from the rows and u, v from the columns, on the algebra
    of double cells."""
    g = dg.graph
    s_tab = tuple((g.eh1 @ g.dh1).map)
    t_tab = tuple((g.eh1 @ g.ch1).map)
    u_tab = tuple((g.ev1 @ g.dv1).map)
    v_tab = tuple((g.ev1 @ g.cv1).map)
    sig = g.C11.signature.extend((("s", 1), ("t", 1), ("u", 1), ("v", 1)))
    alg = FiniteAlgebra(
        g.C11.size, sig, g.C11.tables + (s_tab, t_tab, u_tab, v_tab), g.C11.maltsev_term
    )
    return LodayAlgebra(alg)


def _check_unary_endomorphism(base: FiniteAlgebra, table: Sequence[int], name: str) -> None:
    if not is_homomorphism(table, base, base):
        raise LodayIdentityError(f"operation {name!r} is not an endomorphism")


def _corestricted(base: FiniteAlgebra, table: Sequence[int], sub) -> Homomorphism:
    position = {v: k for k, v in enumerate(sub.inclusion.map)}
    return Homomorphism(base, sub.algebra, tuple(position[v] for v in table))


def loday_decode(lod: LodayAlgebra) -> InternalGroupoid:
    """Rebuild the groupoid: objects are the fixed points of s, the
    endpoint maps corestrict s and t, and the unit is the inclusion."""
    base = lod.base
    s_tab, t_tab = lod.unary("s"), lod.unary("t")
    _check_unary_endomorphism(base, s_tab, "s")
    _check_unary_endomorphism(base, t_tab, "t")
    for x in base.elements():
        if s_tab[t_tab[x]] != t_tab[x]:
            raise LodayIdentityError("identity s.t = t fails")
        if t_tab[s_tab[x]] != s_tab[x]:
            raise LodayIdentityError("identity t.s = s fails")
    s_hom = Homomorphism(base, base, tuple(s_tab))
    t_hom = Homomorphism(base, base, tuple(t_tab))
    comm = tc_commutator(base, kernel_pair(s_hom), kernel_pair(t_hom))
    if not comm.is_identity():
        raise NontrivialCommutatorError("commutator of the kernel congruences is not trivial")
    objects = subalgebra(base, set(s_tab))
    graph = ReflexiveGraph(
        base,
        objects.algebra,
        _corestricted(base, s_tab, objects),
        _corestricted(base, t_tab, objects),
        objects.inclusion,
    )
    gpd = groupoid_structure(graph)
    if gpd is None:
        raise StructureError("presentation decodes to a graph without structure")
    return gpd


def loday_decode_double(lod: LodayAlgebra) -> DoubleGroupoid:
    """Rebuild a double groupoid from a four-operation presentation."""
    report = check_variety_presentation(lod)
    if not report.ok:
        failed = ", ".join(name for name, okay, _ in report.items if not okay)
        if all("commutator" in name for name, okay, _ in report.items if not okay):
            raise NontrivialCommutatorError(f"presentation fails: {failed}")
        raise LodayIdentityError(f"presentation fails: {failed}")
    base = lod.base
    s_tab, t_tab = lod.unary("s"), lod.unary("t")
    u_tab, v_tab = lod.unary("u"), lod.unary("v")
    row_objects = subalgebra(base, set(s_tab))
    col_objects = subalgebra(base, set(u_tab))
    corner = subalgebra(base, {s_tab[u_tab[x]] for x in base.elements()})

    def corestrict_between(table: Sequence[int], sub_dom, sub_cod) -> Homomorphism:
        position = {v: k for k, v in enumerate(sub_cod.inclusion.map)}
        return Homomorphism(
            sub_dom.algebra,
            sub_cod.algebra,
            tuple(position[table[v]] for v in sub_dom.inclusion.map),
        )

    def include_between(sub_small, sub_big) -> Homomorphism:
        position = {v: k for k, v in enumerate(sub_big.inclusion.map)}
        return Homomorphism(
            sub_small.algebra,
            sub_big.algebra,
            tuple(position[v] for v in sub_small.inclusion.map),
        )

    graph = DoubleReflexiveGraph(
        C11=base,
        C10=row_objects.algebra,
        C01=col_objects.algebra,
        C00=corner.algebra,
        dh1=_corestricted(base, s_tab, row_objects),
        ch1=_corestricted(base, t_tab, row_objects),
        eh1=row_objects.inclusion,
        dh0=corestrict_between(s_tab, col_objects, corner),
        ch0=corestrict_between(t_tab, col_objects, corner),
        eh0=include_between(corner, col_objects),
        dv1=_corestricted(base, u_tab, col_objects),
        cv1=_corestricted(base, v_tab, col_objects),
        ev1=col_objects.inclusion,
        dv0=corestrict_between(u_tab, row_objects, corner),
        cv0=corestrict_between(v_tab, row_objects, corner),
        ev0=include_between(corner, row_objects),
    )
    dg = check_double_groupoid(graph)
    if dg is None:
        raise StructureError("presentation decodes to a double graph without structure")
    return dg


@dataclass(frozen=True)
class PresentationReport:
    """Outcome of every identity, endomorphism and commutator check."""

    items: tuple[tuple[str, bool, str], ...]

    @property
    def ok(self) -> bool:
        return all(okay for _, okay, _ in self.items)

    def failures(self) -> tuple[str, ...]:
        return tuple(name for name, okay, _ in self.items if not okay)


def check_variety_presentation(lod: LodayAlgebra) -> PresentationReport:
    """Diagnose a four-operation presentation: endomorphism conditions, the
    eight interchange identities, and both kernel commutators."""
    if not lod.has_double:
        raise ValidationError("presentation check requires all of s, t, u, v")
    base = lod.base
    tables = {name: lod.unary(name) for name in RESERVED_OPS}
    items: list[tuple[str, bool, str]] = []
    endo_ok = {}
    for name in RESERVED_OPS:
        okay = is_homomorphism(tables[name], base, base)
        endo_ok[name] = okay
        items.append((f"{name} endomorphism", okay, "" if okay else "not a homomorphism"))
    identities = (
        ("st = t", "s", "t", "t"),
        ("ts = s", "t", "s", "s"),
        ("uv = v", "u", "v", "v"),
        ("vu = u", "v", "u", "u"),
    )
    for label, outer, inner, expect in identities:
        bad = [
            x
            for x in base.elements()
            if tables[outer][tables[inner][x]] != tables[expect][x]
        ]
        items.append((label, not bad, "" if not bad else f"fails at element {bad[0]}"))
    commuting = (("su = us", "s", "u"), ("sv = vs", "s", "v"), ("tu = ut", "t", "u"), ("tv = vt", "t", "v"))
    for label, a, b in commuting:
        bad = [
            x
            for x in base.elements()
            if tables[a][tables[b][x]] != tables[b][tables[a][x]]
        ]
        items.append((label, not bad, "" if not bad else f"fails at element {bad[0]}"))
    for label, a, b in (("commutator(ker s, ker t) trivial", "s", "t"), ("commutator(ker u, ker v) trivial", "u", "v")):
        if not (endo_ok[a] and endo_ok[b]):
            items.append((label, False, "skipped: operations are not endomorphisms"))
            continue
        ka = kernel_pair(Homomorphism(base, base, tuple(tables[a])))
        kb = kernel_pair(Homomorphism(base, base, tuple(tables[b])))
        trivial = tc_commutator(base, ka, kb).is_identity()
        items.append((label, trivial, "" if trivial else "commutator is non-trivial"))
    return PresentationReport(tuple(items))


def check_two_groupoid_identities(lod: LodayAlgebra) -> bool:
    """The extra identities singling out 2-groupoids among double
    structures: u = u.s = u.t and v = v.s = v.t pointwise."""
    report = check_variety_presentation(lod)
    if not report.ok:
        raise ValidationError(
            "two-groupoid identities are only meaningful for a valid presentation"
        )
    s_tab, t_tab = lod.unary("s"), lod.unary("t")
    u_tab, v_tab = lod.unary("u"), lod.unary("v")
    base = lod.base
    for x in base.elements():
        if not (u_tab[s_tab[x]] == u_tab[x] == u_tab[t_tab[x]]):
            return False
        if not (v_tab[s_tab[x]] == v_tab[x] == v_tab[t_tab[x]]):
            return False
    return True
