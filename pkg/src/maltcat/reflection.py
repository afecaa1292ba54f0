"""The 2-groupoid reflector and coreflector on double groupoids.

``reflect`` collapses the lower horizontal graph by coequalizing its two
endpoint maps and then pushing the resulting quotient out along the two
vertical sections; all remaining structure maps are solved for on quotient
representatives and verified against their defining equations, so any
failure is a loud construction bug rather than a silent wrong answer.

``coreflect`` cuts the double cells down to those whose vertical endpoints
are degenerate, via a joint pullback along the lower horizontal section.

Both results are re-validated as double groupoids before being returned
(paranoid mode; pass ``revalidate=False`` to skip).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import (
    Homomorphism,
    ValidationError,
    identity,
    pairing,
    parallel,
    product,
    pullback,
)
from .congruence import (
    coequalizer,
    factor_through_surjection,
    pushout_along_regular_epi,
    split_pushout_retraction,
)
from .internal import (
    DoubleFunctor,
    DoubleGroupoid,
    DoubleReflexiveGraph,
    StructureError,
    check_double_groupoid,
    is_regular_epi,
    is_two_groupoid,
)


class ConstructionError(RuntimeError):
    """An induced map failed its defining equations; this indicates a bug,
    not bad input."""


def _solve(q: Homomorphism, through: Homomorphism, context: str) -> Homomorphism:
    try:
        return factor_through_surjection(q, through)
    except ValidationError as exc:
        raise ConstructionError(f"{context}: {exc}") from exc


@dataclass(frozen=True)
class ReflectionResult:
    """A 2-groupoid together with the quotient maps onto it.

    ``unit`` is the four-component projection from the input; the nine
    structure maps of the result are the field maps of
    ``two_groupoid.graph``.
    """

    two_groupoid: DoubleGroupoid
    unit: DoubleFunctor

    def unit_components(self) -> tuple[Homomorphism, ...]:
        return self.unit.components()


@dataclass(frozen=True)
class CoreflectionResult:
    """A 2-groupoid embedded in the input by the four-component counit."""

    two_groupoid: DoubleGroupoid
    counit: DoubleFunctor

    def counit_components(self) -> tuple[Homomorphism, ...]:
        return self.counit.components()


@lru_cache(maxsize=None)
def reflect(dg: DoubleGroupoid, revalidate: bool = True) -> ReflectionResult:
    """Best 2-groupoid quotient of a double groupoid, with its unit."""
    g = dg.graph

    # collapse the lower horizontal graph
    coeq = coequalizer(g.dh0, g.ch0)
    unit00 = coeq.projection
    base = coeq.quotient
    unit01 = unit00 @ g.dh0
    if unit01 != unit00 @ g.ch0:
        raise ConstructionError("coequalizer failed to merge the two lower endpoint maps")

    # push the collapsed objects out along the two vertical sections
    po_right = pushout_along_regular_epi(unit00, g.ev0)
    unit10 = po_right.from_target
    front_ev0 = po_right.from_codomain
    front_dv0 = split_pushout_retraction(po_right, g.dv0)
    front_cv0 = split_pushout_retraction(po_right, g.cv0)
    if front_dv0 @ unit10 != unit00 @ g.dv0 or front_cv0 @ unit10 != unit00 @ g.cv0:
        raise ConstructionError("vertical endpoint maps fail their defining equations")

    po_top = pushout_along_regular_epi(unit01, g.ev1)
    unit11 = po_top.from_target
    front_ev1 = po_top.from_codomain

    front_eh1 = _solve(unit10, unit11 @ g.eh1, "induced top section")
    if front_eh1 @ front_ev0 != front_ev1:
        raise ConstructionError("induced top section fails its section equation")

    front_dh1 = _solve(unit11, unit10 @ g.dh1, "induced top endpoint map")
    front_ch1 = _solve(unit11, unit10 @ g.ch1, "induced top endpoint map")
    if front_dh1 @ front_ev1 != front_ev0 or front_ch1 @ front_ev1 != front_ev0:
        raise ConstructionError("induced top endpoint maps fail their section equations")

    front_dv1 = front_dv0 @ front_dh1
    front_cv1 = front_cv0 @ front_ch1

    one = identity(base)
    front = DoubleReflexiveGraph(
        C11=po_top.apex, C10=po_right.apex, C01=base, C00=base,
        dh1=front_dh1, ch1=front_ch1, eh1=front_eh1,
        dh0=one, ch0=one, eh0=one,
        dv1=front_dv1, cv1=front_cv1, ev1=front_ev1,
        dv0=front_dv0, cv0=front_cv0, ev0=front_ev0,
    )
    result = check_double_groupoid(front)
    if result is None:
        raise ConstructionError("reflection output is not a double groupoid")
    unit = DoubleFunctor(dg, result, unit11, unit10, unit01, unit00)
    if revalidate:
        if not is_two_groupoid(result):
            raise ConstructionError("reflection output is not a 2-groupoid")
        if not all(component.is_surjective() for component in unit.components()):
            raise ConstructionError("reflection unit is not levelwise surjective")
    return ReflectionResult(result, unit)


def reflect_morphism(f: DoubleFunctor) -> DoubleFunctor:
    """The induced map between the reflections of domain and codomain."""
    r_dom = reflect(f.dom)
    r_cod = reflect(f.cod)
    dom_unit, cod_unit = r_dom.unit, r_cod.unit
    dom_front, cod_front = r_dom.two_groupoid.graph, r_cod.two_groupoid.graph

    phi00 = _solve(dom_unit.f00, cod_unit.f00 @ f.f00, "level-0 component")
    phi01 = phi00
    phi10 = _solve(dom_unit.f10, cod_unit.f10 @ f.f10, "level-10 component")
    if phi10 @ dom_front.ev0 != cod_front.ev0 @ phi00:
        raise ConstructionError("induced component breaks the section equation at level 10")
    phi11 = _solve(dom_unit.f11, cod_unit.f11 @ f.f11, "level-11 component")
    if phi11 @ dom_front.ev1 != cod_front.ev1 @ phi01:
        raise ConstructionError("induced component breaks the section equation at level 11")
    out = DoubleFunctor(r_dom.two_groupoid, r_cod.two_groupoid, phi11, phi10, phi01, phi00)
    for ours, theirs in zip(
        (out.f11 @ dom_unit.f11, out.f10 @ dom_unit.f10, out.f01 @ dom_unit.f01, out.f00 @ dom_unit.f00),
        (cod_unit.f11 @ f.f11, cod_unit.f10 @ f.f10, cod_unit.f01 @ f.f01, cod_unit.f00 @ f.f00),
    ):
        if ours != theirs:
            raise ConstructionError("naturality square of the induced map fails")
    return out


def factor_through_unit(f: DoubleFunctor) -> DoubleFunctor:
    """Unique factorization of a map into a 2-groupoid through the unit."""
    if not is_two_groupoid(f.cod):
        raise ValidationError("factorization target must be a 2-groupoid")
    r = reflect(f.dom)
    front = r.two_groupoid.graph
    cod = f.cod.graph

    g00 = _solve(r.unit.f00, f.f00, "object factor")
    g01 = cod.eh0 @ g00
    g10 = _solve(r.unit.f10, f.f10, "level-10 factor")
    if g10 @ front.ev0 != cod.ev0 @ g00:
        raise ConstructionError("level-10 factor fails its section equation")
    g11 = _solve(r.unit.f11, f.f11, "level-11 factor")
    if g11 @ front.ev1 != cod.ev1 @ g01:
        raise ConstructionError("level-11 factor fails its section equation")
    g = DoubleFunctor(r.two_groupoid, f.cod, g11, g10, g01, g00)
    if (
        g.f11 @ r.unit.f11 != f.f11
        or g.f10 @ r.unit.f10 != f.f10
        or g.f01 @ r.unit.f01 != f.f01
        or g.f00 @ r.unit.f00 != f.f00
    ):
        raise ConstructionError("factorization does not recover the original map")
    return g


def verify_birkhoff_closure(f: DoubleFunctor) -> bool:
    """Quotient closure of 2-groupoids: a levelwise-surjective image of a
    2-groupoid must again be one.  A False return is a counterexample."""
    if not is_regular_epi(f):
        raise ValidationError("closure check requires a levelwise surjection")
    if not is_two_groupoid(f.dom):
        raise ValidationError("closure check requires a 2-groupoid domain")
    return is_two_groupoid(f.cod)


@lru_cache(maxsize=None)
def coreflect(dg: DoubleGroupoid, revalidate: bool = True) -> CoreflectionResult:
    """Largest 2-groupoid inside a double groupoid, with its counit.

    The new double cells are the joint pullback of the two vertical
    endpoint maps along the lower horizontal section: exactly the cells
    whose vertical endpoints are degenerate objects.
    """
    g = dg.graph

    vertical_ends = pairing(g.dv1, g.cv1)
    both_sections = parallel(g.eh0, g.eh0)
    joint = pullback(vertical_ends, both_sections)
    cells = joint.algebra
    counit11 = joint.p1
    ends = joint.p2
    corner_pair = product(g.C00, g.C00)
    front_dv1 = corner_pair.p1 @ ends
    front_cv1 = corner_pair.p2 @ ends

    cell_index = {(counit11(k), ends(k)): k for k in cells.elements()}

    def into_cells(raw11: Homomorphism, raw_ends: Homomorphism, context: str) -> Homomorphism:
        values = []
        for x in raw11.dom.elements():
            key = (raw11(x), raw_ends(x))
            if key not in cell_index:
                raise ConstructionError(f"{context}: image escapes the joint pullback")
            values.append(cell_index[key])
        return Homomorphism(raw11.dom, cells, tuple(values))

    diag = pairing(identity(g.C00), identity(g.C00))
    front_ev1 = into_cells(g.ev1 @ g.eh0, diag, "vertical section")
    front_eh1 = into_cells(g.eh1, pairing(g.dv0, g.cv0), "horizontal section")
    front_dh1 = g.dh1 @ counit11
    front_ch1 = g.ch1 @ counit11

    one = identity(g.C00)
    front = DoubleReflexiveGraph(
        C11=cells, C10=g.C10, C01=g.C00, C00=g.C00,
        dh1=front_dh1, ch1=front_ch1, eh1=front_eh1,
        dh0=one, ch0=one, eh0=one,
        dv1=front_dv1, cv1=front_cv1, ev1=front_ev1,
        dv0=g.dv0, cv0=g.cv0, ev0=g.ev0,
    )
    result = check_double_groupoid(front)
    if result is None:
        raise ConstructionError("coreflection output is not a double groupoid")
    counit = DoubleFunctor(
        result, dg, counit11, identity(g.C10), g.eh0, identity(g.C00)
    )
    if revalidate:
        if not is_two_groupoid(result):
            raise ConstructionError("coreflection output is not a 2-groupoid")
        if not all(c.is_injective() for c in counit.components()):
            raise ConstructionError("coreflection counit is not levelwise injective")
    return CoreflectionResult(result, counit)


def factor_through_counit(f: DoubleFunctor) -> DoubleFunctor:
    """Unique factorization of a map from a 2-groupoid through the counit."""
    if not is_two_groupoid(f.dom):
        raise ValidationError("factorization source must be a 2-groupoid")
    r = coreflect(f.cod)
    sub = r.two_groupoid.graph
    src = f.dom.graph
    cod = f.cod.graph

    g00 = f.f00
    g10 = f.f10
    # objects of the source are degenerate, so level-01 values have unique
    # preimages under the lower horizontal section of the target
    lower_inverse = {cod.eh0(a): a for a in cod.C00.elements()}
    values01 = []
    for b in src.C01.elements():
        image = f.f01(b)
        if image not in lower_inverse:
            raise ConstructionError("level-01 image escapes the section; domain is not a 2-groupoid")
        values01.append(lower_inverse[image])
    g01 = Homomorphism(src.C01, cod.C00, tuple(values01))

    cell_index = {
        (r.counit.f11(k), sub.dv1(k), sub.cv1(k)): k for k in sub.C11.elements()
    }
    values11 = []
    for x in src.C11.elements():
        key = (f.f11(x), g01(src.dv1(x)), g01(src.cv1(x)))
        if key not in cell_index:
            raise ConstructionError("level-11 image escapes the joint pullback")
        values11.append(cell_index[key])
    g11 = Homomorphism(src.C11, sub.C11, tuple(values11))

    g = DoubleFunctor(f.dom, r.two_groupoid, g11, g10, g01, g00)
    composed = r.counit @ g
    if composed.components() != f.components():
        raise ConstructionError("counit factorization does not recover the original map")
    return g
