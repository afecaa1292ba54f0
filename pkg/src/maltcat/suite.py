"""The acceptance suite: one callable per criterion, shared by the CLI
runner and the pytest suite.

Each criterion is fully exhaustive over the bundled fixture corpus and
returns a result object; a failure message always names the first
violated instance.  The ``smoke`` level trims the fixture sets so the
whole run stays within seconds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterable

from .algebra import FiniteAlgebra, Homomorphism, hom_set, identity
from .congruence import all_congruences, quotient, tc_commutator
from .generators import (
    affine_cyclic,
    cyclic_group,
    klein_four,
    standard_algebras,
    standard_double_groupoids,
    standard_graph_fixtures,
    standard_groupoids,
    symmetric_group_3,
    trivial_algebra,
)
from .internal import (
    GraphMorphism,
    check_two_groupoid_identities,
    check_variety_presentation,
    groupoid_structure,
    groupoid_structures_exhaustive,
    is_internal_functor,
    is_two_groupoid,
    loday_encode,
    loday_encode_double,
    loday_decode,
    LodayAlgebra,
)
from .natmaltsev import (
    NotAffineError,
    commutator_cross_check,
    check_square_pullback,
    is_affine,
    unit_discrete_fibration_check,
)
from .reflection import coreflect, factor_through_unit, reflect, verify_birkhoff_closure
from .search import (
    double_functors,
    double_groupoid_quotients,
    find_double_isomorphism,
    graph_morphisms,
    sub_double_groupoids,
)
from .generators import discrete_double


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _two_groupoid_fixtures(max_corner: int) -> dict:
    return {
        name: dg
        for name, dg in standard_double_groupoids().items()
        if is_two_groupoid(dg) and max(a.size for a in dg.graph.corners()) <= max_corner
    }


def _fixtures(max_corner: int = 8) -> dict:
    return {
        name: dg
        for name, dg in standard_double_groupoids().items()
        if max(a.size for a in dg.graph.corners()) <= max_corner
    }


def criterion_reflector(smoke: bool = False) -> tuple[bool, str]:
    """Every fixture reflects to a 2-groupoid with a surjective unit, and
    factorizations through the unit exist uniquely."""
    fixtures = _fixtures()
    if smoke:
        fixtures = {k: fixtures[k] for k in list(fixtures)[:3]}
    for name, dg in fixtures.items():
        r = reflect(dg)
        if not is_two_groupoid(r.two_groupoid):
            return False, f"{name}: reflection is not a 2-groupoid"
        if not all(c.is_surjective() for c in r.unit.components()):
            return False, f"{name}: unit is not levelwise surjective"
    targets = _two_groupoid_fixtures(4)
    if smoke:
        targets = {k: targets[k] for k in list(targets)[:2]}
    pairs = 0
    for cname, c in fixtures.items():
        r = reflect(c)
        for dname, d in targets.items():
            if c.graph.C11.signature != d.graph.C11.signature:
                continue
            arrows_up = double_functors(r.two_groupoid, d)
            for f in double_functors(c, d):
                g = factor_through_unit(f)
                matching = [
                    h
                    for h in arrows_up
                    if all(
                        hu == fu
                        for hu, fu in zip(
                            (h @ r.unit).components(), f.components()
                        )
                    )
                ]
                if matching != [g]:
                    return False, f"{cname}->{dname}: factorization is not unique"
                pairs += 1
    return True, f"{len(fixtures)} fixtures reflected; {pairs} factorizations unique"


def criterion_collapse(smoke: bool = False) -> tuple[bool, str]:
    """The canonical non-2-groupoid collapses to the point and coreflects
    to the discrete 2-groupoid on the object group."""
    dg = standard_double_groupoids()["vd-pair-Z2"]
    r = reflect(dg)
    sizes = [a.size for a in r.two_groupoid.graph.corners()]
    if sizes != [1, 1, 1, 1]:
        return False, f"reflection corners {sizes} != [1, 1, 1, 1]"
    c = coreflect(dg)
    csizes = [a.size for a in c.two_groupoid.graph.corners()]
    if csizes != [2, 2, 2, 2]:
        return False, f"coreflection corners {csizes} != [2, 2, 2, 2]"
    if find_double_isomorphism(c.two_groupoid, discrete_double(cyclic_group(2))) is None:
        return False, "coreflection is not the discrete 2-groupoid on Z2"
    return True, "collapse and coreflection corner sizes exact"


def criterion_birkhoff(smoke: bool = False) -> tuple[bool, str]:
    """2-groupoids are closed under levelwise quotients and substructures."""
    fixtures = _two_groupoid_fixtures(6)
    if smoke:
        fixtures = {k: fixtures[k] for k in list(fixtures)[:2]}
    quotients = subs = 0
    for name, dg in fixtures.items():
        for quot, projection in double_groupoid_quotients(dg):
            if quot is None:
                return False, f"{name}: a quotient is not even a double groupoid"
            if not verify_birkhoff_closure(projection):
                return False, f"{name}: a quotient fails to be a 2-groupoid"
            quotients += 1
        for sub, inclusion in sub_double_groupoids(dg):
            if sub is None:
                return False, f"{name}: a substructure is not even a double groupoid"
            if not is_two_groupoid(sub):
                return False, f"{name}: a substructure fails to be a 2-groupoid"
            subs += 1
    return True, f"{quotients} quotients and {subs} substructures all 2-groupoids"


def criterion_presentation(smoke: bool = False) -> tuple[bool, str]:
    """One-sorted round trips and the presentation diagnostics."""
    groupoids = standard_groupoids()
    if smoke:
        groupoids = {k: groupoids[k] for k in list(groupoids)[:3]}
    for name, gpd in groupoids.items():
        lod = loday_encode(gpd)
        back = loday_decode(lod)
        graph = gpd.graph
        # canonical comparison: identity on arrows, the section on objects
        relabel = {v: k for k, v in enumerate(back.graph.e.map)}
        witness = Homomorphism(
            graph.C0, back.graph.C0, tuple(relabel[graph.e(y)] for y in graph.C0.elements())
        )
        arrows = Homomorphism(graph.C1, back.graph.C1, tuple(range(graph.C1.size)))
        GraphMorphism(graph, back.graph, arrows, witness)
        if not witness.is_bijective():
            return False, f"{name}: decode does not invert encode"
        if loday_encode(back).algebra.tables != lod.algebra.tables:
            return False, f"{name}: encode after decode changed the tables"
    doubles = standard_double_groupoids()
    for name, dg in doubles.items():
        lod = loday_encode_double(dg)
        report = check_variety_presentation(lod)
        if not report.ok:
            return False, f"{name}: presentation fails {report.failures()}"
        expected = is_two_groupoid(dg)
        if check_two_groupoid_identities(lod) != expected:
            return False, f"{name}: 2-groupoid identities disagree with the structure"
    # a deliberately broken presentation must be named by the report
    broken = _mutated_presentation()
    report = check_variety_presentation(broken)
    if report.ok or "su = us" not in report.failures():
        return False, "mutated presentation not diagnosed at su = us"
    return True, f"{len(groupoids)} round trips, {len(doubles)} presentations, negatives diagnosed"


def _mutated_presentation() -> LodayAlgebra:
    """A presentation of the worked double groupoid with the u table
    rerouted so that it no longer commutes with the non-trivial s."""
    dg = standard_double_groupoids()["vd-pair-Z2"]
    lod = loday_encode_double(dg)
    alg = lod.algebra
    tables = list(alg.tables)
    names = [name for name, _ in alg.signature.operations]
    u_at = names.index("u")
    u_table = list(tables[u_at])
    u_table[0], u_table[1] = u_table[1], u_table[0]
    tables[u_at] = tuple(u_table)
    return LodayAlgebra(
        FiniteAlgebra(alg.size, alg.signature, tuple(tables), alg.maltsev_term)
    )


def criterion_uniqueness_fullness(smoke: bool = False) -> tuple[bool, str]:
    """At most one structure per graph; every graph morphism between
    groupoids preserves composition."""
    graphs = standard_graph_fixtures()
    if smoke:
        graphs = {k: graphs[k] for k in list(graphs)[:4]}
    for name, graph in graphs.items():
        found = groupoid_structures_exhaustive(graph)
        if len(found) > 1:
            return False, f"{name}: {len(found)} groupoid structures"
        expected = groupoid_structure(graph)
        if (expected is None) != (len(found) == 0):
            return False, f"{name}: exhaustive search disagrees with the commutator test"
    groupoids = standard_groupoids()
    if smoke:
        groupoids = {k: groupoids[k] for k in list(groupoids)[:3]}
    checked = 0
    for cname, cg in groupoids.items():
        for dname, dg in groupoids.items():
            if cg.graph.C1.signature != dg.graph.C1.signature:
                continue
            for phi in graph_morphisms(cg.graph, dg.graph):
                if not is_internal_functor(phi, cg, dg):
                    return False, f"{cname}->{dname}: a graph morphism breaks composition"
                checked += 1
    return True, f"{len(graphs)} graphs searched, {checked} morphisms all functorial"


def _group_commutator_oracle(alg: FiniteAlgebra, r, s):
    """Group-theoretic commutator of the normal subgroups attached to two
    congruences, computed by elementwise closure; independent of the
    term-condition path."""
    sig = alg.signature
    if "mul" in sig:
        mul_name, inv_name, unit_name = "mul", "inv", "id"
    else:
        mul_name, inv_name, unit_name = "add", "neg", "zero"
    unit = alg.apply(unit_name)
    m_block = [x for x in alg.elements() if r.related(x, unit)]
    n_block = [x for x in alg.elements() if s.related(x, unit)]
    gens = set()
    for m in m_block:
        for n in n_block:
            gens.add(
                alg.apply(
                    mul_name,
                    alg.apply(mul_name, m, n),
                    alg.apply(
                        mul_name, alg.apply(inv_name, m), alg.apply(inv_name, n)
                    ),
                )
            )
    subgroup = {unit}
    frontier = list(gens)
    while frontier:
        x = frontier.pop()
        if x in subgroup:
            continue
        subgroup.add(x)
        for y in list(subgroup):
            for z in (alg.apply(mul_name, x, y), alg.apply(mul_name, y, x)):
                if z not in subgroup:
                    frontier.append(z)
        inv_x = alg.apply(inv_name, x)
        if inv_x not in subgroup:
            frontier.append(inv_x)
    rep = []
    first: dict[frozenset, int] = {}
    for x in alg.elements():
        coset = frozenset(alg.apply(mul_name, x, h) for h in subgroup)
        rep.append(first.setdefault(coset, x))
    from .congruence import Congruence

    return Congruence(alg, tuple(rep))


def criterion_commutator(smoke: bool = False) -> tuple[bool, str]:
    """The term-condition commutator matches the group-theoretic one on
    every pair of congruences of every group fixture."""
    algebras = [cyclic_group(2), cyclic_group(4), klein_four(), symmetric_group_3()]
    if smoke:
        algebras = algebras[:2]
    s3_congs = all_congruences(symmetric_group_3())
    if len(s3_congs) != 3:
        return False, f"S3 has {len(s3_congs)} congruences, not 3"
    checked = 0
    for alg in algebras:
        congs = all_congruences(alg)
        for r in congs:
            for s in congs:
                expected = _group_commutator_oracle(alg, r, s)
                if tc_commutator(alg, r, s) != expected:
                    return False, f"{alg.name}: commutator disagrees with the group oracle"
                checked += 1
    return True, f"{checked} commutator pairs agree with the group oracle"


def _affine_corpus() -> list[FiniteAlgebra]:
    from .algebra import product

    return [
        cyclic_group(2),
        cyclic_group(4),
        klein_four(),
        product(cyclic_group(4), cyclic_group(2)).algebra.renamed("Z4xZ2"),
        trivial_algebra("abelian"),
        affine_cyclic(2),
        affine_cyclic(4),
    ]


def criterion_natmaltsev(smoke: bool = False) -> tuple[bool, str]:
    """Affine pullback squares, discrete-fibration units, and the relation
    between double centralizing and the vanishing commutator."""
    corpus = _affine_corpus()
    if smoke:
        corpus = corpus[:3]
    square_checks = 0
    for x in corpus:
        if is_affine(x) is None:
            return False, f"{x.name}: expected affine"
        surjections = [quotient(x, theta).projection for theta in all_congruences(x)]
        for s_alg in corpus:
            if s_alg.signature != x.signature or s_alg.size > 8:
                continue
            monos = [h for h in hom_set(x, s_alg) if h.is_injective()]
            for mono in monos:
                retractions = [
                    f for f in hom_set(s_alg, x) if (f @ mono).is_identity()
                ]
                for f in retractions:
                    for q in surjections:
                        if not check_square_pullback(q, mono, f):
                            return (
                                False,
                                f"{x.name}->{s_alg.name}: split-mono square is not a pullback",
                            )
                        square_checks += 1
    fibration_checks = refused = 0
    doubles = standard_double_groupoids()
    if smoke:
        doubles = {k: doubles[k] for k in list(doubles)[:4]}
    for name, dg in doubles.items():
        try:
            if not unit_discrete_fibration_check(dg, reflect(dg)):
                return False, f"{name}: unit is not a discrete fibration"
            fibration_checks += 1
        except NotAffineError:
            refused += 1
    cross = 0
    cross_corpus = [cyclic_group(2), cyclic_group(4), klein_four(), symmetric_group_3(),
                    affine_cyclic(2), affine_cyclic(4)]
    if smoke:
        cross_corpus = cross_corpus[:3]
    for x in cross_corpus:
        congs = all_congruences(x)
        for r in congs:
            for s in congs:
                report = commutator_cross_check(x, r, s)
                if not report.implication_holds:
                    return False, f"{x.name}: centralizing relation with non-trivial commutator"
                if report.affine and not report.agree:
                    return False, f"{x.name}: affine instance where the two views disagree"
                cross += 1
    return (
        True,
        f"{square_checks} pullback squares, {fibration_checks} fibration checks "
        f"({refused} refused as non-affine), {cross} cross-checks",
    )


def criterion_adjunction(smoke: bool = False) -> tuple[bool, str]:
    """Hom-set bijections along the unit and along the counit, by full
    enumeration of double functors at corner size <= 4."""
    small = _fixtures(4)
    targets = _two_groupoid_fixtures(4)
    if smoke:
        small = {k: small[k] for k in list(small)[:3]}
        targets = {k: targets[k] for k in list(targets)[:2]}
    unit_checks = counit_checks = 0
    for cname, c in small.items():
        r = reflect(c)
        for dname, d in targets.items():
            if c.graph.C11.signature != d.graph.C11.signature:
                continue
            upstairs = double_functors(r.two_groupoid, d)
            downstairs = set(double_functors(c, d))
            composed = {g @ r.unit for g in upstairs}
            if len(composed) != len(upstairs) or composed != downstairs:
                return False, f"unit bijection fails for {cname} -> {dname}"
            unit_checks += 1
        cr = coreflect(c)
        for xname, x in targets.items():
            if x.graph.C11.signature != c.graph.C11.signature:
                continue
            into_sub = double_functors(x, cr.two_groupoid)
            into_c = set(double_functors(x, c))
            composed = {cr.counit @ g for g in into_sub}
            if len(composed) != len(into_sub) or composed != into_c:
                return False, f"counit bijection fails for {xname} -> {cname}"
            counit_checks += 1
    return True, f"{unit_checks} unit and {counit_checks} counit bijections exact"


CRITERIA: tuple[tuple[str, Callable[[bool], tuple[bool, str]]], ...] = (
    ("reflector-correctness", criterion_reflector),
    ("worked-collapse", criterion_collapse),
    ("birkhoff-closure", criterion_birkhoff),
    ("presentation-equivalence", criterion_presentation),
    ("uniqueness-fullness", criterion_uniqueness_fullness),
    ("commutator-cross-validation", criterion_commutator),
    ("naturally-maltsev", criterion_natmaltsev),
    ("adjunction-bijection", criterion_adjunction),
)


def run_suite(level: str = "full") -> list[CriterionResult]:
    if level not in ("smoke", "full"):
        raise ValueError("suite level must be 'smoke' or 'full'")
    smoke = level == "smoke"
    results = []
    for name, fn in CRITERIA:
        start = time.perf_counter()
        try:
            passed, detail = fn(smoke)
        except Exception as exc:  # a crash is a failure with the message preserved
            passed, detail = False, f"error: {exc}"
        results.append(CriterionResult(name, passed, detail, time.perf_counter() - start))
    return results
