"""Built-in example algebras, graphs and double groupoids.

The fixture corpus is shared by the test suite, the acceptance runner and
the ``generate`` CLI subcommand.  All group-based fixtures keep corners of
size at most eight so every exhaustive check stays at desk scale.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    Signature,
    identity,
    parse_term,
    product,
)
from .internal import (
    DoubleGroupoid,
    DoubleReflexiveGraph,
    InternalGroupoid,
    ReflexiveGraph,
    StructureError,
    check_double_groupoid,
    discrete_graph,
    groupoid_structure,
)

ABELIAN_SIGNATURE = Signature((("add", 2), ("neg", 1), ("zero", 0)))
ABELIAN_TERM = parse_term("(add x (add (neg y) z))")

GROUP_SIGNATURE = Signature((("mul", 2), ("inv", 1), ("id", 0)))
GROUP_TERM = parse_term("(mul x (mul (inv y) z))")

AFFINE_SIGNATURE = Signature((("p", 3),))
AFFINE_TERM = parse_term("(p x y z)")


@lru_cache(maxsize=None)
def cyclic_group(n: int) -> FiniteAlgebra:
    """The cyclic group of order n in additive notation."""
    if n < 1:
        raise ValueError("group order must be positive")
    add = tuple((a + b) % n for a in range(n) for b in range(n))
    neg = tuple((-a) % n for a in range(n))
    return FiniteAlgebra(
        n, ABELIAN_SIGNATURE, (add, neg, (0,)), ABELIAN_TERM, name=f"Z{n}"
    )


@lru_cache(maxsize=None)
def klein_four() -> FiniteAlgebra:
    return product(cyclic_group(2), cyclic_group(2)).algebra.renamed("Z2xZ2")


@lru_cache(maxsize=None)
def symmetric_group_3() -> FiniteAlgebra:
    """S3 on the six permutations of {0,1,2} in lexicographic order."""
    perms = sorted(itertools.permutations(range(3)))
    index = {p: k for k, p in enumerate(perms)}
    mul = tuple(
        index[tuple(f[g[x]] for x in range(3))] for f in perms for g in perms
    )
    inv = tuple(
        index[tuple(sorted(range(3), key=lambda x: f[x]))] for f in perms
    )
    ident = index[(0, 1, 2)]
    return FiniteAlgebra(
        6, GROUP_SIGNATURE, (mul, inv, (ident,)), GROUP_TERM, name="S3"
    )


@lru_cache(maxsize=None)
def trivial_algebra(sig_kind: str = "abelian") -> FiniteAlgebra:
    """The one-element algebra over one of the bundled signatures."""
    if sig_kind == "abelian":
        sig, term = ABELIAN_SIGNATURE, ABELIAN_TERM
    elif sig_kind == "group":
        sig, term = GROUP_SIGNATURE, GROUP_TERM
    elif sig_kind == "affine":
        sig, term = AFFINE_SIGNATURE, AFFINE_TERM
    else:
        raise ValueError(f"unknown signature kind {sig_kind!r}")
    tables = tuple((0,) * (1**arity) for _, arity in sig.operations)
    return FiniteAlgebra(1, sig, tables, term, name=f"point-{sig_kind}")


@lru_cache(maxsize=None)
def affine_cyclic(n: int) -> FiniteAlgebra:
    """Z_n with only the ternary operation x - y + z (the affine reduct)."""
    table = tuple(
        (a - b + c) % n
        for a in range(n)
        for b in range(n)
        for c in range(n)
    )
    return FiniteAlgebra(n, AFFINE_SIGNATURE, (table,), AFFINE_TERM, name=f"affZ{n}")


def groupoid_from_hom(dom_order: int, cod_order: int, mult: int) -> InternalGroupoid:
    """The groupoid on arrows H x G for the map G -> H, x -> mult*x between
    cyclic groups: an arrow (h, g) runs from h to h + mult*g."""
    if (mult * dom_order) % cod_order != 0:
        raise ValueError("multiplier does not define a homomorphism between the cyclic groups")
    g_alg = cyclic_group(dom_order)
    h_alg = cyclic_group(cod_order)
    arrows = product(h_alg, g_alg)
    d = arrows.p1
    c = Homomorphism(
        arrows.algebra,
        h_alg,
        tuple(
            (x // dom_order + mult * (x % dom_order)) % cod_order
            for x in range(arrows.algebra.size)
        ),
    )
    e = Homomorphism(h_alg, arrows.algebra, tuple(h * dom_order for h in range(cod_order)))
    graph = ReflexiveGraph(arrows.algebra, h_alg, d, c, e)
    gpd = groupoid_structure(graph)
    if gpd is None:
        raise StructureError("cyclic-group graph unexpectedly has no structure")
    return gpd


def discrete_groupoid(alg: FiniteAlgebra) -> InternalGroupoid:
    gpd = groupoid_structure(discrete_graph(alg))
    if gpd is None:
        raise StructureError("discrete graph unexpectedly has no structure")
    return gpd


def _assemble(graph: DoubleReflexiveGraph) -> DoubleGroupoid:
    dg = check_double_groupoid(graph)
    if dg is None:
        raise StructureError("generated double graph carries no double groupoid")
    return dg


def discrete_double(alg: FiniteAlgebra) -> DoubleGroupoid:
    """All four corners equal, every structure map the identity."""
    one = identity(alg)
    graph = DoubleReflexiveGraph(
        C11=alg, C10=alg, C01=alg, C00=alg,
        dh1=one, ch1=one, eh1=one,
        dh0=one, ch0=one, eh0=one,
        dv1=one, cv1=one, ev1=one,
        dv0=one, cv0=one, ev0=one,
    )
    return _assemble(graph)


def vertically_discrete_double(gpd: InternalGroupoid) -> DoubleGroupoid:
    """Both rows are the given groupoid, both columns are discrete.

    The lower horizontal section is the groupoid's unit map, so this is a
    2-groupoid only when that unit is an isomorphism.
    """
    g = gpd.graph
    one1, one0 = identity(g.C1), identity(g.C0)
    graph = DoubleReflexiveGraph(
        C11=g.C1, C10=g.C0, C01=g.C1, C00=g.C0,
        dh1=g.d, ch1=g.c, eh1=g.e,
        dh0=g.d, ch0=g.c, eh0=g.e,
        dv1=one1, cv1=one1, ev1=one1,
        dv0=one0, cv0=one0, ev0=one0,
    )
    return _assemble(graph)


def horizontally_discrete_double(gpd: InternalGroupoid) -> DoubleGroupoid:
    """Both columns are the given groupoid, both rows are discrete; always
    a 2-groupoid since the lower horizontal section is an identity."""
    g = gpd.graph
    one1, one0 = identity(g.C1), identity(g.C0)
    graph = DoubleReflexiveGraph(
        C11=g.C1, C10=g.C1, C01=g.C0, C00=g.C0,
        dh1=one1, ch1=one1, eh1=one1,
        dh0=one0, ch0=one0, eh0=one0,
        dv1=g.d, cv1=g.c, ev1=g.e,
        dv0=g.d, cv0=g.c, ev0=g.e,
    )
    return _assemble(graph)


# ---------------------------------------------------------------------------
# Bundled fixture corpus


@lru_cache(maxsize=None)
def standard_algebras() -> dict[str, FiniteAlgebra]:
    return {
        "Z2": cyclic_group(2),
        "Z4": cyclic_group(4),
        "Z2xZ2": klein_four(),
        "Z4xZ2": product(cyclic_group(4), cyclic_group(2)).algebra.renamed("Z4xZ2"),
        "S3": symmetric_group_3(),
        "affZ2": affine_cyclic(2),
        "affZ4": affine_cyclic(4),
        "point": trivial_algebra("abelian"),
        "point-group": trivial_algebra("group"),
    }


@lru_cache(maxsize=None)
def standard_groupoids() -> dict[str, InternalGroupoid]:
    """Groupoid fixtures; every arrow algebra has at most eight elements."""
    return {
        "disc-Z2": discrete_groupoid(cyclic_group(2)),
        "disc-Z4": discrete_groupoid(cyclic_group(4)),
        "disc-Z2xZ2": discrete_groupoid(klein_four()),
        "disc-S3": discrete_groupoid(symmetric_group_3()),
        "pair-Z2": groupoid_from_hom(2, 2, 1),
        "pair-Z4-zero": groupoid_from_hom(2, 4, 0),
        "pair-Z4-double": groupoid_from_hom(2, 4, 2),
        "pair-Z2-mod": groupoid_from_hom(4, 2, 1),
        "disc-point": discrete_groupoid(trivial_algebra("abelian")),
    }


@lru_cache(maxsize=None)
def standard_graph_fixtures() -> dict[str, ReflexiveGraph]:
    """Reflexive graphs for structure search, including one with no
    groupoid structure (the two-object quotient of S3 collapses badly)."""
    graphs = {name: gpd.graph for name, gpd in standard_groupoids().items()}
    s3 = symmetric_group_3()
    point = trivial_algebra("group")
    to_point = Homomorphism(s3, point, (0,) * 6)
    unit = Homomorphism(point, s3, (s3.apply("id"),))
    graphs["s3-over-point"] = ReflexiveGraph(s3, point, to_point, to_point, unit)
    return graphs


@lru_cache(maxsize=None)
def standard_double_groupoids() -> dict[str, DoubleGroupoid]:
    gs = standard_groupoids()
    return {
        "dd-Z2": discrete_double(cyclic_group(2)),
        "dd-Z4": discrete_double(cyclic_group(4)),
        "dd-Z2xZ2": discrete_double(klein_four()),
        "dd-S3": discrete_double(symmetric_group_3()),
        "dd-point": discrete_double(trivial_algebra("abelian")),
        "dd-point-group": discrete_double(trivial_algebra("group")),
        "vd-pair-Z2": vertically_discrete_double(gs["pair-Z2"]),
        "hd-pair-Z2": horizontally_discrete_double(gs["pair-Z2"]),
        "vd-pair-Z4-zero": vertically_discrete_double(gs["pair-Z4-zero"]),
        "vd-pair-Z4-double": vertically_discrete_double(gs["pair-Z4-double"]),
    }
