"""Checks specific to affine (naturally Mal'tsev) algebras.

An algebra is treated as affine when its designated Mal'tsev term is
itself a homomorphism from the cube; varietally that is the abelian case.
On affine inputs the pushout of a surjection along a split monomorphism
produces a pullback square, the reflection unit is a discrete fibration,
and the smallest double equivalence relation built from two congruences
centralizes them, forcing the commutator to vanish.  The last implication
is asserted one-directionally; the converse is only reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    ValidationError,
    product,
    subalgebra,
)
from .congruence import (
    Congruence,
    CoequalizerResult,
    coequalizer,
    kernel_pair,
    pushout_along_regular_epi,
    quotient,
    split_pushout_retraction,
    tc_commutator,
)
from .internal import DoubleGroupoid
from .reflection import ReflectionResult


class NotAffineError(ValidationError):
    """An affine-only certification was requested on a non-affine algebra."""


@dataclass(frozen=True)
class AffineWitness:
    """Evidence that the Mal'tsev term commutes with all basic operations:
    the term realized as a homomorphism from the cube."""

    algebra: FiniteAlgebra
    cube_map: Homomorphism


@lru_cache(maxsize=None)
def is_affine(alg: FiniteAlgebra) -> Optional[AffineWitness]:
    """A witness iff the designated ternary term is a homomorphism A^3 -> A."""
    from .algebra import maltsev_apply

    square = product(alg, alg)
    cube = product(square.algebra, alg)
    n = alg.size
    mapping = tuple(
        maltsev_apply(alg, x // (n * n), x // n % n, x % n) for x in range(cube.algebra.size)
    )
    try:
        witness = Homomorphism(cube.algebra, alg, mapping)
    except ValidationError:
        return None
    return AffineWitness(alg, witness)


def _square_is_pullback(
    top: Homomorphism,
    left: Homomorphism,
    right: Homomorphism,
    bottom: Homomorphism,
) -> bool:
    """Exhaustive fiber comparison for a commuting square::

        A --top--> B
        |          |
      left       right
        v          v
        C -bottom-> D

    True iff (left, top) identifies A with {(c, b) : bottom(c) = right(b)}.
    """
    if left.dom != top.dom or right.dom != top.cod or bottom.dom != left.cod:
        raise ValidationError("square legs do not line up")
    if bottom @ left != right @ top:
        raise ValidationError("square does not commute")
    seen = set()
    for a in top.dom.elements():
        key = (left(a), top(a))
        if key in seen:
            return False
        seen.add(key)
    wanted = {
        (c, b)
        for c in bottom.dom.elements()
        for b in right.dom.elements()
        if bottom(c) == right(b)
    }
    return seen == wanted


def check_square_pullback(q: Homomorphism, mono: Homomorphism, splitting: Homomorphism) -> bool:
    """Push a surjection out along a split monomorphism and test whether
    the retraction square is a pullback."""
    if not q.is_surjective():
        raise ValidationError("first leg must be surjective")
    if not (splitting @ mono).is_identity():
        raise ValidationError("given map is not a splitting of the monomorphism")
    po = pushout_along_regular_epi(q, mono)
    retraction = split_pushout_retraction(po, splitting)
    return _square_is_pullback(po.from_target, splitting, retraction, q)


def unit_discrete_fibration_check(dg: DoubleGroupoid, r: ReflectionResult) -> bool:
    """Are the four downward unit squares of the reflection pullbacks?

    Certifies only over affine corner algebras; raises NotAffineError
    otherwise so a non-answer is never mistaken for a yes.
    """
    g = dg.graph
    for corner in g.corners():
        if is_affine(corner) is None:
            raise NotAffineError("discrete-fibration certification requires affine corners")
    if r.unit.dom != dg:
        raise ValidationError("reflection result does not belong to this double groupoid")
    front = r.two_groupoid.graph
    unit = r.unit
    squares = (
        (unit.f10, g.dv0, front.dv0, unit.f00),
        (unit.f10, g.cv0, front.cv0, unit.f00),
        (unit.f11, g.dv1, front.dv1, unit.f01),
        (unit.f11, g.cv1, front.cv1, unit.f01),
    )
    return all(
        _square_is_pullback(top, left, right, bottom)
        for top, left, right, bottom in squares
    )


# ---------------------------------------------------------------------------
# The smallest double equivalence relation on two congruences


@dataclass(frozen=True)
class PedicchioDiagram:
    """The double relation obtained by quotienting a relation algebra.

    ``s_star`` realizes the second congruence as a subalgebra of the
    square with projections ``s1``, ``s2`` and reflexivity ``delta_s``;
    ``c`` coequalizes the two composites of ``delta_s`` with the first
    congruence's projections; ``delta`` is the kernel-pair relation of
    ``c`` realized on ``s_star``, with projections ``pi1``, ``pi2`` and
    the induced maps ``p1``, ``p2``, ``delta_p`` onto the relation algebra
    ``r_star`` of the first congruence.
    """

    base: FiniteAlgebra
    r: Congruence
    s: Congruence
    q: Homomorphism
    r_star: FiniteAlgebra
    r1: Homomorphism
    r2: Homomorphism
    delta_r: Homomorphism
    s_star: FiniteAlgebra
    s1: Homomorphism
    s2: Homomorphism
    delta_s: Homomorphism
    c: Homomorphism
    delta: FiniteAlgebra
    pi1: Homomorphism
    pi2: Homomorphism
    p1: Homomorphism
    p2: Homomorphism
    delta_p: Homomorphism


def _relation_algebra(alg: FiniteAlgebra, cong: Congruence):
    """The congruence as a subalgebra of the square, with projections and
    the reflexivity section."""
    square = product(alg, alg)
    subset = [
        a * alg.size + b
        for a in alg.elements()
        for b in alg.elements()
        if cong.related(a, b)
    ]
    sub = subalgebra(square.algebra, subset)
    position = {v: k for k, v in enumerate(sub.inclusion.map)}
    proj1 = square.p1 @ sub.inclusion
    proj2 = square.p2 @ sub.inclusion
    refl = Homomorphism(alg, sub.algebra, tuple(position[a * alg.size + a] for a in alg.elements()))
    return sub.algebra, proj1, proj2, refl, position


def pedicchio_delta(alg: FiniteAlgebra, r: Congruence, s: Congruence) -> PedicchioDiagram:
    """Assemble the double relation: quotient the base by the first
    congruence, coequalize the matching reflexivity composites on the
    second congruence's relation algebra, and take the kernel pair."""
    if r.algebra != alg or s.algebra != alg:
        raise ValidationError("congruences must live on the given algebra")
    q = quotient(alg, r).projection
    r_star, r1, r2, delta_r, _ = _relation_algebra(alg, r)
    s_star, s1, s2, delta_s, s_pos = _relation_algebra(alg, s)
    coeq: CoequalizerResult = coequalizer(delta_s @ r1, delta_s @ r2)
    c = coeq.projection

    delta_subset = [
        m * s_star.size + m2
        for m in range(s_star.size)
        for m2 in range(s_star.size)
        if c(m) == c(m2)
    ]
    pair_square = product(s_star, s_star)
    delta_sub = subalgebra(pair_square.algebra, delta_subset)
    delta_alg = delta_sub.algebra
    pi1 = pair_square.p1 @ delta_sub.inclusion
    pi2 = pair_square.p2 @ delta_sub.inclusion

    # columns of a kernel-pair element are related pairs of the first
    # congruence, so the column maps land in its relation algebra
    r_pos = {
        (r1(k), r2(k)): k for k in range(r_star.size)
    }
    for k in range(delta_alg.size):
        if (s1(pi1(k)), s1(pi2(k))) not in r_pos or (s2(pi1(k)), s2(pi2(k))) not in r_pos:
            raise ValidationError("kernel-pair columns escape the relation algebra")
    # p1 takes left components of both rows, p2 the right components
    p1 = Homomorphism(
        delta_alg,
        r_star,
        tuple(r_pos[s1(pi1(k)), s1(pi2(k))] for k in range(delta_alg.size)),
    )
    p2 = Homomorphism(
        delta_alg,
        r_star,
        tuple(r_pos[s2(pi1(k)), s2(pi2(k))] for k in range(delta_alg.size)),
    )
    delta_pos = {
        (pi1(k), pi2(k)): k for k in range(delta_alg.size)
    }
    delta_p = Homomorphism(
        r_star,
        delta_alg,
        tuple(
            delta_pos[s_pos[r1(k) * alg.size + r1(k)], s_pos[r2(k) * alg.size + r2(k)]]
            for k in range(r_star.size)
        ),
    )
    return PedicchioDiagram(
        base=alg, r=r, s=s, q=q,
        r_star=r_star, r1=r1, r2=r2, delta_r=delta_r,
        s_star=s_star, s1=s1, s2=s2, delta_s=delta_s,
        c=c,
        delta=delta_alg, pi1=pi1, pi2=pi2, p1=p1, p2=p2, delta_p=delta_p,
    )


def is_double_centralizing(d: PedicchioDiagram) -> bool:
    """True iff all four row-against-column projection squares of the
    double relation are pullbacks."""
    squares = (
        (d.pi1, d.p1, d.s1, d.r1),
        (d.pi2, d.p1, d.s1, d.r2),
        (d.pi1, d.p2, d.s2, d.r1),
        (d.pi2, d.p2, d.s2, d.r2),
    )
    return all(
        _square_is_pullback(top, left, right, bottom)
        for top, left, right, bottom in squares
    )


@dataclass(frozen=True)
class CommutatorCrossCheck:
    """Side-by-side outcome of the relational and term-condition views."""

    double_centralizing: bool
    tc_trivial: bool
    affine: bool

    @property
    def agree(self) -> bool:
        return self.double_centralizing == self.tc_trivial

    @property
    def implication_holds(self) -> bool:
        return (not self.double_centralizing) or self.tc_trivial


def commutator_cross_check(alg: FiniteAlgebra, r: Congruence, s: Congruence) -> CommutatorCrossCheck:
    """Run both views of commutator triviality and report them.

    Only the implication "double centralizing => trivial term-condition
    commutator" is an invariant; disagreement in the other direction is
    recorded, never asserted.
    """
    diagram = pedicchio_delta(alg, r, s)
    centralizing = is_double_centralizing(diagram)
    trivial = tc_commutator(alg, r, s).is_identity()
    return CommutatorCrossCheck(
        double_centralizing=centralizing,
        tc_trivial=trivial,
        affine=is_affine(alg) is not None,
    )
