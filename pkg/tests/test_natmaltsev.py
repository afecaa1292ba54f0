from __future__ import annotations

import itertools

import pytest

from maltcat.algebra import Homomorphism, hom_set, product
from maltcat.congruence import (
    all_congruences,
    congruence_from_blocks,
    full_congruence,
    identity_congruence,
    quotient,
    tc_commutator,
)
from maltcat.generators import affine_cyclic, cyclic_group, symmetric_group_3
from maltcat.natmaltsev import (
    NotAffineError,
    check_square_pullback,
    commutator_cross_check,
    is_affine,
    is_double_centralizing,
    pedicchio_delta,
    unit_discrete_fibration_check,
)
from maltcat.reflection import reflect


def test_is_affine_z4(z4):
    witness = is_affine(z4)
    assert witness is not None
    assert witness.cube_map.dom.size == 64


def test_is_affine_rejects_s3(s3):
    # oracle: exhibit a violating triple of pairs directly
    from maltcat.algebra import maltsev_apply

    violated = False
    for a1, a2, b1, b2, c1, c2 in itertools.product(range(6), repeat=6):
        left = maltsev_apply(
            s3,
            s3.apply("mul", a1, a2),
            s3.apply("mul", b1, b2),
            s3.apply("mul", c1, c2),
        )
        right = s3.apply(
            "mul", maltsev_apply(s3, a1, b1, c1), maltsev_apply(s3, a2, b2, c2)
        )
        if left != right:
            violated = True
            break
    assert violated
    assert is_affine(s3) is None


def test_is_affine_point(point):
    assert is_affine(point) is not None


def test_square_pullback_identity(z4):
    from maltcat.algebra import identity

    assert check_square_pullback(identity(z4), identity(z4), identity(z4))


def test_square_pullback_abelian_instance(z4, z2):
    theta = congruence_from_blocks(z4, [[0, 2], [1, 3]])
    q = quotient(z4, theta).projection
    prod = product(z4, z2)
    mono = Homomorphism(z4, prod.algebra, tuple(2 * x for x in range(4)))
    splitting = prod.p1
    assert check_square_pullback(q, mono, splitting)


def test_square_pullback_nonabelian_logged(s3):
    """On the non-affine symmetric group the squares may fail; we record
    the outcomes without asserting a fixed pattern."""
    outcomes = []
    surjections = [quotient(s3, theta).projection for theta in all_congruences(s3)]
    monos = [h for h in hom_set(s3, s3) if h.is_injective()]
    for mono in monos:
        retractions = [f for f in hom_set(s3, s3) if (f @ mono).is_identity()]
        for f in retractions:
            for q in surjections:
                outcomes.append(check_square_pullback(q, mono, f))
    assert outcomes, "no split-mono instances found on S3"
    assert all(isinstance(o, bool) for o in outcomes)


def test_fibration_check_on_two_groupoid(doubles):
    dg = doubles["dd-Z4"]
    assert unit_discrete_fibration_check(dg, reflect(dg))


def test_fibration_check_worked_example(doubles):
    dg = doubles["vd-pair-Z2"]
    assert unit_discrete_fibration_check(dg, reflect(dg))
    # oracle for one square: the arrow part is recovered as a fibre count,
    # |C10| = |C00| x |F10| / |F00| = 2 * 1 / 1
    r = reflect(dg)
    assert dg.graph.C10.size == dg.graph.C00.size * r.two_groupoid.graph.C10.size


def test_fibration_check_refuses_nonaffine(doubles):
    dg = doubles["dd-S3"]
    with pytest.raises(NotAffineError):
        unit_discrete_fibration_check(dg, reflect(dg))


def test_fibration_check_all_affine_fixtures(doubles):
    for name, dg in doubles.items():
        if any(is_affine(c) is None for c in dg.graph.corners()):
            continue
        assert unit_discrete_fibration_check(dg, reflect(dg)), name


# ---------------------------------------------------------------------------
# the double relation diagram


def test_pedicchio_identity_first_argument(z4):
    d = pedicchio_delta(z4, identity_congruence(z4), full_congruence(z4))
    # quotient by nothing: the kernel pair of c is the diagonal
    assert d.delta.size == d.s_star.size
    assert all(d.pi1(k) == d.pi2(k) for k in range(d.delta.size))
    assert is_double_centralizing(d)


def test_pedicchio_worked_sizes(z4):
    theta = congruence_from_blocks(z4, [[0, 2], [1, 3]])
    d = pedicchio_delta(z4, theta, theta)
    assert d.s_star.size == 8
    assert d.c.cod.size == 4
    assert d.delta.size == 16
    assert is_double_centralizing(d)


def test_pedicchio_full_on_z2(z2):
    full = full_congruence(z2)
    d = pedicchio_delta(z2, full, full)
    # the quotient identifies the two degenerate pairs, leaving the two
    # off-diagonal classes of the square
    assert d.c.cod.size == 2
    assert d.delta.size == d.s_star.size ** 2 // 2


def test_pedicchio_quotient_is_pushout(z4, s3):
    """The relation quotient coincides with the pushout of the base
    quotient along the reflexivity section; independent cross-oracle."""
    from maltcat.algebra import find_isomorphism
    from maltcat.congruence import pushout_along_regular_epi

    for alg in (z4, s3):
        congs = all_congruences(alg)
        for r in congs:
            for s in congs:
                d = pedicchio_delta(alg, r, s)
                po = pushout_along_regular_epi(d.q, d.delta_s)
                assert po.apex.size == d.c.cod.size
                assert find_isomorphism(po.apex, d.c.cod) is not None


def test_pedicchio_delta_is_equivalence_on_r(z4, s3):
    for alg in (z4, s3):
        congs = all_congruences(alg)
        for r in congs:
            for s in congs:
                d = pedicchio_delta(alg, r, s)
                pairs = {
                    (d.p1(k), d.p2(k)) for k in range(d.delta.size)
                }
                # reflexivity through the section
                for k in range(d.r_star.size):
                    assert (d.p1(d.delta_p(k)), d.p2(d.delta_p(k))) == (k, k)
                assert all((b, a) in pairs for a, b in pairs)
                assert all(
                    (a, c) in pairs
                    for a, b in pairs
                    for b2, c in pairs
                    if b2 == b
                )


def test_double_centralizing_with_identity(z4):
    theta = congruence_from_blocks(z4, [[0, 2], [1, 3]])
    assert is_double_centralizing(pedicchio_delta(z4, identity_congruence(z4), theta))
    assert is_double_centralizing(pedicchio_delta(z4, theta, identity_congruence(z4)))


def test_double_centralizing_agrees_on_alternating(s3):
    a3 = congruence_from_blocks(s3, [[0, 3, 4], [1, 2, 5]])
    d = pedicchio_delta(s3, a3, a3)
    assert is_double_centralizing(d)
    assert tc_commutator(s3, a3, a3).is_identity()


def test_cross_check_affine_instances(affine_z4):
    for r in all_congruences(affine_z4):
        for s in all_congruences(affine_z4):
            report = commutator_cross_check(affine_z4, r, s)
            assert report.affine
            assert report.agree
            assert report.tc_trivial


def test_cross_check_s3_full(s3):
    report = commutator_cross_check(s3, full_congruence(s3), full_congruence(s3))
    assert not report.double_centralizing
    assert not report.tc_trivial
    assert report.agree


def test_cross_check_implication_everywhere(z2, z4, klein, s3, affine_z4):
    for alg in (z2, z4, klein, s3, affine_z4, affine_cyclic(2)):
        congs = all_congruences(alg)
        for r in congs:
            for s in congs:
                report = commutator_cross_check(alg, r, s)
                assert report.implication_holds, (alg.name, r.blocks(), s.blocks())
