from __future__ import annotations

import itertools

import pytest

from maltcat.algebra import product, subalgebra_generated
from maltcat.congruence import (
    all_congruences,
    congruence_from_blocks,
    delta_matrix_algebra,
    full_congruence,
    identity_congruence,
    tc_commutator,
)
from maltcat.generators import affine_cyclic, cyclic_group, klein_four, symmetric_group_3


def group_commutator_oracle(alg, r, s, mul="mul", inv="inv", unit_op="id"):
    """Independent oracle: the congruence of the subgroup generated by all
    elementwise commutators of the two normal subgroups."""
    unit = alg.apply(unit_op)
    m_block = [x for x in alg.elements() if r.related(x, unit)]
    n_block = [x for x in alg.elements() if s.related(x, unit)]
    gens = {
        alg.apply(
            mul,
            alg.apply(mul, m, n),
            alg.apply(mul, alg.apply(inv, m), alg.apply(inv, n)),
        )
        for m in m_block
        for n in n_block
    }
    subgroup = {unit}
    frontier = list(gens)
    while frontier:
        x = frontier.pop()
        if x in subgroup:
            continue
        subgroup.add(x)
        frontier.extend(alg.apply(mul, x, y) for y in list(subgroup))
        frontier.extend(alg.apply(mul, y, x) for y in list(subgroup))
        frontier.append(alg.apply(inv, x))
    first = {}
    rep = []
    for x in alg.elements():
        coset = frozenset(alg.apply(mul, x, h) for h in subgroup)
        rep.append(first.setdefault(coset, x))
    blocks = [
        [i for i, v in enumerate(rep) if v == value] for value in sorted(set(rep))
    ]
    return congruence_from_blocks(alg, blocks)


def test_affine_commutators_are_trivial(affine_z4):
    for r in all_congruences(affine_z4):
        for s in all_congruences(affine_z4):
            assert tc_commutator(affine_z4, r, s).is_identity()


def test_s3_full_commutator_is_alternating(s3):
    full = full_congruence(s3)
    result = tc_commutator(s3, full, full)
    oracle = group_commutator_oracle(s3, full, full)
    assert result == oracle
    assert result.blocks() == ((0, 3, 4), (1, 2, 5))


def test_commutator_with_identity_is_trivial(z4, s3):
    for alg in (z4, s3):
        delta = identity_congruence(alg)
        for r in all_congruences(alg):
            assert tc_commutator(alg, r, delta).is_identity()
            assert tc_commutator(alg, delta, r).is_identity()


def test_commutator_group_oracle_all_pairs(z2, z4, klein, s3):
    cases = [
        (z2, "add", "neg", "zero"),
        (z4, "add", "neg", "zero"),
        (klein, "add", "neg", "zero"),
        (s3, "mul", "inv", "id"),
    ]
    for alg, mul, inv, unit in cases:
        for r in all_congruences(alg):
            for s in all_congruences(alg):
                assert tc_commutator(alg, r, s) == group_commutator_oracle(
                    alg, r, s, mul, inv, unit
                )


def test_commutator_monotone_and_below_meet(s3):
    congs = all_congruences(s3)
    for r in congs:
        for s in congs:
            value = tc_commutator(s3, r, s)
            assert r.meet(s).contains(value)
            assert value == tc_commutator(s3, s, r)
            for bigger in congs:
                if bigger.contains(r):
                    assert tc_commutator(s3, bigger, s).contains(value)


# ---------------------------------------------------------------------------
# the generated quadruple subalgebra


def test_delta_matrix_identity_pair_is_diagonal(z4):
    delta = identity_congruence(z4)
    codes = delta_matrix_algebra(z4, delta, delta)
    n = z4.size
    assert codes == frozenset(((a * n + a) * n + a) * n + a for a in range(n))


def test_delta_matrix_z4_matches_power_oracle(z4):
    """Cross-check the tuple-space closure against an explicit fourth
    power; the closure has 16 of the 256 quadruples."""
    theta = congruence_from_blocks(z4, [[0, 2], [1, 3]])
    codes = delta_matrix_algebra(z4, theta, theta)
    square = product(z4, z4).algebra
    fourth = product(square, square).algebra
    n = z4.size
    gens = set()
    for a in range(n):
        for b in range(n):
            if theta.related(a, b):
                gens.add(((a * n + b) * n + a) * n + b)
                gens.add(((a * n + a) * n + b) * n + b)
    oracle = subalgebra_generated(fourth, gens)
    assert codes == frozenset(oracle)
    assert len(codes) == 16


def test_delta_matrix_full_by_identity(z2):
    full = full_congruence(z2)
    delta = identity_congruence(z2)
    codes = delta_matrix_algebra(z2, full, delta)
    n = z2.size
    expected = frozenset(
        ((a * n + b) * n + a) * n + b for a in range(n) for b in range(n)
    )
    assert codes == expected
    assert len(codes) == 4
