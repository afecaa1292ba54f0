"""Congruences, quotients, coequalizers, pushouts and the commutator.

A congruence is stored as the array mapping each element to the minimum
element of its block, which makes quotient carriers and serialized output
deterministic.  Congruence generation alternates unary-polynomial
propagation with union-find closure; the commutator is computed by a
fixpoint over a generated subalgebra of quadruples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    ValidationError,
    _flat_index,
    _same,
    hom_set,
)
from .config import guard_size


class UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the smaller element as root so representatives are minima
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def representatives(self) -> tuple[int, ...]:
        return tuple(self.find(x) for x in range(len(self.parent)))


def _is_compatible(alg: FiniteAlgebra, rep: Sequence[int]) -> bool:
    """Does the partition respect every operation table?"""
    classes: dict[int, list[int]] = {}
    for i, r in enumerate(rep):
        classes.setdefault(r, []).append(i)
    for (name, arity), table in zip(alg.signature.operations, alg.tables):
        if arity == 0:
            continue
        for args in itertools.product(range(alg.size), repeat=arity):
            base = rep[table[_flat_index(args, alg.size)]]
            for pos in range(arity):
                for other in classes[rep[args[pos]]]:
                    if other == args[pos]:
                        continue
                    swapped = args[:pos] + (other,) + args[pos + 1 :]
                    if rep[table[_flat_index(swapped, alg.size)]] != base:
                        return False
    return True


@dataclass(frozen=True)
class Congruence:
    """A partition of a carrier, compatible with all operations.

    ``rep[i]`` is the minimum element of the block of i.
    """

    algebra: FiniteAlgebra
    rep: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rep) != self.algebra.size:
            raise ValidationError("partition must cover the carrier")
        for i, r in enumerate(self.rep):
            if not 0 <= r <= i or self.rep[r] != r:
                raise ValidationError("block representatives must be canonical minima")
        if not _is_compatible(self.algebra, self.rep):
            raise ValidationError("partition is not compatible with the operation tables")

    @cached_property
    def _hash(self) -> int:
        return hash((self.algebra, self.rep))

    def __hash__(self) -> int:
        return self._hash

    def related(self, a: int, b: int) -> bool:
        return self.rep[a] == self.rep[b]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        grouped: dict[int, list[int]] = {}
        for i, r in enumerate(self.rep):
            grouped.setdefault(r, []).append(i)
        return tuple(tuple(grouped[r]) for r in sorted(grouped))

    def is_identity(self) -> bool:
        return all(r == i for i, r in enumerate(self.rep))

    def is_full(self) -> bool:
        return set(self.rep) == {0}

    def contains(self, other: "Congruence") -> bool:
        """other <= self as relations."""
        return all(self.rep[i] == self.rep[other.rep[i]] for i in range(len(self.rep)))

    def meet(self, other: "Congruence") -> "Congruence":
        if not _same(self.algebra, other.algebra):
            raise ValidationError("meet requires congruences on one algebra")
        first: dict[tuple[int, int], int] = {}
        rep = []
        for i in range(self.algebra.size):
            key = (self.rep[i], other.rep[i])
            rep.append(first.setdefault(key, i))
        return Congruence(self.algebra, tuple(rep))

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, r) for i, r in enumerate(self.rep) if r != i]


def identity_congruence(alg: FiniteAlgebra) -> Congruence:
    return Congruence(alg, tuple(range(alg.size)))


def full_congruence(alg: FiniteAlgebra) -> Congruence:
    return Congruence(alg, (0,) * alg.size)


def congruence_from_blocks(alg: FiniteAlgebra, blocks: Iterable[Iterable[int]]) -> Congruence:
    rep: list[Optional[int]] = [None] * alg.size
    for block in blocks:
        members = sorted(set(block))
        for x in members:
            if not 0 <= x < alg.size or rep[x] is not None:
                raise ValidationError("blocks must partition the carrier")
            rep[x] = members[0]
    if any(r is None for r in rep):
        raise ValidationError("blocks must cover the carrier")
    return Congruence(alg, tuple(rep))  # type: ignore[arg-type]


def congruence_generated(alg: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Smallest congruence containing the given pairs.

    Alternates union-find closure with unary-polynomial propagation: each
    related pair is substituted into every coordinate of every operation
    with all constant tuples elsewhere, until nothing changes.
    """
    n = alg.size
    uf = UnionFind(n)
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ValidationError(f"pair ({a},{b}) out of range")
        uf.union(a, b)
    ops = [
        (arity, table)
        for (name, arity), table in zip(alg.signature.operations, alg.tables)
        if arity > 0
    ]
    changed = True
    while changed:
        changed = False
        for arity, table in ops:
            for a in range(n):
                root = uf.find(a)
                if root == a:
                    continue
                for pos in range(arity):
                    for rest in itertools.product(range(n), repeat=arity - 1):
                        args_a = rest[:pos] + (a,) + rest[pos:]
                        args_r = rest[:pos] + (root,) + rest[pos:]
                        if uf.union(
                            table[_flat_index(args_a, n)], table[_flat_index(args_r, n)]
                        ):
                            changed = True
    return Congruence(alg, uf.representatives())


def _partition_reps(n: int):
    """All set partitions of range(n) as canonical min-representative arrays."""
    rep = [0] * n

    def rec(i: int):
        if i == n:
            yield tuple(rep)
            return
        seen = sorted(set(rep[:i]))
        for r in seen:
            rep[i] = r
            yield from rec(i + 1)
        rep[i] = i
        yield from rec(i + 1)

    if n == 0:
        return
    yield from rec(1)


@lru_cache(maxsize=None)
def all_congruences(alg: FiniteAlgebra) -> tuple[Congruence, ...]:
    """Every congruence of the algebra, by filtering all set partitions.

    Exhaustive and therefore only sensible at desk scale.
    """
    if alg.size > 10:
        raise ValidationError("congruence enumeration is limited to carriers of size <= 10")
    found = [
        Congruence(alg, rep) for rep in _partition_reps(alg.size) if _is_compatible(alg, rep)
    ]
    return tuple(sorted(found, key=lambda c: c.rep))


def kernel_pair(f: Homomorphism) -> Congruence:
    """The congruence whose blocks are the fibers of f."""
    first: dict[int, int] = {}
    rep = []
    for i, v in enumerate(f.map):
        rep.append(first.setdefault(v, i))
    return Congruence(f.dom, tuple(rep))


# ---------------------------------------------------------------------------
# Quotients, coequalizers, pushouts


@dataclass(frozen=True)
class QuotientResult:
    algebra: FiniteAlgebra
    projection: Homomorphism


def quotient(alg: FiniteAlgebra, theta: Congruence) -> QuotientResult:
    """Quotient algebra on block representatives in increasing order."""
    if not _same(theta.algebra, alg):
        raise ValidationError("congruence does not live on this algebra")
    reps = sorted(set(theta.rep))
    label = {r: k for k, r in enumerate(reps)}
    tables = []
    for (name, arity), table in zip(alg.signature.operations, alg.tables):
        entries = []
        for args in itertools.product(reps, repeat=arity):
            entries.append(label[theta.rep[table[_flat_index(args, alg.size)]]])
        tables.append(tuple(entries))
    q = FiniteAlgebra(len(reps), alg.signature, tuple(tables), alg.maltsev_term)
    projection = Homomorphism(alg, q, tuple(label[theta.rep[i]] for i in range(alg.size)))
    return QuotientResult(q, projection)


@dataclass(frozen=True)
class CoequalizerResult:
    quotient: FiniteAlgebra
    projection: Homomorphism


def coequalizer(f: Homomorphism, g: Homomorphism) -> CoequalizerResult:
    """Universal quotient of the shared codomain identifying f(x) with g(x)."""
    if not _same(f.dom, g.dom) or not _same(f.cod, g.cod):
        raise ValidationError("coequalizer requires a parallel pair")
    theta = congruence_generated(f.cod, [(f(x), g(x)) for x in f.dom.elements()])
    q = quotient(f.cod, theta)
    return CoequalizerResult(q.algebra, q.projection)


def factor_through_surjection(q: Homomorphism, h: Homomorphism) -> Homomorphism:
    """The unique map k with k . q = h, solved on representatives.

    Picks any preimage under the surjection q, applies h, and verifies
    well-definedness over whole blocks; failure means h does not factor.
    """
    if not _same(q.dom, h.dom):
        raise ValidationError("factorization requires a shared domain")
    values: list[Optional[int]] = [None] * q.cod.size
    for b in q.dom.elements():
        slot = q(b)
        if values[slot] is None:
            values[slot] = h(b)
        elif values[slot] != h(b):
            raise ValidationError("map does not factor through the surjection")
    if any(v is None for v in values):
        raise ValidationError("factorization requires a surjection")
    return Homomorphism(q.cod, h.cod, tuple(values))  # type: ignore[arg-type]


@dataclass(frozen=True)
class PushoutResult:
    """Pushout square of a surjection ``epi`` and a morphism ``along``.

    ``from_codomain`` maps the codomain of the surjection into the apex,
    ``from_target`` maps the codomain of ``along``; the square
    from_codomain . epi = from_target . along commutes.
    """

    apex: FiniteAlgebra
    from_codomain: Homomorphism
    from_target: Homomorphism
    epi: Homomorphism
    along: Homomorphism
    retraction: Optional[Homomorphism] = None


def pushout_along_regular_epi(q: Homomorphism, h: Homomorphism) -> PushoutResult:
    """Pushout of the surjection q along h, via the kernel pair of q.

    The apex is the coequalizer of the two composites of h with the
    kernel-pair projections of q.
    """
    if not q.is_surjective():
        raise ValidationError("pushout construction requires a surjective first leg")
    if not _same(q.dom, h.dom):
        raise ValidationError("pushout legs must share their domain")
    ker = kernel_pair(q)
    pair_list = [(a, b) for a in q.dom.elements() for b in q.dom.elements() if ker.related(a, b)]
    theta = congruence_generated(h.cod, [(h(a), h(b)) for a, b in pair_list])
    qres = quotient(h.cod, theta)
    c = qres.projection
    induced = factor_through_surjection(q, c @ h)
    return PushoutResult(qres.algebra, induced, c, q, h)


def split_pushout_retraction(p: PushoutResult, f: Homomorphism) -> Homomorphism:
    """Given a splitting f of the ``along`` leg, the unique retraction of
    the induced ``from_codomain`` leg."""
    if not _same(f.dom, p.along.cod) or not _same(f.cod, p.along.dom):
        raise ValidationError("splitting endpoints do not match the pushout")
    if not (f @ p.along).is_identity():
        raise ValidationError("the given map is not a splitting of the pushout leg")
    retraction = factor_through_surjection(p.from_target, p.epi @ f)
    if not (retraction @ p.from_codomain).is_identity():
        raise ValidationError("retraction equation failed; the pushout is corrupt")
    return retraction


def verify_pushout_universal(p: PushoutResult, targets: Iterable[FiniteAlgebra]) -> bool:
    """Exhaustively check the pushout universal property against cocones
    into the given target algebras.  Expensive; opt-in."""
    for target in targets:
        for u in hom_set(p.epi.cod, target):
            u_q = u @ p.epi
            for v in hom_set(p.along.cod, target):
                if u_q != v @ p.along:
                    continue
                mediating = [
                    w
                    for w in hom_set(p.apex, target)
                    if w @ p.from_codomain == u and w @ p.from_target == v
                ]
                if len(mediating) != 1:
                    return False
    return True


# ---------------------------------------------------------------------------
# Term-condition commutator


_CHUNK = 1 << 21


def _grid_apply(
    tbl: np.ndarray, n: int, powers: np.ndarray, width: int, arg_arrays: list[np.ndarray]
) -> np.ndarray:
    """Apply one operation coordinatewise over the cartesian product of
    tuple-code arrays; returns the unique result codes."""
    sizes = [int(a.size) for a in arg_arrays]
    if 0 in sizes:
        return np.empty(0, dtype=np.int64)
    tail = 1
    for s in sizes[1:]:
        tail *= s
    rows = max(1, _CHUNK // max(1, tail))
    pieces = []
    for start in range(0, sizes[0], rows):
        arrs = [arg_arrays[0][start : start + rows]] + arg_arrays[1:]
        k = len(arrs)
        code = None
        for d in range(width):
            flat = None
            for j, a in enumerate(arrs):
                dig = (a // powers[d]) % n
                shape = [1] * k
                shape[j] = dig.size
                dig = dig.reshape(shape)
                flat = dig if flat is None else flat * n + dig
            res = tbl[flat]
            code = res if code is None else code * n + res
        pieces.append(np.unique(code.ravel()))
    return np.unique(np.concatenate(pieces))


def _tuple_closure(alg: FiniteAlgebra, width: int, generators: Iterable[int]) -> frozenset[int]:
    """Subalgebra closure in the ``width``-fold power, working directly on
    coordinate tuples so the power's tables are never materialized."""
    n = alg.size
    total = n**width
    guard_size(total, "power-algebra carrier")
    powers = np.array([n ** (width - 1 - d) for d in range(width)], dtype=np.int64)
    member = np.zeros(total, dtype=bool)
    seeds = set(int(g) for g in generators)
    diag = int(powers.sum())
    for c in alg.constants():
        seeds.add(c * diag)
    if not seeds:
        raise ValidationError("closure requires at least one generator or constant")
    frontier = np.fromiter(sorted(seeds), dtype=np.int64)
    member[frontier] = True
    ops = [
        (arity, np.asarray(table, dtype=np.int64))
        for (name, arity), table in zip(alg.signature.operations, alg.tables)
        if arity > 0
    ]
    old = np.empty(0, dtype=np.int64)
    while frontier.size:
        current = np.flatnonzero(member).astype(np.int64)
        fresh_parts = []
        for arity, tbl in ops:
            for j in range(arity):
                arg_arrays = [old] * j + [frontier] + [current] * (arity - 1 - j)
                codes = _grid_apply(tbl, n, powers, width, arg_arrays)
                if codes.size:
                    codes = codes[~member[codes]]
                if codes.size:
                    member[codes] = True
                    fresh_parts.append(codes)
        old = current
        frontier = (
            np.unique(np.concatenate(fresh_parts)) if fresh_parts else np.empty(0, dtype=np.int64)
        )
    return frozenset(int(x) for x in np.flatnonzero(member))


@lru_cache(maxsize=None)
def delta_matrix_algebra(alg: FiniteAlgebra, r: Congruence, s: Congruence) -> frozenset[int]:
    """Generated quadruple subalgebra feeding the commutator fixpoint.

    Codes are row-major base-|A| encodings of (x, y, z, w); the generator
    set is {(a,b,a,b) : a r b} united with {(u,u,v,v) : u s v}.
    """
    if not _same(r.algebra, alg) or not _same(s.algebra, alg):
        raise ValidationError("congruences must live on the given algebra")
    n = alg.size
    gens = set()
    for a in range(n):
        for b in range(n):
            if r.related(a, b):
                gens.add(((a * n + b) * n + a) * n + b)
            if s.related(a, b):
                gens.add(((a * n + a) * n + b) * n + b)
    return _tuple_closure(alg, 4, gens)


@lru_cache(maxsize=None)
def tc_commutator(alg: FiniteAlgebra, r: Congruence, s: Congruence) -> Congruence:
    """Term-condition commutator [r,s].

    The smallest congruence delta such that every generated quadruple
    (x,y,z,w) with (x,y) in delta also has (z,w) in delta; computed as a
    fixpoint starting from the identity congruence.
    """
    n = alg.size
    codes = np.fromiter(sorted(delta_matrix_algebra(alg, r, s)), dtype=np.int64)
    x = codes // n**3 % n
    y = codes // n**2 % n
    z = codes // n % n
    w = codes % n
    delta = identity_congruence(alg)
    while True:
        rep = np.fromiter(delta.rep, dtype=np.int64)
        mask = (rep[x] == rep[y]) & (rep[z] != rep[w])
        if not mask.any():
            return delta
        new_pairs = [(int(a), int(b)) for a, b in zip(z[mask], w[mask])]
        delta = congruence_generated(alg, delta.pairs() + new_pairs)
