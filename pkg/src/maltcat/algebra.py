"""Finite algebras of a finitary signature, terms and homomorphisms.

Carriers are the index ranges 0..size-1 and every operation is stored as a
row-major flat table, so all values are immutable, hashable and bit-exact
under serialization.  Each algebra carries a designated ternary term that
must satisfy the two Mal'tsev identities p(x,y,y)=x and p(x,x,y)=y; the
constructor verifies this, so a ``FiniteAlgebra`` that exists is always an
algebra in a Mal'tsev variety.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .config import guard_size


class ValidationError(ValueError):
    """A structural invariant failed; the message names the violated law."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Term:
    """A term tree: leaves are variables, inner nodes signature operations.

    An arity-0 operation applied to nothing, written ``(zero)``, is distinct
    from the variable ``zero``.
    """

    head: str
    args: tuple["Term", ...] = ()
    is_op: bool = False

    def __post_init__(self) -> None:
        if not self.is_op and self.args:
            raise ValidationError(f"variable {self.head!r} cannot have arguments")

    def variables(self) -> frozenset[str]:
        if not self.is_op:
            return frozenset((self.head,))
        out: frozenset[str] = frozenset()
        for a in self.args:
            out |= a.variables()
        return out

    def __str__(self) -> str:
        if not self.is_op:
            return self.head
        if not self.args:
            return f"({self.head})"
        return "(" + " ".join([self.head] + [str(a) for a in self.args]) + ")"


def var(name: str) -> Term:
    return Term(name)


def op(name: str, *args: Term) -> Term:
    return Term(name, tuple(args), is_op=True)


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_term(text: str) -> Term:
    """Parse parenthesized prefix notation, e.g. ``(add x (neg y))``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ValidationError("empty term")
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise ValidationError(f"unbalanced term {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise ValidationError(f"unexpected ')' in {text!r}")
        if tok != "(":
            return var(tok)
        if pos >= len(tokens) or tokens[pos] in "()":
            raise ValidationError(f"missing operation name in {text!r}")
        head = tokens[pos]
        pos += 1
        args = []
        while pos < len(tokens) and tokens[pos] != ")":
            args.append(parse())
        if pos >= len(tokens):
            raise ValidationError(f"unbalanced term {text!r}")
        pos += 1  # consume ')'
        return op(head, *args)

    t = parse()
    if pos != len(tokens):
        raise ValidationError(f"trailing tokens in {text!r}")
    return t


# ---------------------------------------------------------------------------
# Signatures and algebras


@dataclass(frozen=True)
class Signature:
    """An ordered list of (operation name, arity) pairs."""

    operations: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.operations]
        if len(set(names)) != len(names):
            raise ValidationError("operation names must be pairwise distinct")
        for name, arity in self.operations:
            if arity < 0:
                raise ValidationError(f"operation {name!r} has negative arity")

    @cached_property
    def _arities(self) -> dict[str, int]:
        return dict(self.operations)

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.operations)

    def arity(self, name: str) -> int:
        try:
            return self._arities[name]
        except KeyError:
            raise ValidationError(f"unknown operation name {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._arities

    def extend(self, extra: Sequence[tuple[str, int]]) -> "Signature":
        return Signature(self.operations + tuple(extra))

    def without(self, names: Iterable[str]) -> "Signature":
        drop = set(names)
        return Signature(tuple(o for o in self.operations if o[0] not in drop))


def _flat_index(args: Sequence[int], size: int) -> int:
    idx = 0
    for a in args:
        idx = idx * size + a
    return idx


@dataclass(frozen=True)
class FiniteAlgebra:
    """A finite algebra: carrier 0..size-1, flat tables, a Mal'tsev term.

    ``tables[k]`` is the row-major table of ``signature.operations[k]``;
    for arity r it has size**r entries.  ``name`` is registry metadata and
    does not take part in equality.
    """

    size: int
    signature: Signature
    tables: tuple[tuple[int, ...], ...]
    maltsev_term: Term
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValidationError("carrier must be non-empty")
        guard_size(self.size, "algebra carrier")
        if len(self.tables) != len(self.signature.operations):
            raise ValidationError("one table per signature operation required")
        for (opname, arity), table in zip(self.signature.operations, self.tables):
            if len(table) != self.size**arity:
                raise ValidationError(f"table of {opname!r} has wrong length")
            if len(table):
                arr = np.asarray(table, dtype=np.int64)
                if arr.min() < 0 or arr.max() >= self.size:
                    raise ValidationError(f"table of {opname!r} has an entry out of range")
        if not check_maltsev_term(self, self.maltsev_term):
            raise ValidationError(f"term {self.maltsev_term} fails the Mal'tsev identities")

    @cached_property
    def _hash(self) -> int:
        return hash((self.size, self.signature, self.tables, self.maltsev_term))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _op_index(self) -> dict[str, int]:
        return {name: k for k, (name, _) in enumerate(self.signature.operations)}

    @cached_property
    def np_tables(self) -> tuple[np.ndarray, ...]:
        return tuple(np.asarray(t, dtype=np.int64) for t in self.tables)

    def table(self, name: str) -> tuple[int, ...]:
        try:
            return self.tables[self._op_index[name]]
        except KeyError:
            raise ValidationError(f"unknown operation name {name!r}") from None

    def apply(self, name: str, *args: int) -> int:
        table = self.table(name)
        if len(args) != self.signature.arity(name):
            raise ValidationError(f"operation {name!r} applied to {len(args)} arguments")
        return table[_flat_index(args, self.size)]

    def elements(self) -> range:
        return range(self.size)

    def constants(self) -> frozenset[int]:
        return frozenset(
            table[0] for (name, arity), table in zip(self.signature.operations, self.tables) if arity == 0
        )

    def renamed(self, name: str) -> "FiniteAlgebra":
        return FiniteAlgebra(self.size, self.signature, self.tables, self.maltsev_term, name=name)


def eval_term(alg: FiniteAlgebra, t: Term, env: Mapping[str, int]) -> int:
    """Evaluate a term under the algebra's tables and a variable assignment."""
    if not t.is_op:
        try:
            return env[t.head]
        except KeyError:
            raise ValidationError(f"unbound variable {t.head!r}") from None
    args = tuple(eval_term(alg, a, env) for a in t.args)
    return alg.apply(t.head, *args)


def eval_term_array(alg: FiniteAlgebra, t: Term, env: Mapping[str, np.ndarray]) -> np.ndarray:
    """Evaluate a term over parallel arrays of elements in one pass."""
    if not t.is_op:
        try:
            return env[t.head]
        except KeyError:
            raise ValidationError(f"unbound variable {t.head!r}") from None
    table = alg.np_tables[alg._op_index[t.head]]
    arity = alg.signature.arity(t.head)
    if len(t.args) != arity:
        raise ValidationError(f"operation {t.head!r} applied to {len(t.args)} arguments")
    if arity == 0:
        shape = next(iter(env.values())).shape if env else ()
        return np.full(shape, int(table[0]), dtype=np.int64)
    flat = None
    for a in t.args:
        value = eval_term_array(alg, a, env)
        flat = value if flat is None else flat * alg.size + value
    return table[flat]


def check_maltsev_term(alg: FiniteAlgebra, p: Term) -> bool:
    """Check p(x,y,y)=x and p(x,x,y)=y over all element pairs.

    The term must use exactly the variables x, y, z.
    """
    if p.variables() != frozenset({"x", "y", "z"}):
        raise ValidationError("a Mal'tsev term must have exactly the variables x, y, z")
    n = alg.size
    grid = np.arange(n, dtype=np.int64)
    first = np.repeat(grid, n)
    second = np.tile(grid, n)
    left = eval_term_array(alg, p, {"x": first, "y": second, "z": second})
    if not np.array_equal(left, first):
        return False
    right = eval_term_array(alg, p, {"x": first, "y": first, "z": second})
    return bool(np.array_equal(right, second))


def maltsev_apply(alg: FiniteAlgebra, a: int, b: int, c: int) -> int:
    """Apply the designated Mal'tsev term to a triple of elements."""
    return eval_term(alg, alg.maltsev_term, {"x": a, "y": b, "z": c})


# ---------------------------------------------------------------------------
# Homomorphisms


def is_homomorphism(mapping: Sequence[int], dom: FiniteAlgebra, cod: FiniteAlgebra) -> bool:
    """Check that a raw index map commutes with every operation table."""
    if dom.signature != cod.signature:
        raise ValidationError("homomorphisms require a shared signature")
    if len(mapping) != dom.size:
        return False
    arr = np.asarray(mapping, dtype=np.int64)
    if arr.min() < 0 or arr.max() >= cod.size:
        return False
    for k, (name, arity) in enumerate(dom.signature.operations):
        dom_table = dom.np_tables[k]
        cod_table = cod.np_tables[k]
        if arity == 0:
            if arr[dom_table[0]] != cod_table[0]:
                return False
            continue
        positions = np.arange(dom.size**arity, dtype=np.int64)
        flat = None
        for j in range(arity):
            digit = positions // dom.size ** (arity - 1 - j) % dom.size
            mapped = arr[digit]
            flat = mapped if flat is None else flat * cod.size + mapped
        if not np.array_equal(arr[dom_table], cod_table[flat]):
            return False
    return True


def _same(a: FiniteAlgebra, b: FiniteAlgebra) -> bool:
    return a is b or a == b


@dataclass(frozen=True)
class Homomorphism:
    """A total map between carriers commuting with all signature operations."""

    dom: FiniteAlgebra
    cod: FiniteAlgebra
    map: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.map) != self.dom.size:
            raise ValidationError("map length must equal the domain size")
        if not is_homomorphism(self.map, self.dom, self.cod):
            raise ValidationError("map does not commute with the operation tables")

    @cached_property
    def _hash(self) -> int:
        return hash((self.dom, self.cod, self.map))

    def __hash__(self) -> int:
        return self._hash

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __matmul__(self, other: "Homomorphism") -> "Homomorphism":
        """Composition ``self @ other`` = apply ``other`` first."""
        if not _same(other.cod, self.dom):
            raise ValidationError("composition endpoints do not match")
        return Homomorphism(other.dom, self.cod, tuple(self.map[v] for v in other.map))

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.cod.size

    def is_injective(self) -> bool:
        return len(set(self.map)) == self.dom.size

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def is_identity(self) -> bool:
        return _same(self.dom, self.cod) and all(v == i for i, v in enumerate(self.map))

    def inverse(self) -> "Homomorphism":
        if not self.is_bijective():
            raise ValidationError("only bijective homomorphisms can be inverted")
        inv = [0] * self.cod.size
        for i, v in enumerate(self.map):
            inv[v] = i
        return Homomorphism(self.cod, self.dom, tuple(inv))

    def image(self) -> frozenset[int]:
        return frozenset(self.map)


def identity(alg: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(alg, alg, tuple(range(alg.size)))


# ---------------------------------------------------------------------------
# Products, subalgebras, pullbacks, images


@dataclass(frozen=True)
class ProductResult:
    algebra: FiniteAlgebra
    p1: Homomorphism
    p2: Homomorphism


def product(a: FiniteAlgebra, b: FiniteAlgebra) -> ProductResult:
    """Binary product with row-major encoding: index = left*|B| + right."""
    # the guard is consulted on every call, not only on cache misses
    guard_size(a.size * b.size, "product carrier")
    return _product(a, b)


@lru_cache(maxsize=None)
def _product(a: FiniteAlgebra, b: FiniteAlgebra) -> ProductResult:
    if a.signature != b.signature:
        raise ValidationError("product requires a shared signature")
    size = a.size * b.size
    tables = []
    for k, (name, arity) in enumerate(a.signature.operations):
        ta, tb = a.np_tables[k], b.np_tables[k]
        if arity == 0:
            tables.append((int(ta[0]) * b.size + int(tb[0]),))
            continue
        positions = np.arange(size**arity, dtype=np.int64)
        left_flat = None
        right_flat = None
        for j in range(arity):
            digit = positions // size ** (arity - 1 - j) % size
            left_digit = digit // b.size
            right_digit = digit % b.size
            left_flat = left_digit if left_flat is None else left_flat * a.size + left_digit
            right_flat = right_digit if right_flat is None else right_flat * b.size + right_digit
        entries = ta[left_flat] * b.size + tb[right_flat]
        tables.append(tuple(entries.tolist()))
    alg = FiniteAlgebra(size, a.signature, tuple(tables), a.maltsev_term)
    p1 = Homomorphism(alg, a, tuple(x // b.size for x in range(size)))
    p2 = Homomorphism(alg, b, tuple(x % b.size for x in range(size)))
    return ProductResult(alg, p1, p2)


def pairing(f: Homomorphism, g: Homomorphism) -> Homomorphism:
    """The induced map into the product, x -> (f(x), g(x))."""
    if not _same(f.dom, g.dom):
        raise ValidationError("pairing requires a shared domain")
    prod = product(f.cod, g.cod)
    return Homomorphism(f.dom, prod.algebra, tuple(f(x) * g.cod.size + g(x) for x in f.dom.elements()))


def parallel(f: Homomorphism, g: Homomorphism) -> Homomorphism:
    """The product map f x g between the two binary products."""
    dom = product(f.dom, g.dom)
    cod = product(f.cod, g.cod)
    mapping = tuple(
        f(x // g.dom.size) * g.cod.size + g(x % g.dom.size) for x in range(dom.algebra.size)
    )
    return Homomorphism(dom.algebra, cod.algebra, mapping)


def subalgebra_generated(alg: FiniteAlgebra, seed: Iterable[int]) -> frozenset[int]:
    """Smallest subset containing the seed and all constants, closed under
    every operation table."""
    members = set(seed)
    for x in members:
        if not 0 <= x < alg.size:
            raise ValidationError(f"seed element {x} out of range")
    members |= alg.constants()
    frontier = list(members)
    ops = [
        (arity, table)
        for (name, arity), table in zip(alg.signature.operations, alg.tables)
        if arity > 0
    ]
    while frontier:
        x = frontier.pop()
        for arity, table in ops:
            # only tuples that mention x are new at this point
            others = sorted(members)
            for pos in range(arity):
                for rest in itertools.product(others, repeat=arity - 1):
                    args = rest[:pos] + (x,) + rest[pos:]
                    value = table[_flat_index(args, alg.size)]
                    if value not in members:
                        members.add(value)
                        frontier.append(value)
    return frozenset(members)


@dataclass(frozen=True)
class SubalgebraResult:
    algebra: FiniteAlgebra
    inclusion: Homomorphism


def subalgebra(alg: FiniteAlgebra, subset: Iterable[int]) -> SubalgebraResult:
    """Restrict to a subset that must already be closed under all operations.

    The new carrier keeps the ambient order of the chosen elements.
    """
    chosen = sorted(set(subset))
    if not chosen:
        raise ValidationError("subalgebras must be non-empty")
    k = len(chosen)
    chosen_arr = np.asarray(chosen, dtype=np.int64)
    position = np.full(alg.size, -1, dtype=np.int64)
    position[chosen_arr] = np.arange(k, dtype=np.int64)
    tables = []
    for idx, (name, arity) in enumerate(alg.signature.operations):
        table = alg.np_tables[idx]
        if arity == 0:
            if position[table[0]] < 0:
                raise ValidationError(f"subset not closed under {name!r}")
            tables.append((int(position[table[0]]),))
            continue
        positions = np.arange(k**arity, dtype=np.int64)
        flat = None
        for j in range(arity):
            digit = chosen_arr[positions // k ** (arity - 1 - j) % k]
            flat = digit if flat is None else flat * alg.size + digit
        entries = position[table[flat]]
        if entries.min() < 0:
            raise ValidationError(f"subset not closed under {name!r}")
        tables.append(tuple(entries.tolist()))
    sub = FiniteAlgebra(k, alg.signature, tuple(tables), alg.maltsev_term)
    incl = Homomorphism(sub, alg, tuple(chosen))
    return SubalgebraResult(sub, incl)


@dataclass(frozen=True)
class PullbackResult:
    algebra: FiniteAlgebra
    p1: Homomorphism
    p2: Homomorphism


@lru_cache(maxsize=None)
def pullback(f: Homomorphism, g: Homomorphism) -> PullbackResult:
    """The subalgebra {(a,b) : f(a)=g(b)} of dom(f) x dom(g)."""
    if not _same(f.cod, g.cod):
        raise ValidationError("pullback requires a shared codomain")
    prod = product(f.dom, g.dom)
    subset = [
        a * g.dom.size + b
        for a in f.dom.elements()
        for b in g.dom.elements()
        if f(a) == g(b)
    ]
    sub = subalgebra(prod.algebra, subset)
    return PullbackResult(
        sub.algebra,
        prod.p1 @ sub.inclusion,
        prod.p2 @ sub.inclusion,
    )


def image_factorization(f: Homomorphism) -> tuple[Homomorphism, Homomorphism]:
    """Split f as a surjection onto its image subalgebra followed by an
    injection; the composite equals f."""
    img = subalgebra(f.cod, set(f.map))
    position = {v: k for k, v in enumerate(img.inclusion.map)}
    epi = Homomorphism(f.dom, img.algebra, tuple(position[v] for v in f.map))
    return epi, img.inclusion


# ---------------------------------------------------------------------------
# Homomorphism search


def all_homomorphisms(
    dom: FiniteAlgebra,
    cod: FiniteAlgebra,
    partial: Optional[Mapping[int, int]] = None,
    injective: bool = False,
) -> Iterator[Homomorphism]:
    """Enumerate homomorphisms by backtracking with closure propagation.

    ``partial`` pins chosen values; assignments are propagated through all
    operation tables, so the search effectively branches only on generators.
    """
    if dom.signature != cod.signature:
        raise ValidationError("homomorphism search requires a shared signature")
    ops = [
        (arity, table, cod.table(name))
        for (name, arity), table in zip(dom.signature.operations, dom.tables)
    ]

    def propagate(assign: list[Optional[int]], used: set[int]) -> bool:
        changed = True
        while changed:
            changed = False
            for arity, table, cod_table in ops:
                for args in itertools.product(range(dom.size), repeat=arity):
                    vals = [assign[a] for a in args]
                    if any(v is None for v in vals):
                        continue
                    src = table[_flat_index(args, dom.size)]
                    tgt = cod_table[_flat_index(vals, cod.size)]  # type: ignore[arg-type]
                    if assign[src] is None:
                        if injective and tgt in used:
                            return False
                        assign[src] = tgt
                        used.add(tgt)
                        changed = True
                    elif assign[src] != tgt:
                        return False
        return True

    def search(assign: list[Optional[int]], used: set[int]) -> Iterator[Homomorphism]:
        try:
            pivot = assign.index(None)
        except ValueError:
            yield Homomorphism(dom, cod, tuple(assign))  # type: ignore[arg-type]
            return
        for value in cod.elements():
            if injective and value in used:
                continue
            trial = assign.copy()
            trial_used = used.copy()
            trial[pivot] = value
            trial_used.add(value)
            if propagate(trial, trial_used):
                yield from search(trial, trial_used)

    start: list[Optional[int]] = [None] * dom.size
    start_used: set[int] = set()
    for k, v in (partial or {}).items():
        if not 0 <= v < cod.size:
            raise ValidationError("partial assignment out of range")
        start[k] = v
        start_used.add(v)
    if injective and len(start_used) != len(partial or {}):
        return
    if propagate(start, start_used):
        yield from search(start, start_used)


@lru_cache(maxsize=None)
def hom_set(dom: FiniteAlgebra, cod: FiniteAlgebra) -> tuple[Homomorphism, ...]:
    """All homomorphisms dom -> cod, in a deterministic order."""
    return tuple(sorted(all_homomorphisms(dom, cod), key=lambda h: h.map))


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> Optional[Homomorphism]:
    """A table-respecting bijection found by backtracking, or None."""
    if a.size != b.size or a.signature != b.signature:
        return None
    for h in all_homomorphisms(a, b, injective=True):
        return h
    return None
