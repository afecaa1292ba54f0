"""JSON file formats and the named-object workspace.

One JSON object per file.  The kind is detected from the keys:
``size`` marks an algebra, ``corners`` a double graph, ``blocks`` a
congruence, ``C1`` a reflexive graph, and ``dom``/``map`` a homomorphism.
Graphs and congruences refer to algebras by name, so algebra files must be
loaded alongside them.  Serialization is canonical (two-space indent,
fixed key order, trailing newline): parsing and re-serializing a generated
fixture reproduces it byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    Signature,
    ValidationError,
    parse_term,
)
from .congruence import Congruence, congruence_from_blocks
from .internal import DoubleReflexiveGraph, ReflexiveGraph


class ParseError(ValueError):
    """Malformed file contents or an unresolvable name."""


DOUBLE_MAP_KEYS = (
    "dh1", "ch1", "eh1",
    "dh0", "ch0", "eh0",
    "dv1", "cv1", "ev1",
    "dv0", "cv0", "ev0",
)


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _nest_table(flat: tuple[int, ...], size: int, arity: int):
    if arity == 0:
        return int(flat[0])
    return np.asarray(flat, dtype=np.int64).reshape((size,) * arity).tolist()


def _flatten_table(nested, size: int, arity: int, opname: str) -> tuple[int, ...]:
    if arity == 0:
        if not isinstance(nested, int):
            raise ParseError(f"table of {opname!r} must be a single integer")
        return (nested,)
    arr = np.asarray(nested)
    if arr.shape != (size,) * arity or arr.dtype.kind not in "iu":
        raise ParseError(f"table of {opname!r} must be nested integer lists of depth {arity}")
    return tuple(int(x) for x in arr.ravel())


def algebra_to_dict(alg: FiniteAlgebra) -> dict:
    return {
        "name": alg.name,
        "size": alg.size,
        "signature": [{"op": name, "arity": arity} for name, arity in alg.signature.operations],
        "tables": {
            name: _nest_table(table, alg.size, arity)
            for (name, arity), table in zip(alg.signature.operations, alg.tables)
        },
        "maltsev_term": str(alg.maltsev_term),
    }


def algebra_from_dict(data: dict) -> FiniteAlgebra:
    try:
        name = data["name"]
        size = data["size"]
        sig = Signature(tuple((entry["op"], entry["arity"]) for entry in data["signature"]))
        tables = tuple(
            _flatten_table(data["tables"][opname], size, arity, opname)
            for opname, arity in sig.operations
        )
        term = parse_term(data["maltsev_term"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed algebra object: {exc}") from exc
    return FiniteAlgebra(size, sig, tables, term, name=name)


def hom_to_dict(h: Homomorphism, name: str = "") -> dict:
    out = {"dom": h.dom.name, "cod": h.cod.name, "map": list(h.map)}
    if name:
        out = {"name": name, **out}
    return out


def congruence_to_dict(c: Congruence, name: str = "") -> dict:
    out = {"algebra": c.algebra.name, "blocks": [list(b) for b in c.blocks()]}
    if name:
        out = {"name": name, **out}
    return out


def graph_to_dict(g: ReflexiveGraph, name: str = "") -> dict:
    out = {
        "C1": g.C1.name,
        "C0": g.C0.name,
        "d": list(g.d.map),
        "c": list(g.c.map),
        "e": list(g.e.map),
    }
    if name:
        out = {"name": name, **out}
    return out


def double_graph_to_dict(g: DoubleReflexiveGraph, name: str = "") -> dict:
    out = {
        "corners": {
            "C11": g.C11.name,
            "C10": g.C10.name,
            "C01": g.C01.name,
            "C00": g.C00.name,
        },
        "maps": {key: list(getattr(g, key).map) for key in DOUBLE_MAP_KEYS},
    }
    if name:
        out = {"name": name, **out}
    return out


def detect_kind(data: dict) -> str:
    if "size" in data:
        return "algebra"
    if "corners" in data:
        return "double_graph"
    if "blocks" in data:
        return "congruence"
    if "C1" in data:
        return "graph"
    if "dom" in data and "map" in data:
        return "homomorphism"
    raise ParseError("cannot detect the object kind from its keys")


@dataclass
class Workspace:
    """A deterministic name -> object registry populated from files."""

    algebras: dict[str, FiniteAlgebra] = field(default_factory=dict)
    homs: dict[str, Homomorphism] = field(default_factory=dict)
    congruences: dict[str, Congruence] = field(default_factory=dict)
    graphs: dict[str, ReflexiveGraph] = field(default_factory=dict)
    double_graphs: dict[str, DoubleReflexiveGraph] = field(default_factory=dict)

    def _register(self, table: dict, name: str, value) -> None:
        if not name:
            raise ParseError("objects must carry a non-empty name")
        if name in self.all_names():
            raise ParseError(f"duplicate name {name!r}")
        table[name] = value

    def all_names(self) -> set[str]:
        return (
            set(self.algebras)
            | set(self.homs)
            | set(self.congruences)
            | set(self.graphs)
            | set(self.double_graphs)
        )

    def algebra(self, name: str) -> FiniteAlgebra:
        try:
            return self.algebras[name]
        except KeyError:
            raise ParseError(f"unknown algebra {name!r}") from None

    def _hom_from_maps(self, dom: str, cod: str, mapping) -> Homomorphism:
        return Homomorphism(self.algebra(dom), self.algebra(cod), tuple(mapping))

    def load_files(self, paths: list[str | Path]) -> None:
        """Load a batch of files; algebras first so references resolve."""
        loaded = []
        for path in paths:
            p = Path(path)
            try:
                data = json.loads(p.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ParseError(f"{p}: {exc}") from exc
            if not isinstance(data, dict):
                raise ParseError(f"{p}: top-level JSON object required")
            loaded.append((p, data, detect_kind(data)))
        order = {"algebra": 0, "homomorphism": 1, "congruence": 1, "graph": 1, "double_graph": 1}
        loaded.sort(key=lambda item: order[item[2]])
        for p, data, kind in loaded:
            self.add_object(data, kind, fallback_name=p.stem)

    def add_object(self, data: dict, kind: str | None = None, fallback_name: str = "") -> str:
        kind = kind or detect_kind(data)
        name = data.get("name") or fallback_name
        try:
            if kind == "algebra":
                alg = algebra_from_dict(data)
                self._register(self.algebras, alg.name or name, alg.renamed(alg.name or name))
                return alg.name or name
            if kind == "homomorphism":
                hom = self._hom_from_maps(data["dom"], data["cod"], data["map"])
                self._register(self.homs, name, hom)
                return name
            if kind == "congruence":
                cong = congruence_from_blocks(
                    self.algebra(data["algebra"]),
                    [tuple(b) for b in data["blocks"]],
                )
                self._register(self.congruences, name, cong)
                return name
            if kind == "graph":
                c1, c0 = self.algebra(data["C1"]), self.algebra(data["C0"])
                graph = ReflexiveGraph(
                    c1,
                    c0,
                    Homomorphism(c1, c0, tuple(data["d"])),
                    Homomorphism(c1, c0, tuple(data["c"])),
                    Homomorphism(c0, c1, tuple(data["e"])),
                )
                self._register(self.graphs, name, graph)
                return name
            if kind == "double_graph":
                corners = {
                    key: self.algebra(data["corners"][key])
                    for key in ("C11", "C10", "C01", "C00")
                }
                endpoints = {
                    "dh1": ("C11", "C10"), "ch1": ("C11", "C10"), "eh1": ("C10", "C11"),
                    "dh0": ("C01", "C00"), "ch0": ("C01", "C00"), "eh0": ("C00", "C01"),
                    "dv1": ("C11", "C01"), "cv1": ("C11", "C01"), "ev1": ("C01", "C11"),
                    "dv0": ("C10", "C00"), "cv0": ("C10", "C00"), "ev0": ("C00", "C10"),
                }
                maps = {}
                for key in DOUBLE_MAP_KEYS:
                    src, tgt = endpoints[key]
                    maps[key] = Homomorphism(corners[src], corners[tgt], tuple(data["maps"][key]))
                graph = DoubleReflexiveGraph(
                    C11=corners["C11"], C10=corners["C10"],
                    C01=corners["C01"], C00=corners["C00"],
                    **maps,
                )
                self._register(self.double_graphs, name, graph)
                return name
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed {kind} object: {exc}") from exc
        raise ParseError(f"unknown object kind {kind!r}")

    def resolve(self, name: str):
        for table in (self.double_graphs, self.graphs, self.algebras, self.congruences, self.homs):
            if name in table:
                return table[name]
        raise ParseError(f"name {name!r} does not resolve to any loaded object")
