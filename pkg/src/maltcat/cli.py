"""Command-line surface: check, reflect, coreflect, commutator, generate,
suite.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2
malformed input or unresolvable reference.  Reports are deterministic:
stable field order, UTF-8, LF line endings.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .algebra import FiniteAlgebra, Homomorphism, ValidationError
from .config import SizeLimitError, set_max_size
from .congruence import Congruence, tc_commutator
from .generators import (
    cyclic_group,
    discrete_double,
    groupoid_from_hom,
    horizontally_discrete_double,
    klein_four,
    symmetric_group_3,
    vertically_discrete_double,
)
from .internal import (
    DoubleGroupoid,
    DoubleReflexiveGraph,
    LodayAlgebra,
    ReflexiveGraph,
    check_double_groupoid,
    check_reflexive_graph,
    check_two_groupoid_identities,
    check_variety_presentation,
    groupoid_structure,
    is_two_groupoid,
)
from .io import (
    ParseError,
    Workspace,
    algebra_to_dict,
    canonical_json,
    double_graph_to_dict,
    graph_to_dict,
)
from .reflection import coreflect, reflect
from .search import double_functors
from .suite import run_suite


@dataclass
class RunReport:
    """Structured command outcome; exit status 0 iff every asserted check
    passed (INFO lines never affect the status)."""

    command: str
    checks: list[tuple[str, str, str]] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)

    def add(self, name: str, status: str, detail: str = "") -> None:
        self.checks.append((name, status, detail))

    @property
    def exit_status(self) -> int:
        return 0 if all(status != "FAIL" for _, status, _ in self.checks) else 1

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        for name, status, detail in self.checks:
            lines.append(f"{status} {name}" + (f": {detail}" if detail else ""))
        for path in self.outputs:
            lines.append(f"output: {path}")
        lines.append(f"exit: {self.exit_status}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return canonical_json(
            {
                "command": self.command,
                "checks": [
                    {"name": name, "status": status, "detail": detail}
                    for name, status, detail in self.checks
                ],
                "outputs": self.outputs,
                "exit": self.exit_status,
            }
        )


def _emit(report: RunReport, fmt: str) -> int:
    sys.stdout.write(report.to_json() if fmt == "json" else report.to_text())
    return report.exit_status


def _load_workspace(paths: list[str], report: RunReport) -> Optional[Workspace]:
    """Populate the registry; a mathematical failure becomes a FAIL line,
    so the caller can still print a report."""
    ws = Workspace()
    try:
        ws.load_files(paths)
    except ValidationError as exc:
        report.add("load", "FAIL", str(exc))
        return None
    return ws


def _check_target(ws: Workspace, name: str, report: RunReport) -> None:
    target = ws.resolve(name)
    if isinstance(target, FiniteAlgebra):
        report.add("maltsev-term", "PASS", f"algebra {name} of size {target.size}")
        sig = target.signature
        if "s" in sig and "t" in sig and "u" in sig and "v" in sig:
            presentation = check_variety_presentation(LodayAlgebra(target))
            for item, okay, detail in presentation.items:
                report.add(item, "PASS" if okay else "FAIL", detail)
            if presentation.ok:
                value = check_two_groupoid_identities(LodayAlgebra(target))
                report.add("two-groupoid-identities", "INFO", str(value).lower())
    elif isinstance(target, ReflexiveGraph):
        okay = check_reflexive_graph(target)
        report.add("reflexive-graph", "PASS" if okay else "FAIL")
        structure = groupoid_structure(target)
        report.add("groupoid-structure", "INFO", "present" if structure else "absent")
    elif isinstance(target, DoubleReflexiveGraph):
        dg = check_double_groupoid(target)
        if dg is None:
            report.add("double-groupoid", "FAIL", "rows or columns carry no groupoid structure")
        else:
            report.add("double-groupoid", "PASS")
            report.add("two-groupoid", "INFO", str(is_two_groupoid(dg)).lower())
    elif isinstance(target, Congruence):
        report.add("congruence", "PASS", f"{len(set(target.rep))} blocks")
    elif isinstance(target, Homomorphism):
        report.add("homomorphism", "PASS")
    else:  # pragma: no cover - resolve() is exhaustive
        raise ParseError(f"cannot check object {name!r}")


def _require_double_groupoid(ws: Workspace, name: str, report: RunReport) -> Optional[DoubleGroupoid]:
    graph = ws.double_graphs.get(name)
    if graph is None:
        raise ParseError(f"{name!r} is not a loaded double graph")
    dg = check_double_groupoid(graph)
    if dg is None:
        report.add("double-groupoid", "FAIL", f"{name} carries no double groupoid structure")
        return None
    return dg


def _serialize_result(dg: DoubleGroupoid, stem: str, unit_block: dict, key: str) -> dict:
    g = dg.graph
    corner_names = {
        "C11": f"{stem}-C11",
        "C10": f"{stem}-C10",
        "C01": f"{stem}-C01",
        "C00": f"{stem}-C00",
    }
    renamed = DoubleReflexiveGraph(
        C11=g.C11.renamed(corner_names["C11"]),
        C10=g.C10.renamed(corner_names["C10"]),
        C01=g.C01.renamed(corner_names["C01"]),
        C00=g.C00.renamed(corner_names["C00"]),
        dh1=g.dh1, ch1=g.ch1, eh1=g.eh1,
        dh0=g.dh0, ch0=g.ch0, eh0=g.eh0,
        dv1=g.dv1, cv1=g.cv1, ev1=g.ev1,
        dv0=g.dv0, cv0=g.cv0, ev0=g.ev0,
    )
    return {
        "algebras": [
            algebra_to_dict(getattr(renamed, corner)) for corner in ("C11", "C10", "C01", "C00")
        ],
        "double_graph": double_graph_to_dict(renamed, name=stem),
        key: unit_block,
    }


def _verify_adjunction_targets(dg: DoubleGroupoid, ws: Workspace, report: RunReport, unit_side: bool) -> None:
    """Opt-in exhaustive universal-property verification against every
    2-groupoid double graph loaded in the workspace."""
    targets = []
    for tname, graph in sorted(ws.double_graphs.items()):
        candidate = check_double_groupoid(graph)
        if candidate is not None and is_two_groupoid(candidate):
            targets.append((tname, candidate))
    if not targets:
        report.add("universal-property", "NA", "no 2-groupoid targets in the workspace")
        return
    if unit_side:
        r = reflect(dg)
        for tname, d in targets:
            if d.graph.C11.signature != dg.graph.C11.signature:
                report.add(f"universal-property vs {tname}", "NA", "signature mismatch")
                continue
            upstairs = double_functors(r.two_groupoid, d)
            downstairs = set(double_functors(dg, d))
            composed = {g @ r.unit for g in upstairs}
            okay = len(composed) == len(upstairs) and composed == downstairs
            report.add(f"universal-property vs {tname}", "PASS" if okay else "FAIL",
                       f"{len(upstairs)} factorizations")
    else:
        c = coreflect(dg)
        for tname, x in targets:
            if x.graph.C11.signature != dg.graph.C11.signature:
                report.add(f"universal-property vs {tname}", "NA", "signature mismatch")
                continue
            into_sub = double_functors(x, c.two_groupoid)
            into_c = set(double_functors(x, dg))
            composed = {c.counit @ g for g in into_sub}
            okay = len(composed) == len(into_sub) and composed == into_c
            report.add(f"universal-property vs {tname}", "PASS" if okay else "FAIL",
                       f"{len(into_sub)} factorizations")


def cmd_check(args: argparse.Namespace) -> int:
    report = RunReport(command=f"check {args.target}")
    ws = _load_workspace(args.infile, report)
    if ws is not None:
        _check_target(ws, args.target, report)
    return _emit(report, args.format)


def cmd_reflect(args: argparse.Namespace, coreflection: bool = False) -> int:
    verb = "coreflect" if coreflection else "reflect"
    report = RunReport(command=f"{verb} {args.target}")
    ws = _load_workspace(args.infile, report)
    if ws is None:
        return _emit(report, args.format)
    dg = _require_double_groupoid(ws, args.target, report)
    if dg is None:
        return _emit(report, args.format)
    if coreflection:
        result = coreflect(dg)
        functor = result.counit
        key, stem = "counit", f"{args.target}-core"
        names = ("f11", "f10", "f01", "f00")
        mono = all(c.is_injective() for c in functor.components())
        report.add("counit-injective", "PASS" if mono else "FAIL")
    else:
        result = reflect(dg)
        functor = result.unit
        key, stem = "unit", f"{args.target}-refl"
        names = ("f11", "f10", "f01", "f00")
        epi = all(c.is_surjective() for c in functor.components())
        report.add("unit-surjective", "PASS" if epi else "FAIL")
    out_dg = result.two_groupoid
    report.add("two-groupoid", "PASS" if is_two_groupoid(out_dg) else "FAIL")
    report.add(
        "corner-sizes",
        "INFO",
        " ".join(str(a.size) for a in out_dg.graph.corners()),
    )
    if args.verify_universal:
        _verify_adjunction_targets(dg, ws, report, unit_side=not coreflection)
    if args.out:
        block = {name: list(getattr(functor, name).map) for name in names}
        payload = _serialize_result(out_dg, stem, block, key)
        Path(args.out).write_text(canonical_json(payload), encoding="utf-8")
        report.outputs.append(args.out)
    return _emit(report, args.format)


def cmd_commutator(args: argparse.Namespace) -> int:
    report = RunReport(command=f"commutator {args.algebra} {args.left} {args.right}")
    ws = _load_workspace(args.infile, report)
    if ws is None:
        return _emit(report, args.format)
    alg = ws.algebra(args.algebra)
    for cname in (args.left, args.right):
        if cname not in ws.congruences:
            raise ParseError(f"{cname!r} is not a loaded congruence")
    left, right = ws.congruences[args.left], ws.congruences[args.right]
    if left.algebra != alg or right.algebra != alg:
        raise ParseError("congruences do not live on the named algebra")
    result = tc_commutator(alg, left, right)
    blocks = " | ".join(",".join(str(x) for x in b) for b in result.blocks())
    report.add("commutator-blocks", "INFO", blocks)
    report.add("trivial", "INFO", str(result.is_identity()).lower())
    return _emit(report, args.format)


def _generated_objects(args: argparse.Namespace):
    kind = args.kind
    if kind == "cyclic-group":
        alg = cyclic_group(args.n)
        return {f"{alg.name}.json": algebra_to_dict(alg)}
    if kind == "symmetric-group-3":
        alg = symmetric_group_3()
        return {"S3.json": algebra_to_dict(alg)}
    if kind == "groupoid-from-hom":
        gpd = groupoid_from_hom(args.dom, args.cod, args.mult)
        arrows = gpd.graph.C1.renamed(f"Z{args.cod}xZ{args.dom}")
        objects = gpd.graph.C0
        stem = f"hom-groupoid-{args.dom}-{args.cod}-m{args.mult}"
        relabeled = ReflexiveGraph(arrows, objects,
                                   Homomorphism(arrows, objects, gpd.graph.d.map),
                                   Homomorphism(arrows, objects, gpd.graph.c.map),
                                   Homomorphism(objects, arrows, gpd.graph.e.map))
        return {
            f"{arrows.name}.json": algebra_to_dict(arrows),
            f"{objects.name}.json": algebra_to_dict(objects),
            f"{stem}.json": graph_to_dict(relabeled, name=stem),
        }
    if kind == "discrete-double":
        base = {"cyclic": lambda: cyclic_group(args.n), "klein": klein_four, "s3": symmetric_group_3}[
            args.base
        ]()
        dg = discrete_double(base)
        stem = f"dd-{base.name}"
        return {
            f"{base.name}.json": algebra_to_dict(base),
            f"{stem}.json": double_graph_to_dict(dg.graph, name=stem),
        }
    if kind in ("vertically-discrete-double", "horizontally-discrete-double"):
        gpd = groupoid_from_hom(args.dom, args.cod, args.mult)
        arrows = gpd.graph.C1.renamed(f"Z{args.cod}xZ{args.dom}")
        objects = gpd.graph.C0
        build = (
            vertically_discrete_double
            if kind.startswith("vertically")
            else horizontally_discrete_double
        )
        dg = build(gpd)
        vertical = kind.startswith("vertically")
        prefix = "vd" if vertical else "hd"
        stem = f"{prefix}-hom-{args.dom}-{args.cod}-m{args.mult}"
        g = dg.graph
        # rows are the groupoid when vertically discrete, columns otherwise
        c10_name = objects.name if vertical else arrows.name
        c01_name = arrows.name if vertical else objects.name
        renamed = DoubleReflexiveGraph(
            C11=g.C11.renamed(arrows.name),
            C10=g.C10.renamed(c10_name),
            C01=g.C01.renamed(c01_name),
            C00=g.C00.renamed(objects.name),
            dh1=g.dh1, ch1=g.ch1, eh1=g.eh1,
            dh0=g.dh0, ch0=g.ch0, eh0=g.eh0,
            dv1=g.dv1, cv1=g.cv1, ev1=g.ev1,
            dv0=g.dv0, cv0=g.cv0, ev0=g.ev0,
        )
        return {
            f"{arrows.name}.json": algebra_to_dict(arrows),
            f"{objects.name}.json": algebra_to_dict(objects),
            f"{stem}.json": double_graph_to_dict(renamed, name=stem),
        }
    raise ParseError(f"unsupported generator kind {kind!r}")


def cmd_generate(args: argparse.Namespace) -> int:
    report = RunReport(command=f"generate {args.kind}")
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    for filename, payload in sorted(_generated_objects(args).items()):
        path = outdir / filename
        path.write_text(canonical_json(payload), encoding="utf-8")
        report.outputs.append(str(path))
    report.add("generate", "PASS", f"{len(report.outputs)} files written")
    return _emit(report, args.format)


def cmd_suite(args: argparse.Namespace) -> int:
    report = RunReport(command=f"suite {args.level}")
    for result in run_suite(args.level):
        report.add(result.name, "PASS" if result.passed else "FAIL", result.detail)
    return _emit(report, args.format)


def _add_common(parser: argparse.ArgumentParser, needs_in: bool = True) -> None:
    if needs_in:
        parser.add_argument("--in", dest="infile", action="append", default=[],
                            metavar="FILE", help="input file (repeatable)")
    parser.add_argument("--out", default=None, metavar="FILE", help="output path")
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--max-size", type=int, default=None,
                        help="carrier-size guard (overrides MALTCAT_MAX_SIZE)")
    parser.add_argument("--verify-universal", action="store_true",
                        help="run the exhaustive universal-property enumerations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maltcat",
        description="Finite-algebra engine for double groupoids and 2-groupoids",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_check = sub.add_parser("check", help="validate a named object")
    p_check.add_argument("target")
    _add_common(p_check)
    p_check.set_defaults(fn=cmd_check)

    p_reflect = sub.add_parser("reflect", help="reflect a double groupoid onto a 2-groupoid")
    p_reflect.add_argument("target")
    _add_common(p_reflect)
    p_reflect.set_defaults(fn=lambda a: cmd_reflect(a, coreflection=False))

    p_coreflect = sub.add_parser("coreflect", help="coreflect a double groupoid into a 2-groupoid")
    p_coreflect.add_argument("target")
    _add_common(p_coreflect)
    p_coreflect.set_defaults(fn=lambda a: cmd_reflect(a, coreflection=True))

    p_comm = sub.add_parser("commutator", help="commutator of two congruences")
    p_comm.add_argument("algebra")
    p_comm.add_argument("left")
    p_comm.add_argument("right")
    _add_common(p_comm)
    p_comm.set_defaults(fn=cmd_commutator)

    p_gen = sub.add_parser("generate", help="write fixture files")
    p_gen.add_argument(
        "kind",
        choices=(
            "cyclic-group",
            "symmetric-group-3",
            "groupoid-from-hom",
            "discrete-double",
            "vertically-discrete-double",
            "horizontally-discrete-double",
        ),
    )
    p_gen.add_argument("--n", type=int, default=2, help="cyclic order")
    p_gen.add_argument("--base", choices=("cyclic", "klein", "s3"), default="cyclic")
    p_gen.add_argument("--dom", type=int, default=2, help="cyclic order of the arrow group")
    p_gen.add_argument("--cod", type=int, default=2, help="cyclic order of the object group")
    p_gen.add_argument("--mult", type=int, default=1, help="multiplier defining the map")
    _add_common(p_gen, needs_in=False)
    p_gen.set_defaults(fn=cmd_generate)

    p_suite = sub.add_parser("suite", help="run the acceptance suite")
    p_suite.add_argument("--level", choices=("smoke", "full"), default="smoke")
    _add_common(p_suite, needs_in=False)
    p_suite.set_defaults(fn=cmd_suite)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_size is not None:
        set_max_size(args.max_size)
    try:
        return args.fn(args)
    except (ParseError, SizeLimitError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ValidationError as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
