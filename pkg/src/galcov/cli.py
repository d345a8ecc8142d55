"""End-to-end analysis pipeline and command-line interface.

``analyze`` drives the full computation for one degeneration: validate,
classify, count singularities, Chern numbers and signature, generate the
group presentation, enumerate its order, split off the symmetric-group
image, and identify the kernel (= the fundamental group of the Galois
cover).  Optionally the independent Coxeter-quotient route runs as well
and the two verdicts are compared.

Exit codes: 0 definite verdict, 1 undecided (enumeration overflow or an
unsupported route), 2 input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .complexes import (
    ComplexError,
    DegenerationComplex,
    Inner3,
    Inner4,
    classify_vertex,
    parse_complex,
    validate,
)
from .coxeter import coxeter_route
from .datasets import BUILTIN_SOURCES, builtin_names, coxeter_plan_for, load_builtin
from .enumeration import EnumerationOverflow, coset_enumeration, group_order
from .invariants import chern_signature, singularity_counts
from .kernel import (
    StructureVerdict,
    abelianization,
    identify_structure,
    kernel_coset_table,
    reidemeister_schreier,
)
from .permutations import (
    permutation_group_order,
    plane_transposition_map,
    verify_homomorphism,
)
from .presentation import (
    PresentationError,
    build_tilde_presentation,
    format_relation,
    projective_relator,
    simplify_presentation,
)

SCHEMA_VERSION = 1
DEFAULT_MAX_COSETS = 1_000_000
_SNF_GENERATOR_LIMIT = 64


class AnalysisError(Exception):
    """Pipeline failure with the stage where it happened."""

    def __init__(self, stage, message, exit_code=2):
        self.stage = stage
        self.exit_code = exit_code
        super().__init__(f"[{stage}] {message}")


@dataclass
class AnalysisReport:
    source: str
    name: str
    complex_summary: dict
    counts: dict
    chern: dict
    routes_requested: str
    tilde_order: int | None = None
    symmetric_degree: int | None = None
    symmetric_image_order: int | None = None
    kernel_order: int | None = None
    kernel_cross_check: dict | None = None
    pi1: dict | None = None
    enumeration_route: dict | None = None
    coxeter_route: dict | None = None
    route_agreement: bool | None = None
    undecided: bool = False
    presentation_dump: list[str] | None = None
    warnings: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_dict(self):
        data = {
            "schema": SCHEMA_VERSION,
            "source": self.source,
            "name": self.name,
            "complex": self.complex_summary,
            "counts": self.counts,
            "chern": self.chern,
            "routes_requested": self.routes_requested,
            "tilde_order": self.tilde_order,
            "symmetric_degree": self.symmetric_degree,
            "symmetric_image_order": self.symmetric_image_order,
            "kernel_order": self.kernel_order,
            "kernel_cross_check": self.kernel_cross_check,
            "pi1": self.pi1,
            "routes": {
                "enumeration": self.enumeration_route,
                "coxeter": self.coxeter_route,
            },
            "route_agreement": self.route_agreement,
            "undecided": self.undecided,
            "warnings": self.warnings,
            "timings": self.timings,
        }
        if self.presentation_dump is not None:
            data["presentation"] = self.presentation_dump
        return data


def _json_value(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def _verdict_dict(v: StructureVerdict) -> dict:
    out = {"kind": v.kind}
    if v.kind == "ElementaryAbelian2":
        out["rank"] = v.rank
    if v.kind == "AbelianInvariantFactors":
        out["factors"] = list(v.factors)
    if v.kind == "Undetermined":
        out["order"] = v.order
        if v.mod2_corank is not None:
            out["mod2_corank"] = v.mod2_corank
        if v.factors is not None:
            out["factors"] = list(v.factors)
        if v.note:
            out["note"] = v.note
    return out


def _verdicts_equal(a: StructureVerdict, b: StructureVerdict) -> bool:
    if a.kind != b.kind:
        return False
    if a.kind == "ElementaryAbelian2":
        return a.rank == b.rank
    if a.kind == "AbelianInvariantFactors":
        return tuple(a.factors) == tuple(b.factors)
    return a.kind == "Trivial" and b.kind == "Trivial"


def load_source(source: str) -> tuple[str, DegenerationComplex]:
    """Resolve a builtin name or a file path into a complex."""
    if source in BUILTIN_SOURCES:
        return f"builtin:{source}", load_builtin(source)
    path = Path(source)
    if not path.exists():
        raise AnalysisError(
            "parse",
            f"{source!r} is neither a builtin dataset ({', '.join(builtin_names())}) "
            "nor an existing file",
        )
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AnalysisError("parse", f"cannot read {source}: {exc}") from exc
    return str(path), parse_complex(text)


def analyze(
    source: str,
    route: str = "enumerate",
    max_cosets: int = DEFAULT_MAX_COSETS,
    emit_presentation: bool = False,
) -> AnalysisReport:
    """Run the full pipeline on a builtin name or degeneration file."""
    if route not in ("enumerate", "coxeter", "both"):
        raise AnalysisError("options", f"unknown route {route!r}")
    timings = {}

    def timed(stage, fn, *args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        timings[stage] = round(time.perf_counter() - t0, 6)
        return out

    try:
        origin, complex_ = timed("parse", load_source, source)
    except ComplexError as exc:
        raise AnalysisError("parse", str(exc)) from exc

    report_check = timed("validate", validate, complex_)
    if not report_check.valid:
        raise AnalysisError(
            "validate", "; ".join(report_check.violations)
        )

    warnings: list[str] = list(report_check.notes)

    try:
        classes = timed(
            "classify", lambda: {v.id: classify_vertex(complex_, v) for v in complex_.vertices}
        )
    except ComplexError as exc:
        raise AnalysisError("classify", str(exc)) from exc
    inner3 = sum(1 for c in classes.values() if isinstance(c, Inner3))
    inner4 = sum(1 for c in classes.values() if isinstance(c, Inner4))

    counts = timed("counts", singularity_counts, complex_)
    chern = timed("chern", chern_signature, counts)
    warnings.extend(chern.warnings)

    try:
        pres = timed("presentation", build_tilde_presentation, complex_)
        pres_noproj = build_tilde_presentation(complex_, include_projective=False)
        proj = projective_relator(complex_)
    except (PresentationError, ComplexError) as exc:
        raise AnalysisError("presentation", str(exc)) from exc

    report = AnalysisReport(
        source=origin,
        name=complex_.name,
        complex_summary={
            "planes": complex_.plane_count,
            "edges": complex_.edge_count,
            "vertices": len(complex_.vertices),
            "inner3": inner3,
            "inner4": inner4,
            "valid": True,
        },
        counts={
            "n": counts.n,
            "m": counts.m,
            "mu": counts.mu,
            "d": counts.d,
            "rho": counts.rho,
        },
        chern={
            "c1sq": _json_value(chern.c1sq),
            "c2": _json_value(chern.c2),
            "chi": _json_value(chern.chi),
        },
        routes_requested=route,
        warnings=warnings,
        timings=timings,
    )
    if emit_presentation:
        report.presentation_dump = [
            format_relation(w, pres.names) for w in pres.relators
        ]

    assignment = plane_transposition_map(complex_)
    report.symmetric_degree = assignment.degree
    report.symmetric_image_order = timed(
        "image_order", permutation_group_order, assignment.images
    )

    table = None
    enum_verdict = None
    if route in ("enumerate", "both"):
        try:
            table = timed("enumerate", coset_enumeration, pres, (), max_cosets)
        except EnumerationOverflow as exc:
            report.undecided = True
            report.warnings.append(
                f"undecided at bound: enumeration overflow at {exc.max_cosets} cosets"
            )
            report.pi1 = {
                "kind": "Undetermined",
                "note": f"undecided at bound {exc.max_cosets}",
            }
        if table is not None:
            report.tilde_order = group_order(table)
            enum_verdict = _enumeration_route(
                report, complex_, pres, assignment, table, max_cosets, timed
            )

    cox_verdict = None
    if route in ("coxeter", "both"):
        cox_verdict = _coxeter_route(
            report, pres_noproj, pres, proj, complex_, table, max_cosets, timed
        )

    if route == "both" and enum_verdict is not None:
        if report.coxeter_route and report.coxeter_route.get("supported"):
            report.route_agreement = (
                report.kernel_order == report.coxeter_route["order"]
                and cox_verdict is not None
                and _verdicts_equal(enum_verdict, cox_verdict)
            )

    final = enum_verdict if enum_verdict is not None else cox_verdict
    if final is not None:
        report.pi1 = _verdict_dict(final)
    if report.pi1 is None:
        report.undecided = True
        report.pi1 = {"kind": "Undetermined", "note": "no route produced a verdict"}
    if report.pi1.get("kind") == "Undetermined":
        report.undecided = True
    return report


def _enumeration_route(report, complex_, pres, assignment, table, max_cosets, timed):
    """Kernel analysis along the enumeration route; returns the verdict."""
    hom = verify_homomorphism(pres, assignment)
    if not hom.holds:
        raise AnalysisError(
            "kernel", f"plane transpositions do not satisfy relators {hom.failures}"
        )
    image_order = report.symmetric_image_order
    nfact = 1
    for k in range(2, assignment.degree + 1):
        nfact *= k
    if image_order != nfact:
        raise AnalysisError(
            "kernel",
            f"transposition image has order {image_order}, not the full "
            f"symmetric group of order {nfact}",
        )
    tilde = report.tilde_order
    if tilde % image_order != 0:
        raise AnalysisError(
            "kernel", f"group order {tilde} not divisible by image order {image_order}"
        )
    kernel_order = tilde // image_order
    report.kernel_order = kernel_order

    ktable = timed("kernel_table", kernel_coset_table, pres, assignment)
    sub = timed("reidemeister_schreier", reidemeister_schreier, pres, ktable)
    simplified = timed("simplify", simplify_presentation, sub)

    rs_order = None
    try:
        rs_table = timed("kernel_enumerate", coset_enumeration, simplified, (), max_cosets)
        rs_order = group_order(rs_table)
    except EnumerationOverflow as exc:
        report.warnings.append(
            f"kernel presentation enumeration undecided at bound {exc.max_cosets}"
        )
    report.kernel_cross_check = {
        "from_index": kernel_order,
        "from_subgroup_presentation": rs_order,
        "agree": (rs_order == kernel_order) if rs_order is not None else None,
    }

    corank = timed("mod2", abelianization, simplified, "mod2")
    factors = None
    if simplified.generator_count <= _SNF_GENERATOR_LIMIT:
        factors = timed("snf", abelianization, simplified, "integers")
    verdict = identify_structure(
        kernel_order, mod2_corank=corank, invariant_factors=factors
    )
    report.enumeration_route = {
        "tilde_order": tilde,
        "kernel_order": kernel_order,
        "kernel_order_from_presentation": rs_order,
        "subgroup_generators": sub.generator_count,
        "simplified_generators": simplified.generator_count,
        "mod2_corank": corank,
        "invariant_factors": list(factors) if factors is not None else None,
        "verdict": _verdict_dict(verdict),
        "pi1": verdict.describe(),
    }
    return verdict


def _coxeter_route(report, pres_noproj, pres, proj, complex_, table, max_cosets, timed):
    """Coxeter-quotient route; returns its verdict or None."""
    plan = None
    if report.source.startswith("builtin:"):
        plan = coxeter_plan_for(report.source.split(":", 1)[1])
    route = timed(
        "coxeter",
        coxeter_route,
        pres_noproj,
        proj,
        plan,
        table if table is not None else _full_table_for_route(pres, max_cosets),
    )
    if not route.supported:
        report.coxeter_route = {"supported": False, "reason": route.reason}
        return None
    verdict = route.verdict()
    report.coxeter_route = {
        "supported": True,
        "generators": list(route.reduced.names),
        "graph": [
            {"generator": name, "vertices": list(pair)} for name, pair in route.graph.edges
        ],
        "non_tree_edge": next(
            name for name, _ in route.graph.edges if name not in route.graph.tree
        ),
        "projective_vector_u": list(route.proj_u_coords),
        "invariants": list(route.quotient.invariants),
        "order": route.quotient.order,
        "verdict": _verdict_dict(verdict),
        "pi1": route.quotient.describe(),
    }
    if report.kernel_order is None and route.quotient.order is not None:
        report.kernel_order = route.quotient.order
        if report.tilde_order is None:
            report.tilde_order = route.quotient.order * report.symmetric_image_order
    return verdict


def _full_table_for_route(pres, max_cosets):
    try:
        return coset_enumeration(pres, (), max_cosets)
    except EnumerationOverflow:
        return None


# ---------------------------------------------------------------------------
# serialization


def emit_report(report: AnalysisReport, fmt: str = "text") -> bytes:
    """Deterministic serialization of a report."""
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    c = report.complex_summary
    lines.append(
        f"Complex {report.name} ({report.source}): {c['planes']} planes, "
        f"{c['edges']} edges, {c['vertices']} vertices "
        f"({c['inner3']} inner 3-points, {c['inner4']} inner 4-points)"
    )
    k = report.counts
    lines.append(
        f"Counts: n={k['n']} m={k['m']} mu={k['mu']} d={k['d']} rho={k['rho']}"
    )
    ch = report.chern
    lines.append(f"Chern: c1^2={ch['c1sq']} c2={ch['c2']} signature chi={ch['chi']}")
    if report.tilde_order is not None:
        lines.append(f"Group order |G~| = {report.tilde_order}")
    if report.symmetric_image_order is not None:
        lines.append(
            f"Symmetric image: S{report.symmetric_degree} "
            f"(order {report.symmetric_image_order})"
        )
    if report.kernel_order is not None:
        lines.append(f"Kernel order = {report.kernel_order}")
    pi1 = report.pi1 or {"kind": "Undetermined"}
    desc = pi1.get("kind")
    if desc == "ElementaryAbelian2":
        desc = f"Z2^{pi1['rank']}"
    elif desc == "AbelianInvariantFactors":
        desc = " x ".join(f"Z{d}" if d else "Z" for d in pi1["factors"])
    lines.append(f"pi1(X_Gal) verdict: {desc}")
    if report.enumeration_route:
        er = report.enumeration_route
        lines.append(
            f"  enumeration route: kernel {er['kernel_order']}"
            f" (cross-check {er['kernel_order_from_presentation']}),"
            f" mod-2 co-rank {er['mod2_corank']}"
        )
    if report.coxeter_route:
        cr = report.coxeter_route
        if cr.get("supported"):
            lines.append(
                f"  coxeter route: invariants {tuple(cr['invariants'])}"
                f" -> {cr['pi1']} (order {cr['order']})"
            )
        else:
            lines.append(f"  coxeter route: unsupported ({cr['reason']})")
    if report.route_agreement is not None:
        lines.append(f"Routes agree: {'yes' if report.route_agreement else 'NO'}")
    if report.undecided:
        lines.append("RESULT UNDECIDED (see warnings)")
    if report.presentation_dump is not None:
        lines.append("Presentation relators:")
        lines.extend(f"  {line}" for line in report.presentation_dump)
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# command line


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="galcov",
        description=(
            "Compute the fundamental group and signature of the Galois cover "
            "of a surface degenerating to a union of planes."
        ),
    )
    parser.add_argument("--version", action="version", version=f"galcov {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="run the full pipeline on one degeneration")
    a.add_argument(
        "source",
        nargs="?",
        help=f"degeneration file, or builtin name ({', '.join(builtin_names())})",
    )
    a.add_argument(
        "--dataset",
        choices=builtin_names(),
        help="analyze a builtin dataset (alternative to the positional source)",
    )
    a.add_argument(
        "--route",
        choices=("enumerate", "coxeter", "both"),
        default="enumerate",
        help="which computation route(s) to run (default: enumerate)",
    )
    a.add_argument(
        "--max-cosets",
        type=int,
        default=DEFAULT_MAX_COSETS,
        help=f"coset allocation bound for enumeration (default {DEFAULT_MAX_COSETS})",
    )
    a.add_argument(
        "--format", choices=("text", "json"), default="text", help="report format"
    )
    a.add_argument(
        "--emit-presentation",
        action="store_true",
        help="include the generated relators, in the relation grammar",
    )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command != "analyze":  # pragma: no cover - argparse enforces this
        parser.error("unknown command")
    source = args.dataset or args.source
    if not source:
        parser.error("a source file or --dataset is required")
    try:
        report = analyze(
            source,
            route=args.route,
            max_cosets=args.max_cosets,
            emit_presentation=args.emit_presentation,
        )
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ComplexError as exc:
        print(f"error: [parse] {exc}", file=sys.stderr)
        return 2
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.flush()
    return 1 if report.undecided else 0


if __name__ == "__main__":
    sys.exit(main())
