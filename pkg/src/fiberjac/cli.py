"""Command-line interface.

Every subcommand prints machine-readable JSON (compact, deterministic)
by default; ``--format table`` switches to a human-readable rendering.
Exit codes: 0 on success, 2 on input validation problems, 3 when a scan
or report ran into unsupported or non-minimal fibers.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .fibers import (
    FiberError,
    Polarization,
    SmoothPoint,
    boundary_points,
    build_fiber,
    load_fiber_description,
    parse_fiber_label,
    proper_connected_subcurves,
)
from .jacobian import (
    abel_jacobi_family,
    jacobian_type,
    load_fibration_description,
    relative_report,
)
from .stability import (
    StabilityError,
    SubsheafOnSubcurve,
    classify_by_rule,
    enumerate_stratification,
    graded_object,
    hilbert_data,
    iter_degree_vectors,
    oracle_classify,
)
from .weierstrass import ModelError, NonMinimalModelError, load_model, scan_discriminant

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3


def _emit(obj: dict) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def _resolve_fiber(value: str, pol_arg: str | None):
    """Fiber shorthand (I4, III, smooth, ...) or a description file path."""
    try:
        kodaira = parse_fiber_label(value)
        file_pol = None
    except FiberError:
        if not Path(value).is_file():
            raise FiberError(
                f"{value!r} is neither a fiber label (e.g. I4, III, smooth) nor a file"
            )
        kodaira, file_pol = load_fiber_description(value)
    graph = build_fiber(kodaira)
    if pol_arg is not None:
        try:
            weights = tuple(int(w) for w in pol_arg.split(","))
        except ValueError as exc:
            raise FiberError(
                f"--polarization must be a comma-separated integer list: {exc}"
            )
        pol = Polarization(weights)
        if len(weights) != graph.n:
            raise FiberError(
                f"--polarization has {len(weights)} weights but {kodaira.label} "
                f"has {graph.n} components"
            )
    else:
        pol = file_pol or Polarization.ones(graph.n)
    return graph, pol


def _parse_degrees(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise FiberError(f"--degrees must be a comma-separated integer list: {exc}")


def _witness_json(graph, verdict, pol, degrees):
    if verdict.witness is None:
        return None, None
    data = hilbert_data(graph, pol, SubsheafOnSubcurve(degrees, verdict.witness))
    return list(verdict.witness.labels(graph)), str(data.slope)


def _cmd_classify_fiber(args) -> int:
    graph, pol = _resolve_fiber(args.fiber, args.polarization)
    subs = proper_connected_subcurves(graph)
    out = {
        "fiber": graph.kodaira.label,
        "components": list(graph.components),
        "intersections": [list(row) for row in graph.intersections],
        "singularities": graph.singularities,
        "arithmetic_genus": 1,
        "polarization": list(pol.weights),
        "proper_connected_subcurves": len(subs),
    }
    if args.format == "table":
        print(f"fiber {out['fiber']}: {len(graph.components)} component(s), "
              f"singularities: {graph.singularities}")
        for i, row in enumerate(graph.intersections):
            print(f"  {graph.components[i]}  {' '.join(str(v) for v in row)}")
        print(f"polarization: {out['polarization']}")
        print(f"proper connected subcurves: {len(subs)}")
    else:
        _emit(out)
    return EXIT_OK


def _cmd_check_stability(args) -> int:
    graph, pol = _resolve_fiber(args.fiber, args.polarization)
    degrees = _parse_degrees(args.degrees)
    rule = classify_by_rule(graph, degrees)
    oracle = oracle_classify(
        graph, pol, degrees, include_disconnected=args.disconnected
    )
    witness, slope = _witness_json(graph, oracle, pol, degrees)
    out = {
        "fiber": graph.kodaira.label,
        "degrees": list(degrees),
        "polarization": list(pol.weights),
        "verdict": oracle.verdict.value,
        "rule_verdict": rule.verdict.value,
        "agree": oracle.verdict is rule.verdict,
        "witness": witness,
        "witness_slope": slope,
    }
    if args.format == "table":
        print(f"{out['fiber']} {out['degrees']}: {out['verdict']} "
              f"(rule: {out['rule_verdict']}, witness: {witness}, slope: {slope})")
    else:
        _emit(out)
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    graph, pol = _resolve_fiber(args.fiber, args.polarization)
    report = enumerate_stratification(
        graph,
        args.bound,
        pol,
        include_disconnected=args.disconnected,
        cap=args.cap,
    )
    if args.format == "table":
        print(f"fiber {report.fiber}, bound {report.bound}, mode {report.mode}")
        for name, count in report.counts.items():
            print(f"  {name:<18} {count}")
        print(f"  disagreements      {len(report.disagreements)}")
    else:
        _emit(report.to_json())
    return EXIT_OK


def _cmd_graded(args) -> int:
    graph, _ = _resolve_fiber(args.fiber, args.polarization)
    degrees = _parse_degrees(args.degrees)
    graded = graded_object(graph, degrees)
    verdict = classify_by_rule(graph, degrees) if graph.is_reducible else None
    out = {
        "fiber": graph.kodaira.label,
        "degrees": list(degrees),
        "verdict": verdict.verdict.value if verdict else "Stable",
        "stable_factor": (
            {"variant": "line_bundle", "degrees": list(degrees)}
            if graded.stable_factor is not None
            else None
        ),
        "factors": [[graph.components[i], d] for i, d in graded.factors],
    }
    if args.format == "table":
        if graded.stable_factor is not None:
            print(f"{out['fiber']} {out['degrees']}: stable, its own single factor")
        else:
            factors = " + ".join(f"O({d}) on {c}" for c, d in out["factors"])
            print(f"{out['fiber']} {out['degrees']}: {factors}")
    else:
        _emit(out)
    return EXIT_OK


def _cmd_jacobian(args) -> int:
    graph, _ = _resolve_fiber(args.fiber, None)
    cls = jacobian_type(graph.kodaira)
    if args.format == "table":
        print(f"{graph.kodaira.label} -> {cls.kind.value} "
              f"(stable locus {cls.stable_locus.value}, extra points {cls.extra_points})")
    else:
        _emit(cls.to_json())
    return EXIT_OK


def _cmd_phi(args) -> int:
    graph, _ = _resolve_fiber(args.fiber, None)
    c0 = args.component - 1
    q = SmoothPoint(c0, Fraction(0))
    samples = [SmoothPoint(c0, Fraction(i)) for i in range(args.samples)]
    samples += list(boundary_points(graph, c0))
    family = abel_jacobi_family(graph, q, samples)
    out = {"fiber": graph.kodaira.label}
    out.update(family.to_json())
    if args.format == "table":
        print(f"fiber {out['fiber']}, base component C{c0 + 1}, base point q = C{c0 + 1}:0")
        for label, point in out["assignments"]:
            kind = "extra point" if point["point"] == "extra" else "stable point"
            print(f"  {label:<12} -> {kind}")
        print(f"identified boundary points: {family.identified_point_count} "
              f"({family.moduli_singularity})")
    else:
        _emit(out)
    return EXIT_OK


def _cmd_report(args) -> int:
    description = load_fibration_description(args.fibration)
    report = relative_report(description)
    if args.format == "table":
        print(report.to_table())
    else:
        _emit(report.to_json())
    if any(e.error is not None for e in report.entries):
        return EXIT_UNSUPPORTED
    return EXIT_OK


def _cmd_ingest_scan(args) -> int:
    model = load_model(args.model)
    description = scan_discriminant(model)
    payload = description.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    if args.format == "table":
        print(f"discriminant points: {len(description.points)}")
        for entry in description.points:
            if entry.error is not None:
                print(f"  {entry.label:<20} ERROR: {entry.error}")
            else:
                print(f"  {entry.label:<20} {entry.fiber.label}")
    else:
        _emit(payload)
    if any(e.error is not None for e in description.points):
        return EXIT_UNSUPPORTED
    return EXIT_OK


def _cmd_oracle_audit(args) -> int:
    graph, pol = _resolve_fiber(args.fiber, args.polarization)
    report = enumerate_stratification(
        graph, args.bound, pol, include_disconnected=args.disconnected, cap=args.cap
    )
    vectors = list(iter_degree_vectors(graph.n, args.bound))
    baseline = [
        oracle_classify(graph, pol, v, include_disconnected=args.disconnected).verdict
        for v in vectors
    ]
    rng = random.Random(args.seed)
    mismatches = 0
    for _ in range(args.polarizations):
        trial = Polarization(tuple(rng.randint(1, 10) for _ in range(graph.n)))
        for vec, expected in zip(vectors, baseline):
            got = oracle_classify(
                graph, trial, vec, include_disconnected=args.disconnected
            ).verdict
            if got is not expected:
                mismatches += 1
    out = {
        "fiber": report.fiber,
        "bound": args.bound,
        "mode": report.mode,
        "vectors_checked": len(vectors),
        "disagreements": len(report.disagreements),
        "polarizations_tested": args.polarizations,
        "polarization_mismatches": mismatches,
        "counts": dict(report.counts),
    }
    if args.format == "table":
        print(f"fiber {out['fiber']}, bound {args.bound}, mode {out['mode']}: "
              f"{out['vectors_checked']} vectors, {out['disagreements']} rule/oracle "
              f"disagreements, {mismatches} polarization mismatches over "
              f"{args.polarizations} random polarizations")
    else:
        _emit(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiberjac",
        description="Stability of rank-1 degree-0 sheaf classes on Kodaira fibers "
        "and the moduli (Jacobian) curves of elliptic fibrations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, fiber=True, degrees=False, bound=False):
        if fiber:
            p.add_argument("--fiber", required=True,
                           help="fiber label (I4, III, smooth, ...) or description file")
            p.add_argument("--polarization", default=None,
                           help="comma-separated positive weights, one per component")
        if degrees:
            p.add_argument("--degrees", required=True,
                           help="comma-separated restriction degrees, one per component")
        if bound:
            p.add_argument("--bound", type=int, required=True,
                           help="sweep all vectors with |d_i| <= bound and total 0")
            p.add_argument("--cap", type=int, default=10_000_000,
                           help="refuse boxes larger than this many vectors")
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("classify-fiber", help="dual graph and subcurve data of a fiber")
    add_common(p)
    p.set_defaults(handler=_cmd_classify_fiber)

    p = sub.add_parser("check-stability", help="classify one multidegree, both routes")
    add_common(p, degrees=True)
    p.add_argument("--disconnected", action="store_true",
                   help="also search disconnected destabilizing subcurves")
    p.set_defaults(handler=_cmd_check_stability)

    p = sub.add_parser("enumerate", help="stratify a full multidegree box")
    add_common(p, bound=True)
    p.add_argument("--disconnected", action="store_true",
                   help="also search disconnected destabilizing subcurves")
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("graded", help="Jordan-Holder graded object of a semistable class")
    add_common(p, degrees=True)
    p.set_defaults(handler=_cmd_graded)

    p = sub.add_parser("jacobian", help="moduli curve classification of a fiber")
    p.add_argument("--fiber", required=True)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(handler=_cmd_jacobian)

    p = sub.add_parser("phi", help="moduli points of sampled points on one component")
    p.add_argument("--fiber", required=True)
    p.add_argument("--component", type=int, default=1,
                   help="1-based index of the base component (default 1)")
    p.add_argument("--samples", type=int, default=5,
                   help="number of smooth sample points (default 5)")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(handler=_cmd_phi)

    p = sub.add_parser("report", help="relative moduli report of a fibration description")
    p.add_argument("fibration", help="fibration description JSON file")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(handler=_cmd_report)

    p = sub.add_parser("ingest-scan", help="classify the discriminant points of a model")
    p.add_argument("model", help="Weierstrass model file (JSON or TOML)")
    p.add_argument("--out", default=None, help="also write the description to this file")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(handler=_cmd_ingest_scan)

    p = sub.add_parser("oracle-audit", help="rule/oracle and polarization audit over a box")
    add_common(p, bound=True)
    p.add_argument("--disconnected", action="store_true",
                   help="also search disconnected destabilizing subcurves")
    p.add_argument("--polarizations", type=int, default=0,
                   help="number of random polarizations to cross-check (default 0)")
    p.add_argument("--seed", type=int, default=0, help="seed for random polarizations")
    p.set_defaults(handler=_cmd_oracle_audit)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except NonMinimalModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (FiberError, StabilityError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
