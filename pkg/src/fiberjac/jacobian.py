"""Moduli fibers of rank-1 degree-0 semistable classes, per Kodaira type.

The moduli space of semistable rank-1 degree-0 pure one-dimensional
sheaf classes on a fiber is an integral genus-one curve: a smooth
elliptic curve over smooth fibers, a rational curve with one node over
I_N fibers (N >= 1), and a rational curve with one cusp over II, III
and IV.  The stable locus of a reducible fiber is a one-parameter group
(multiplicative for the cycles, additive for III and IV) and exactly one
extra point compactifies it, the common S-equivalence class of all
strictly semistable sheaves.

The moduli points themselves are realized by an Abel-Jacobi style
family: fix a smooth base point q on a component C0, and send a fiber
point p to the class of the unique nontrivial extension of the residue
field at p by the line bundle O(-q).  For p smooth on C0 this is the
stable class O(p - q); for every other p it is strictly semistable and
lands on the single extra point.  The number of boundary points of C0
identified there (two for cycles, one for III and IV) distinguishes the
node from the cusp.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .fibers import (
    FiberError,
    FiberGraph,
    FiberPoint,
    IrreducibleFiberError,
    KodairaType,
    NodePoint,
    SmoothPoint,
    TangencyPoint,
    TriplePoint,
    boundary_points,
    point_label,
    validate_point,
)
from .stability import (
    LineBundle,
    NodalTorsionFree,
    SheafClass,
    SingularPointDual,
    StabilityVerdict,
    classify_sheaf,
)


class ModuliKind(Enum):
    SMOOTH_ELLIPTIC = "SmoothElliptic"
    NODAL_RATIONAL = "NodalRational"
    CUSPIDAL_RATIONAL = "CuspidalRational"


class StableLocusGroup(Enum):
    ELLIPTIC_CURVE = "EllipticCurve"
    GM = "Gm"
    GA = "Ga"


@dataclass(frozen=True)
class ModuliClassification:
    """The moduli curve of one fiber: kind, stable-locus group, extra points.

    ``extra_points`` counts the strictly semistable S-equivalence
    classes: zero on integral fibers, one on reducible ones.  Every
    classification is an integral curve of arithmetic genus one.
    """

    kind: ModuliKind
    stable_locus: StableLocusGroup
    extra_points: int

    @property
    def arithmetic_genus(self) -> int:
        return 1

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "stable_locus": self.stable_locus.value,
            "extra_points": self.extra_points,
        }


def jacobian_type(kodaira: KodairaType) -> ModuliClassification:
    """Classify the moduli curve of a fiber of the given type.

    Smooth fibers give a smooth elliptic curve.  The cycles I_N give a
    nodal rational curve whose smooth locus is a multiplicative group;
    II, III and IV give a cuspidal rational curve with additive smooth
    locus.  Reducible fibers carry exactly one extra (strictly
    semistable) point, integral fibers none.
    """
    if kodaira.symbol == "smooth":
        return ModuliClassification(ModuliKind.SMOOTH_ELLIPTIC, StableLocusGroup.ELLIPTIC_CURVE, 0)
    extra = 1 if kodaira.is_reducible else 0
    if kodaira.symbol == "I":
        return ModuliClassification(ModuliKind.NODAL_RATIONAL, StableLocusGroup.GM, extra)
    return ModuliClassification(ModuliKind.CUSPIDAL_RATIONAL, StableLocusGroup.GA, extra)


@dataclass(frozen=True)
class ModuliPoint:
    """A point of the moduli curve of a fixed reducible fiber.

    Stable points carry their sheaf class; when the class is O(p - q)
    for distinct smooth points, the pair (p, q) pins the point down
    inside the family (the multidegree alone, all zeros, does not).  The
    unique strictly semistable point carries no class and is exposed as
    the module constant ``THE_EXTRA_POINT``.
    """

    sheaf: SheafClass | None = None
    divisor: tuple[SmoothPoint, SmoothPoint] | None = None

    @property
    def is_extra(self) -> bool:
        return self.sheaf is None

    def to_json(self) -> dict:
        if self.is_extra:
            return {"point": "extra"}
        out: dict = {"point": "stable", "sheaf": _sheaf_to_json(self.sheaf)}
        if self.divisor is not None:
            out["divisor"] = [point_label(self.divisor[0]), point_label(self.divisor[1])]
        return out


THE_EXTRA_POINT = ModuliPoint()


def _sheaf_to_json(sheaf: SheafClass) -> dict:
    if isinstance(sheaf, LineBundle):
        return {"variant": "line_bundle", "degrees": list(sheaf.degrees)}
    if isinstance(sheaf, NodalTorsionFree):
        return {
            "variant": "nodal_torsion_free",
            "node": f"node{sheaf.node + 1}",
            "pullback_degrees": list(sheaf.pullback_degrees),
        }
    return {"variant": "singular_point_dual", "tag": sheaf.tag}


def abel_jacobi_class(
    graph: FiberGraph, p: FiberPoint, q: SmoothPoint
) -> tuple[SheafClass, StabilityVerdict, ModuliPoint]:
    """The sheaf class, verdict and moduli point attached to a fiber point.

    The class is the unique nontrivial extension of the residue field at
    p by O(-q), i.e. the dual of the ideal of p twisted by O(-q).  For p
    smooth on the base component this is the stable line bundle
    O(p - q); for p smooth on another component it is the strictly
    semistable line bundle with degree -1 on the base component and +1
    on the component of p; for p singular it is the non-locally-free
    twisted-ideal class.  Every non-stable case lands on the single
    extra moduli point.  Only reducible fibers are handled: an integral
    fiber is isomorphic to its own moduli curve and has no extra point.
    """
    if not isinstance(q, SmoothPoint):
        raise FiberError("the base point q must be a smooth point")
    validate_point(graph, q)
    validate_point(graph, p)
    if not graph.is_reducible:
        raise IrreducibleFiberError(
            "the point family is only computed on reducible fibers; an integral "
            "fiber is isomorphic to its moduli curve"
        )
    c0 = q.component
    if isinstance(p, SmoothPoint):
        if p.component == c0:
            sheaf: SheafClass = LineBundle((0,) * graph.n)
            point = ModuliPoint(sheaf=sheaf, divisor=None if p == q else (p, q))
        else:
            degrees = [0] * graph.n
            degrees[c0] = -1
            degrees[p.component] = 1
            sheaf = LineBundle(tuple(degrees))
            point = THE_EXTRA_POINT
    elif isinstance(p, NodePoint):
        pullback = [0] * graph.n
        pullback[c0] = -1
        sheaf = NodalTorsionFree(node=p.index, pullback_degrees=tuple(pullback))
        point = THE_EXTRA_POINT
    elif isinstance(p, TangencyPoint):
        sheaf = SingularPointDual("tacnode")
        point = THE_EXTRA_POINT
    elif isinstance(p, TriplePoint):
        sheaf = SingularPointDual("triple")
        point = THE_EXTRA_POINT
    else:  # CuspPoint lives on the irreducible type II fiber only
        raise FiberError("a cusp point never lies on a reducible fiber")
    verdict = classify_sheaf(graph, sheaf)
    return sheaf, verdict, point


@dataclass(frozen=True)
class AbelJacobiFamily:
    """Moduli points of a sample of points on the base component.

    ``identified_point_count`` is the number of boundary points of the
    base component that share the extra moduli point: two on a cycle
    (the moduli curve acquires a node), one on III and IV (a cusp).
    """

    base_component: int
    assignments: tuple[tuple[FiberPoint, ModuliPoint], ...]
    boundary: tuple[FiberPoint, ...]
    identified_point_count: int
    moduli_singularity: str

    def to_json(self) -> dict:
        return {
            "base_component": f"C{self.base_component + 1}",
            "assignments": [
                [point_label(p), point.to_json()] for p, point in self.assignments
            ],
            "boundary_points": [point_label(p) for p in self.boundary],
            "identified_point_count": self.identified_point_count,
            "moduli_singularity": self.moduli_singularity,
        }


def _on_base_component(graph: FiberGraph, point: FiberPoint, c0: int) -> bool:
    if isinstance(point, SmoothPoint):
        return point.component == c0
    return point in boundary_points(graph, c0)


def abel_jacobi_family(
    graph: FiberGraph,
    q: SmoothPoint,
    samples: list[FiberPoint] | tuple[FiberPoint, ...] | None = None,
) -> AbelJacobiFamily:
    """Map a sample of points of the base component to moduli points.

    Distinct smooth sample points go to pairwise distinct stable points,
    the boundary points of the base component all go to the extra point.
    With ``samples=None`` a default sample is used: q, four more smooth
    points, and every boundary point.  Samples off the base component
    are rejected.
    """
    if not isinstance(q, SmoothPoint):
        raise FiberError("the base point q must be a smooth point")
    validate_point(graph, q)
    if not graph.is_reducible:
        raise IrreducibleFiberError(
            "the point family is only computed on reducible fibers"
        )
    c0 = q.component
    bdry = boundary_points(graph, c0)
    if samples is None:
        smooth: list[FiberPoint] = [q]
        coord = 1
        while len(smooth) < 5:
            pt = SmoothPoint(c0, coord)
            if pt != q:
                smooth.append(pt)
            coord += 1
        samples = smooth + list(bdry)
    seen = set()
    assignments = []
    for p in samples:
        validate_point(graph, p)
        if not _on_base_component(graph, p, c0):
            raise FiberError(
                f"sample {point_label(p)} does not lie on the base component C{c0 + 1}"
            )
        if p in seen:
            continue
        seen.add(p)
        _, _, point = abel_jacobi_class(graph, p, q)
        assignments.append((p, point))
    count = len(bdry)
    return AbelJacobiFamily(
        base_component=c0,
        assignments=tuple(assignments),
        boundary=bdry,
        identified_point_count=count,
        moduli_singularity="node" if count == 2 else "cusp",
    )


# ---------------------------------------------------------------------------
# Fibration-level report.


@dataclass(frozen=True)
class FiberEntry:
    """One base point of a fibration: a fiber type or a per-point error."""

    label: str
    fiber: KodairaType | None = None
    error: str | None = None

    def __post_init__(self) -> None:
        if (self.fiber is None) == (self.error is None):
            raise FiberError(
                f"entry {self.label!r} needs exactly one of a fiber type or an error"
            )

    def to_json(self) -> dict:
        if self.error is not None:
            return {"label": self.label, "error": self.error}
        return {"label": self.label, "fiber": self.fiber.to_json()}


@dataclass(frozen=True)
class FibrationDescription:
    """A fibration as a base dimension plus labeled fiber assignments."""

    base_dim: int
    points: tuple[FiberEntry, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.base_dim, int) or self.base_dim < 1:
            raise FiberError(f"base_dim must be an integer >= 1, got {self.base_dim!r}")

    def to_json(self) -> dict:
        return {"base_dim": self.base_dim, "points": [p.to_json() for p in self.points]}

    @staticmethod
    def from_json(obj: dict) -> "FibrationDescription":
        if not isinstance(obj, dict):
            raise FiberError("fibration description must be a JSON object")
        if "base_dim" not in obj:
            raise FiberError("fibration description is missing the 'base_dim' field")
        if "points" not in obj or not isinstance(obj["points"], list):
            raise FiberError("fibration description needs a 'points' list")
        entries = []
        for i, item in enumerate(obj["points"]):
            if not isinstance(item, dict) or "label" not in item:
                raise FiberError(f"points[{i}] needs a 'label' field")
            label = item["label"]
            if "error" in item:
                entries.append(FiberEntry(label=label, error=str(item["error"])))
            elif "fiber" in item:
                entries.append(FiberEntry(label=label, fiber=KodairaType.from_json(item["fiber"])))
            else:
                raise FiberError(f"points[{i}] ({label!r}) needs a 'fiber' or 'error' field")
        return FibrationDescription(base_dim=obj["base_dim"], points=tuple(entries))


def load_fibration_description(path: str | Path) -> FibrationDescription:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FiberError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return FibrationDescription.from_json(obj)


NOTE_FINITE_SINGULAR = (
    "base dimension 1: the singular locus of the relative moduli space is at "
    "worst a finite set of points"
)
NOTE_SINGULAR_CURVE = (
    "base dimension 2: the singular locus of the relative moduli space has "
    "dimension at most 1"
)
NOTE_NOT_ISOMORPHIC = (
    "reducible fibers present: the relative moduli space is not isomorphic to "
    "the original fibration, even when a section exists"
)


@dataclass(frozen=True)
class ReportEntry:
    label: str
    fiber: str | None
    classification: ModuliClassification | None
    error: str | None = None

    def to_json(self) -> dict:
        if self.error is not None:
            return {"label": self.label, "error": self.error}
        out = {"label": self.label, "fiber": self.fiber}
        out.update(self.classification.to_json())
        out["arithmetic_genus"] = self.classification.arithmetic_genus
        return out


@dataclass(frozen=True)
class FibrationReport:
    """Per-point moduli classifications plus fibration-level notes."""

    base_dimension: int
    entries: tuple[ReportEntry, ...]
    singular_fibers: tuple[str, ...]
    has_reducible_fibers: bool
    all_moduli_fibers_integral_genus_one: bool
    notes: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "base_dimension": self.base_dimension,
            "entries": [e.to_json() for e in self.entries],
            "discriminant": {
                "singular_fibers": len(self.singular_fibers),
                "labels": list(self.singular_fibers),
            },
            "has_reducible_fibers": self.has_reducible_fibers,
            "all_moduli_fibers_integral_genus_one": self.all_moduli_fibers_integral_genus_one,
            "notes": list(self.notes),
        }

    def to_table(self) -> str:
        lines = [f"base dimension: {self.base_dimension}"]
        width = max([len(e.label) for e in self.entries], default=5)
        for e in self.entries:
            if e.error is not None:
                lines.append(f"  {e.label:<{width}}  ERROR: {e.error}")
            else:
                c = e.classification
                lines.append(
                    f"  {e.label:<{width}}  {e.fiber:<7} -> {c.kind.value} "
                    f"(stable locus {c.stable_locus.value}, extra points {c.extra_points})"
                )
        lines.append(
            f"singular fibers: {len(self.singular_fibers)}"
            + (f" ({', '.join(self.singular_fibers)})" if self.singular_fibers else "")
        )
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


def relative_report(description: FibrationDescription) -> FibrationReport:
    """Classify the moduli curve over every base point of a fibration.

    Entries with a per-point error (unsupported or non-minimal input)
    are carried through unchanged; the rest are classified.  Every
    classified moduli fiber is an integral curve of arithmetic genus
    one.  The notes record the singular-locus bound implied by the base
    dimension and, when reducible fibers occur, that the moduli space
    cannot be isomorphic to the original fibration.
    """
    entries = []
    singular = []
    has_reducible = False
    for item in description.points:
        if item.error is not None:
            entries.append(ReportEntry(item.label, None, None, error=item.error))
            continue
        kod = item.fiber
        entries.append(ReportEntry(item.label, kod.label, jacobian_type(kod)))
        if not kod.is_smooth:
            singular.append(item.label)
        if kod.is_reducible:
            has_reducible = True
    notes = []
    if singular:
        if description.base_dim == 1:
            notes.append(NOTE_FINITE_SINGULAR)
        elif description.base_dim == 2:
            notes.append(NOTE_SINGULAR_CURVE)
    if has_reducible:
        notes.append(NOTE_NOT_ISOMORPHIC)
    return FibrationReport(
        base_dimension=description.base_dim,
        entries=tuple(entries),
        singular_fibers=tuple(singular),
        has_reducible_fibers=has_reducible,
        all_moduli_fibers_integral_genus_one=True,
        notes=tuple(notes),
    )
