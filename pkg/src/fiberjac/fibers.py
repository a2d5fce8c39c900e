"""Dual-graph models of the reduced Kodaira fiber types.

A degenerate elliptic fiber is stored as its dual graph: one vertex per
irreducible component together with the symmetric matrix of pairwise
intersection numbers.  The supported configurations are the reduced
Kodaira types without multiplicity:

* ``smooth`` - a smooth genus-1 curve,
* ``I1``     - a rational curve with one node,
* ``II``     - a rational curve with one cusp,
* ``IN``     - a cycle of N >= 2 smooth rational curves; for N = 2 the
  two components meet transversely in two distinct points,
* ``III``    - two smooth rational curves tangent at one point
  (intersection number 2),
* ``IV``     - three smooth rational curves through one common point
  (pairwise intersection number 1).

Every component of a singular fiber is rational.  Every proper connected
subcurve D of a reducible fiber in this list has chi(O_D) = 1 and total
boundary degree D.Dbar = 2, while the full fiber has arithmetic genus
one, i.e. chi(O_C) = 0.  The genus-one fact is stored as a type-level
constant; the pairwise intersection numbers are only ever consumed for
proper subcurves, where they give the correct answers even for the
tangency of III and the common point of IV.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable


class FiberError(ValueError):
    """Invalid fiber datum (type, graph, subcurve or point)."""


class FiberDescriptionError(FiberError):
    """Malformed fiber description input (bad file, field or value)."""


class IrreducibleFiberError(FiberError):
    """The requested operation needs a reducible fiber."""


_SYMBOLS = ("smooth", "I", "II", "III", "IV")


@dataclass(frozen=True)
class KodairaType:
    """A reduced Kodaira fiber symbol: smooth, I(N), II, III or IV."""

    symbol: str
    n: int | None = None

    def __post_init__(self) -> None:
        if self.symbol not in _SYMBOLS:
            raise FiberError(
                f"unknown fiber symbol {self.symbol!r}; expected one of {_SYMBOLS}"
            )
        if self.symbol == "I":
            if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
                raise FiberError(f"type I requires an integer N >= 1, got {self.n!r}")
        elif self.n is not None:
            raise FiberError(f"type {self.symbol} carries no parameter, got n={self.n!r}")

    @property
    def label(self) -> str:
        return f"I{self.n}" if self.symbol == "I" else self.symbol

    @property
    def component_count(self) -> int:
        if self.symbol == "I":
            return self.n
        return {"smooth": 1, "II": 1, "III": 2, "IV": 3}[self.symbol]

    @property
    def is_smooth(self) -> bool:
        return self.symbol == "smooth"

    @property
    def is_reducible(self) -> bool:
        return self.component_count > 1

    def to_json(self) -> dict:
        if self.symbol == "I":
            return {"type": "I", "n": self.n}
        return {"type": self.symbol}

    @staticmethod
    def from_json(obj: dict) -> "KodairaType":
        if not isinstance(obj, dict):
            raise FiberDescriptionError(f"fiber description must be an object, got {type(obj).__name__}")
        extra = set(obj) - {"type", "n"}
        if extra:
            raise FiberDescriptionError(f"unknown fiber fields {sorted(extra)}; allowed: 'type', 'n'")
        if "type" not in obj:
            raise FiberDescriptionError("fiber description is missing the 'type' field")
        symbol = obj["type"]
        if symbol == "I":
            if "n" not in obj:
                raise FiberDescriptionError("fiber of type 'I' is missing the 'n' field")
            n = obj["n"]
            if not isinstance(n, int) or isinstance(n, bool):
                raise FiberDescriptionError(f"field 'n' must be an integer, got {n!r}")
            return KodairaType("I", n)
        if "n" in obj:
            raise FiberDescriptionError(f"field 'n' is only valid for type 'I', not {symbol!r}")
        return KodairaType(symbol)


_LABEL_RE = re.compile(r"^I(\d+)$")


def parse_fiber_label(text: str) -> KodairaType:
    """Parse shorthand labels such as ``I4``, ``III`` or ``smooth``.

    ``I0`` is accepted as an alias for the smooth fiber.
    """
    label = text.strip()
    if label.lower() == "smooth" or label == "I0":
        return KodairaType("smooth")
    if label in ("II", "III", "IV"):
        return KodairaType(label)
    m = _LABEL_RE.match(label)
    if m:
        return KodairaType("I", int(m.group(1)))
    raise FiberError(f"cannot parse fiber label {text!r} (expected e.g. I4, II, III, IV, smooth)")


@dataclass(frozen=True)
class FiberGraph:
    """A fiber as a dual graph with pairwise intersection numbers."""

    kodaira: KodairaType
    components: tuple[str, ...]
    intersections: tuple[tuple[int, ...], ...]
    singularities: str

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def is_reducible(self) -> bool:
        return self.n > 1

    def pairwise(self, i: int, j: int) -> int:
        return self.intersections[i][j]

    @property
    def full_curve_euler(self) -> int:
        """chi(O_C) of the whole fiber: zero, arithmetic genus one."""
        return 0


def build_fiber(kodaira: KodairaType) -> FiberGraph:
    """Build the dual graph of a fiber of the given type.

    Intersection numbers: 2 between the two components of I2 (two nodes)
    and of III (one tangency), 1 along the edges of the N-cycle for
    I_N with N >= 3 and between each pair of components of IV.
    """
    n = kodaira.component_count
    m = [[0] * n for _ in range(n)]
    if kodaira.symbol == "smooth":
        singularities = "none"
    elif kodaira.symbol == "I":
        singularities = "nodes"
        if n == 2:
            m[0][1] = m[1][0] = 2
        elif n >= 3:
            for i in range(n):
                j = (i + 1) % n
                m[i][j] = m[j][i] = 1
    elif kodaira.symbol == "II":
        singularities = "cusp"
    elif kodaira.symbol == "III":
        singularities = "tangency"
        m[0][1] = m[1][0] = 2
    else:  # IV
        singularities = "triple_point"
        for i in range(3):
            for j in range(3):
                if i != j:
                    m[i][j] = 1
    return FiberGraph(
        kodaira=kodaira,
        components=tuple(f"C{i + 1}" for i in range(n)),
        intersections=tuple(tuple(row) for row in m),
        singularities=singularities,
    )


@dataclass(frozen=True)
class Polarization:
    """Positive integer weight per component; ``total`` is the degree."""

    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.weights:
            raise FiberError("polarization needs at least one weight")
        for w in self.weights:
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise FiberError(f"polarization weights must be integers >= 1, got {w!r}")

    @property
    def total(self) -> int:
        return sum(self.weights)

    @classmethod
    def ones(cls, n: int) -> "Polarization":
        return cls((1,) * n)


@dataclass(frozen=True)
class Subcurve:
    """A nonempty proper subset of components; build via :func:`subcurve`."""

    indices: tuple[int, ...]
    connected: bool

    def labels(self, graph: FiberGraph) -> tuple[str, ...]:
        return tuple(graph.components[i] for i in self.indices)


def subcurve(graph: FiberGraph, indices: Iterable[int]) -> Subcurve:
    """Validate and normalize a subcurve of ``graph``.

    Rejects the empty set and the full component set; the connectedness
    flag is derived from the induced intersection subgraph.
    """
    idx = tuple(sorted({int(i) for i in indices}))
    if not idx:
        raise FiberError("subcurve must be nonempty")
    if any(i < 0 or i >= graph.n for i in idx):
        raise FiberError(f"component indices {idx} out of range for a {graph.n}-component fiber")
    if len(idx) == graph.n:
        raise FiberError("subcurve must be proper (not the whole fiber)")
    return Subcurve(idx, _is_connected(graph, idx))


def _is_connected(graph: FiberGraph, indices: tuple[int, ...]) -> bool:
    if len(indices) == 1:
        return True
    pool = set(indices)
    seen = {indices[0]}
    stack = [indices[0]]
    while stack:
        i = stack.pop()
        for j in pool - seen:
            if graph.pairwise(i, j) > 0:
                seen.add(j)
                stack.append(j)
    return seen == pool


def connected_pieces(graph: FiberGraph, indices: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    """Decompose an index set into its maximal connected pieces."""
    remaining = {int(i) for i in indices}
    pieces = []
    while remaining:
        seed = min(remaining)
        seen = {seed}
        stack = [seed]
        while stack:
            i = stack.pop()
            for j in remaining - seen:
                if graph.pairwise(i, j) > 0:
                    seen.add(j)
                    stack.append(j)
        pieces.append(tuple(sorted(seen)))
        remaining -= seen
    return tuple(sorted(pieces))


@lru_cache(maxsize=None)
def _proper_connected_subcurves(graph: FiberGraph) -> tuple[Subcurve, ...]:
    found = []
    for size in range(1, graph.n):
        for combo in combinations(range(graph.n), size):
            if _is_connected(graph, combo):
                found.append(Subcurve(combo, True))
    found.sort(key=lambda s: s.indices)
    return tuple(found)


def proper_connected_subcurves(graph: FiberGraph) -> tuple[Subcurve, ...]:
    """All nonempty proper connected subcurves, lexicographically ordered.

    Empty for single-component fibers.
    """
    if not graph.is_reducible:
        return ()
    return _proper_connected_subcurves(graph)


def _check_indices(graph: FiberGraph, indices: tuple[int, ...]) -> None:
    if any(i < 0 or i >= graph.n for i in indices):
        raise FiberError(
            f"component indices {indices} out of range for a {graph.n}-component fiber"
        )


def boundary(graph: FiberGraph, sub: Subcurve) -> int:
    """Total intersection number of a proper subcurve with its complement."""
    inside = set(sub.indices)
    if not inside:
        raise FiberError("boundary of the empty subcurve is undefined")
    _check_indices(graph, sub.indices)
    if len(inside) >= graph.n:
        raise FiberError("boundary of the full fiber is undefined")
    return sum(
        graph.pairwise(i, j) for i in inside for j in range(graph.n) if j not in inside
    )


def euler_characteristic(graph: FiberGraph, sub: Subcurve | None = None) -> int:
    """chi of the structure sheaf of a subcurve, or of the full fiber.

    The full fiber (``sub=None``) has chi = 0.  A proper connected
    subcurve is a configuration of rational components glued at the
    internal intersection points, so chi is the component count minus
    the internal intersection numbers; for the supported fiber types
    this always equals 1.  Disconnected subcurves are rejected, callers
    decompose them with :func:`connected_pieces` first.
    """
    if sub is None:
        return graph.full_curve_euler
    if not sub.connected:
        raise FiberError("euler_characteristic needs a connected subcurve; decompose first")
    _check_indices(graph, sub.indices)
    idx = sub.indices
    internal = sum(graph.pairwise(i, j) for i, j in combinations(idx, 2))
    return len(idx) - internal


# ---------------------------------------------------------------------------
# Points of a fiber.


@dataclass(frozen=True)
class SmoothPoint:
    """A smooth point on one component, tagged by an affine coordinate."""

    component: int
    coord: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if not isinstance(self.coord, Fraction):
            object.__setattr__(self, "coord", Fraction(self.coord))


@dataclass(frozen=True)
class NodePoint:
    """Node number ``index`` of an I_N fiber (joins C_k and C_{k+1 mod N})."""

    index: int


@dataclass(frozen=True)
class CuspPoint:
    """The cusp of a type II fiber."""


@dataclass(frozen=True)
class TangencyPoint:
    """The tangency point of a type III fiber."""


@dataclass(frozen=True)
class TriplePoint:
    """The common point of the three components of a type IV fiber."""


FiberPoint = SmoothPoint | NodePoint | CuspPoint | TangencyPoint | TriplePoint


def point_label(point: FiberPoint) -> str:
    if isinstance(point, SmoothPoint):
        return f"C{point.component + 1}:{point.coord}"
    if isinstance(point, NodePoint):
        return f"node{point.index + 1}"
    if isinstance(point, CuspPoint):
        return "cusp"
    if isinstance(point, TangencyPoint):
        return "tangency"
    return "triple_point"


def validate_point(graph: FiberGraph, point: FiberPoint) -> None:
    k = graph.kodaira
    if isinstance(point, SmoothPoint):
        if not 0 <= point.component < graph.n:
            raise FiberError(
                f"component index {point.component} out of range for {k.label}"
            )
        return
    if isinstance(point, NodePoint):
        if k.symbol != "I" or not 0 <= point.index < k.n:
            raise FiberError(f"{point_label(point)} is not a point of a {k.label} fiber")
        return
    if isinstance(point, CuspPoint):
        if k.symbol != "II":
            raise FiberError(f"cusp is not a point of a {k.label} fiber")
        return
    if isinstance(point, TangencyPoint):
        if k.symbol != "III":
            raise FiberError(f"tangency point is not a point of a {k.label} fiber")
        return
    if isinstance(point, TriplePoint):
        if k.symbol != "IV":
            raise FiberError(f"triple point is not a point of a {k.label} fiber")
        return
    raise FiberError(f"unrecognized point {point!r}")


def singular_points(graph: FiberGraph) -> tuple[FiberPoint, ...]:
    """The singular points of the fiber, in a fixed order."""
    k = graph.kodaira
    if k.symbol == "smooth":
        return ()
    if k.symbol == "I":
        return tuple(NodePoint(i) for i in range(k.n))
    if k.symbol == "II":
        return (CuspPoint(),)
    if k.symbol == "III":
        return (TangencyPoint(),)
    return (TriplePoint(),)


def node_components(graph: FiberGraph, node: NodePoint) -> tuple[int, int]:
    """The (possibly equal) components through a node of an I_N fiber."""
    validate_point(graph, node)
    n = graph.kodaira.n
    return (node.index, (node.index + 1) % n)


def boundary_points(graph: FiberGraph, component: int) -> tuple[FiberPoint, ...]:
    """Intersection points of one component with its complement.

    Two nodes for the cycles I_N (N >= 2), a single point for III and
    IV.  Undefined on irreducible fibers.
    """
    if not graph.is_reducible:
        raise IrreducibleFiberError("an irreducible fiber has no complementary subcurve")
    if not 0 <= component < graph.n:
        raise FiberError(f"component index {component} out of range")
    k = graph.kodaira
    if k.symbol == "I":
        incident = sorted({(component - 1) % k.n, component % k.n})
        return tuple(NodePoint(i) for i in incident)
    if k.symbol == "III":
        return (TangencyPoint(),)
    return (TriplePoint(),)


# ---------------------------------------------------------------------------
# Fiber description files.
#
# Schema: {"type": "I", "n": 4} or {"type": "III"}, with an optional
# "polarization": [h_1, ..., h_N] (defaults to all ones).


def parse_fiber_description(obj: dict) -> tuple[KodairaType, Polarization | None]:
    if not isinstance(obj, dict):
        raise FiberDescriptionError(
            f"fiber description must be a JSON object, got {type(obj).__name__}"
        )
    extra = set(obj) - {"type", "n", "polarization"}
    if extra:
        raise FiberDescriptionError(
            f"unknown fields {sorted(extra)}; allowed: 'type', 'n', 'polarization'"
        )
    kodaira = KodairaType.from_json({k: v for k, v in obj.items() if k in ("type", "n")})
    pol = None
    if "polarization" in obj:
        weights = obj["polarization"]
        if not isinstance(weights, list):
            raise FiberDescriptionError("field 'polarization' must be a list of integers")
        try:
            pol = Polarization(tuple(weights))
        except FiberError as exc:
            raise FiberDescriptionError(f"field 'polarization': {exc}") from exc
        if len(pol.weights) != kodaira.component_count:
            raise FiberDescriptionError(
                f"field 'polarization' has {len(pol.weights)} weights but "
                f"{kodaira.label} has {kodaira.component_count} components"
            )
    return kodaira, pol


def load_fiber_description(path: str | Path) -> tuple[KodairaType, Polarization | None]:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FiberDescriptionError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_fiber_description(obj)
