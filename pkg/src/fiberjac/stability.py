"""Slope stability of rank-1, degree-0 sheaf classes on Kodaira fibers.

With respect to a polarization H with component weights h_i and total
degree h, a pure one-dimensional sheaf supported on a subcurve D of a
genus-one fiber has polarized rank h_D / h, and its polarized degree
equals its Euler characteristic (the chi(O_C) term of the Hilbert
polynomial vanishes).  The slope is degree over rank, so a rank-1
degree-0 class has slope zero and (semi)stability asks every proper
subsheaf to have negative (respectively non-positive) slope.

Two classification routes are implemented independently of each other:

``classify_by_rule``
    The cyclic-word criterion on the restriction degrees of a line
    bundle: stable iff every restriction degree vanishes; strictly
    semistable iff all degrees lie in {-1, 0, 1} and, after deleting the
    zero entries around the cycle, no two adjacent entries are equal;
    unstable otherwise.

``oracle_classify``
    Exhaustive search over proper connected subcurves D.  The maximal
    subsheaf of a line bundle L supported on D has Euler characteristic
    chi_D = deg_D(L) - D.Dbar + chi(O_D), hence slope chi_D * h / h_D.
    The class is unstable iff some slope is positive, strictly
    semistable iff the maximum slope is zero, stable otherwise.  An
    optional exhaustive mode also sweeps disconnected candidate
    subcurves (their chi is the sum over connected pieces).

``enumerate_stratification`` pushes whole boxes of multidegree vectors
through both routes and reports every disagreement; the test suite uses
it to check that the two criteria agree exactly.

All slope arithmetic is exact (integers and ``fractions.Fraction``);
verdicts sit on the boundary between equality and strict inequality, so
no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

from .fibers import (
    FiberGraph,
    IrreducibleFiberError,
    Polarization,
    Subcurve,
    connected_pieces,
    proper_connected_subcurves,
    subcurve,
)


class StabilityError(ValueError):
    """Invalid input to a stability computation."""


class DegreeVectorError(StabilityError):
    """Multidegree vector with wrong length or nonzero total."""


class NotSemistableError(StabilityError):
    """Jordan-Holder data requested for an unstable class."""


class UnsupportedSheafError(StabilityError):
    """Sheaf class outside the supported families."""


class SearchSpaceError(StabilityError):
    """Enumeration request exceeding the configured cap."""


@dataclass(frozen=True)
class MultiDegree:
    """Vector of restriction degrees of a line bundle, one per component."""

    degrees: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.degrees)


@dataclass(frozen=True)
class LineBundle:
    """A degree-0 line bundle class, known by its multidegree."""

    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.degrees) != 0:
            raise StabilityError(
                f"line bundle class must have total degree 0, got {sum(self.degrees)}"
            )


@dataclass(frozen=True)
class NodalTorsionFree:
    """Rank-1 degree-0 class not locally free at one node of an I_N fiber.

    Such a class is the pushforward of a line bundle from the partial
    normalization separating that node; ``pullback_degrees`` is the
    multidegree of that line bundle and must total -1 so that the
    pushforward has Euler characteristic 0.
    """

    node: int
    pullback_degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.pullback_degrees) != -1:
            raise StabilityError(
                "pullback degrees of a degree-0 nodal class must total -1, "
                f"got {sum(self.pullback_degrees)}"
            )


@dataclass(frozen=True)
class SingularPointDual:
    """The twisted-ideal-dual class at a non-nodal singular point.

    ``tag`` is one of ``cusp`` (type II), ``tacnode`` (type III) or
    ``triple`` (type IV).
    """

    tag: str

    def __post_init__(self) -> None:
        if self.tag not in ("cusp", "tacnode", "triple"):
            raise StabilityError(f"unknown singular point tag {self.tag!r}")


SheafClass = LineBundle | NodalTorsionFree | SingularPointDual


@dataclass(frozen=True)
class SubsheafOnSubcurve:
    """The maximal subsheaf of a line bundle supported on a subcurve D.

    For a line bundle L with the given multidegree, this is the kernel
    of the map from L onto its restriction to the complement of D.
    """

    degrees: tuple[int, ...]
    sub: Subcurve


@dataclass(frozen=True)
class HilbertData:
    """Polarized rank, polarized degree and slope, all exact rationals."""

    rank: Fraction
    degree: Fraction
    slope: Fraction


def hilbert_polynomial_value(data: HilbertData, n: int, h: int) -> Fraction:
    """Evaluate P(n) = h * rank * n + degree (the chi(O_C) term is zero)."""
    return h * data.rank * n + data.degree


class StabilityClass(Enum):
    STABLE = "Stable"
    STRICTLY_SEMISTABLE = "StrictlySemistable"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class StabilityVerdict:
    """Classification outcome; the oracle also reports a witness subcurve.

    The witness is a subcurve whose restricted subsheaf attains the
    maximal Euler characteristic: zero for a strictly semistable class,
    positive for an unstable one.  The combinatorial rule is
    witness-free and leaves the field empty.
    """

    verdict: StabilityClass
    witness: Subcurve | None = None

    @property
    def is_semistable(self) -> bool:
        return self.verdict is not StabilityClass.UNSTABLE


@dataclass(frozen=True)
class GradedObject:
    """Multiset of Jordan-Holder factors.

    A stable class is its own single factor (``stable_factor``); a
    strictly semistable degree-0 class on a reducible fiber collapses to
    one degree -1 factor on every component, recorded as (component
    index, degree) pairs.
    """

    stable_factor: SheafClass | None
    factors: tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# Input coercion and validation.


def _coerce_degrees(
    graph: FiberGraph,
    degrees: MultiDegree | Sequence[int],
    *,
    require_reducible: bool = True,
) -> tuple[int, ...]:
    if isinstance(degrees, MultiDegree):
        vec = degrees.degrees
    else:
        vec = tuple(int(d) for d in degrees)
    if len(vec) != graph.n:
        raise DegreeVectorError(
            f"multidegree has {len(vec)} entries but {graph.kodaira.label} has "
            f"{graph.n} components"
        )
    if sum(vec) != 0:
        raise DegreeVectorError(f"total degree must be 0, got {sum(vec)}")
    if require_reducible and not graph.is_reducible:
        raise IrreducibleFiberError(
            "classification on an irreducible fiber is trivial: every rank-1 "
            "degree-0 class is stable"
        )
    return vec


def _coerce_polarization(graph: FiberGraph, pol: Polarization | Sequence[int] | None) -> Polarization:
    if pol is None:
        return Polarization.ones(graph.n)
    if not isinstance(pol, Polarization):
        pol = Polarization(tuple(int(w) for w in pol))
    if len(pol.weights) != graph.n:
        raise StabilityError(
            f"polarization has {len(pol.weights)} weights but the fiber has {graph.n} components"
        )
    return pol


def _validate_sheaf(graph: FiberGraph, sheaf: SheafClass) -> None:
    if isinstance(sheaf, LineBundle):
        if len(sheaf.degrees) != graph.n:
            raise StabilityError(
                f"line bundle multidegree has {len(sheaf.degrees)} entries for a "
                f"{graph.n}-component fiber"
            )
        return
    if isinstance(sheaf, NodalTorsionFree):
        k = graph.kodaira
        if k.symbol != "I":
            raise UnsupportedSheafError(
                f"nodal torsion-free classes live on I_N fibers, not {k.label}"
            )
        if not 0 <= sheaf.node < k.n:
            raise StabilityError(f"node index {sheaf.node} out of range for {k.label}")
        if len(sheaf.pullback_degrees) != graph.n:
            raise StabilityError(
                "pullback multidegree must have one entry per component of the "
                "partial normalization"
            )
        return
    if isinstance(sheaf, SingularPointDual):
        expected = {"cusp": "II", "tacnode": "III", "triple": "IV"}[sheaf.tag]
        if graph.kodaira.label != expected:
            raise UnsupportedSheafError(
                f"a {sheaf.tag!r} class lives on a type {expected} fiber, not "
                f"{graph.kodaira.label}"
            )
        return
    raise UnsupportedSheafError(f"unrecognized sheaf class {sheaf!r}")


# ---------------------------------------------------------------------------
# Hilbert data.


def hilbert_data(
    graph: FiberGraph,
    pol: Polarization | Sequence[int] | None,
    sheaf: SheafClass | MultiDegree | SubsheafOnSubcurve,
) -> HilbertData:
    """Polarized rank, degree and slope of a supported sheaf datum.

    Full-support rank-1 classes have rank 1 and degree equal to their
    total multidegree (zero for the moduli problem at hand).  For the
    maximal subsheaf of a line bundle supported on a proper subcurve D,
    the degree is deg_D - D.Dbar + chi(O_D) and the rank is h_D / h.
    Rank-0 (skyscraper-supported) inputs are rejected: they are not of
    pure dimension one.
    """
    pol = _coerce_polarization(graph, pol)
    h = pol.total
    if isinstance(sheaf, SubsheafOnSubcurve):
        if len(sheaf.degrees) != graph.n:
            raise StabilityError("ambient multidegree length does not match the fiber")
        idx = sheaf.sub.indices
        if not idx:
            raise StabilityError("rank-0 input: a subsheaf needs one-dimensional support")
        if any(i < 0 or i >= graph.n for i in idx):
            raise StabilityError(f"support indices {idx} out of range for the fiber")
        chi = _restricted_chi(graph, sheaf.degrees, idx, sheaf.sub.connected)
        h_d = sum(pol.weights[i] for i in idx)
        rank = Fraction(h_d, h)
        degree = Fraction(chi)
        return HilbertData(rank=rank, degree=degree, slope=degree / rank)
    if isinstance(sheaf, MultiDegree):
        if len(sheaf.degrees) != graph.n:
            raise StabilityError("multidegree length does not match the fiber")
        total = Fraction(sheaf.total)
        return HilbertData(rank=Fraction(1), degree=total, slope=total)
    _validate_sheaf(graph, sheaf)
    return HilbertData(rank=Fraction(1), degree=Fraction(0), slope=Fraction(0))


def _restricted_chi(
    graph: FiberGraph, degrees: tuple[int, ...], idx: tuple[int, ...], connected: bool
) -> int:
    """chi of the maximal subsheaf of a line bundle supported on ``idx``.

    chi = deg_D - D.Dbar + chi(O_D); for a disconnected D both the
    boundary and chi(O_D) split over the maximal connected pieces.
    """
    deg = sum(degrees[i] for i in idx)
    inside = set(idx)
    bnd = sum(graph.pairwise(i, j) for i in idx for j in range(graph.n) if j not in inside)
    if connected:
        internal = sum(graph.pairwise(i, j) for i, j in combinations(idx, 2))
        chi_struct = len(idx) - internal
    else:
        chi_struct = 0
        for piece in connected_pieces(graph, idx):
            internal = sum(graph.pairwise(i, j) for i, j in combinations(piece, 2))
            chi_struct += len(piece) - internal
    return deg - bnd + chi_struct


# ---------------------------------------------------------------------------
# Route one: the combinatorial rule.


def _cycle_orders(graph: FiberGraph) -> tuple[tuple[int, ...], ...]:
    # For IV the components pass through one common point and carry no
    # intrinsic cyclic order, so the rule is evaluated on both distinct
    # cyclic arrangements of the three components and must agree.
    if graph.kodaira.symbol == "IV":
        return ((0, 1, 2), (0, 2, 1))
    return (tuple(range(graph.n)),)


def _no_equal_cyclic_neighbors(values: list[int]) -> bool:
    size = len(values)
    return all(values[k] != values[(k + 1) % size] for k in range(size))


def classify_by_rule(
    graph: FiberGraph, degrees: MultiDegree | Sequence[int]
) -> StabilityVerdict:
    """Classify a degree-0 line bundle class by the cyclic-word criterion.

    Stable iff the multidegree is zero.  Strictly semistable iff every
    entry lies in {-1, 0, 1} and, after deleting the zero entries in the
    cyclic component order, no two adjacent entries are equal.  Unstable
    otherwise.  Produces no witness; use :func:`oracle_classify` for one.
    """
    vec = _coerce_degrees(graph, degrees)
    if all(v == 0 for v in vec):
        return StabilityVerdict(StabilityClass.STABLE)
    if any(abs(v) > 1 for v in vec):
        return StabilityVerdict(StabilityClass.UNSTABLE)
    outcomes = set()
    for order in _cycle_orders(graph):
        word = [vec[i] for i in order if vec[i] != 0]
        outcomes.add(_no_equal_cyclic_neighbors(word))
    if len(outcomes) != 1:
        raise StabilityError(
            f"cyclic orderings disagree on {vec}; the subcurve oracle is authoritative"
        )
    if outcomes.pop():
        return StabilityVerdict(StabilityClass.STRICTLY_SEMISTABLE)
    return StabilityVerdict(StabilityClass.UNSTABLE)


# ---------------------------------------------------------------------------
# Route two: the subcurve oracle.


@lru_cache(maxsize=None)
def _destabilizer_stats(
    graph: FiberGraph, include_disconnected: bool
) -> tuple[tuple[tuple[int, ...], int, int], ...]:
    """Per candidate subcurve: (indices, boundary degree, chi(O_D))."""
    stats = []
    if include_disconnected:
        candidates = [
            combo
            for size in range(1, graph.n)
            for combo in combinations(range(graph.n), size)
        ]
        candidates.sort()
    else:
        candidates = [s.indices for s in proper_connected_subcurves(graph)]
    for idx in candidates:
        inside = set(idx)
        bnd = sum(
            graph.pairwise(i, j) for i in idx for j in range(graph.n) if j not in inside
        )
        chi_struct = 0
        for piece in connected_pieces(graph, idx):
            internal = sum(graph.pairwise(i, j) for i, j in combinations(piece, 2))
            chi_struct += len(piece) - internal
        stats.append((idx, bnd, chi_struct))
    return tuple(stats)


def oracle_classify(
    graph: FiberGraph,
    pol: Polarization | Sequence[int] | None,
    degrees: MultiDegree | Sequence[int],
    *,
    include_disconnected: bool = False,
) -> StabilityVerdict:
    """Classify by exhausting candidate destabilizing subcurves.

    Every proper connected subcurve D contributes the subsheaf L_D with
    chi_D = deg_D - D.Dbar + chi(O_D) and slope chi_D * h / h_D.  The
    verdict compares the maximal slope with the slope zero of the class
    itself; the witness is the first subcurve attaining the maximal
    chi_D, in lexicographic order.  With ``include_disconnected`` the
    search also covers disconnected candidates.
    """
    vec = _coerce_degrees(graph, degrees)
    pol = _coerce_polarization(graph, pol)
    h = pol.total
    best_chi: int | None = None
    best_idx: tuple[int, ...] | None = None
    for idx, bnd, chi_struct in _destabilizer_stats(graph, include_disconnected):
        chi = sum(vec[i] for i in idx) - bnd + chi_struct
        if best_chi is None or chi > best_chi:
            best_chi = chi
            best_idx = idx
    assert best_chi is not None and best_idx is not None
    # slope of the extremal subsheaf is best_chi * h / h_D with h_D > 0,
    # so its sign against the ambient slope 0 is the sign of best_chi * h.
    extremal_slope_numerator = best_chi * h
    if extremal_slope_numerator > 0:
        return StabilityVerdict(StabilityClass.UNSTABLE, subcurve(graph, best_idx))
    if extremal_slope_numerator == 0:
        return StabilityVerdict(StabilityClass.STRICTLY_SEMISTABLE, subcurve(graph, best_idx))
    return StabilityVerdict(StabilityClass.STABLE)


# ---------------------------------------------------------------------------
# Classification of the non-locally-free families.

_STABLE = StabilityVerdict(StabilityClass.STABLE)
_SEMISTABLE = StabilityVerdict(StabilityClass.STRICTLY_SEMISTABLE)


def classify_sheaf(graph: FiberGraph, sheaf: SheafClass) -> StabilityVerdict:
    """Classify a rank-1 degree-0 sheaf class of any supported variant.

    Line bundles go through :func:`classify_by_rule`.  On an integral
    fiber every rank-1 torsion-free class is stable.  The twisted-ideal
    classes at singular points (pullback degrees -1 on one component and
    0 elsewhere) are strictly semistable on reducible fibers; nodal
    classes outside that family are rejected rather than guessed at.
    """
    _validate_sheaf(graph, sheaf)
    if isinstance(sheaf, LineBundle):
        if not graph.is_reducible:
            return _STABLE
        return classify_by_rule(graph, sheaf.degrees)
    if isinstance(sheaf, NodalTorsionFree):
        if not graph.is_reducible:
            return _STABLE
        if sorted(sheaf.pullback_degrees) != [-1] + [0] * (graph.n - 1):
            raise UnsupportedSheafError(
                f"pullback degrees {sheaf.pullback_degrees} fall outside the "
                "point-extension family; only those classes are classified"
            )
        return _SEMISTABLE
    # SingularPointDual: stable on the integral cuspidal fiber, strictly
    # semistable on III and IV.
    if sheaf.tag == "cusp":
        return _STABLE
    return _SEMISTABLE


# ---------------------------------------------------------------------------
# Jordan-Holder data and S-equivalence.


def graded_object(
    graph: FiberGraph, cls: SheafClass | MultiDegree | Sequence[int]
) -> GradedObject:
    """Jordan-Holder graded object of a semistable class.

    A stable class is its own filtration.  Every strictly semistable
    rank-1 degree-0 class on a reducible fiber degenerates to the same
    graded object, one degree -1 line bundle on each component.
    Unstable input is rejected.
    """
    if isinstance(cls, (LineBundle, NodalTorsionFree, SingularPointDual)):
        sheaf: SheafClass = cls
        verdict = classify_sheaf(graph, sheaf)
    else:
        vec = _coerce_degrees(graph, cls, require_reducible=False)
        sheaf = LineBundle(vec)
        verdict = classify_sheaf(graph, sheaf)
    if verdict.verdict is StabilityClass.UNSTABLE:
        raise NotSemistableError(
            "graded object requested for an unstable class; it has no "
            "Jordan-Holder filtration in the moduli problem"
        )
    if verdict.verdict is StabilityClass.STABLE:
        return GradedObject(stable_factor=sheaf, factors=())
    return GradedObject(
        stable_factor=None, factors=tuple((i, -1) for i in range(graph.n))
    )


def s_equivalent(
    graph: FiberGraph,
    a: GradedObject | SheafClass | MultiDegree | Sequence[int],
    b: GradedObject | SheafClass | MultiDegree | Sequence[int],
) -> bool:
    """Whether two semistable classes have equal graded objects.

    Stable classes compare by multidegree / variant equality; strictly
    semistable classes compare by their factor multisets, which on a
    fixed fiber always coincide.
    """
    ga = a if isinstance(a, GradedObject) else graded_object(graph, a)
    gb = b if isinstance(b, GradedObject) else graded_object(graph, b)
    return ga == gb


# ---------------------------------------------------------------------------
# Exhaustive stratification.


def iter_degree_vectors(n: int, bound: int) -> Iterator[tuple[int, ...]]:
    """All integer vectors with entries in [-bound, bound] summing to zero.

    Yielded in lexicographic order: the first n-1 coordinates sweep the
    box and determine the last one.
    """
    if n < 1:
        return
    if n == 1:
        yield (0,)
        return
    for head in product(range(-bound, bound + 1), repeat=n - 1):
        last = -sum(head)
        if -bound <= last <= bound:
            yield head + (last,)


@dataclass
class StratificationReport:
    """Rule and oracle verdicts over a full multidegree box.

    ``counts`` and ``vectors`` are keyed by the oracle verdicts;
    ``rule_counts`` records the rule's tally, which matches exactly when
    ``disagreements`` is empty.
    """

    fiber: str
    bound: int
    polarization: tuple[int, ...]
    mode: str
    counts: dict[str, int]
    rule_counts: dict[str, int]
    vectors: dict[str, list[tuple[int, ...]]]
    disagreements: list[dict]

    def to_json(self) -> dict:
        return {
            "fiber": self.fiber,
            "bound": self.bound,
            "polarization": list(self.polarization),
            "mode": self.mode,
            "counts": dict(self.counts),
            "rule_counts": dict(self.rule_counts),
            "vectors": {k: [list(v) for v in vs] for k, vs in self.vectors.items()},
            "disagreements": list(self.disagreements),
        }


def enumerate_stratification(
    graph: FiberGraph,
    bound: int,
    pol: Polarization | Sequence[int] | None = None,
    *,
    include_disconnected: bool = False,
    cap: int = 10_000_000,
) -> StratificationReport:
    """Sweep the |d_i| <= bound, sum-zero box through both classifiers.

    Returns per-verdict counts and vector lists (oracle verdicts,
    lexicographically ordered by construction) together with the list of
    rule/oracle disagreements, which is expected to be empty.  Refuses
    boxes larger than ``cap`` vectors.
    """
    if bound < 1:
        raise StabilityError(f"bound must be >= 1, got {bound}")
    if not graph.is_reducible:
        raise IrreducibleFiberError(
            "stratification is only meaningful on reducible fibers"
        )
    pol = _coerce_polarization(graph, pol)
    space = (2 * bound + 1) ** graph.n
    if space > cap:
        raise SearchSpaceError(
            f"search space of {space} vectors exceeds the cap of {cap}; "
            f"rerun with cap >= {space}"
        )
    names = [c.value for c in StabilityClass]
    counts = {name: 0 for name in names}
    rule_counts = {name: 0 for name in names}
    vectors: dict[str, list[tuple[int, ...]]] = {name: [] for name in names}
    disagreements: list[dict] = []
    for vec in iter_degree_vectors(graph.n, bound):
        rule = classify_by_rule(graph, vec).verdict
        oracle = oracle_classify(
            graph, pol, vec, include_disconnected=include_disconnected
        ).verdict
        counts[oracle.value] += 1
        rule_counts[rule.value] += 1
        vectors[oracle.value].append(vec)
        if rule is not oracle:
            disagreements.append(
                {"vector": list(vec), "rule": rule.value, "oracle": oracle.value}
            )
    return StratificationReport(
        fiber=graph.kodaira.label,
        bound=bound,
        polarization=pol.weights,
        mode="exhaustive" if include_disconnected else "connected",
        counts=counts,
        rule_counts=rule_counts,
        vectors=vectors,
        disagreements=disagreements,
    )
