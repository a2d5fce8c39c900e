"""Weierstrass families over a one-parameter base, with exact arithmetic.

A family y^2 = x^3 + a(t) x + b(t) with rational polynomial
coefficients determines the usual invariants

    c4 = -48 a,   c6 = -864 b,   disc = -16 (4 a^3 + 27 b^2),

which satisfy c4^3 - c6^2 = 1728 disc identically.  The fiber type at a
base point is read off the vanishing orders of c4 and disc there:

    v(disc) = 0                  -> smooth
    v(c4) = 0, v(disc) = N >= 1  -> I_N
    v(c4) >= 1, v(disc) = 2      -> II
    v(c4) = 1,  v(disc) = 3      -> III
    v(c4) >= 2, v(disc) = 4      -> IV

Everything else is outside the supported (reduced, unstarred) list and
reported as unsupported; v(c4) >= 4 together with v(disc) >= 12 means
the model is not minimal at the point and is rejected with guidance
rather than silently rescaled.

Discriminant points are located exactly: the discriminant polynomial is
factored over the rationals, linear factors give rational base points
and higher-degree irreducible factors are classified at their (not
rationally expressible) roots through polynomial divisibility.  No
floating point or numeric root finding is involved anywhere.

Polynomial arithmetic and factorization are delegated to sympy;
coefficients enter and leave as ``fractions.Fraction`` values.

Weierstrass families never carry multiple fibers, so no multiplicity
check is needed before handing a scan to the moduli report.
"""

from __future__ import annotations

import json
import math

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import sympy

from .fibers import KodairaType
from .jacobian import FiberEntry, FibrationDescription

T = sympy.Symbol("t")

#: Valuation of the zero polynomial.
INFINITE_VALUATION = math.inf


class ModelError(ValueError):
    """Invalid Weierstrass model input."""


class IsotriviallySingularError(ModelError):
    """The discriminant vanishes identically: every fiber is singular."""


class NonMinimalModelError(ModelError):
    """The model is non-minimal at a point (v(c4) >= 4 and v(disc) >= 12)."""


Coeffs = tuple[Fraction, ...]


def _normalize(coeffs: Sequence[Fraction | int | str]) -> Coeffs:
    vals = [Fraction(c) for c in coeffs] or [Fraction(0)]
    while len(vals) > 1 and vals[-1] == 0:
        vals.pop()
    return tuple(vals)


def to_poly(coeffs: Sequence[Fraction | int | str]) -> sympy.Poly:
    """Coefficient list (constant term first) to a sympy polynomial in t."""
    vals = [sympy.Rational(Fraction(c)) for c in coeffs] or [sympy.Rational(0)]
    return sympy.Poly(list(reversed(vals)), T, domain="QQ")


def from_poly(poly: sympy.Poly) -> Coeffs:
    """Sympy polynomial back to a Fraction coefficient list, constant first."""
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return _normalize(coeffs)


@dataclass(frozen=True)
class WeierstrassModel:
    """Short form y^2 = x^3 + a(t) x + b(t), exact rational coefficients."""

    a: Coeffs
    b: Coeffs

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _normalize(self.a))
        object.__setattr__(self, "b", _normalize(self.b))

    @classmethod
    def from_long_form(
        cls,
        a1: Sequence[Fraction | int | str],
        a2: Sequence[Fraction | int | str],
        a3: Sequence[Fraction | int | str],
        a4: Sequence[Fraction | int | str],
        a6: Sequence[Fraction | int | str],
    ) -> "WeierstrassModel":
        """Convert a long Weierstrass family to the short form.

        Completing the square and the cube replaces (a1, ..., a6) by the
        model y^2 = x^3 - 27 c4 x - 54 c6, a constant rescaling of the
        original family; vanishing orders of the invariants, and hence
        fiber types, are unchanged.
        """
        p1, p2, p3, p4, p6 = (to_poly(c) for c in (a1, a2, a3, a4, a6))
        b2 = p1 * p1 + 4 * p2
        b4 = 2 * p4 + p1 * p3
        b6 = p3 * p3 + 4 * p6
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return cls(a=from_poly(-27 * c4), b=from_poly(-54 * c6))

    def to_json(self) -> dict:
        return {"a": [str(c) for c in self.a], "b": [str(c) for c in self.b]}


def invariants(model: WeierstrassModel) -> tuple[Coeffs, Coeffs, Coeffs]:
    """The invariants (c4, c6, disc) of the family, as coefficient lists.

    Raises :class:`IsotriviallySingularError` when the discriminant is
    identically zero.
    """
    a = to_poly(model.a)
    b = to_poly(model.b)
    c4 = -48 * a
    c6 = -864 * b
    disc = -16 * (4 * a ** 3 + 27 * b ** 2)
    if disc.is_zero:
        raise IsotriviallySingularError(
            "the discriminant vanishes identically; the family is singular "
            "over every base point"
        )
    return from_poly(c4), from_poly(c6), from_poly(disc)


def valuation(poly: Sequence[Fraction | int | str] | sympy.Poly, t0: Fraction | int | str):
    """Order of vanishing of a polynomial at t = t0.

    Returns a non-negative integer, or ``INFINITE_VALUATION`` for the
    zero polynomial.
    """
    p = poly if isinstance(poly, sympy.Poly) else to_poly(poly)
    if p.is_zero:
        return INFINITE_VALUATION
    shifted = p.shift(sympy.Rational(Fraction(t0)))
    order = 0
    for c in reversed(shifted.all_coeffs()):
        if c == 0:
            order += 1
        else:
            break
    return order


def _factor_order(poly: sympy.Poly, factor: sympy.Poly):
    """Number of times an irreducible factor divides a polynomial."""
    if poly.is_zero:
        return INFINITE_VALUATION
    order = 0
    while True:
        quotient, remainder = poly.div(factor)
        if not remainder.is_zero:
            return order
        poly = quotient
        order += 1


@dataclass(frozen=True)
class ReductionData:
    """Vanishing orders of c4 and the discriminant at one base point.

    ``t0`` is the rational base point, or ``None`` when the data comes
    from an irreducible factor with no rational root.
    """

    v_c4: int | float
    v_delta: int
    t0: Fraction | None = None


def reduction_at(model: WeierstrassModel, t0: Fraction | int | str) -> ReductionData:
    c4, _, disc = invariants(model)
    point = Fraction(t0)
    return ReductionData(
        v_c4=valuation(c4, point), v_delta=valuation(disc, point), t0=point
    )


@dataclass(frozen=True)
class UnsupportedReduction:
    """Valuation pattern outside the supported fiber list."""

    reason: str
    v_c4: int | float
    v_delta: int


def classify_reduction(data: ReductionData) -> KodairaType | UnsupportedReduction:
    """Fiber type from the vanishing orders, assuming a minimal model.

    Returns the Kodaira type for the supported patterns, an
    :class:`UnsupportedReduction` for patterns outside the reduced
    unstarred list, and raises :class:`NonMinimalModelError` when the
    model is visibly non-minimal at the point.
    """
    v_c4, v_delta = data.v_c4, data.v_delta
    if v_c4 >= 4 and v_delta >= 12:
        raise NonMinimalModelError(
            f"non-minimal model at the point (v_c4 = {v_c4}, v_disc = {v_delta}); "
            "rescale (a, b) -> (u^-4 a, u^-6 b) with v(u) = 1 before classifying"
        )
    if v_delta == 0:
        return KodairaType("smooth")
    if v_c4 == 0:
        return KodairaType("I", v_delta)
    if v_delta == 2:
        return KodairaType("II")
    if v_delta == 3 and v_c4 == 1:
        return KodairaType("III")
    if v_delta == 4 and v_c4 >= 2:
        return KodairaType("IV")
    return UnsupportedReduction(
        reason=(
            f"valuations (v_c4 = {v_c4}, v_disc = {v_delta}) correspond to a "
            "non-reduced or starred fiber type, outside the supported list"
        ),
        v_c4=v_c4,
        v_delta=v_delta,
    )


def scan_discriminant(model: WeierstrassModel) -> FibrationDescription:
    """Locate and classify every discriminant point of the family.

    The discriminant is factored over the rationals.  Linear factors
    give rational base points, labeled ``t=r`` and sorted by r;
    higher-degree irreducible factors are labeled by the factor and
    classified through divisibility (the multiplicity of the factor in
    the discriminant and in c4).  Unsupported or non-minimal points
    become per-point error entries so the rest of the scan survives.
    """
    c4_coeffs, _, disc_coeffs = invariants(model)
    c4 = to_poly(c4_coeffs)
    disc = to_poly(disc_coeffs)
    _, factors = disc.factor_list()
    rational: list[tuple[Fraction, FiberEntry]] = []
    irrational: list[tuple[tuple[int, str], FiberEntry]] = []
    for factor, multiplicity in factors:
        if factor.degree() == 1:
            lead, const = (Fraction(int(c.p), int(c.q)) for c in factor.all_coeffs())
            root = -const / lead
            label = f"t={root}"
            data = ReductionData(v_c4=valuation(c4, root), v_delta=multiplicity, t0=root)
            rational.append((root, _classified_entry(label, data)))
        else:
            expr = str(factor.as_expr())
            label = f"root of ({expr})"
            data = ReductionData(v_c4=_factor_order(c4, factor), v_delta=multiplicity)
            irrational.append(((factor.degree(), expr), _classified_entry(label, data)))
    rational.sort(key=lambda item: item[0])
    irrational.sort(key=lambda item: item[0])
    entries = [e for _, e in rational] + [e for _, e in irrational]
    return FibrationDescription(base_dim=1, points=tuple(entries))


def _classified_entry(label: str, data: ReductionData) -> FiberEntry:
    try:
        outcome = classify_reduction(data)
    except NonMinimalModelError as exc:
        return FiberEntry(label=label, error=f"NonMinimalModel: {exc}")
    if isinstance(outcome, UnsupportedReduction):
        return FiberEntry(label=label, error=f"Unsupported: {outcome.reason}")
    return FiberEntry(label=label, fiber=outcome)


# ---------------------------------------------------------------------------
# Model files.
#
# JSON: {"a": ["0"], "b": ["0", "1"]} encodes (a, b) = (0, t); coefficient
# lists run from the constant term up and entries are exact rationals
# written as strings ("3/4") or integers.  The long form is accepted as
# {"a_invariants": {"a1": [...], ..., "a6": [...]}}.  TOML files with the
# same keys are accepted too.


def parse_model(obj: dict) -> WeierstrassModel:
    if not isinstance(obj, dict):
        raise ModelError(f"model description must be an object, got {type(obj).__name__}")
    if "a_invariants" in obj:
        extra = set(obj) - {"a_invariants"}
        if extra:
            raise ModelError(f"unknown fields {sorted(extra)} next to 'a_invariants'")
        inv = obj["a_invariants"]
        required = ("a1", "a2", "a3", "a4", "a6")
        if not isinstance(inv, dict) or set(inv) != set(required):
            raise ModelError(f"'a_invariants' must be an object with keys {required}")
        try:
            return WeierstrassModel.from_long_form(*(_coeff_list(inv[k], k) for k in required))
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"bad coefficient in 'a_invariants': {exc}") from exc
    extra = set(obj) - {"a", "b"}
    if extra:
        raise ModelError(f"unknown fields {sorted(extra)}; allowed: 'a', 'b' or 'a_invariants'")
    if "a" not in obj or "b" not in obj:
        raise ModelError("model description needs both 'a' and 'b' coefficient lists")
    return WeierstrassModel(a=_coeff_list(obj["a"], "a"), b=_coeff_list(obj["b"], "b"))


def _coeff_list(value, field: str) -> Coeffs:
    if not isinstance(value, list):
        raise ModelError(f"field {field!r} must be a list of coefficients")
    out = []
    for i, c in enumerate(value):
        if isinstance(c, bool) or not isinstance(c, (int, str)):
            raise ModelError(
                f"field {field!r}[{i}]: coefficients are integers or rational "
                f"strings like '3/4', got {c!r}"
            )
        try:
            out.append(Fraction(c))
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"field {field!r}[{i}]: {exc}") from exc
    return _normalize(out)


def load_model(path: str | Path) -> WeierstrassModel:
    path = Path(path)
    if path.suffix == ".toml":
        try:
            obj = tomllib.loads(path.read_text())
        except tomllib.TOMLDecodeError as exc:
            raise ModelError(f"{path}: invalid TOML: {exc}") from exc
    else:
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ModelError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    return parse_model(obj)
