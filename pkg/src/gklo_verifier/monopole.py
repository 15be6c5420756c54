"""Dressed minuscule monopole operators.

Two independent constructions: the closed forms, which are the production path,
and a weight-enumeration Euler class oracle used to cross-check them.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cache

from .difference import DiffOperator, ShiftMonomial
from .errors import ConventionUnresolved, IndexOutOfRange
from .gklo import HALF, FamilySpec, GkloFamily
from .quiver import DimensionData, aiii, parity_sign
from .symbolic import LinearForm, RationalFunction, Scalar, Variable, to_fraction

logger = logging.getLogger(__name__)

Dressing = Callable[[LinearForm], RationalFunction]

TAU_EDGE_SHIFT = Fraction(3, 2)


def power_dressing(scale: Scalar = 1, hbar_shift: Scalar = 0, exponent: int = 0) -> Dressing:
    """x -> (scale * x + hbar_shift * hbar) ** exponent."""

    def dressing(x: LinearForm) -> RationalFunction:
        return (x * scale + x.alphabet.hbar * hbar_shift) ** exponent

    return dressing


def unit_dressing(x: LinearForm) -> RationalFunction:
    return x.alphabet.one


class WeightOrigin(str, Enum):
    EDGE = "edge"
    SYMMETRIC_SQUARE = "symmetric-square"
    FRAMING = "framing"


@dataclass(frozen=True)
class WeightDatum:
    form: LinearForm
    origin: WeightOrigin
    source: tuple[int, ...]


@dataclass(frozen=True)
class MinusculeDatum:
    """The coweight eps_{i,1} (sign +1) or -eps_{i,v_i} (sign -1) for i in Q0+.

    Its torus fixed point sits at slot 1 or v_i; the other slots are the Weyl translates
    summed over by the localization formula.
    """

    vertex: int
    sign: int = 1

    @property
    def coweight(self) -> str:
        return f"eps[{self.vertex},1]" if self.sign > 0 else f"-eps[{self.vertex},v]"

    def fixed_point_slot(self, family: GkloFamily) -> int:
        return 1 if self.sign > 0 else family.dim_v(self.vertex)

    def describe(self, family: GkloFamily) -> str:
        prefix = "" if self.sign > 0 else "-"
        return f"{prefix}eps[{self.vertex},{self.fixed_point_slot(family)}]"


@dataclass(frozen=True)
class EulerConvention:
    twist: Fraction = HALF
    loop_sign: int = 1
    tangent_side: int = 1

    def __str__(self) -> str:
        return f"twist={self.twist}, loop_sign={self.loop_sign:+d}, tangent_side={self.tangent_side:+d}"


CONVENTION_FAMILY = tuple(
    EulerConvention(twist, loop_sign, tangent_side)
    for twist in (HALF, -HALF)
    for loop_sign in (1, -1)
    for tangent_side in (1, -1)
)


def _require_plus(family: GkloFamily, i: int) -> None:
    if not family.quiver.is_plus(i):
        raise IndexOutOfRange(f"vertex {i} is not in Q0+")


def closed_form_plus(family: GkloFamily, i: int, f: Dressing = unit_dressing) -> DiffOperator:
    """f(c_1(Q_i)) on the eps_{i,1} cell."""
    _require_plus(family, i)
    hbar = family.hbar
    quiver = family.quiver
    ti = family.tau(i)
    terms = []
    for r in family.slots(i):
        x = family.x(i, r)
        numerator: list[LinearForm] = []
        sign = 1
        for h in quiver.edges_from(i):
            t = h[1]
            if quiver.is_fixed(h):
                sign *= parity_sign(family.dim_v(i) - 1)
                numerator.append(2 * x + hbar * TAU_EDGE_SHIFT)
            else:
                sign *= parity_sign(family.dim_v(t))
            numerator.extend(family.build_V(t).factors(x + hbar * HALF))
        numerator.extend(family.build_W(ti).factors(family.x(ti, r) - hbar * HALF))
        denominator = family.build_V_punctured(i, r).factors(x)
        coeff = f(x) * RationalFunction.from_factors(family.alphabet, numerator, denominator, sign)
        terms.append((family.torus.d(i, r), coeff))
    return DiffOperator(family.torus, terms)


def closed_form_minus(family: GkloFamily, i: int, f: Dressing = unit_dressing) -> DiffOperator:
    """f(c_1(S_i)) on the -eps_{i,v_i} cell."""
    _require_plus(family, i)
    hbar = family.hbar
    quiver = family.quiver
    ti = family.tau(i)
    v_i = family.dim_v(i)
    terms = []
    for r in family.slots(i):
        x = family.x(i, r)
        x_mirror = family.x(ti, r)
        numerator: list[LinearForm] = []
        sign = parity_sign(v_i - 1)
        for h in quiver.edges_from(ti):
            if not quiver.is_fixed(h):
                sign *= parity_sign(family.dim_v(h[1]))
                numerator.extend(family.build_V(h[1]).factors(x_mirror + hbar * HALF))
        for h in quiver.edges_into(i):
            if quiver.is_fixed(h):
                sign *= parity_sign(v_i)
                numerator.append(2 * x - hbar * TAU_EDGE_SHIFT)
                numerator.extend(family.build_V(i).factors(x_mirror + hbar * HALF))
        numerator.extend(family.build_W(i).factors(x - hbar * HALF))
        denominator = family.build_V_punctured(i, r).factors(x)
        coeff = f(x - hbar) * RationalFunction.from_factors(family.alphabet, numerator, denominator, sign)
        terms.append((family.torus.d(i, r, -1), coeff))
    return DiffOperator(family.torus, terms)


def theorem_image(family: GkloFamily, i: int, m: int) -> DiffOperator:
    """The dressed monopole that should equal B_{i,m}."""
    sign = family.cartan.theorem_sign(i)
    if family.quiver.is_plus(i):
        image = closed_form_plus(family, i, power_dressing(-1, -HALF, m))
    else:
        image = closed_form_minus(family, family.tau(i), power_dressing(1, HALF, m))
    return image * sign


def matter_weights(family: GkloFamily, twist: Scalar = HALF) -> tuple[WeightDatum, ...]:
    hbar = family.hbar
    quiver = family.quiver
    weights: list[WeightDatum] = []
    for s, t in quiver.plus_edges:
        for a in family.slots(s):
            for b in family.slots(t):
                form = family.x(t, b) - family.x(s, a) + hbar * twist
                weights.append(WeightDatum(form, WeightOrigin.EDGE, (s, t)))
    for s, t in quiver.fixed_edges:
        for a in family.slots(t):
            for b in range(a, family.dim_v(t) + 1):
                form = family.x(t, a) + family.x(t, b) + hbar * twist
                weights.append(WeightDatum(form, WeightOrigin.SYMMETRIC_SQUARE, (s, t)))
    for j in family.vertices:
        for a in family.slots(j):
            for k in range(1, family.dims.dim_w(j) + 1):
                form = family.x(j, a) - family.torus.w(j, k) + hbar * twist
                weights.append(WeightDatum(form, WeightOrigin.FRAMING, (j,)))
    return tuple(weights)


def tangent_roots(family: GkloFamily) -> tuple[LinearForm, ...]:
    roots = []
    for i in family.quiver.plus_vertices:
        for a in family.slots(i):
            for b in family.slots(i):
                if a != b:
                    roots.append(family.x(i, a) - family.x(i, b))
    return tuple(roots)


def _pairing(form: LinearForm, datum: MinusculeDatum, r: int) -> int:
    coeff = to_fraction(form.coefficient(Variable.x(datum.vertex, r)))
    return datum.sign * int(coeff)


def euler_oracle(
    family: GkloFamily,
    datum: MinusculeDatum,
    f: Dressing = unit_dressing,
    convention: EulerConvention | None = None,
) -> DiffOperator:
    """Localization formula: sum over the fixed points of the minuscule cell."""
    _require_plus(family, datum.vertex)
    convention = convention or pin_convention()
    hbar = family.hbar
    weights = matter_weights(family, convention.twist)
    roots = tangent_roots(family)
    terms = []
    for r in family.slots(datum.vertex):
        numerator: list[LinearForm] = []
        for weight in weights:
            n = _pairing(weight.form, datum, r)
            for k in range(n, 0):
                numerator.append(weight.form + hbar * (convention.loop_sign * k))
        denominator = [root for root in roots if _pairing(root, datum, r) * convention.tangent_side > 0]
        x = family.x(datum.vertex, r)
        line = x if datum.sign > 0 else x - hbar
        coeff = f(line) * RationalFunction.from_factors(family.alphabet, numerator, denominator)
        terms.append((family.torus.d(datum.vertex, r, datum.sign), coeff))
    return DiffOperator(family.torus, terms)


def closed_form(family: GkloFamily, datum: MinusculeDatum, f: Dressing = unit_dressing) -> DiffOperator:
    if datum.sign > 0:
        return closed_form_plus(family, datum.vertex, f)
    return closed_form_minus(family, datum.vertex, f)


PINNING_SPEC = FamilySpec(aiii(1), DimensionData.build({1: 2, 2: 2}, {1: 1, 2: 1}))


@cache
def pin_convention() -> EulerConvention:
    """The first convention reproducing both closed forms on the smallest instance."""
    family = PINNING_SPEC.build()
    data = [MinusculeDatum(i, sign) for i in family.quiver.plus_vertices for sign in (1, -1)]
    for convention in CONVENTION_FAMILY:
        if all(euler_oracle(family, d, convention=convention) == closed_form(family, d) for d in data):
            logger.info("pinned Euler class convention: %s", convention)
            return convention
    raise ConventionUnresolved("no Euler class convention reproduces the closed forms on the pinning instance")


def dressing_residual(family: GkloFamily, i: int, f: Dressing, g: Dressing) -> DiffOperator:
    """closed(f g) minus closed(f) with each slot coefficient multiplied by g(x_{i,r})."""
    product = closed_form_plus(family, i, lambda x: f(x) * g(x))
    base = closed_form_plus(family, i, f)
    expected = []
    for r in family.slots(i):
        shift: ShiftMonomial = family.torus.d(i, r)
        expected.append((shift, base.coefficient(shift) * g(family.x(i, r))))
    return product - DiffOperator(family.torus, expected)
