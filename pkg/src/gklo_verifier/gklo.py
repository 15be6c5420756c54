"""GKLO difference operators y_{i,r}, B_i(u) and H_i(u) of a quiver with involution."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from .difference import DiffOperator, Torus
from .errors import CoefficientNotPolynomial, IndexOutOfRange, NoScalarRelation, WrongCartanCase
from .quiver import CartanData, DimensionData, QuiverWithInvolution, parity_sign
from .series import laurent_coeff_at_infinity, series_coeff_at_infinity
from .symbolic import U, Alphabet, LinearForm, RationalFunction

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

MUTATIONS = ("tau-edge-shift", "drop-h-prefactor", "flip-mirror-sign")


@dataclass(frozen=True)
class Conventions:
    """The numeric choices a negative control is allowed to perturb."""

    tau_edge_shift: Fraction = Fraction(3, 2)
    h_prefactor: bool = True
    mirror_sign: int = -1
    mutation: str | None = None

    def mutated(self, name: str) -> Conventions:
        match name:
            case "tau-edge-shift":
                return replace(self, tau_edge_shift=Fraction(1), mutation=name)
            case "drop-h-prefactor":
                return replace(self, h_prefactor=False, mutation=name)
            case "flip-mirror-sign":
                return replace(self, mirror_sign=-self.mirror_sign, mutation=name)
            case _:
                raise ValueError(f"unknown mutation {name!r}, expected one of {', '.join(MUTATIONS)}")

    def describe(self) -> dict[str, str | bool | int | None]:
        return {
            "tau_edge_shift": str(self.tau_edge_shift),
            "h_prefactor": self.h_prefactor,
            "mirror_sign": self.mirror_sign,
            "mutation": self.mutation,
        }


@dataclass(frozen=True)
class RootPolynomial:
    """prod_k (z - root_k), kept as its list of roots."""

    alphabet: Alphabet
    roots: tuple[LinearForm, ...]

    def factors(self, at: LinearForm) -> list[LinearForm]:
        return [at - root for root in self.roots]

    def __call__(self, at: LinearForm) -> RationalFunction:
        return RationalFunction.from_factors(self.alphabet, self.factors(at))

    def __len__(self) -> int:
        return len(self.roots)


@dataclass(frozen=True)
class FamilySpec:
    """Everything needed to rebuild a GkloFamily, e.g. inside a worker process."""

    quiver: QuiverWithInvolution
    dims: DimensionData
    conventions: Conventions = field(default_factory=Conventions)
    max_mode: int = 3

    def build(self) -> GkloFamily:
        return GkloFamily(self.quiver, self.dims, conventions=self.conventions, max_mode=self.max_mode)


class GkloFamily:
    def __init__(
        self,
        quiver: QuiverWithInvolution,
        dims: DimensionData,
        *,
        conventions: Conventions | None = None,
        max_mode: int = 3,
    ):
        self.quiver = quiver
        self.dims = dims
        self.conventions = conventions or Conventions()
        self.max_mode = max_mode
        self.cartan = CartanData.from_quiver(quiver, dims)
        self.torus = Torus(quiver, dims, mirror_sign=self.conventions.mirror_sign)
        self.alphabet = self.torus.alphabet
        self.hbar = self.torus.hbar
        self.u = self.torus.series("u")
        self.v = self.torus.series("v")
        self._y: dict[tuple[int, int], DiffOperator] = {}
        self._B: dict[int, DiffOperator] = {}
        self._H: dict[int, RationalFunction] = {}
        self._B_modes: dict[tuple[int, int], DiffOperator] = {}
        self._H_modes: dict[tuple[int, int], RationalFunction] = {}
        logger.info(
            "built GKLO family on %d vertices, v=%s, w=%s, conventions=%s",
            len(quiver.vertices),
            dict(dims.v),
            dict(dims.w),
            self.conventions.mutation or "default",
        )

    @property
    def spec(self) -> FamilySpec:
        return FamilySpec(self.quiver, self.dims, self.conventions, self.max_mode)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.quiver.vertices))

    def tau(self, i: int) -> int:
        return self.quiver.involution(i)

    def c(self, i: int, j: int) -> int:
        return self.cartan.cartan(i, j)

    def dim_v(self, i: int) -> int:
        return self.dims.dim_v(i)

    def slots(self, i: int) -> range:
        return range(1, self.dims.dim_v(i) + 1)

    def x(self, i: int, r: int) -> LinearForm:
        return self.torus.x(i, r)

    def mu_pairing(self, i: int) -> int:
        return self.cartan.mu_pairing(i)

    def hbar_zeta(self, i: int) -> Fraction:
        return self.cartan.zeta(i)

    def mode_order(self, i: int) -> int:
        return max(self.mu_pairing(i) + 6, self.max_mode + 2)

    def _fraction(self, numerator: Sequence[LinearForm], denominator: Sequence[LinearForm] = (), scalar=1):
        return RationalFunction.from_factors(self.alphabet, numerator, denominator, scalar)

    # polynomials

    def build_V(self, i: int) -> RootPolynomial:
        return RootPolynomial(self.alphabet, tuple(self.x(i, k) for k in self.slots(i)))

    def build_W(self, i: int) -> RootPolynomial:
        self.quiver.check_vertex(i)
        return RootPolynomial(
            self.alphabet, tuple(self.torus.w(i, k) for k in range(1, self.dims.dim_w(i) + 1))
        )

    def build_V_punctured(self, i: int, r: int) -> RootPolynomial:
        self.torus.check_slot(i, r)
        return RootPolynomial(self.alphabet, tuple(self.x(i, k) for k in self.slots(i) if k != r))

    # y, B

    def y_coefficient(self, i: int, r: int) -> RationalFunction:
        x = self.x(i, r)
        hbar = self.hbar
        numerator: list[LinearForm] = []
        for h in self.quiver.edges_from(i):
            if self.quiver.is_fixed(h):
                numerator.append(2 * x + hbar * self.conventions.tau_edge_shift)
            numerator.extend(self.build_V(h[1]).factors(x + hbar * HALF))
        numerator.extend(self.build_W(self.tau(i)).factors(-x - hbar * HALF))
        denominator = self.build_V_punctured(i, r).factors(x)
        return self._fraction(numerator, denominator)

    def build_y(self, i: int, r: int) -> DiffOperator:
        key = (i, r)
        if key not in self._y:
            self._y[key] = DiffOperator.shift(self.torus, self.torus.d(i, r), self.y_coefficient(i, r))
        return self._y[key]

    def B(self, i: int, at: LinearForm) -> DiffOperator:
        """B_i evaluated at a linear form."""
        hbar = self.hbar
        terms = []
        for r in self.slots(i):
            pole = -at - self.x(i, r) - hbar * HALF
            ((shift, coeff),) = self.build_y(i, r).terms
            terms.append((shift, coeff / pole))
        return DiffOperator(self.torus, terms)

    def build_B(self, i: int) -> DiffOperator:
        if i not in self._B:
            self.quiver.check_vertex(i)
            self._B[i] = self.B(i, self.u)
        return self._B[i]

    def B_coeff(self, i: int, m: int) -> DiffOperator:
        if m < 0:
            raise IndexOutOfRange(f"B modes start at 0, got {m}")
        key = (i, m)
        if key not in self._B_modes:
            logger.debug("filling B mode (%d, %d)", i, m)
            self._B_modes[key] = series_coeff_at_infinity(self.build_B(i), U, m)
        return self._B_modes[key]

    def B_coeff_closed(self, i: int, m: int) -> DiffOperator:
        """-sum_s (-x_{i,s} - hbar/2)^m y_{i,s}."""
        total = DiffOperator.zero(self.torus)
        for s in self.slots(i):
            weight = (-self.x(i, s) - self.hbar * HALF) ** m
            total = total - weight * self.build_y(i, s)
        return total

    # H

    def H_factors(self, i: int, at: LinearForm) -> tuple[int, list[LinearForm], list[LinearForm]]:
        ti = self.tau(i)
        hbar = self.hbar
        c = self.c(i, ti)
        sign = parity_sign(self.dim_v(i) - 1 + self.cartan.delta_arrow(i))
        numerator: list[LinearForm] = []
        denominator: list[LinearForm] = []
        if self.conventions.h_prefactor and c:
            top = [2 * at - hbar * HALF, 2 * at + hbar * HALF]
            bottom = [2 * at]
            # (2z / ((2z - hbar/2)(2z + hbar/2)))^c
            for _ in range(abs(c)):
                if c < 0:
                    numerator.extend(top)
                    denominator.extend(bottom)
                else:
                    numerator.extend(bottom)
                    denominator.extend(top)
        numerator.extend(self.build_W(i).factors(-at))
        numerator.extend(self.build_W(ti).factors(at))
        V = self.build_V(i)
        denominator.extend(V.factors(-at + hbar * HALF))
        denominator.extend(V.factors(-at - hbar * HALF))
        for _, t in self.quiver.edges_from(i):
            numerator.extend(self.build_V(t).factors(-at))
        for _, t in self.quiver.edges_from(ti):
            numerator.extend(self.build_V(t).factors(at))
        return sign, numerator, denominator

    def H(self, i: int, at: LinearForm) -> RationalFunction:
        """H_i evaluated at a linear form."""
        sign, numerator, denominator = self.H_factors(i, at)
        return self._fraction(numerator, denominator, sign)

    def build_H(self, i: int) -> RationalFunction:
        if i not in self._H:
            self._H[i] = self.H(i, self.u)
        return self._H[i]

    def H_laurent(self, i: int, r: int) -> RationalFunction:
        """Coefficient of u^(-r-1) of H_i at infinity, without the boundary convention."""
        return laurent_coeff_at_infinity(self.build_H(i), U, -r - 1).reduced()

    def H_coeff(self, i: int, r: int) -> RationalFunction:
        if r < -self.mu_pairing(i) - 1:
            return self.alphabet.zero
        key = (i, r)
        if key not in self._H_modes:
            logger.debug("filling H mode (%d, %d)", i, r)
            coeff = self.H_laurent(i, r)
            if coeff.denominator:
                raise CoefficientNotPolynomial(f"H_({i},{r}) = {coeff} is not a polynomial")
            self._H_modes[key] = coeff
        return self._H_modes[key]

    def precompute_modes(self) -> None:
        for i in self.vertices:
            for m in range(self.mode_order(i) + 1):
                self.B_coeff(i, m)
            for r in range(-self.mu_pairing(i) - 1, self.mode_order(i) + 1):
                self.H_coeff(i, r)

    # commutation coefficients

    def C_coeff(self, i: int, j: int, r: int, s: int) -> RationalFunction:
        """y_{j,s} y_{i,r} = C y_{i,r} y_{j,s}."""
        self.torus.check_slot(i, r)
        self.torus.check_slot(j, s)
        if j == self.tau(i) and s == r:
            raise NoScalarRelation(f"y_({j},{s}) and y_({i},{r}) have no scalar commutation coefficient")
        if j == i and s == r:
            return self.alphabet.one
        c = self.c(i, j)
        diff = self.x(i, r) - self.x(j, s)
        shift = self.hbar * (Fraction(c) / 2)
        return self._fraction([diff + shift], [diff - shift])

    def C_table(self, i: int, j: int, r: int, s: int) -> RationalFunction:
        """The case-by-case form of C_coeff."""
        self.torus.check_slot(i, r)
        self.torus.check_slot(j, s)
        ti = self.tau(i)
        hbar = self.hbar
        xr = self.x(i, r)
        if j == i:
            if s == r:
                return self.alphabet.one
            diff = xr - self.x(i, s)
            return self._fraction([diff + hbar], [diff - hbar])
        if j == ti:
            if s == r:
                raise NoScalarRelation(f"y_({j},{s}) and y_({i},{r}) have no scalar commutation coefficient")
            total = xr + self.x(i, s)
            return _power(self, total - hbar * HALF, total + hbar * HALF, -self.c(i, ti))
        diff = xr - self.x(j, s)
        return _power(self, diff - hbar * HALF, diff + hbar * HALF, -self.c(i, j))

    def D_coeff(self, i: int, j: int, s: int) -> RationalFunction:
        """y_{j,s} H_i(u) = D H_i(u) y_{j,s}."""
        self.quiver.check_vertex(i)
        x = self.x(j, s)
        hbar = self.hbar
        u = self.u
        c = self.c(i, j)
        c_mirror = self.c(self.tau(i), j)
        return self._fraction(
            [u + x + hbar * (Fraction(1 - c) / 2), u - x - hbar * (Fraction(1 - c_mirror) / 2)],
            [u + x + hbar * (Fraction(1 + c) / 2), u - x - hbar * (Fraction(1 + c_mirror) / 2)],
        )

    def D_table(self, i: int, j: int, s: int) -> RationalFunction:
        """The three-case form of D_coeff."""
        self.quiver.check_vertex(i)
        ti = self.tau(i)
        hbar = self.hbar
        u = self.u
        if j == i:
            x = self.x(i, s)
            c = self.c(i, ti)
            ratio = _power(self, u - x - hbar, u - x, -c)
            return ratio * self._fraction([u + x - hbar * HALF], [u + x + hbar * Fraction(3, 2)])
        if j == ti:
            x = self.x(i, s)
            c = self.c(i, ti)
            ratio = _power(self, u - x + hbar, u - x, -c)
            return ratio * self._fraction([u + x + hbar * HALF], [u + x - hbar * Fraction(3, 2)])
        x = self.x(j, s)
        first = _power(self, u + x + hbar, u + x, -self.c(i, j))
        second = _power(self, u - x - hbar, u - x, -self.c(ti, j))
        return first * second

    # residues, special value, truncation

    def H_pole(self, i: int, r: int, sign: int) -> LinearForm:
        """-x_{i,r} + sign * hbar/2."""
        return -self.x(i, r) + self.hbar * (HALF * sign)

    def H_residue(self, i: int, r: int, sign: int) -> DiffOperator:
        """Residue of H_i at u = -x_{i,r} + sign * hbar/2, as an operator in y."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        ti = self.tau(i)
        x = self.x(i, r)
        hbar = self.hbar
        c = self.c(i, ti)
        ratio = _power(self, -2 * x + hbar * (HALF * sign), -2 * x + hbar * sign, -c)
        scalar = ratio * self._fraction([], [hbar], sign)
        if sign < 0:
            product = self.build_y(i, r) * self.build_y(ti, r)
        else:
            product = self.build_y(ti, r) * self.build_y(i, r)
        return scalar * product

    def H_special(self, i: int, r: int) -> DiffOperator:
        """H_i(-x_{i,r} - 3hbar/2) through y, for c_{i,ti} = -1."""
        ti = self.tau(i)
        if self.c(i, ti) != -1:
            raise WrongCartanCase(f"special value needs c_({i},{ti}) = -1, got {self.c(i, ti)}")
        x = self.x(i, r)
        hbar = self.hbar
        scalar = self._fraction(
            [2 * x + hbar * Fraction(3, 2)], [2 * x + hbar * 3, hbar, hbar], HALF
        )
        inner = self.build_y(i, r) * self.build_y(ti, r)
        return scalar * inner.conjugate(self.torus.d(i, r))

    def two_uH_truncated(self, i: int) -> DiffOperator:
        """(2 u hbar H_i(u))° written through the residues."""
        ti = self.tau(i)
        hbar = self.hbar
        u = self.u
        c = self.c(i, ti)
        total = DiffOperator.zero(self.torus)
        for r in self.slots(i):
            x = self.x(i, r)
            y_i = self.build_y(i, r)
            y_ti = self.build_y(ti, r)
            lower = self._fraction([-2 * x + hbar + hbar * (Fraction(c) / 2)], [u + x - hbar * HALF])
            upper = self._fraction([-2 * x - hbar - hbar * (Fraction(c) / 2)], [u + x + hbar * HALF])
            total = total + lower * (y_ti * y_i) - upper * (y_i * y_ti)
        return total

    def H_truncated_c0(self, i: int) -> DiffOperator:
        """hbar (H_i(u))° written through the residues, for c_{i,ti} = 0."""
        ti = self.tau(i)
        if self.c(i, ti) != 0:
            raise WrongCartanCase(f"needs c_({i},{ti}) = 0, got {self.c(i, ti)}")
        hbar = self.hbar
        u = self.u
        total = DiffOperator.zero(self.torus)
        for r in self.slots(i):
            x = self.x(i, r)
            y_i = self.build_y(i, r)
            y_ti = self.build_y(ti, r)
            total = total + self._fraction([], [u + x - hbar * HALF]) * (y_ti * y_i)
            total = total - self._fraction([], [u + x + hbar * HALF]) * (y_i * y_ti)
        return total


def _power(family: GkloFamily, top: LinearForm, bottom: LinearForm, exponent: int) -> RationalFunction:
    """(top / bottom) ** exponent for any integer exponent."""
    if exponent < 0:
        top, bottom, exponent = bottom, top, -exponent
    return RationalFunction.from_factors(family.alphabet, [top] * exponent, [bottom] * exponent)
