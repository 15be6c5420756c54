"""Difference operators: rational-function coefficients times shift monomials.

A shift d_{i,r} moves x_{i,r} by hbar; u, v, w and hbar are inert. Vertices in
Q0- are rewritten through x_{ti,r} = -x_{i,r} and d_{ti,r} = d_{i,r}^-1.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import IndexOutOfRange
from .quiver import DimensionData, QuiverWithInvolution
from .symbolic import (
    HBAR,
    SERIES_NAMES,
    Alphabet,
    LinearForm,
    RationalFunction,
    Scalar,
    Variable,
    VariableKind,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class ShiftMonomial:
    exponents: tuple[tuple[tuple[int, int], int], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[tuple[int, int], int]) -> ShiftMonomial:
        return cls(tuple(sorted((key, e) for key, e in mapping.items() if e)))

    def __mul__(self, other: ShiftMonomial) -> ShiftMonomial:
        merged = dict(self.exponents)
        for key, e in other.exponents:
            merged[key] = merged.get(key, 0) + e
        return ShiftMonomial.from_mapping(merged)

    def inverse(self) -> ShiftMonomial:
        return ShiftMonomial(tuple((key, -e) for key, e in self.exponents))

    def exponent(self, i: int, r: int) -> int:
        return dict(self.exponents).get((i, r), 0)

    def is_identity(self) -> bool:
        return not self.exponents

    def __iter__(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(f"d[{i},{r}]" + (f"^{e}" if e != 1 else "") for (i, r), e in self.exponents)


IDENTITY = ShiftMonomial()


class Torus:
    """Coordinates x, w, hbar and series variables for one quiver and dims."""

    def __init__(
        self,
        quiver: QuiverWithInvolution,
        dims: DimensionData,
        *,
        mirror_sign: int = -1,
    ):
        self.quiver = quiver
        self.dims = dims
        self.mirror_sign = mirror_sign
        variables = [Variable.series(name) for name in SERIES_NAMES]
        for i in quiver.plus_vertices:
            variables.extend(Variable.x(i, r) for r in range(1, dims.dim_v(i) + 1))
        for i in sorted(quiver.vertices):
            variables.extend(Variable.w(i, k) for k in range(1, dims.dim_w(i) + 1))
        variables.append(HBAR)
        self.alphabet = Alphabet(variables)
        self._shift_cache = lru_cache(maxsize=8192)(self._shift)

    def __getstate__(self) -> dict:
        state = self.__dict__.copy()
        del state["_shift_cache"]
        return state

    def __setstate__(self, state: dict) -> None:
        self.__dict__.update(state)
        self._shift_cache = lru_cache(maxsize=8192)(self._shift)

    def check_slot(self, i: int, r: int) -> None:
        self.quiver.check_vertex(i)
        if not 1 <= r <= self.dims.dim_v(i):
            raise IndexOutOfRange(f"slot {r} out of range for vertex {i} (v_{i} = {self.dims.dim_v(i)})")

    def x(self, i: int, r: int) -> LinearForm:
        self.check_slot(i, r)
        if self.quiver.is_plus(i):
            return self.alphabet.var(Variable.x(i, r))
        return self.alphabet.var(Variable.x(self.quiver.involution(i), r)) * self.mirror_sign

    def w(self, i: int, k: int) -> LinearForm:
        self.quiver.check_vertex(i)
        if not 1 <= k <= self.dims.dim_w(i):
            raise IndexOutOfRange(f"framing slot {k} out of range for vertex {i}")
        return self.alphabet.var(Variable.w(i, k))

    @property
    def hbar(self) -> LinearForm:
        return self.alphabet.hbar

    def series(self, name: str) -> LinearForm:
        return self.alphabet.var(Variable.series(name))

    def d(self, i: int, r: int, power: int = 1) -> ShiftMonomial:
        self.check_slot(i, r)
        if self.quiver.is_plus(i):
            return ShiftMonomial.from_mapping({(i, r): power})
        return ShiftMonomial.from_mapping({(self.quiver.involution(i), r): -power})

    def shift_map(self, shift: ShiftMonomial) -> dict[Variable, LinearForm]:
        hbar = self.hbar
        return {
            Variable.x(i, r): self.alphabet.var(Variable.x(i, r)) + hbar * e for (i, r), e in shift.exponents
        }

    def _shift(self, shift: ShiftMonomial, numerator, denominator) -> RationalFunction:
        f = RationalFunction._raw(self.alphabet, numerator, denominator)
        return f.substitute(self.shift_map(shift))

    def shift_action(self, shift: ShiftMonomial, f: RationalFunction) -> RationalFunction:
        if shift.is_identity() or f.is_zero():
            return f
        return self._shift_cache(shift, f.numerator, f.denominator)


def shift_action(torus: Torus, shift: ShiftMonomial, f: RationalFunction) -> RationalFunction:
    return torus.shift_action(shift, f)


class DiffOperator:
    """Finite sum of coefficient * shift monomial; zero coefficients are never stored."""

    __slots__ = ("torus", "_terms")

    def __init__(
        self,
        torus: Torus,
        terms: Mapping[ShiftMonomial, RationalFunction] | Iterable[tuple[ShiftMonomial, RationalFunction]] = (),
    ):
        collected: dict[ShiftMonomial, list[RationalFunction]] = {}
        for shift, coeff in terms.items() if isinstance(terms, Mapping) else terms:
            collected.setdefault(shift, []).append(coeff)
        self.torus = torus
        self._terms: dict[ShiftMonomial, RationalFunction] = {}
        for shift in sorted(collected):
            parts = collected[shift]
            coeff = parts[0] if len(parts) == 1 else RationalFunction.sum(torus.alphabet, parts)
            if not coeff.is_zero():
                self._terms[shift] = coeff

    @classmethod
    def zero(cls, torus: Torus) -> DiffOperator:
        return cls(torus)

    @classmethod
    def scalar(cls, torus: Torus, f: RationalFunction | LinearForm | Scalar) -> DiffOperator:
        return cls(torus, [(IDENTITY, _as_function(torus, f))])

    @classmethod
    def shift(cls, torus: Torus, shift: ShiftMonomial, coeff: RationalFunction | LinearForm | Scalar = 1) -> DiffOperator:
        return cls(torus, [(shift, _as_function(torus, coeff))])

    @property
    def terms(self) -> tuple[tuple[ShiftMonomial, RationalFunction], ...]:
        return tuple(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, shift: ShiftMonomial) -> RationalFunction:
        return self._terms.get(shift, self.torus.alphabet.zero)

    def shifts(self) -> tuple[ShiftMonomial, ...]:
        return tuple(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other: object) -> DiffOperator:
        if isinstance(other, DiffOperator):
            return other
        if isinstance(other, (RationalFunction, LinearForm, int, Fraction)):
            return DiffOperator.scalar(self.torus, other)
        return NotImplemented

    def __add__(self, other: object) -> DiffOperator:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return DiffOperator(self.torus, [*self._terms.items(), *other._terms.items()])

    __radd__ = __add__

    def __neg__(self) -> DiffOperator:
        return DiffOperator(self.torus, [(s, -c) for s, c in self._terms.items()])

    def __sub__(self, other: object) -> DiffOperator:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> DiffOperator:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: object) -> DiffOperator:
        if isinstance(other, (int, Fraction)):
            return DiffOperator(self.torus, [(s, c * other) for s, c in self._terms.items()])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        torus = self.torus
        products = []
        for s1, c1 in self._terms.items():
            for s2, c2 in other._terms.items():
                products.append((s1 * s2, c1 * torus.shift_action(s1, c2)))
        return DiffOperator(torus, products)

    def __rmul__(self, other: object) -> DiffOperator:
        if isinstance(other, (RationalFunction, LinearForm, int, Fraction)):
            f = _as_function(self.torus, other)
            return DiffOperator(self.torus, [(s, f * c) for s, c in self._terms.items()])
        return NotImplemented

    def __truediv__(self, scalar: Scalar) -> DiffOperator:
        return DiffOperator(self.torus, [(s, c / scalar) for s, c in self._terms.items()])

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def map_coefficients(self, fn) -> DiffOperator:
        return DiffOperator(self.torus, [(s, fn(c)) for s, c in self._terms.items()])

    def reduced(self) -> DiffOperator:
        return self.map_coefficients(RationalFunction.reduced)

    def substitute(self, mapping: Mapping[Variable, LinearForm | Scalar]) -> DiffOperator:
        """Substitute shift-inert variables in every coefficient."""
        for var in mapping:
            if var.kind is VariableKind.X:
                raise ValueError(f"cannot substitute {var}: it does not commute with shifts")
        return self.map_coefficients(lambda c: c.substitute(mapping))

    def conjugate(self, shift: ShiftMonomial) -> DiffOperator:
        """d * self * d^-1."""
        d = DiffOperator.shift(self.torus, shift)
        return d * self * DiffOperator.shift(self.torus, shift.inverse())

    def to_text(self, max_terms: int | None = None) -> str:
        if not self._terms:
            return "0"
        parts = [
            f"({coeff})" if shift.is_identity() else f"({coeff})*{shift}" for shift, coeff in self._terms.items()
        ]
        if max_terms is not None and len(parts) > max_terms:
            hidden = len(parts) - max_terms
            parts = parts[:max_terms] + [f"... ({hidden} more terms)"]
        return " + ".join(parts)

    def term_texts(self) -> tuple[str, ...]:
        return tuple(
            f"({coeff})" if shift.is_identity() else f"({coeff})*{shift}" for shift, coeff in self._terms.items()
        )

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"DiffOperator({self})"


def _as_function(torus: Torus, value: RationalFunction | LinearForm | Scalar) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, LinearForm):
        return value.as_function()
    return torus.alphabet.constant(value)


def op_mul(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return a * b


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return a * b - b * a


def anticommutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return a * b + b * a


def op_equal(a: DiffOperator, b: DiffOperator) -> bool:
    return (a - b).is_zero()
