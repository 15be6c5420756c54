"""Exact rational functions whose denominators stay factored into linear forms.

Numerators live in a sympy sparse polynomial ring over QQ with lex order; the
ring's generator order is the fixed total variable order, so the leading
coefficient of a linear form is the coefficient of its first variable.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import NonLinearPole, SubstitutionDegenerate

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

SERIES_NAMES = ("u", "v", "u1", "u2")


def to_qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class VariableKind(str, Enum):
    SERIES = "series"
    X = "x"
    W = "w"
    HBAR = "hbar"


_KIND_RANK = {
    VariableKind.SERIES: 0,
    VariableKind.X: 1,
    VariableKind.W: 2,
    VariableKind.HBAR: 3,
}


@dataclass(frozen=True)
class Variable:
    kind: VariableKind
    vertex: int = 0
    slot: int = 0
    name: str = ""

    @classmethod
    def x(cls, vertex: int, slot: int) -> Variable:
        return cls(VariableKind.X, vertex, slot)

    @classmethod
    def w(cls, vertex: int, slot: int) -> Variable:
        return cls(VariableKind.W, vertex, slot)

    @classmethod
    def hbar(cls) -> Variable:
        return cls(VariableKind.HBAR)

    @classmethod
    def series(cls, name: str) -> Variable:
        return cls(VariableKind.SERIES, name=name)

    @property
    def sort_key(self) -> tuple:
        if self.kind is VariableKind.SERIES:
            rank = SERIES_NAMES.index(self.name) if self.name in SERIES_NAMES else len(SERIES_NAMES)
            return (0, rank, self.name, 0, 0)
        return (_KIND_RANK[self.kind], 0, "", self.vertex, self.slot)

    @property
    def symbol_name(self) -> str:
        match self.kind:
            case VariableKind.SERIES:
                return self.name
            case VariableKind.HBAR:
                return "hbar"
            case _:
                return f"{self.kind.value}_{self.vertex}_{self.slot}"

    def __str__(self) -> str:
        return self.symbol_name


HBAR = Variable.hbar()
U = Variable.series("u")
V = Variable.series("v")
U1 = Variable.series("u1")
U2 = Variable.series("u2")


class Alphabet:
    """The ordered variables of one computation and their polynomial ring."""

    def __init__(self, variables: Iterable[Variable]):
        ordered = sorted(set(variables) | {HBAR}, key=lambda var: var.sort_key)
        self.variables: tuple[Variable, ...] = tuple(ordered)
        self.ring = PolyRing([Symbol(var.symbol_name) for var in ordered], QQ, lex)
        self._index = {var: k for k, var in enumerate(ordered)}
        self._zero_monom = (0,) * len(ordered)

    def __contains__(self, var: object) -> bool:
        return var in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def __repr__(self) -> str:
        return f"Alphabet({', '.join(map(str, self.variables))})"

    def index(self, var: Variable) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise KeyError(f"variable {var} is not part of this alphabet") from None

    def monom(self, var: Variable) -> tuple[int, ...]:
        k = self.index(var)
        return self._zero_monom[:k] + (1,) + self._zero_monom[k + 1 :]

    @property
    def zero_monom(self) -> tuple[int, ...]:
        return self._zero_monom

    def gen(self, var: Variable) -> PolyElement:
        return self.ring.gens[self.index(var)]

    def var(self, var: Variable) -> LinearForm:
        return LinearForm(self, self.gen(var))

    def form(self, terms: Mapping[Variable, Scalar] | None = None, constant: Scalar = 0) -> LinearForm:
        poly = self.ring.ground_new(to_qq(constant))
        for var, coeff in (terms or {}).items():
            poly = poly + self.gen(var) * to_qq(coeff)
        return LinearForm(self, poly)

    def constant(self, value: Scalar) -> RationalFunction:
        return RationalFunction(self, self.ring.ground_new(to_qq(value)))

    @property
    def zero(self) -> RationalFunction:
        return RationalFunction(self, self.ring.zero)

    @property
    def one(self) -> RationalFunction:
        return RationalFunction(self, self.ring.one)

    @property
    def hbar(self) -> LinearForm:
        return self.var(HBAR)


class LinearForm:
    """A degree-at-most-one polynomial; the building block of every pole."""

    __slots__ = ("alphabet", "poly", "key")

    def __init__(self, alphabet: Alphabet, poly: PolyElement):
        if any(sum(monom) > 1 for monom in poly.itermonoms()):
            raise NonLinearPole(f"{poly} is not a linear form")
        self.alphabet = alphabet
        self.poly = poly
        self.key = tuple(sorted(poly.iterterms()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearForm) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"LinearForm({self})"

    def is_zero(self) -> bool:
        return not self.poly

    def is_constant(self) -> bool:
        return self.poly.is_ground

    def coefficient(self, var: Variable):
        return self.poly.get(self.alphabet.monom(var), QQ.zero)

    @property
    def constant(self):
        return self.poly.get(self.alphabet.zero_monom, QQ.zero)

    def variables(self) -> tuple[Variable, ...]:
        return tuple(var for var in self.alphabet.variables if self.coefficient(var))

    def normalized(self) -> tuple[object, LinearForm]:
        """Split off the leading coefficient; the remaining form is monic."""
        lead = self.poly.LC
        if lead == QQ.one:
            return lead, self
        return lead, LinearForm(self.alphabet, self.poly.quo_ground(lead))

    def _coerce(self, other: object) -> PolyElement | None:
        if isinstance(other, LinearForm):
            return other.poly
        if isinstance(other, (int, Fraction)):
            return self.alphabet.ring.ground_new(to_qq(other))
        return None

    def __add__(self, other: object) -> LinearForm:
        poly = self._coerce(other)
        if poly is None:
            return NotImplemented
        return LinearForm(self.alphabet, self.poly + poly)

    __radd__ = __add__

    def __sub__(self, other: object) -> LinearForm:
        poly = self._coerce(other)
        if poly is None:
            return NotImplemented
        return LinearForm(self.alphabet, self.poly - poly)

    def __rsub__(self, other: object) -> LinearForm:
        poly = self._coerce(other)
        if poly is None:
            return NotImplemented
        return LinearForm(self.alphabet, poly - self.poly)

    def __neg__(self) -> LinearForm:
        return LinearForm(self.alphabet, -self.poly)

    def __mul__(self, other: object) -> LinearForm | RationalFunction:
        if isinstance(other, LinearForm):
            return RationalFunction(self.alphabet, self.poly * other.poly)
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return LinearForm(self.alphabet, self.poly * to_qq(other))

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> LinearForm:
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return LinearForm(self.alphabet, self.poly.quo_ground(to_qq(scalar)))

    def __pow__(self, exponent: int) -> RationalFunction:
        return self.as_function() ** exponent

    def substitute(self, mapping: Mapping[Variable, LinearForm]) -> LinearForm:
        gens = _substitution_gens(self.alphabet, mapping)
        if not gens:
            return self
        return LinearForm(self.alphabet, self.poly.compose(gens))

    def evaluate(self, point: Mapping[Variable, object]):
        return _evaluate_poly(self.alphabet, self.poly, point)

    def as_function(self) -> RationalFunction:
        return RationalFunction(self.alphabet, self.poly)


Factor = tuple[LinearForm, int]


def _factor_key(item: Factor):
    return item[0].key


def _substitution_gens(
    alphabet: Alphabet, mapping: Mapping[Variable, LinearForm | Scalar]
) -> dict[PolyElement, PolyElement]:
    gens = {}
    for var, image in mapping.items():
        if var not in alphabet:
            continue
        if isinstance(image, LinearForm):
            gens[alphabet.gen(var)] = image.poly
        else:
            gens[alphabet.gen(var)] = alphabet.ring.ground_new(to_qq(image))
    return gens


def _evaluate_poly(alphabet: Alphabet, poly: PolyElement, point: Mapping[Variable, object]):
    values = []
    for var in alphabet.variables:
        values.append(point.get(var))
    total = QQ.zero
    for monom, coeff in poly.iterterms():
        term = coeff
        for k, exponent in enumerate(monom):
            if exponent:
                value = values[k]
                if value is None:
                    raise KeyError(f"no value for {alphabet.variables[k]}")
                term = term * to_qq(value) ** exponent
        total += term
    return total


class RationalFunction:
    """numerator / prod(form ** multiplicity), forms monic and pairwise distinct.

    Never reduced to lowest terms implicitly; equality is semantic.
    """

    __slots__ = ("alphabet", "numerator", "denominator")

    def __init__(
        self,
        alphabet: Alphabet,
        numerator: PolyElement,
        denominator: Iterable[Factor] = (),
    ):
        scale = QQ.one
        merged: dict[LinearForm, int] = {}
        for form, mult in denominator:
            if mult < 0:
                raise ValueError("denominator multiplicities must be nonnegative")
            if mult == 0:
                continue
            if form.is_constant():
                if form.is_zero():
                    raise ZeroDivisionError("zero linear form in denominator")
                scale *= form.poly.LC**mult
                continue
            lead, monic = form.normalized()
            scale *= lead**mult
            merged[monic] = merged.get(monic, 0) + mult
        if scale != QQ.one:
            numerator = numerator.quo_ground(scale)
        self.alphabet = alphabet
        self.numerator = numerator
        self.denominator: tuple[Factor, ...] = (
            tuple(sorted(merged.items(), key=_factor_key)) if numerator else ()
        )

    @classmethod
    def _raw(cls, alphabet: Alphabet, numerator: PolyElement, denominator: tuple[Factor, ...]) -> RationalFunction:
        f = object.__new__(cls)
        f.alphabet = alphabet
        f.numerator = numerator
        f.denominator = denominator if numerator else ()
        return f

    @classmethod
    def from_factors(
        cls,
        alphabet: Alphabet,
        numerator: Iterable[LinearForm] = (),
        denominator: Iterable[LinearForm] = (),
        scalar: Scalar = 1,
    ) -> RationalFunction:
        poly = alphabet.ring.ground_new(to_qq(scalar))
        for form in numerator:
            poly = poly * form.poly
        return cls(alphabet, poly, ((form, 1) for form in denominator))

    @classmethod
    def sum(cls, alphabet: Alphabet, items: Iterable[RationalFunction]) -> RationalFunction:
        items = [f for f in items if not f.is_zero()]
        if not items:
            return alphabet.zero
        target: dict[LinearForm, int] = {}
        for f in items:
            for form, mult in f.denominator:
                if target.get(form, 0) < mult:
                    target[form] = mult
        numerator = alphabet.ring.zero
        for f in items:
            numerator = numerator + f._lift(target)
        return cls._raw(alphabet, numerator, tuple(sorted(target.items(), key=_factor_key)))

    def _lift(self, target: Mapping[LinearForm, int]) -> PolyElement:
        numerator = self.numerator
        own = dict(self.denominator)
        for form, mult in target.items():
            extra = mult - own.get(form, 0)
            if extra:
                numerator = numerator * form.poly**extra
        return numerator

    def _coerce(self, other: object) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LinearForm):
            return other.as_function()
        if isinstance(other, (int, Fraction)):
            return self.alphabet.constant(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.numerator

    def is_constant(self) -> bool:
        f = self.reduced()
        return not f.denominator and f.numerator.is_ground

    def is_polynomial(self) -> bool:
        return not self.reduced().denominator

    def constant_value(self) -> Fraction:
        f = self.reduced()
        if f.denominator or not f.numerator.is_ground:
            raise ValueError(f"{self} is not constant")
        return to_fraction(f.numerator.LC) if f.numerator else Fraction(0)

    def denominator_poly(self) -> PolyElement:
        result = self.alphabet.ring.one
        for form, mult in self.denominator:
            result = result * form.poly**mult
        return result

    def __add__(self, other: object) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.denominator == other.denominator:
            return RationalFunction._raw(self.alphabet, self.numerator + other.numerator, self.denominator)
        return RationalFunction.sum(self.alphabet, (self, other))

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction._raw(self.alphabet, -self.numerator, self.denominator)

    def __sub__(self, other: object) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: object) -> RationalFunction:
        if isinstance(other, (int, Fraction)):
            return RationalFunction._raw(self.alphabet, self.numerator * to_qq(other), self.denominator)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.alphabet.zero
        merged = dict(self.denominator)
        for form, mult in other.denominator:
            merged[form] = merged.get(form, 0) + mult
        return RationalFunction._raw(
            self.alphabet,
            self.numerator * other.numerator,
            tuple(sorted(merged.items(), key=_factor_key)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> RationalFunction:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return RationalFunction._raw(self.alphabet, self.numerator.quo_ground(to_qq(other)), self.denominator)
        if isinstance(other, LinearForm):
            return RationalFunction(self.alphabet, self.numerator, self.denominator + ((other, 1),))
        if isinstance(other, RationalFunction):
            g = other.reduced()
            if not g.numerator.is_ground:
                raise TypeError("only divisions by products of linear forms are supported")
            if g.is_zero():
                raise ZeroDivisionError("division by the zero function")
            numerator = self.numerator * g.denominator_poly()
            return RationalFunction(self.alphabet, numerator.quo_ground(g.numerator.LC), self.denominator)
        return NotImplemented

    def __pow__(self, exponent: int) -> RationalFunction:
        if exponent < 0:
            raise ValueError("negative powers are not supported")
        result = self.alphabet.one
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # semantic equality has no cheap canonical hash

    def reduced(self) -> RationalFunction:
        """Cancel every denominator factor that divides the numerator exactly."""
        if not self.denominator:
            return self
        numerator = self.numerator
        kept: list[Factor] = []
        changed = False
        for form, mult in self.denominator:
            while mult:
                quotient, remainder = numerator.div(form.poly)
                if remainder:
                    break
                numerator = quotient
                mult -= 1
                changed = True
            if mult:
                kept.append((form, mult))
        if not changed:
            return self
        return RationalFunction._raw(self.alphabet, numerator, tuple(kept))

    def substitute(self, mapping: Mapping[Variable, LinearForm | Scalar]) -> RationalFunction:
        gens = _substitution_gens(self.alphabet, mapping)
        if not gens:
            return self
        factors = []
        for form, mult in self.denominator:
            image = LinearForm(self.alphabet, form.poly.compose(gens))
            if image.is_zero():
                reduced = self.reduced()
                if reduced is not self:
                    return reduced.substitute(mapping)
                raise SubstitutionDegenerate(f"denominator factor {form} vanishes under substitution")
            factors.append((image, mult))
        return RationalFunction(self.alphabet, self.numerator.compose(gens), factors)

    def evaluate(self, point: Mapping[Variable, object]):
        denominator = QQ.one
        for form, mult in self.denominator:
            value = form.evaluate(point)
            if not value:
                raise ZeroDivisionError(f"point lies on the pole {form} = 0")
            denominator *= value**mult
        return _evaluate_poly(self.alphabet, self.numerator, point) / denominator

    def random_eval(self, seed: int, *, attempts: int = 16) -> Fraction | None:
        """Evaluate at a seeded random rational point, resampling on pole hits."""
        rng = random.Random(seed)
        for _ in range(attempts):
            point = {
                var: QQ(rng.randint(-997, 997), rng.randint(1, 97)) for var in self.alphabet.variables
            }
            try:
                return to_fraction(self.evaluate(point))
            except ZeroDivisionError:
                continue
        logger.debug("random evaluation gave up after %d attempts", attempts)
        return None

    def numerator_coefficient(self, var: Variable, degree: int) -> RationalFunction:
        """Coefficient of var**degree in the numerator, over the same denominator."""
        k = self.alphabet.index(var)
        terms = {}
        for monom, coeff in self.numerator.iterterms():
            if monom[k] == degree:
                terms[monom[:k] + (0,) + monom[k + 1 :]] = coeff
        return RationalFunction._raw(self.alphabet, self.alphabet.ring.from_dict(terms), self.denominator)

    def leading_at_infinity(self, var: Variable) -> tuple[int, RationalFunction]:
        """Degree in var and the leading coefficient as var tends to infinity."""
        if self.is_zero():
            raise ValueError("the zero function has no leading term")
        k = self.alphabet.index(var)
        top = max(monom[k] for monom in self.numerator.itermonoms())
        lead = self.numerator_coefficient(var, top)
        degree = top
        scale = QQ.one
        rest: list[Factor] = []
        monom = self.alphabet.monom(var)
        for form, mult in self.denominator:
            a = form.poly.get(monom)
            if a:
                degree -= mult
                scale *= a**mult
            else:
                rest.append((form, mult))
        return degree, RationalFunction(self.alphabet, lead.numerator.quo_ground(scale), rest)

    def free_of(self, var: Variable) -> bool:
        k = self.alphabet.index(var)
        if any(monom[k] for monom in self.numerator.itermonoms()):
            return False
        return not any(form.coefficient(var) for form, _ in self.denominator)

    def __str__(self) -> str:
        f = self.reduced()
        numerator = str(f.numerator)
        if not f.denominator:
            return numerator
        factors = "*".join(f"({form})" + (f"^{mult}" if mult > 1 else "") for form, mult in f.denominator)
        return f"({numerator})/({factors})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def rf_add(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    return f + g


def rf_mul(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    return f * g


def rf_equal(f: RationalFunction, g: RationalFunction) -> bool:
    return (f - g).is_zero()


def substitute(f: RationalFunction, mapping: Mapping[Variable, LinearForm | Scalar]) -> RationalFunction:
    return f.substitute(mapping)


def random_eval(f: RationalFunction, seed: int) -> Fraction | None:
    return f.random_eval(seed)
