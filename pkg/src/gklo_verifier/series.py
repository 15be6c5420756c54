"""Truncation, residues and expansion at infinity in one designated variable.

Everything is computed from residues at simple poles, never from series.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import singledispatch

from .difference import DiffOperator
from .errors import NotAPole, RepeatedPole
from .symbolic import LinearForm, RationalFunction, Variable


@dataclass(frozen=True)
class Pole:
    factor: LinearForm
    root: LinearForm
    multiplicity: int
    scale: object  # coefficient of the variable in factor


@dataclass(frozen=True)
class PoleProfile:
    variable: Variable
    poles: tuple[Pole, ...]

    def find(self, root: LinearForm) -> Pole | None:
        for pole in self.poles:
            if pole.root == root:
                return pole
        return None


def pole_profile(f: RationalFunction, var: Variable) -> PoleProfile:
    alphabet = f.alphabet
    monom = alphabet.monom(var)
    x = alphabet.var(var)
    poles = []
    for form, mult in f.denominator:
        a = form.poly.get(monom)
        if not a:
            continue
        rest = LinearForm(alphabet, form.poly - x.poly * a)
        root = LinearForm(alphabet, (-rest.poly).quo_ground(a))
        poles.append(Pole(form, root, mult, a))
    return PoleProfile(var, tuple(poles))


def _simple_profile(f: RationalFunction, var: Variable) -> tuple[RationalFunction, PoleProfile]:
    profile = pole_profile(f, var)
    if any(pole.multiplicity > 1 for pole in profile.poles):
        f = f.reduced()
        profile = pole_profile(f, var)
        for pole in profile.poles:
            if pole.multiplicity > 1:
                raise RepeatedPole(f"{var} = {pole.root} is a pole of order {pole.multiplicity}")
    return f, profile


def _residue(f: RationalFunction, var: Variable, pole: Pole) -> RationalFunction:
    rest = [(form, mult) for form, mult in f.denominator if form != pole.factor]
    g = RationalFunction(f.alphabet, f.numerator.quo_ground(pole.scale), rest)
    return g.substitute({var: pole.root})


@singledispatch
def truncate(f, var: Variable):
    """The proper part in var: the sum of Res_p f / (var - p) over all poles."""
    raise TypeError(f"cannot truncate {type(f).__name__}")


@truncate.register
def _(f: RationalFunction, var: Variable) -> RationalFunction:
    f, profile = _simple_profile(f, var)
    x = f.alphabet.var(var)
    parts = [_residue(f, var, pole) / (x - pole.root) for pole in profile.poles]
    return RationalFunction.sum(f.alphabet, parts)


@truncate.register
def _(f: DiffOperator, var: Variable) -> DiffOperator:
    return f.map_coefficients(lambda c: truncate(c, var))


@singledispatch
def residue_at(f, var: Variable, root: LinearForm):
    raise TypeError(f"cannot take residues of {type(f).__name__}")


@residue_at.register
def _(f: RationalFunction, var: Variable, root: LinearForm) -> RationalFunction:
    pole = pole_profile(f, var).find(root)
    if pole is not None and pole.multiplicity > 1:
        f = f.reduced()
        pole = pole_profile(f, var).find(root)
        if pole is not None and pole.multiplicity > 1:
            raise RepeatedPole(f"{var} = {root} is a pole of order {pole.multiplicity}")
    if pole is None:
        raise NotAPole(f"{var} = {root} is not a pole of {f}")
    return _residue(f, var, pole)


@residue_at.register
def _(f: DiffOperator, var: Variable, root: LinearForm) -> DiffOperator:
    terms = []
    for shift, coeff in f.terms:
        if pole_profile(coeff, var).find(root) is not None:
            terms.append((shift, residue_at(coeff, var, root)))
    if not terms and not f.is_zero():
        raise NotAPole(f"{var} = {root} is not a pole of any coefficient")
    return DiffOperator(f.torus, terms)


@singledispatch
def series_coeff_at_infinity(f, var: Variable, m: int):
    """Coefficient of var**(-m-1) in the expansion at var = infinity."""
    raise TypeError(f"cannot expand {type(f).__name__}")


@series_coeff_at_infinity.register
def _(f: RationalFunction, var: Variable, m: int) -> RationalFunction:
    if m < 0:
        raise ValueError("mode index must be nonnegative")
    f, profile = _simple_profile(f, var)
    parts = []
    for pole in profile.poles:
        power = pole.root.as_function() ** m
        parts.append(_residue(f, var, pole) * power)
    return RationalFunction.sum(f.alphabet, parts)


@series_coeff_at_infinity.register
def _(f: DiffOperator, var: Variable, m: int) -> DiffOperator:
    return f.map_coefficients(lambda c: series_coeff_at_infinity(c, var, m))


@singledispatch
def polynomial_part(f, var: Variable):
    raise TypeError(f"cannot split {type(f).__name__}")


@polynomial_part.register
def _(f: RationalFunction, var: Variable) -> RationalFunction:
    g = (f - truncate(f, var)).reduced()
    if pole_profile(g, var).poles:
        raise RepeatedPole(f"{var}-poles survive in the polynomial part of {f}")
    return g


@polynomial_part.register
def _(f: DiffOperator, var: Variable) -> DiffOperator:
    return f.map_coefficients(lambda c: polynomial_part(c, var))


@singledispatch
def laurent_coeff_at_infinity(f, var: Variable, n: int):
    """Coefficient of var**n, for any integer n, in the expansion at infinity."""
    raise TypeError(f"cannot expand {type(f).__name__}")


@laurent_coeff_at_infinity.register
def _(f: RationalFunction, var: Variable, n: int) -> RationalFunction:
    if n < 0:
        return series_coeff_at_infinity(f, var, -n - 1)
    return polynomial_part(f, var).numerator_coefficient(var, n).reduced()


@laurent_coeff_at_infinity.register
def _(f: DiffOperator, var: Variable, n: int) -> DiffOperator:
    return f.map_coefficients(lambda c: laurent_coeff_at_infinity(c, var, n))
