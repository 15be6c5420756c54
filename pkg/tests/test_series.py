import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gklo_verifier.difference import DiffOperator, Torus
from gklo_verifier.errors import NotAPole, RepeatedPole
from gklo_verifier.quiver import DimensionData, aiii
from gklo_verifier.series import (
    laurent_coeff_at_infinity,
    pole_profile,
    polynomial_part,
    residue_at,
    series_coeff_at_infinity,
    truncate,
)
from gklo_verifier.symbolic import U, RationalFunction

TORUS = Torus(aiii(1), DimensionData.build({1: 2, 2: 2}))
ALPHABET = TORUS.alphabet
u = TORUS.series("u")
x = TORUS.x(1, 1)
y = TORUS.x(1, 2)
hbar = TORUS.hbar


def frac(numerator=(), denominator=(), scalar=1) -> RationalFunction:
    return RationalFunction.from_factors(ALPHABET, numerator, denominator, scalar)


class TestPoles:
    def test_profile(self):
        profile = pole_profile(frac([x], [2 * u - x, y + hbar]), U)
        (pole,) = profile.poles
        assert pole.root == x / 2
        assert pole.multiplicity == 1

    def test_residue(self):
        f = frac([u], [u - x, u - y])
        assert residue_at(f, U, x) == frac([x], [x - y])
        with pytest.raises(NotAPole):
            residue_at(f, U, hbar)

    def test_scaled_pole(self):
        f = frac([], [3 * u + x])
        assert residue_at(f, U, -x / 3) == frac(scalar=1) / 3

    def test_repeated_pole(self):
        f = RationalFunction(ALPHABET, ALPHABET.ring.one, [(u - x, 2)])
        with pytest.raises(RepeatedPole):
            truncate(f, U)

    def test_removable_repeat_is_reduced(self):
        f = RationalFunction(ALPHABET, (u - x).poly, [(u - x, 2)])
        assert truncate(f, U) == frac([], [u - x])


class TestTruncate:
    def test_proper_part(self):
        f = frac([u, u], [u - x]) + u * 3
        proper = truncate(f, U)
        assert proper == frac([x, x], [u - x])
        assert polynomial_part(f, U) == u * 4 + x

    def test_operator_coefficientwise(self):
        d = TORUS.d(1, 1)
        op = DiffOperator.shift(TORUS, d, frac([u], [u - y]))
        assert truncate(op, U) == DiffOperator.shift(TORUS, d, frac([y], [u - y]))

    def test_free_function(self):
        assert truncate(frac([x], [y + hbar]), U).is_zero()


class TestExpansion:
    def test_negative_mode(self):
        with pytest.raises(ValueError):
            series_coeff_at_infinity(frac([], [u - x]), U, -1)

    def test_laurent_both_sides(self):
        f = u * u + u * 3 + frac([], [u - x])
        assert laurent_coeff_at_infinity(f, U, 2) == 1
        assert laurent_coeff_at_infinity(f, U, 1) == 3
        assert laurent_coeff_at_infinity(f, U, 0) == 0
        assert laurent_coeff_at_infinity(f, U, -1) == 1
        assert laurent_coeff_at_infinity(f, U, -3) == x * x

    @settings(max_examples=20, deadline=None)
    @given(m=st.integers(min_value=0, max_value=4), a=st.integers(min_value=-3, max_value=3))
    def test_power_sums(self, m: int, a: int):
        f = frac([], [u - x]) + frac([], [u - y - hbar * a])
        expected = (x.as_function() ** m) + ((y + hbar * a).as_function() ** m)
        assert series_coeff_at_infinity(f, U, m) == expected
