import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gklo_verifier.difference import (
    IDENTITY,
    DiffOperator,
    ShiftMonomial,
    Torus,
    anticommutator,
    commutator,
    op_equal,
    op_mul,
)
from gklo_verifier.errors import IndexOutOfRange
from gklo_verifier.quiver import DimensionData, aiii
from gklo_verifier.symbolic import RationalFunction, Variable

TORUS = Torus(aiii(1), DimensionData.build({1: 2, 2: 2}, {1: 1, 2: 1}))
x1 = TORUS.x(1, 1)
x2 = TORUS.x(1, 2)
hbar = TORUS.hbar
d1 = TORUS.d(1, 1)
d2 = TORUS.d(1, 2)


def shift(monomial: ShiftMonomial, coeff=1) -> DiffOperator:
    return DiffOperator.shift(TORUS, monomial, coeff)


class TestShiftMonomial:
    def test_text(self):
        assert str(ShiftMonomial.from_mapping({(2, 1): -1, (1, 1): 1})) == "d[1,1]*d[2,1]^-1"
        assert str(IDENTITY) == "1"

    def test_group_law(self):
        assert d1 * d1.inverse() == IDENTITY
        assert (d1 * d2).exponent(1, 2) == 1
        assert (d1 * d1).exponent(1, 1) == 2


class TestTorus:
    def test_mirror_coordinates(self):
        assert TORUS.x(2, 1) == -x1
        assert TORUS.d(2, 1) == TORUS.d(1, 1, -1)

    def test_flipped_mirror(self):
        torus = Torus(aiii(1), DimensionData.build({1: 1, 2: 1}), mirror_sign=1)
        assert torus.x(2, 1) == torus.x(1, 1)

    def test_slot_range(self):
        with pytest.raises(IndexOutOfRange):
            TORUS.x(1, 3)
        with pytest.raises(IndexOutOfRange):
            TORUS.w(1, 2)

    def test_shift_action(self):
        f = RationalFunction.from_factors(TORUS.alphabet, [x1], [x1 - x2])
        shifted = TORUS.shift_action(d1, f)
        assert shifted == RationalFunction.from_factors(TORUS.alphabet, [x1 + hbar], [x1 - x2 + hbar])
        assert TORUS.shift_action(IDENTITY, f) is f


class TestDiffOperator:
    def test_shift_rule(self):
        x = DiffOperator.scalar(TORUS, x1)
        assert shift(d1) * x == DiffOperator.scalar(TORUS, x1 + hbar) * shift(d1)
        assert commutator(shift(d1), x) == shift(d1, hbar)

    def test_conjugate(self):
        x = DiffOperator.scalar(TORUS, x1)
        assert x.conjugate(d1) == DiffOperator.scalar(TORUS, x1 + hbar)

    def test_zero_terms_dropped(self):
        op = shift(d1, x1) - shift(d1, x1)
        assert op.is_zero()
        assert len(op) == 0
        assert str(op) == "0"

    def test_terms_sorted_by_shift(self):
        op = shift(d2) + shift(d1) + DiffOperator.scalar(TORUS, 1)
        assert op.shifts() == tuple(sorted([d1, d2, IDENTITY]))

    def test_text_truncation(self):
        op = shift(d2) + shift(d1) + shift(d1 * d2)
        assert op.to_text(max_terms=1).endswith("... (2 more terms)")
        assert len(op.term_texts()) == 3

    def test_substitute_inert_only(self):
        op = shift(d1, TORUS.series("u"))
        assert op.substitute({Variable.series("u"): hbar}) == shift(d1, hbar)
        with pytest.raises(ValueError):
            op.substitute({Variable.x(1, 1): hbar})

    def test_scalar_arithmetic(self):
        op = shift(d1, x1)
        assert op * 2 == 2 * op == op + op
        assert (op / 2) * 2 == op
        assert anticommutator(op, op) == op_mul(op, op) * 2

    @settings(max_examples=20, deadline=None)
    @given(
        a=st.integers(min_value=-2, max_value=2),
        b=st.integers(min_value=-2, max_value=2),
        c=st.integers(min_value=-2, max_value=2),
    )
    def test_associative(self, a: int, b: int, c: int):
        p = shift(ShiftMonomial.from_mapping({(1, 1): a}), x1 - x2 + hbar)
        q = shift(ShiftMonomial.from_mapping({(1, 2): b}), RationalFunction.from_factors(TORUS.alphabet, [], [x1 - x2]))
        r = shift(ShiftMonomial.from_mapping({(1, 1): c, (1, 2): 1}), x2)
        assert op_equal((p * q) * r, p * (q * r))
        assert p * (q + r) == p * q + p * r
