import pytest
from conftest import make_family

from gklo_verifier.errors import IndexOutOfRange
from gklo_verifier.gklo import Conventions
from gklo_verifier.monopole import (
    CONVENTION_FAMILY,
    MinusculeDatum,
    WeightOrigin,
    closed_form,
    closed_form_plus,
    dressing_residual,
    euler_oracle,
    matter_weights,
    pin_convention,
    power_dressing,
    tangent_roots,
    theorem_image,
    unit_dressing,
)


def test_pinned_convention_is_canonical():
    assert pin_convention() == CONVENTION_FAMILY[0]
    assert pin_convention() is pin_convention()


def test_convention_family_is_distinct():
    assert len(set(CONVENTION_FAMILY)) == 8


class TestDressing:
    def test_exponent_zero_is_one(self, aiii1):
        x = aiii1.x(1, 1)
        assert power_dressing(3, 2, 0)(x) == aiii1.alphabet.one

    def test_power(self, aiii1):
        x = aiii1.x(1, 1)
        expected = (2 * x + aiii1.hbar) * (2 * x + aiii1.hbar)
        assert power_dressing(2, 1, 2)(x) == expected

    def test_unit(self, aiii1):
        assert unit_dressing(aiii1.x(1, 2)) == 1

    @pytest.mark.parametrize("exponent", [0, 1, 2])
    def test_multiplicative(self, aiii1, exponent: int):
        residual = dressing_residual(aiii1, 1, power_dressing(1, 0, exponent), power_dressing(-1, 1, 1))
        assert residual.is_zero()


class TestClosedForms:
    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_theorem_image_is_B_mode(self, aiii1, m: int):
        for i in aiii1.vertices:
            assert theorem_image(aiii1, i, m) == aiii1.B_coeff(i, m)

    def test_theorem_image_on_longer_path(self, aiii2):
        for i in aiii2.vertices:
            assert theorem_image(aiii2, i, 1) == aiii2.B_coeff(i, 1)

    def test_minus_vertex_rejected(self, aiii1):
        with pytest.raises(IndexOutOfRange):
            closed_form_plus(aiii1, 2)

    def test_shift_mutation_breaks_theorem(self):
        family = make_family(1, (2, 2), (1, 1), conventions=Conventions().mutated("tau-edge-shift"))
        assert theorem_image(family, 1, 0) != family.B_coeff(1, 0)

    def test_coweight_text(self):
        assert MinusculeDatum(2).coweight == "eps[2,1]"
        assert MinusculeDatum(2, -1).coweight == "-eps[2,v]"

    def test_fixed_point_slot(self, aiii1, aiii1_small):
        assert MinusculeDatum(1).fixed_point_slot(aiii1) == 1
        assert MinusculeDatum(1, -1).fixed_point_slot(aiii1) == 2
        assert MinusculeDatum(1, -1).fixed_point_slot(aiii1_small) == 1
        assert MinusculeDatum(1, -1).describe(aiii1) == "-eps[1,2]"
        assert MinusculeDatum(1).describe(aiii1) == "eps[1,1]"


class TestEulerOracle:
    @pytest.mark.parametrize("sign", [1, -1])
    def test_matches_closed_forms(self, aiii2, sign: int):
        for i in aiii2.quiver.plus_vertices:
            datum = MinusculeDatum(i, sign)
            assert euler_oracle(aiii2, datum) == closed_form(aiii2, datum)

    def test_matches_dressed_closed_form(self, aiii1):
        f = power_dressing(1, 0, 2)
        datum = MinusculeDatum(1)
        assert euler_oracle(aiii1, datum, f) == closed_form(aiii1, datum, f)

    def test_other_convention_disagrees(self, aiii1):
        datum = MinusculeDatum(1)
        assert euler_oracle(aiii1, datum, convention=CONVENTION_FAMILY[-1]) != closed_form(aiii1, datum)

    def test_weights(self, aiii1):
        origins = [weight.origin for weight in matter_weights(aiii1)]
        # v = (2, 2), one fixed edge, one framing line per vertex
        assert origins.count(WeightOrigin.SYMMETRIC_SQUARE) == 3
        assert origins.count(WeightOrigin.FRAMING) == 4
        assert origins.count(WeightOrigin.EDGE) == 0
        assert len(tangent_roots(aiii1)) == 2
