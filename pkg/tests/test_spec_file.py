import pytest
from conftest import AIII_N1
from hypothesis import given
from hypothesis import strategies as st

from gklo_verifier.errors import ParseError, ValidationError
from gklo_verifier.quiver import DimensionData, aiii
from gklo_verifier.spec_file import QuiverSpecFile, parse_file, parse_spec, read_spec


def test_parse_six_vertices(aiii3_text: str):
    spec = parse_file(aiii3_text)
    assert spec.vertices == (1, 2, 3, 4, 5, 6)
    assert spec.tau == ((1, 6), (2, 5), (3, 4))
    assert spec.edges == ((1, 2), (3, 2), (3, 4), (5, 4), (5, 6))
    assert spec.dims_w == ((1, 1), (6, 1))
    assert spec.plus is None


def test_parse_matches_builtin(aiii3_text: str):
    quiver, dims = parse_spec(aiii3_text)
    assert quiver == aiii(3)
    assert dims.dim_v(4) == 1
    assert dims.dim_w(3) == 0


def test_plus_override():
    spec = read_spec(AIII_N1 + "plus = 2\n")
    assert spec.quiver().plus_vertices == (2,)


class TestParseErrors:
    def test_bad_pair(self):
        with pytest.raises(ParseError) as info:
            parse_file("vertices = 1 2\ntau = 1-2\ndims_v = 1:1 2:1\n")
        assert (info.value.line, info.value.column) == (2, 7)

    def test_unknown_key(self):
        with pytest.raises(ParseError) as info:
            parse_file("vertices = 1 2\n  colour = red\n")
        assert (info.value.line, info.value.column) == (2, 3)
        assert "colour" in info.value.message

    def test_missing_key(self):
        with pytest.raises(ParseError, match="dims_v"):
            parse_file("vertices = 1 2\ntau = 1:2\n")

    def test_duplicate_key(self):
        with pytest.raises(ParseError, match="twice"):
            parse_file(AIII_N1 + "tau = 1:2\n")

    def test_duplicate_dimension(self):
        with pytest.raises(ParseError) as info:
            parse_file("vertices = 1 2\ntau = 1:2\ndims_v = 1:1 1:2\n")
        assert info.value.line == 3

    def test_missing_equals(self):
        with pytest.raises(ParseError) as info:
            parse_file("vertices 1 2\n")
        assert info.value.line == 1

    def test_comments_and_blank_lines(self):
        spec = parse_file("# header\n\n" + AIII_N1)
        assert spec.vertices == (1, 2)


class TestValidation:
    def _axioms(self, text: str) -> set[str]:
        with pytest.raises(ValidationError) as info:
            read_spec(text)
        return {violation.axiom for violation in info.value.violations}

    def test_fixed_point(self):
        assert "fixed-point-free" in self._axioms("vertices = 1 2\ntau = 1:1 2:2\ndims_v = 1:1 2:1\n")

    def test_double_edge(self):
        text = "vertices = 1 2\ntau = 1:2\nedges = 1>2 1>2\ndims_v = 1:1 2:1\n"
        assert "multiplicity" in self._axioms(text)

    def test_missing_partner_edge(self):
        text = "vertices = 1 2 3 4\ntau = 1:4 2:3\nedges = 1>2\ndims_v = 1:1 2:1 3:1 4:1\n"
        assert self._axioms(text) == {"edge-involution"}

    def test_dimension_not_tau_invariant(self):
        assert "tau-invariant-v" in self._axioms("vertices = 1 2\ntau = 1:2\ndims_v = 1:2 2:1\n")

    def test_vertex_in_two_pairs(self):
        assert "involution" in self._axioms("vertices = 1 2 3\ntau = 1:2 1:3\ndims_v = 1:1 2:1 3:1\n")

    def test_plus_must_pick_one_per_orbit(self):
        assert "plus" in self._axioms(AIII_N1 + "plus = 1 2\n")


class TestDigest:
    def test_canonical_text_drops_zero_dims(self):
        spec = parse_file("vertices = 2 1\ntau = 2:1\ndims_v = 2:1 1:1\ndims_w = 1:0\n")
        assert spec.canonical_text() == "vertices = 1 2\ntau = 1:2\nedges =\ndims_v = 1:1 2:1\ndims_w =\n"

    def test_from_models(self):
        quiver = aiii(1)
        dims = DimensionData.build({1: 1, 2: 1}, {1: 1, 2: 1})
        assert QuiverSpecFile.from_models(quiver, dims).digest() == parse_file(AIII_N1).digest()

    @given(st.permutations([(1, 6), (2, 5), (3, 4)]), st.permutations([(1, 2), (3, 2), (3, 4), (5, 4), (5, 6)]))
    def test_invariant_under_reordering(self, tau, edges):
        base = parse_file("vertices = 1 2 3 4 5 6\ntau = 1:6 2:5 3:4\nedges = 1>2 3>2 3>4 5>4 5>6\ndims_v = 1:1 6:1\n")
        text = (
            "vertices = 6 5 4 3 2 1\n"
            f"tau = {' '.join(f'{b}:{a}' for a, b in tau)}\n"
            f"edges = {' '.join(f'{s}>{t}' for s, t in edges)}\n"
            "dims_v = 6:1 1:1 3:0\n"
        )
        assert parse_file(text).digest() == base.digest()
