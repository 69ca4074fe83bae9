"""
Unit tests for the expression parser.
"""

import pytest

from core.dialgebra import DialgElement, dialg_bracket, dprod_left, dprod_right
from core.errors import ParseError
from core.expressions import ExpressionParser, parse_dialgebra, parse_free, tokenize
from core.free_leibniz import FreeElement, free_bracket, left_normed


@pytest.mark.unit
class TestTokenize:
    """Test the tokenizer."""

    def test_dialgebra_operators_are_single_tokens(self):
        """Test -| and |- are not split into punctuation."""
        kinds = [t.kind for t in tokenize("x1 -| x2 |- x3")]
        assert kinds == ["name", "dleft", "name", "dright", "name", "end"]

    def test_positions(self):
        """Test token positions index into the source text."""
        tokens = tokenize("  [x1, x2]")
        assert tokens[0].position == 2
        assert tokens[-1].position == len("  [x1, x2]")

    def test_bad_character(self):
        """Test an unknown character is reported with its position."""
        with pytest.raises(ParseError) as exc:
            tokenize("x1 + $")
        assert exc.value.position == 5


@pytest.mark.unit
class TestParseFree:
    """Test parsing into the free Leibniz algebra."""

    def test_generator(self, field_q):
        """Test x3 is the generator with index 2."""
        assert parse_free("x3", field_q) == FreeElement.generator(field_q, 2)

    def test_nested_bracket(self, field_q):
        """Test [x1, [x2, x3]] expands to its normal form."""
        result = parse_free("[x1, [x2, x3]]", field_q)
        assert result.format() == "(x1 x2 x3) - (x1 x3 x2)"

    def test_coefficients_and_signs(self, field_q):
        """Test scalar multiples, fractions and leading minus."""
        result = parse_free("-x1 + 1/2*[x1, x2] - 3*(x2)", field_q)
        expected = (
            -left_normed(field_q, (0,))
            + left_normed(field_q, (0, 1)).scale("1/2")
            - left_normed(field_q, (1,)).scale(3)
        )
        assert result == expected

    def test_parentheses_group(self, field_q):
        """Test parentheses group sums inside brackets."""
        result = parse_free("[(x1 + x2), x2]", field_q)
        x1, x2 = FreeElement.generator(field_q, 0), FreeElement.generator(field_q, 1)
        assert result == free_bracket(x1, x2) + free_bracket(x2, x2)

    def test_prime_field_reduction(self, gf5):
        """Test coefficients reduce modulo p."""
        assert parse_free("6*x1", gf5) == FreeElement.generator(gf5, 0)
        assert parse_free("5*x1", gf5).is_zero()

    def test_custom_names(self, field_q):
        """Test supplied names replace the x-numbering."""
        result = parse_free("[a, t]", field_q, names=["a", "t"])
        assert result == left_normed(field_q, (0, 1))
        with pytest.raises(ParseError):
            parse_free("x1", field_q, names=["a", "t"])

    def test_generator_range(self, field_q):
        """Test generators beyond the declared count are rejected."""
        assert parse_free("x2", field_q, generators=2).degree() == 1
        with pytest.raises(ParseError):
            parse_free("x3", field_q, generators=2)

    def test_degree_cap_becomes_parse_error(self, field_q):
        """Test an over-degree bracket is reported as a parse error."""
        with pytest.raises(ParseError):
            parse_free("[[x1, x2], [x1, x2]]", field_q, degree_cap=3)

    @pytest.mark.parametrize(
        "text",
        ["", "[x1, x2", "[x1 x2]", "x1 +", "x0", "2 x1", "x1 x2", "(x1", "y1"],
    )
    def test_malformed(self, field_q, text):
        """Test malformed expressions raise ParseError."""
        with pytest.raises(ParseError):
            parse_free(text, field_q)

    def test_dialgebra_operator_in_free_mode(self, field_q):
        """Test -| is refused outside dialgebra mode at its position."""
        with pytest.raises(ParseError) as exc:
            parse_free("x1 -| x2", field_q)
        assert exc.value.position == 3


@pytest.mark.unit
class TestParseDialgebra:
    """Test parsing into the free dialgebra."""

    def test_products(self, field_q):
        """Test -| and |- build the expected center-marked words."""
        x = [DialgElement.letter(field_q, i) for i in range(3)]
        assert parse_dialgebra("x1 -| x2", field_q) == dprod_left(x[0], x[1])
        assert parse_dialgebra("x1 |- x2 |- x3", field_q) == dprod_right(
            dprod_right(x[0], x[1]), x[2]
        )

    def test_bracket_is_dialgebra_bracket(self, field_q):
        """Test [u, v] means u -| v - v |- u."""
        x1, x2 = DialgElement.letter(field_q, 0), DialgElement.letter(field_q, 1)
        assert parse_dialgebra("[x1, x2]", field_q) == dialg_bracket(x1, x2)
        assert parse_dialgebra("[x1, x2]", field_q) == parse_dialgebra(
            "x1 -| x2 - x2 |- x1", field_q
        )

    def test_parser_is_reusable(self, field_q):
        """Test one parser instance handles several inputs."""
        parser = ExpressionParser(field_q, dialgebra=True)
        assert parser.parse("x1") == DialgElement.letter(field_q, 0)
        assert parser.parse("x2") == DialgElement.letter(field_q, 1)
