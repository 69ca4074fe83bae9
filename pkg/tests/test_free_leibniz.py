"""
Unit tests for the free right Leibniz algebra.
"""

import random

import pytest

from core.errors import UsageError
from core.fdalg import bracket
from infra.fixtures import leibniz_fixtures
from core.free_leibniz import (
    FreeElement,
    basis_up_to,
    evaluate,
    format_word,
    free_bracket,
    graded_basis,
    left_normed,
    monomial_bracket,
    random_element,
    truncate,
)


def gen(field, i):
    return FreeElement.generator(field, i)


@pytest.mark.unit
class TestNormalForm:
    """Test left-normed normal forms of brackets."""

    def test_bracket_with_generator_appends(self, field_q):
        """Test [(x1 x2), x3] = (x1 x2 x3)."""
        u = left_normed(field_q, (0, 1))
        assert free_bracket(u, gen(field_q, 2)) == left_normed(field_q, (0, 1, 2))

    def test_bracket_with_longer_right_argument(self, field_q):
        """Test [x1, [x2, x3]] = (x1 x2 x3) - (x1 x3 x2)."""
        inner = free_bracket(gen(field_q, 1), gen(field_q, 2))
        result = free_bracket(gen(field_q, 0), inner)
        assert result.to_dict() == {(0, 1, 2): 1, (0, 2, 1): -1}
        assert result.format() == "(x1 x2 x3) - (x1 x3 x2)"

    def test_bracket_with_square_vanishes(self, field_q):
        """Test [x1, [x2, x2]] = 0."""
        square = free_bracket(gen(field_q, 1), gen(field_q, 1))
        assert free_bracket(gen(field_q, 0), square).is_zero()

    def test_monomial_bracket_is_integral(self):
        """Test the cached expansion has integer coefficients."""
        expansion = dict(monomial_bracket((0,), (1, 2, 3)))
        assert all(isinstance(c, int) for c in expansion.values())
        assert sum(abs(c) for c in expansion.values()) == 4

    def test_degrees_add(self, field_q):
        """Test the bracket is homogeneous of the summed degree."""
        u = left_normed(field_q, (0, 1))
        v = left_normed(field_q, (1, 0, 1))
        w = free_bracket(u, v)
        assert w.is_homogeneous()
        assert w.degree() == 5

    def test_degree_cap(self, field_q):
        """Test products above the cap are refused unless the cap is lifted."""
        u = left_normed(field_q, (0, 1, 0, 1))
        v = left_normed(field_q, (1, 0, 1))
        with pytest.raises(UsageError):
            free_bracket(u, v)
        assert free_bracket(u, v, None).degree() == 7

    def test_field_mismatch(self, field_q, gf5):
        """Test elements over different fields cannot be bracketed."""
        with pytest.raises(UsageError):
            free_bracket(gen(field_q, 0), gen(gf5, 0))


@pytest.mark.property
class TestIdentities:
    """Test the defining identity on random free elements."""

    def test_right_leibniz_identity(self, field_q):
        """Test [[x, y], z] = [[x, z], y] + [x, [y, z]] on seeded samples."""
        rng = random.Random(5)
        for _ in range(15):
            x, y, z = (random_element(field_q, rng, 3, 2) for _ in range(3))
            lhs = free_bracket(free_bracket(x, y), z)
            rhs = free_bracket(free_bracket(x, z), y) + free_bracket(
                x, free_bracket(y, z)
            )
            assert lhs == rhs

    @pytest.mark.slow
    def test_right_leibniz_identity_up_to_degree_four(self, field_q):
        """Test the identity on 200 triples of degree up to 4 in 3 generators."""
        rng = random.Random(13)
        for _ in range(200):
            x, y, z = (random_element(field_q, rng, 3, 4) for _ in range(3))
            lhs = free_bracket(free_bracket(x, y, None), z, None)
            rhs = free_bracket(free_bracket(x, z, None), y, None) + free_bracket(
                x, free_bracket(y, z, None), None
            )
            assert lhs == rhs

    def test_symmetric_brackets_are_right_annihilated(self, gf5):
        """Test [x, [y, z] + [z, y]] = 0."""
        rng = random.Random(8)
        for _ in range(15):
            x, y, z = (random_element(gf5, rng, 2, 2) for _ in range(3))
            sym = free_bracket(y, z) + free_bracket(z, y)
            assert free_bracket(x, sym).is_zero()


@pytest.mark.unit
class TestElementHelpers:
    """Test element metadata and truncation."""

    def test_components(self, field_q):
        """Test homogeneous components and generators used."""
        e = left_normed(field_q, (0,)) + left_normed(field_q, (2, 1)).scale(3)
        assert e.degree() == 2
        assert e.min_degree() == 1
        assert not e.is_homogeneous()
        assert e.generators_used() == (0, 1, 2)
        assert set(e.homogeneous_components()) == {1, 2}

    def test_truncate(self, field_q):
        """Test truncation drops high-degree words."""
        e = left_normed(field_q, (0,)) + left_normed(field_q, (0, 1, 1))
        assert truncate(e, 2) == left_normed(field_q, (0,))
        with pytest.raises(UsageError):
            truncate(e, 0)

    def test_format_with_names(self, field_q):
        """Test custom generator names such as a stable letter."""
        e = left_normed(field_q, (0, 1)).scale(-2)
        assert e.format_with(["x1", "t"]) == "-2*(x1 t)"
        assert format_word((0, 2)) == "(x1 x3)"

    def test_zero_renders(self, field_q):
        """Test the zero element prints as 0."""
        assert FreeElement.zero(field_q).format() == "0"

    def test_bases(self):
        """Test graded bases have k**d words."""
        assert len(graded_basis(2, 3)) == 8
        assert len(basis_up_to(3, 2)) == 12
        with pytest.raises(UsageError):
            graded_basis(0, 2)

    def test_monomial_needs_letters(self, field_q):
        """Test the empty word is not a monomial."""
        with pytest.raises(UsageError):
            FreeElement.monomial(field_q, ())


@pytest.mark.unit
class TestEvaluation:
    """Test evaluation into structure-constant algebras."""

    def test_evaluate_is_homomorphic(self, solvable3):
        """Test evaluating a bracket equals bracketing the evaluations."""
        f = solvable3.field
        rng = random.Random(2)
        images = [solvable3.random_element(rng) for _ in range(2)]
        for _ in range(10):
            u = random_element(f, rng, 2, 2)
            v = random_element(f, rng, 2, 2)
            lhs = evaluate(free_bracket(u, v), solvable3, images)
            rhs = bracket(
                solvable3,
                evaluate(u, solvable3, images),
                evaluate(v, solvable3, images),
            )
            assert lhs == rhs

    @pytest.mark.property
    @pytest.mark.parametrize("fx", leibniz_fixtures(), ids=lambda fx: fx.name)
    def test_evaluate_is_homomorphic_on_fixtures(self, fx):
        """Test evaluation commutes with brackets on 100 pairs per fixture."""
        a = fx.algebra
        f = a.field
        rng = random.Random(17)
        images = [a.random_element(rng) for _ in range(3)]
        for _ in range(100):
            u = random_element(f, rng, 3, 3)
            v = random_element(f, rng, 3, 3)
            lhs = evaluate(free_bracket(u, v), a, images)
            rhs = bracket(a, evaluate(u, a, images), evaluate(v, a, images))
            assert lhs == rhs

    def test_evaluate_word(self, sl2):
        """Test (x1 x2) with x1 = e, x2 = f evaluates to h."""
        f = sl2.field
        images = {0: sl2.basis_vector(0), 1: sl2.basis_vector(1)}
        value = evaluate(left_normed(f, (0, 1)), sl2, images)
        assert value == sl2.basis_vector(2)

    def test_missing_generator(self, sl2):
        """Test an unassigned generator is a usage error."""
        with pytest.raises(UsageError):
            evaluate(left_normed(sl2.field, (0, 3)), sl2, [sl2.basis_vector(0)])

    def test_field_mismatch(self, sl2, gf5):
        """Test the element and target must share a field."""
        with pytest.raises(UsageError):
            evaluate(left_normed(gf5, (0,)), sl2, [sl2.basis_vector(0)])
