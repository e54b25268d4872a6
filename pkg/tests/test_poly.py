"""
Tests for polynomial rings, parsing and canonical printing
"""
import random

from django.test import SimpleTestCase

from algebra.exceptions import (
    AlgebraError,
    PolynomialSyntaxError,
    RingMismatchError,
    UnknownVariableError,
)
from algebra.poly import PolynomialRing, degree, is_homogeneous, poly_arith


class PolynomialArithmeticTestCase(SimpleTestCase):
    """Test arithmetic in GF(p)[x, y]"""

    def setUp(self):
        self.ring = PolynomialRing(['x', 'y'], 32003)
        self.x, self.y = self.ring.gens

    def test_difference_of_squares(self):
        """(x+y)(x-y) = x^2 - y^2"""
        product = poly_arith(self.x + self.y, self.x - self.y, 'mul')
        self.assertEqual(product, self.x ** 2 - self.y ** 2)
        self.assertEqual(self.ring.format(product), 'x^2 - y^2')

    def test_multiplication_by_zero(self):
        self.assertEqual(poly_arith(self.x + self.y, self.ring.zero, 'mul'), self.ring.zero)
        self.assertEqual(self.ring.format(self.ring.zero), '0')

    def test_small_characteristic_expansion(self):
        """(x+y)^2 over GF(3) is x^2 + 2xy + y^2"""
        ring = PolynomialRing(['x', 'y'], 3)
        x, y = ring.gens
        self.assertEqual((x + y) ** 2, ring.parse('x^2 + 2*x*y + y^2'))

    def test_characteristic_two_rejected(self):
        with self.assertRaises(AlgebraError):
            PolynomialRing(['x', 'y'], 2)

    def test_composite_characteristic_rejected(self):
        with self.assertRaises(AlgebraError):
            PolynomialRing(['x'], 15)

    def test_ring_mismatch(self):
        other = PolynomialRing(['x', 'y', 'z'], 32003)
        with self.assertRaises(RingMismatchError):
            poly_arith(self.x, other.gens[0], 'add')

    def test_degree_is_additive(self):
        """deg(fg) = deg f + deg g for homogeneous inputs"""
        rng = random.Random(3)
        for _ in range(20):
            f = self.ring.random_form(2, rng)
            g = self.ring.random_form(3, rng)
            if f and g:
                self.assertTrue(is_homogeneous(f * g))
                self.assertEqual(degree(f * g), 5)

    def test_ring_axioms_on_random_triples(self):
        rng = random.Random(11)
        for _ in range(200):
            f, g, h = (self.ring.random_form(rng.randrange(3), rng) for _ in range(3))
            self.assertEqual((f * g) * h, f * (g * h))
            self.assertEqual(f * (g + h), f * g + f * h)

    def test_inhomogeneous_detected(self):
        self.assertFalse(is_homogeneous(self.x ** 2 + self.y))
        self.assertTrue(is_homogeneous(self.ring.zero))


class PolynomialParsingTestCase(SimpleTestCase):
    """Test the polynomial grammar"""

    def setUp(self):
        self.ring = PolynomialRing.standard(4, 32003)

    def test_binomial(self):
        f = self.ring.parse('x0*x2 - x1^2')
        self.assertEqual(degree(f), 2)
        self.assertEqual(len(f.terms()), 2)
        self.assertTrue(is_homogeneous(f))

    def test_like_terms_collected(self):
        ring = PolynomialRing(['x', 'y'], 32003)
        self.assertEqual(ring.parse('3*x + x'), 4 * ring.gens[0])
        self.assertEqual(ring.format(ring.parse('3*x + x')), '4*x')

    def test_implicit_multiplication(self):
        ring = PolynomialRing(['x', 'y'], 32003)
        x, y = ring.gens
        self.assertEqual(ring.parse('3x^2y'), 3 * x ** 2 * y)

    def test_unknown_variable(self):
        ring = PolynomialRing(['x', 'y'], 32003)
        with self.assertRaises(UnknownVariableError) as cm:
            ring.parse('y^2*z')
        self.assertEqual(cm.exception.name, 'z')

    def test_syntax_error_has_position(self):
        with self.assertRaises(PolynomialSyntaxError) as cm:
            self.ring.parse('x0 + * x1')
        self.assertEqual(cm.exception.position, 5)

    def test_empty_text_rejected(self):
        with self.assertRaises(PolynomialSyntaxError):
            self.ring.parse('   ')

    def test_print_parse_identity(self):
        rng = random.Random(5)
        for d in range(4):
            f = self.ring.random_form(d, rng)
            self.assertEqual(self.ring.parse(self.ring.format(f)), f)

    def test_negative_coefficients_print_symmetric(self):
        f = self.ring.parse('x0 - 2*x1')
        self.assertIn('- 2*x1', self.ring.format(f))
