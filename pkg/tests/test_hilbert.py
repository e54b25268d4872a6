"""
Tests for Hilbert series and local cohomology dimensions
"""
from django.test import SimpleTestCase

from algebra.exceptions import AlgebraError, ZeroModuleError
from algebra.fmodule import PresentedModule
from algebra.hilbert import (
    HilbertSeries,
    depth,
    is_cohen_macaulay,
    is_locally_cohen_macaulay,
    is_unmixed,
    local_cohomology_hf,
    riemann_roch_check,
)
from algebra.poly import PolynomialRing
from linkage.definitions import load_definitions


class HilbertSeriesTestCase(SimpleTestCase):
    """Test series arithmetic"""

    def test_reduced_form(self):
        """(1 - t^2) / (1 - t)^2 reduces to (1 + t) / (1 - t)"""
        series = HilbertSeries.from_dict({0: 1, 2: -1}, 2)
        reduced, d = series.reduced()
        self.assertEqual(d, 1)
        self.assertEqual(reduced, {0: 1, 1: 1})
        self.assertEqual(series.coefficient(5), 2)

    def test_shift(self):
        series = HilbertSeries.from_dict({0: 1}, 1)
        self.assertEqual(series.shift(2).numerator, ((-2, 1),))
        self.assertEqual(series.shift(2).coefficient(-2), 1)

    def test_addition_and_difference(self):
        first = HilbertSeries.from_dict({0: 1, 1: -1}, 2)
        second = HilbertSeries.from_dict({1: 1}, 2)
        self.assertEqual((first + second).numerator, ((0, 1),))
        self.assertTrue((first - first).is_zero)

    def test_zero_module_has_no_dimension(self):
        ring = PolynomialRing(['x', 'y'], 32003)
        zero = PresentedModule.zero(ring)
        self.assertTrue(zero.hilbert.is_zero)
        self.assertEqual(zero.hilbert.function(3), 0)
        with self.assertRaises(ZeroModuleError):
            is_unmixed(zero)


class TwistedCubicCohomologyTestCase(SimpleTestCase):
    """Test the arithmetically Cohen-Macaulay twisted cubic"""

    def setUp(self):
        self.cubic = load_definitions(['TC']).module('TC')

    def test_cohen_macaulay(self):
        self.assertTrue(is_cohen_macaulay(self.cubic))
        self.assertTrue(is_locally_cohen_macaulay(self.cubic))
        self.assertTrue(is_unmixed(self.cubic))
        self.assertEqual(depth(self.cubic), 2)

    def test_top_cohomology(self):
        """H^2 in degree -1 is H^1(O_P1(-3))"""
        self.assertEqual(local_cohomology_hf(self.cubic, 2, -1), 2)
        self.assertEqual(local_cohomology_hf(self.cubic, 2, 0), 0)
        self.assertEqual(local_cohomology_hf(self.cubic, 1, 0), 0)

    def test_riemann_roch(self):
        for j in range(-4, 6):
            self.assertTrue(riemann_roch_check(self.cubic, j))


class SkewLinesCohomologyTestCase(SimpleTestCase):
    """Test two skew lines: locally Cohen-Macaulay, not Cohen-Macaulay"""

    def setUp(self):
        self.lines = load_definitions(['SKEW']).module('SKEW')

    def test_not_cohen_macaulay(self):
        self.assertEqual(self.lines.codim, 2)
        self.assertFalse(is_cohen_macaulay(self.lines))
        self.assertTrue(is_locally_cohen_macaulay(self.lines))
        self.assertTrue(is_unmixed(self.lines))
        self.assertEqual(depth(self.lines), 1)

    def test_deficiency_module(self):
        """H^1 is one-dimensional, concentrated in degree 0"""
        self.assertEqual(local_cohomology_hf(self.lines, 1, 0), 1)
        self.assertEqual(local_cohomology_hf(self.lines, 1, 1), 0)
        self.assertEqual(local_cohomology_hf(self.lines, 1, -1), 0)

    def test_riemann_roch(self):
        for j in range(-3, 5):
            self.assertTrue(riemann_roch_check(self.lines, j))


class EmbeddedPointTestCase(SimpleTestCase):
    """Test R/(x^2, xy) in K[x, y]: the line x = 0 with an embedded point"""

    def setUp(self):
        ring = PolynomialRing(['x', 'y'], 32003)
        x, y = ring.gens
        self.module = PresentedModule.quotient_ring(ring, [x ** 2, x * y])

    def test_not_unmixed(self):
        self.assertEqual(self.module.dimension, 1)
        self.assertFalse(is_unmixed(self.module))
        self.assertFalse(is_cohen_macaulay(self.module))

    def test_embedded_point_in_degree_one(self):
        """H^0 is spanned by the class of x"""
        self.assertEqual(local_cohomology_hf(self.module, 0, 1), 1)
        self.assertEqual(local_cohomology_hf(self.module, 0, 0), 0)
        self.assertEqual(local_cohomology_hf(self.module, 0, 2), 0)

    def test_cohomology_of_the_line(self):
        """H^1 is H^1 of K[y], nonzero exactly in negative degrees"""
        self.assertEqual(local_cohomology_hf(self.module, 1, -1), 1)
        self.assertEqual(local_cohomology_hf(self.module, 1, -3), 1)
        self.assertEqual(local_cohomology_hf(self.module, 1, 0), 0)

    def test_riemann_roch(self):
        for j in range(-3, 4):
            self.assertTrue(riemann_roch_check(self.module, j))


class LocalCohomologyIndexTestCase(SimpleTestCase):
    """Test the range of local cohomology indices"""

    def test_index_out_of_range(self):
        cubic = load_definitions(['TC']).module('TC')
        for index in (-1, 5):
            with self.assertRaises(AlgebraError):
                local_cohomology_hf(cubic, index, 0)
