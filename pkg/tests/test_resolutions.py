"""
Tests for minimal resolutions, E/Q-type resolutions and stable classes
"""
import random

import pytest
from django.test import SimpleTestCase

from algebra.exceptions import AlgebraError
from algebra.fmodule import PresentedModule, direct_sum, minimalize, twist
from algebra.resolutions import (
    StableVerdict,
    e_type,
    has_free_summand,
    phi_psi,
    q_type,
    stable_equiv,
    strip_free_summands,
    verify_q_type,
)
from linkage.definitions import load_definitions


class MinimalResolutionTestCase(SimpleTestCase):
    """Test minimal free resolutions"""

    def setUp(self):
        self.defs = load_definitions(['TC', 'LINE'])
        self.cubic = self.defs.module('TC')
        self.line = self.defs.module('LINE')

    def test_resolution_is_a_minimal_complex(self):
        resolution = self.cubic.resolution
        self.assertTrue(resolution.verify_complex())
        self.assertFalse(resolution.has_unit_entries())
        self.assertEqual(resolution.length, 2)
        self.assertEqual(resolution.ranks, [1, 3, 2])

    def test_koszul_resolution_of_line(self):
        self.assertEqual(self.line.resolution.betti_table, {0: {0: 1}, 1: {1: 2}, 2: {2: 1}})

    def test_direct_sum_adds_betti_numbers(self):
        total = self.cubic.resolution.direct_sum(self.line.resolution)
        self.assertEqual(total.ranks, [2, 5, 3])
        self.assertTrue(total.verify_complex())

    def test_self_duality_twists(self):
        """D_2 of the cubic is D_0^*(s) with s = -3"""
        resolution = self.cubic.resolution
        self.assertEqual(resolution.dual_twists(0, -3), (3,))


class TypedResolutionTestCase(SimpleTestCase):
    """Test E-type resolutions"""

    def test_perfect_module_has_free_tail(self):
        cubic = load_definitions(['TC']).module('TC')
        estep = e_type(cubic)
        self.assertEqual(estep.codim, 2)
        self.assertTrue(estep.tail.is_free)
        self.assertEqual(minimalize(estep.tail).rank, 2)
        self.assertTrue(estep.complex.verify())

    def test_square_matrix_tail_is_its_source(self):
        matrix = load_definitions(['A2x2']).matrix('A2x2')
        estep = e_type(matrix.to_module())
        self.assertEqual(estep.codim, 1)
        self.assertTrue(estep.tail.is_free)
        self.assertEqual(estep.tail.rank, 2)

    def test_zero_codimension_rejected(self):
        ring = load_definitions(['X']).ring
        with self.assertRaises(AlgebraError):
            e_type(PresentedModule.free(ring, (0,)))


class ExchangeSignatureTestCase(SimpleTestCase):
    """Test the cohomology of the Q-type middle module"""

    @pytest.mark.slow
    def test_exchanged_q_type_signature(self):
        """Vanishing band and shifted cohomology of the Q-type middle module"""
        for name in ('TC', 'SKEW'):
            with self.subTest(name=name):
                module = load_definitions([name]).module(name)
                qstep = q_type(module, random.Random(7))
                report = verify_q_type(qstep, (-3, 5))
                self.assertEqual(report, {
                    'complex': True,
                    'euler_characteristic': True,
                    'vanishing_band': True,
                    'shifted_cohomology': True,
                })


class StableEquivalenceTestCase(SimpleTestCase):
    """Test stable equivalence up to free summands and shifts"""

    def setUp(self):
        self.defs = load_definitions(['TC', 'LINE'])
        self.cubic = self.defs.module('TC')
        self.rng = random.Random(3)

    def test_free_summand_and_shift(self):
        ring = self.defs.ring
        padded = direct_sum(self.cubic, PresentedModule.free(ring, (2,)))
        result = stable_equiv(padded, twist(self.cubic, 3), self.rng)
        self.assertIs(result.verdict, StableVerdict.CERTIFIED_EQUIVALENT)
        self.assertEqual(result.shift, -3)

    def test_distinct_modules(self):
        result = stable_equiv(self.cubic, self.defs.module('LINE'), self.rng)
        self.assertIs(result.verdict, StableVerdict.CERTIFIED_DISTINCT)

    def test_free_modules_are_stably_trivial(self):
        ring = self.defs.ring
        rep = strip_free_summands(PresentedModule.free(ring, (0, 1, 1)))
        self.assertTrue(rep.is_trivial)
        self.assertEqual(rep.free_twists, (0, 1, 1))

    def test_free_summand_detection(self):
        ring = self.defs.ring
        self.assertTrue(has_free_summand(direct_sum(self.cubic, PresentedModule.free(ring, (1,)))))
        self.assertFalse(has_free_summand(self.cubic))
        self.assertFalse(has_free_summand(strip_free_summands(self.cubic).module))

    def test_phi_of_perfect_module_is_trivial(self):
        tail, middle = phi_psi(self.cubic, self.rng)
        self.assertTrue(tail.is_trivial)
