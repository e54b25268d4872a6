"""
Tests for quasi-Gorenstein certificates, direct links and link chains
"""
import random

import pytest
from django.test import SimpleTestCase

from algebra.fmodule import (
    ModuleMap,
    PresentedModule,
    Verdict,
    direct_sum,
    identity_map,
    is_isomorphic,
    minimalize,
    twist,
)
from algebra.hilbert import local_cohomology_hf
from algebra.poly import PolynomialRing
from linkage.definitions import load_definitions
from linkage.exceptions import DegenerateLinkError, LinkageError
from linkage.liaison import (
    LinkChain,
    build_linking_module,
    certify_quasi_gorenstein,
    chain_cohomology_check,
    double_link_check,
    even_chain_identity,
    link,
    maximal_link_check,
    require_certificate,
    self_link,
    shift_link_chain,
    sm_link_ideals,
    split_summand_chain,
    verify_link_formulas,
)


def cover(cert, module):
    """The map C -> M sending generator i to generator i"""
    return ModuleMap(cert.module, module, [module.target.basis_vector(i) for i in range(module.rank)])


class LiaisonTestCase(SimpleTestCase):
    """Twisted cubic, its line and the complete intersection of two quadrics"""

    def setUp(self):
        self.rng = random.Random(7)
        self.defs = load_definitions(['TC', 'LINE'])
        self.cubic = self.defs.module('TC')
        self.line = self.defs.module('LINE')
        self.complete_intersection = self.defs.module('CTC')
        self.ring = self.defs.ring

    @property
    def ci_cert(self):
        return require_certificate(self.complete_intersection, self.rng)


class CertificateTestCase(LiaisonTestCase):
    """Test quasi-Gorenstein certification"""

    def test_complete_intersection_is_certified(self):
        result = certify_quasi_gorenstein(self.complete_intersection, self.rng)
        self.assertIs(result.verdict, Verdict.YES)
        cert = result.cert
        self.assertEqual(cert.codim, 2)
        self.assertEqual((cert.s, cert.t), (-4, 0))
        self.assertTrue(all(cert.verify().values()))

    def test_free_module_is_certified(self):
        result = certify_quasi_gorenstein(PresentedModule.free(self.ring, (0,)), self.rng)
        self.assertIs(result.verdict, Verdict.YES)
        self.assertEqual((result.cert.s, result.cert.t), (0, 4))

    def test_twisted_cubic_is_not_self_dual(self):
        result = certify_quasi_gorenstein(self.cubic, self.rng)
        self.assertIs(result.verdict, Verdict.NO)
        self.assertEqual(result.reason, 'Betti table is not self-dual')

    def test_unbalanced_sum_is_not_self_dual(self):
        """C + C + C(1) has a non-symmetric Betti table"""
        ci = self.complete_intersection
        total = direct_sum(direct_sum(ci, ci), twist(ci, 1))
        result = certify_quasi_gorenstein(total, self.rng)
        self.assertIs(result.verdict, Verdict.NO)
        self.assertEqual(result.reason, 'Betti table is not self-dual')

    def test_skew_lines_are_not_perfect(self):
        lines = load_definitions(['SKEW']).module('SKEW')
        result = certify_quasi_gorenstein(lines, self.rng)
        self.assertIs(result.verdict, Verdict.NO)
        self.assertTrue(result.reason.startswith('not perfect'))

    def test_embedded_point_is_not_perfect(self):
        ring = PolynomialRing(['x', 'y'], 32003)
        x, y = ring.gens
        result = certify_quasi_gorenstein(PresentedModule.quotient_ring(ring, [x ** 2, x * y]), self.rng)
        self.assertIs(result.verdict, Verdict.NO)
        self.assertTrue(result.reason.startswith('not perfect'))

    def test_require_certificate_raises(self):
        with self.assertRaises(LinkageError):
            require_certificate(self.cubic, self.rng)

    def test_twisted_certificate(self):
        cert = self.ci_cert
        twisted = cert.twist(1)
        self.assertEqual((twisted.s, twisted.t), (cert.s + 2, cert.t + 2))
        self.assertIs(twisted.alpha.source, twisted.module)
        self.assertTrue(all(twisted.verify().values()))

    def test_certificate_sum(self):
        cert = self.ci_cert
        total = cert.direct_sum(cert)
        self.assertEqual(total.module.rank, 2)
        self.assertIs(total.alpha.source, total.module)
        self.assertTrue(all(total.verify().values()))


class DirectLinkTestCase(LiaisonTestCase):
    """Test links of the twisted cubic"""

    def setUp(self):
        super().setUp()
        self.cert = self.ci_cert
        self.step = link(self.cubic, self.cert, cover(self.cert, self.cubic))

    def test_link_by_complete_intersection_gives_the_line(self):
        self.assertEqual(self.step.result.hilbert.series, self.line.hilbert.series)
        self.assertIs(is_isomorphic(self.step.result, self.line, self.rng).verdict, Verdict.YES)
        self.assertEqual(self.step.t, 0)

    def test_link_formulas(self):
        report = verify_link_formulas(self.step)
        for key in ('degree', 'exact_sequence', 'top_cohomology', 'riemann_roch', 'cohen_macaulay'):
            self.assertIs(report[key], True)

    def test_genus_and_polynomial_formulas(self):
        """h_1 and the Hilbert polynomial of the line follow from the cubic"""
        report = verify_link_formulas(self.step)
        self.assertIs(report['h1'], True)
        self.assertIs(report['locally_cm_polynomial'], True)
        self.assertEqual(self.cubic.hilbert.h_coefficients, (3, 1))
        self.assertEqual(self.step.result.hilbert.h_coefficients, (1, 1))

    def test_degree_additivity(self):
        degrees = (self.cert.module.hilbert.degree, self.cubic.hilbert.degree, self.step.result.hilbert.degree)
        self.assertEqual(degrees, (4, 3, 1))

    def test_injective_epimorphism_is_degenerate(self):
        with self.assertRaises(DegenerateLinkError):
            link(self.complete_intersection, self.cert, identity_map(self.complete_intersection))

    def test_map_must_start_at_certified_module(self):
        other = self.defs.module('CTC')
        phi = ModuleMap(other, self.cubic, [self.cubic.target.basis_vector(0)])
        with self.assertRaises(LinkageError):
            link(self.cubic, self.cert, phi)

    def test_result_map_is_an_epimorphism(self):
        self.assertIs(self.step.result_map.source, self.cert.module)
        self.assertTrue(self.step.artifacts['result_map_surjective'])
        self.assertTrue(self.step.artifacts['unmixed'])


class ChainTestCase(LiaisonTestCase):
    """Test double links and even chains"""

    def test_double_link_returns_the_module(self):
        chain, report = double_link_check(self.cubic, rng=self.rng)
        self.assertEqual(len(chain), 2)
        self.assertEqual(chain.parity, 'even')
        self.assertTrue(report['hilbert_function'] and report['betti_table'])
        self.assertIn(report['isomorphism'], ('YES', 'UNKNOWN'))

    def test_even_chain_identity(self):
        chain, _ = double_link_check(self.cubic, rng=self.rng)
        report = even_chain_identity(chain)
        self.assertTrue(report['holds'])
        self.assertTrue(report['twist_difference'])
        self.assertEqual(report['shift'], 0)

    def test_even_chain_identity_needs_two_steps(self):
        cert = self.ci_cert
        step = link(self.cubic, cert, cover(cert, self.cubic))
        with self.assertRaises(LinkageError):
            even_chain_identity(LinkChain((step,)))

    def test_self_link_of_perfect_module(self):
        step, iso = self_link(self.line, self.rng)
        self.assertEqual(step.result.hilbert.series, self.line.hilbert.series)
        self.assertIsNot(iso.verdict, Verdict.NO)

    def test_self_link_needs_perfect_module(self):
        with self.assertRaises(LinkageError):
            self_link(load_definitions(['SKEW']).module('SKEW'), self.rng)

    @pytest.mark.slow
    def test_shift_chain_reaches_the_twist(self):
        chain = shift_link_chain(self.line, 1, self.rng)
        self.assertEqual(len(chain), 4)
        self.assertEqual(chain.target.hilbert.series, self.line.hilbert.series.shift(1))
        self.assertIsNot(chain.junctions[2].verdict, Verdict.NO)

    @pytest.mark.slow
    def test_split_summand_chain(self):
        chain = split_summand_chain(self.cubic, self.defs.module('CTC'), self.rng)
        self.assertEqual(len(chain), 2)
        self.assertEqual(chain.target.hilbert.series, self.cubic.hilbert.series)


class SkewLinesChainTestCase(SimpleTestCase):
    """Test how links move the deficiency module of two skew lines"""

    def setUp(self):
        self.rng = random.Random(7)
        self.lines = load_definitions(['SKEW']).module('SKEW')

    @pytest.mark.slow
    def test_even_chain_keeps_the_deficiency_module(self):
        chain, _ = double_link_check(self.lines, rng=self.rng)
        report = chain_cohomology_check(chain)
        self.assertTrue(report['applicable'] and report['matches'])
        self.assertEqual(report['sign'], 1)
        self.assertEqual(local_cohomology_hf(chain.target, 1, report['offset']), 1)

    @pytest.mark.slow
    def test_odd_chain_dualizes_the_deficiency_module(self):
        cert, phi = build_linking_module(self.lines, self.rng)
        step = link(self.lines, cert, phi)
        report = chain_cohomology_check(LinkChain((step,)))
        self.assertEqual(report['parity'], 'odd')
        self.assertTrue(report['applicable'] and report['matches'])
        self.assertEqual(report['sign'], -1)
        self.assertEqual(local_cohomology_hf(step.result, 1, report['offset']), 1)

    @pytest.mark.slow
    def test_polynomial_formula_without_cohen_macaulay(self):
        cert, phi = build_linking_module(self.lines, self.rng)
        report = verify_link_formulas(link(self.lines, cert, phi))
        self.assertIs(report['locally_cm_polynomial'], True)
        self.assertIs(report['h1'], True)
        self.assertNotIn('cohen_macaulay', report)


class IdealLinkTestCase(LiaisonTestCase):
    """Test Gorenstein liaison of ideals"""

    def test_cubic_and_line(self):
        self.assertTrue(sm_link_ideals(
            self.defs.ideal('ITC'), self.defs.ideal('ILINE'), self.defs.ideal('CTC'), self.ring, self.rng
        ))

    def test_cubic_is_not_self_linked(self):
        self.assertFalse(sm_link_ideals(
            self.defs.ideal('ITC'), self.defs.ideal('ITC'), self.defs.ideal('CTC'), self.ring, self.rng
        ))

    def test_double_line_links_the_line_to_itself(self):
        ring = PolynomialRing.standard(4, 32003)
        x0 = ring.gens[0]
        self.assertTrue(sm_link_ideals([x0], [x0], [x0 ** 2], ring, self.rng))

    def test_linking_ideal_must_be_gorenstein(self):
        with self.assertRaises(LinkageError):
            sm_link_ideals(
                self.defs.ideal('ILINE'), self.defs.ideal('ILINE'), self.defs.ideal('ITC'), self.ring, self.rng
            )


class MaximalModuleTestCase(SimpleTestCase):
    """Test links of modules of codimension zero"""

    def setUp(self):
        self.rng = random.Random(7)
        self.ring = PolynomialRing.standard(4, 32003)

    def test_free_module_runs_down_a_free_chain(self):
        chain, report = maximal_link_check(PresentedModule.free(self.ring, (0, 1)), self.rng)
        self.assertEqual(report, {'free': True, 'final_rank': 1})
        self.assertEqual(len(chain), 1)
        self.assertEqual(minimalize(chain.target).rank, 1)

    def test_link_is_stably_the_auslander_dual(self):
        """coker of (x1, -x0)^t links to a module stably equivalent to its Auslander dual"""
        x0, x1 = self.ring.gens[:2]
        module = PresentedModule.from_rows(self.ring, [[x1], [-x0]], (0, 0))
        chain, report = maximal_link_check(module, self.rng)
        self.assertEqual(report, {'free': False, 'stable_equivalence': 'CERTIFIED_EQUIVALENT', 'shift': 0})
        self.assertEqual(len(chain), 1)

    def test_positive_codimension_rejected(self):
        cubic = load_definitions(['TC']).module('TC')
        with self.assertRaises(LinkageError):
            maximal_link_check(cubic, self.rng)


class RandomAutoLinkTestCase(SimpleTestCase):
    """Test auto-links of random codimension-two complete intersections"""

    @pytest.mark.slow
    def test_random_auto_links_add_degrees(self):
        """deg C = deg M + deg N, and the link formulas hold, on ten random quotients"""
        ring = PolynomialRing.standard(4, 32003)
        rng = random.Random(19)
        for _ in range(10):
            degrees = (rng.choice((1, 2)), rng.choice((1, 2)))
            forms = [ring.random_form(d, rng) for d in degrees]
            module = PresentedModule.quotient_ring(ring, forms)
            chain, report = double_link_check(module, rng=rng)
            first = chain.steps[0]
            self.assertEqual(
                first.cert.module.hilbert.degree,
                module.hilbert.degree + first.result.hilbert.degree,
            )
            self.assertTrue(report['hilbert_function'])
            formulas = verify_link_formulas(first)
            self.assertIs(formulas['h1'], True)
            self.assertIs(formulas['locally_cm_polynomial'], True)
