"""
Tests for the liaison management command
"""
import json
import os
import tempfile
from io import StringIO

from django.core.management import CommandError, call_command
from django.test import SimpleTestCase


def run(*args):
    out = StringIO()
    call_command('liaison', *args, stdout=out, stderr=StringIO())
    return out.getvalue()


def run_json(*args):
    return json.loads(run(*args, '--json'))


class LinkCommandTestCase(SimpleTestCase):
    """Test direct links from the command line"""

    def test_auto_link_of_twisted_cubic(self):
        report = run_json('link', '--module', 'TC', '--auto', '--seed', '7')
        self.assertEqual(report['schema'], 1)
        self.assertEqual(report['command'], 'link')
        self.assertEqual(report['seed'], 7)
        self.assertEqual(report['status'], 'verified')
        self.assertEqual(report['result']['degrees'], {'source': 3, 'linking': 4, 'result': 1})
        self.assertIn('degree 4 = 3 + 1', report['summary'])

    def test_same_seed_same_bytes(self):
        args = ('link', '--module', 'TC', '--auto', '--seed', '11', '--json')
        self.assertEqual(run(*args), run(*args))

    def test_link_by_named_module(self):
        report = run_json('link', '--defs', 'TC', '--defs', 'LINE', '--module', 'TC', '--by', 'CTC', '--seed', '3')
        self.assertEqual(report['result']['t'], 0)
        self.assertTrue(report['checks']['exact_sequence'])

    def test_link_needs_linking_module(self):
        with self.assertRaises(CommandError) as cm:
            run('link', '--module', 'TC')
        self.assertEqual(cm.exception.returncode, 1)

    def test_linking_module_must_be_certified(self):
        with self.assertRaises(CommandError) as cm:
            run('link', '--defs', 'TC', '--defs', 'LINE', '--module', 'LINE', '--by', 'ITC', '--seed', '1')
        self.assertEqual(cm.exception.returncode, 1)

    def test_text_output(self):
        output = run('link', '--module', 'TC', '--auto', '--seed', '7')
        self.assertTrue(output.startswith('link (seed 7): verified'))
        self.assertIn('exact_sequence: ok', output)


class ModuleCommandTestCase(SimpleTestCase):
    """Test the invariant commands"""

    def test_resolve(self):
        report = run_json('resolve', '--module', 'TC', '--seed', '1')
        self.assertEqual(report['result']['ranks'], [1, 3, 2])
        self.assertEqual(report['result']['betti_table'], {'0': {'0': 1}, '1': {'2': 3}, '2': {'3': 2}})

    def test_hilbert(self):
        report = run_json('hilbert', '--module', 'TC', '--seed', '1', '--window', '0:4')
        self.assertEqual(report['result']['function'], {'0': 1, '1': 4, '2': 7, '3': 10, '4': 13})
        self.assertTrue(report['result']['cohen_macaulay'])
        self.assertEqual(report['result']['summary']['degree'], 3)

    def test_qgor_check_verdicts(self):
        self.assertEqual(run_json('qgor-check', '--module', 'TC', '--seed', '1')['result']['verdict'], 'NO')
        report = run_json('qgor-check', '--defs', 'LINE', '--module', 'CTC', '--seed', '1')
        self.assertEqual(report['result']['verdict'], 'YES')
        self.assertEqual(report['result']['certificate']['t'], 0)
        self.assertEqual(report['status'], 'verified')

    def test_sm_link(self):
        report = run_json(
            'sm-link', '--defs', 'TC', '--defs', 'LINE',
            '--first', 'ITC', '--second', 'ILINE', '--complete', 'CTC', '--seed', '1',
        )
        self.assertIs(report['result']['linked'], True)

    def test_unknown_module(self):
        with self.assertRaises(CommandError) as cm:
            run('hilbert', '--module', 'NO_SUCH_MODULE')
        self.assertEqual(cm.exception.returncode, 1)

    def test_bad_window(self):
        with self.assertRaises(CommandError) as cm:
            run('hilbert', '--module', 'TC', '--window', '5:1')
        self.assertEqual(cm.exception.returncode, 1)


class MatrixCommandTestCase(SimpleTestCase):
    """Test matrix reduction from the command line"""

    def test_matreduce(self):
        report = run_json('matreduce', '--matrix', 'A2x2', '--seed', '5')
        self.assertEqual(report['status'], 'verified')
        result = report['result']
        self.assertEqual(len(result['steps']), 1)
        self.assertEqual(result['final']['rows'], [['z']])
        self.assertEqual(result['steps'][0]['lambda'], 'y')
        self.assertEqual(result['steps'][0]['twist'], -2)

    def test_matreduce_with_bridge(self):
        report = run_json('matreduce', '--matrix', 'A2x2', '--bridge-to', 'x', '--seed', '5')
        self.assertEqual(report['result']['final']['rows'], [['x']])
        self.assertEqual([move['kind'] for move in report['result']['moves']], ['split_off', 'bridge'])


    def test_matreduce_reports_move_checks(self):
        report = run_json('matreduce', '--matrix', 'A2x2', '--bridge-to', 'x', '--bridge-twist', '2', '--seed', '5')
        self.assertEqual(report['status'], 'verified')
        self.assertEqual(
            [move['kind'] for move in report['result']['moves']], ['split_off', 'bridge', 'shift'],
        )
        self.assertEqual(report['checks']['move_0_split_off']['summand_quasi_gorenstein'], True)
        self.assertEqual(report['checks']['move_2_shift'], {'stably_equivalent': True, 'recorded_shift': True})


class StableClassCommandTestCase(SimpleTestCase):
    """Test the stable class commands"""

    def test_phi_psi_checks_the_cores(self):
        report = run_json('phi-psi', '--module', 'TC', '--seed', '1')
        self.assertEqual(report['status'], 'verified')
        for key in ('phi', 'psi'):
            self.assertEqual(report['checks'][key], {'free_summands_stripped': True, 'normalized': True})

    def test_stable_equiv_of_a_module_with_itself(self):
        report = run_json('stable-equiv', '--module', 'TC', '--other', 'TC', '--seed', '1')
        self.assertEqual(report['result']['verdict'], 'CERTIFIED_EQUIVALENT')
        self.assertEqual(report['result']['shift'], 0)
        self.assertEqual(
            report['checks']['cores'], {'rank': True, 'generator_degrees': True, 'hilbert_series': True},
        )
        self.assertEqual(report['status'], 'verified')


class SessionCommandTestCase(SimpleTestCase):
    """Test session logs and their replay"""

    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.session_file = os.path.join(directory.name, 'session.json')

    def test_session_replay(self):
        run('link', '--module', 'TC', '--auto', '--seed', '7', '--session', self.session_file)
        report = run_json('verify-chain', '--session', self.session_file)
        self.assertEqual(report['status'], 'verified')
        self.assertEqual(report['result']['verified'], {'0': 'link_step'})
        self.assertEqual(report['result']['records'], 2)
        self.assertEqual(report['checks'], {'digests': True, 'records': {'0_link_step': True}, 'complete': True})

    def test_matrix_session_replay(self):
        matrix_file = self.session_file + '.matrix'
        run('matreduce', '--matrix', 'A2x2', '--bridge-to', 'x', '--bridge-twist', '2', '--seed', '7',
            '--session', matrix_file)
        report = run_json('verify-chain', '--session', matrix_file)
        self.assertEqual(report['result']['verified'], {'0': 'matlink_chain'})
        self.assertEqual(report['checks']['records'], {'0_matlink_chain': True})
        self.assertIs(report['checks']['complete'], True)

    def test_tampered_session_exits_with_verification_failure(self):
        run('link', '--module', 'TC', '--auto', '--seed', '7', '--session', self.session_file)
        with open(self.session_file) as handle:
            document = json.load(handle)
        document['records'][0]['payload']['cert']['t'] = 5
        with open(self.session_file, 'w') as handle:
            json.dump(document, handle)
        with self.assertRaises(CommandError) as cm:
            run('verify-chain', '--session', self.session_file)
        self.assertEqual(cm.exception.returncode, 2)

    def test_verify_chain_needs_session(self):
        with self.assertRaises(CommandError) as cm:
            run('verify-chain')
        self.assertEqual(cm.exception.returncode, 1)

    def test_session_over_another_ring_is_rejected(self):
        run('link', '--module', 'TC', '--auto', '--seed', '7', '--session', self.session_file)
        with self.assertRaises(CommandError) as cm:
            run('matreduce', '--matrix', 'A2x2', '--seed', '7', '--session', self.session_file)
        self.assertEqual(cm.exception.returncode, 1)
