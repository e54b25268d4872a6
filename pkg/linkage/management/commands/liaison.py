"""
``manage.py liaison <action> ...``: run liaison computations on named
objects from definition files and print a text or JSON report.

Exit status 0 on success, 2 when a certificate or identity fails to
verify, 1 on usage and definition errors.
"""

import logging

from django.core.management.base import BaseCommand, CommandError

from algebra.conf import default_window, make_rng, parse_window, resolve_seed
from algebra.exceptions import AlgebraError, ConsistencyError
from algebra.fmodule import ModuleMap, Verdict
from algebra.hilbert import (
    depth,
    is_cohen_macaulay,
    is_locally_cohen_macaulay,
    is_unmixed,
    riemann_roch_check,
)
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
from linkage.definitions import Definitions, load_definitions, resolve_path
from linkage.exceptions import DefinitionError, LinkageError, SessionError, VerificationError
from linkage.liaison import (
    build_linking_module,
    certify_quasi_gorenstein,
    chain_cohomology_check,
    double_link_check,
    even_chain_identity,
    junction_verdicts,
    link,
    require_certificate,
    shift_link_chain,
    sm_link_ideals,
    split_summand_chain,
    verify_link_formulas,
)
from linkage.matlink import reduce
from linkage.reports import build_report, failed_checks, render_json, render_text
from linkage.serializers import (
    HilbertSummarySerializer,
    LinkChainSerializer,
    LinkStepSerializer,
    MatLinkChainSerializer,
    ModuleSerializer,
    QGCertSerializer,
)
from linkage.session import REPLAYABLE, Session

logger = logging.getLogger(__name__)

VERIFICATION_FAILED = 2
USAGE_ERROR = 1

ACTIONS = {
    'resolve': 'Minimal free resolution and Betti table of a module',
    'hilbert': 'Hilbert series, function and cohomological invariants of a module',
    'qgor-check': 'Certify that a module is quasi-Gorenstein',
    'link': 'Directly link a module by a given or automatically built linking module',
    'double-link': 'Link a module twice by the same linking module and compare',
    'exchange': 'E-type and exchanged Q-type resolutions with the cohomology signature',
    'phi-psi': 'Stable classes of the E-type tail and the Q-type middle module',
    'stable-equiv': 'Decide stable equivalence of two modules up to a shift',
    'matreduce': 'Reduce a square matrix by matrix links down to a 1x1 matrix',
    'sm-link': 'Decide whether two ideals are linked by a Gorenstein ideal',
    'verify-chain': 'Re-verify every record of a session log',
    'shift-chain': 'Even link chain from a module to a twist of itself',
    'split-chain': 'Two-step chain splitting a quasi-Gorenstein summand off',
}


class Command(BaseCommand):
    help = 'Module liaison computations with verified certificates'

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='action', required=True)
        parsers = {name: subparsers.add_parser(name, help=text) for name, text in ACTIONS.items()}
        for sub in parsers.values():
            sub.add_argument('--defs', action='append', default=[], help='Definition file or bundled fixture name')
            sub.add_argument('--json', action='store_true', help='Print the JSON report')
            sub.add_argument('--seed', type=int, help='Random seed (default: LIAISON_LAB_SEED or fresh entropy)')
            sub.add_argument('--window', help="Degree window 'lo:hi' for Hilbert and cohomology checks")
            sub.add_argument('--session', help='Session log to extend (verify-chain: to replay)')

        for name in ('resolve', 'hilbert', 'qgor-check', 'link', 'double-link', 'exchange', 'phi-psi',
                     'stable-equiv', 'shift-chain', 'split-chain'):
            parsers[name].add_argument('--module', required=True)

        for name in ('link', 'double-link'):
            parsers[name].add_argument('--by', help='Name of the linking module')
            parsers[name].add_argument(
                '--map',
                help="Images of the linking module's generators, rows separated by ';'",
            )
        parsers['link'].add_argument('--auto', action='store_true', help='Build the linking module')
        parsers['stable-equiv'].add_argument('--other', required=True)
        parsers['matreduce'].add_argument('--matrix', required=True)
        parsers['matreduce'].add_argument('--bridge-to', help='Polynomial a: bridge the final R/(c) to R/(a)')
        parsers['matreduce'].add_argument('--bridge-twist', type=int, default=0)
        parsers['sm-link'].add_argument('--first', required=True)
        parsers['sm-link'].add_argument('--second', required=True)
        parsers['sm-link'].add_argument('--complete', required=True, help='Name of the Gorenstein linking ideal')
        parsers['shift-chain'].add_argument('--shift', type=int, required=True)
        parsers['split-chain'].add_argument('--summand', required=True)

    def handle(self, *args, **options):
        action = options['action']
        try:
            window = parse_window(options['window']) if options.get('window') else None
        except ValueError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)
        self.options = options
        self.window = window
        self.seed = resolve_seed(options.get('seed'))
        self.rng = make_rng(self.seed)
        self.session = None
        handler = getattr(self, 'handle_' + action.replace('-', '_'))

        try:
            report = handler()
        except (VerificationError, ConsistencyError) as e:
            logger.error(f'{action}: verification failed: {e}')
            self._write_failure(action, e)
            raise CommandError(f'Verification failed: {e}', returncode=VERIFICATION_FAILED)
        except (DefinitionError, SessionError, LinkageError, AlgebraError) as e:
            logger.error(f'{action}: {e}')
            raise CommandError(str(e), returncode=USAGE_ERROR)

        if self.session is not None:
            self.session.append('report', report)
        self.stdout.write(render_json(report) if options['json'] else render_text(report))
        if report['status'] != 'verified':
            raise CommandError(
                f'Checks failed: {", ".join(failed_checks(report["checks"]))}',
                returncode=VERIFICATION_FAILED,
            )

    def _write_failure(self, action, error):
        checks = getattr(error, 'report', None) or {}
        report = build_report(action, self.seed, {'error': str(error)}, checks)
        report['status'] = 'failed'
        if self.options.get('json'):
            self.stderr.write(render_json(report))

    # Definitions and session

    def definitions(self, *names):
        """Load ``--defs``; names missing from them are looked up as bundled fixtures"""
        definitions = load_definitions(self.options['defs']) if self.options['defs'] else Definitions()
        for name in names:
            if name and name not in definitions.names():
                try:
                    resolve_path(name)
                except DefinitionError:
                    continue
                definitions = definitions.merge(load_definitions([name]))
        if definitions.ring is None:
            raise DefinitionError(f'No definitions given and no fixture named {", ".join(n for n in names if n)}')
        self.ring = definitions.ring
        self.context = {'ring': definitions.ring}
        if self.options.get('session'):
            self.session = Session.open(self.options['session'], self.seed, definitions.ring, definitions.text)
        return definitions

    def record(self, kind, payload):
        if self.session is not None:
            self.session.append(kind, payload)

    def report(self, result, checks=None, summary=()):
        return build_report(self.options['action'], self.seed, result, checks, summary)

    def module_data(self, module):
        return ModuleSerializer(module, context=self.context).data

    def parse_map(self, text, source, target):
        rows = [row for row in text.split(';') if row.strip()]
        images = [[self.ring.parse(entry.strip()) for entry in row.split(',')] for row in rows]
        return ModuleMap(source, target, images)

    def linking_data(self, module, defs):
        """(cert, phi) from ``--by``/``--map``, or built automatically"""
        by = self.options.get('by')
        if not by:
            return build_linking_module(module, self.rng)
        linking = defs.module(by)
        cert = require_certificate(linking, self.rng)
        if self.options.get('map'):
            phi = self.parse_map(self.options['map'], linking, module)
        elif linking.rank == module.rank and linking.row_twists == module.row_twists:
            phi = ModuleMap(linking, module, [module.target.basis_vector(i) for i in range(module.rank)])
        else:
            raise CommandError(
                f'--by {by} needs --map: generators of {by} do not match those of the module',
                returncode=USAGE_ERROR,
            )
        return cert, phi

    def chain_checks(self, chain):
        checks = {}
        for index, step in enumerate(chain.steps):
            checks[f'step_{index}'] = {**step.artifacts, **verify_link_formulas(step, self.window)}
        if len(chain) == 2:
            checks['even_chain_identity'] = even_chain_identity(chain, self.window)
        if chain.steps:
            checks['cohomology'] = chain_cohomology_check(chain, self.window)
        return checks

    def stable_class_checks(self, rep):
        return {
            'free_summands_stripped': not has_free_summand(rep.module),
            'normalized': rep.is_trivial or min(rep.module.row_twists) == 0,
        }

    def chain_result(self, chain):
        data = LinkChainSerializer(chain, context=self.context).data
        self.record('link_chain', data)
        return data

    # Actions

    def handle_resolve(self):
        defs = self.definitions(self.options['module'])
        module = defs.module(self.options['module'])
        resolution = module.resolution
        betti = {str(i): {str(j): c for j, c in row.items()} for i, row in resolution.betti_table.items()}
        result = {
            'module': self.module_data(module),
            'betti_table': betti,
            'ranks': resolution.ranks,
            'projective_dimension': resolution.length,
            'minimal': not resolution.has_unit_entries(),
        }
        checks = {'complex': resolution.verify_complex(), 'minimal': result['minimal']}
        return self.report(result, checks, [f'ranks {resolution.ranks}', f'pd {resolution.length}'])

    def handle_hilbert(self):
        defs = self.definitions(self.options['module'])
        module = defs.module(self.options['module'])
        lo, hi = self.window or default_window()
        hilbert = module.hilbert
        result = {
            'summary': HilbertSummarySerializer(hilbert).data,
            'series': hilbert.series.display(),
            'function': {str(j): hilbert.function(j) for j in range(lo, hi + 1)},
            'polynomial': {str(j): hilbert.polynomial(j) for j in range(lo, hi + 1)},
        }
        checks = {'riemann_roch': True}
        if not module.is_zero:
            result.update(
                codim=module.codim,
                depth=depth(module),
                cohen_macaulay=is_cohen_macaulay(module),
                locally_cohen_macaulay=is_locally_cohen_macaulay(module),
                unmixed=is_unmixed(module),
            )
            checks['riemann_roch'] = all(riemann_roch_check(module, j) for j in range(lo, hi + 1))
        summary = [f'dim {result["summary"]["dimension"]}', f'degree {hilbert.degree}']
        return self.report(result, checks, summary)

    def handle_qgor_check(self):
        defs = self.definitions(self.options['module'])
        module = defs.module(self.options['module'])
        verdict = certify_quasi_gorenstein(module, self.rng)
        result = {'verdict': verdict.verdict.value, 'reason': verdict.reason}
        checks = {}
        if verdict.verdict is Verdict.YES:
            data = QGCertSerializer(verdict.cert, context=self.context).data
            result['certificate'] = data
            checks = verdict.cert.verify()
            self.record('certificate', data)
        return self.report(result, checks, [f'verdict {verdict.verdict.value}'])

    def handle_link(self):
        if not self.options.get('auto') and not self.options.get('by'):
            raise CommandError('link needs --by <module> or --auto', returncode=USAGE_ERROR)
        defs = self.definitions(self.options['module'], self.options.get('by'))
        module = defs.module(self.options['module'])
        cert, phi = self.linking_data(module, defs)
        step = link(module, cert, phi)
        checks = {**step.artifacts, **verify_link_formulas(step, self.window)}
        data = LinkStepSerializer(step, context=self.context).data
        self.record('link_step', data)
        degrees = data['degrees']
        summary = [
            f"degree {degrees['linking']} = {degrees['source']} + {degrees['result']}",
            f't = {step.t}',
        ]
        return self.report(data, checks, summary)

    def handle_double_link(self):
        defs = self.definitions(self.options['module'], self.options.get('by'))
        module = defs.module(self.options['module'])
        cert, phi = self.linking_data(module, defs)
        chain, report = double_link_check(module, cert, phi, self.rng, self.window)
        checks = self.chain_checks(chain)
        checks['double_link'] = report
        return self.report(self.chain_result(chain), checks, [f"isomorphism {report['isomorphism']}"])

    def handle_exchange(self):
        defs = self.definitions(self.options['module'])
        module = defs.module(self.options['module'])
        estep = e_type(module)
        qstep = q_type(module, self.rng)
        window = self.window or default_window()
        checks = verify_q_type(qstep, window)
        result = {
            'codim': qstep.codim,
            'e_type': {'shape': estep.complex.betti_shape(), 'tail': self.module_data(estep.tail)},
            'q_type': {'shape': qstep.complex.betti_shape(), 'middle': self.module_data(qstep.middle)},
            'window': list(window),
        }
        return self.report(result, checks, [f'Q-type shape {result["q_type"]["shape"]}'])

    def handle_phi_psi(self):
        defs = self.definitions(self.options['module'])
        module = defs.module(self.options['module'])
        tail, middle = phi_psi(module, self.rng)
        result, checks = {}, {}
        for key, rep in (('phi', tail), ('psi', middle)):
            result[key] = {
                'module': self.module_data(rep.module),
                'normalization_twist': rep.normalization_twist,
                'free_twists': list(rep.free_twists),
                'trivial': rep.is_trivial,
            }
            checks[key] = self.stable_class_checks(rep)
        return self.report(result, checks, [f"phi rank {tail.module.rank}", f"psi rank {middle.module.rank}"])

    def handle_stable_equiv(self):
        defs = self.definitions(self.options['module'], self.options['other'])
        first = defs.module(self.options['module'])
        second = defs.module(self.options['other'])
        verdict = stable_equiv(first, second, self.rng)
        result = {'verdict': verdict.verdict.value, 'shift': verdict.shift, 'reason': verdict.reason}
        left, right = strip_free_summands(first), strip_free_summands(second)
        checks = {'first': self.stable_class_checks(left), 'second': self.stable_class_checks(right)}
        if verdict.verdict is StableVerdict.CERTIFIED_EQUIVALENT and not left.is_trivial:
            checks['cores'] = {
                'rank': left.module.rank == right.module.rank,
                'generator_degrees': sorted(left.module.row_twists) == sorted(right.module.row_twists),
                'hilbert_series': left.module.hilbert.series == right.module.hilbert.series,
            }
        return self.report(result, checks, [f'verdict {verdict.verdict.value}'])

    def handle_matreduce(self):
        defs = self.definitions(self.options['matrix'])
        matrix = defs.matrix(self.options['matrix'])
        bridge = None
        if self.options.get('bridge_to'):
            bridge = (self.ring.parse(self.options['bridge_to']), self.options['bridge_twist'])
        chain = reduce(matrix, self.rng, bridge_to=bridge)
        data = MatLinkChainSerializer(chain, context=self.context).data
        self.record('matlink_chain', data)
        checks = {}
        for index, step in enumerate(chain.steps):
            checks[f'step_{index}'] = {**step.verify(), **chain.reports[index]}
        for index, move in enumerate(chain.moves):
            if move.checks:
                checks[f'move_{index}_{move.kind}'] = dict(move.checks)
        return self.report(data, checks, [f'{len(chain)} matrix links'])

    def handle_sm_link(self):
        names = (self.options['first'], self.options['second'], self.options['complete'])
        defs = self.definitions(*names)
        first, second, complete = (defs.ideal(name) for name in names)
        linked = sm_link_ideals(first, second, complete, self.ring, self.rng)
        return self.report({'linked': linked}, {}, [f'linked: {linked}'])

    def handle_verify_chain(self):
        path = self.options.get('session')
        if not path:
            raise CommandError('verify-chain needs --session <path>', returncode=USAGE_ERROR)
        session = Session.load(path)
        self.context = {'ring': session.ring}
        verified = session.replay()
        result = {
            'records': len(session.records),
            'verified': {str(k): v for k, v in verified.items()},
            'seed': session.seed,
        }
        replayable = [index for index, record in enumerate(session.records) if record['kind'] in REPLAYABLE]
        checks = {
            'digests': session.verify_digests(),
            'records': {f'{index}_{kind}': True for index, kind in verified.items()},
            'complete': sorted(verified) == replayable,
        }
        return self.report(result, checks, [f'{len(verified)} of {len(session.records)} records re-verified'])

    def handle_shift_chain(self):
        defs = self.definitions(self.options['module'])
        module = defs.module(self.options['module'])
        chain = shift_link_chain(module, self.options['shift'], self.rng)
        checks = self.chain_checks(chain)
        checks['junctions'] = junction_verdicts(chain)
        return self.report(self.chain_result(chain), checks, [f'{len(chain)} links to twist {self.options["shift"]}'])

    def handle_split_chain(self):
        defs = self.definitions(self.options['module'], self.options['summand'])
        module = defs.module(self.options['module'])
        summand = defs.module(self.options['summand'])
        chain = split_summand_chain(module, summand, self.rng)
        return self.report(self.chain_result(chain), self.chain_checks(chain), [f'{len(chain)} links'])
