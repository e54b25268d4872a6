"""
Command reports: one JSON document per command plus a short text rendering.

    {"schema": 1, "command": ..., "seed": ..., "status": "verified" | "failed",
     "checks": {...}, "result": {...}}

Reports carry no timestamps, so the same definitions and seed render
byte-identical JSON.
"""

from rest_framework.renderers import JSONRenderer

from algebra.conf import lab_setting

VERIFIED = 'verified'
FAILED = 'failed'


def failed_checks(checks, prefix=''):
    """Dotted names of every check that is exactly False"""
    failed = []
    for key, value in checks.items():
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            failed.extend(failed_checks(value, f'{name}.'))
        elif value is False:
            failed.append(name)
    return failed


def build_report(command, seed, result, checks=None, summary=()):
    checks = checks or {}
    return {
        'schema': lab_setting('SCHEMA_VERSION'),
        'command': command,
        'seed': seed,
        'status': FAILED if failed_checks(checks) else VERIFIED,
        'checks': checks,
        'result': result,
        'summary': list(summary),
    }


def render_json(report):
    return JSONRenderer().render(report, renderer_context={'indent': 2}).decode()


def _format_value(value):
    if value is True:
        return 'ok'
    if value is False:
        return 'FAILED'
    if value is None:
        return '-'
    return str(value)


def render_text(report):
    lines = [f"{report['command']} (seed {report['seed']}): {report['status']}"]
    lines.extend(f'  {line}' for line in report.get('summary', ()))

    def walk(checks, indent):
        for key, value in checks.items():
            if isinstance(value, dict):
                lines.append(f'{indent}{key}:')
                walk(value, indent + '  ')
            else:
                lines.append(f'{indent}{key}: {_format_value(value)}')

    if report['checks']:
        lines.append('checks:')
        walk(report['checks'], '  ')
    return '\n'.join(lines)
