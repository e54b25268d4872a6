import random
import secrets

from django.conf import settings

DEFAULTS = {
    'SEED': None,
    'CHARACTERISTIC': 32003,
    'CI_RETRIES': 64,
    'ISO_ATTEMPTS': 4,
    'WINDOW': '-4:8',
    'SCHEMA_VERSION': 1,
}


def lab_setting(name):
    """Read one entry of ``settings.LIAISON_LAB`` with the project default"""
    options = getattr(settings, 'LIAISON_LAB', {}) if settings.configured else {}
    return options.get(name, DEFAULTS.get(name))


def parse_window(text):
    """``'lo:hi'`` -> ``(lo, hi)``"""
    lo, sep, hi = str(text).partition(':')
    if not sep:
        raise ValueError(f"Window must look like 'lo:hi', got '{text}'")
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise ValueError(f'Empty window {lo}:{hi}')
    return lo, hi


def default_window():
    return parse_window(lab_setting('WINDOW'))


def resolve_seed(seed=None):
    """Explicit seed, else ``LIAISON_LAB['SEED']``, else fresh entropy"""
    if seed is None:
        seed = lab_setting('SEED')
    if seed is None:
        seed = secrets.randbits(64)
    return int(seed)


def make_rng(seed=None):
    return random.Random(resolve_seed(seed))
