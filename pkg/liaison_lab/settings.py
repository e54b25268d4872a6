"""
Django settings for liaison_lab project.

The project has no HTTP surface: Django provides configuration, logging,
application registry and the management-command runner for the `liaison`
command line.
"""

import logging
from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='liaison-lab-insecure-local-key')

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS: list[str] = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # Third-party apps
    'rest_framework',

    # Local apps
    'algebra',
    'linkage',
]

# No persistence layer: certificates live in JSON session files.
DATABASES: dict = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Django REST Framework Configuration
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'UNAUTHENTICATED_USER': None,
}

# Liaison lab configuration
LIAISON_LAB = {
    'SEED': config('LIAISON_LAB_SEED', default=None, cast=lambda v: None if v in (None, '') else int(v)),
    'CHARACTERISTIC': config('LIAISON_LAB_CHARACTERISTIC', default=32003, cast=int),
    'CI_RETRIES': config('LIAISON_LAB_CI_RETRIES', default=64, cast=int),
    'ISO_ATTEMPTS': config('LIAISON_LAB_ISO_ATTEMPTS', default=4, cast=int),
    'WINDOW': config('LIAISON_LAB_WINDOW', default='-4:8'),
    'DEFINITIONS_DIR': config(
        'LIAISON_LAB_DEFINITIONS_DIR',
        default=str(BASE_DIR / 'linkage' / 'fixtures'),
    ),
    'SCHEMA_VERSION': 1,
}

# Logging Configuration
LOG_LEVEL = config('LOG_LEVEL', default='INFO')
LOG_FILE = config('LOG_FILE', default='')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
        'json': {
            'format': '{"level": "%(levelname)s", "time": "%(asctime)s", "module": "%(module)s", "message": "%(message)s"}',
        },
    },
    'handlers': {
        'console': {
            'level': LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'algebra': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'linkage': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}

if LOG_FILE:
    LOGGING['handlers']['file'] = {
        'level': LOG_LEVEL,
        'class': 'logging.FileHandler',
        'filename': LOG_FILE,
        'formatter': 'json',
    }
    LOGGING['root']['handlers'].append('file')
    for logger_name in ('django', 'algebra', 'linkage'):
        LOGGING['loggers'][logger_name]['handlers'].append('file')

# Sentry Configuration
SENTRY_DSN = config('SENTRY_DSN', default='')
if SENTRY_DSN:
    import sentry_sdk
    from sentry_sdk.integrations.logging import LoggingIntegration

    sentry_logging = LoggingIntegration(
        level=logging.INFO,
        event_level=logging.ERROR
    )

    sentry_sdk.init(
        dsn=SENTRY_DSN,
        integrations=[sentry_logging],
        traces_sample_rate=0.0,
        send_default_pii=False,
        environment=config('ENVIRONMENT', default='development'),
    )
