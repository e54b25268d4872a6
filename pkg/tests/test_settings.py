"""
Tests for Django settings configuration
"""
import random

from django.conf import settings
from django.test import SimpleTestCase, override_settings

from algebra.conf import (
    default_window,
    lab_setting,
    make_rng,
    parse_window,
    resolve_seed,
)


class SettingsTestCase(SimpleTestCase):
    """Test Django settings configuration"""

    def test_secret_key_exists(self):
        """Test that SECRET_KEY is configured"""
        self.assertTrue(settings.SECRET_KEY)

    def test_installed_apps_includes_required(self):
        """Test that required apps are in INSTALLED_APPS"""
        for app in ['rest_framework', 'algebra', 'linkage']:
            self.assertIn(app, settings.INSTALLED_APPS)

    def test_rest_framework_renders_json(self):
        """Test REST Framework configuration"""
        self.assertIn('rest_framework.renderers.JSONRenderer', settings.REST_FRAMEWORK['DEFAULT_RENDERER_CLASSES'])

    def test_liaison_lab_configured(self):
        """Test the LIAISON_LAB options and their defaults"""
        options = settings.LIAISON_LAB
        for key in ['SEED', 'CHARACTERISTIC', 'CI_RETRIES', 'ISO_ATTEMPTS', 'WINDOW', 'DEFINITIONS_DIR', 'SCHEMA_VERSION']:
            self.assertIn(key, options)
        self.assertEqual(lab_setting('SCHEMA_VERSION'), 1)
        self.assertEqual(lab_setting('CHARACTERISTIC'), 32003)

    def test_logging_configured(self):
        """Test logging configuration"""
        logging_config = settings.LOGGING
        self.assertIn('version', logging_config)
        self.assertIn('handlers', logging_config)
        self.assertIn('formatters', logging_config)
        for name in ['algebra', 'linkage']:
            self.assertIn(name, logging_config['loggers'])


class LabOptionsTestCase(SimpleTestCase):
    """Test the helpers reading LIAISON_LAB"""

    def test_parse_window(self):
        self.assertEqual(parse_window('-4:8'), (-4, 8))
        with self.assertRaises(ValueError):
            parse_window('8')
        with self.assertRaises(ValueError):
            parse_window('3:2')

    @override_settings(LIAISON_LAB={'WINDOW': '0:3'})
    def test_configured_window(self):
        self.assertEqual(default_window(), (0, 3))

    @override_settings(LIAISON_LAB={'SEED': 42})
    def test_configured_seed(self):
        self.assertEqual(resolve_seed(), 42)
        self.assertEqual(resolve_seed(5), 5)
        self.assertEqual(make_rng().random(), random.Random(42).random())

    @override_settings(LIAISON_LAB={})
    def test_defaults_apply(self):
        self.assertEqual(lab_setting('ISO_ATTEMPTS'), 4)
        self.assertIsInstance(resolve_seed(), int)
