"""
Tests for append-only session logs and certificate replay
"""
import json

import pytest

from algebra.poly import PolynomialRing
from linkage.exceptions import SessionError, VerificationError
from linkage.liaison import require_certificate
from linkage.serializers import QGCertSerializer
from linkage.session import Session


@pytest.fixture
def session_path(tmp_path):
    return tmp_path / 'session.json'


@pytest.fixture
def certificate_payload(tc_defs, rng):
    cert = require_certificate(tc_defs.module('CTC'), rng)
    return QGCertSerializer(cert, context={'ring': tc_defs.ring}).data


class TestDigests:
    """Hash chaining of session records"""

    def test_append_and_verify(self, session_path, ring4):
        session = Session.create(session_path, 7, ring4)
        first = session.append('note', {'text': 'first'})
        second = session.append('note', {'text': 'second'})
        assert first['digest'] != second['digest']
        reloaded = Session.load(session_path)
        assert reloaded.seed == 7
        assert reloaded.ring == ring4
        assert reloaded.verify_digests()
        assert reloaded.head_digest() == second['digest']

    def test_edited_record_is_detected(self, session_path, ring4):
        session = Session.create(session_path, 7, ring4)
        session.append('note', {'text': 'first'})
        session.append('note', {'text': 'second'})
        document = json.loads(session_path.read_text())
        document['records'][0]['payload']['text'] = 'edited'
        session_path.write_text(json.dumps(document))
        with pytest.raises(VerificationError) as excinfo:
            Session.load(session_path).verify_digests()
        assert excinfo.value.report == {'record': 0}

    def test_edited_header_is_detected(self, session_path, ring4):
        session = Session.create(session_path, 7, ring4)
        session.append('note', {'text': 'first'})
        document = json.loads(session_path.read_text())
        document['header']['seed'] = 8
        session_path.write_text(json.dumps(document))
        with pytest.raises(VerificationError):
            Session.load(session_path).verify_digests()


class TestOpening:
    """Loading and extending session files"""

    def test_missing_file(self, session_path):
        with pytest.raises(SessionError):
            Session.load(session_path)

    def test_invalid_json(self, session_path):
        session_path.write_text('{not json')
        with pytest.raises(SessionError):
            Session.load(session_path)

    def test_missing_records(self, session_path):
        session_path.write_text('{"header": {}}')
        with pytest.raises(SessionError):
            Session.load(session_path)

    def test_open_extends_existing_log(self, session_path, ring4):
        Session.create(session_path, 7, ring4).append('note', {'text': 'first'})
        session = Session.open(session_path, 9, ring4)
        assert len(session.records) == 1
        assert session.seed == 7
        session.append('note', {'text': 'second'})
        assert Session.load(session_path).verify_digests()

    def test_open_rejects_other_ring(self, session_path, ring4):
        Session.create(session_path, 7, ring4)
        with pytest.raises(SessionError):
            Session.open(session_path, 7, PolynomialRing(['x', 'y'], 32003))


class TestReplay:
    """Re-verification of recorded certificates"""

    def test_certificate_replays(self, session_path, tc_defs, certificate_payload):
        session = Session.create(session_path, 7, tc_defs.ring)
        session.append('note', {'text': 'not replayed'})
        session.append('certificate', certificate_payload)
        assert Session.load(session_path).replay() == {1: 'certificate'}

    def test_wrong_twist_fails_replay(self, session_path, tc_defs, certificate_payload):
        payload = json.loads(json.dumps(certificate_payload))
        payload['t'] += 1
        session = Session.create(session_path, 7, tc_defs.ring)
        session.append('certificate', payload)
        # digests are intact, the certificate itself is not
        assert Session.load(session_path).verify_digests()
        with pytest.raises(VerificationError):
            Session.load(session_path).replay()

    def test_undecodable_record_fails_replay(self, session_path, tc_defs):
        session = Session.create(session_path, 7, tc_defs.ring)
        session.append('certificate', {'codim': 'two'})
        with pytest.raises(VerificationError):
            Session.load(session_path).replay()
