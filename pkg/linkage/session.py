"""
Append-only session logs.

A session file holds a header (seed, ring, definition text) and a list of
records ``{kind, payload, digest}``. Each digest is the SHA-256 of the
previous digest followed by the rendered record, starting from the digest
of the header, so editing any record breaks every later digest. Replay
re-verifies each certificate from the log alone.
"""

import hashlib
import io
import logging
from pathlib import Path

from rest_framework.exceptions import ParseError, ValidationError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from algebra.conf import lab_setting
from algebra.exceptions import AlgebraError
from algebra.poly import PolynomialRing
from linkage.exceptions import LinkageError, SessionError, VerificationError

logger = logging.getLogger(__name__)

REPLAYABLE = ('link_step', 'link_chain', 'certificate', 'matlink_chain')


def render(data):
    return JSONRenderer().render(data)


def digest(previous, kind, payload):
    record = render({'kind': kind, 'payload': payload})
    return hashlib.sha256(previous.encode() + record).hexdigest()


def ring_header(ring):
    return {'variables': list(ring.variables), 'characteristic': ring.characteristic}


class Session:
    """
    An open session log bound to a file path
    """

    def __init__(self, path, header, records=None):
        self.path = Path(path)
        self.header = header
        self.records = list(records or [])

    @classmethod
    def create(cls, path, seed, ring, definitions_text=''):
        header = {
            'schema': lab_setting('SCHEMA_VERSION'),
            'seed': seed,
            'ring': ring_header(ring),
            'definitions': definitions_text,
        }
        session = cls(path, header)
        session.save()
        logger.info(f'Started session {path} with seed {seed}')
        return session

    @classmethod
    def load(cls, path):
        path = Path(path)
        if not path.is_file():
            raise SessionError(f'Session file {path} does not exist')
        try:
            data = JSONParser().parse(io.BytesIO(path.read_bytes()))
        except ParseError as e:
            raise SessionError(f'Session file {path} is not valid JSON: {e}')
        if not isinstance(data, dict) or 'header' not in data or 'records' not in data:
            raise SessionError(f'Session file {path} lacks a header or records')
        return cls(path, data['header'], data['records'])

    @classmethod
    def open(cls, path, seed, ring, definitions_text=''):
        """Extend an existing log over the same ring, or start a new one"""
        if not Path(path).exists():
            return cls.create(path, seed, ring, definitions_text)
        session = cls.load(path)
        if session.header.get('ring') != ring_header(ring):
            raise SessionError(f'Session {path} was recorded over a different ring')
        session.verify_digests()
        return session

    @property
    def ring(self):
        ring = self.header.get('ring') or {}
        try:
            return PolynomialRing(ring['variables'], ring['characteristic'])
        except (KeyError, TypeError, AlgebraError) as e:
            raise SessionError(f'Session header has no usable ring: {e}')

    @property
    def seed(self):
        return self.header.get('seed')

    def head_digest(self):
        if self.records:
            return self.records[-1]['digest']
        return hashlib.sha256(render(self.header)).hexdigest()

    def append(self, kind, payload):
        record = {'kind': kind, 'payload': payload, 'digest': digest(self.head_digest(), kind, payload)}
        self.records.append(record)
        self.save()
        logger.debug(f'Appended {kind} record {len(self.records)} to {self.path}')
        return record

    def save(self):
        document = {'header': self.header, 'records': self.records}
        self.path.write_bytes(render(document))

    def verify_digests(self):
        previous = hashlib.sha256(render(self.header)).hexdigest()
        for index, record in enumerate(self.records):
            try:
                expected = digest(previous, record['kind'], record['payload'])
            except (KeyError, TypeError):
                raise VerificationError(f'Record {index} is malformed', {'record': index})
            if record.get('digest') != expected:
                logger.error(f'Digest mismatch at record {index} of {self.path}')
                raise VerificationError(f'Digest mismatch at record {index}', {'record': index})
            previous = expected
        return True

    def replay(self):
        """
        Check digests, then re-verify every replayable record through its
        serializer. Returns ``{index: kind}`` of the verified records.
        """
        # Import here to avoid circular imports
        from linkage.serializers import (
            LinkChainSerializer,
            LinkStepSerializer,
            MatLinkChainSerializer,
            QGCertSerializer,
        )

        serializers_by_kind = {
            'link_step': LinkStepSerializer,
            'link_chain': LinkChainSerializer,
            'certificate': QGCertSerializer,
            'matlink_chain': MatLinkChainSerializer,
        }
        self.verify_digests()
        context = {'ring': self.ring}
        verified = {}
        for index, record in enumerate(self.records):
            kind = record['kind']
            if kind not in REPLAYABLE:
                continue
            serializer = serializers_by_kind[kind](data=record['payload'], context=context)
            if not serializer.is_valid():
                logger.error(f'Record {index} ({kind}) does not deserialize: {serializer.errors}')
                raise VerificationError(f'Record {index} ({kind}) is invalid', {'errors': serializer.errors})
            try:
                serializer.save()
            except (AlgebraError, LinkageError, ValidationError) as e:
                raise VerificationError(f'Record {index} ({kind}) does not re-verify: {e}', {'record': index})
            verified[index] = kind
        logger.info(f'Replayed {len(verified)} records of {self.path}')
        return verified
