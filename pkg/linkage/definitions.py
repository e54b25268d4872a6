"""
Parser for definition files.

    ring GF(<p>)[<var>(,<var>)*]
    matrix <name> rowtwists [<int>(,<int>)*] { <poly>(, <poly>)* ; ... }
    module <name> = coker <matrixname>
    ideal  <name> = ( <poly>(, <poly>)* )

``#`` starts a comment. A matrix body may span several lines up to the
closing brace, an ideal up to the closing parenthesis.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from algebra.conf import lab_setting
from algebra.exceptions import AlgebraError
from algebra.fmodule import PresentedModule
from algebra.poly import PolynomialRing, is_homogeneous
from linkage.exceptions import DefinitionError
from linkage.matlink import PolyMatrix

logger = logging.getLogger(__name__)

SUFFIX = '.lia'

_NAME = r'[A-Za-z_][A-Za-z0-9_]*'
_RING = re.compile(r'ring\s+GF\(\s*(\d+)\s*\)\s*\[([^\]]*)\]$')
_MATRIX = re.compile(rf'matrix\s+({_NAME})\s+rowtwists\s*\[([^\]]*)\]\s*\{{(.*)\}}$', re.S)
_MODULE = re.compile(rf'module\s+({_NAME})\s*=\s*coker\s+({_NAME})$')
_IDEAL = re.compile(rf'ideal\s+({_NAME})\s*=\s*\((.*)\)$', re.S)


@dataclass
class Definitions:
    """Ring and named objects of one or more definition files"""

    ring: PolynomialRing = None
    matrices: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)
    text: str = ''

    def names(self):
        return set(self.matrices) | set(self.modules) | set(self.ideals)

    def matrix(self, name):
        if name not in self.matrices:
            raise DefinitionError(f"Unknown matrix '{name}'")
        return self.matrices[name]

    def ideal(self, name):
        if name not in self.ideals:
            raise DefinitionError(f"Unknown ideal '{name}'")
        return self.ideals[name]

    def module(self, name):
        """A named module; ideals stand for R/I and matrices for their cokernel"""
        if name in self.modules:
            return self.modules[name]
        if name in self.ideals:
            return PresentedModule.quotient_ring(self.ring, self.ideals[name])
        if name in self.matrices:
            return self.matrices[name].to_module()
        raise DefinitionError(f"Unknown module '{name}'")

    def merge(self, other):
        if self.ring is None:
            return other
        if other.ring != self.ring:
            raise DefinitionError(f'Definition files declare different rings: {self.ring!r} and {other.ring!r}')
        clash = self.names() & other.names()
        if clash:
            raise DefinitionError(f'Duplicate names across definition files: {", ".join(sorted(clash))}')
        return Definitions(
            ring=self.ring,
            matrices={**self.matrices, **other.matrices},
            modules={**self.modules, **other.modules},
            ideals={**self.ideals, **other.ideals},
            text=self.text + other.text,
        )


def _statements(text):
    """Yield ``(line, statement)`` with comments removed and multi-line bodies joined"""
    pending, start, closer = [], None, None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if not pending:
            start = number
            if line.startswith('matrix') and '{' in line:
                closer = '}'
            elif line.startswith('ideal') and '(' in line:
                closer = ')'
            else:
                closer = None
        pending.append(line)
        if closer is None or line.endswith(closer):
            yield start, ' '.join(pending)
            pending = []
    if pending:
        raise DefinitionError(f"Missing closing '{closer}'", start)


def _integers(text, line):
    try:
        return tuple(int(part) for part in text.split(',') if part.strip())
    except ValueError:
        raise DefinitionError(f'Expected a list of integers, got [{text}]', line)


def _parse_poly(ring, text, line):
    try:
        return ring.parse(text.strip())
    except AlgebraError as e:
        raise DefinitionError(str(e), line)


def parse_definitions(text, source='<string>'):
    """Parse definition text; errors carry the offending line number"""
    definitions = Definitions(text=text)
    for line, statement in _statements(text):
        keyword = statement.split(None, 1)[0]
        if keyword == 'ring':
            match = _RING.match(statement)
            if not match:
                raise DefinitionError('Malformed ring declaration', line)
            if definitions.ring is not None:
                raise DefinitionError('The ring is declared twice', line)
            variables = [v.strip() for v in match.group(2).split(',') if v.strip()]
            try:
                definitions.ring = PolynomialRing(variables, int(match.group(1)))
            except AlgebraError as e:
                raise DefinitionError(str(e), line)
            continue

        if keyword not in ('matrix', 'module', 'ideal'):
            raise DefinitionError(f"Unknown statement '{keyword}'", line)
        if definitions.ring is None:
            raise DefinitionError(f'{keyword} before the ring declaration', line)
        ring = definitions.ring

        if keyword == 'matrix':
            match = _MATRIX.match(statement)
            if not match:
                raise DefinitionError('Malformed matrix declaration', line)
            name = match.group(1)
            twists = _integers(match.group(2), line)
            rows = [
                [_parse_poly(ring, entry, line) for entry in row.split(',')]
                for row in match.group(3).split(';') if row.strip()
            ]
            try:
                value = PolyMatrix.from_rows(ring, rows, twists)
            except AlgebraError as e:
                raise DefinitionError(f'matrix {name}: {e}', line)
            target = definitions.matrices
        elif keyword == 'module':
            match = _MODULE.match(statement)
            if not match:
                raise DefinitionError('Malformed module declaration', line)
            name = match.group(1)
            if match.group(2) not in definitions.matrices:
                raise DefinitionError(f"Unknown matrix '{match.group(2)}'", line)
            value = definitions.matrices[match.group(2)].to_module()
            target = definitions.modules
        else:
            match = _IDEAL.match(statement)
            if not match:
                raise DefinitionError('Malformed ideal declaration', line)
            name = match.group(1)
            value = tuple(_parse_poly(ring, entry, line) for entry in match.group(2).split(','))
            for position, generator in enumerate(value):
                if generator and not is_homogeneous(generator):
                    raise DefinitionError(f'ideal {name}: generator {position} is not homogeneous', line)
            try:
                PresentedModule.quotient_ring(ring, value)
            except AlgebraError as e:
                raise DefinitionError(f'ideal {name}: {e}', line)
            target = definitions.ideals

        if name in definitions.names():
            raise DefinitionError(f"Duplicate name '{name}'", line)
        target[name] = value

    if definitions.ring is None:
        raise DefinitionError(f'{source} declares no ring')
    logger.debug(f'Parsed {source}: {len(definitions.names())} named objects')
    return definitions


def definitions_dir():
    configured = lab_setting('DEFINITIONS_DIR')
    return Path(configured) if configured else Path(__file__).resolve().parent / 'fixtures'


def resolve_path(reference):
    """A file path, or the name of a bundled fixture such as ``TC``"""
    path = Path(reference)
    if path.is_file():
        return path
    bundled = definitions_dir() / f'{reference}{SUFFIX}'
    if bundled.is_file():
        return bundled
    raise DefinitionError(f"No definition file or fixture named '{reference}'")


def load_definitions(references):
    """Parse and merge definition files; all of them must declare the same ring"""
    merged = Definitions()
    for reference in references:
        path = resolve_path(reference)
        merged = merged.merge(parse_definitions(path.read_text(), source=str(path)))
    return merged


def fixture_names():
    return sorted(path.stem for path in definitions_dir().glob(f'*{SUFFIX}'))
