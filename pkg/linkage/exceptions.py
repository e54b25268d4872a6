"""
Exceptions raised by the linkage layer and the command line.
"""

from algebra.exceptions import AlgebraError


class LinkageError(AlgebraError):
    """A link could not be constructed from the given data"""


class DegenerateLinkError(LinkageError):
    """The epimorphism is injective, so the linking map is zero"""


class PreparationError(LinkageError):
    """No admissible row and column operations were found for a matrix"""


class DefinitionError(Exception):
    """A definition file does not follow the grammar"""

    def __init__(self, message, line=None):
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)
        self.line = line


class SessionError(Exception):
    """A session log cannot be read or extended"""


class VerificationError(Exception):
    """A certificate or identity failed to verify"""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}
