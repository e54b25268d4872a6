"""
Exceptions raised by the algebra kernel.
"""


class AlgebraError(Exception):
    """Base class for all kernel errors"""


class RingMismatchError(AlgebraError):
    """Operands live in different polynomial rings"""


class PolynomialSyntaxError(AlgebraError):
    """A polynomial string does not follow the grammar"""

    def __init__(self, message, position):
        super().__init__(f'{message} at position {position}')
        self.position = position


class UnknownVariableError(PolynomialSyntaxError):
    """A polynomial string names a variable the ring does not declare"""

    def __init__(self, name, position):
        super().__init__(f"unknown variable '{name}'", position)
        self.name = name


class HomogeneityError(AlgebraError):
    """An entry, vector or matrix violates the declared grading"""

    def __init__(self, message, entry=None):
        if entry is not None:
            message = f'{message} (entry {entry[0]}, {entry[1]})'
        super().__init__(message)
        self.entry = entry


class ZeroModuleError(AlgebraError):
    """The operation is undefined on the zero module"""


class FreeModuleError(AlgebraError):
    """The operation requires a non-free module"""


class ConsistencyError(AlgebraError):
    """An identity that must hold by construction failed"""


class LiftError(ConsistencyError):
    """A chain map could not be lifted along a resolution"""
