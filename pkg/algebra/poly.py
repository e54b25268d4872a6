"""
Homogeneous polynomial arithmetic over prime fields.

Polynomials are sympy ``PolyElement`` values living in a ``PolyRing`` over
``GF(p)`` with the graded reverse lexicographic order. ``PolynomialRing``
wraps that ring with the variable names, parsing and canonical printing used
throughout the project.
"""

import itertools
import logging
import re
from functools import cached_property

from sympy.ntheory import isprime
from sympy.polys.domains import GF
from sympy.polys.orderings import grevlex
from sympy.polys.rings import ring as sympy_ring

from algebra.conf import lab_setting
from algebra.exceptions import (
    AlgebraError,
    PolynomialSyntaxError,
    RingMismatchError,
    UnknownVariableError,
)

logger = logging.getLogger(__name__)

MAX_CHARACTERISTIC = 2 ** 31

_IDENTIFIER = re.compile(r'[A-Za-z_][A-Za-z0-9_]*\Z')
_TOKEN = re.compile(r'\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))')


class PolynomialRing:
    """
    The standard graded ring K[x_0, ..., x_n] with K = GF(p).

    Two rings are equal when they declare the same variables over the same
    field; elements of equal rings share one sympy ring object.
    """

    def __init__(self, variables, characteristic=None):
        variables = tuple(variables)
        if characteristic is None:
            characteristic = lab_setting('CHARACTERISTIC')
        if not variables:
            raise AlgebraError('A polynomial ring needs at least one variable')
        for name in variables:
            if not _IDENTIFIER.match(name):
                raise AlgebraError(f"Invalid variable name '{name}'")
        if len(set(variables)) != len(variables):
            raise AlgebraError(f'Duplicate variable in {list(variables)}')
        if not (2 < characteristic < MAX_CHARACTERISTIC) or not isprime(characteristic):
            raise AlgebraError(
                f'Characteristic must be a prime p with 2 < p < 2^31, got {characteristic}'
            )

        self.variables = variables
        self.characteristic = characteristic
        self.domain = GF(characteristic)
        self.sympy_ring = sympy_ring(','.join(variables), self.domain, grevlex)[0]

    @classmethod
    def standard(cls, nvars, characteristic=None):
        """Ring in the variables x0, ..., x{nvars-1}"""
        return cls([f'x{i}' for i in range(nvars)], characteristic)

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialRing)
            and self.variables == other.variables
            and self.characteristic == other.characteristic
        )

    def __hash__(self):
        return hash((self.variables, self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})[{','.join(self.variables)}]"

    @property
    def nvars(self):
        return len(self.variables)

    @property
    def n(self):
        """Dimension of the ambient projective space"""
        return len(self.variables) - 1

    @property
    def zero(self):
        return self.sympy_ring.zero

    @property
    def one(self):
        return self.sympy_ring.one

    @cached_property
    def gens(self):
        return self.sympy_ring.gens

    def gen(self, name):
        try:
            return self.gens[self.variables.index(name)]
        except ValueError:
            raise UnknownVariableError(name, 0)

    @property
    def linear_form(self):
        """The fixed linear form used for degree padding"""
        return self.gens[0]

    def constant(self, value):
        return self.sympy_ring.ground_new(value)

    def term(self, monomial, coefficient=1):
        return self.sympy_ring.term_new(tuple(monomial), coefficient)

    def order_key(self, monomial):
        return self.sympy_ring.order(monomial)

    def contains(self, f):
        return getattr(f, 'ring', None) == self.sympy_ring

    def check(self, *polys):
        for f in polys:
            if not self.contains(f):
                raise RingMismatchError(f'{f!r} is not an element of {self!r}')

    def to_int(self, coefficient):
        """Symmetric integer representative of a field element"""
        return self.domain.to_int(coefficient)

    def inverse(self, coefficient):
        return self.domain.revert(coefficient)

    def monomials_of_degree(self, degree):
        """All exponent vectors of the given total degree, largest first"""
        if degree < 0:
            return []
        monomials = []
        for combo in itertools.combinations_with_replacement(range(self.nvars), degree):
            exponents = [0] * self.nvars
            for index in combo:
                exponents[index] += 1
            monomials.append(tuple(exponents))
        monomials.sort(key=self.order_key, reverse=True)
        return monomials

    def random_form(self, degree, rng, monomials=None):
        """Random homogeneous form with coefficients drawn from ``rng``"""
        if monomials is None:
            monomials = self.monomials_of_degree(degree)
        p = self.characteristic
        return self.sympy_ring.from_dict({m: rng.randrange(p) for m in monomials})

    def random_scalar(self, rng, nonzero=True):
        low = 1 if nonzero else 0
        return self.domain(rng.randrange(low, self.characteristic))

    def parse(self, text):
        return parse_poly(text, self)

    def format(self, f):
        return format_poly(f, self)


def degree(f):
    """Total degree of a nonzero polynomial, None for zero"""
    if not f:
        return None
    return max(sum(monomial) for monomial in f.itermonoms())


def is_homogeneous(f):
    degrees = {sum(monomial) for monomial in f.itermonoms()}
    return len(degrees) <= 1


def poly_arith(f, g, op):
    """Apply ``op`` (add, sub or mul) to two polynomials of one ring"""
    if f.ring != g.ring:
        raise RingMismatchError('Operands live in different polynomial rings')
    if op == 'add':
        return f + g
    if op == 'sub':
        return f - g
    if op == 'mul':
        return f * g
    raise AlgebraError(f"Unknown polynomial operation '{op}'")


def _split_name(name, variables):
    """Split a run of letters into declared variable names, longest match first"""
    if not name:
        return []
    for end in range(len(name), 0, -1):
        head = name[:end]
        if head in variables:
            rest = _split_name(name[end:], variables)
            if rest is not None:
                return [head] + rest
    return None


class _Parser:
    """Recursive-descent parser for ``term (('+'|'-') term)*``"""

    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.tokens = self._tokenize(text)
        self.index = 0

    def _tokenize(self, text):
        tokens = []
        position = 0
        stripped_end = len(text.rstrip())
        while position < stripped_end:
            match = _TOKEN.match(text, position)
            if match is None or match.end() == position:
                offset = position + len(text[position:]) - len(text[position:].lstrip())
                raise PolynomialSyntaxError(f"unexpected character '{text[offset]}'", offset)
            kind = match.lastgroup
            start = match.start(kind)
            tokens.append((kind, match.group(kind), start))
            position = match.end()
        return tokens

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return ('end', '', len(self.text))

    def advance(self):
        token = self.peek()
        self.index += 1
        return token

    def parse(self):
        if not self.tokens:
            raise PolynomialSyntaxError('empty polynomial', 0)
        terms = {}
        sign = 1
        kind, value, position = self.peek()
        if kind == 'op' and value in '+-':
            self.advance()
            sign = -1 if value == '-' else 1
        self._add(terms, sign, *self.term())
        while True:
            kind, value, position = self.peek()
            if kind == 'end':
                break
            if kind == 'op' and value in '+-':
                self.advance()
                sign = -1 if value == '-' else 1
                self._add(terms, sign, *self.term())
                continue
            raise PolynomialSyntaxError(f"unexpected '{value}'", position)
        return self.ring.sympy_ring.from_dict(terms)

    def _add(self, terms, sign, coefficient, exponents):
        monomial = tuple(exponents)
        terms[monomial] = terms.get(monomial, 0) + sign * coefficient

    def term(self):
        coefficient = 1
        exponents = [0] * self.ring.nvars
        factors = 0
        while True:
            kind, value, position = self.peek()
            if kind == 'op' and value == '*':
                if factors == 0:
                    raise PolynomialSyntaxError("unexpected '*'", position)
                self.advance()
                kind, value, position = self.peek()
                if kind not in ('number', 'name'):
                    raise PolynomialSyntaxError("expected a factor after '*'", position)
            if kind == 'number':
                self.advance()
                coefficient *= int(value)
            elif kind == 'name':
                self.advance()
                self._variable(value, position, exponents)
            else:
                break
            factors += 1
        if factors == 0:
            kind, value, position = self.peek()
            found = f"'{value}'" if kind != 'end' else 'end of input'
            raise PolynomialSyntaxError(f'expected a term, found {found}', position)
        return coefficient, exponents

    def _variable(self, name, position, exponents):
        variables = self.ring.variables
        parts = [name] if name in variables else _split_name(name, variables)
        if parts is None:
            raise UnknownVariableError(name, position)
        power = 1
        kind, value, _ = self.peek()
        if kind == 'op' and value == '^':
            self.advance()
            kind, value, number_position = self.peek()
            if kind != 'number':
                raise PolynomialSyntaxError("expected an exponent after '^'", number_position)
            self.advance()
            power = int(value)
        for part in parts[:-1]:
            exponents[variables.index(part)] += 1
        exponents[variables.index(parts[-1])] += power


def parse_poly(text, ring):
    """Parse ``text`` into an element of ``ring``"""
    return _Parser(text, ring).parse()


def _format_monomial(monomial, variables):
    factors = []
    for name, exponent in zip(variables, monomial):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f'{name}^{exponent}')
    return '*'.join(factors)


def format_poly(f, ring):
    """Canonical string form: terms in descending order, symmetric coefficients"""
    ring.check(f)
    if not f:
        return '0'
    pieces = []
    for monomial, coefficient in f.terms():
        value = ring.to_int(coefficient)
        body = _format_monomial(monomial, ring.variables)
        magnitude = abs(value)
        if not body:
            text = str(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f'{magnitude}*{body}'
        if not pieces:
            pieces.append(f'-{text}' if value < 0 else text)
        else:
            pieces.append(f'- {text}' if value < 0 else f'+ {text}')
    return ' '.join(pieces)
