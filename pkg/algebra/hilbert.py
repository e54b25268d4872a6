"""
Hilbert series, functions and polynomials of presented modules.

The series of ``coker A`` is read off the leading-term module of a Groebner
basis of the relations: position ``i`` contributes
``t^(twist_i) * N(J_i) / (1 - t)^(n+1)`` where ``N(J_i)`` is the numerator
of the monomial quotient ``R/J_i``. Local cohomology dimensions come from
graded local duality.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

from sympy.polys.domains import ZZ
from sympy.polys.rings import ring as sympy_ring

from algebra.exceptions import AlgebraError, ConsistencyError, ZeroModuleError

logger = logging.getLogger(__name__)

MINUS_INFINITY = float('-inf')

_T_RING, _T = sympy_ring('t', ZZ)


def _minimal_monomials(monomials):
    monomials = sorted(set(monomials), key=lambda m: (sum(m), m))
    result = []
    for m in monomials:
        if not any(all(a <= b for a, b in zip(g, m)) for g in result):
            result.append(m)
    return tuple(sorted(result))


@lru_cache(maxsize=4096)
def _monomial_numerator(generators):
    """Numerator of the Hilbert series of R/J for a minimal monomial ideal J"""
    if not generators:
        return _T_RING.one
    if any(sum(g) == 0 for g in generators):
        return _T_RING.zero
    mixed = [g for g in generators if sum(1 for e in g if e) > 1]
    if not mixed:
        result = _T_RING.one
        for g in generators:
            result = result * (1 - _T ** sum(g))
        return result
    nvars = len(generators[0])
    counts = [sum(1 for g in mixed if g[k]) for k in range(nvars)]
    pivot = max(range(nvars), key=lambda k: (counts[k], -k))
    unit = tuple(1 if k == pivot else 0 for k in range(nvars))
    added = _minimal_monomials([g for g in generators if not g[pivot]] + [unit])
    divided = _minimal_monomials(
        [tuple(e - 1 if k == pivot and e else e for k, e in enumerate(g)) for g in generators]
    )
    return _monomial_numerator(added) + _T * _monomial_numerator(divided)


def _laurent(poly, shift=0):
    return {monomial[0] + shift: int(coefficient) for monomial, coefficient in poly.terms()}


def _clean(coefficients):
    return tuple(sorted((k, c) for k, c in coefficients.items() if c))


@dataclass(frozen=True)
class HilbertSeries:
    """``sum c_k t^k / (1 - t)^nvars`` with a Laurent numerator"""

    numerator: tuple
    nvars: int

    @classmethod
    def from_dict(cls, coefficients, nvars):
        return cls(_clean(coefficients), nvars)

    def as_dict(self):
        return dict(self.numerator)

    @property
    def is_zero(self):
        return not self.numerator

    def shift(self, amount):
        """Series of M(amount)"""
        return HilbertSeries(tuple((k - amount, c) for k, c in self.numerator), self.nvars)

    def _combine(self, other, sign):
        if self.nvars != other.nvars:
            raise AlgebraError('Hilbert series over different rings')
        result = self.as_dict()
        for k, c in other.numerator:
            result[k] = result.get(k, 0) + sign * c
        return HilbertSeries.from_dict(result, self.nvars)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def reduced(self):
        """``(Q, d)`` with the series equal to ``Q(t) / (1 - t)^d`` and Q(1) != 0"""
        coefficients = self.as_dict()
        d = self.nvars
        while coefficients and sum(coefficients.values()) == 0:
            low, high = min(coefficients), max(coefficients)
            quotient = {}
            running = 0
            for k in range(low, high):
                running += coefficients.get(k, 0)
                if running:
                    quotient[k] = running
            coefficients = quotient
            d -= 1
        return coefficients, d

    def coefficient(self, degree):
        reduced, d = self.reduced()
        return _series_value(reduced, d, degree)

    def display(self):
        terms = []
        for k, c in self.numerator:
            terms.append(f'{c:+d}*t^{k}')
        body = ' '.join(terms) if terms else '0'
        return f'({body}) / (1-t)^{self.nvars}'


def _series_value(reduced, d, j):
    if d <= 0:
        return reduced.get(j, 0)
    total = 0
    for k, c in reduced.items():
        if j >= k:
            total += c * math.comb(j - k + d - 1, d - 1)
    return total


def _binomial_polynomial(x, k):
    """C(x, k) as a polynomial in x, evaluated at any integer x"""
    numerator = 1
    for i in range(k):
        numerator *= x - i
    return numerator // math.factorial(k)


def _polynomial_value(reduced, d, j):
    if d <= 0:
        return 0
    return sum(c * _binomial_polynomial(j - k + d - 1, d - 1) for k, c in reduced.items())


@dataclass(frozen=True)
class HilbertData:
    series: HilbertSeries
    dimension: object
    degree: int
    h_coefficients: tuple
    regularity_index: object
    initial_degree: object
    reduced_numerator: tuple

    @property
    def is_zero(self):
        return self.series.is_zero

    def function(self, j):
        """h_M(j) = dim_K [M]_j"""
        if self.is_zero:
            return 0
        return _series_value(dict(self.reduced_numerator), self.dimension, j)

    def polynomial(self, j):
        """p_M(j)"""
        if self.is_zero:
            return 0
        return _polynomial_value(dict(self.reduced_numerator), self.dimension, j)

    def defect(self, j):
        return self.function(j) - self.polynomial(j)


def series_of(module):
    basis = module.image_basis
    nvars = module.ring.nvars
    total = {}
    for position, twist in enumerate(module.row_twists):
        generators = _minimal_monomials(basis.lead_monomials(position))
        for k, c in _laurent(_monomial_numerator(generators), twist).items():
            total[k] = total.get(k, 0) + c
    return HilbertSeries.from_dict(total, nvars)


def _forward_difference(values_at, order):
    return sum(
        (-1) ** (order - l) * math.comb(order, l) * values_at(l) for l in range(order + 1)
    )


def compute_hilbert_data(module):
    series = series_of(module)
    if series.is_zero:
        return HilbertData(series, MINUS_INFINITY, 0, (), None, None, ())
    reduced, d = series.reduced()
    degree = sum(reduced.values())
    low, high = min(reduced), max(reduced)

    def polynomial(j):
        return _polynomial_value(reduced, d, j)

    h_coefficients = tuple(_forward_difference(polynomial, d - 1 - i) for i in range(d))

    start = high - d if d > 0 else high
    regularity_index = None
    for j in range(start, low - d - 2, -1):
        if _series_value(reduced, d, j) != polynomial(j):
            regularity_index = j + 1
            break
    if regularity_index is None:
        raise ConsistencyError('Hilbert function never differs from the Hilbert polynomial')

    data = HilbertData(
        series=series,
        dimension=d,
        degree=degree,
        h_coefficients=h_coefficients,
        regularity_index=regularity_index,
        initial_degree=low,
        reduced_numerator=_clean(reduced),
    )
    logger.debug(f'Hilbert data: dim {d}, degree {degree}, r {regularity_index}, a {low}')
    return data


def hilbert_data(module):
    return module.hilbert


def hilbert_function(module, j):
    return module.hilbert.function(j)


def hilbert_polynomial(module, j):
    return module.hilbert.polynomial(j)


def local_cohomology_hf(module, i, j):
    """dim_K [H^i_m(M)]_j, computed as dim_K [Ext^(n+1-i)(M, R)]_(-j-n-1)"""
    # Import here to avoid circular imports
    from algebra.fmodule import ext_module

    nvars = module.ring.nvars
    if not 0 <= i <= nvars:
        raise AlgebraError(f'Local cohomology index {i} outside 0..{nvars}')
    return ext_module(module, nvars - i).hilbert.function(-j - nvars)


def ext_dimension(module, index):
    # Import here to avoid circular imports
    from algebra.fmodule import ext_module

    return ext_module(module, index).dimension


def is_unmixed(module):
    """dim Ext^(n+1-i)(M, R) < i for every i < dim M"""
    if module.is_zero:
        raise ZeroModuleError('Unmixedness is undefined for the zero module')
    nvars = module.ring.nvars
    for i in range(module.dimension):
        if ext_dimension(module, nvars - i) >= i:
            logger.debug(f'Not unmixed: Ext^{nvars - i} has dimension {ext_dimension(module, nvars - i)}')
            return False
    return True


def riemann_roch_check(module, j):
    """h_M(j) - p_M(j) equals the alternating sum of local cohomology dimensions"""
    nvars = module.ring.nvars
    left = module.hilbert.defect(j)
    right = sum((-1) ** i * local_cohomology_hf(module, i, j) for i in range(nvars + 1))
    return left == right


def projective_dimension(module):
    return module.resolution.length


def depth(module):
    if module.is_zero:
        raise ZeroModuleError('Depth of the zero module')
    return module.ring.nvars - projective_dimension(module)


def is_cohen_macaulay(module):
    if module.is_zero:
        raise ZeroModuleError('Cohen-Macaulayness of the zero module')
    return projective_dimension(module) == module.codim


def is_locally_cohen_macaulay(module):
    """Every Ext^k(M, R) with k > codim M has finite length"""
    if module.is_zero:
        raise ZeroModuleError('Cohen-Macaulayness of the zero module')
    codim = module.codim
    for index in range(codim + 1, projective_dimension(module) + 1):
        if ext_dimension(module, index) > 0:
            return False
    return True
