"""
Groebner bases for homogeneous submodules of graded free modules.

Vectors are tuples of polynomials, one per generator of the ambient free
module ``F = R(-d_0) + ... + R(-d_k)``. The module order is
position-over-term: positions are ranked (by default by twist, then index)
and terms inside a position follow the ring order. Pairs are processed
degree by degree, which lets the same engine answer truncated questions
(minimal generators) and full ones (reduced bases, syzygies, lifts).
"""

import heapq
import logging
from dataclasses import dataclass, field
from functools import cached_property

from sympy.polys.monomials import monomial_div, monomial_lcm

from algebra.exceptions import HomogeneityError, RingMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FreeModule:
    """Graded free module with generator degrees ``twists``"""

    ring: object
    twists: tuple
    positions: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, 'twists', tuple(self.twists))
        if self.positions is None:
            ranked = sorted(range(len(self.twists)), key=lambda i: (self.twists[i], i))
            object.__setattr__(self, 'positions', tuple(ranked))
        else:
            object.__setattr__(self, 'positions', tuple(self.positions))

    @property
    def rank(self):
        return len(self.twists)

    @cached_property
    def position_rank(self):
        """Position index -> priority (0 is the highest)"""
        return {position: rank for rank, position in enumerate(self.positions)}

    def zero(self):
        return (self.ring.zero,) * self.rank

    def basis_vector(self, index):
        return tuple(self.ring.one if i == index else self.ring.zero for i in range(self.rank))

    def basis(self):
        return [self.basis_vector(i) for i in range(self.rank)]

    def check(self, vector):
        if len(vector) != self.rank:
            raise RingMismatchError(f'Vector of length {len(vector)} does not live in a rank {self.rank} module')
        self.ring.check(*vector)

    def degree(self, vector):
        """Degree of a homogeneous vector, None for zero"""
        result = None
        for component, twist in zip(vector, self.twists):
            for monomial in component.itermonoms():
                value = sum(monomial) + twist
                if result is None:
                    result = value
                elif value != result:
                    raise HomogeneityError(f'Vector is not homogeneous: degrees {result} and {value}')
        return result

    def is_homogeneous(self, vector):
        try:
            self.degree(vector)
        except HomogeneityError:
            return False
        return True

    def lead(self, vector):
        """Leading term ``(position, monomial, coefficient)`` or None"""
        for position in self.positions:
            component = vector[position]
            if component:
                monomial, coefficient = component.LT
                return position, monomial, coefficient
        return None

    def term_key(self, position, monomial):
        return (-self.position_rank[position], self.ring.order_key(monomial))

    def direct_sum(self, other):
        offset = self.rank
        return FreeModule(
            self.ring,
            self.twists + other.twists,
            self.positions + tuple(offset + p for p in other.positions),
        )


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(vector, f):
    return tuple(component * f for component in vector)


def combine(coefficients, vectors, zero):
    """Sum of ``coefficients[i] * vectors[i]``"""
    result = list(zero)
    for coefficient, vector in zip(coefficients, vectors):
        if not coefficient:
            continue
        for index, component in enumerate(vector):
            if component:
                result[index] = result[index] + coefficient * component
    return tuple(result)


def is_zero(vector):
    return not any(vector)


def _mul_term(vector, monomial, coefficient):
    return tuple(component.mul_term((monomial, coefficient)) for component in vector)


class _Buchberger:
    """
    Incremental homogeneous Buchberger state with Gebauer-Moeller pair
    elimination. ``close(d)`` completes the basis up to degree ``d``.
    """

    def __init__(self, module):
        self.module = module
        self.elements = []
        self.leads = []
        self.degrees = []
        self.active = set()
        self.by_position = {}
        self.pairs = []
        self.live = set()
        self.processed = 0

    def _divisor(self, position, monomial):
        for index in self.by_position.get(position, ()):
            quotient = monomial_div(monomial, self.leads[index][1])
            if quotient is not None:
                return index, quotient
        return None

    def reduce(self, vector, full=True):
        """Normal form of ``vector``; with ``full=False`` stop at the leading term"""
        module = self.module
        ring = module.ring
        vector = list(vector)
        remainder = list(module.zero())
        while True:
            lead = module.lead(vector)
            if lead is None:
                break
            position, monomial, coefficient = lead
            found = self._divisor(position, monomial)
            if found is None:
                if not full:
                    return tuple(a + b for a, b in zip(remainder, vector))
                term = ring.term(monomial, coefficient)
                remainder[position] = remainder[position] + term
                vector[position] = vector[position] - term
                continue
            index, quotient = found
            element = self.elements[index]
            for k, component in enumerate(element):
                if component:
                    vector[k] = vector[k] - component.mul_term((quotient, coefficient))
        return tuple(remainder)

    def insert(self, vector):
        """Add a nonzero vector already reduced against the current basis"""
        module = self.module
        position, monomial, coefficient = module.lead(vector)
        inverse = module.ring.inverse(coefficient)
        vector = tuple(component.mul_ground(inverse) for component in vector)
        index = len(self.elements)
        self.elements.append(vector)
        self.leads.append((position, monomial))
        self.degrees.append(module.degree(vector))
        self._update(index)
        return index

    def _update(self, new):
        position, mh = self.leads[new]
        twist = self.module.twists[position]
        candidates = [g for g in self.active if self.leads[g][0] == position]

        kept = []
        while candidates:
            g = candidates.pop()
            lcm_hg = monomial_lcm(mh, self.leads[g][1])

            def lcm_divides(other):
                m = monomial_lcm(mh, self.leads[other][1])
                return monomial_div(lcm_hg, m) is not None

            if not any(lcm_divides(other) for other in candidates) and not any(
                lcm_divides(other) for other in kept
            ):
                kept.append(g)

        for pair in list(self.live):
            g1, g2 = pair
            if self.leads[g1][0] != position:
                continue
            m1 = self.leads[g1][1]
            m2 = self.leads[g2][1]
            lcm12 = monomial_lcm(m1, m2)
            if (
                monomial_div(lcm12, mh) is not None
                and monomial_lcm(m1, mh) != lcm12
                and monomial_lcm(m2, mh) != lcm12
            ):
                self.live.discard(pair)

        for g in kept:
            lcm_hg = monomial_lcm(mh, self.leads[g][1])
            pair = (g, new)
            self.live.add(pair)
            heapq.heappush(self.pairs, (sum(lcm_hg) + twist, g, new))

        self.active = {
            g for g in self.active
            if not (self.leads[g][0] == position and monomial_div(self.leads[g][1], mh) is not None)
        }
        self.active.add(new)
        self.by_position = {}
        for g in sorted(self.active):
            self.by_position.setdefault(self.leads[g][0], []).append(g)

    def _spair(self, g1, g2):
        position, m1 = self.leads[g1]
        m2 = self.leads[g2][1]
        lcm = monomial_lcm(m1, m2)
        one = self.module.ring.domain.one
        left = _mul_term(self.elements[g1], monomial_div(lcm, m1), one)
        right = _mul_term(self.elements[g2], monomial_div(lcm, m2), one)
        return sub(left, right)

    def close(self, degree=None):
        """Process every pair of degree at most ``degree`` (all pairs if None)"""
        while self.pairs and (degree is None or self.pairs[0][0] <= degree):
            _, g1, g2 = heapq.heappop(self.pairs)
            if (g1, g2) not in self.live:
                continue
            self.live.discard((g1, g2))
            self.processed += 1
            remainder = self.reduce(self._spair(g1, g2))
            if not is_zero(remainder):
                self.insert(remainder)

    def add_generators(self, vectors):
        """Insert generators in degree order; return indices of those that were new"""
        module = self.module
        graded = []
        for index, vector in enumerate(vectors):
            module.check(vector)
            if is_zero(vector):
                continue
            graded.append((module.degree(vector), index, vector))
        graded.sort(key=lambda item: (item[0], item[1]))
        kept = []
        for degree, index, vector in graded:
            self.close(degree)
            remainder = self.reduce(vector)
            if not is_zero(remainder):
                self.insert(remainder)
                kept.append(index)
        return kept

    def reduced_basis(self):
        self.close()
        minimal = sorted(self.active)
        result = []
        for g in minimal:
            others = [h for h in minimal if h != g]
            saved = self.by_position
            self.by_position = {}
            for h in others:
                self.by_position.setdefault(self.leads[h][0], []).append(h)
            position, monomial = self.leads[g]
            vector = self.elements[g]
            tail = list(vector)
            head = self.module.ring.term(monomial, 1)
            tail[position] = tail[position] - head
            reduced = list(self.reduce(tuple(tail)))
            reduced[position] = reduced[position] + head
            result.append(tuple(reduced))
            self.by_position = saved
        module = self.module
        result.sort(key=lambda v: (module.degree(v), module.term_key(*module.lead(v)[:2])))
        return result


class GBasis:
    """A reduced Groebner basis of a homogeneous submodule of ``module``"""

    def __init__(self, module, elements):
        self.module = module
        self.elements = tuple(elements)
        self._engine = _Buchberger(module)
        for element in self.elements:
            self._engine.elements.append(element)
            self._engine.leads.append(module.lead(element)[:2])
            self._engine.degrees.append(module.degree(element))
        self._engine.active = set(range(len(self.elements)))
        for index in range(len(self.elements)):
            self._engine.by_position.setdefault(self._engine.leads[index][0], []).append(index)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f'<GBasis of {len(self.elements)} elements in rank {self.module.rank}>'

    @property
    def leads(self):
        return self._engine.leads

    def normal_form(self, vector):
        self.module.check(vector)
        return self._engine.reduce(vector)

    def contains(self, vector):
        return is_zero(self.normal_form(vector))

    def contains_all(self, vectors):
        return all(self.contains(v) for v in vectors)

    def is_everything(self):
        """True when the submodule is the whole ambient module"""
        zero = self.module.ring.sympy_ring.zero_monom
        return all(
            any(lead == (position, zero) for lead in self.leads)
            for position in range(self.module.rank)
        )

    def lead_monomials(self, position):
        return [monomial for p, monomial in self.leads if p == position]

    def standard_monomials(self, degree):
        """Basis ``(position, monomial)`` of the degree-``degree`` piece of F/N"""
        ring = self.module.ring
        basis = []
        for position in self.module.positions:
            leads = self.lead_monomials(position)
            for monomial in ring.monomials_of_degree(degree - self.module.twists[position]):
                if not any(monomial_div(monomial, lead) is not None for lead in leads):
                    basis.append((position, monomial))
        return basis

    def coordinates(self, vector, degree):
        """Coefficients of the normal form of ``vector`` on ``standard_monomials(degree)``"""
        ring = self.module.ring
        remainder = self.normal_form(vector)
        zero = ring.domain.zero
        return [
            remainder[position].get(monomial, zero)
            for position, monomial in self.standard_monomials(degree)
        ]

    def equals(self, other):
        return self.contains_all(other.elements) and other.contains_all(self.elements)


def groebner(gens, module):
    """Reduced Groebner basis of the submodule generated by ``gens``"""
    engine = _Buchberger(module)
    engine.add_generators(list(gens))
    basis = engine.reduced_basis()
    logger.debug(f'Groebner basis: {len(gens)} generators -> {len(basis)} elements, {engine.processed} pairs')
    return GBasis(module, basis)


def minimal_generators(gens, module):
    """Indices of a minimal generating subset, found degree by degree"""
    engine = _Buchberger(module)
    return engine.add_generators(list(gens))


def ideal_module(ring):
    return FreeModule(ring, (0,))


def ideal_basis(polys, ring):
    """Groebner basis of an ideal, as a submodule of R^1"""
    return groebner([(f,) for f in polys], ideal_module(ring))


class AugmentedBasis:
    """
    Groebner basis of the vectors ``(g_j | e_j)`` in ``F + R^m``.

    With the ``F`` block ranked above the tags, the elements whose ``F`` part
    vanishes generate the syzygies of the ``g_j``, and reducing ``(v | 0)``
    expresses ``v`` in terms of the ``g_j`` when possible.
    """

    def __init__(self, gens, module, tag_twists=None):
        gens = [tuple(g) for g in gens]
        for g in gens:
            module.check(g)
        if tag_twists is None:
            tag_twists = []
            for g in gens:
                degree = module.degree(g)
                if degree is None:
                    raise HomogeneityError('Zero generator needs an explicit degree')
                tag_twists.append(degree)
        for g, twist in zip(gens, tag_twists):
            degree = module.degree(g)
            if degree is not None and degree != twist:
                raise HomogeneityError(f'Generator of degree {degree} declared with degree {twist}')
        self.module = module
        self.gens = gens
        self.tag_module = FreeModule(module.ring, tuple(tag_twists))
        self.ambient = module.direct_sum(self.tag_module)
        augmented = [tuple(g) + self.tag_module.basis_vector(j) for j, g in enumerate(gens)]
        self.basis = groebner(augmented, self.ambient)
        self._rank = module.rank

    def _split(self, vector):
        return vector[:self._rank], vector[self._rank:]

    def syzygies(self, minimal=True):
        """Generators of the syzygy module of the ``g_j`` inside ``R^m``"""
        syz = []
        for element in self.basis:
            head, tail = self._split(element)
            if is_zero(head):
                syz.append(tail)
        if minimal:
            syz = [syz[i] for i in minimal_generators(syz, self.tag_module)]
        return syz

    def lift(self, vector):
        """Coefficients c with sum c_j g_j = vector, or None when vector is not in the span"""
        self.module.check(vector)
        remainder = self.basis.normal_form(tuple(vector) + self.tag_module.zero())
        head, tail = self._split(remainder)
        if not is_zero(head):
            return None
        return tuple(-component for component in tail)

    def image_basis(self):
        elements = []
        for element in self.basis:
            head, _ = self._split(element)
            if not is_zero(head):
                elements.append(head)
        return GBasis(self.module, elements)


def syzygies(gb):
    """Minimal generators of the relations among the elements of ``gb``"""
    return AugmentedBasis(list(gb.elements), gb.module).syzygies()


def kernel_of_map(columns, source, target):
    """Groebner basis of the kernel of ``F1 -> F0`` given by ``columns``"""
    if len(columns) != source.rank:
        raise RingMismatchError(f'{len(columns)} columns for a rank {source.rank} source')
    for j, column in enumerate(columns):
        target.check(column)
        degree = target.degree(column)
        if degree is not None and degree != source.twists[j]:
            raise HomogeneityError(
                f'Column {j} has degree {degree}, expected {source.twists[j]}'
            )
    augmented = AugmentedBasis(columns, target, source.twists)
    return groebner(augmented.syzygies(), source)


def kernel_generators(columns, source, target):
    """Minimal generators of the kernel of ``F1 -> F0``"""
    if not columns:
        return []
    return AugmentedBasis(columns, target, source.twists).syzygies()


def intersect(first, second, module):
    """Groebner basis of the intersection of two submodules given by generators"""
    first = [tuple(v) for v in first if not is_zero(v)]
    second = [tuple(v) for v in second if not is_zero(v)]
    if not first or not second:
        return GBasis(module, [])
    syz = AugmentedBasis(first + second, module).syzygies(minimal=False)
    zero = module.zero()
    elements = []
    for relation in syz:
        elements.append(combine(relation[:len(first)], first, zero))
    return groebner(elements, module)


def module_quotient(submodule, divisors, module=None):
    """
    The ideal {r in R : r * u in N for every divisor u}.

    ``submodule`` is a GBasis or a list of generators of N; ``divisors`` are
    vectors of the same ambient module or, for ideals, plain polynomials.
    """
    if isinstance(submodule, GBasis):
        module = submodule.module
        gens = list(submodule.elements)
    else:
        gens = [tuple(v) for v in submodule]
        if module is None:
            raise RingMismatchError('An ambient module is required for a list of generators')
    ring = module.ring
    divisors = [u if isinstance(u, tuple) else (u,) for u in divisors]
    for u in divisors:
        if len(u) != module.rank:
            raise RingMismatchError(
                f'Divisor of length {len(u)} does not live in the rank {module.rank} ambient module'
            )
    result = ideal_basis([ring.one], ring)
    for u in divisors:
        if is_zero(u):
            continue
        degree = module.degree(u)
        nonzero = [g for g in gens if not is_zero(g)]
        twists = [degree] + [module.degree(g) for g in nonzero]
        syz = AugmentedBasis([u] + nonzero, module, twists).syzygies(minimal=False)
        quotient = ideal_basis([relation[0] for relation in syz], ring)
        result = intersect(list(result.elements), list(quotient.elements), ideal_module(ring))
    return result


def ideal_quotient(ideal, divisors, ring):
    """Ideal quotient I : J of ideals given by polynomial generators"""
    return module_quotient([(f,) for f in ideal], list(divisors), ideal_module(ring))


def annihilator(module):
    """Ann M as an ideal Groebner basis, for a presented module M"""
    ring = module.ring
    target = module.target
    columns = [c for c in module.relations if not is_zero(c)]
    result = ideal_basis([ring.one], ring)
    for i in range(target.rank):
        quotient = module_quotient(columns, [target.basis_vector(i)], target)
        result = intersect(list(result.elements), list(quotient.elements), ideal_module(ring))
    logger.debug(f'Annihilator has {len(result)} Groebner basis elements')
    return result
