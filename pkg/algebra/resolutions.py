"""
Free resolutions and the typed resolutions used by the linking map.

An E-type resolution of M truncates the minimal free resolution at the
codimension and keeps the syzygy module E as its last term; a Q-type
resolution has one non-free term Q in homological position one. Both are
stored as a ``TypedComplex``: a list of ``ChainTerm`` objects (free or
presented) with the matrices of the maps between their generators.

``exchange`` turns an E-type resolution of M into a Q-type resolution of the
module linked to M, by dualizing, forming the mapping cone against the
self-dual resolution of the linking module and cancelling unit entries.
"""

import enum
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property

from algebra.exceptions import AlgebraError, ConsistencyError, LiftError, ZeroModuleError
from algebra.fmodule import (
    PresentedModule,
    Verdict,
    homogeneous_maps,
    is_isomorphic,
    minimalize,
    transpose_columns,
    twist,
)
from algebra.gbasis import AugmentedBasis, FreeModule, combine, is_zero, kernel_generators
from algebra.hilbert import local_cohomology_hf

logger = logging.getLogger(__name__)


def _is_unit(f):
    return bool(f) and not any(f.LM)


def _drop(vector, index):
    return vector[:index] + vector[index + 1:]


def pullback(columns, covector):
    """Apply the transpose of the matrix with ``columns`` to ``covector``"""
    result = []
    for column in columns:
        total = None
        for entry, value in zip(column, covector):
            if entry and value:
                total = entry * value if total is None else total + entry * value
        result.append(total)
    return result


@dataclass(frozen=True, eq=False)
class FreeResolution:
    """
    ``F_0 <- F_1 <- ... <- F_L``; ``twists[k]`` are the generator degrees of
    ``F_k`` and ``differentials[k - 1]`` holds the columns of ``d_k``.
    """

    ring: object
    twists: tuple
    differentials: tuple = ()
    minimal: bool = True

    @property
    def length(self):
        return len(self.differentials)

    def differential(self, k):
        return self.differentials[k - 1]

    def free_module(self, k):
        return FreeModule(self.ring, self.twists[k])

    @property
    def ranks(self):
        return [len(t) for t in self.twists]

    @cached_property
    def betti_table(self):
        table = {}
        for i, twists in enumerate(self.twists):
            row = {}
            for degree in twists:
                row[degree] = row.get(degree, 0) + 1
            if row:
                table[i] = dict(sorted(row.items()))
        return table

    def verify_complex(self):
        """d_k composed with d_(k+1) vanishes for every k"""
        for k in range(1, self.length):
            zero = self.free_module(k - 1).zero()
            inner = self.differential(k)
            for column in self.differential(k + 1):
                if not is_zero(combine(column, inner, zero)):
                    return False
        return True

    def has_unit_entries(self):
        return any(_is_unit(entry) for columns in self.differentials for c in columns for entry in c)

    def direct_sum(self, other):
        if self.ring != other.ring:
            raise AlgebraError('Direct sum of resolutions over different rings')
        length = max(len(self.twists), len(other.twists))
        first = list(self.twists) + [()] * (length - len(self.twists))
        second = list(other.twists) + [()] * (length - len(other.twists))
        zero = self.ring.zero
        differentials = []
        for k in range(1, length):
            left = self.differentials[k - 1] if k <= self.length else ()
            right = other.differentials[k - 1] if k <= other.length else ()
            pad_right = (zero,) * len(second[k - 1])
            pad_left = (zero,) * len(first[k - 1])
            columns = [tuple(c) + pad_right for c in left] + [pad_left + tuple(c) for c in right]
            differentials.append(tuple(columns))
        twists = tuple(tuple(a) + tuple(b) for a, b in zip(first, second))
        while len(twists) > 1 and not twists[-1]:
            twists = twists[:-1]
            differentials = differentials[:-1]
        return FreeResolution(self.ring, twists, tuple(differentials), self.minimal and other.minimal)

    def dual_twists(self, k, shift=0):
        return tuple(-a - shift for a in self.twists[k])


def compute_minimal_resolution(module):
    ring = module.ring
    minimal = minimalize(module)
    twists = [minimal.row_twists]
    differentials = []
    columns = list(minimal.relations)
    degrees = list(minimal.column_degrees)
    while columns:
        if len(differentials) > ring.nvars:
            raise ConsistencyError('Free resolution longer than the number of variables')
        twists.append(tuple(degrees))
        differentials.append(tuple(columns))
        source = FreeModule(ring, tuple(degrees))
        target = FreeModule(ring, twists[-2])
        columns = kernel_generators(columns, source, target)
        degrees = [source.degree(c) for c in columns]
    resolution = FreeResolution(ring, tuple(twists), tuple(differentials))
    logger.debug(f'Minimal free resolution with Betti table {resolution.betti_table}')
    return resolution


def minimal_free_resolution(module):
    return module.resolution


@dataclass(frozen=True, eq=False)
class ChainTerm:
    """A term of a typed complex: free, or presented by ``relations`` on its generators"""

    ring: object
    twists: tuple
    relations: tuple = ()
    relation_degrees: tuple = ()

    @property
    def rank(self):
        return len(self.twists)

    @property
    def is_free(self):
        return not self.relations

    @cached_property
    def free_module(self):
        return FreeModule(self.ring, self.twists)

    @cached_property
    def free_generators(self):
        return {i for i in range(self.rank) if not any(r[i] for r in self.relations)}

    def module(self):
        return PresentedModule(self.ring, self.twists, self.relations, self.relation_degrees)

    def without(self, index):
        return ChainTerm(
            self.ring,
            _drop(self.twists, index),
            tuple(_drop(r, index) for r in self.relations),
            self.relation_degrees,
        )

    def shifted(self, amount):
        return ChainTerm(
            self.ring,
            tuple(a - amount for a in self.twists),
            self.relations,
            tuple(b - amount for b in self.relation_degrees),
        )


@dataclass(eq=False)
class TypedComplex:
    """``terms[0] <- terms[1] <- ...`` with ``maps[p - 1]`` the columns of ``terms[p] -> terms[p - 1]``"""

    ring: object
    terms: list
    maps: list = field(default_factory=list)

    def _apply(self, p, vector):
        """Image under ``terms[p] -> terms[p - 1]``"""
        return combine(vector, self.maps[p - 1], self.terms[p - 1].free_module.zero())

    def _relation_basis(self, p):
        term = self.terms[p]
        return AugmentedBasis(list(term.relations), term.free_module, list(term.relation_degrees))

    def verify(self):
        """Maps descend to the presented terms and consecutive maps compose to zero"""
        for p in range(1, len(self.terms)):
            basis = self._relation_basis(p - 1).image_basis()
            for relation in self.terms[p].relations:
                if not basis.contains(self._apply(p, relation)):
                    return False
            if p + 1 < len(self.terms):
                for column in self.maps[p]:
                    if not basis.contains(self._apply(p, column)):
                        return False
        return True

    def cancel_units(self):
        """Gaussian elimination of unit entries between free generators"""
        eliminated = 0
        while True:
            found = self._find_unit()
            if found is None:
                break
            self._eliminate(*found)
            eliminated += 1
        while len(self.terms) > 1 and self.terms[-1].rank == 0:
            self.terms.pop()
            self.maps.pop()
        if eliminated:
            logger.debug(f'Cancelled {eliminated} unit pairs')
        return eliminated

    def _find_unit(self):
        for p in range(len(self.terms) - 1, 0, -1):
            source_free = self.terms[p].free_generators
            target_free = self.terms[p - 1].free_generators
            for u, column in enumerate(self.maps[p - 1]):
                if u not in source_free:
                    continue
                for v in sorted(target_free):
                    if _is_unit(column[v]):
                        return p, u, v
        return None

    def _eliminate(self, p, u, v):
        ring = self.ring
        columns = self.maps[p - 1]
        pivot = columns[u]
        inverse = ring.inverse(pivot[v].LC)
        reduced = []
        for index, column in enumerate(columns):
            if index == u:
                continue
            entry = column[v]
            if entry:
                factor = entry.mul_ground(inverse)
                column = tuple(a - factor * b for a, b in zip(column, pivot))
            reduced.append(_drop(column, v))
        self.maps[p - 1] = reduced
        if p < len(self.maps):
            self.maps[p] = [_drop(column, u) for column in self.maps[p]]
        if p >= 2:
            self.maps[p - 2] = [c for index, c in enumerate(self.maps[p - 2]) if index != v]
        self.terms[p] = self.terms[p].without(u)
        self.terms[p - 1] = self.terms[p - 1].without(v)

    def presented_module(self):
        """coker(terms[1] -> terms[0])"""
        head = self.terms[0]
        columns = tuple(self.maps[0]) if self.maps else ()
        degrees = tuple(self.terms[1].twists) if self.maps else ()
        return PresentedModule(
            self.ring,
            head.twists,
            head.relations + columns,
            head.relation_degrees + degrees,
        )

    def euler_series(self):
        total = None
        for p, term in enumerate(self.terms):
            series = term.module().hilbert.series
            if total is None:
                total = series
            elif p % 2:
                total = total - series
            else:
                total = total + series
        return total

    def betti_shape(self):
        return [sorted(term.twists) for term in self.terms]


@dataclass(frozen=True, eq=False)
class ETypeRes:
    """0 -> E -> F_(c-1) -> ... -> F_0 -> M -> 0"""

    module: PresentedModule
    codim: int
    complex: TypedComplex

    @property
    def tail(self):
        return self.complex.terms[self.codim].module()

    @property
    def free_part(self):
        return [term.twists for term in self.complex.terms[:self.codim]]

    def generator_columns(self, phi):
        """Images of the source generators in F_0 coordinates"""
        return list(phi.with_minimal_target().images)


@dataclass(frozen=True, eq=False)
class QTypeRes:
    """0 -> G_c -> ... -> G_2 -> Q -> G_0 -> M -> 0"""

    module: PresentedModule
    codim: int
    complex: TypedComplex

    @property
    def middle(self):
        if len(self.complex.terms) < 2:
            return PresentedModule.zero(self.module.ring)
        return self.complex.terms[1].module()

    @property
    def frees(self):
        terms = self.complex.terms
        return [terms[0].twists] + [term.twists for term in terms[2:]]

    def generator_columns(self, phi):
        return list(phi.images)


def _e_type_complex(module, codim):
    ring = module.ring
    resolution = module.resolution
    terms = [ChainTerm(ring, resolution.twists[k]) for k in range(codim)]
    if codim < resolution.length:
        tail = ChainTerm(
            ring,
            resolution.twists[codim],
            resolution.differential(codim + 1),
            resolution.twists[codim + 1],
        )
    else:
        tail = ChainTerm(ring, resolution.twists[codim] if codim < len(resolution.twists) else ())
    terms.append(tail)
    maps = [list(resolution.differential(k + 1)) for k in range(codim)]
    return TypedComplex(ring, terms, maps)


def e_type(module):
    """Truncation of the minimal free resolution at the codimension"""
    if module.is_zero:
        raise ZeroModuleError('E-type resolution of the zero module')
    codim = module.codim
    if codim == 0:
        raise AlgebraError('E-type resolutions need positive codimension')
    return ETypeRes(module, codim, _e_type_complex(module, codim))


def lift_chain_map(resolution, typed, columns, length):
    """
    Lift a map from coker d_1 of ``resolution`` to the complex ``typed``,
    given by ``columns`` (images of the generators of F_0). Returns the
    column lists of phi_0, ..., phi_length.
    """
    chain = [list(columns)]
    for k in range(1, length + 1):
        if k > resolution.length or k >= len(typed.terms):
            chain.append([])
            continue
        below = typed.terms[k - 1]
        above = typed.terms[k]
        basis = AugmentedBasis(
            list(typed.maps[k - 1]) + list(below.relations),
            below.free_module,
            list(above.twists) + list(below.relation_degrees),
        )
        lifted = []
        for column in resolution.differential(k):
            target = combine(column, chain[k - 1], below.free_module.zero())
            coefficients = basis.lift(target)
            if coefficients is None:
                raise LiftError(f'Chain map does not lift in homological degree {k}')
            lifted.append(tuple(coefficients[:above.rank]))
        chain.append(lifted)
    logger.debug(f'Lifted chain map through {length} steps')
    return chain


@dataclass
class _DualTerm:
    ambient: FreeModule
    generators: list
    relations: list
    relation_degrees: list

    @cached_property
    def _basis(self):
        return AugmentedBasis(self.generators, self.ambient, self.twists)

    @property
    def twists(self):
        return [self.ambient.degree(g) for g in self.generators]

    @property
    def is_free(self):
        return not self.relations

    def coordinates(self, covector):
        if self.generators == self.ambient.basis():
            return tuple(covector)
        coefficients = self._basis.lift(covector)
        if coefficients is None:
            raise LiftError('Dual map leaves the dual module')
        return coefficients


def _dual_term(term):
    ring = term.ring
    ambient = FreeModule(ring, tuple(-a for a in term.twists))
    if term.is_free:
        return _DualTerm(ambient, ambient.basis(), [], [])
    target = FreeModule(ring, tuple(-b for b in term.relation_degrees))
    transposed = transpose_columns(term.relations, term.rank)
    generators = kernel_generators(transposed, ambient, target)
    if not generators:
        return _DualTerm(ambient, [], [], [])
    augmented = AugmentedBasis(generators, ambient)
    relations = augmented.syzygies()
    generator_module = augmented.tag_module
    return _DualTerm(ambient, generators, relations, [generator_module.degree(r) for r in relations])


def _zero_vector(ring, size):
    return (ring.zero,) * size


def _covector_value(entries, ring):
    return tuple(ring.zero if e is None else e for e in entries)


def mapping_cone(typed, resolution, chain, codim, shift):
    """
    Homological complex ``G_0 <- G_1 <- ... <- G_(c+1)`` computing the link.

    With A the dual of ``typed`` and B the dual of ``resolution``, the
    cochain complex ``Cone^k = A^(k+1) + B^k`` has differential
    ``(a, b) -> (-d_A a, psi a + d_B b)``; ``G_p = Cone^(c-p)(shift)``.
    """
    ring = typed.ring
    c = codim
    duals = [_dual_term(typed.terms[k]) if k < len(typed.terms) else None for k in range(c + 1)]

    def a_rank(k):
        if k > c or duals[k] is None:
            return 0
        return len(duals[k].generators)

    def b_twists(k):
        if 0 <= k <= resolution.length and k < len(resolution.twists):
            return resolution.dual_twists(k)
        return ()

    def a_map(k, g):
        """d_A of generator g of A^k, in A^(k+1) coordinates"""
        if k + 1 > c or duals[k + 1] is None:
            return ()
        covector = _covector_value(pullback(typed.maps[k], duals[k].generators[g]), ring)
        return duals[k + 1].coordinates(covector)

    def psi(k, g):
        """phi_k transposed, applied to generator g of A^k"""
        size = len(b_twists(k))
        if not size or not chain[k]:
            return _zero_vector(ring, size)
        return _covector_value(pullback(chain[k], duals[k].generators[g]), ring)

    def b_map(k, b):
        size = len(b_twists(k + 1))
        if not size:
            return ()
        unit = tuple(ring.one if i == b else ring.zero for i in range(len(b_twists(k))))
        return _covector_value(pullback(resolution.differential(k + 1), unit), ring)

    cone_terms = {}
    for k in range(-1, c + 1):
        a_part = duals[k + 1] if k + 1 <= c else None
        a_twists = tuple(a_part.twists) if a_part is not None else ()
        twists = a_twists + b_twists(k)
        padding = _zero_vector(ring, len(b_twists(k)))
        relations = tuple(tuple(r) + padding for r in (a_part.relations if a_part else []))
        degrees = tuple(a_part.relation_degrees if a_part else [])
        cone_terms[k] = ChainTerm(ring, twists, relations, degrees).shifted(shift)

    cone_maps = {}
    for k in range(-1, c):
        columns = []
        a_next = a_rank(k + 2)
        b_next = len(b_twists(k + 1))
        for g in range(a_rank(k + 1)):
            head = tuple(-x for x in a_map(k + 1, g)) if a_next else ()
            tail = psi(k + 1, g) if b_next else ()
            columns.append(tuple(head) + tuple(tail))
        for b in range(len(b_twists(k))):
            columns.append(_zero_vector(ring, a_next) + tuple(b_map(k, b)))
        cone_maps[k] = columns

    terms = [cone_terms[c - p] for p in range(c + 2)]
    maps = [cone_maps[c - p] for p in range(1, c + 2)]
    return TypedComplex(ring, terms, maps)


def _linking_data(cert, phi):
    """Chain-map images of the linking module's minimal generators"""
    return phi.with_minimal_source()


def linking_cone(module, cert, phi):
    """
    Uncancelled cone of the dualized lift of ``phi: C -> M``; its first
    map presents the linked module on the generators of ``D_c^*(s)``.
    Works in codimension zero, where the E-type tail is M itself.
    """
    c = cert.codim
    typed = _e_type_complex(module, c)
    columns = list(_linking_data(cert, phi).with_minimal_target().images)
    chain = lift_chain_map(cert.resolution, typed, columns, c)
    return mapping_cone(typed, cert.resolution, chain, c, cert.s)


def exchange(estep, cert, phi):
    """
    Q-type resolution of the module linked to ``estep.module`` by ``cert``
    through ``phi``.
    """
    try:
        return _exchange_e_to_q(estep, cert, phi)
    except LiftError:
        logger.warning('Lift failed on the given E-type resolution, retrying on a fresh one')
        fresh = ETypeRes(estep.module, estep.codim, _e_type_complex(estep.module, estep.codim))
        return _exchange_e_to_q(fresh, cert, phi)


def _exchange_e_to_q(estep, cert, phi):
    c = estep.codim
    resolution = cert.resolution
    columns = estep.generator_columns(_linking_data(cert, phi))
    chain = lift_chain_map(resolution, estep.complex, columns, c)
    cone = mapping_cone(estep.complex, resolution, chain, c, cert.s)
    cone.cancel_units()
    linked = cone.presented_module()
    logger.info(f'Exchanged E-type into Q-type with shape {cone.betti_shape()}')
    return QTypeRes(linked, c, cone)


def exchange_q_to_e(qstep, cert, phi):
    """E-type resolution of the module linked to ``qstep.module``"""
    c = qstep.codim
    resolution = cert.resolution
    columns = qstep.generator_columns(_linking_data(cert, phi))
    chain = lift_chain_map(resolution, qstep.complex, columns, c)
    cone = mapping_cone(qstep.complex, resolution, chain, c, cert.s)
    cone.cancel_units()
    linked = cone.presented_module()
    terms = list(cone.terms[:c + 1])
    maps = list(cone.maps[:c])
    while len(terms) < c + 1:
        terms.append(ChainTerm(cone.ring, ()))
        maps.append([])
    if len(cone.terms) > c + 1:
        tail = terms[c]
        extra = tuple(cone.maps[c])
        terms[c] = ChainTerm(
            cone.ring,
            tail.twists,
            tail.relations + extra,
            tail.relation_degrees + tuple(cone.terms[c + 1].twists),
        )
    logger.info(f'Exchanged Q-type into E-type with shape {cone.betti_shape()}')
    return ETypeRes(linked, c, TypedComplex(cone.ring, terms, maps))


def q_type(module, rng=None):
    """
    Q-type resolution of an unmixed module of positive codimension.

    In codimension one this is the E-type resolution; otherwise M is linked
    to some N and the E-type resolution of N is exchanged back.
    """
    if module.is_zero:
        raise ZeroModuleError('Q-type resolution of the zero module')
    codim = module.codim
    if codim == 0:
        raise AlgebraError('Q-type resolutions need positive codimension')
    if codim == 1:
        estep = e_type(module)
        return QTypeRes(module, 1, estep.complex)
    # Import here to avoid circular imports
    from linkage.liaison import build_linking_module, link

    rng = rng or random.Random(0)
    cert, phi = build_linking_module(module, rng)
    step = link(module, cert, phi)
    return exchange(e_type(step.result), cert, step.result_map)


def verify_q_type(qstep, window):
    """Cohomology signature and exactness checks of a Q-type resolution"""
    module = qstep.module
    ring = module.ring
    n = ring.n
    c = qstep.codim
    middle = qstep.middle
    lo, hi = window
    report = {
        'complex': qstep.complex.verify(),
        'euler_characteristic': qstep.complex.euler_series() == module.hilbert.series,
    }
    band = True
    for i in range(n + 2 - c, n + 1):
        for j in range(lo, hi + 1):
            if local_cohomology_hf(middle, i, j) != 0:
                band = False
    report['vanishing_band'] = band
    matches = True
    for i in range(1, n + 2 - c):
        for j in range(lo, hi + 1):
            if local_cohomology_hf(middle, i, j) != local_cohomology_hf(module, i - 1, j):
                matches = False
    report['shifted_cohomology'] = matches
    return report


class StableVerdict(enum.Enum):
    CERTIFIED_EQUIVALENT = 'CERTIFIED_EQUIVALENT'
    CERTIFIED_DISTINCT = 'CERTIFIED_DISTINCT'
    UNKNOWN = 'UNKNOWN'


@dataclass(frozen=True, eq=False)
class StableClassRep:
    """A module without free summands, twisted so that its generators start in degree 0"""

    module: PresentedModule
    normalization_twist: int
    free_twists: tuple

    @property
    def is_trivial(self):
        return self.module.is_zero


def _split_free_summand(module):
    """Remove one free summand R(-a) if a degree-0 split surjection onto it exists"""
    ring = module.ring
    for i, degree in enumerate(module.row_twists):
        if all(not relation[i] for relation in module.relations):
            found = True
        else:
            found = False
            target = PresentedModule.free(ring, (degree,))
            for candidate in homogeneous_maps(module, target, 0):
                if _is_unit(candidate.images[i][0]):
                    found = True
                    break
        if found:
            remaining = PresentedModule(
                ring,
                _drop(module.row_twists, i),
                tuple(_drop(r, i) for r in module.relations),
                module.column_degrees,
            )
            return minimalize(remaining), degree
    return None


def has_free_summand(module):
    if module.is_zero:
        return False
    return _split_free_summand(minimalize(module)) is not None


def strip_free_summands(module):
    current = minimalize(module)
    removed = []
    while current.rank:
        split = _split_free_summand(current)
        if split is None:
            break
        current, degree = split
        removed.append(degree)
    if current.is_zero:
        return StableClassRep(PresentedModule.zero(module.ring), 0, tuple(sorted(removed)))
    normalization = min(current.row_twists)
    return StableClassRep(twist(current, normalization), normalization, tuple(sorted(removed)))


@dataclass(frozen=True)
class StableEquivalence:
    verdict: StableVerdict
    shift: object = None
    reason: str = ''


def stable_equiv(first, second, rng=None):
    """Decide whether first + F = second(s) + G for free F, G and some shift s"""
    rng = rng or random.Random(0)
    left = strip_free_summands(first)
    right = strip_free_summands(second)
    if left.is_trivial and right.is_trivial:
        return StableEquivalence(StableVerdict.CERTIFIED_EQUIVALENT, 0, 'both stably free')
    if left.is_trivial or right.is_trivial:
        return StableEquivalence(StableVerdict.CERTIFIED_DISTINCT, reason='exactly one is stably free')
    shift = right.normalization_twist - left.normalization_twist
    result = is_isomorphic(left.module, right.module, rng)
    if result.verdict is Verdict.YES:
        return StableEquivalence(StableVerdict.CERTIFIED_EQUIVALENT, shift, 'isomorphic cores')
    if result.verdict is Verdict.NO:
        return StableEquivalence(StableVerdict.CERTIFIED_DISTINCT, reason=result.reason)
    logger.warning(f'Stable equivalence undecided: {result.reason}')
    return StableEquivalence(StableVerdict.UNKNOWN, reason=result.reason)


def phi_psi(module, rng=None):
    """Stable classes of the E-type tail and the Q-type middle"""
    rng = rng or random.Random(0)
    tail = strip_free_summands(e_type(module).tail)
    middle = strip_free_summands(q_type(module, rng).middle)
    logger.info(f'Stable classes: E core rank {tail.module.rank}, Q core rank {middle.module.rank}')
    return tail, middle

