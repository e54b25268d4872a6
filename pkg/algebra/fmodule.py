"""
Finitely presented graded modules.

A ``PresentedModule`` is ``coker(A: F1 -> F0)`` where ``F0`` has generator
degrees ``row_twists`` and the columns of ``A`` (the relations) have degrees
``column_degrees``. Expensive derived data (Groebner basis of the relations,
minimal presentation, Hilbert data, minimal resolution, Ext modules) is
computed on first use and cached on the instance.
"""

import enum
import logging
import random
from dataclasses import dataclass
from functools import cached_property

from sympy.polys.matrices import DomainMatrix

from algebra.conf import lab_setting
from algebra.exceptions import (
    FreeModuleError,
    HomogeneityError,
    RingMismatchError,
    ZeroModuleError,
)
from algebra.gbasis import (
    AugmentedBasis,
    FreeModule,
    combine,
    groebner,
    is_zero,
    kernel_generators,
    minimal_generators,
)
from algebra.poly import degree as poly_degree, is_homogeneous

logger = logging.getLogger(__name__)


class Verdict(enum.Enum):
    YES = 'YES'
    NO = 'NO'
    UNKNOWN = 'UNKNOWN'


def transpose_columns(columns, nrows):
    """Columns of the transposed matrix: one vector per original row"""
    return [tuple(column[i] for column in columns) for i in range(nrows)]


@dataclass(frozen=True, eq=False)
class PresentedModule:
    ring: object
    row_twists: tuple
    relations: tuple = ()
    column_degrees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'row_twists', tuple(self.row_twists))
        object.__setattr__(self, 'relations', tuple(tuple(c) for c in self.relations))
        object.__setattr__(self, 'column_degrees', tuple(self.column_degrees))
        if len(self.column_degrees) != len(self.relations):
            raise HomogeneityError(
                f'{len(self.relations)} relations but {len(self.column_degrees)} column degrees'
            )
        for j, column in enumerate(self.relations):
            if len(column) != self.rank:
                raise RingMismatchError(f'Relation {j} has {len(column)} entries, expected {self.rank}')
            self.ring.check(*column)
            for i, entry in enumerate(column):
                if not entry:
                    continue
                expected = self.column_degrees[j] - self.row_twists[i]
                if not is_homogeneous(entry) or poly_degree(entry) != expected:
                    raise HomogeneityError(
                        f'Entry is not homogeneous of degree {expected}', entry=(i, j)
                    )

    @classmethod
    def from_rows(cls, ring, rows, row_twists, column_degrees=None):
        """Build a presentation from a row-major matrix"""
        rows = [list(row) for row in rows]
        row_twists = tuple(row_twists)
        if len(rows) != len(row_twists):
            raise HomogeneityError(f'{len(rows)} rows but {len(row_twists)} row twists')
        ncols = len(rows[0]) if rows else 0
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise HomogeneityError(f'Row {i} has {len(row)} entries, expected {ncols}')
        columns = [tuple(rows[i][j] for i in range(len(rows))) for j in range(ncols)]
        if column_degrees is None:
            column_degrees = []
            for j, column in enumerate(columns):
                column_degrees.append(_infer_column_degree(column, row_twists, j))
        return cls(ring, row_twists, tuple(columns), tuple(column_degrees))

    @classmethod
    def free(cls, ring, twists):
        return cls(ring, tuple(twists))

    @classmethod
    def zero(cls, ring):
        return cls(ring, ())

    @classmethod
    def quotient_ring(cls, ring, polys, twist=0):
        """The cyclic module (R/I)(-twist)"""
        polys = [f for f in polys if f]
        degrees = [poly_degree(f) + twist for f in polys]
        return cls(ring, (twist,), tuple((f,) for f in polys), tuple(degrees))

    def __repr__(self):
        return f'<PresentedModule {self.rank} generators, {len(self.relations)} relations over {self.ring!r}>'

    @property
    def rank(self):
        return len(self.row_twists)

    @cached_property
    def target(self):
        return FreeModule(self.ring, self.row_twists)

    @cached_property
    def relation_module(self):
        return FreeModule(self.ring, self.column_degrees)

    def rows(self):
        return [[column[i] for column in self.relations] for i in range(self.rank)]

    @cached_property
    def image_basis(self):
        return groebner([c for c in self.relations if not is_zero(c)], self.target)

    @cached_property
    def is_zero(self):
        return self.rank == 0 or self.image_basis.is_everything()

    @property
    def is_free(self):
        return self.minimal.module.relations == ()

    @cached_property
    def minimal(self):
        return _minimalize(self)

    @cached_property
    def is_minimal(self):
        nonzero = [c for c in self.relations if not is_zero(c)]
        minimal = self.minimal.module
        return minimal.rank == self.rank and len(minimal.relations) == len(nonzero)

    @cached_property
    def hilbert(self):
        # Import here to avoid circular imports
        from algebra.hilbert import compute_hilbert_data

        return compute_hilbert_data(self)

    @cached_property
    def resolution(self):
        # Import here to avoid circular imports
        from algebra.resolutions import compute_minimal_resolution

        return compute_minimal_resolution(self)

    @cached_property
    def ext_cache(self):
        return {}

    @property
    def dimension(self):
        return self.hilbert.dimension

    @property
    def codim(self):
        return self.ring.nvars - self.dimension

    def contains(self, vector):
        """True when ``vector`` of F0 is zero in the module"""
        return self.image_basis.contains(vector)


def _infer_column_degree(column, row_twists, j):
    for i, entry in enumerate(column):
        if entry:
            if not is_homogeneous(entry):
                raise HomogeneityError('Entry is not homogeneous', entry=(i, j))
            return poly_degree(entry) + row_twists[i]
    return min(row_twists) if row_twists else 0


@dataclass(frozen=True, eq=False)
class Minimalization:
    """
    A minimal presentation together with the images of the original
    generators. Surviving generators keep their identity: generator ``k`` of
    ``module`` is original generator ``kept[k]``.
    """

    source: PresentedModule
    module: PresentedModule
    generator_images: tuple
    kept: tuple

    def projection(self):
        return ModuleMap(self.source, self.module, self.generator_images)

    def inclusion(self):
        images = [self.source.target.basis_vector(i) for i in self.kept]
        return ModuleMap(self.module, self.source, images)


def _is_unit(f):
    return bool(f) and not any(f.LM)


def _minimalize(module):
    ring = module.ring
    rank = module.rank
    alive = list(range(rank))
    columns = [list(c) for c in module.relations]
    degrees = list(module.column_degrees)
    images = [{i: ring.one} for i in range(rank)]

    while True:
        pivot_at = None
        for j, column in enumerate(columns):
            for i in alive:
                if _is_unit(column[i]):
                    pivot_at = (i, j)
                    break
            if pivot_at is not None:
                break
        if pivot_at is None:
            break
        i, j = pivot_at
        pivot = columns.pop(j)
        degrees.pop(j)
        inverse = ring.inverse(pivot[i].LC)
        for column in columns:
            entry = column[i]
            if entry:
                factor = entry.mul_ground(inverse)
                for k in alive:
                    if pivot[k]:
                        column[k] = column[k] - factor * pivot[k]
        alive.remove(i)
        for image in images:
            coefficient = image.pop(i, None)
            if coefficient is None:
                continue
            factor = coefficient.mul_ground(-inverse)
            for k in alive:
                if pivot[k]:
                    image[k] = image.get(k, ring.zero) + factor * pivot[k]

    row_twists = tuple(module.row_twists[i] for i in alive)
    target = FreeModule(ring, row_twists)
    reduced = []
    reduced_degrees = []
    for column, column_degree in zip(columns, degrees):
        vector = tuple(column[i] for i in alive)
        if not is_zero(vector):
            reduced.append(vector)
            reduced_degrees.append(column_degree)
    keep = sorted(minimal_generators(reduced, target))
    minimal = PresentedModule(
        ring,
        row_twists,
        tuple(reduced[k] for k in keep),
        tuple(reduced_degrees[k] for k in keep),
    )
    generator_images = tuple(
        tuple(image.get(k, ring.zero) for k in alive) for image in images
    )
    logger.debug(
        f'Minimalized presentation {rank}x{len(module.relations)} -> {minimal.rank}x{len(minimal.relations)}'
    )
    return Minimalization(module, minimal, generator_images, tuple(alive))


def minimalize(module):
    """Minimal presentation of the same module"""
    return module.minimal.module


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """Homogeneous map of presented modules, given by the images of the source generators"""

    source: PresentedModule
    target: PresentedModule
    images: tuple
    degree: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'images', tuple(tuple(v) for v in self.images))
        if self.source.ring != self.target.ring:
            raise RingMismatchError('Source and target live over different rings')
        if len(self.images) != self.source.rank:
            raise RingMismatchError(
                f'{len(self.images)} images for {self.source.rank} source generators'
            )
        ambient = self.target.target
        for i, image in enumerate(self.images):
            ambient.check(image)
            image_degree = ambient.degree(image)
            expected = self.source.row_twists[i] + self.degree
            if image_degree is not None and image_degree != expected:
                raise HomogeneityError(
                    f'Image of generator {i} has degree {image_degree}, expected {expected}'
                )

    def apply(self, vector):
        return combine(vector, self.images, self.target.target.zero())

    def is_well_defined(self):
        return all(self.target.contains(self.apply(column)) for column in self.source.relations)

    def is_zero(self):
        return all(self.target.contains(image) for image in self.images)

    def cokernel(self):
        target = self.target
        return PresentedModule(
            target.ring,
            target.row_twists,
            target.relations + self.images,
            target.column_degrees + tuple(t + self.degree for t in self.source.row_twists),
        )

    def is_surjective(self):
        return self.cokernel().is_zero

    def is_injective(self):
        """Compare Hilbert series of source and image"""
        source_series = self.source.hilbert.series.shift(-self.degree)
        image_series = self.target.hilbert.series - self.cokernel().hilbert.series
        return source_series == image_series

    def compose(self, inner):
        """``self`` after ``inner``"""
        return ModuleMap(
            inner.source,
            self.target,
            [self.apply(image) for image in inner.images],
            inner.degree + self.degree,
        )

    def with_minimal_source(self):
        minimal = self.source.minimal
        return ModuleMap(minimal.module, self.target, [self.images[i] for i in minimal.kept], self.degree)

    def with_minimal_target(self):
        projection = self.target.minimal.projection()
        return projection.compose(self)

    def minimal(self):
        return self.with_minimal_source().with_minimal_target()

    def rows(self):
        return transpose_columns(self.images, self.target.rank)


def linear_combination(maps, scalars):
    """Sum of ``scalars[k] * maps[k]`` for maps sharing source and target"""
    first = maps[0]
    images = []
    for i in range(first.source.rank):
        image = first.target.target.zero()
        for scalar, module_map in zip(scalars, maps):
            if scalar:
                image = tuple(a + b.mul_ground(scalar) for a, b in zip(image, module_map.images[i]))
        images.append(image)
    return ModuleMap(first.source, first.target, images, first.degree)


def identity_map(module):
    return ModuleMap(module, module, module.target.basis())


def direct_sum(first, second):
    """Block-diagonal presentation of ``first + second``"""
    if first.ring != second.ring:
        raise RingMismatchError('Direct sum of modules over different rings')
    ring = first.ring
    pad_second = (ring.zero,) * second.rank
    pad_first = (ring.zero,) * first.rank
    relations = tuple(c + pad_second for c in first.relations) + tuple(
        pad_first + c for c in second.relations
    )
    return PresentedModule(
        ring,
        first.row_twists + second.row_twists,
        relations,
        first.column_degrees + second.column_degrees,
    )


def direct_sum_map(first, second):
    """Block-diagonal sum of two module maps of equal degree"""
    source = direct_sum(first.source, second.source)
    target = direct_sum(first.target, second.target)
    ring = source.ring
    pad_second = (ring.zero,) * second.target.rank
    pad_first = (ring.zero,) * first.target.rank
    images = [v + pad_second for v in first.images] + [pad_first + v for v in second.images]
    return ModuleMap(source, target, images, first.degree)


def twist(module, shift):
    """The module M(shift), with [M(shift)]_i = [M]_(i + shift)"""
    return PresentedModule(
        module.ring,
        tuple(a - shift for a in module.row_twists),
        module.relations,
        tuple(b - shift for b in module.column_degrees),
    )


def twist_map(module_map, shift):
    return ModuleMap(
        twist(module_map.source, shift),
        twist(module_map.target, shift),
        module_map.images,
        module_map.degree,
    )


def subquotient(ambient, generators, image):
    """Present (span of generators + span of image) / span of image, using the generators"""
    ring = ambient.ring
    gens = [tuple(g) for g in generators if not is_zero(g)]
    if not gens:
        return PresentedModule.zero(ring)
    image = [tuple(v) for v in image if not is_zero(v)]
    twists = [ambient.degree(g) for g in gens]
    augmented = AugmentedBasis(gens + image, ambient, twists + [ambient.degree(v) for v in image])
    generator_module = FreeModule(ring, twists)
    relations = []
    for relation in augmented.syzygies(minimal=False):
        head = relation[:len(gens)]
        if not is_zero(head):
            relations.append(head)
    relations = [relations[k] for k in sorted(minimal_generators(relations, generator_module))]
    degrees = [generator_module.degree(r) for r in relations]
    return minimalize(PresentedModule(ring, tuple(twists), tuple(relations), tuple(degrees)))


def kernel_module(columns, source, target):
    """The kernel of ``F1 -> F0`` as a presented module"""
    return subquotient(source, kernel_generators(columns, source, target), [])


def _dual_free(ring, twists):
    return FreeModule(ring, tuple(-a for a in twists))


def ext_module(module, index):
    """Ext^index(M, R) as the homology of the dualized minimal resolution"""
    if index < 0:
        raise ValueError(f'Ext index must be non-negative, got {index}')
    cache = module.ext_cache
    if index in cache:
        return cache[index]
    ring = module.ring
    resolution = module.resolution
    if index > resolution.length or not resolution.twists[index]:
        result = PresentedModule.zero(ring)
    else:
        here = _dual_free(ring, resolution.twists[index])
        if index < resolution.length:
            after = _dual_free(ring, resolution.twists[index + 1])
            outgoing = transpose_columns(resolution.differential(index + 1), here.rank)
            cycles = kernel_generators(outgoing, here, after)
        else:
            cycles = here.basis()
        if index > 0:
            boundaries = transpose_columns(
                resolution.differential(index), len(resolution.twists[index - 1])
            )
        else:
            boundaries = []
        result = subquotient(here, cycles, boundaries)
    cache[index] = result
    logger.debug(f'Ext^{index} has {result.rank} generators and {len(result.relations)} relations')
    return result


def dual_module(module):
    """Hom(M, R)"""
    return ext_module(module, 0)


def canonical_module(module):
    """K_M = Ext^(n+1-d)(M, R)(-n-1)"""
    if module.is_zero:
        raise ZeroModuleError('The canonical module of the zero module is undefined')
    nvars = module.ring.nvars
    return twist(ext_module(module, nvars - module.dimension), -nvars)


def auslander_dual(module):
    """coker(M* -> F0*) for the minimal epimorphism F0 -> M"""
    minimal = minimalize(module)
    if not minimal.relations:
        raise FreeModuleError('The Auslander dual needs a non-free module')
    ring = minimal.ring
    source = _dual_free(ring, minimal.row_twists)
    target = _dual_free(ring, minimal.column_degrees)
    transposed = transpose_columns(minimal.relations, minimal.rank)
    cycles = kernel_generators(transposed, source, target)
    return PresentedModule(
        ring,
        source.twists,
        tuple(cycles),
        tuple(source.degree(v) for v in cycles),
    )


def homogeneous_maps(source, target, degree=0):
    """A basis of the graded piece Hom(source, target)_degree"""
    ring = source.ring
    if source.ring != target.ring:
        raise RingMismatchError('Hom between modules over different rings')
    basis = target.image_basis
    ambient = target.target
    unknowns = []
    for i, twist_i in enumerate(source.row_twists):
        for position, monomial in basis.standard_monomials(twist_i + degree):
            vector = [ring.zero] * ambient.rank
            vector[position] = ring.term(monomial)
            unknowns.append((i, tuple(vector)))
    if not unknowns:
        return []

    domain = ring.domain
    constraints = []
    for column, column_degree in zip(source.relations, source.column_degrees):
        if is_zero(column):
            continue
        width = len(basis.standard_monomials(column_degree + degree))
        if width == 0:
            continue
        block = [[domain.zero] * len(unknowns) for _ in range(width)]
        for u, (i, vector) in enumerate(unknowns):
            if not column[i]:
                continue
            product = tuple(column[i] * c for c in vector)
            for r, value in enumerate(basis.coordinates(product, column_degree + degree)):
                block[r][u] = value
        constraints.extend(block)

    if constraints:
        matrix = DomainMatrix(constraints, (len(constraints), len(unknowns)), domain)
        null_rows = matrix.nullspace().to_list()
    else:
        null_rows = [
            [domain.one if k == u else domain.zero for k in range(len(unknowns))]
            for u in range(len(unknowns))
        ]

    maps = []
    for row in null_rows:
        images = [list(ambient.zero()) for _ in range(source.rank)]
        for value, (i, vector) in zip(row, unknowns):
            if not value:
                continue
            for k, component in enumerate(vector):
                if component:
                    images[i][k] = images[i][k] + component.mul_ground(value)
        maps.append(ModuleMap(source, target, [tuple(v) for v in images], degree))
    logger.debug(f'Hom piece of degree {degree} has dimension {len(maps)}')
    return maps


def random_map(maps, rng):
    ring = maps[0].source.ring
    return linear_combination(maps, [ring.random_scalar(rng, nonzero=False) for _ in maps])


@dataclass(frozen=True)
class IsomorphismResult:
    verdict: Verdict
    witness: ModuleMap = None
    reason: str = ''


def is_isomorphic(first, second, rng=None, attempts=None):
    """
    Three-valued isomorphism test for ``first`` and ``second``.

    NO is certified by differing Hilbert series, differing Betti tables or an
    empty degree-0 Hom piece; YES by a surjective degree-0 map between
    modules with equal Hilbert series.
    """
    if rng is None:
        rng = random.Random(0)
    if attempts is None:
        attempts = lab_setting('ISO_ATTEMPTS')
    if first.hilbert.series != second.hilbert.series:
        return IsomorphismResult(Verdict.NO, reason='Hilbert series differ')
    if first.is_zero:
        return IsomorphismResult(Verdict.YES, ModuleMap(first, second, [second.target.zero()] * first.rank))
    if first.resolution.betti_table != second.resolution.betti_table:
        return IsomorphismResult(Verdict.NO, reason='Betti tables differ')
    source = minimalize(first)
    maps = homogeneous_maps(source, second, 0)
    if not maps:
        return IsomorphismResult(Verdict.NO, reason='no degree-0 homomorphism')
    for attempt in range(attempts):
        candidate = random_map(maps, rng)
        if candidate.is_surjective():
            witness = candidate.compose(first.minimal.projection())
            logger.debug(f'Isomorphism found on attempt {attempt + 1}')
            return IsomorphismResult(Verdict.YES, witness)
    logger.warning(f'No isomorphism found in {attempts} random attempts')
    return IsomorphismResult(Verdict.UNKNOWN, reason=f'no surjective map in {attempts} attempts')
