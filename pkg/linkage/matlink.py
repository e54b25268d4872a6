"""
Linkage of square polynomial matrices.

A square matrix A with nonzero determinant is linked to B when ``A * B^t``
is symmetric with nonzero determinant; then coker A and coker B (suitably
twisted) are linked by coker(A * B^t). ``reduce`` repeatedly prepares a
matrix, links it to ``diag(lambda, B')`` and continues on ``B'^t`` until a
1x1 matrix is left.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

from sympy.polys.matrices import DomainMatrix

from algebra.conf import make_rng
from algebra.exceptions import ConsistencyError, HomogeneityError, RingMismatchError
from algebra.fmodule import PresentedModule, Verdict, canonical_module, twist
from algebra.poly import degree as poly_degree, is_homogeneous
from algebra.resolutions import StableVerdict, stable_equiv
from linkage.exceptions import PreparationError, VerificationError
from linkage.liaison import certify_quasi_gorenstein

logger = logging.getLogger(__name__)

MAX_PREPARE_STATES = 4096
TRANSPORT_ATTEMPTS = 16


@dataclass(frozen=True, eq=False)
class PolyMatrix:
    """
    Row-major matrix of homogeneous polynomials. Entry (i, j) is zero or of
    degree ``column_degrees[j] - row_twists[i]``.
    """

    ring: object
    rows: tuple
    row_twists: tuple
    column_degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, 'rows', tuple(tuple(row) for row in self.rows))
        object.__setattr__(self, 'row_twists', tuple(self.row_twists))
        object.__setattr__(self, 'column_degrees', tuple(self.column_degrees))
        if len(self.rows) != len(self.row_twists):
            raise HomogeneityError(f'{len(self.rows)} rows but {len(self.row_twists)} row twists')
        for i, row in enumerate(self.rows):
            if len(row) != len(self.column_degrees):
                raise HomogeneityError(f'Row {i} has {len(row)} entries, expected {len(self.column_degrees)}')
            self.ring.check(*row)
            for j, entry in enumerate(row):
                if not entry:
                    continue
                expected = self.column_degrees[j] - self.row_twists[i]
                if not is_homogeneous(entry) or poly_degree(entry) != expected:
                    raise HomogeneityError(f'Entry is not homogeneous of degree {expected}', entry=(i, j))

    @classmethod
    def from_rows(cls, ring, rows, row_twists, column_degrees=None):
        """Infer column degrees from the first nonzero entry of each column"""
        rows = [tuple(row) for row in rows]
        row_twists = tuple(row_twists)
        if column_degrees is None:
            ncols = len(rows[0]) if rows else 0
            column_degrees = []
            for j in range(ncols):
                inferred = row_twists[0] if row_twists else 0
                for i, row in enumerate(rows):
                    if j < len(row) and row[j]:
                        if not is_homogeneous(row[j]):
                            raise HomogeneityError('Entry is not homogeneous', entry=(i, j))
                        inferred = poly_degree(row[j]) + row_twists[i]
                        break
                column_degrees.append(inferred)
        return cls(ring, rows, row_twists, tuple(column_degrees))

    @classmethod
    def identity(cls, ring, twists):
        size = len(twists)
        rows = [[ring.one if i == j else ring.zero for j in range(size)] for i in range(size)]
        return cls(ring, rows, twists, twists)

    def __repr__(self):
        return f'<PolyMatrix {self.nrows}x{self.ncols} over {self.ring!r}>'

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return len(self.column_degrees)

    @property
    def is_square(self):
        return self.nrows == self.ncols

    def entry(self, i, j):
        return self.rows[i][j]

    def transpose(self):
        rows = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return PolyMatrix(
            self.ring,
            rows,
            tuple(-b for b in self.column_degrees),
            tuple(-a for a in self.row_twists),
        )

    def is_symmetric(self):
        return self.is_square and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def __matmul__(self, other):
        if self.ring != other.ring:
            raise RingMismatchError('Matrix product over different rings')
        if self.ncols != other.nrows:
            raise HomogeneityError(f'Cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}')
        offsets = {c - r for c, r in zip(self.column_degrees, other.row_twists)}
        if len(offsets) > 1:
            raise HomogeneityError('Column degrees and row twists of the factors are not aligned')
        offset = offsets.pop() if offsets else 0
        zero = self.ring.zero
        rows = []
        for row in self.rows:
            product = []
            for j in range(other.ncols):
                total = zero
                for k, entry in enumerate(row):
                    if entry and other.rows[k][j]:
                        total += entry * other.rows[k][j]
                product.append(total)
            rows.append(product)
        return PolyMatrix(
            self.ring,
            rows,
            self.row_twists,
            tuple(b + offset for b in other.column_degrees),
        )

    def _domain_matrix(self):
        domain = self.ring.sympy_ring.to_domain()
        return DomainMatrix([list(row) for row in self.rows], (self.nrows, self.ncols), domain)

    @cached_property
    def det(self):
        if not self.is_square:
            raise HomogeneityError('Determinant of a non-square matrix')
        if self.nrows == 0:
            return self.ring.one
        return self._domain_matrix().det()

    @property
    def det_degree(self):
        return sum(self.column_degrees) - sum(self.row_twists)

    def adjugate(self):
        """adj(A) with adj(A) * A = det(A) * Identity, graded as a map back to the columns"""
        if not self.is_square:
            raise HomogeneityError('Adjugate of a non-square matrix')
        total = self.det_degree
        twists = self.column_degrees
        degrees = tuple(total + a for a in self.row_twists)
        if self.nrows == 1:
            return PolyMatrix(self.ring, [[self.ring.one]], twists, degrees)
        adjugate, _ = self._domain_matrix().adj_det()
        return PolyMatrix(self.ring, adjugate.to_list(), twists, degrees)

    def submatrix(self, rows, columns):
        return PolyMatrix(
            self.ring,
            [[self.rows[i][j] for j in columns] for i in rows],
            tuple(self.row_twists[i] for i in rows),
            tuple(self.column_degrees[j] for j in columns),
        )

    def to_module(self):
        """coker of the matrix as a presented module"""
        return PresentedModule.from_rows(self.ring, self.rows, self.row_twists, self.column_degrees)

    def swap_rows(self, i, k):
        order = list(range(self.nrows))
        order[i], order[k] = k, i
        return PolyMatrix(
            self.ring,
            [self.rows[r] for r in order],
            tuple(self.row_twists[r] for r in order),
            self.column_degrees,
        )

    def swap_columns(self, j, k):
        return self.transpose().swap_rows(j, k).transpose()

    def add_row_multiple(self, target, source, multiplier):
        """row[target] += multiplier * row[source]"""
        rows = [list(row) for row in self.rows]
        rows[target] = [a + multiplier * b for a, b in zip(rows[target], rows[source])]
        return PolyMatrix(self.ring, rows, self.row_twists, self.column_degrees)

    def add_column_multiple(self, target, source, multiplier):
        """column[target] += multiplier * column[source]"""
        rows = [list(row) for row in self.rows]
        for row in rows:
            row[target] = row[target] + multiplier * row[source]
        return PolyMatrix(self.ring, rows, self.row_twists, self.column_degrees)


def _linear_power(ring, exponent):
    return ring.linear_form ** exponent


@dataclass(frozen=True, eq=False)
class Preparation:
    """``matrix = left * original * right`` with invertible ``left`` and ``right``"""

    original: PolyMatrix
    matrix: PolyMatrix
    left: PolyMatrix
    right: PolyMatrix
    operations: tuple = ()

    def apply(self, operation):
        kind = operation[0]
        matrix, left, right = self.matrix, self.left, self.right
        if kind == 'swap_rows':
            _, i, k = operation
            matrix, left = matrix.swap_rows(i, k), left.swap_rows(i, k)
        elif kind == 'swap_columns':
            _, j, k = operation
            matrix, right = matrix.swap_columns(j, k), right.swap_columns(j, k)
        elif kind == 'add_row':
            _, target, source, h = operation
            matrix = matrix.add_row_multiple(target, source, h)
            left = left.add_row_multiple(target, source, h)
        else:
            _, target, source, h = operation
            matrix = matrix.add_column_multiple(target, source, h)
            right = right.add_column_multiple(target, source, h)
        return Preparation(self.original, matrix, left, right, self.operations + (operation,))


def is_prepared(matrix):
    """b, c and det A' are nonzero for ``A = [[a, b], [c, A']]``"""
    n = matrix.nrows
    if n < 2:
        return False
    first_row = matrix.rows[0][1:]
    first_column = [matrix.rows[i][0] for i in range(1, n)]
    if not any(first_row) or not any(first_column):
        return False
    return bool(matrix.submatrix(range(1, n), range(1, n)).det)


def _multiplier(ring, degree, rng):
    h = ring.random_form(degree, rng)
    return h if h else _linear_power(ring, degree)


def _operations(matrix, rng):
    n = matrix.nrows
    ring = matrix.ring
    for i in range(n):
        for k in range(i + 1, n):
            yield ('swap_rows', i, k)
            yield ('swap_columns', i, k)
    for target in range(n):
        for source in range(n):
            if target == source:
                continue
            row_degree = matrix.row_twists[source] - matrix.row_twists[target]
            if row_degree >= 0:
                yield ('add_row', target, source, _multiplier(ring, row_degree, rng))
            column_degree = matrix.column_degrees[target] - matrix.column_degrees[source]
            if column_degree >= 0:
                yield ('add_column', target, source, _multiplier(ring, column_degree, rng))


def prepare(matrix, rng=None):
    """
    Degree-compatible row and column operations making b, c and det A'
    nonzero, found by a bounded breadth-first search of depth at most 2n.
    """
    n = matrix.nrows
    if not matrix.is_square or n < 2:
        raise PreparationError(f'Preparation needs a square matrix of size at least 2, got {matrix.nrows}x{matrix.ncols}')
    if not matrix.det:
        raise PreparationError('The determinant vanishes')
    rng = rng or make_rng(0)
    start = Preparation(
        matrix,
        matrix,
        PolyMatrix.identity(matrix.ring, matrix.row_twists),
        PolyMatrix.identity(matrix.ring, matrix.column_degrees),
    )
    if is_prepared(matrix):
        return start

    frontier = [start]
    visited = 0
    for depth in range(1, 2 * n + 1):
        following = []
        for state in frontier:
            for operation in _operations(state.matrix, rng):
                child = state.apply(operation)
                if is_prepared(child.matrix):
                    logger.debug(f'Prepared after {depth} operations, {visited} states visited')
                    return child
                following.append(child)
                visited += 1
                if visited >= MAX_PREPARE_STATES:
                    raise PreparationError(f'No preparation found within {MAX_PREPARE_STATES} states')
        frontier = following
    raise PreparationError(f'No preparation found within depth {2 * n}')


def _embed(matrix, index, diagonal, zero):
    """Insert a row and column at ``index`` with ``diagonal`` on the diagonal"""
    size = len(matrix) + 1
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            if i == index or j == index:
                row.append(diagonal if i == j else zero)
            else:
                row.append(matrix[i - (i > index)][j - (j > index)])
        rows.append(row)
    return rows


def _scale(rows, factor):
    return [[entry * factor for entry in row] for row in rows]


def _det_rows(ring, rows):
    domain = ring.sympy_ring.to_domain()
    return DomainMatrix([list(r) for r in rows], (len(rows), len(rows)), domain).det()


def _adjugate_rows(ring, rows):
    if len(rows) == 1:
        return [[ring.one]], rows[0][0]
    domain = ring.sympy_ring.to_domain()
    adjugate, det = DomainMatrix([list(r) for r in rows], (len(rows), len(rows)), domain).adj_det()
    return adjugate.to_list(), det


class _Transport:
    """Recursive construction of symmetric S with ``S v = lambda w``; weights u_i = deg v_i"""

    def __init__(self, ring, rng, shift):
        self.ring = ring
        self.rng = rng
        self.shift = shift
        self.through_adjugate = False

    def power(self, exponent):
        return _linear_power(self.ring, exponent)

    def __call__(self, v, w, u):
        """Returns (rows, lambda, sigma) with deg S_ij = sigma - u_i - u_j"""
        n = len(v)
        d = self.shift
        zero = self.ring.zero
        if n == 1:
            if v[0] == w[0]:
                return [[self.ring.one]], self.ring.one, 2 * u[0]
            return [[w[0]]], v[0], u[0] + d

        for i in range(n):
            if not v[i] and not w[i]:
                rows, lam, sigma = self(_drop(v, i), _drop(w, i), _drop(u, i))
                exponent = sigma - 2 * u[i]
                if exponent < 0:
                    rows, lam = _scale(rows, self.power(-exponent)), lam * self.power(-exponent)
                    sigma, exponent = sigma - exponent, 0
                return _embed(rows, i, self.power(exponent), zero), lam, sigma

        both = [i for i in range(n) if v[i] and w[i]]
        for i in both:
            rest_v, rest_w = _drop(v, i), _drop(w, i)
            if any(rest_v) and any(rest_w):
                rows, lam, sigma = self(rest_v, rest_w, _drop(u, i))
                rows = _embed(_scale(rows, v[i]), i, lam * w[i], zero)
                return rows, lam * v[i], sigma + u[i]

        if not both:
            return self.split(v, w, u)
        pivot = both[0]
        if not any(_drop(w, pivot)):
            return self.arrow_on_v(v, w, u, pivot)
        return self.arrow_on_w(v, w, u, pivot)

    def split(self, v, w, u):
        """v and w have disjoint supports"""
        on_w = [i for i in range(len(v)) if w[i]]
        on_v = [i for i in range(len(v)) if v[i]]
        if len(on_w) >= len(on_v):
            return self.block(v, w, u, on_v, on_w)
        # Transport w to v, then S = mu * adj(T) gives S v = det(T) w.
        d = self.shift
        flipped = [d - x for x in u]
        rows, mu, tau = self.block(w, v, flipped, on_w, on_v)
        adjugate, det = _adjugate_rows(self.ring, rows)
        n = len(v)
        sigma = n * tau - 2 * sum(flipped) + d
        self.through_adjugate = True
        return _scale(adjugate, mu), det, sigma

    def block(self, v, w, u, on_v, on_w):
        """
        ``[[X, B], [B^t, 0]]`` on (on_w, on_v) with B v = lambda w and
        lambda the product of the v entries; X is zero when B is square.
        """
        ring = self.ring
        d = self.shift
        lam = ring.one
        for j in on_v:
            lam *= v[j]
        sigma = sum(u[j] for j in on_v) + d
        square = len(on_w) == len(on_v)
        padding = 0
        if not square:
            padding = max([0] + [2 * u[i] - sigma for i in on_w])
        sigma += padding
        lam *= self.power(padding)

        n = len(v)
        for attempt in range(TRANSPORT_ATTEMPTS):
            rows = [[ring.zero] * n for _ in range(n)]
            for position, i in enumerate(on_w):
                j = on_v[position % len(on_v)]
                others = self.power(padding)
                for k in on_v:
                    if k != j:
                        others *= v[k]
                rows[i][j] = rows[j][i] = w[i] * others
                if not square:
                    rows[i][i] = self.power(sigma - 2 * u[i]).mul_ground(ring.random_scalar(self.rng))
            if _det_rows(ring, rows):
                return rows, lam, sigma
            logger.debug(f'Singular block transport on attempt {attempt + 1}')
        raise ConsistencyError('Block transport stayed singular')

    def arrow_on_v(self, v, w, u, pivot):
        """w vanishes off the pivot; the other rows cancel against the pivot column"""
        ring = self.ring
        d = self.shift
        others = [i for i in range(len(v)) if i != pivot]
        up = u[pivot]
        sigma = max([d + up] + [2 * u[i] + 2 * up for i in others])
        theta = self.power(sigma - d - up)
        rows = [[ring.zero] * len(v) for _ in v]
        corner = w[pivot] * theta
        for i in others:
            z = self.power(sigma - 2 * u[i] - 2 * up)
            rows[i][pivot] = rows[pivot][i] = v[i] * v[pivot] * z
            rows[i][i] = -(v[pivot] ** 2) * z
            corner -= z * v[i] ** 2
        rows[pivot][pivot] = corner
        return rows, v[pivot] * theta, sigma

    def arrow_on_w(self, v, w, u, pivot):
        """v vanishes off the pivot; the pivot column is a multiple of w"""
        ring = self.ring
        d = self.shift
        others = [i for i in range(len(v)) if i != pivot]
        up = u[pivot]
        sigma = max([d + up] + [2 * u[i] for i in others])
        kappa = self.power(sigma - d - up)
        for attempt in range(TRANSPORT_ATTEMPTS):
            rows = [[ring.zero] * len(v) for _ in v]
            for i in range(len(v)):
                rows[i][pivot] = rows[pivot][i] = kappa * w[i]
            for i in others:
                rows[i][i] = self.power(sigma - 2 * u[i]).mul_ground(ring.random_scalar(self.rng))
            if _det_rows(ring, rows):
                return rows, v[pivot] * kappa, sigma
            logger.debug(f'Singular arrow transport on attempt {attempt + 1}')
        raise ConsistencyError('Arrow transport stayed singular')


def _drop(values, index):
    return list(values[:index]) + list(values[index + 1:])


@dataclass(frozen=True, eq=False)
class Transport:
    matrix: PolyMatrix
    scalar: object
    through_adjugate: bool = False


def symmetric_transport(ring, v, w, v_degrees, shift, rng=None):
    """
    Symmetric S with nonzero determinant and ``S v = lambda w``, where
    ``deg v_i + deg w_i = shift`` and ``v_degrees`` are the degrees of v
    (also for zero entries). Powers of the linear form x0 pad the grading.
    """
    v, w = list(v), list(w)
    if len(v) != len(w) or not v:
        raise HomogeneityError(f'Transport needs vectors of equal positive length, got {len(v)} and {len(w)}')
    if not any(v) or not any(w):
        raise HomogeneityError('Transport needs nonzero vectors')
    builder = _Transport(ring, rng or make_rng(0), shift)
    rows, lam, sigma = builder(v, w, list(v_degrees))
    matrix = PolyMatrix(ring, rows, tuple(v_degrees), tuple(sigma - x for x in v_degrees))

    zero = ring.zero
    for i in range(len(v)):
        left = zero
        for j in range(len(v)):
            if rows[i][j] and v[j]:
                left += rows[i][j] * v[j]
        if left != lam * w[i]:
            raise ConsistencyError(f'Transport identity fails in row {i}')
    if not matrix.is_symmetric() or not matrix.det or not lam:
        raise ConsistencyError('Transport produced a singular or non-symmetric matrix')
    return Transport(matrix, lam, builder.through_adjugate)


@dataclass(frozen=True, eq=False)
class SymLinkStep:
    """
    ``product = matrix * linked_transpose`` symmetric with nonzero
    determinant, ``linked_transpose = diag(scalar, B')``.
    """

    preparation: Preparation
    linked_transpose: PolyMatrix
    product: PolyMatrix
    scalar: object
    transport: Transport

    @property
    def matrix(self):
        return self.preparation.matrix

    @property
    def twist(self):
        """s aligning coker B with the row twists of A"""
        return -(self.product.column_degrees[0] + self.product.row_twists[0])

    @cached_property
    def linked(self):
        """B with row twists equal to those of A"""
        transposed = self.linked_transpose.transpose()
        s = self.twist
        return PolyMatrix(
            transposed.ring,
            transposed.rows,
            tuple(a - s for a in transposed.row_twists),
            tuple(b - s for b in transposed.column_degrees),
        )

    @property
    def next_matrix(self):
        """B'^t, the block left after splitting off R/(lambda)"""
        n = self.linked.nrows
        return self.linked.submatrix(range(1, n), range(1, n))

    @property
    def det(self):
        return self.product.det

    def verify(self):
        report = {
            'symmetric': self.product.is_symmetric(),
            'nonzero_determinant': bool(self.product.det),
            'determinant_product': self.product.det == self.matrix.det * self.linked_transpose.det,
        }
        return report


def link_step(matrix, transport_rng=None):
    """
    Link a prepared ``A = [[a, b], [c, A']]`` to ``B = diag(lambda, B'^t)``.
    A 1x1 matrix is already diagonal and gives None.
    """
    preparation = matrix if isinstance(matrix, Preparation) else None
    if preparation is None:
        preparation = Preparation(
            matrix,
            matrix,
            PolyMatrix.identity(matrix.ring, matrix.row_twists),
            PolyMatrix.identity(matrix.ring, matrix.column_degrees),
        )
    matrix = preparation.matrix
    n = matrix.nrows
    if n == 1:
        return None
    ring = matrix.ring
    if not is_prepared(matrix):
        raise PreparationError('Matrix is not prepared: b, c or det A\' vanishes')

    corner = matrix.submatrix(range(1, n), range(1, n))
    adjugate = corner.adjugate()
    b = matrix.rows[0][1:]
    c = [matrix.rows[i][0] for i in range(1, n)]
    b_tilde = []
    for j in range(n - 1):
        total = ring.zero
        for i in range(n - 1):
            if b[i] and adjugate.rows[i][j]:
                total += b[i] * adjugate.rows[i][j]
        b_tilde.append(total)
    if not any(b_tilde):
        raise ConsistencyError('b * adj(A\') vanishes although det A\' is nonzero')

    rows, cols = matrix.row_twists, matrix.column_degrees
    corner_degree = corner.det_degree
    v_degrees = [corner_degree - rows[0] + rows[i] for i in range(1, n)]
    shift = corner_degree - rows[0] + cols[0]
    transport = symmetric_transport(ring, b_tilde, c, v_degrees, shift, transport_rng)
    lam = transport.scalar
    right = adjugate.rows
    s_rows = transport.matrix.rows
    block = []
    for i in range(n - 1):
        block_row = []
        for j in range(n - 1):
            total = ring.zero
            for k in range(n - 1):
                if right[i][k] and s_rows[k][j]:
                    total += right[i][k] * s_rows[k][j]
            block_row.append(total)
        block.append(block_row)
    linked_rows = [[lam] + [ring.zero] * (n - 1)]
    linked_rows += [[ring.zero] + block[i] for i in range(n - 1)]
    sigma = transport.matrix.column_degrees[0] + v_degrees[0]
    kappa = sigma - corner_degree + 2 * rows[0]
    linked_transpose = PolyMatrix(
        ring,
        linked_rows,
        cols,
        tuple(kappa - a for a in rows),
    )
    product = matrix @ linked_transpose
    step = SymLinkStep(preparation, linked_transpose, product, lam, transport)
    report = step.verify()
    failed = [key for key, value in report.items() if not value]
    if failed:
        logger.error(f'Matrix link failed: {", ".join(failed)}')
        raise VerificationError(f'Matrix link failed: {", ".join(failed)}', report)
    logger.info(f'Matrix link of size {n}: lambda of degree {poly_degree(lam)}')
    return step


def verify_matrix_link_modules(step):
    """
    coker A and coker B are linked by coker(A B^t): degrees add up and
    ``HS(coker S) = HS(K_M(t)) + HS(coker B)``.
    """
    module = step.matrix.to_module()
    linking = step.product.to_module()
    linked = step.linked.to_module()
    t = step.twist + module.ring.n + 1
    kernel = twist(canonical_module(module), t)
    report = {
        'degree': linking.hilbert.degree == module.hilbert.degree + linked.hilbert.degree,
        'exact_sequence': linking.hilbert.series == kernel.hilbert.series + linked.hilbert.series,
        'codimension': module.codim == linking.codim == linked.codim == 1,
    }
    failed = [key for key, value in report.items() if not value]
    if failed:
        logger.error(f'Matrix link modules failed: {", ".join(failed)}')
        raise VerificationError(f'Matrix link modules failed: {", ".join(failed)}', report)
    return report


@dataclass(frozen=True)
class MatMove:
    """A module-level move recorded between matrix links, with the checks that justify it"""

    kind: str
    detail: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)


def _require_move(report, kind):
    failed = [key for key, value in report.items() if not value]
    if failed:
        logger.error(f'{kind} move failed: {", ".join(failed)}')
        raise VerificationError(f'{kind} move failed: {", ".join(failed)}', report)
    return report


def verify_split_off(step):
    """
    coker B = (R/lambda)(-a) + coker B'^t with a quasi-Gorenstein first
    summand of the same dimension, so the summand can be split off by two links.
    """
    linked = step.linked
    n = linked.nrows
    module = linked.to_module()
    summand = linked.submatrix((0,), (0,)).to_module()
    rest = step.next_matrix.to_module()
    report = {
        'block_diagonal': all(not linked.rows[0][k] and not linked.rows[k][0] for k in range(1, n)),
        'decomposition': module.hilbert.series == summand.hilbert.series + rest.hilbert.series,
    }
    # a unit lambda leaves nothing to split
    if not summand.is_zero:
        report['summand_dimension'] = summand.dimension == module.dimension
        report['summand_quasi_gorenstein'] = certify_quasi_gorenstein(summand).verdict is Verdict.YES
    return _require_move(report, 'split_off')


def verify_shift(matrix, target_twist, rng=None):
    """
    Regrade the 1x1 ``matrix`` to row twist ``target_twist``; the result must be
    stably equivalent to coker ``matrix`` with exactly the recorded shift.
    """
    amount = target_twist - matrix.row_twists[0]
    shifted = PolyMatrix(
        matrix.ring,
        matrix.rows,
        (target_twist,),
        tuple(c + amount for c in matrix.column_degrees),
    )
    equivalence = stable_equiv(matrix.to_module(), shifted.to_module(), rng)
    report = {
        'stably_equivalent': equivalence.verdict is StableVerdict.CERTIFIED_EQUIVALENT,
        'recorded_shift': equivalence.shift == amount,
    }
    return shifted, _require_move(report, 'shift')


def bridge_step(matrix, other):
    """(R/c)(j) linked to (R/a)(j) by (R/ac)(j) for ``matrix = [[c]]``"""
    ring = matrix.ring
    row, column = matrix.row_twists[0], matrix.column_degrees[0]
    linked_transpose = PolyMatrix(ring, [[other]], (column,), (column + poly_degree(other),))
    product = matrix @ linked_transpose
    preparation = Preparation(
        matrix,
        matrix,
        PolyMatrix.identity(ring, (row,)),
        PolyMatrix.identity(ring, (column,)),
    )
    transport = Transport(PolyMatrix.identity(ring, (0,)), ring.one)
    return SymLinkStep(preparation, linked_transpose, product, other, transport)


@dataclass(frozen=True, eq=False)
class MatLinkChain:
    original: PolyMatrix
    steps: tuple = ()
    moves: tuple = ()
    reports: tuple = ()
    final: PolyMatrix = None

    def __len__(self):
        return len(self.steps)


def reduce(matrix, rng=None, bridge_to=None):
    """
    Chain of matrix links from A down to a 1x1 matrix, every step verified
    at matrix and module level. With ``bridge_to = (a, j)`` the final
    ``R/(c)`` is bridged to ``R/(a)`` and shifted to twist j.
    """
    if not matrix.is_square:
        raise PreparationError('Only square matrices can be reduced')
    if not matrix.det:
        raise PreparationError('The determinant vanishes')
    rng = rng or make_rng(0)
    steps, moves, reports = [], [], []
    current = matrix
    while current.nrows > 1:
        preparation = prepare(current, rng)
        step = link_step(preparation, rng)
        reports.append(verify_matrix_link_modules(step))
        steps.append(step)
        linked = step.linked
        moves.append(MatMove('split_off', {
            'scalar': step.scalar,
            'twist': linked.row_twists[0],
            'remaining': linked.nrows - 1,
        }, verify_split_off(step)))
        current = step.next_matrix

    if bridge_to is not None:
        other, target_twist = bridge_to
        bridge = bridge_step(current, other)
        reports.append(verify_matrix_link_modules(bridge))
        steps.append(bridge)
        moves.append(MatMove('bridge', {'from': current.rows[0][0], 'to': other}))
        current = bridge.linked
        if current.row_twists[0] != target_twist:
            origin = current.row_twists[0]
            current, checks = verify_shift(current, target_twist, rng)
            moves.append(MatMove('shift', {'from': origin, 'to': target_twist}, checks))

    logger.info(f'Reduced a {matrix.nrows}x{matrix.nrows} matrix in {len(steps)} links')
    return MatLinkChain(matrix, tuple(steps), tuple(moves), tuple(reports), current)
