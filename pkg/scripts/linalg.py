"""
Exact linear algebra over the rationals and prime fields.

Matrices are sympy DomainMatrix objects over QQ or GF(p). Every homological
computation in this package reduces to the rank, kernel and cokernel of such
matrices, so the normalizations below are fixed:

* kernel basis vector j has a 1 in the j-th free column of the rref and a 0 in
  every other free column, so the coordinates of a kernel vector are its entries
  at the free columns;
* the cokernel projection is indexed by the rows of the target that are not
  pivots of the rref of the transpose; row j is e_j - sum_i R_i[j] e_{p_i}.
"""

import re
from functools import lru_cache

from sympy import GF, QQ, isprime
from sympy.polys.matrices import DomainMatrix

RATIONAL_LITERAL = re.compile(r"^-?[0-9]+(/[1-9][0-9]*)?$")


class FieldMismatchError(ValueError):
    pass


class NoSolutionError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def _domain(characteristic):
    # one domain object per characteristic so elements compare across fields
    return QQ if characteristic == 0 else GF(characteristic, symmetric=False)


class Field:
    """The rationals (characteristic 0) or the prime field F_p."""

    def __init__(self, characteristic=0):
        if characteristic < 0 or (characteristic and not isprime(characteristic)):
            raise ValueError("Field characteristic must be 0 or a prime, got {}".format(characteristic))
        self.characteristic = characteristic
        self.domain = _domain(characteristic)

    @classmethod
    def from_name(cls, name):
        name = str(name).strip()
        if name == "Q":
            return cls(0)
        match = re.fullmatch(r"F<?([0-9]+)>?", name)
        if not match:
            raise ValueError("Unknown field {!r}, expected \"Q\" or \"F<p>\"".format(name))
        return cls(int(match.group(1)))

    @property
    def name(self):
        return "Q" if self.characteristic == 0 else "F{}".format(self.characteristic)

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "Field({})".format(self.name)

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse_literal(value)
        if isinstance(value, bool):
            raise TypeError("Booleans are not scalars")
        if isinstance(value, int):
            return self.domain(value)
        return self.domain.convert(value)

    def parse_literal(self, text):
        text = text.strip()
        if not RATIONAL_LITERAL.match(text):
            raise ValueError("Invalid scalar literal {!r}".format(text))
        if "/" in text:
            if self.characteristic:
                raise ValueError("Prime-field literals are decimal residues, got {!r}".format(text))
            numerator, denominator = text.split("/")
            return QQ(int(numerator), int(denominator))
        return self.domain(int(text))

    def residue(self, a):
        return int(self.domain.to_int(a)) % self.characteristic

    def literal(self, a):
        if self.characteristic:
            return str(self.residue(a))
        numerator = int(self.domain.numer(a))
        denominator = int(self.domain.denom(a))
        if denominator == 1:
            return str(numerator)
        return "{}/{}".format(numerator, denominator)

    def is_zero(self, a):
        return a == self.domain.zero

    def elements(self):
        if not self.characteristic:
            raise ValueError("Cannot list the elements of Q")
        return [self.domain(r) for r in range(self.characteristic)]


def _check_fields(*matrices):
    for m in matrices[1:]:
        if m.domain != matrices[0].domain:
            raise FieldMismatchError("Matrices over different fields: {} and {}".format(matrices[0].domain, m.domain))


def _nonzero_entries(m):
    return m.to_sparse().rep


def from_dict(entries, rows, cols, field):
    return DomainMatrix({i: dict(row) for i, row in entries.items() if row}, (rows, cols), field.domain)


def from_rows(rows, field, cols=None):
    """Build a matrix from a list of rows of literals, integers or field elements."""
    if cols is None:
        cols = len(rows[0]) if rows else 0
    entries = {}
    for i, row in enumerate(rows):
        if len(row) != cols:
            raise ValueError("Row {} has {} entries, expected {}".format(i, len(row), cols))
        values = {}
        for j, value in enumerate(row):
            a = field(value)
            if a != field.zero:
                values[j] = a
        if values:
            entries[i] = values
    return DomainMatrix(entries, (len(rows), cols), field.domain)


def from_columns(columns, rows, field):
    entries = {}
    for j, column in enumerate(columns):
        if len(column) != rows:
            raise ValueError("Column {} has {} entries, expected {}".format(j, len(column), rows))
        for i, a in enumerate(column):
            if a != field.zero:
                entries.setdefault(i, {})[j] = a
    return DomainMatrix(entries, (rows, len(columns)), field.domain)


def zeros(rows, cols, field):
    return DomainMatrix.zeros((rows, cols), field.domain)


def identity(n, field):
    return DomainMatrix.eye(n, field.domain).to_sparse()


def field_of(m):
    domain = m.domain
    return Field(0) if domain == QQ else Field(int(domain.characteristic()))


def entries(m):
    return m.to_list()


def column(m, j):
    return [row[j] for row in m.to_list()]


def columns(m):
    rows, cols = m.shape
    values = m.to_list()
    return [[values[i][j] for i in range(rows)] for j in range(cols)]


def is_zero(m):
    return not any(_nonzero_entries(m).values())


def transpose(m):
    return m.transpose()


def multiply(*matrices):
    _check_fields(*matrices)
    result = matrices[0]
    for m in matrices[1:]:
        if result.shape[1] != m.shape[0]:
            raise ValueError("Cannot multiply {} by {}".format(result.shape, m.shape))
        if 0 in result.shape or 0 in m.shape:
            result = DomainMatrix({}, (result.shape[0], m.shape[1]), m.domain)
        else:
            result = result * m
    return result


def add(a, b):
    _check_fields(a, b)
    if a.shape != b.shape:
        raise ValueError("Cannot add {} and {}".format(a.shape, b.shape))
    if 0 in a.shape:
        return a
    return a + b


def subtract(a, b):
    _check_fields(a, b)
    if a.shape != b.shape:
        raise ValueError("Cannot subtract {} and {}".format(a.shape, b.shape))
    if 0 in a.shape:
        return a
    return a - b


def scale(m, scalar):
    rows, cols = m.shape
    result = {}
    for i, row in _nonzero_entries(m).items():
        values = {j: scalar * a for j, a in row.items() if scalar * a != m.domain.zero}
        if values:
            result[i] = values
    return DomainMatrix(result, (rows, cols), m.domain)


def block_matrix(blocks, row_sizes, col_sizes, field):
    """Assemble a matrix from a dict {(block_row, block_col): matrix}; missing blocks are zero."""
    row_offsets = _offsets(row_sizes)
    col_offsets = _offsets(col_sizes)
    result = {}
    for (bi, bj), block in blocks.items():
        if block.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError("Block ({}, {}) has shape {}, expected {}".format(
                bi, bj, block.shape, (row_sizes[bi], col_sizes[bj])))
        if block.domain != field.domain:
            raise FieldMismatchError("Block ({}, {}) is over {}, expected {}".format(bi, bj, block.domain, field.domain))
        for i, row in _nonzero_entries(block).items():
            target = result.setdefault(row_offsets[bi] + i, {})
            for j, a in row.items():
                target[col_offsets[bj] + j] = target.get(col_offsets[bj] + j, field.zero) + a
    result = {i: {j: a for j, a in row.items() if a != field.zero} for i, row in result.items()}
    return DomainMatrix({i: row for i, row in result.items() if row}, (sum(row_sizes), sum(col_sizes)), field.domain)


def _offsets(sizes):
    offsets = [0]
    for size in sizes:
        offsets.append(offsets[-1] + size)
    return offsets


def hstack(matrices, rows, field):
    if not matrices:
        return zeros(rows, 0, field)
    _check_fields(*matrices)
    first, *rest = [m.to_sparse() for m in matrices]
    return first.hstack(*rest).to_sparse()


def vstack(matrices, cols, field):
    if not matrices:
        return zeros(0, cols, field)
    _check_fields(*matrices)
    first, *rest = [m.to_sparse() for m in matrices]
    return first.vstack(*rest).to_sparse()


def direct_sum(matrices, field):
    _check_fields(*matrices)
    return block_matrix({(i, i): m for i, m in enumerate(matrices)},
                        [m.shape[0] for m in matrices], [m.shape[1] for m in matrices], field)


def kronecker_product(a, b):
    """Row-major Kronecker product: (a (x) b)[i*p + k, j*q + l] = a[i, j] * b[k, l]."""
    _check_fields(a, b)
    (m, n), (p, q) = a.shape, b.shape
    result = {}
    b_entries = _nonzero_entries(b)
    for i, row in _nonzero_entries(a).items():
        for j, x in row.items():
            for k, b_row in b_entries.items():
                target = result.setdefault(i * p + k, {})
                for l, y in b_row.items():
                    target[j * q + l] = x * y
    return DomainMatrix(result, (m * p, n * q), a.domain)


def select_rows(m, indices):
    rows, cols = m.shape
    values = _nonzero_entries(m)
    result = {}
    for new_i, i in enumerate(indices):
        if i in values and values[i]:
            result[new_i] = dict(values[i])
    return DomainMatrix(result, (len(indices), cols), m.domain)


def rref(m):
    """Reduced row echelon form as (list of rows, pivot columns)."""
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return m.to_list(), ()
    reduced, pivots = m.rref()
    return reduced.to_list(), tuple(pivots)


def rank(m):
    return len(rref(m)[1])


class Subspace:
    """A subspace given by a basis (the columns of `basis`) and the coordinate positions."""

    def __init__(self, basis, positions):
        self.basis = basis
        self.positions = tuple(positions)

    @property
    def dim(self):
        return self.basis.shape[1]

    def coordinates(self, vectors):
        """Coordinates of the columns of `vectors`, assumed to lie in the subspace."""
        return select_rows(vectors, self.positions)


def kernel(m):
    field = field_of(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return Subspace(identity(cols, field), range(cols))
    reduced, pivots = m.rref()
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    return Subspace(reduced.nullspace_from_rref(pivots).transpose().to_sparse(), free)


def rank_and_kernel(m):
    subspace = kernel(m)
    return m.shape[1] - subspace.dim, columns(subspace.basis)


def _transpose_pivots(m):
    return rref(m.transpose())


def cokernel_projection(m):
    """Return (dim, projection) with projection * m == 0 and full row rank."""
    field = field_of(m)
    rows = m.shape[0]
    reduced, pivots = _transpose_pivots(m)
    pivot_set = set(pivots)
    complement = [j for j in range(rows) if j not in pivot_set]
    projection = {}
    for r, j in enumerate(complement):
        row = {j: field.one}
        for i, p in enumerate(pivots):
            if reduced[i][j] != field.zero:
                row[p] = -reduced[i][j]
        projection[r] = row
    return len(complement), DomainMatrix(projection, (len(complement), rows), field.domain)


def cokernel_section(m):
    """Right inverse of cokernel_projection(m): standard vectors at the non-pivot rows."""
    field = field_of(m)
    rows = m.shape[0]
    _, pivots = _transpose_pivots(m)
    pivot_set = set(pivots)
    complement = [j for j in range(rows) if j not in pivot_set]
    return DomainMatrix({j: {r: field.one} for r, j in enumerate(complement)}, (rows, len(complement)), field.domain)


def image(m):
    """Subspace spanned by the columns of m, presented as the kernel of the cokernel projection."""
    _, projection = cokernel_projection(m)
    return kernel(projection)


def solve(m, b):
    """Particular solution of m x = b with free variables set to 0."""
    field = field_of(m)
    rows, cols = m.shape
    if len(b) != rows:
        raise ValueError("Right-hand side has length {}, expected {}".format(len(b), rows))
    augmented = block_matrix({(0, 0): m, (0, 1): from_columns([[field(x) for x in b]], rows, field)},
                             [rows], [cols, 1], field)
    reduced, pivots = rref(augmented)
    if cols in pivots:
        raise NoSolutionError("System has no solution")
    solution = [field.zero] * cols
    for i, p in enumerate(pivots):
        solution[p] = reduced[i][cols]
    return solution


def equal(a, b):
    return a.domain == b.domain and a.shape == b.shape and a.to_list() == b.to_list()
