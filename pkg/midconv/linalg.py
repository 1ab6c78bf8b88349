"""
Dense exact linear algebra: immutable matrices, reduced row echelon forms,
kernels, canonical subspaces and quotients by invariant subspaces.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import sympy

from midconv.errors import PreconditionError
from midconv.fields import QQ, CycloElem, common_field, cyclo_conjugate, order_of
from midconv.poly import Polynomial

__license__ = "MIT"


class Matrix:
    __slots__ = ('rows', 'cols', 'entries', 'field')

    def __init__(self, rows: int, cols: int, entries=(), field=QQ):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise PreconditionError("{}x{} matrix needs {} entries, got {}".format(
                rows, cols, rows * cols, len(entries)))
        self.rows = rows
        self.cols = cols
        self.field = field
        self.entries = tuple(field(e) for e in entries)

    @classmethod
    def _raw(cls, rows, cols, entries, field) -> Matrix:
        m = cls.__new__(cls)
        m.rows, m.cols, m.entries, m.field = rows, cols, tuple(entries), field
        return m

    @classmethod
    def from_rows(cls, rows, field=None) -> Matrix:
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise PreconditionError("ragged matrix rows")
        if field is None:
            field = common_field(*[e for r in rows for e in r if not isinstance(e, str)])
        return cls(len(rows), cols, [e for r in rows for e in r], field)

    @classmethod
    def identity(cls, n: int, field=QQ) -> Matrix:
        return cls._raw(n, n, [field.one if i == j else field.zero for i in range(n) for j in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field=QQ) -> Matrix:
        return cls._raw(rows, cols, [field.zero] * (rows * cols), field)

    @classmethod
    def diagonal(cls, values, field=QQ) -> Matrix:
        values = [field(v) for v in values]
        n = len(values)
        return cls._raw(n, n, [values[i] if i == j else field.zero for i in range(n) for j in range(n)], field)

    @classmethod
    def block(cls, grid, field=None) -> Matrix:
        ''' Assemble a matrix from a rectangular grid of blocks. '''
        if field is None:
            field = common_field(*[b.field for row in grid for b in row])
        heights = [row[0].rows for row in grid]
        widths = [b.cols for b in grid[0]] if grid else []
        entries = []
        for row, h in zip(grid, heights):
            for i in range(h):
                for b, w in zip(row, widths):
                    if b.rows != h or b.cols != w:
                        raise PreconditionError("block sizes do not line up")
                    entries.extend(b.entries[i * w:(i + 1) * w])
        return cls(sum(heights), sum(widths), entries, field)

    @classmethod
    def block_diagonal(cls, blocks, field=None) -> Matrix:
        if field is None:
            field = common_field(*[b.field for b in blocks])
        grid = [[b if i == j else Matrix.zeros(b.rows, c.cols, field) for j, c in enumerate(blocks)]
                for i, b in enumerate(blocks)]
        return cls.block(grid, field)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index):
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def with_field(self, field) -> Matrix:
        if field == self.field:
            return self
        return Matrix(self.rows, self.cols, self.entries, field)

    def _unify(self, other: Matrix):
        if other.field == self.field:
            return self, other
        field = common_field(self.field, other.field)
        return self.with_field(field), other.with_field(field)

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        a, b = self._unify(other)
        if a.shape != b.shape:
            raise PreconditionError("shape mismatch {} + {}".format(a.shape, b.shape))
        return Matrix._raw(a.rows, a.cols, [x + y for x, y in zip(a.entries, b.entries)], a.field)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        a, b = self._unify(other)
        if a.shape != b.shape:
            raise PreconditionError("shape mismatch {} - {}".format(a.shape, b.shape))
        return Matrix._raw(a.rows, a.cols, [x - y for x, y in zip(a.entries, b.entries)], a.field)

    def __neg__(self):
        return Matrix._raw(self.rows, self.cols, [-x for x in self.entries], self.field)

    def __mul__(self, scalar):
        if isinstance(scalar, Matrix):
            return NotImplemented
        field = common_field(self.field, scalar)
        m = self.with_field(field)
        scalar = field(scalar)
        return Matrix._raw(m.rows, m.cols, [x * scalar for x in m.entries], field)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        a, b = self._unify(other)
        if a.cols != b.rows:
            raise PreconditionError("shape mismatch {} @ {}".format(a.shape, b.shape))
        zero = a.field.zero
        b_cols = [b.column(j) for j in range(b.cols)]
        entries = []
        for i in range(a.rows):
            row = a.row(i)
            for col in b_cols:
                acc = zero
                for x, y in zip(row, col):
                    if x and y:
                        acc = acc + x * y
                entries.append(acc)
        return Matrix._raw(a.rows, b.cols, entries, a.field)

    def __pow__(self, exponent: int):
        base = self if exponent >= 0 else self.inverse()
        result = Matrix.identity(self.rows, self.field)
        for _ in range(abs(exponent)):
            result = result @ base
        return result

    def apply(self, vector) -> tuple:
        ''' Matrix times a column vector given as a sequence. '''
        field = self.field
        return tuple(sum((x * y for x, y in zip(self.row(i), vector) if x and y), field.zero)
                     for i in range(self.rows))

    @property
    def T(self) -> Matrix:
        return Matrix._raw(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)],
                           self.field)

    @property
    def H(self) -> Matrix:
        ''' Conjugate transpose with respect to z -> z^{-1}. '''
        return Matrix._raw(self.cols, self.rows,
                           [cyclo_conjugate(self[i, j]) for j in range(self.cols) for i in range(self.rows)],
                           self.field)

    def submatrix(self, rows, cols) -> Matrix:
        rows, cols = list(rows), list(cols)
        return Matrix._raw(len(rows), len(cols), [self[i, j] for i in rows for j in cols], self.field)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def trace(self):
        return sum((self[i, i] for i in range(self.rows)), self.field.zero)

    def rank(self) -> int:
        return rref(self)[0]

    def det(self):
        if not self.is_square():
            raise PreconditionError("determinant of a {}x{} matrix".format(self.rows, self.cols))
        rows = self.to_rows()
        n = self.rows
        result = self.field.one
        for c in range(n):
            pivot = next((i for i in range(c, n) if rows[i][c]), None)
            if pivot is None:
                return self.field.zero
            if pivot != c:
                rows[c], rows[pivot] = rows[pivot], rows[c]
                result = -result
            result = result * rows[c][c]
            inverse = self.field.one / rows[c][c]
            for i in range(c + 1, n):
                if rows[i][c]:
                    f = rows[i][c] * inverse
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
        return result

    def inverse(self) -> Matrix:
        if not self.is_square():
            raise PreconditionError("inverse of a {}x{} matrix".format(self.rows, self.cols))
        n = self.rows
        augmented = Matrix.block([[self, Matrix.identity(n, self.field)]], self.field)
        rank, pivots, reduced = rref(augmented)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return reduced.submatrix(range(n), range(n, 2 * n))

    def to_numpy(self) -> np.ndarray:
        return np.array([complex(e) for e in self.entries], dtype=complex).reshape(self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(x == y for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols))

    def __repr__(self):
        return "Matrix({!r})".format(self.to_rows())


def rref(m: Matrix):
    ''' Reduced row echelon form: returns (rank, pivot columns, R). '''
    field = m.field
    rows = m.to_rows()
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        pivot = next((i for i in range(r, m.rows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inverse = field.one / rows[r][c]
        rows[r] = [x * inverse for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return r, pivots, Matrix._raw(m.rows, m.cols, [x for row in rows for x in row], field)


class Subspace:
    ''' A subspace of field^ambient kept as the nonzero rows of a reduced echelon form. '''
    __slots__ = ('ambient', 'basis', 'pivots', 'field')

    def __init__(self, ambient: int, vectors=(), field=QQ):
        vectors = [tuple(v) for v in vectors]
        if any(len(v) != ambient for v in vectors):
            raise PreconditionError("vector length differs from ambient dimension {}".format(ambient))
        self.ambient = ambient
        self.field = field
        if vectors:
            rank, pivots, reduced = rref(Matrix(len(vectors), ambient, [x for v in vectors for x in v], field))
            self.basis = tuple(reduced.row(i) for i in range(rank))
            self.pivots = tuple(pivots)
        else:
            self.basis = ()
            self.pivots = ()

    @classmethod
    def zero(cls, ambient: int, field=QQ) -> Subspace:
        return cls(ambient, (), field)

    @classmethod
    def full(cls, ambient: int, field=QQ) -> Subspace:
        return cls(ambient, [[field.one if i == j else field.zero for j in range(ambient)]
                             for i in range(ambient)], field)

    @classmethod
    def coordinates(cls, ambient: int, indices, field=QQ) -> Subspace:
        return cls(ambient, [[field.one if i == j else field.zero for j in range(ambient)]
                             for i in sorted(indices)], field)

    @classmethod
    def direct_sum(cls, parts, field=None) -> Subspace:
        ''' Block direct sum of subspaces of consecutive coordinate blocks. '''
        field = field or common_field(*[p.field for p in parts])
        total = sum(p.ambient for p in parts)
        vectors, offset = [], 0
        for part in parts:
            for v in part.basis:
                vectors.append([field.zero] * offset + [field(x) for x in v]
                               + [field.zero] * (total - offset - part.ambient))
            offset += part.ambient
        return cls(total, vectors, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def with_field(self, field) -> Subspace:
        if field == self.field:
            return self
        return Subspace(self.ambient, [[field(x) for x in v] for v in self.basis], field)

    def as_matrix(self) -> Matrix:
        ''' Basis vectors as columns. '''
        return Matrix(self.dim, self.ambient, [x for v in self.basis for x in v], self.field).T

    def reduce(self, vector) -> tuple:
        ''' Subtract the multiple of the basis that clears every pivot coordinate. '''
        v = list(vector)
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, vector) -> bool:
        return not any(self.reduce(vector))

    def complement(self) -> tuple:
        ''' Non-pivot coordinates; their standard vectors span a complement. '''
        pivots = set(self.pivots)
        return tuple(i for i in range(self.ambient) if i not in pivots)

    def project(self, vector) -> tuple:
        ''' Coordinates of the class of vector in ambient/self, in complement coordinates. '''
        reduced = self.reduce(vector)
        return tuple(reduced[i] for i in self.complement())

    def image(self, m: Matrix) -> Subspace:
        return Subspace(m.rows, [m.apply(v) for v in self.basis], common_field(self.field, m.field))

    def is_invariant(self, m: Matrix) -> bool:
        return all(self.contains(m.apply(v)) for v in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.dim))

    def __repr__(self):
        return "Subspace(ambient={}, basis={!r})".format(self.ambient, [list(v) for v in self.basis])


def kernel_basis(m: Matrix) -> Subspace:
    rank, pivots, reduced = rref(m)
    field = m.field
    pivot_set = set(pivots)
    vectors = []
    for free in (c for c in range(m.cols) if c not in pivot_set):
        v = [field.zero] * m.cols
        v[free] = field.one
        for k, p in enumerate(pivots):
            v[p] = -reduced[k, free]
        vectors.append(v)
    return Subspace(m.cols, vectors, field)


def _check_ambient(u: Subspace, v: Subspace):
    if u.ambient != v.ambient:
        raise PreconditionError("ambient dimension mismatch: {} vs {}".format(u.ambient, v.ambient))
    field = common_field(u.field, v.field)
    return u.with_field(field), v.with_field(field), field


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    u, v, field = _check_ambient(u, v)
    return Subspace(u.ambient, u.basis + v.basis, field)


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    u, v, field = _check_ambient(u, v)
    if u.is_zero() or v.is_zero():
        return Subspace.zero(u.ambient, field)
    # columns [U | -V]; kernel vectors (x, y) give U x = V y
    stacked = Matrix.block([[u.as_matrix(), -v.as_matrix()]], field)
    coefficients = kernel_basis(stacked)
    vectors = []
    for c in coefficients.basis:
        vectors.append(tuple(sum((x * b[i] for x, b in zip(c[:u.dim], u.basis)), field.zero)
                             for i in range(u.ambient)))
    return Subspace(u.ambient, vectors, field)


def quotient_map(m: Matrix, source: Subspace, target: Subspace) -> Matrix:
    ''' Matrix of the map ambient/source -> ambient/target induced by m, in complement coordinates. '''
    if m.cols != source.ambient or m.rows != target.ambient:
        raise PreconditionError("matrix shape {} does not match ambient dimensions".format(m.shape))
    field = common_field(m.field, source.field, target.field)
    m, target = m.with_field(field), target.with_field(field)
    for v in source.basis:
        if not target.contains(m.apply([field(x) for x in v])):
            raise PreconditionError("matrix does not map the subspace into the target")
    columns = [target.project(m.column(c)) for c in source.complement()]
    rows = target.ambient - target.dim
    return Matrix._raw(rows, len(columns), [columns[j][i] for i in range(rows) for j in range(len(columns))], field)


def quotient_action(matrices, w: Subspace) -> list:
    ''' Induced action of each matrix on ambient/w. '''
    result = []
    for index, m in enumerate(matrices):
        try:
            result.append(quotient_map(m, w, w))
        except PreconditionError:
            raise PreconditionError("subspace is not invariant under matrix {}".format(index + 1))
    return result


def centralizer_dim(a: Matrix) -> int:
    ''' dim ker(X -> a X - X a). '''
    n = a.rows
    field = a.field
    entries = []
    for i, j in itertools.product(range(n), repeat=2):
        for k, l in itertools.product(range(n), repeat=2):
            value = field.zero
            if j == l:
                value = value + a[i, k]
            if i == k:
                value = value - a[l, j]
            entries.append(value)
    commutator = Matrix._raw(n * n, n * n, entries, field)
    return n * n - commutator.rank()


def charpoly(m: Matrix) -> Polynomial:
    ''' det(x - m) by Faddeev-LeVerrier (characteristic zero). '''
    n = m.rows
    field = m.field
    coeffs = [field.zero] * (n + 1)
    coeffs[n] = field.one
    identity = Matrix.identity(n, field)
    aux = Matrix.zeros(n, n, field)
    for k in range(1, n + 1):
        aux = m @ aux + identity * coeffs[n - k + 1]
        coeffs[n - k] = -(m @ aux).trace() / k
    return Polynomial(coeffs, field)


def _rational_roots(poly: Polynomial) -> list:
    ''' Rational roots of a polynomial with rational coefficients. '''
    coeffs = [Fraction(c) for c in poly.coeffs]
    roots = []
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(coeffs) < 2:
        return roots
    scale = 1
    for c in coeffs:
        scale = scale * c.denominator // sympy.igcd(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    candidates = []
    for p in sympy.divisors(abs(ints[0])):
        for q in sympy.divisors(abs(ints[-1])):
            for sign in (1, -1):
                candidates.append(Fraction(sign * p, q))
    for c in candidates:
        if c not in roots and sum(a * c ** k for k, a in enumerate(ints)) == 0:
            roots.append(c)
    return roots


def find_eigenvalues(m: Matrix) -> list:
    '''
    Eigenvalues of m that are rational or roots of unity of its field, as
    (value, multiplicity) pairs in discovery order.
    '''
    field = m.field
    chi = charpoly(m)
    order = order_of(field)
    if isinstance(field.zero, CycloElem):
        coordinate = Polynomial([c.coeffs[0] for c in chi.coeffs], QQ)
    else:
        coordinate = chi
    candidates = [field(c) for c in _rational_roots(coordinate)]
    for k in range(order):
        for sign in (1, -1):
            z = field(CycloElem.from_powers(order, {k: Fraction(sign)})) if order > 1 else field(sign)
            if z not in candidates:
                candidates.append(z)
    found = []
    remainder = chi
    for value in candidates:
        count = 0
        linear = Polynomial((-value, 1), field)
        while remainder.degree() > 0:
            quotient, rest = divmod(remainder, linear)
            if not rest.is_zero():
                break
            remainder = quotient
            count += 1
        if count:
            found.append((value, count))
    if remainder.degree() > 0:
        raise PreconditionError("unsupported eigenvalues: characteristic polynomial keeps a factor of degree {}".format(
            remainder.degree()))
    return found
