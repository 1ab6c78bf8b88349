"""
Multiplicative convolution C_lambda and middle convolution MC_lambda of
matrix tuples, with the conditions (*) and (**), absolute irreducibility,
the rigidity index, scalar multiplication, the Hurwitz braid action, tuple
conjugacy and the invariant form on the convolution space.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

from midconv.errors import InconclusiveError, PreconditionError
from midconv.fields import common_field
from midconv.linalg import (Matrix, Subspace, centralizer_dim, kernel_basis, quotient_action,
                            subspace_intersect, subspace_sum)

__license__ = "MIT"


@dataclass(frozen=True)
class MatTuple:
    matrices: tuple
    field: object = None

    def __post_init__(self):
        matrices = tuple(self.matrices)
        if not matrices:
            raise PreconditionError("a matrix tuple needs at least one matrix")
        field = self.field or common_field(*[m.field for m in matrices])
        matrices = tuple(m.with_field(field) for m in matrices)
        n = matrices[0].rows
        for index, m in enumerate(matrices):
            if m.shape != (n, n):
                raise PreconditionError("matrix {} has shape {}, expected {}x{}".format(index + 1, m.shape, n, n))
            if n and not m.det():
                raise PreconditionError("matrix {} is not invertible".format(index + 1))
        object.__setattr__(self, 'matrices', matrices)
        object.__setattr__(self, 'field', field)

    @property
    def n(self) -> int:
        return self.matrices[0].rows

    @property
    def r(self) -> int:
        return len(self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, index):
        return self.matrices[index]

    def product(self) -> Matrix:
        result = Matrix.identity(self.n, self.field)
        for m in self.matrices:
            result = result @ m
        return result

    def with_field(self, field) -> MatTuple:
        return MatTuple(tuple(m.with_field(field) for m in self.matrices), field)

    def conjugated(self, s: Matrix) -> MatTuple:
        ''' (S^-1 A_1 S, ..., S^-1 A_r S) '''
        inverse = s.inverse()
        return MatTuple(tuple(inverse @ m @ s for m in self.matrices))

    def transposed(self) -> MatTuple:
        return MatTuple(tuple(m.T for m in self.matrices), self.field)


@dataclass(frozen=True)
class ConvolutionResult:
    B: MatTuple
    K: Subspace
    L: Subspace
    quotient: MatTuple

    @property
    def dim(self) -> int:
        return self.quotient.n


@dataclass(frozen=True)
class ConjugacyResult:
    status: str
    S: Matrix = None
    dimension: int = 0

    @property
    def conjugate(self) -> bool:
        return self.status == 'conjugate'


def _lift(a: MatTuple, *scalars):
    field = common_field(a.field, *scalars)
    return a.with_field(field), [field(s) for s in scalars], field


def conv_mult(a: MatTuple, lam) -> MatTuple:
    ''' C_lambda(A): block row k of B_k is (lam(A_1-1), ..., lam A_k, A_{k+1}-1, ..., A_r-1). '''
    if not lam:
        raise PreconditionError("lambda must be nonzero")
    a, (lam,), field = _lift(a, lam)
    n, r = a.n, a.r
    one = Matrix.identity(n, field)
    zero = Matrix.zeros(n, n, field)
    blocks = []
    for k in range(r):
        grid = []
        for i in range(r):
            if i == k:
                row = [a[j] * lam - one * lam if j < k else a[j] * lam if j == k else a[j] - one
                       for j in range(r)]
            else:
                row = [one if j == i else zero for j in range(r)]
            grid.append(row)
        blocks.append(Matrix.block(grid, field))
    return MatTuple(tuple(blocks), field)


def mc_subspaces(a: MatTuple, lam):
    ''' The invariant subspaces K = sum of K_k and L of the convolution space. '''
    a, (lam,), field = _lift(a, lam)
    n, r = a.n, a.r
    one = Matrix.identity(n, field)
    k_space = Subspace.direct_sum([kernel_basis(m - one) for m in a], field)
    if lam != 1:
        vectors = []
        for v in kernel_basis(a.product() * lam - one).basis:
            # (A_2...A_r v, A_3...A_r v, ..., A_r v, v), built from the right
            w = tuple(v)
            blocks = [w]
            for m in reversed(a.matrices[1:]):
                w = m.apply(w)
                blocks.insert(0, w)
            vectors.append([x for block in blocks for x in block])
        l_space = Subspace(n * r, vectors, field)
    else:
        b = conv_mult(a, lam)
        identity = Matrix.identity(n * r, field)
        l_space = kernel_basis(Matrix.block([[m - identity] for m in b], field))
    return k_space, l_space


def mc_mult(a: MatTuple, lam) -> ConvolutionResult:
    ''' MC_lambda(A): the action of C_lambda(A) on the quotient by K + L. '''
    b = conv_mult(a, lam)
    k_space, l_space = mc_subspaces(a, lam)
    w = subspace_sum(k_space, l_space)
    assert all(w.is_invariant(m) for m in b), "K + L must be invariant under every B_k"
    quotient = quotient_action(b.matrices, w)
    if not quotient[0].rows:
        logging.warning("Middle convolution has dimension 0")
    logging.debug("MC: n={} r={} dim K={} dim L={} -> {}".format(a.n, a.r, k_space.dim, l_space.dim,
                                                                   b.n - w.dim))
    return ConvolutionResult(b, k_space, l_space, MatTuple(tuple(quotient), b.field))


def dim_formula(a: MatTuple, lam) -> int:
    ''' sum rk(A_k - 1) - (n - rk(lam A_1...A_r - 1)), valid for lam != 1. '''
    if lam == 1:
        raise PreconditionError("the dimension formula needs lambda != 1")
    a, (lam,), field = _lift(a, lam)
    one = Matrix.identity(a.n, field)
    return sum((m - one).rank() for m in a) - (a.n - (a.product() * lam - one).rank())


def _largest_invariant(u: Subspace, m: Matrix) -> Subspace:
    ''' Largest m-invariant subspace of u, for invertible m. '''
    inverse = m.inverse()
    while not u.is_zero():
        smaller = subspace_intersect(u, u.image(inverse))
        if smaller.dim == u.dim:
            return u
        u = smaller
    return u


def check_star(a: MatTuple) -> bool:
    ''' (*): no A_i-eigenvector lies in the common fixed space of the other A_j. '''
    one = Matrix.identity(a.n, a.field)
    for i, m in enumerate(a):
        u = Subspace.full(a.n, a.field)
        for j, other in enumerate(a):
            if j != i:
                u = subspace_intersect(u, kernel_basis(other - one))
        if not _largest_invariant(u, m).is_zero():
            logging.debug("(*) fails at position {}".format(i + 1))
            return False
    return True


def check_starstar(a: MatTuple) -> bool:
    ''' (**): (*) for the transposed tuple, i.e. on linear forms. '''
    return check_star(a.transposed())


def algebra_dimension(a: MatTuple) -> int:
    ''' Dimension of the unital algebra generated by the tuple. '''
    n, field = a.n, a.field
    span = Subspace(n * n, [Matrix.identity(n, field).entries], field)
    frontier = [Matrix.identity(n, field)]
    while frontier and span.dim < n * n:
        x = frontier.pop()
        for m in a:
            y = m @ x
            if not span.contains(y.entries):
                span = Subspace(n * n, span.basis + (y.entries,), field)
                frontier.append(y)
    return span.dim


def irreducible_abs(a: MatTuple) -> bool:
    ''' Burnside: absolutely irreducible iff the generated algebra is the full matrix algebra. '''
    return algebra_dimension(a) == a.n * a.n


def rigidity_index(a: MatTuple) -> int:
    ''' (2 - (r+1)) n^2 + sum of centralizer dimensions, including A_inf = (A_1...A_r)^-1. '''
    local = list(a.matrices) + [a.product().inverse()]
    return (2 - len(local)) * a.n * a.n + sum(centralizer_dim(m) for m in local)


def scalar_mult(omega, a: MatTuple) -> MatTuple:
    omega = list(omega)
    if len(omega) != a.r:
        raise PreconditionError("expected {} scalars, got {}".format(a.r, len(omega)))
    if any(not w for w in omega):
        raise PreconditionError("scalar multiplication with zero")
    field = common_field(a.field, *omega)
    return MatTuple(tuple(m.with_field(field) * w for m, w in zip(a, omega)), field)


def apply_braid_word(word, matrices, inverse) -> list:
    '''
    Hurwitz action of a braid word, applied left to right. Generator i maps
    (.., g_i, g_{i+1}, ..) to (.., g_i g_{i+1} g_i^-1, g_i, ..) and -i undoes it.
    Works on any matrices supporting @ given an inversion function.
    '''
    g = list(matrices)
    for letter in word:
        i = abs(letter)
        if not 1 <= i < len(g):
            raise PreconditionError("braid generator {} out of range for r={}".format(letter, len(g)))
        left, right = g[i - 1], g[i]
        if letter > 0:
            g[i - 1], g[i] = left @ right @ inverse(left), left
        else:
            g[i - 1], g[i] = right, inverse(right) @ left @ right
    return g


def braid_act(word, a: MatTuple) -> MatTuple:
    return MatTuple(tuple(apply_braid_word(word, a.matrices, Matrix.inverse)), a.field)


def pure_braid_word(i: int, j: int) -> list:
    ''' Generator Q_{i,j} of the pure braid group: Q_i^2 conjugated up to position j-1. '''
    if not 1 <= i < j:
        raise PreconditionError("pure braid generator needs 1 <= i < j, got ({}, {})".format(i, j))
    outer = list(range(j - 1, i, -1))
    return outer + [i, i] + [-k for k in reversed(outer)]


def invert_word(word) -> list:
    return [-letter for letter in reversed(word)]


def _coefficient_vectors(dim: int, attempts: int):
    ''' Basis vectors first, then small integer combinations in a fixed order. '''
    for k in range(dim):
        yield [1 if j == k else 0 for j in range(dim)]
    count = dim
    for bound in itertools.count(1):
        for coeffs in itertools.product(range(-bound, bound + 1), repeat=dim):
            if max(abs(c) for c in coeffs) != bound or sum(1 for c in coeffs if c) < 2:
                continue
            if count >= attempts:
                return
            count += 1
            yield list(coeffs)
        if dim < 2:
            return


def tuple_conjugate(a: MatTuple, b: MatTuple, max_attempts: int = 100) -> ConjugacyResult:
    ''' Search an invertible S with S^-1 A_i S = B_i for all i. '''
    if (a.n, a.r) != (b.n, b.r):
        raise PreconditionError("tuples differ in shape: n={} r={} vs n={} r={}".format(a.n, a.r, b.n, b.r))
    field = common_field(a.field, b.field)
    a, b = a.with_field(field), b.with_field(field)
    n = a.n
    if n == 0:
        return ConjugacyResult('conjugate', Matrix.identity(0, field), 1)
    # unknown S[k][l] sits at index k*n + l; equation A S - S B = 0
    rows = []
    for m, m2 in zip(a, b):
        for x, y in itertools.product(range(n), repeat=2):
            row = [field.zero] * (n * n)
            for k in range(n):
                row[k * n + y] = row[k * n + y] + m[x, k]
                row[x * n + k] = row[x * n + k] - m2[k, y]
            rows.append(row)
    solutions = kernel_basis(Matrix.from_rows(rows, field))
    if solutions.is_zero():
        return ConjugacyResult('not-conjugate', None, 0)
    basis = [Matrix(n, n, v, field) for v in solutions.basis]
    for coeffs in _coefficient_vectors(len(basis), max_attempts):
        s = Matrix.zeros(n, n, field)
        for c, v in zip(coeffs, basis):
            if c:
                s = s + v * c
        if s.det():
            inverse = s.inverse()
            if all(inverse @ m @ s == m2 for m, m2 in zip(a, b)):
                return ConjugacyResult('conjugate', s, solutions.dim)
    logging.warning("No invertible intertwiner among {} attempts (solution space of dim {})".format(
        max_attempts, solutions.dim))
    return ConjugacyResult('inconclusive', None, solutions.dim)


def require_conjugate(a: MatTuple, b: MatTuple, max_attempts: int = 100) -> Matrix:
    result = tuple_conjugate(a, b, max_attempts)
    if result.status == 'inconclusive':
        raise InconclusiveError("conjugacy undecided after {} attempts".format(max_attempts))
    if not result.conjugate:
        raise PreconditionError("tuples are not conjugate")
    return result.S


def _check_form(a: MatTuple, g: Matrix, sqrt_lam):
    field = common_field(a.field, g.field, sqrt_lam)
    a, g, s = a.with_field(field), g.with_field(field), field(sqrt_lam)
    if g.shape != (a.n, a.n) or not g.det():
        raise PreconditionError("G must be an invertible {}x{} matrix".format(a.n, a.n))
    for index, m in enumerate(a):
        if m.H @ g @ m != g:
            raise PreconditionError("G is not invariant under matrix {}".format(index + 1))
    return a, g, s, field


def transport_form(a: MatTuple, g: Matrix, sqrt_lam) -> Matrix:
    '''
    The form H on the convolution space with B_k^H H B_k = H, built blockwise
    from an A-invariant form G and a square root of lambda.
    '''
    a, g, s, field = _check_form(a, g, sqrt_lam)
    lam = s * s
    n, r = a.n, a.r
    one = Matrix.identity(n, field)
    inverses = [m.inverse() - one for m in a]
    grid = []
    for i in range(r):
        row = []
        for j in range(r):
            if i == j:
                block = g @ inverses[i] @ (a[i] - one * (1 / lam)) * s
            elif i < j:
                block = g @ inverses[i] @ (a[j] - one) * (1 / s)
            else:
                block = g @ inverses[i] @ (a[j] - one) * s
            row.append(block)
        grid.append(row)
    h = Matrix.block(grid, field)
    for k, b in enumerate(conv_mult(a, lam)):
        assert b.H @ h @ b == h, "form not invariant under B_{}".format(k + 1)
    return h


def quotient_form(a: MatTuple, g: Matrix, sqrt_lam) -> Matrix:
    '''
    Restriction of the transported form to the canonical complement
    coordinates of K + L. Requires K + L in both radicals of H.
    '''
    a, g, s, field = _check_form(a, g, sqrt_lam)
    h = transport_form(a, g, s)
    k_space, l_space = mc_subspaces(a, s * s)
    w = subspace_sum(k_space, l_space).with_field(field)
    adjoint = h.H
    for v in w.basis:
        if any(h.apply(v)) or any(adjoint.apply(v)):
            raise PreconditionError("K + L is not in the radical of the transported form")
    coords = w.complement()
    return h.submatrix(coords, coords)


