"""
Fuchsian systems Y' = sum a_i/(x - t_i) Y, the additive convolution c_mu and
middle convolution mc_mu, scalar addition, Okubo systems (x - T) Y' = b Y and
the Lame constructions.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from midconv.errors import PreconditionError
from midconv.fields import QQ, common_field
from midconv.linalg import Matrix, Subspace, centralizer_dim, kernel_basis, quotient_action, subspace_sum
from midconv.poly import Polynomial, RationalFunction

__license__ = "MIT"


def _rf_matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), RationalFunction.constant(0, a[0][0].field))
             for j in range(len(b[0]))] for i in range(len(a))]


def _rf_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _rf_from_matrix(m: Matrix):
    return [[RationalFunction.constant(m[i, j], m.field) for j in range(m.cols)] for i in range(m.rows)]


@dataclass(frozen=True)
class FuchsianSystem:
    points: tuple
    residues: tuple
    field: object = None

    def __post_init__(self):
        points = tuple(Fraction(t) for t in self.points)
        residues = tuple(self.residues)
        if len(points) != len(residues):
            raise PreconditionError("{} points but {} residues".format(len(points), len(residues)))
        if not points:
            raise PreconditionError("a Fuchsian system needs at least one singular point")
        if len(set(points)) != len(points):
            raise PreconditionError("singular points must be pairwise distinct")
        field = self.field or common_field(*[a.field for a in residues])
        residues = tuple(a.with_field(field) for a in residues)
        n = residues[0].rows
        for index, a in enumerate(residues):
            if a.shape != (n, n):
                raise PreconditionError("residue {} has shape {}, expected {}x{}".format(index + 1, a.shape, n, n))
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'residues', residues)
        object.__setattr__(self, 'field', field)

    @property
    def n(self) -> int:
        return self.residues[0].rows

    @property
    def r(self) -> int:
        return len(self.residues)

    def residue_sum(self) -> Matrix:
        total = Matrix.zeros(self.n, self.n, self.field)
        for a in self.residues:
            total = total + a
        return total

    def permuted(self, order) -> FuchsianSystem:
        order = list(order)
        return FuchsianSystem(tuple(self.points[i] for i in order), tuple(self.residues[i] for i in order),
                              self.field)

    def rigidity_index(self) -> int:
        ''' (2 - (r+1)) n^2 + sum of centralizer dimensions, including a_inf = -(a_1 + ... + a_r). '''
        local = list(self.residues) + [-self.residue_sum()]
        return (2 - len(local)) * self.n * self.n + sum(centralizer_dim(a) for a in local)

    def system_matrix(self):
        ''' sum a_i/(x - t_i) as a nested list of rational functions. '''
        n, field = self.n, self.field
        result = [[RationalFunction.constant(0, field) for _ in range(n)] for _ in range(n)]
        for t, a in zip(self.points, self.residues):
            pole = RationalFunction.pole(1, t, field=field)
            result = [[result[i][j] + pole * a[i, j] for j in range(n)] for i in range(n)]
        return result


def residue_at_infinity(system: FuchsianSystem) -> Matrix:
    return -system.residue_sum()


def scalar_add(delta, system: FuchsianSystem) -> FuchsianSystem:
    ''' m_Delta: a_i -> a_i + delta_i. '''
    delta = [Fraction(d) for d in delta]
    if len(delta) != system.r:
        raise PreconditionError("expected {} shifts, got {}".format(system.r, len(delta)))
    one = Matrix.identity(system.n, system.field)
    return FuchsianSystem(system.points, tuple(a + one * d for a, d in zip(system.residues, delta)), system.field)


def _stacked_rows(system: FuchsianSystem, mu):
    ''' Block rows (a_1, ..., a_k + mu, ..., a_r) for k = 1..r. '''
    one = Matrix.identity(system.n, system.field)
    return [[a + one * mu if j == k else a for j, a in enumerate(system.residues)] for k in range(system.r)]


def conv_add(system: FuchsianSystem, mu) -> FuchsianSystem:
    ''' c_mu: residue b_k is zero outside block row k. '''
    mu = Fraction(mu)
    n, r, field = system.n, system.r, system.field
    zero = Matrix.zeros(n, n, field)
    rows = _stacked_rows(system, mu)
    residues = []
    for k in range(r):
        grid = [rows[k] if i == k else [zero] * r for i in range(r)]
        residues.append(Matrix.block(grid, field))
    return FuchsianSystem(system.points, tuple(residues), field)


def add_subspaces(system: FuchsianSystem, mu):
    ''' The subspaces k = sum of ker(a_k) and l of the additive convolution space. '''
    mu = Fraction(mu)
    n, r, field = system.n, system.r, system.field
    k_space = Subspace.direct_sum([kernel_basis(a) for a in system.residues], field)
    if mu:
        one = Matrix.identity(n, field)
        kernel = kernel_basis(system.residue_sum() + one * mu)
        l_space = Subspace(n * r, [list(v) * r for v in kernel.basis], field)
    else:
        conv = conv_add(system, mu)
        l_space = kernel_basis(Matrix.block([[b] for b in conv.residues], field))
    return k_space, l_space


def mc_add(system: FuchsianSystem, mu):
    ''' mc_mu: returns (quotient system, k, l). '''
    mu = Fraction(mu)
    conv = conv_add(system, mu)
    k_space, l_space = add_subspaces(system, mu)
    w = subspace_sum(k_space, l_space)
    residues = quotient_action(conv.residues, w)
    logging.debug("mc_{}: n={} r={} dim k={} dim l={} -> {}".format(
        mu, system.n, system.r, k_space.dim, l_space.dim, conv.n - w.dim))
    if not residues[0].rows:
        logging.warning("Additive middle convolution has dimension 0")
    return FuchsianSystem(system.points, tuple(residues), conv.field), k_space, l_space


@dataclass(frozen=True)
class OkuboSystem:
    T: tuple
    b: Matrix

    def __post_init__(self):
        T = tuple(Fraction(t) for t in self.T)
        if self.b.shape != (len(T), len(T)):
            raise PreconditionError("b has shape {}, expected {}x{}".format(self.b.shape, len(T), len(T)))
        object.__setattr__(self, 'T', T)

    @property
    def size(self) -> int:
        return len(self.T)

    @property
    def field(self):
        return self.b.field

    def distinct_points(self) -> tuple:
        return tuple(dict.fromkeys(self.T))

    def t_matrix(self) -> Matrix:
        return Matrix.diagonal(self.T, self.field)

    def as_fuchsian(self) -> FuchsianSystem:
        ''' Residues E_k b, with E_k the projection on the coordinates where T = t_k. '''
        points = self.distinct_points()
        residues = []
        for t in points:
            projection = Matrix.diagonal([1 if s == t else 0 for s in self.T], self.field)
            residues.append(projection @ self.b)
        return FuchsianSystem(points, tuple(residues), self.field)

    def quotient(self, w: Subspace) -> OkuboSystem:
        ''' Factor Okubo system on ambient/w, for w invariant under T and b. '''
        t_bar, b_bar = quotient_action([self.t_matrix(), self.b], w)
        return OkuboSystem(tuple(t_bar[i, i] for i in range(t_bar.rows)), b_bar)

    def system_matrix(self):
        ''' (x - T)^-1 b as a nested list of rational functions. '''
        field = self.field
        return [[RationalFunction.pole(self.b[i, j], t, field=field) for j in range(self.size)]
                for i, t in enumerate(self.T)]


def okubo_second_derivative(ok: OkuboSystem):
    ''' (x - T)^-1 (b - 1) (x - T)^-1 b, the matrix with Y'' = it Y. '''
    inverse = [[RationalFunction.pole(1, t, field=ok.field) if i == j else RationalFunction.constant(0, ok.field)
                for j in range(ok.size)] for i, t in enumerate(ok.T)]
    shifted = _rf_from_matrix(ok.b - Matrix.identity(ok.size, ok.field))
    return _rf_matmul(_rf_matmul(inverse, shifted), ok.system_matrix())


def okubo_of_convolution(system: FuchsianSystem, mu) -> OkuboSystem:
    ''' The convolution c_mu written as (x - T) Y' = b Y. '''
    mu = Fraction(mu)
    T = tuple(t for t in system.points for _ in range(system.n))
    b = Matrix.block(_stacked_rows(system, mu), system.field)
    ok = OkuboSystem(T, b)
    assert ok.system_matrix() == conv_add(system, mu).system_matrix(), "Okubo form differs from c_mu"
    return ok


@dataclass(frozen=True)
class LameEquation:
    ''' p(x) y'' + p'(x)/2 y' - (n(n+1) x + B) y = 0 with p = 4 (x - t_1)(x - t_2)(x - t_3). '''
    n_index: Fraction
    B: Fraction
    roots: tuple

    def __post_init__(self):
        roots = tuple(Fraction(t) for t in self.roots)
        if len(roots) != 3:
            raise PreconditionError("a Lame equation needs three roots, got {}".format(len(roots)))
        if len(set(roots)) != 3:
            raise PreconditionError("coincident roots {}".format(roots))
        object.__setattr__(self, 'n_index', Fraction(self.n_index))
        object.__setattr__(self, 'B', Fraction(self.B))
        object.__setattr__(self, 'roots', roots)

    @property
    def casimir(self) -> Fraction:
        return self.n_index * (self.n_index + 1)

    def p(self) -> Polynomial:
        return Polynomial.from_roots(self.roots) * 4

    def l1(self) -> Fraction:
        t1, t2, t3 = self.roots
        return (t2 * self.casimir + self.B) / (4 * (t2 - t3))

    def l2(self) -> Fraction:
        return self.casimir / 4 - self.l1()


def lame_system(equation: LameEquation) -> FuchsianSystem:
    l1, l2 = equation.l1(), equation.l2()
    t1, t2, t3 = equation.roots
    assert l2 == -(t3 * equation.casimir + equation.B) / (4 * (t2 - t3))
    half = Fraction(1, 2)
    residues = (
        Matrix.from_rows([[0, 1], [0, half]], QQ),
        Matrix.from_rows([[0, 0], [l1, -half]], QQ),
        Matrix.from_rows([[0, 0], [l2, -half]], QQ),
    )
    return FuchsianSystem(equation.roots, residues, QQ)


def lame_companion(equation: LameEquation):
    ''' First-order system (y, y')' = A (y, y') of the Lame operator. '''
    p = RationalFunction(equation.p())
    q = RationalFunction(Polynomial((equation.B, equation.casimir))) / p
    zero, one = RationalFunction.constant(0), RationalFunction.constant(1)
    return [[zero, one], [q, -p.derivative() / (p * 2)]]


def lame_gauge_residues(equation: LameEquation) -> bool:
    ''' Z = diag(1, x - t_1) Y turns the companion system into the residue form of lame_system. '''
    a = lame_companion(equation)
    shift = RationalFunction(Polynomial((-equation.roots[0], 1)))
    zero, one = RationalFunction.constant(0), RationalFunction.constant(1)
    gauge = [[one, zero], [zero, shift]]
    gauge_inverse = [[one, zero], [zero, one / shift]]
    gauge_derivative = [[zero, zero], [zero, one]]
    transformed = _rf_add(_rf_matmul(_rf_matmul(gauge, a), gauge_inverse), _rf_matmul(gauge_derivative, gauge_inverse))
    return transformed == lame_system(equation).system_matrix()


def lame_gauge_matrix(equation: LameEquation, r: int) -> Matrix:
    ''' d = diag(B_1, B_2, B_3, 1, ..., 1) on the 2r-dimensional convolution space. '''
    l1, l2 = equation.l1(), equation.l2()
    blocks = [
        Matrix.from_rows([[1, -2], [0, 1]], QQ),
        Matrix.from_rows([[1, 0], [-2 * l1, 1]], QQ),
        Matrix.from_rows([[1, 0], [-2 * l2, 1]], QQ),
    ] + [Matrix.identity(2, QQ)] * (r - 3)
    return Matrix.block_diagonal(blocks, QQ)


def _lame_block_formula(equation: LameEquation, residues) -> Matrix:
    l1, l2 = equation.l1(), equation.l2()
    row_factors = [[(0, 1)], [(-2 * l1, 1)], [(-2 * l2, 1)]] + [[(1, 0), (0, 1)]] * (len(residues) - 3)
    col_factors = [[(2, 1)], [(0, 1)], [(0, 1)]] + [[(1, 0), (0, 1)]] * (len(residues) - 3)
    rows = []
    for rho_list in row_factors:
        for rho in rho_list:
            row = []
            for a, gamma_list in zip(residues, col_factors):
                for gamma in gamma_list:
                    row.append(sum(rho[i] * a[i, j] * gamma[j] for i in range(2) for j in range(2)))
            rows.append(row)
    return Matrix.from_rows(rows, QQ)


def lame_okubo(equation: LameEquation, extra_points=(), extra_residues=(), mu=0) -> OkuboSystem:
    ''' The Okubo system (x - T) Y' = (c + mu) Y of mc_mu of the Lame system extended by extra residues. '''
    mu = Fraction(mu)
    extra_points = tuple(Fraction(t) for t in extra_points)
    extra_residues = tuple(a.with_field(QQ) for a in extra_residues)
    if len(extra_points) != len(extra_residues):
        raise PreconditionError("{} extra points but {} extra residues".format(len(extra_points), len(extra_residues)))
    if mu.denominator == 1:
        raise PreconditionError("hypothesis violated: mu = {} is an integer".format(mu))
    for index, a in enumerate(extra_residues):
        if a.shape != (2, 2) or not a.det():
            raise PreconditionError("hypothesis violated: residue a_{} does not have rank 2".format(index + 4))
    lame = lame_system(equation)
    system = FuchsianSystem(lame.points + extra_points, lame.residues + extra_residues, QQ)
    one = Matrix.identity(2, QQ)
    if not (system.residue_sum() + one * mu).det():
        raise PreconditionError("hypothesis violated: -mu = {} is an eigenvalue of a_1 + ... + a_r".format(-mu))

    b = okubo_of_convolution(system, 0).b
    d = lame_gauge_matrix(equation, system.r)
    c = d @ b @ d.inverse()
    keep = [i for i in range(c.rows) if i not in (0, 2, 4)]
    reduced = c.submatrix(keep, keep)
    assert reduced == _lame_block_formula(equation, system.residues), "gauge and block formula disagree"
    T = system.points[:3] + tuple(t for t in extra_points for _ in range(2))
    return OkuboSystem(T, reduced + Matrix.identity(reduced.rows, QQ) * mu)
