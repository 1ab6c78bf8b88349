"""
Numerical monodromy of Fuchsian systems and the check that middle convolution
commutes with taking monodromy.

Fundamental matrices are seeded as the identity at the base point and act
on the right: continuing F along a loop gives F * Mon(loop), so following
alpha and then beta has monodromy Mon(beta) @ Mon(alpha).
"""
from __future__ import annotations

import cmath
import dataclasses
import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from midconv.errors import IntegrationError, PreconditionError
from midconv.fuchsian import FuchsianSystem, mc_add
from midconv.linalg import Matrix
from midconv.mult_conv import apply_braid_word, invert_word, pure_braid_word

__license__ = "MIT"

MARGIN_SAMPLES = 257
MIN_MARGIN = 1e-6
PRODUCT_TOL = 1e-8
ABEL_TOL = 1e-6


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def point(self, s):
        return self.start + s * (self.end - self.start)

    def velocity(self, s):
        return self.end - self.start


@dataclass(frozen=True)
class Arc:
    ''' center + radius * exp(i (theta + s * sweep)) for s in [0, 1]. '''
    center: complex
    radius: float
    theta: float
    sweep: float

    def point(self, s):
        return self.center + self.radius * np.exp(1j * (self.theta + s * self.sweep))

    def velocity(self, s):
        return 1j * self.sweep * self.radius * np.exp(1j * (self.theta + s * self.sweep))


@dataclass(frozen=True)
class LoopConfig:
    base_point: complex = None
    ordering: tuple = None
    radius_factor: float = 0.4
    tol: float = 1e-10

    def __post_init__(self):
        if not 0 < self.radius_factor <= 1:
            raise PreconditionError("radius factor must lie in (0, 1], got {}".format(self.radius_factor))
        if self.tol <= 0:
            raise PreconditionError("tolerance must be positive, got {}".format(self.tol))

    def order_for(self, points) -> tuple:
        if self.ordering is not None:
            if sorted(self.ordering) != list(range(len(points))):
                raise PreconditionError("ordering {} is not a permutation of {} points".format(
                    self.ordering, len(points)))
            return tuple(self.ordering)
        return tuple(sorted(range(len(points)), key=lambda i: (complex(points[i]).real, complex(points[i]).imag)))

    def center(self, points) -> complex:
        reals = [complex(t).real for t in points]
        return complex((min(reals) + max(reals)) / 2, 0)

    def outer_radius(self, points) -> float:
        center = self.center(points)
        return 1 + max(abs(complex(t) - center) for t in points)

    def base_for(self, points) -> complex:
        if self.base_point is not None:
            return complex(self.base_point)
        return self.center(points) - 1j * self.outer_radius(points)

    def radii(self, points) -> list:
        values = [complex(t) for t in points]
        if len(values) == 1:
            return [self.radius_factor]
        return [self.radius_factor * min(abs(t - s) for s in values if s != t) for t in values]


def loop_segments(t: complex, radius: float, base: complex) -> list:
    ''' Out to t - i radius, once around t counterclockwise, and back. '''
    foot = t - 1j * radius
    return [Line(base, foot), Arc(t, radius, -np.pi / 2, 2 * np.pi), Line(foot, base)]


def infinity_segments(cfg: LoopConfig, points) -> list:
    ''' Clockwise circle through the base point enclosing every singular point. '''
    base = cfg.base_for(points)
    center = cfg.center(points)
    return [Arc(center, abs(base - center), cmath.phase(base - center), -2 * np.pi)]


def _numeric_residues(system: FuchsianSystem):
    return [complex(t) for t in system.points], [a.to_numpy() for a in system.residues]


def _check_margin(segment, points):
    samples = segment.point(np.linspace(0.0, 1.0, MARGIN_SAMPLES))
    for index, t in enumerate(points):
        margin = np.min(np.abs(samples - t))
        if margin < MIN_MARGIN:
            raise IntegrationError("path passes within {:.3g} of singular point t_{}".format(margin, index + 1))


def integrate_along(system: FuchsianSystem, path, y0: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    ''' Continue the fundamental matrix y0 along a list of Line/Arc segments. '''
    points, residues = _numeric_residues(system)
    n = system.n
    y = np.asarray(y0, dtype=complex).reshape(n, n)
    for segment in path:
        _check_margin(segment, points)

        def rhs(s, flat, segment=segment):
            x = segment.point(s)
            a = sum(res / (x - t) for t, res in zip(points, residues))
            return ((a @ flat.reshape(n, n)) * segment.velocity(s)).ravel()

        solution = solve_ivp(rhs, (0.0, 1.0), y.ravel(), method='DOP853', rtol=tol, atol=tol)
        if solution.status != 0:
            raise IntegrationError("integration failed on {}: {}".format(segment, solution.message))
        y = solution.y[:, -1].reshape(n, n)
    return y


@dataclass
class ComplexTuple:
    matrices: tuple
    config: LoopConfig
    infinity: np.ndarray = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def r(self) -> int:
        return len(self.matrices)

    def product(self) -> np.ndarray:
        result = np.eye(self.n, dtype=complex)
        for m in self.matrices:
            result = result @ m
        return result


def monodromy_tuple(system: FuchsianSystem, cfg: LoopConfig = None) -> ComplexTuple:
    ''' Mon(gamma_i) for the singular points in loop order, plus the loop around infinity. '''
    cfg = cfg or LoopConfig()
    points = [complex(t) for t in system.points]
    base = cfg.base_for(points)
    if min(abs(base - t) for t in points) < MIN_MARGIN:
        raise PreconditionError("base point {} coincides with a singular point".format(base))
    radii = cfg.radii(points)
    identity = np.eye(system.n, dtype=complex)
    matrices = []
    for i in cfg.order_for(points):
        matrices.append(integrate_along(system, loop_segments(points[i], radii[i], base), identity, cfg.tol))
    infinity = integrate_along(system, infinity_segments(cfg, points), identity, cfg.tol)
    result = ComplexTuple(tuple(matrices), cfg, infinity)

    product_residual = float(np.linalg.norm(result.product() @ infinity - identity))
    abel = [abs(np.linalg.det(m) - cmath.exp(2j * np.pi * complex(system.residues[i].trace())))
            for m, i in zip(matrices, cfg.order_for(points))]
    result.diagnostics = {
        'product_residual': product_residual,
        'abel_residual': float(max(abel, default=0.0)),
        'condition': [float(np.linalg.cond(m)) for m in matrices],
    }
    if product_residual > PRODUCT_TOL:
        logging.warning("Product relation off by {:.3g}".format(product_residual))
    if result.diagnostics['abel_residual'] > ABEL_TOL:
        logging.warning("det(Mon) differs from exp(2 pi i tr a) by {:.3g}".format(
            result.diagnostics['abel_residual']))
    logging.debug("Monodromy of n={} r={}: product residual {:.3g}".format(system.n, system.r, product_residual))
    return result


def numeric_rank(m: np.ndarray, rank_tol: float = 1e-8) -> int:
    ''' Singular values above rank_tol * max(|m|, 1). '''
    if m.size == 0:
        return 0
    sigma = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sigma > rank_tol * max(sigma[0], 1.0)))


def _null_space(m: np.ndarray, rank_tol: float) -> np.ndarray:
    ''' Orthonormal columns spanning the numerical kernel. '''
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=complex)
    _, _, vh = np.linalg.svd(m)
    rank = numeric_rank(m, rank_tol)
    return vh[rank:].conj().T


def _orthonormal_span(vectors: np.ndarray, rank_tol: float) -> np.ndarray:
    if vectors.shape[1] == 0:
        return vectors
    u, sigma, _ = np.linalg.svd(vectors, full_matrices=False)
    rank = int(np.sum(sigma > rank_tol * max(sigma[0], 1.0)))
    return u[:, :rank]


def conv_numeric(matrices, lam: complex) -> list:
    ''' C_lambda in complex arithmetic, with the block rows of the exact construction. '''
    n, r = matrices[0].shape[0], len(matrices)
    one = np.eye(n, dtype=complex)
    blocks = []
    for k in range(r):
        b = np.eye(n * r, dtype=complex)
        for j, a in enumerate(matrices):
            if j < k:
                entry = lam * (a - one)
            elif j == k:
                entry = lam * a
            else:
                entry = a - one
            b[k * n:(k + 1) * n, j * n:(j + 1) * n] = entry
        blocks.append(b)
    return blocks


def mc_numeric(matrices, lam: complex, rank_tol: float = 1e-8):
    ''' MC_lambda for lambda != 1: (quotient matrices, dim K, dim L) with SVD kernels. '''
    matrices = [np.asarray(m, dtype=complex) for m in matrices]
    n, r = matrices[0].shape[0], len(matrices)
    one = np.eye(n, dtype=complex)
    blocks = conv_numeric(matrices, lam)

    k_vectors = []
    for k, a in enumerate(matrices):
        kernel = _null_space(a - one, rank_tol)
        padded = np.zeros((n * r, kernel.shape[1]), dtype=complex)
        padded[k * n:(k + 1) * n] = kernel
        k_vectors.append(padded)
    k_space = np.hstack(k_vectors) if k_vectors else np.zeros((n * r, 0), dtype=complex)

    product = one
    for a in matrices:
        product = product @ a
    l_columns = []
    for v in _null_space(lam * product - one, rank_tol).T:
        w, parts = v, [v]
        for a in reversed(matrices[1:]):
            w = a @ w
            parts.insert(0, w)
        l_columns.append(np.concatenate(parts))
    l_space = np.array(l_columns, dtype=complex).T if l_columns else np.zeros((n * r, 0), dtype=complex)

    w_basis = _orthonormal_span(np.hstack([k_space, l_space]), rank_tol)
    complement = _null_space(w_basis.conj().T, rank_tol) if w_basis.shape[1] else np.eye(n * r, dtype=complex)
    quotient = [complement.conj().T @ b @ complement for b in blocks]
    k_dim = _orthonormal_span(k_space, rank_tol).shape[1]
    l_dim = _orthonormal_span(l_space, rank_tol).shape[1]
    return quotient, k_dim, l_dim


def numeric_dim_formula(matrices, lam: complex, rank_tol: float = 1e-8) -> int:
    n = matrices[0].shape[0]
    one = np.eye(n, dtype=complex)
    product = one
    for a in matrices:
        product = product @ a
    return sum(numeric_rank(a - one, rank_tol) for a in matrices) - (n - numeric_rank(lam * product - one, rank_tol))


def algebra_dimension_numeric(matrices, rank_tol: float = 1e-8) -> int:
    ''' Dimension of the algebra generated by the matrices, by closing a span under products. '''
    n = matrices[0].shape[0]
    basis = _orthonormal_span(np.eye(n, dtype=complex).reshape(-1, 1), rank_tol)
    frontier = [np.eye(n, dtype=complex)]
    while frontier:
        grown = []
        for word in frontier:
            for m in matrices:
                candidate = (word @ m).reshape(-1, 1)
                extended = _orthonormal_span(np.hstack([basis, candidate]), rank_tol)
                if extended.shape[1] > basis.shape[1]:
                    basis = extended
                    grown.append(word @ m)
        frontier = grown
        if basis.shape[1] == n * n:
            break
    return basis.shape[1]


def numeric_irreducible(matrices, rank_tol: float = 1e-8) -> bool:
    n = matrices[0].shape[0]
    return algebra_dimension_numeric(matrices, rank_tol) == n * n


@dataclass
class ConjugacyFit:
    success: bool
    residual: float
    S: np.ndarray = None
    condition: float = float('inf')
    gap: float = None


def numeric_conjugacy(first, second, tol: float = 1e-6) -> ConjugacyFit:
    ''' Find S with first_i S = S second_i for all i from the smallest singular vector. '''
    first = [np.asarray(m, dtype=complex) for m in first]
    second = [np.asarray(m, dtype=complex) for m in second]
    if len(first) != len(second) or first[0].shape != second[0].shape:
        raise PreconditionError("tuples differ in shape: {} x {} vs {} x {}".format(
            len(first), first[0].shape, len(second), second[0].shape))
    n = first[0].shape[0]
    if n == 0:
        return ConjugacyFit(True, 0.0, np.zeros((0, 0), dtype=complex), 1.0)
    one = np.eye(n, dtype=complex)
    # column-major vec: vec(T1 S - S T2) = (1 (x) T1 - T2^T (x) 1) vec(S)
    stacked = np.vstack([np.kron(one, t1) - np.kron(t2.T, one) for t1, t2 in zip(first, second)])
    _, sigma, vh = np.linalg.svd(stacked)
    s = vh[-1].conj().reshape(n, n, order='F')
    gap = float(sigma[-2]) if len(sigma) > 1 else None
    condition = float(np.linalg.cond(s))
    if not np.isfinite(condition) or condition > 1e15:
        return ConjugacyFit(False, float('inf'), s, condition, gap)
    inverse = np.linalg.inv(s)
    residual = float(max(np.linalg.norm(inverse @ t1 @ s - t2) for t1, t2 in zip(first, second)))
    return ConjugacyFit(residual < tol and condition < 1e8, residual, s, condition, gap)


def braid_adjustments(r: int):
    ''' The empty word, each pure braid generator and its inverse, then their pairs. '''
    generators = []
    for i, j in itertools.combinations(range(1, r + 1), 2):
        word = pure_braid_word(i, j)
        generators.extend([word, invert_word(word)])
    yield []
    yield from generators
    for first, second in itertools.product(generators, repeat=2):
        yield first + second


@dataclass
class RHReport:
    mu: Fraction
    n: int
    r: int
    hypotheses: dict = field(default_factory=dict)
    exact_dim: int = 0
    numeric_dim: int = 0
    formula_dim: int = 0
    k_dim: int = 0
    l_dim: int = 0
    residual: float = float('inf')
    condition: float = float('inf')
    gap: float = None
    braid_word: list = None
    diagnostics: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def hypotheses_ok(self) -> bool:
        flags = self.hypotheses
        return all(flags.get('residues', [])) and all(flags.get(k, True) for k in ('sum', 'irreducible', 'nontrivial'))

    @property
    def dims_agree(self) -> bool:
        return self.exact_dim == self.numeric_dim == self.formula_dim

    @property
    def success(self) -> bool:
        return self.hypotheses_ok and self.dims_agree and self.braid_word is not None

    def as_dict(self) -> dict:
        return {
            'mu': str(self.mu),
            'n': self.n,
            'r': self.r,
            'hypotheses': self.hypotheses,
            'hypotheses_ok': self.hypotheses_ok,
            'dim': {'mc_add': self.exact_dim, 'mc_numeric': self.numeric_dim, 'formula': self.formula_dim,
                    'k': self.k_dim, 'l': self.l_dim},
            'residual': self.residual,
            'condition': self.condition,
            'gap': self.gap,
            'braid_word': self.braid_word,
            'success': self.success,
            'diagnostics': self.diagnostics,
            'seconds': self.seconds,
        }


def _check_hypotheses(system: FuchsianSystem, mu: Fraction, m: ComplexTuple, lam: complex, rank_tol: float):
    one = np.eye(system.n, dtype=complex)
    residues = [numeric_rank(a - one, rank_tol) == exact.rank() for a, exact in zip(m.matrices, system.residues)]
    total = system.residue_sum() + Matrix.identity(system.n, system.field) * mu
    flags = {
        'residues': residues,
        'sum': numeric_rank(lam * m.product() - one, rank_tol) == total.rank(),
        'irreducible': numeric_irreducible(m.matrices, rank_tol),
        'nontrivial': sum(1 for a in m.matrices if numeric_rank(a - one, rank_tol) > 0) >= 2,
    }
    for name, value in flags.items():
        if name == 'residues':
            for index, ok in enumerate(value):
                if not ok:
                    logging.warning("Hypothesis violated: rk(a_{0}) != rk(A_{0} - 1)".format(index + 1))
        elif not value:
            logging.warning("Hypothesis violated: {}".format(name))
    return flags


def verify_rh(system: FuchsianSystem, mu, cfg: LoopConfig = None, tol: float = 1e-6,
              rank_tol: float = 1e-8) -> RHReport:
    '''
    Compare MC_lambda of the monodromy of the system, lambda = exp(2 pi i mu),
    with the monodromy of mc_(mu-1) of the system, up to simultaneous
    conjugation and a pure braid adjustment of length at most two.
    '''
    start = time.perf_counter()
    mu = Fraction(mu)
    if mu.denominator == 1:
        raise PreconditionError("mu = {} is an integer".format(mu))
    cfg = cfg or LoopConfig()
    system = system.permuted(cfg.order_for(system.points))
    cfg = dataclasses.replace(cfg, ordering=tuple(range(system.r)))

    monodromy = monodromy_tuple(system, cfg)
    lam = cmath.exp(2j * cmath.pi * float(mu))
    report = RHReport(mu, system.n, system.r)
    report.hypotheses = _check_hypotheses(system, mu, monodromy, lam, rank_tol)

    convolved, report.k_dim, report.l_dim = mc_numeric(monodromy.matrices, lam, rank_tol)
    report.numeric_dim = convolved[0].shape[0]
    report.formula_dim = numeric_dim_formula(monodromy.matrices, lam, rank_tol)
    mc = mc_add(system, mu - 1)[0]
    report.exact_dim = mc.n
    report.diagnostics = {'seed': monodromy.diagnostics}
    if not report.dims_agree:
        logging.error("Dimensions disagree: mc_add {}, MC numeric {}, formula {}".format(
            report.exact_dim, report.numeric_dim, report.formula_dim))
    elif mc.n == 0:
        report.residual, report.condition, report.braid_word = 0.0, 1.0, []
    else:
        target = monodromy_tuple(mc, cfg)
        report.diagnostics['convolution'] = target.diagnostics
        for word in braid_adjustments(system.r):
            adjusted = apply_braid_word(word, convolved, np.linalg.inv)
            fit = numeric_conjugacy(adjusted, target.matrices, tol)
            if fit.residual < report.residual:
                report.residual, report.condition, report.gap = fit.residual, fit.condition, fit.gap
            if fit.success:
                report.braid_word = list(word)
                report.residual, report.condition, report.gap = fit.residual, fit.condition, fit.gap
                if word:
                    logging.info("Conjugate after braid adjustment {}".format(word))
                break
        else:
            logging.warning("No conjugacy found; best residual {:.3g}".format(report.residual))
    report.seconds = time.perf_counter() - start
    logging.info("verify_rh mu={}: success={} residual={:.3g}".format(mu, report.success, report.residual))
    return report
