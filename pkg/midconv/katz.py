"""
Construction of Fuchsian systems for rigid local systems from a rank one
seed by scalar additions and middle convolutions, and the reverse Katz
reduction of multiplicative tuples.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from midconv.errors import PreconditionError
from midconv.fuchsian import FuchsianSystem, add_subspaces, mc_add, scalar_add
from midconv.linalg import Matrix, find_eigenvalues, subspace_sum
from midconv.mult_conv import MatTuple, dim_formula, irreducible_abs, mc_mult, scalar_mult

__license__ = "MIT"


@dataclass(frozen=True)
class ScalarAdd:
    delta: tuple

    def __post_init__(self):
        object.__setattr__(self, 'delta', tuple(Fraction(d) for d in self.delta))


@dataclass(frozen=True)
class MiddleConv:
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'mu', Fraction(self.mu))


@dataclass
class StepReport:
    index: int
    kind: str
    dim_before: int
    dim_after: int
    k_dim: int = 0
    l_dim: int = 0
    rigidity_index: int = 0
    rank_flags: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            'step': self.index,
            'kind': self.kind,
            'dim_before': self.dim_before,
            'dim_after': self.dim_after,
            'k_dim': self.k_dim,
            'l_dim': self.l_dim,
            'rigidity_index': self.rigidity_index,
            'rank_flags': self.rank_flags,
            'warnings': list(self.warnings),
        }


def _is_integer(value) -> bool:
    return Fraction(value).denominator == 1


def validate_seed(seed: FuchsianSystem):
    if seed.n != 1:
        raise PreconditionError("seed must be 1x1, got {}x{}".format(seed.n, seed.n))
    values = [a[0, 0] for a in seed.residues]
    try:
        values = [Fraction(v) for v in values]
    except (TypeError, ValueError):
        raise PreconditionError("seed residues must be rational")
    for index, v in enumerate(values):
        if _is_integer(v) and v != 0:
            raise PreconditionError("integer seed residue a_{} = {} must be normalized to 0".format(index + 1, v))
    if sum(1 for v in values if not _is_integer(v)) < 2:
        raise PreconditionError("seed needs at least two non-integer residues")


def _max_abs_row_sum(a: Matrix) -> float:
    return max((sum(abs(complex(a[i, j])) for j in range(a.cols)) for i in range(a.rows)), default=0.0)


def matches_monodromy_rank(a: Matrix) -> bool:
    '''
    True when a has no nonzero integer eigenvalue, so rk(a) = rk(exp(2 pi i a) - 1)
    for semisimple a. Decided by exact determinants det(a - m) for |m| up to a norm bound.
    '''
    one = Matrix.identity(a.rows, a.field)
    bound = int(math.floor(_max_abs_row_sum(a) + 1e-9))
    for m in range(1, bound + 1):
        for value in (m, -m):
            if not (a - one * value).det():
                return False
    return True


def rank_flags(system: FuchsianSystem, mu=None) -> dict:
    flags = {'residues': [matches_monodromy_rank(a) for a in system.residues]}
    if mu is not None:
        one = Matrix.identity(system.n, system.field)
        flags['sum'] = matches_monodromy_rank(system.residue_sum() + one * Fraction(mu))
    return flags


def apply_program(seed: FuchsianSystem, steps, validate: bool = True):
    ''' Fold the steps over the seed; returns (system, reports). '''
    if validate:
        validate_seed(seed)
    elif seed.n != 1:
        raise PreconditionError("seed must be 1x1, got {}x{}".format(seed.n, seed.n))
    system = seed
    reports = []
    for index, step in enumerate(steps, 1):
        before = system.n
        if isinstance(step, ScalarAdd):
            system = scalar_add(step.delta, system)
            report = StepReport(index, 'scalar-add', before, system.n, rank_flags=rank_flags(system))
        elif isinstance(step, MiddleConv):
            # mc_mu corresponds to lambda = exp(2 pi i (mu + 1))
            flags = rank_flags(system, step.mu + 1)
            system, k_space, l_space = mc_add(system, step.mu)
            report = StepReport(index, 'middle-conv', before, system.n, k_space.dim, l_space.dim,
                                rank_flags=flags)
            if not all(flags['residues']) or not flags['sum']:
                report.warnings.append("rank hypothesis not met on the exact side")
        else:
            raise PreconditionError("unknown construction step {!r}".format(step))
        if system.n == 0:
            logging.error("Step {}: dimension collapsed to 0".format(index))
            raise PreconditionError("dimension collapsed to 0 at step {}".format(index))
        report.rigidity_index = system.rigidity_index()
        logging.info("Step {} ({}): dim {} -> {}, rigidity {}".format(
            index, report.kind, before, system.n, report.rigidity_index))
        reports.append(report)
    return system, reports


def shift_grid(max_denominator: int = 12):
    ''' 0, then k/d for d = 2..max_denominator, k = 1, -1, 2, -2, ... with |k/d| < 1 in lowest terms. '''
    yield Fraction(0)
    for d in range(2, max_denominator + 1):
        for k in range(1, d):
            for signed in (k, -k):
                if math.gcd(k, d) == 1:
                    yield Fraction(signed, d)


def choose_valid_shift(system: FuchsianSystem, mu, max_denominator: int = 12) -> list:
    '''
    Greedy per-position search for shifts maximizing rk(a_i + delta_i) and then
    rk(sum(a_j + delta_j) + mu); 0 is kept unless a candidate strictly improves.
    '''
    mu = Fraction(mu)
    n = system.n
    one = Matrix.identity(n, system.field)
    delta = [Fraction(0)] * system.r
    grid = list(shift_grid(max_denominator))
    total = system.residue_sum() + one * mu
    for i, a in enumerate(system.residues):
        rest = total - one * delta[i]
        best, best_score = Fraction(0), None
        for candidate in grid:
            score = ((a + one * candidate).rank(), (rest + one * candidate).rank())
            if best_score is None or score > best_score:
                best, best_score = candidate, score
        delta[i] = best
        total = rest + one * best
    if any((a + one * d).rank() < n for a, d in zip(system.residues, delta)) or total.rank() < n:
        logging.warning("No shift on the grid gives full rank everywhere; using {}".format(
            [str(d) for d in delta]))
    return delta


@dataclass(frozen=True)
class KatzReduction:
    omega: tuple
    lam: object
    reduced: MatTuple


def katz_reduce(a: MatTuple):
    '''
    One Katz reduction step: the scalar multiplication and lambda minimizing the
    dimension of MC_lambda(M_Omega(A)). Returns None when nothing decreases it.
    '''
    if not irreducible_abs(a):
        raise PreconditionError("katz_reduce needs an absolutely irreducible tuple")
    if a.n == 1:
        return None
    local = [[value for value, _ in find_eigenvalues(m)] for m in a]
    at_infinity = [value for value, _ in find_eigenvalues(a.product().inverse())]
    best = None
    for alphas in itertools.product(*local):
        omega = [1 / alpha for alpha in alphas]
        scaled = scalar_mult(omega, a)
        scale = a.field.one
        for w in omega:
            scale = scale * w
        for alpha in at_infinity:
            lam = alpha / scale
            if lam == 1:
                continue
            dim = dim_formula(scaled, lam)
            if best is None or dim < best[0]:
                best = (dim, tuple(omega), lam, scaled)
    if best is None or best[0] >= a.n:
        logging.info("Tuple of rank {} is not reducible".format(a.n))
        return None
    dim, omega, lam, scaled = best
    logging.info("Katz reduction {} -> {} with lambda = {}".format(a.n, dim, lam))
    return KatzReduction(omega, lam, mc_mult(scaled, lam).quotient)


def check_step_dimension(system: FuchsianSystem, mu, result: FuchsianSystem) -> bool:
    ''' nr - dim(k + l) recomputed independently of mc_add. '''
    k_space, l_space = add_subspaces(system, mu)
    return result.n == system.n * system.r - subspace_sum(k_space, l_space).dim
