"""
p-curvature of Fuchsian and Okubo systems over F_p(x).

Matrices of rational functions share the scalar denominator D(x)^e with
D = prod (x - t_i) over the distinct reduced singular points, so they are
stored as integer arrays P of shape (n, n, degree + 1) holding coefficients
mod p, constant term first.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from midconv.errors import PreconditionError
from midconv.fields import CycloElem, PrimeField
from midconv.fuchsian import FuchsianSystem, OkuboSystem, mc_add, okubo_of_convolution
from midconv.linalg import Matrix
from midconv.poly import Polynomial, RationalFunction

__license__ = "MIT"


def _trim(a: np.ndarray) -> np.ndarray:
    ''' Drop trailing zero coefficients along the last axis, keeping at least one. '''
    nonzero = np.nonzero(a.reshape(-1, a.shape[-1]).any(axis=0))[0]
    length = nonzero[-1] + 1 if nonzero.size else 1
    return a[..., :length]


def _poly_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.convolve(a, b) % p


def _poly_from_roots(roots, p: int) -> np.ndarray:
    result = np.array([1], dtype=np.int64)
    for t in roots:
        result = _poly_mul(result, np.array([-t % p, 1], dtype=np.int64), p)
    return result


def _pad(a: np.ndarray, length: int) -> np.ndarray:
    if a.shape[-1] >= length:
        return a
    width = [(0, 0)] * (a.ndim - 1) + [(0, length - a.shape[-1])]
    return np.pad(a, width)


def _add(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    length = max(a.shape[-1], b.shape[-1])
    return (_pad(a, length) + _pad(b, length)) % p


def _mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    ''' Product of polynomial matrices of shapes (n, m, L1) and (m, k, L2). '''
    n, k = a.shape[0], b.shape[1]
    l1, l2 = a.shape[2], b.shape[2]
    out = np.zeros((n, k, l1 + l2 - 1), dtype=np.int64)
    slices = b.transpose(2, 0, 1)
    for d in range(l1):
        coeff = a[:, :, d]
        if coeff.any():
            out[:, :, d:d + l2] += (coeff @ slices).transpose(1, 2, 0)
            out %= p
    return _trim(out)


def _scale(a: np.ndarray, f: np.ndarray, p: int) -> np.ndarray:
    ''' Multiply every entry of a polynomial matrix by the polynomial f. '''
    out = np.zeros(a.shape[:2] + (a.shape[2] + len(f) - 1,), dtype=np.int64)
    for d, c in enumerate(f):
        if c:
            out[:, :, d:d + a.shape[2]] += a * int(c)
            out %= p
    return out


def _derivative(a: np.ndarray, p: int) -> np.ndarray:
    if a.shape[-1] == 1:
        return np.zeros_like(a)
    return a[..., 1:] * np.arange(1, a.shape[-1], dtype=np.int64) % p


@dataclass(frozen=True, eq=False)
class FpRatFunMatrix:
    ''' P(x) / D(x)^e over F_p. '''
    p: int
    P: np.ndarray
    e: int
    points: tuple

    @property
    def size(self) -> int:
        return self.P.shape[0]

    def denominator(self) -> np.ndarray:
        return _poly_from_roots(self.points, self.p)

    def is_zero(self) -> bool:
        return not self.P.any()

    def entry(self, i: int, j: int) -> RationalFunction:
        field = PrimeField(self.p)
        den = Polynomial(self.denominator().tolist(), field) ** self.e
        return RationalFunction(Polynomial(self.P[i, j].tolist(), field), den)

    def conjugated(self, s: Matrix) -> FpRatFunMatrix:
        ''' S^-1 M S for a constant matrix S with good reduction. '''
        s_bar = reduce_matrix(s, self.p)[:, :, None]
        s_inv = reduce_matrix(s.inverse(), self.p)[:, :, None]
        return FpRatFunMatrix(self.p, _mat_mul(_mat_mul(s_inv, self.P, self.p), s_bar, self.p), self.e, self.points)

    def __eq__(self, other):
        if not isinstance(other, FpRatFunMatrix):
            return NotImplemented
        if self.p != other.p or set(self.points) != set(other.points) or self.size != other.size:
            return False
        d = self.denominator()
        left, right = self.P, other.P
        for _ in range(other.e - self.e):
            left = _scale(left, d, self.p)
        for _ in range(self.e - other.e):
            right = _scale(right, d, self.p)
        left, right = _trim(left), _trim(right)
        return left.shape == right.shape and bool((left == right).all())

    def __repr__(self):
        return "FpRatFunMatrix(p={}, e={}, degree={}, zero={})".format(
            self.p, self.e, self.P.shape[2] - 1, self.is_zero())


def reduce_matrix(m: Matrix, p: int) -> np.ndarray:
    field = PrimeField(p)
    return np.array([field.reduce(x) for x in m.entries], dtype=np.int64).reshape(m.rows, m.cols)


def _reduction_data(system):
    ''' Distinct singular points and the matrices whose entries must reduce. '''
    if isinstance(system, OkuboSystem):
        return system.distinct_points(), [system.b]
    return system.points, list(system.residues)


def good_prime(system, mu, p: int):
    ''' (good, reason): whether the system and mu have good reduction at p. '''
    if not sympy.isprime(p):
        return False, "{} is not prime".format(p)
    points, matrices = _reduction_data(system)
    for index, t in enumerate(points):
        if Fraction(t).denominator % p == 0:
            return False, "p divides the denominator of t_{}".format(index + 1)
    for m in matrices:
        for x in m.entries:
            if isinstance(x, CycloElem):
                if not x.is_rational:
                    return False, "entries are not rational"
                x = x.to_rational()
            if Fraction(x).denominator % p == 0:
                return False, "p divides a denominator of the residues"
    field = PrimeField(p)
    if len({field.reduce(t) for t in points}) != len(points):
        return False, "singular points collide mod p"
    if mu is not None:
        mu = Fraction(mu)
        if mu.denominator % p == 0:
            return False, "p divides the denominator of mu"
        if mu and (mu.numerator * mu.denominator) % p == 0:
            return False, "p divides n1*n2 for mu = n1/n2"
    return True, "good"


def _require_good(system, p: int):
    good, reason = good_prime(system, None, p)
    if not good:
        raise PreconditionError("bad prime {}: {}".format(p, reason))


def fuchsian_fp(system: FuchsianSystem, p: int) -> FpRatFunMatrix:
    ''' sum a_i/(x - t_i) reduced mod p. '''
    _require_good(system, p)
    field = PrimeField(p)
    points = tuple(field.reduce(t) for t in system.points)
    n = system.n
    total = np.zeros((n, n, max(len(points), 1)), dtype=np.int64)
    for i, a in enumerate(system.residues):
        cofactor = _poly_from_roots(points[:i] + points[i + 1:], p)
        total = _add(total, _scale(reduce_matrix(a, p)[:, :, None], cofactor, p), p)
    return FpRatFunMatrix(p, _trim(total), 1, points)


def _okubo_rows(ok: OkuboSystem, p: int):
    ''' Distinct reduced points and D/(x - T_i) for every coordinate. '''
    field = PrimeField(p)
    points = tuple(field.reduce(t) for t in ok.distinct_points())
    cofactors = []
    for t in ok.T:
        t_bar = field.reduce(t)
        cofactors.append(_poly_from_roots([s for s in points if s != t_bar], p))
    return points, cofactors


def _left_diagonal(cofactors, m: np.ndarray, p: int) -> np.ndarray:
    ''' diag(cofactors) times a constant matrix. '''
    length = max((len(c) for c in cofactors), default=1)
    out = np.zeros(m.shape + (length,), dtype=np.int64)
    for i, c in enumerate(cofactors):
        out[i, :, :len(c)] = np.outer(m[i], c) % p
    return out


def okubo_fp(ok: OkuboSystem, p: int) -> FpRatFunMatrix:
    ''' (x - T)^-1 b reduced mod p. '''
    _require_good(ok, p)
    points, cofactors = _okubo_rows(ok, p)
    return FpRatFunMatrix(p, _trim(_left_diagonal(cofactors, reduce_matrix(ok.b, p), p)), 1, points)


def deriv_recursion(a: FpRatFunMatrix, n: int) -> FpRatFunMatrix:
    ''' The matrix of Y^(n) = a(n) Y, from a(1) = a and a(k+1) = a(k)' + a(k) a. '''
    if n < 1:
        raise PreconditionError("derivative order must be positive, got {}".format(n))
    if a.e != 1:
        raise PreconditionError("recursion starts from a system matrix with denominator exponent 1")
    p = a.p
    d = a.denominator()
    d_prime = _derivative(d, p)
    current = a.P
    for k in range(1, n):
        # P_{k+1} = P_k' D - k D' P_k + P_k P_1 over D^{k+1}
        term = _scale(_derivative(current, p), d, p)
        term = _add(term, _scale(current, (-k * d_prime) % p, p), p)
        term = _add(term, _mat_mul(current, a.P, p), p)
        current = _trim(term)
    return FpRatFunMatrix(p, current, n, a.points)


def p_curv_fuchsian(system: FuchsianSystem, p: int) -> FpRatFunMatrix:
    return deriv_recursion(fuchsian_fp(system, p), p)


def p_curv_okubo(ok: OkuboSystem, p: int) -> FpRatFunMatrix:
    ''' Closed product (x-T)^-1 (b - p + 1) ... (x-T)^-1 (b - 1) (x-T)^-1 b over F_p. '''
    _require_good(ok, p)
    points, cofactors = _okubo_rows(ok, p)
    b = reduce_matrix(ok.b, p)
    identity = np.eye(ok.size, dtype=np.int64)
    result = _left_diagonal(cofactors, b, p)
    for shift in range(1, p):
        factor = _left_diagonal(cofactors, (b - shift * identity) % p, p)
        result = _mat_mul(factor, result, p)
    return FpRatFunMatrix(p, _trim(result), p, points)


def nilpotence_index(m: FpRatFunMatrix):
    ''' Smallest k <= size with M^k = 0, or None when M is not nilpotent. '''
    if m.is_zero():
        return 1
    power = m.P
    for k in range(2, m.size + 1):
        power = _mat_mul(power, m.P, m.p)
        if not power.any():
            return k
    return None


@dataclass
class PCurvReport:
    prime: int
    good: bool
    reason: str
    index: int = None
    seconds: float = 0.0
    conv_index: int = None
    mc_index: int = None
    bound: int = None
    bound_holds: bool = None

    @property
    def nilpotent(self) -> bool:
        return self.index is not None

    def as_dict(self) -> dict:
        result = {
            'prime': self.prime,
            'good': self.good,
            'reason': self.reason,
        }
        if self.good:
            result['index'] = self.index if self.nilpotent else 'not-nilpotent'
            result['seconds'] = float("{:.6g}".format(self.seconds))
        if self.bound is not None:
            result.update({
                'conv_index': self.conv_index,
                'mc_index': self.mc_index,
                'bound': self.bound,
                'bound_holds': self.bound_holds,
            })
        return result


def convolution_bound(mu, k):
    ''' k+1 for mu = -1, k+2 for non-integral mu, otherwise no bound. '''
    mu = Fraction(mu)
    if k is None:
        return None
    if mu == -1:
        return k + 1
    if mu.denominator != 1:
        return k + 2
    return None


def _check_convolution(conv: OkuboSystem, mc: FuchsianSystem, mu: Fraction, p: int, report: PCurvReport):
    report.conv_index = nilpotence_index(p_curv_okubo(conv, p))
    measured = [report.conv_index]
    if mc.n == 0:
        report.mc_index = 1
    elif good_prime(mc, mu, p)[0]:
        report.mc_index = nilpotence_index(p_curv_fuchsian(mc, p))
        measured.append(report.mc_index)
    else:
        logging.debug("p={}: mc_mu has bad reduction, only c_mu is measured".format(p))
    report.bound = convolution_bound(mu, report.index)
    if report.bound is None:
        return
    report.bound_holds = all(index is not None and index <= report.bound for index in measured)
    if not report.bound_holds:
        logging.warning("p={}: convolution index {} / {} exceeds bound {}".format(
            p, report.conv_index, report.mc_index, report.bound))


def scan(system, p_max: int, mu=None) -> list:
    '''
    p-curvature nilpotence index for every prime up to p_max. For a Fuchsian
    system with mu given, the convolution c_mu and mc_mu are scanned as well
    and checked against the bound in terms of the system's own index.
    '''
    if p_max < 2:
        raise PreconditionError("p_max must be at least 2, got {}".format(p_max))
    mu = None if mu is None else Fraction(mu)
    convolving = mu is not None and isinstance(system, FuchsianSystem)
    if convolving:
        conv, mc = okubo_of_convolution(system, mu), mc_add(system, mu)[0]
    reports = []
    for p in sympy.primerange(2, p_max + 1):
        start = time.perf_counter()
        good, reason = good_prime(system, mu, p)
        if not good:
            logging.debug("p={} skipped: {}".format(p, reason))
            reports.append(PCurvReport(p, False, reason))
            continue
        if isinstance(system, OkuboSystem):
            m = p_curv_okubo(system, p)
        else:
            m = p_curv_fuchsian(system, p)
        report = PCurvReport(p, True, reason, nilpotence_index(m))
        if not report.nilpotent:
            logging.warning("p={}: p-curvature is not nilpotent".format(p))
        if convolving:
            _check_convolution(conv, mc, mu, p, report)
        report.seconds = time.perf_counter() - start
        logging.debug("p={} index={} ({:.3f}s)".format(p, report.index, report.seconds))
        reports.append(report)
    return reports
