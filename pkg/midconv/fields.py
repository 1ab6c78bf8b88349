"""
Exact scalars.

Rationals are plain ``fractions.Fraction`` values. Elements of the cyclotomic
field Q(z_N) are stored in the power basis 1, z_N, ..., z_N^(phi(N)-1) and
reduced modulo the N-th cyclotomic polynomial, so equality is coefficient
comparison. Prime field elements are only needed for reductions mod p.
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from midconv.errors import PreconditionError

__license__ = "MIT"


@functools.lru_cache(maxsize=None)
def cyclotomic_modulus(order: int) -> tuple[int, ...]:
    ''' Coefficients of the order-th cyclotomic polynomial, constant term first. '''
    x = sympy.Symbol('x')
    coeffs = sympy.Poly(sympy.cyclotomic_poly(order, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@functools.lru_cache(maxsize=None)
def _units(order: int) -> tuple[int, ...]:
    return tuple(j for j in range(1, order + 1) if math.gcd(j, order) == 1)


@functools.lru_cache(maxsize=None)
def _mean_trace_of_power(m: int) -> Fraction:
    ''' Tr(z_N^k) / phi(N) = mobius(m) / phi(m) for m = N / gcd(N, k). '''
    exponents = sympy.factorint(m).values()
    if any(e > 1 for e in exponents):
        return Fraction(0)
    return Fraction((-1) ** len(exponents), int(sympy.totient(m)))


def _reduce(coeffs: list, order: int) -> tuple[Fraction, ...]:
    modulus = cyclotomic_modulus(order)
    d = len(modulus) - 1
    c = [Fraction(v) for v in coeffs]
    for k in range(len(c) - 1, d - 1, -1):
        lead = c[k]
        if lead:
            # x^d = -(m_0 + m_1 x + ... + m_{d-1} x^{d-1})
            for j in range(d):
                if modulus[j]:
                    c[k - d + j] -= lead * modulus[j]
            c[k] = Fraction(0)
    c = c[:d]
    c.extend([Fraction(0)] * (d - len(c)))
    return tuple(c)


@dataclass(frozen=True, eq=False)
class CycloElem:
    order: int
    coeffs: tuple

    @classmethod
    def from_powers(cls, order: int, powers: dict) -> CycloElem:
        ''' Build sum(c * z_order^k) from a mapping k -> c. '''
        c = [Fraction(0)] * order
        for k, v in powers.items():
            c[k % order] += v
        return cls(order, _reduce(c, order))

    @classmethod
    def rational(cls, order: int, value) -> CycloElem:
        d = len(cyclotomic_modulus(order)) - 1
        return cls(order, (Fraction(value),) + (Fraction(0),) * (d - 1))

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational:
            raise PreconditionError("{} is not rational".format(self))
        return self.coeffs[0]

    def lift(self, order: int) -> CycloElem:
        if order == self.order:
            return self
        if order % self.order:
            raise PreconditionError("cannot embed Q(z{}) into Q(z{})".format(self.order, order))
        step = order // self.order
        return CycloElem.from_powers(order, {k * step: c for k, c in enumerate(self.coeffs) if c})

    def galois(self, j: int) -> CycloElem:
        ''' Apply the automorphism z_N -> z_N^j. '''
        return CycloElem.from_powers(self.order, {k * j: c for k, c in enumerate(self.coeffs) if c})

    def conjugate(self) -> CycloElem:
        return self.galois(-1)

    def inverse(self) -> CycloElem:
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(z{})".format(self.order))
        if self.is_rational:
            return CycloElem.rational(self.order, 1 / self.coeffs[0])
        # product of the other Galois conjugates; self * w is the norm
        w = CycloElem.rational(self.order, 1)
        for j in _units(self.order)[1:]:
            w = w * self.galois(j)
        norm = (self * w).to_rational()
        return w * (1 / norm)

    def _coerce(self, other):
        if isinstance(other, CycloElem):
            if other.order == self.order:
                return self, other
            order = math.lcm(self.order, other.order)
            return self.lift(order), other.lift(order)
        if isinstance(other, (int, Fraction)):
            return self, CycloElem.rational(self.order, other)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloElem(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return CycloElem(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloElem(self.order, tuple(x * other for x in self.coeffs))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        product = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        product[i + j] += x * y
        return CycloElem(a.order, _reduce(product, a.order))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, exponent: int):
        base = self if exponent >= 0 else self.inverse()
        result = CycloElem.rational(self.order, 1)
        exponent = abs(exponent)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeffs[0] == other
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a.coeffs == b.coeffs

    def mean_trace(self) -> Fraction:
        ''' Trace to Q divided by phi(N); the same for every Q(z_N) containing the element. '''
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                total += c * _mean_trace_of_power(self.order // math.gcd(self.order, k))
        return total

    def __hash__(self):
        return hash(self.mean_trace())

    def __complex__(self):
        return sum((complex(c) * cmath.exp(2j * cmath.pi * k / self.order)
                    for k, c in enumerate(self.coeffs) if c), 0j)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                power = "z{}".format(self.order) + ("^{}".format(k) if k > 1 else "")
                terms.append(power if c == 1 else "{}*{}".format(c, power))
        return " + ".join(terms) if terms else "0"


class RationalField:
    order = 1
    kind = 'rational'
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        if isinstance(value, CycloElem):
            return value.to_rational()
        if isinstance(value, PrimeFieldElem):
            raise PreconditionError("cannot lift {} to Q".format(value))
        return Fraction(value)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash('QQ')

    def __repr__(self):
        return 'QQ'


QQ = RationalField()


class CyclotomicField:
    kind = 'cyclotomic'

    def __init__(self, order: int):
        if order < 1:
            raise PreconditionError("cyclotomic order must be positive, got {}".format(order))
        self.order = order
        self.degree = len(cyclotomic_modulus(order)) - 1
        self.zero = CycloElem.rational(order, 0)
        self.one = CycloElem.rational(order, 1)

    def __call__(self, value) -> CycloElem:
        if isinstance(value, CycloElem):
            return value.lift(self.order)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, PrimeFieldElem):
            raise PreconditionError("cannot lift {} to Q(z{})".format(value, self.order))
        return CycloElem.rational(self.order, value)

    def element(self, coeffs) -> CycloElem:
        ''' Element from power-basis coordinates; shorter lists are padded. '''
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > self.degree:
            raise PreconditionError("expected {} coordinates, got {}".format(self.degree, len(coeffs)))
        return CycloElem(self.order, tuple(coeffs) + (Fraction(0),) * (self.degree - len(coeffs)))

    def zeta(self, k: int = 1) -> CycloElem:
        return CycloElem.from_powers(self.order, {k: Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.order == self.order

    def __hash__(self):
        return hash(('cyclotomic', self.order))

    def __repr__(self):
        return 'Q(z{})'.format(self.order)


def field_for_order(order: int):
    ''' Q for orders 1 and 2, Q(z_N) otherwise. '''
    return QQ if order in (1, 2) else CyclotomicField(order)


def order_of(value) -> int:
    if isinstance(value, (RationalField, CyclotomicField)):
        return value.order
    if isinstance(value, CycloElem):
        return value.order
    if isinstance(value, (int, Fraction)):
        return 1
    raise PreconditionError("no cyclotomic order for {!r}".format(value))


def common_field(*items):
    ''' Smallest field of the form Q(z_N) holding every given field or scalar. '''
    order = 1
    for item in items:
        order = math.lcm(order, order_of(item))
    return field_for_order(order)


def zeta(order: int, k: int = 1):
    return field_for_order(order)(CycloElem.from_powers(order, {k: Fraction(1)}))


def root_of_unity(n1: int, n2: int):
    ''' lambda = exp(2 pi i n1/n2) as z_{n2}^{n1}, with n1/n2 in lowest terms. '''
    mu = Fraction(n1, n2)
    order, k = mu.denominator, mu.numerator % mu.denominator
    if order == 1:
        return Fraction(1)
    if order == 2:
        return Fraction(-1)
    return CyclotomicField(order).zeta(k)


def cyclo_conjugate(z):
    ''' Complex conjugation z_N -> z_N^{-1}; the identity on Q. '''
    if isinstance(z, CycloElem):
        return z.conjugate()
    return z


def cyclo_sqrt_root(order: int, k: int) -> CycloElem:
    ''' Square root z_{2N}^k of z_N^k, as an element of Q(z_{2N}). '''
    return CyclotomicField(2 * order).zeta(k)


@dataclass(frozen=True)
class PrimeFieldElem:
    p: int
    value: int

    def _other(self, other):
        if isinstance(other, PrimeFieldElem):
            if other.p != self.p:
                raise PreconditionError("mixing F_{} and F_{}".format(self.p, other.p))
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return PrimeField(self.p).reduce(other)
        return None

    def __add__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElem(self.p, (self.value + v) % self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElem(self.p, (self.value - v) % self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return PrimeFieldElem(self.p, -self.value % self.p)

    def __mul__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return PrimeFieldElem(self.p, self.value * v % self.p)

    __rmul__ = __mul__

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("inverse of zero in F_{}".format(self.p))
        return PrimeFieldElem(self.p, pow(self.value, -1, self.p))

    def __truediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return self * PrimeFieldElem(self.p, v).inverse()

    def __rtruediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return self.inverse() * v

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** -exponent
        return PrimeFieldElem(self.p, pow(self.value, exponent, self.p))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        v = self._other(other) if isinstance(other, (PrimeFieldElem, int)) else None
        if v is None:
            return NotImplemented
        return self.value == v

    def __hash__(self):
        return hash((self.p, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return "{} mod {}".format(self.value, self.p)


class PrimeField:
    kind = 'prime'

    def __init__(self, p: int):
        if not sympy.isprime(p):
            raise PreconditionError("{} is not prime".format(p))
        self.p = p
        self.zero = PrimeFieldElem(p, 0)
        self.one = PrimeFieldElem(p, 1)

    def reduce(self, value) -> int:
        ''' Residue of a rational with denominator prime to p. '''
        if isinstance(value, PrimeFieldElem):
            return value.value
        if isinstance(value, CycloElem):
            value = value.to_rational()
        value = Fraction(value)
        if value.denominator % self.p == 0:
            raise PreconditionError("{} has no reduction mod {}".format(value, self.p))
        return value.numerator * pow(value.denominator, -1, self.p) % self.p

    def __call__(self, value) -> PrimeFieldElem:
        return PrimeFieldElem(self.p, self.reduce(value))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(('prime', self.p))

    def __repr__(self):
        return 'F_{}'.format(self.p)
