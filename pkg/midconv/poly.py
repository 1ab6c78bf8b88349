"""
Univariate polynomials and rational functions over an exact field.

A polynomial is a dense tuple of coefficients, constant term first, with no
trailing zeros. The zero polynomial has degree -1.
"""
from __future__ import annotations

from midconv.fields import QQ

__license__ = "MIT"


class Polynomial:
    __slots__ = ('field', 'coeffs')

    def __init__(self, coeffs=(), field=QQ):
        items = [field(c) for c in coeffs]
        while items and not items[-1]:
            items.pop()
        self.field = field
        self.coeffs = tuple(items)

    @classmethod
    def x(cls, field=QQ) -> Polynomial:
        return cls((0, 1), field)

    @classmethod
    def constant(cls, value, field=QQ) -> Polynomial:
        return cls((value,), field)

    @classmethod
    def from_roots(cls, roots, field=QQ) -> Polynomial:
        ''' Monic polynomial with the given roots. '''
        result = cls((1,), field)
        for root in roots:
            result = result * cls((-field(root), 1), field)
        return result

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        return self * (self.field.one / self.leading())

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial((other,), self.field)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (self.field.zero,) * (n - len(self.coeffs))
        b = other.coeffs + (self.field.zero,) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)], self.field)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            scalar = self.field(other)
            return Polynomial([c * scalar for c in self.coeffs], self.field)
        if self.is_zero() or other.is_zero():
            return Polynomial((), self.field)
        product = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        product[i + j] = product[i + j] + x * y
        return Polynomial(product, self.field)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        result = Polynomial((1,), self.field)
        for _ in range(exponent):
            result = result * self
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        quotient = [self.field.zero] * max(len(remainder) - len(other.coeffs) + 1, 0)
        inverse = self.field.one / other.leading()
        d = other.degree()
        for k in range(len(remainder) - 1, d - 1, -1):
            factor = remainder[k] * inverse
            if factor:
                quotient[k - d] = factor
                for j, c in enumerate(other.coeffs):
                    remainder[k - d + j] = remainder[k - d + j] - factor * c
        return Polynomial(quotient, self.field), Polynomial(remainder[:d] if d > 0 else (), self.field)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        ''' Horner evaluation. '''
        result = self.field.zero
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def derivative(self) -> Polynomial:
        return Polynomial([c * k for k, c in enumerate(self.coeffs) if k], self.field)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = self._lift(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Polynomial('0')"
        terms = []
        for k, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            power = '' if k == 0 else 'x' if k == 1 else 'x^{}'.format(k)
            if not power:
                terms.append('({})'.format(c))
            elif c == 1:
                terms.append(power)
            else:
                terms.append('({})*{}'.format(c, power))
        return "Polynomial('{}')".format(' + '.join(terms))


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    ''' Monic greatest common divisor; gcd(0, 0) = 0. '''
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class RationalFunction:
    ''' num/den in lowest terms with a monic denominator. '''
    __slots__ = ('num', 'den')

    def __init__(self, num: Polynomial, den: Polynomial = None):
        if den is None:
            den = Polynomial((1,), num.field)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = Polynomial((1,), num.field)
        else:
            g = gcd(num, den)
            if g.degree() > 0:
                num, den = num // g, den // g
        scale = num.field.one / den.leading()
        self.num = num * scale
        self.den = den * scale

    @property
    def field(self):
        return self.num.field

    @classmethod
    def constant(cls, value, field=QQ) -> RationalFunction:
        return cls(Polynomial((value,), field))

    @classmethod
    def pole(cls, value, point, order: int = 1, field=QQ) -> RationalFunction:
        ''' value / (x - point)^order '''
        return cls(Polynomial((value,), field), Polynomial((-field(point), 1), field) ** order)

    def _lift(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction.constant(other, self.field)

    def __add__(self, other):
        other = self._lift(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def derivative(self) -> RationalFunction:
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(),
                                self.den * self.den)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __eq__(self, other):
        other = self._lift(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return "RationalFunction({!r} / {!r})".format(self.num, self.den)


def ratfun_derivative(f: RationalFunction) -> RationalFunction:
    return f.derivative()
