"""Exact arithmetic: primality, prime fields, quadratic field elements,
quadratic characters, primitive roots, and quadratic Gauss sums.

Rational arithmetic rides on fractions.Fraction (exported as BigRational),
which already keeps every value in lowest terms with a positive denominator.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import mpmath

BigRational = Fraction

# deterministic Miller-Rabin witnesses for n < 2^64 (Sinclair / Jaeschke)
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class TrivialGroupError(ValueError):
    """Raised when a generator is requested for a trivial multiplicative group."""


def is_prime(n: int) -> bool:
    """Deterministic primality: trial division below 2^32, Miller-Rabin below 2^64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 1 << 32:
        f = 41
        while f * f <= n:
            if n % f == 0:
                return False
            f += 2
        return True
    if n >= 1 << 64:
        raise ValueError("primality test is deterministic only below 2^64, got %d" % n)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
    return [i for i, flag in enumerate(sieve) if flag]


def factorize(n: int, limit: int = 10 ** 7) -> dict[int, int]:
    """Prime factorization of |n| by trial division up to `limit`.

    A leftover cofactor is accepted if it passes the deterministic primality
    test; otherwise the input is rejected as too hard for this tool.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    while f * f <= n and f <= limit:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        if f * f > n or is_prime(n):
            out[n] = out.get(n, 0) + 1
        else:
            raise ValueError("composite cofactor %d resists trial division" % n)
    return out


def _check_odd_prime(m: int) -> None:
    if m == 2 or not is_prime(m):
        raise ValueError("modulus %d is not an odd prime" % m)


def legendre_kronecker(a: int, m: int) -> int:
    """Quadratic character of a mod an odd prime m: 1, -1, or 0 when m | a."""
    _check_odd_prime(m)
    r = pow(a % m, (m - 1) // 2, m)
    return -1 if r == m - 1 else r


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo prime p, or None when a is a non-residue."""
    a %= p
    if p == 2 or a == 0:
        return a % p
    if legendre_kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre_kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


_prime_cache: set[int] = set()


def _require_prime(m: int) -> None:
    if m not in _prime_cache:
        if not is_prime(m):
            raise ValueError("modulus %d is not prime" % m)
        _prime_cache.add(m)


class PrimeFieldElement:
    """An element of F_m for prime m, stored as the canonical residue in [0, m)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        _require_prime(modulus)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", value % modulus)

    def __setattr__(self, *args):
        raise AttributeError("PrimeFieldElement is immutable")

    def _lift(self, other) -> "PrimeFieldElement":
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise ValueError("mixed moduli %d and %d" % (self.modulus, other.modulus))
            return other
        if isinstance(other, int):
            return PrimeFieldElement(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else PrimeFieldElement(self.value + o.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else PrimeFieldElement(self.value - o.value, self.modulus)

    def __rsub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else PrimeFieldElement(o.value - self.value, self.modulus)

    def __mul__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else PrimeFieldElement(self.value * o.value, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else o * self.inverse()

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.modulus)

    def __pow__(self, e: int):
        return PrimeFieldElement(pow(self.value, e, self.modulus), self.modulus)

    def inverse(self) -> "PrimeFieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.modulus)
        return PrimeFieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def is_square(self) -> bool:
        if self.modulus == 2 or self.value == 0:
            return True
        return legendre_kronecker(self.value, self.modulus) == 1

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.modulus
        return (isinstance(other, PrimeFieldElement)
                and self.modulus == other.modulus and self.value == other.value)

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return "PrimeFieldElement(%d, %d)" % (self.value, self.modulus)


def primitive_root(m: int) -> PrimeFieldElement:
    """Smallest generator of F_m^* for an odd prime m."""
    if m == 2:
        raise TrivialGroupError("F_2^* is trivial and has no generator to pick")
    _check_odd_prime(m)
    qs = list(factorize(m - 1))
    for g in range(2, m):
        if all(pow(g, (m - 1) // q, m) != 1 for q in qs):
            return PrimeFieldElement(g, m)
    raise AssertionError("unreachable: no primitive root found for prime %d" % m)


def is_rational_square(q: Fraction) -> bool:
    """True when q is the square of a rational."""
    q = Fraction(q)
    if q < 0:
        return False
    num, den = q.numerator, q.denominator
    return isqrt(num) ** 2 == num and isqrt(den) ** 2 == den


def rational_sqrt(q: Fraction) -> Fraction | None:
    """The non-negative rational square root of q, or None."""
    q = Fraction(q)
    if not is_rational_square(q):
        return None
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


def _squarefree(d: int) -> bool:
    if d in (0, 1):
        return False
    return all(e == 1 for e in factorize(d).values())


class QuadFieldElement:
    """a + b*sqrt(d) with rational a, b and a fixed squarefree integer d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if not _squarefree(d):
            raise ValueError("d = %s must be squarefree and not 0 or 1" % (d,))
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):
        raise AttributeError("QuadFieldElement is immutable")

    def _lift(self, other):
        if isinstance(other, QuadFieldElement):
            if other.d != self.d:
                raise ValueError("mixed fields Q(sqrt(%d)) and Q(sqrt(%d))" % (self.d, other.d))
            return other
        if isinstance(other, (int, Fraction)):
            return QuadFieldElement(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else QuadFieldElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else QuadFieldElement(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadFieldElement(self.a * o.a + self.d * self.b * o.b,
                                self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(%d))" % self.d)
        num = self * o.conjugate()
        return QuadFieldElement(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        return o if o is NotImplemented else o / self

    def __neg__(self):
        return QuadFieldElement(-self.a, -self.b, self.d)

    def conjugate(self) -> "QuadFieldElement":
        return QuadFieldElement(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_square(self) -> bool:
        """True when some w in Q(sqrt(d)) satisfies w^2 = self."""
        if self.b == 0:
            if self.a == 0 or is_rational_square(self.a):
                return True
            return is_rational_square(self.a / self.d)
        n = self.norm()
        s = rational_sqrt(n)
        if s is None:
            return False
        # w = c + e*sqrt(d): c^2 = (a +- s)/2, e = b/(2c)
        for t in (self.a + s, self.a - s):
            c2 = t / 2
            if c2 != 0 and is_rational_square(c2):
                c = rational_sqrt(c2)
                e = self.b / (2 * c)
                if c * c + self.d * e * e == self.a and 2 * c * e == self.b:
                    return True
        return False

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return (isinstance(other, QuadFieldElement) and self.d == other.d
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return "QuadFieldElement(%s, %s, d=%d)" % (self.a, self.b, self.d)


def gauss_sum_square(ell: int) -> float:
    """Re(g^2) for the quadratic Gauss sum g = sum_n exp(2 pi i n^2 / ell).

    Evaluated at 100 bits of mantissa; the imaginary part of g^2 must vanish
    to within 1e-9 or the computation aborts.
    """
    _check_odd_prime(ell)
    with mpmath.workprec(100):
        g = mpmath.fsum((mpmath.expjpi(mpmath.mpf(2 * (n * n % ell)) / ell)
                         for n in range(ell)), absolute=False)
        g2 = g * g
        if abs(mpmath.im(g2)) > 1e-9:
            raise ArithmeticError("Gauss sum square has imaginary part %s" % mpmath.im(g2))
        return float(mpmath.re(g2))
