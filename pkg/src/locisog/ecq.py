"""Elliptic curves over Q: Weierstrass invariants, bad primes, rational
two-torsion, the degree-7 twist quartic -7y^2 = x^4 + 2x^3 - 9x^2 - 10x - 3,
and the exact rational maps tying its points to j-invariants, with quadratic
field support for the Q(i) point checks.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .arith import QuadFieldElement, factorize, is_rational_square
from .errors import DegeneratePointError


def _frac(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("curve coefficients must be exact (int, Fraction, or 'p/q' string)")
    return Fraction(v)


class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with exact coefficients."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6")

    def __init__(self, a1, a2, a3, a4, a6):
        for name, v in zip(self.__slots__, (a1, a2, a3, a4, a6)):
            object.__setattr__(self, name, _frac(v))
        if self.discriminant() == 0:
            raise ValueError("singular curve: discriminant is zero")

    def __setattr__(self, *args):
        raise AttributeError("WeierstrassCurve is immutable")

    def coefficients(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def b_invariants(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        a1, a2, a3, a4, a6 = self.coefficients()
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = (b2 * b6 - b4 * b4) / 4
        return b2, b4, b6, b8

    def c_invariants(self) -> tuple[Fraction, Fraction]:
        b2, b4, b6, _ = self.b_invariants()
        return b2 * b2 - 24 * b4, -b2 ** 3 + 36 * b2 * b4 - 216 * b6

    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def j_invariant(self) -> Fraction:
        c4, _ = self.c_invariants()
        return c4 ** 3 / self.discriminant()

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coefficients())

    def __eq__(self, other):
        return (isinstance(other, WeierstrassCurve)
                and self.coefficients() == other.coefficients())

    def __hash__(self):
        return hash(self.coefficients())

    def __repr__(self):
        return "WeierstrassCurve(%s)" % ", ".join(str(a) for a in self.coefficients())


# the pair of curves the degree-7 story runs on
COUNTEREXAMPLE_CURVE = WeierstrassCurve(1, -1, 0, -107, -379)
CURVE_49A3 = WeierstrassCurve(1, -1, 0, -107, 552)


def parse_curve(text: str) -> WeierstrassCurve:
    """Parse "a1,a2,a3,a4,a6" with entries "p/q" or integers."""
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 5:
        raise ValueError("expected 5 comma-separated coefficients, got %d" % len(parts))
    return WeierstrassCurve(*[Fraction(t) for t in parts])


class CurveInvariants(NamedTuple):
    c4: Fraction
    c6: Fraction
    disc: Fraction
    j: Fraction


def invariants(E: WeierstrassCurve) -> CurveInvariants:
    c4, c6 = E.c_invariants()
    disc = E.discriminant()
    return CurveInvariants(c4, c6, disc, c4 ** 3 / disc)


def bad_primes(E: WeierstrassCurve) -> frozenset[int]:
    """Primes dividing the discriminant of the given integral model."""
    if not E.is_integral():
        raise ValueError("bad_primes needs an integral model, got %r" % (E,))
    disc = int(E.discriminant())
    return frozenset(factorize(abs(disc)))


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p ** k for d in out for k in range(e + 1)]
    return out


def _int_poly_rational_roots(coeffs: list[int]) -> list[Fraction]:
    """Distinct rational roots of an integer polynomial, by the rational root
    test over divisors of the constant and leading terms; candidates verified
    exactly.  Falls back to modular root reconstruction when the constant
    term resists trial-division factoring."""
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if not coeffs:
        raise ValueError("zero polynomial has every root")
    roots = []
    while coeffs[-1] == 0:
        roots.append(Fraction(0))
        coeffs = coeffs[:-1]
        if not coeffs:
            return roots
    if len(coeffs) == 1:
        return roots
    try:
        nums = _divisors(abs(coeffs[-1]))
        dens = _divisors(abs(coeffs[0]))
    except ValueError:
        from .modpoly import rational_linear_factors
        found = rational_linear_factors([Fraction(c) for c in coeffs])
        return sorted(set(roots) | set(found))
    for num in nums:
        for den in dens:
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand in roots:
                    continue
                acc = Fraction(0)
                for c in coeffs:
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return sorted(roots)


def two_torsion_x(E: WeierstrassCurve) -> tuple[Fraction, ...]:
    """x-coordinates of the rational 2-torsion: rational roots of
    4x^3 + b2 x^2 + 2 b4 x + b6."""
    b2, b4, b6, _ = E.b_invariants()
    coeffs = [Fraction(4), b2, 2 * b4, b6]
    mult = 1
    for c in coeffs:
        mult *= c.denominator
    ints = [int(c * mult) for c in coeffs]
    g = 0
    for c in ints:
        g = _gcd(g, abs(c))
    return tuple(_int_poly_rational_roots([c // g for c in ints]))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _coerce_pair(x, y):
    """Bring both coordinates into one field: Q or a common Q(sqrt(d))."""
    xq = isinstance(x, QuadFieldElement)
    yq = isinstance(y, QuadFieldElement)
    if xq and yq:
        if x.d != y.d:
            raise ValueError("coordinates live in different quadratic fields "
                             "(d = %d and %d)" % (x.d, y.d))
        return x, y
    if xq:
        return x, QuadFieldElement(_frac(y), 0, x.d)
    if yq:
        return QuadFieldElement(_frac(x), 0, y.d), y
    return _frac(x), _frac(y)


class QuarticModel:
    """The fixed genus-1 quartic -7 y^2 = x^4 + 2x^3 - 9x^2 - 10x - 3."""

    coeffs = (1, 2, -9, -10, -3)
    scalar = -7

    def rhs(self, x):
        acc = x * 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def is_point(self, x, y) -> bool:
        x, y = _coerce_pair(x, y)
        return y * y * self.scalar == self.rhs(x)


TWIST_QUARTIC = QuarticModel()


def quartic_point_check(x, y) -> bool:
    """Exact test of -7 y^2 = x^4 + 2x^3 - 9x^2 - 10x - 3."""
    return TWIST_QUARTIC.is_point(x, y)


class RationalMap:
    """A quotient of integer polynomials, evaluated exactly (Q or Q(sqrt d))."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator):
        if not any(denominator):
            raise ValueError("denominator is identically zero")
        object.__setattr__(self, "numerator", tuple(numerator))
        object.__setattr__(self, "denominator", tuple(denominator))

    def __setattr__(self, *args):
        raise AttributeError("RationalMap is immutable")

    def evaluate(self, x):
        num = x * 0
        for c in self.numerator:
            num = num * x + c
        den = x * 0
        for c in self.denominator:
            den = den * x + c
        if den == 0:
            raise ZeroDivisionError("rational map has a pole at x = %s" % (x,))
        return num / den


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] += u * v
    return out


def _poly_pow(a, e):
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, a)
    return out


def _build_map_f() -> RationalMap:
    num = [-1]
    for factor, e in (((1, -3), 3), ((1, -2), 1), ((1, 1, -5), 3),
                      ((1, 1, 2), 3), ((1, -3, 2, 3, 1), 3)):
        num = _poly_mul(num, _poly_pow(list(factor), e))
    den = _poly_pow([1, -2, -1, 1], 7)
    return RationalMap(num, den)


# x-coordinate on the quartic -> j-invariant of the isogeny-ambiguous curve
MAP_F = _build_map_f()


def eval_map_f(x):
    """j-invariant attached to a point of the twist quartic with abscissa x."""
    return MAP_F.evaluate(_frac(x) if not isinstance(x, QuadFieldElement) else x)


def map_49a3_to_quartic_x(u, v):
    """Send a point (u, v) of y^2 + xy = x^3 - x^2 - 107x + 552 to the
    abscissa (3u - v + 42)/(u + 2v) on the twist quartic.

    Returns (x, flag) where flag reports whether q(x)/(-7) is a square in
    the coordinate field, i.e. whether a matching ordinate exists there.
    """
    u, v = _coerce_pair(u, v)
    u2 = u * u
    if v * v + u * v != u2 * u - u2 - 107 * u + 552:
        raise ValueError("(%s, %s) does not satisfy y^2 + xy = x^3 - x^2 - 107x + 552"
                         % (u, v))
    den = u + 2 * v
    if den == 0:
        raise DegeneratePointError("u + 2v = 0: the map is undefined at (%s, %s)"
                                   % (u, v))
    x = (3 * u - v + 42) / den
    target = TWIST_QUARTIC.rhs(x) / TWIST_QUARTIC.scalar
    if isinstance(target, QuadFieldElement):
        flag = target.is_square()
    else:
        flag = is_rational_square(target)
    return x, flag
