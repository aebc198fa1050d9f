"""Classical modular polynomials Phi_N(X, Y): file loading, specialization at
a j-invariant, certified rational root extraction, root counting over F_p,
and verification of shipped factorization certificates.

Rational roots are found by reducing mod random 62-bit primes, splitting off
roots there, and lifting by CRT plus rational reconstruction.  The search is
exhaustive: a root p/q in lowest terms of an integer polynomial divides the
constant (p | a_0) and leading (q | a_n) coefficients, so primes are added
until their product exceeds 2*|a_0|*|a_n| and reconstruction is unique.
Every candidate is verified exactly before it is reported.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .arith import PrimeFieldElement, _require_prime, is_prime, is_rational_square
from .errors import ModPolyFormatError

SHIPPED_LEVELS = (2, 3, 5, 7)


class ModularPolynomial:
    """Phi_N(X, Y), symmetric with integer coefficients, stored as the half
    {(i, j): c with i >= j}; (i, j) and (j, i) share one coefficient."""

    __slots__ = ("level", "_half")

    def __init__(self, level: int, half: dict):
        if level < 2:
            raise ValueError("level must be at least 2, got %d" % level)
        d = level + 1
        for (i, j), c in half.items():
            if not (0 <= j <= i <= d):
                raise ValueError("exponent pair (%d, %d) out of range for level %d"
                                 % (i, j, level))
            if not isinstance(c, int) or c == 0:
                raise ValueError("coefficient at (%d, %d) must be a nonzero integer" % (i, j))
        if half.get((d, 0)) != 1:
            raise ValueError("Phi_%d must be monic of degree %d in X" % (level, d))
        if (d, d) in half or any(i == d and j > 0 for (i, j) in half):
            raise ValueError("degree in X exceeds %d + 1 with Y present" % level)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "_half", dict(half))

    def __setattr__(self, *args):
        raise AttributeError("ModularPolynomial is immutable")

    @property
    def degree(self) -> int:
        return self.level + 1

    def coefficient(self, i: int, j: int) -> int:
        return self._half.get((max(i, j), min(i, j)), 0)

    def half_terms(self):
        return sorted(self._half.items(), reverse=True)

    def __repr__(self):
        return "ModularPolynomial(level=%d, %d stored terms)" % (self.level, len(self._half))


def _parse_modpoly(lines, source: str) -> ModularPolynomial:
    level = None
    half = {}
    for num, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if level is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "level" or not parts[1].isdigit():
                raise ModPolyFormatError("%s:%d: expected 'level N', got %r"
                                         % (source, num, raw.strip()))
            level = int(parts[1])
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ModPolyFormatError("%s:%d: expected 'i j c', got %r"
                                     % (source, num, raw.strip()))
        try:
            i, j, c = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise ModPolyFormatError("%s:%d: non-integer entry in %r"
                                     % (source, num, raw.strip())) from None
        if j > i:
            raise ModPolyFormatError("%s:%d: stored half needs i >= j, got (%d, %d)"
                                     % (source, num, i, j))
        if (i, j) in half:
            raise ModPolyFormatError("%s:%d: duplicate term (%d, %d)" % (source, num, i, j))
        half[(i, j)] = c
    if level is None:
        raise ModPolyFormatError("%s: missing 'level N' header" % source)
    try:
        return ModularPolynomial(level, half)
    except ValueError as e:
        raise ModPolyFormatError("%s: %s" % (source, e)) from None


def load_modpoly(path) -> ModularPolynomial:
    """Read a modular polynomial from its text format ('level N' then 'i j c'
    lines for the symmetric half, '#' comments allowed)."""
    with open(path, encoding="ascii") as fh:
        return _parse_modpoly(fh, str(path))


def shipped_modpoly(level: int) -> ModularPolynomial:
    """One of the modular polynomials bundled with the package."""
    if level not in SHIPPED_LEVELS:
        raise ValueError("no modular polynomial shipped for level %d (have %s)"
                         % (level, ", ".join(map(str, SHIPPED_LEVELS))))
    text = resources.files("locisog").joinpath("data/phi%d.txt" % level).read_text()
    return _parse_modpoly(text.splitlines(), "phi%d.txt" % level)


def evaluate_at_j(M: ModularPolynomial, j) -> list[Fraction]:
    """Coefficients of Phi_N(X, j), descending, length N + 2."""
    j = Fraction(j)
    d = M.degree
    out = [Fraction(0)] * (d + 1)
    powers = [Fraction(1)]
    for _ in range(d):
        powers.append(powers[-1] * j)
    for (i, k), c in M._half.items():
        out[d - i] += c * powers[k]
        if i != k:
            out[d - k] += c * powers[i]
    return out


# -- dense polynomial arithmetic mod a prime (descending coefficients) --

def _ptrim(f: list[int]) -> list[int]:
    k = 0
    while k < len(f) - 1 and f[k] == 0:
        k += 1
    return f[k:]


def _pmul(a: list[int], b: list[int], q: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] = (out[i + j] + u * v) % q
    return out


def _pdivmod(a: list[int], b: list[int], q: int) -> tuple[list[int], list[int]]:
    a, b = _ptrim(list(a)), _ptrim(b)
    if len(a) < len(b):
        return [0], a
    inv = pow(b[0], -1, q)
    rem = list(a)
    quo = [0] * max(len(a) - len(b) + 1, 1)
    for shift in range(len(rem) - len(b) + 1):
        coef = rem[shift] * inv % q
        quo[shift] = coef
        if coef:
            for k, v in enumerate(b):
                rem[shift + k] = (rem[shift + k] - coef * v) % q
    return _ptrim(quo), _ptrim(rem[len(rem) - len(b) + 1:] or [0])


def _pgcd(a: list[int], b: list[int], q: int) -> list[int]:
    a, b = _ptrim(a), _ptrim(b)
    while b != [0]:
        a, b = b, _pdivmod(a, b, q)[1]
    return [c * pow(a[0], -1, q) % q for c in a]


def _ppowmod(base: list[int], e: int, f: list[int], q: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, f, q)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, q), f, q)[1]
        base = _pdivmod(_pmul(base, base, q), f, q)[1]
        e >>= 1
    return result


def _roots_mod(ints: list[int], q: int, rng: random.Random) -> list[int]:
    """Distinct roots of an integer polynomial mod q, by splitting the
    squarefree linear part gcd(x^q - x, f) with random quadratic characters."""
    f = _ptrim([c % q for c in ints])
    if len(f) == 1:
        return []
    xq = _ppowmod([1, 0], q, f, q)
    # x^q - x: subtract 1 from the coefficient of x
    g = list(xq)
    while len(g) < 2:
        g = [0] + g
    g[-2] = (g[-2] - 1) % q
    lin = _pgcd(g, f, q)
    roots = []
    stack = [lin]
    while stack:
        h = _ptrim(stack.pop())
        if len(h) <= 1:
            continue
        if len(h) == 2:
            roots.append(-h[1] * pow(h[0], -1, q) % q)
            continue
        while True:
            a = rng.randrange(q)
            t = _ppowmod([1, a], (q - 1) // 2, h, q)
            t = list(t)
            t[-1] = (t[-1] - 1) % q
            d = _pgcd(t, h, q)
            if 1 < len(d) < len(h):
                stack.append(d)
                stack.append(_pdivmod(h, d, q)[0])
                break
    return sorted(roots)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _rational_reconstruct(c: int, m: int, num_bound: int, den_bound: int):
    """The p/q with p = c q mod m, |p| <= num_bound, 0 < q <= den_bound,
    unique when m > 2*num_bound*den_bound; None when no such pair exists."""
    r0, r1 = m, c % m
    s0, s1 = 0, 1
    while r1 > num_bound:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        s0, s1 = s1, s0 - k * s1
    if s1 == 0 or abs(s1) > den_bound or (r1 - c * s1) % m != 0:
        return None
    return Fraction(r1, s1) if s1 > 0 else Fraction(-r1, -s1)


def _fresh_prime(rng: random.Random, avoid: int, seen: set) -> int:
    while True:
        n = rng.randrange(1 << 61, 1 << 62) | 1
        while not is_prime(n):
            n += 2
        if n not in seen and avoid % n != 0:
            seen.add(n)
            return n


def rational_linear_factors(coeffs, seed: int = 0) -> tuple[Fraction, ...]:
    """All rational roots, with multiplicity, of a polynomial given by its
    descending rational coefficients; sorted ascending.  Exhaustive by the
    divisor bound described in the module docstring."""
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    if not coeffs:
        raise ValueError("the zero polynomial vanishes identically")
    mult = 1
    for c in coeffs:
        mult = mult * c.denominator // _gcd(mult, c.denominator)
    ints = [int(c * mult) for c in coeffs]
    zero_mult = 0
    while ints[-1] == 0:
        zero_mult += 1
        ints.pop()
    found = [Fraction(0)] * zero_mult
    if len(ints) <= 1:
        return tuple(found)
    a0, an = abs(ints[-1]), abs(ints[0])
    rng = random.Random(seed)
    seen: set = set()
    primes = []
    prod = 1
    while prod <= 2 * a0 * an:
        q = _fresh_prime(rng, an, seen)
        primes.append(q)
        prod *= q
    residues = [_roots_mod(ints, q, rng) for q in primes]
    combos = [(0, 1)]  # (residue mod modulus, modulus)
    for q, roots in zip(primes, residues):
        new = []
        for c, m in combos:
            inv_m = pow(m, -1, q)
            for r in roots:
                t = (r - c) % q * inv_m % q
                new.append((c + m * t, m * q))
        combos = new
    distinct = set()
    for c, m in combos:
        cand = _rational_reconstruct(c, m, a0, an)
        if cand is None or cand in distinct:
            continue
        acc = Fraction(0)
        for coefficient in ints:
            acc = acc * cand + coefficient
        if acc == 0:
            distinct.add(cand)
    work = [Fraction(c) for c in ints]
    for root in sorted(distinct):
        while True:
            quo = []
            acc = Fraction(0)
            for c in work:
                acc = acc * root + c
                quo.append(acc)
            if quo.pop() != 0:
                break
            found.append(root)
            work = quo
    return tuple(sorted(found))


def _specialize_mod(M: ModularPolynomial, j: PrimeFieldElement) -> list[int]:
    p = j.modulus
    _require_prime(p)
    if M.level % p == 0:
        raise ValueError("p = %d divides the level %d" % (p, M.level))
    d = M.degree
    f = [0] * (d + 1)
    jp = [1]
    for _ in range(d):
        jp.append(jp[-1] * j.value % p)
    for (i, k), c in M._half.items():
        f[d - i] = (f[d - i] + c * jp[k]) % p
        if i != k:
            f[d - k] = (f[d - k] + c * jp[i]) % p
    return f


def _root_part(f: list[int], p: int) -> list[int]:
    """gcd(X^p - X, f): the squarefree product of the linear factors of f."""
    xp = _ppowmod([1, 0], p, f, p)
    g = list(xp)
    while len(g) < 2:
        g = [0] + g
    g[-2] = (g[-2] - 1) % p
    return _pgcd(g, f, p)


def fp_root_count(M: ModularPolynomial, j: PrimeFieldElement) -> int:
    """Number of distinct roots of Phi_N(X, j) in F_p, via deg gcd(X^p - X)."""
    f = _specialize_mod(M, j)
    return len(_root_part(f, j.modulus)) - 1


def fp_linear_factor_count(M: ModularPolynomial, j: PrimeFieldElement) -> int:
    """Number of linear factors, with multiplicity, of Phi_N(X, j) over F_p.

    Distinct roots undercount when isogenous j-invariants collide mod p
    (the specialization can even degenerate to X^(N+1) at supersingular
    primes), so repeated root layers are stripped and summed."""
    f = _specialize_mod(M, j)
    p = j.modulus
    total = 0
    while len(f) > 1:
        g = _root_part(f, p)
        if len(g) == 1:
            break
        total += len(g) - 1
        f = _pdivmod(f, g, p)[0]
    return total


# -- factorization certificates --

@dataclass(frozen=True)
class FactorizationCertificate:
    """Claim: the product of the factor polynomials equals the target."""

    target: tuple[Fraction, ...]
    factors: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class FactorDiscriminant:
    degree: int
    disc: Fraction
    matches_shape: bool  # disc == -7 a^2 / 4^b for positive integers a, b


@dataclass(frozen=True)
class CertificateReport:
    product_matches: bool
    detail: str
    discriminants: tuple[FactorDiscriminant, ...]

    def __bool__(self) -> bool:
        return self.product_matches


def _is_power_of_4(n: int) -> bool:
    return n & (n - 1) == 0 and (n.bit_length() - 1) % 2 == 0


def _disc_shape(disc: Fraction) -> bool:
    s = disc / -7
    return s > 0 and _is_power_of_4(s.denominator) and is_rational_square(s)


def _poly_disc(f: tuple[Fraction, ...]) -> Fraction | None:
    if len(f) == 3:
        a, b, c = f
        return b * b - 4 * a * c
    if len(f) == 4:
        a, b, c, d = f
        return (18 * a * b * c * d - 4 * b ** 3 * d + b * b * c * c
                - 4 * a * c ** 3 - 27 * a * a * d * d)
    return None


def verify_certificate(cert: FactorizationCertificate) -> CertificateReport:
    """Multiply the factors exactly and compare against the target; report
    discriminants of the quadratic and cubic factors and whether each has
    the shape -7 a^2 / 4^b."""
    prod = [Fraction(1)]
    for factor in cert.factors:
        if not factor or factor[0] == 0:
            return CertificateReport(False, "factor with zero leading coefficient", ())
        nxt = [Fraction(0)] * (len(prod) + len(factor) - 1)
        for i, u in enumerate(prod):
            for k, v in enumerate(factor):
                nxt[i + k] += u * v
        prod = nxt
    target = list(cert.target)
    while target and target[0] == 0:
        target = target[1:]
    detail = ""
    if len(prod) != len(target):
        detail = "degree mismatch: product %d vs target %d" % (len(prod) - 1, len(target) - 1)
    else:
        for k, (u, v) in enumerate(zip(prod, target)):
            if u != v:
                detail = "coefficient of X^%d differs: %s vs %s" % (len(prod) - 1 - k, u, v)
                break
    discs = []
    for factor in cert.factors:
        disc = _poly_disc(factor)
        if disc is not None:
            discs.append(FactorDiscriminant(len(factor) - 1, disc, _disc_shape(disc)))
    return CertificateReport(detail == "", detail, tuple(discs))


def _parse_factor_lines(lines, source: str) -> tuple[tuple[Fraction, ...], ...]:
    factors = []
    for num, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            coeffs = tuple(Fraction(t.strip()) for t in line.split(","))
        except (ValueError, ZeroDivisionError):
            raise ModPolyFormatError("%s:%d: expected comma-separated rationals, got %r"
                                     % (source, num, raw.strip())) from None
        if not coeffs or coeffs[0] == 0:
            raise ModPolyFormatError("%s:%d: factor must have a nonzero leading coefficient"
                                     % (source, num))
        factors.append(coeffs)
    if not factors:
        raise ModPolyFormatError("%s: no factors found" % source)
    return tuple(factors)


def load_factors(path) -> tuple[tuple[Fraction, ...], ...]:
    """Read one polynomial per line (descending comma-separated rational
    coefficients, '#' comments allowed)."""
    with open(path, encoding="ascii") as fh:
        return _parse_factor_lines(fh, str(path))


def shipped_certificate_factors() -> tuple[tuple[Fraction, ...], ...]:
    """The bundled factorization of Phi_7(X, 2268945/128)."""
    text = resources.files("locisog").joinpath("data/phi7_factors.txt").read_text()
    return _parse_factor_lines(text.splitlines(), "phi7_factors.txt")
