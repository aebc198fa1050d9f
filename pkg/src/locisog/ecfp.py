"""Reductions of a rational elliptic curve mod p: point counts by exhaustive
character sums (small p) or baby-step giant-step order finding (large p), the
trace-based test for a locally defined ell-isogeny, and prime-by-prime scans.

Odd p only: the character-sum counter completes the square in y, which needs
2 invertible, and nothing downstream ever requires counts at p = 2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .arith import _require_prime, legendre_kronecker, primes_up_to, sqrt_mod
from .ecq import WeierstrassCurve
from .errors import VerificationError

# above this, quadratic-character summation loses to O(p^(1/4)) group order search
NAIVE_LIMIT = 1 << 16


@dataclass(frozen=True)
class LocalData:
    """Reduction data at one prime: count and trace are None iff bad."""

    p: int
    good: bool
    count: int | None = None
    a_p: int | None = None
    supersingular: bool = False

    def __post_init__(self):
        if self.good:
            if self.count is None or self.a_p is None:
                raise ValueError("good reduction needs count and a_p")
            if self.count != self.p + 1 - self.a_p:
                raise VerificationError("count %d != p + 1 - a_p at p = %d"
                                        % (self.count, self.p))
            if self.a_p * self.a_p > 4 * self.p:
                raise VerificationError("|a_p| = %d breaks the Hasse bound at p = %d"
                                        % (abs(self.a_p), self.p))
        elif self.count is not None or self.a_p is not None or self.supersingular:
            raise ValueError("bad reduction carries no count data")


def _reduce_coefficients(E: WeierstrassCurve, p: int) -> tuple[int, ...]:
    out = []
    for a in E.coefficients():
        if a.denominator % p == 0:
            raise ValueError("coefficient denominator divisible by p = %d" % p)
        out.append(a.numerator * pow(a.denominator, -1, p) % p)
    return tuple(out)


def _b_invariants_mod(coeffs: tuple[int, ...], p: int) -> tuple[int, int, int, int]:
    a1, a2, a3, a4, a6 = coeffs
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4) % p
    return b2, b4, b6, b8


def _disc_mod(coeffs: tuple[int, ...], p: int) -> int:
    b2, b4, b6, b8 = _b_invariants_mod(coeffs, p)
    return (-b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6) % p


def _naive_count(coeffs: tuple[int, ...], p: int) -> int:
    """p + 1 + sum of chi(4x^3 + b2 x^2 + 2 b4 x + b6) over x in F_p."""
    b2, b4, b6, _ = _b_invariants_mod(coeffs, p)
    x = np.arange(p, dtype=np.int64)
    g = ((4 * x + b2) % p * x + 2 * b4) % p
    g = (g * x + b6) % p
    chi = np.full(p, -1, dtype=np.int64)
    chi[x * x % p] = 1
    chi[0] = 0
    return p + 1 + int(chi[g].sum())


def _short_weierstrass(coeffs: tuple[int, ...], p: int) -> tuple[int, int]:
    """(A, B) with y^2 = x^3 + Ax + B isomorphic to the reduction, p >= 5."""
    a1, a2, a3, a4, a6 = coeffs
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    c4 = (b2 * b2 - 24 * b4) % p
    c6 = (-b2 ** 3 + 36 * b2 * b4 - 216 * b6) % p
    return (-27 * c4) % p, (-54 * c6) % p


def _ec_add(P, Q, A: int, p: int):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def _ec_neg(P, p: int):
    return None if P is None else (P[0], -P[1] % p)


def _ec_mul(k: int, P, A: int, p: int):
    if k < 0:
        return _ec_mul(-k, _ec_neg(P, p), A, p)
    R = None
    while k:
        if k & 1:
            R = _ec_add(R, P, A, p)
        P = _ec_add(P, P, A, p)
        k >>= 1
    return R


def _random_point(A: int, B: int, p: int, rng: random.Random):
    while True:
        x = rng.randrange(p)
        rhs = (x * x % p * x + A * x + B) % p
        y = sqrt_mod(rhs, p)
        if y is not None:
            return x, y


def _strip_to_order(g: int, P, A: int, p: int) -> int:
    for q in _prime_divisors(g):
        while g % q == 0 and _ec_mul(g // q, P, A, p) is None:
            g //= q
    return g


def _point_order(P, A: int, p: int) -> int:
    """Exact order of P: gcd of every annihilator p + 1 + t with |t| in the
    Hasse window, found by baby steps jP against giant strides of (p+1)P,
    then stripped prime by prime."""
    s = isqrt(isqrt(p)) + 1
    stride = 2 * s + 1
    baby = {}  # x-coordinate -> [(j, y) for jP = (x, y)]
    Q = P
    for j in range(1, s + 1):
        if Q is None:
            return _strip_to_order(j, P, A, p)
        baby.setdefault(Q[0], []).append((j, Q[1]))
        Q = _ec_add(Q, P, A, p)
    step = _ec_mul(stride, P, A, p)
    R = _ec_mul(p + 1 - s * stride, P, A, p)
    g = 0
    for i in range(-s, s + 1):
        n0 = p + 1 + i * stride
        if R is None:
            g = _gcd(g, abs(n0))
        else:
            for j, y in baby.get(R[0], ()):
                if R[1] == y:
                    g = _gcd(g, abs(n0 - j))
                if R[1] == (p - y) % p:
                    g = _gcd(g, abs(n0 + j))
        R = _ec_add(R, step, A, p)
    if g == 0:
        raise VerificationError("no annihilator of a point found in the Hasse window")
    return _strip_to_order(g, P, A, p)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _hasse_multiples(L: int, p: int) -> list[int]:
    lo = p + 1 - isqrt(4 * p)
    hi = p + 1 + isqrt(4 * p)
    first = -(-lo // L) * L
    return list(range(first, hi + 1, L))


def _bsgs_count(coeffs: tuple[int, ...], p: int, seed: int) -> int:
    """Group order as the unique Hasse-interval multiple of the exponent
    gathered from random points, with the quadratic twist as a tiebreaker."""
    if p < 5:
        raise ValueError("baby-step giant-step counting needs p >= 5")
    A, B = _short_weierstrass(coeffs, p)
    rng = random.Random((seed << 32) ^ p)
    L = 1
    for _ in range(60):
        o = _point_order(_random_point(A, B, p, rng), A, p)
        L = L * o // _gcd(L, o)
        cands = _hasse_multiples(L, p)
        if len(cands) == 1:
            return cands[0]
    c = 2
    while legendre_kronecker(c, p) != -1:
        c += 1
    At, Bt = A * c * c % p, B * c * c % p * c % p
    Lt = 1
    for _ in range(60):
        o = _point_order(_random_point(At, Bt, p, rng), At, p)
        Lt = Lt * o // _gcd(Lt, o)
        pairs = [n for n in _hasse_multiples(L, p)
                 if (2 * p + 2 - n) % Lt == 0]
        if len(pairs) == 1:
            return pairs[0]
    if p <= NAIVE_LIMIT:
        return _naive_count(coeffs, p)
    raise ArithmeticError("group order ambiguous at p = %d" % p)


def count_points(E: WeierstrassCurve, p: int, method: str = "auto", seed: int = 0) -> int:
    """#E(F_p) for an odd prime of good reduction."""
    _require_prime(p)
    if p == 2:
        raise ValueError("p = 2 is not supported by the point counter")
    coeffs = _reduce_coefficients(E, p)
    if _disc_mod(coeffs, p) == 0:
        raise ValueError("bad reduction at p = %d" % p)
    if method == "naive" or (method == "auto" and p <= NAIVE_LIMIT):
        return _naive_count(coeffs, p)
    if method in ("bsgs", "auto"):
        return _bsgs_count(coeffs, p, seed)
    raise ValueError("method must be 'auto', 'naive', or 'bsgs', got %r" % (method,))


def reduce_and_count(E: WeierstrassCurve, p: int, seed: int = 0) -> LocalData:
    """Reduce E mod an odd prime and package count, trace, and flags."""
    _require_prime(p)
    if p == 2:
        raise ValueError("p = 2 is not supported by the point counter")
    coeffs = _reduce_coefficients(E, p)
    if _disc_mod(coeffs, p) == 0:
        return LocalData(p, False)
    n = count_points(E, p, seed=seed)
    a_p = p + 1 - n
    return LocalData(p, True, n, a_p, a_p % p == 0)


def local_isogeny_admitted(data: LocalData, ell: int) -> bool:
    """Whether x^2 - a_p x + p has a root mod ell, i.e. the reduction admits
    an F_p-rational ell-isogeny (split or ramified Frobenius eigenvalue)."""
    _require_prime(ell)
    if not data.good:
        raise ValueError("criterion needs good reduction, p = %d is bad" % data.p)
    if data.p == ell:
        raise ValueError("p = ell = %d is excluded from the local criterion" % ell)
    if ell == 2:
        return data.a_p % 2 == 0
    disc = (data.a_p * data.a_p - 4 * data.p) % ell
    return disc == 0 or legendre_kronecker(disc, ell) == 1


@dataclass(frozen=True)
class ScanEntry:
    p: int
    status: str  # admitted | rejected | bad_reduction | skipped
    a_p: int | None = None
    note: str = ""


@dataclass(frozen=True)
class ScanReport:
    ell: int
    bound: int
    entries: tuple[ScanEntry, ...]

    @property
    def all_admitted(self) -> bool:
        return not self.rejected

    @property
    def rejected(self) -> tuple[int, ...]:
        return tuple(e.p for e in self.entries if e.status == "rejected")

    @property
    def admitted(self) -> tuple[int, ...]:
        return tuple(e.p for e in self.entries if e.status == "admitted")

    @property
    def skipped(self) -> tuple[int, ...]:
        return tuple(e.p for e in self.entries if e.status == "skipped")


def local_scan(E: WeierstrassCurve, ell: int, bound: int, seed: int = 0) -> ScanReport:
    """Run the local criterion at every prime up to bound, recording the
    verdict per prime and why any prime was skipped."""
    _require_prime(ell)
    if bound < 2:
        raise ValueError("bound must be at least 2, got %d" % bound)
    entries = []
    for p in primes_up_to(bound):
        if p == 2:
            entries.append(ScanEntry(2, "skipped", note="p = 2 unsupported by the counter"))
            continue
        if p == ell:
            entries.append(ScanEntry(p, "skipped", note="p = ell excluded from the criterion"))
            continue
        try:
            data = reduce_and_count(E, p, seed=seed)
        except ValueError:
            entries.append(ScanEntry(p, "skipped", note="coefficients collide mod p"))
            continue
        if not data.good:
            entries.append(ScanEntry(p, "bad_reduction"))
            continue
        verdict = "admitted" if local_isogeny_admitted(data, ell) else "rejected"
        entries.append(ScanEntry(p, verdict, data.a_p))
    return ScanReport(ell, bound, tuple(entries))
