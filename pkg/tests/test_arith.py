import random
from fractions import Fraction

import pytest

from locisog.arith import (PrimeFieldElement, QuadFieldElement, TrivialGroupError,
                           factorize, gauss_sum_square, is_prime, is_rational_square,
                           legendre_kronecker, primes_up_to, primitive_root,
                           rational_sqrt, sqrt_mod)


def test_is_prime_against_sieve():
    sieve = set(primes_up_to(2000))
    for n in range(-5, 2000):
        assert is_prime(n) == (n in sieve)


def test_is_prime_large_known():
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 61 + 1)
    assert is_prime(4611686018427388039)


def test_factorize_roundtrip():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randrange(1, 10 ** 9)
        fac = factorize(n)
        prod = 1
        for p, e in fac.items():
            assert is_prime(p)
            prod *= p ** e
        assert prod == n


def test_factorize_rejects_unfactorable_composite():
    p = 2 ** 61 - 1
    with pytest.raises(ValueError):
        factorize(p * p, limit=10 ** 5)


def test_legendre_against_square_table():
    rng = random.Random(5)
    for ell in (3, 5, 7, 11, 13, 97):
        squares = {x * x % ell for x in range(1, ell)}
        for a in range(ell):
            want = 0 if a == 0 else (1 if a in squares else -1)
            assert legendre_kronecker(a, ell) == want
        a = rng.randrange(1, ell)
        assert legendre_kronecker(a + 7 * ell, ell) == legendre_kronecker(a, ell)


def test_sqrt_mod_random():
    rng = random.Random(7)
    for _ in range(200):
        p = rng.choice([3, 5, 7, 11, 13, 17, 101, 257, 65537])
        a = rng.randrange(p)
        r = sqrt_mod(a, p)
        if r is None:
            assert legendre_kronecker(a, p) == -1
        else:
            assert r * r % p == a % p


def test_prime_field_axioms():
    rng = random.Random(3)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7, 31, 97])
        x = PrimeFieldElement(rng.randrange(p), p)
        y = PrimeFieldElement(rng.randrange(p), p)
        assert (x + y) - y == x
        assert x * y == y * x
        if y.value:
            assert (x / y) * y == x
        assert x ** 3 == x * x * x


def test_prime_field_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        PrimeFieldElement(1, 5) + PrimeFieldElement(1, 7)
    with pytest.raises(ValueError):
        PrimeFieldElement(1, 6)


def test_primitive_root_has_full_order():
    for m in (3, 5, 7, 11, 13, 97, 101):
        g = primitive_root(m)
        seen = set()
        x = PrimeFieldElement(1, m)
        for _ in range(m - 1):
            x = x * g
            seen.add(x.value)
        assert len(seen) == m - 1
    with pytest.raises(TrivialGroupError):
        primitive_root(2)


def test_rational_square_detection():
    rng = random.Random(13)
    for _ in range(200):
        q = Fraction(rng.randrange(1, 500), rng.randrange(1, 500))
        assert is_rational_square(q * q)
        assert rational_sqrt(q * q) in (q, -q)
    assert not is_rational_square(Fraction(2))
    assert not is_rational_square(Fraction(1, 8))
    assert not is_rational_square(Fraction(-4))
    assert is_rational_square(Fraction(0))


def test_quad_field_axioms_and_squares():
    rng = random.Random(17)
    for _ in range(200):
        d = rng.choice([-1, -7, 5, -3, 2])
        w = QuadFieldElement(Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)),
                             Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)), d)
        z = QuadFieldElement(rng.randrange(-9, 10), rng.randrange(-9, 10), d)
        assert (w + z) - z == w
        assert w * z == z * w
        if not z.is_zero():
            assert (w / z) * z == w
        assert (w * w).is_square()
        assert w.norm() == (w * w.conjugate()).a


def test_quad_field_nonsquares():
    # 2 + 0*i: a square in Q(i) would force a rational square root of 2
    assert not QuadFieldElement(2, 0, -1).is_square()
    assert QuadFieldElement(-1, 0, -1).is_square()
    assert QuadFieldElement(0, 2, -1).is_square()  # (1 + i)^2 = 2i
    with pytest.raises(ValueError):
        QuadFieldElement(1, 1, -1) + QuadFieldElement(1, 1, -7)
    with pytest.raises(ValueError):
        QuadFieldElement(0, 1, 4)


def test_gauss_sum_square_identity():
    for ell in primes_up_to(200):
        if ell == 2:
            continue
        sign = legendre_kronecker(ell - 1, ell)
        assert abs(gauss_sum_square(ell) - sign * ell) < 1e-9
