import random
from fractions import Fraction

import pytest

from locisog.arith import is_prime
from locisog.ecfp import (LocalData, ScanReport, count_points, local_isogeny_admitted,
                          local_scan, reduce_and_count)
from locisog.ecq import COUNTEREXAMPLE_CURVE, WeierstrassCurve
from locisog.errors import VerificationError


def _dumb_count(E, p):
    """Walk every (x, y) pair against the full Weierstrass equation."""
    a1, a2, a3, a4, a6 = (int(c) % p for c in E.coefficients())
    total = 1
    for x in range(p):
        rhs = ((x + a2) * x + a4) * x + a6
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                total += 1
    return total


def _random_integral_curve(rng, span=20):
    while True:
        try:
            return WeierstrassCurve(*(rng.randrange(-span, span + 1) for _ in range(5)))
        except ValueError:
            continue


def test_naive_count_against_pair_walk():
    rng = random.Random(53)
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        for _ in range(6):
            E = _random_integral_curve(rng)
            if int(E.discriminant()) % p == 0:
                continue
            assert count_points(E, p, method="naive") == _dumb_count(E, p)


def test_bsgs_matches_naive():
    rng = random.Random(59)
    for p in (1009, 2003, 4099, 65537):
        for _ in range(3):
            E = _random_integral_curve(rng)
            if int(E.discriminant()) % p == 0:
                continue
            n_naive = count_points(E, p, method="naive")
            n_bsgs = count_points(E, p, method="bsgs", seed=rng.randrange(10 ** 6))
            assert n_bsgs == n_naive


def test_counts_respect_hasse():
    rng = random.Random(61)
    for _ in range(40):
        E = _random_integral_curve(rng)
        p = rng.choice([101, 103, 107, 109, 113])
        if int(E.discriminant()) % p == 0:
            continue
        a_p = p + 1 - count_points(E, p)
        assert a_p * a_p <= 4 * p


def test_count_points_rejects_p2_and_bad_reduction():
    with pytest.raises(ValueError):
        count_points(COUNTEREXAMPLE_CURVE, 2)
    with pytest.raises(ValueError):
        count_points(COUNTEREXAMPLE_CURVE, 7)  # 7 divides the discriminant
    with pytest.raises(ValueError):
        count_points(COUNTEREXAMPLE_CURVE, 11, method="bogus")
    with pytest.raises(ValueError):
        count_points(WeierstrassCurve(0, 0, 0, 1, 1), 3, method="bsgs")


def test_count_points_rejects_denominators_colliding_with_p():
    E = WeierstrassCurve(0, 0, 0, Fraction(1, 5), 1)
    with pytest.raises(ValueError):
        count_points(E, 5)
    assert count_points(E, 7) == count_points(WeierstrassCurve(0, 0, 0, 3, 1), 7)


def test_supersingular_reduction_of_the_counterexample():
    data = reduce_and_count(COUNTEREXAMPLE_CURVE, 3)
    assert data.good and data.count == 4 and data.a_p == 0
    assert data.supersingular


def test_local_data_validation():
    with pytest.raises(VerificationError):
        LocalData(11, True, count=12, a_p=5)  # 12 != 11 + 1 - 5
    with pytest.raises(VerificationError):
        LocalData(11, True, count=25, a_p=-13)  # |a_p| > 2 sqrt(11)
    with pytest.raises(ValueError):
        LocalData(11, False, count=12, a_p=0)
    assert LocalData(11, True, count=12, a_p=0).supersingular is False


def test_admission_matches_eigenvalue_search():
    rng = random.Random(67)
    for _ in range(300):
        ell = rng.choice([2, 3, 5, 7, 11])
        p = rng.choice([101, 103, 107, 109, 113, 127, 131])
        if p == ell:
            continue
        a_p = rng.randrange(-20, 21)
        if a_p * a_p > 4 * p:
            continue
        data = LocalData(p, True, count=p + 1 - a_p, a_p=a_p)
        brute = any((t * t - a_p * t + p) % ell == 0 for t in range(ell))
        assert local_isogeny_admitted(data, ell) == brute


def test_admission_rejects_bad_and_equal_primes():
    with pytest.raises(ValueError):
        local_isogeny_admitted(LocalData(11, False), 7)
    with pytest.raises(ValueError):
        local_isogeny_admitted(LocalData(7, True, count=8, a_p=0), 7)


def test_local_scan_structure():
    report = local_scan(COUNTEREXAMPLE_CURVE, 7, bound=100)
    primes = [p for p in range(2, 101) if is_prime(p)]
    assert isinstance(report, ScanReport)
    assert report.ell == 7 and report.bound == 100
    assert [e.p for e in report.entries] == primes
    by_p = {e.p: e for e in report.entries}
    assert by_p[2].status == "skipped" and "unsupported" in by_p[2].note
    assert by_p[7].status == "skipped" and "excluded" in by_p[7].note
    assert by_p[5].status == "bad_reduction"
    for p in (3, 11, 13, 97):
        assert by_p[p].status == "admitted"
    assert report.all_admitted
    assert set(report.admitted) | set(report.skipped) | {5} == set(primes)


def test_local_scan_finds_rejections():
    # y^2 = x^3 + x + 1 has no rational 2-isogeny and the scan should say so fast
    E = WeierstrassCurve(0, 0, 0, 1, 1)
    report = local_scan(E, 2, bound=60)
    assert report.rejected
    assert not report.all_admitted
    for e in report.entries:
        if e.status == "rejected":
            assert e.a_p % 2 == 1


def test_scan_skips_denominator_collisions():
    E = WeierstrassCurve(0, 0, 0, Fraction(1, 13), 1)
    report = local_scan(E, 5, bound=30)
    by_p = {e.p: e for e in report.entries}
    assert by_p[13].status == "skipped" and "collide" in by_p[13].note


def test_reduce_and_count_roundtrip():
    rng = random.Random(71)
    for _ in range(25):
        E = _random_integral_curve(rng)
        p = rng.choice([31, 37, 41, 43])
        if int(E.discriminant()) % p == 0:
            continue
        data = reduce_and_count(E, p)
        assert data.p == p and data.good
        assert data.count == count_points(E, p)
        assert data.a_p == p + 1 - data.count
