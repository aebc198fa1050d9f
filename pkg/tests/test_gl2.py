import random

import pytest

from locisog.arith import legendre_kronecker, primes_up_to
from locisog.errors import VerificationError
from locisog.gl2 import (CartanSpec, GL2Element, ProjPoint, act, action_profile,
                         cartan, fixed_point_count, fixed_points, nonsplit_conjugator,
                         normalizer_of_cartan, pgl_canonical, projective_order,
                         smallest_nonresidue, split_conjugator, standardize_cartan)

PRIMES = [p for p in primes_up_to(97)]


def _random_gl2(rng, ell):
    while True:
        a, b, c, d = (rng.randrange(ell) for _ in range(4))
        if (a * d - b * c) % ell:
            return GL2Element(a, b, c, d, ell)


def test_group_operations():
    rng = random.Random(2)
    for _ in range(300):
        ell = rng.choice(PRIMES)
        g = _random_gl2(rng, ell)
        h = _random_gl2(rng, ell)
        assert g * g.inverse() == GL2Element.identity(ell)
        assert (g * h).inverse() == h.inverse() * g.inverse()
        assert (g * h).det() == g.det() * h.det() % ell
        assert g ** 3 == g * g * g
        assert g ** -2 == (g.inverse()) ** 2
        assert GL2Element.from_code(g.code(), ell) == g


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        GL2Element(1, 2, 2, 4, 5)
    with pytest.raises(ValueError):
        GL2Element(0, 0, 0, 0, 3)


def test_projective_action_is_action():
    rng = random.Random(4)
    for _ in range(200):
        ell = rng.choice([2, 3, 5, 7, 11, 13])
        g = _random_gl2(rng, ell)
        h = _random_gl2(rng, ell)
        for p in ProjPoint.all_points(ell):
            assert act(g * h, p) == act(g, act(h, p))
    assert len(ProjPoint.all_points(7)) == 8


def test_fixed_points_match_action():
    rng = random.Random(6)
    for _ in range(300):
        ell = rng.choice(PRIMES)
        g = _random_gl2(rng, ell)
        fixed = {p for p in ProjPoint.all_points(ell) if act(g, p) == p}
        assert set(fixed_points(g)) == fixed
        assert fixed_point_count(g) == len(fixed)


# profile constraints: k in {0, 1, 2, ell+1}, non-trivial orbits all of size r,
# and sigma = (-1)^s for odd ell
def test_action_profile_properties():
    rng = random.Random(8)
    for _ in range(10 ** 4):
        ell = rng.choice(PRIMES)
        g = _random_gl2(rng, ell)
        prof = action_profile(g)
        assert prof.k in (0, 1, 2, ell + 1)
        assert all(t == prof.r for t in prof.orbit_sizes if t > 1)
        assert sum(prof.orbit_sizes) == ell + 1
        if ell > 2:
            assert prof.sigma == (-1) ** prof.s
        prof.validate()


def test_sigma_is_multiplicative():
    rng = random.Random(10)
    for _ in range(200):
        ell = rng.choice([3, 5, 7, 11, 13])
        g = _random_gl2(rng, ell)
        h = _random_gl2(rng, ell)
        assert (action_profile(g * h).sigma
                == action_profile(g).sigma * action_profile(h).sigma)


def test_sigma_detects_nonsquare_determinant():
    # for odd ell the permutation sign equals the quadratic character of det
    rng = random.Random(12)
    for _ in range(300):
        ell = rng.choice([3, 5, 7, 11, 13, 17])
        g = _random_gl2(rng, ell)
        assert action_profile(g).sigma == legendre_kronecker(g.det(), ell)


def test_projective_order_and_canonical():
    rng = random.Random(14)
    for _ in range(200):
        ell = rng.choice([3, 5, 7, 11])
        g = _random_gl2(rng, ell)
        r = projective_order(g)
        assert (g ** r).is_scalar()
        assert all(not (g ** i).is_scalar() for i in range(1, r))
        scaled = GL2Element(*[x * 2 % ell for x in g.entries()], ell) if ell > 2 else g
        assert pgl_canonical(scaled) == pgl_canonical(g)


def test_cartan_sizes():
    for ell in (3, 5, 7, 11):
        assert len(cartan("split", ell)) == (ell - 1) ** 2
        assert len(cartan("nonsplit", ell)) == ell * ell - 1
    assert len(cartan("nonsplit", 2)) == 3
    with pytest.raises(ValueError):
        cartan("split", 2)
    with pytest.raises(ValueError):
        cartan("nonsplit", 2, delta=1)
    with pytest.raises(ValueError):
        cartan("sideways", 5)


def test_cartan_is_closed_and_abelian():
    for kind, ell in (("split", 5), ("nonsplit", 5), ("split", 7), ("nonsplit", 2)):
        C = cartan(kind, ell)
        for g in C:
            assert g.inverse() in C
        els = sorted(C, key=lambda g: g.code())[:12]
        for g in els:
            for h in els:
                assert g * h in C
                assert g * h == h * g


def test_normalizer_doubles_cartan():
    for kind, ell in (("split", 5), ("nonsplit", 7), ("nonsplit", 13)):
        C = cartan(kind, ell)
        N = normalizer_of_cartan(C)
        assert len(N) == 2 * len(C)
        assert C < N
        for w in sorted(N - C, key=lambda g: g.code())[:6]:
            for g in sorted(C, key=lambda g: g.code())[:6]:
                assert w * g * w.inverse() in C


def test_conjugators_diagonalize():
    rng = random.Random(16)
    for _ in range(300):
        ell = rng.choice([3, 5, 7, 11, 13])
        g = _random_gl2(rng, ell)
        if g.is_scalar():
            continue
        disc = (g.trace() ** 2 - 4 * g.det()) % ell
        chi = legendre_kronecker(disc, ell)
        if chi == 1:
            w = split_conjugator(g)
            m = g.conjugate_by(w.inverse())
            assert m.entries()[1] == m.entries()[2] == 0
        elif chi == -1:
            delta = smallest_nonresidue(ell)
            w = nonsplit_conjugator(g, delta)
            a, b, c, d = g.conjugate_by(w.inverse()).entries()
            assert a == d and b == delta * c % ell


def test_standardize_cartan_roundtrip():
    for kind, ell in (("split", 7), ("nonsplit", 7), ("split", 11), ("nonsplit", 3)):
        C = cartan(kind, ell)
        spec = standardize_cartan(C)
        assert spec.kind == kind
        assert spec.elements() == C
        assert normalizer_of_cartan(C) == spec.normalizer()
    spec2 = standardize_cartan(cartan("nonsplit", 2))
    assert spec2.kind == "nonsplit" and spec2.ell == 2


def test_profile_validation_catches_lies():
    good = action_profile(GL2Element(1, 1, 0, 1, 5))
    bad = type(good)(good.ell, good.r, 3, good.s, good.sigma, good.orbit_sizes)
    with pytest.raises(VerificationError):
        bad.validate()
