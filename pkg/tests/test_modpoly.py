import random
from fractions import Fraction

import pytest

from locisog.arith import PrimeFieldElement, is_prime
from locisog.errors import ModPolyFormatError
from locisog.modpoly import (SHIPPED_LEVELS, FactorizationCertificate,
                             ModularPolynomial, _disc_shape, evaluate_at_j,
                             fp_linear_factor_count, fp_root_count, load_factors,
                             load_modpoly, rational_linear_factors,
                             shipped_certificate_factors, shipped_modpoly,
                             verify_certificate)

J_TARGET = Fraction(2268945, 128)

# good odd primes below 1100 where distinct roots of the level-7 specialization
# collapse to a single point because isogenous j-invariants collide mod p
COLLISION_PRIMES = (3, 11, 13, 17, 31, 37, 41, 59, 61, 73, 79, 241, 367, 577, 601, 1039)


def _parse(text):
    from locisog.modpoly import _parse_modpoly
    return _parse_modpoly(text.splitlines(), "inline")


def test_parse_minimal_symmetric_polynomial():
    M = _parse("""# comment
level 2
3 0 1
2 2 5
1 0 -7
""")
    assert M.level == 2 and M.degree == 3
    assert M.coefficient(3, 0) == 1 == M.coefficient(0, 3)
    assert M.coefficient(2, 2) == 5
    assert M.coefficient(0, 7) == 0


def test_parse_errors_name_source_and_line():
    with pytest.raises(ModPolyFormatError, match="missing 'level N'"):
        _parse("")
    with pytest.raises(ModPolyFormatError, match="inline:1"):
        _parse("3 0 1")
    with pytest.raises(ModPolyFormatError, match="expected 'i j c'"):
        _parse("level 2\n3 0\n")
    with pytest.raises(ModPolyFormatError, match="non-integer"):
        _parse("level 2\n3 0 x\n")
    with pytest.raises(ModPolyFormatError, match="i >= j"):
        _parse("level 2\n0 3 1\n")
    with pytest.raises(ModPolyFormatError, match="duplicate term"):
        _parse("level 2\n3 0 1\n3 0 1\n")
    with pytest.raises(ModPolyFormatError):
        _parse("level 2\n3 0 2\n")  # not monic


def test_load_modpoly_roundtrip(tmp_path):
    path = tmp_path / "phi.txt"
    path.write_text("level 2\n3 0 1\n1 1 4\n")
    M = load_modpoly(path)
    assert M.coefficient(1, 1) == 4
    with pytest.raises(OSError):
        load_modpoly(tmp_path / "absent.txt")


def test_shipped_levels_are_symmetric():
    assert SHIPPED_LEVELS == (2, 3, 5, 7)
    for ell in SHIPPED_LEVELS:
        M = shipped_modpoly(ell)
        assert M.level == ell and M.degree == ell + 1
        for (i, j), c in M.half_terms():
            assert M.coefficient(j, i) == c
    with pytest.raises(ValueError):
        shipped_modpoly(11)


def test_evaluate_at_j_shape():
    for ell in SHIPPED_LEVELS:
        M = shipped_modpoly(ell)
        coeffs = evaluate_at_j(M, J_TARGET)
        assert len(coeffs) == ell + 2
        assert coeffs[0] == 1
        assert all(isinstance(c, Fraction) for c in coeffs)
    # specializing at a root of Phi_2(X, j0) must vanish: j0 = 1728, X = 66^3
    M2 = shipped_modpoly(2)
    f = evaluate_at_j(M2, Fraction(1728))
    x = Fraction(66 ** 3)
    acc = Fraction(0)
    for c in f:
        acc = acc * x + c
    assert acc == 0


def _planted(rng):
    roots = []
    coeffs = [Fraction(1)]
    for _ in range(rng.randrange(1, 4)):
        num = rng.randrange(-8, 9)
        den = rng.randrange(1, 4)
        mult = rng.randrange(1, 3)
        r = Fraction(num, den)
        for _ in range(mult):
            roots.append(r)
            coeffs = [a - r * b for a, b in
                      zip(coeffs + [Fraction(0)], [Fraction(0)] + coeffs)]
    # attach a rootless quadratic so deflation has something left over
    tail = [Fraction(1), Fraction(0), Fraction(rng.randrange(1, 5))]
    out = [Fraction(0)] * (len(coeffs) + 2)
    for i, a in enumerate(coeffs):
        for k, b in enumerate(tail):
            out[i + k] += a * b
    return out, tuple(sorted(roots))


def test_rational_linear_factors_against_planted_roots():
    rng = random.Random(73)
    for _ in range(60):
        coeffs, roots = _planted(rng)
        assert rational_linear_factors(coeffs, seed=rng.randrange(100)) == roots


def test_rational_linear_factors_edge_cases():
    with pytest.raises(ValueError):
        rational_linear_factors([Fraction(0)])
    assert rational_linear_factors([Fraction(1), 0, 0]) == (0, 0)
    assert rational_linear_factors([Fraction(2), -3]) == (Fraction(3, 2),)
    assert rational_linear_factors([Fraction(1), 0, 1]) == ()


def test_counterexample_specialization_has_no_rational_root():
    f = evaluate_at_j(shipped_modpoly(7), J_TARGET)
    assert rational_linear_factors(f) == ()


def _eval_mod(f, x, p):
    acc = 0
    for c in f:
        acc = (acc * x + c) % p
    return acc


def _deflate(f, r, p):
    out = []
    acc = 0
    for c in f[:-1]:
        acc = (acc * r + c) % p
        out.append(acc)
    return out


def _brute_counts(f, p):
    distinct = 0
    mult = 0
    for r in range(p):
        if _eval_mod(f, r, p) == 0:
            distinct += 1
            g = f
            while len(g) > 1 and _eval_mod(g, r, p) == 0:
                g = _deflate(g, r, p)
                mult += 1
    return distinct, mult


def test_fp_counts_match_brute_force():
    M = shipped_modpoly(7)
    coeffs = evaluate_at_j(M, J_TARGET)
    for p in range(3, 500):
        if not is_prime(p) or p in (5, 7):
            continue
        jp = PrimeFieldElement(2268945 * pow(128, -1, p), p)
        f = [(c.numerator * pow(c.denominator, -1, p)) % p for c in coeffs]
        distinct, mult = _brute_counts(f, p)
        assert fp_root_count(M, jp) == distinct
        assert fp_linear_factor_count(M, jp) == mult
        assert mult >= distinct


def test_collision_primes_are_pinned():
    M = shipped_modpoly(7)
    for p in range(3, 1100):
        if not is_prime(p) or p in (5, 7):
            continue
        jp = PrimeFieldElement(2268945 * pow(128, -1, p), p)
        distinct = fp_root_count(M, jp)
        assert fp_linear_factor_count(M, jp) >= 2
        if p in COLLISION_PRIMES:
            assert distinct == 1
        else:
            assert distinct >= 2


def test_certificate_verifies_and_has_the_right_discriminants():
    target = tuple(evaluate_at_j(shipped_modpoly(7), J_TARGET))
    factors = shipped_certificate_factors()
    rep = verify_certificate(FactorizationCertificate(target, factors))
    assert rep and rep.product_matches and rep.detail == ""
    assert sorted(d.degree for d in rep.discriminants) == [2, 3, 3]
    assert all(d.matches_shape for d in rep.discriminants)
    assert all(d.disc < 0 for d in rep.discriminants)


def test_certificate_catches_perturbations():
    target = tuple(evaluate_at_j(shipped_modpoly(7), J_TARGET))
    factors = list(shipped_certificate_factors())
    bad = list(factors[0])
    bad[-1] += 1
    factors[0] = tuple(bad)
    rep = verify_certificate(FactorizationCertificate(target, tuple(factors)))
    assert not rep
    assert rep.detail


def test_disc_shape():
    assert _disc_shape(Fraction(-7))
    assert _disc_shape(Fraction(-28))
    assert _disc_shape(Fraction(-63))
    assert _disc_shape(Fraction(-7, 4))
    assert not _disc_shape(Fraction(7))
    assert not _disc_shape(Fraction(-14))
    assert not _disc_shape(Fraction(-7, 8))
    assert not _disc_shape(Fraction(0))


def test_load_factors_errors(tmp_path):
    path = tmp_path / "factors.txt"
    path.write_text("1, 2, junk\n")
    with pytest.raises(ModPolyFormatError, match="factors.txt:1"):
        load_factors(path)
    path.write_text("0, 2, 3\n")
    with pytest.raises(ModPolyFormatError, match="leading"):
        load_factors(path)
    path.write_text("# nothing\n")
    with pytest.raises(ModPolyFormatError, match="no factors"):
        load_factors(path)
    path.write_text("1, -3\n2, 1\n")
    assert load_factors(path) == ((1, -3), (2, 1))
