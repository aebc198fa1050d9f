"""The group-theoretic heart of the local-global question: classify
semisimple subgroups of GL_2(F_ell) against Cartan subgroups and their
normalizers, test whether every element fixes a line while no line is fixed
globally, verify the dihedral conclusions over all enumerated conjugacy
classes, and construct the explicit groups that realize them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import _require_prime, legendre_kronecker, primitive_root
from .errors import NotSemisimpleError, VerificationError
from .gl2 import (CartanSpec, GL2Element, ProjPoint, _in_standard_cartan,
                  _in_standard_normalizer, act, action_profile, cartan,
                  fixed_point_count, nonsplit_conjugator, projective_order,
                  smallest_nonresidue, split_conjugator)
from .subgroups import (Subgroup, _decode, _group_codes, _inv_codes,
                        _mul_codes, enumerate_subgroups, from_elements)

CASE_CARTAN = "CartanContained"
CASE_NORMALIZER = "NormalizerNotCartan"
CASE_EXCEPTIONAL = "Exceptional"

_EXCEPTIONAL_SHAPES = {
    (12, frozenset((1, 2, 3))): "A4",
    (24, frozenset((1, 2, 3, 4))): "S4",
    (60, frozenset((1, 2, 3, 5))): "A5",
}


def projective_image_order(G: Subgroup) -> int:
    scalars = sum(1 for g in G.elements if g.is_scalar())
    return G.order // scalars


def omega_orbit_sizes(G: Subgroup) -> tuple[int, ...]:
    """Sorted sizes of the orbits of G on the ell + 1 lines."""
    gens = G.generators
    seen: set[ProjPoint] = set()
    sizes = []
    for p in ProjPoint.all_points(G.ell):
        if p in seen:
            continue
        orbit = {p}
        frontier = [p]
        while frontier:
            q = frontier.pop()
            for g in gens:
                r = act(g, q)
                if r not in orbit:
                    orbit.add(r)
                    frontier.append(r)
        seen |= orbit
        sizes.append(len(orbit))
    return tuple(sorted(sizes))


def common_fixed_count(G: Subgroup) -> int:
    """|Omega^G|: lines fixed by the whole group (= by its generators)."""
    gens = G.generators
    return sum(1 for p in ProjPoint.all_points(G.ell)
               if all(act(g, p) == p for g in gens))


def sigma_nontrivial(G: Subgroup) -> bool:
    """Whether some element acts as an odd permutation of the lines.

    The sign is a homomorphism, so checking generators suffices.
    """
    return any(action_profile(g).sigma == -1 for g in G.generators)


def lemma1_hypothesis(G: Subgroup) -> bool:
    """Every element fixes a line, no line is fixed by all of G, and the
    image is not contained in the kernel of the permutation sign."""
    if not sigma_nontrivial(G):
        return False
    if common_fixed_count(G) != 0:
        return False
    return all(fixed_point_count(g) > 0 for g in G.elements)


@dataclass(frozen=True)
class ClassificationResult:
    """Which branch of the semisimple trichotomy a subgroup falls in."""

    case: str
    projective_image_structure: str
    witness: CartanSpec | None
    proj_order: int
    exceptional_type: str | None = None


def _torus_witness(g0: GL2Element) -> CartanSpec:
    """The Cartan subgroup through a non-scalar semisimple g0, as a spec."""
    ell = g0.ell
    if ell == 2:
        std = cartan("nonsplit", 2)
        for code in range(1, 16):
            try:
                w = GL2Element.from_code(code, 2)
            except ValueError:
                continue
            if w.inverse() * g0 * w in std:
                return CartanSpec("nonsplit", 2, None, w)
        raise ValueError("%r lies in no Cartan subgroup of GL2(F_2)" % (g0,))
    disc = (g0.trace() ** 2 - 4 * g0.det()) % ell
    chi = legendre_kronecker(disc, ell)
    if chi == 0:
        raise ValueError("%r has a repeated eigenvalue; not in any Cartan" % (g0,))
    if chi == 1:
        return CartanSpec("split", ell, None, split_conjugator(g0))
    delta = smallest_nonresidue(ell)
    return CartanSpec("nonsplit", ell, delta, nonsplit_conjugator(g0, delta))


def _all_in_pattern(G: Subgroup, spec: CartanSpec, pattern) -> bool:
    if G.ell == 2:
        target = cartan("nonsplit", 2)
        if pattern is _in_standard_normalizer:
            return True  # N(C) is all of GL2(F_2)
        w, wi = spec.conjugator, spec.conjugator.inverse()
        return all(wi * g * w in target for g in G.elements)
    w, wi = spec.conjugator, spec.conjugator.inverse()
    return all(pattern(wi * g * w, spec.kind, spec.delta) for g in G.elements)


def brute_cartan_witness(G: Subgroup, normalizer: bool = False) -> CartanSpec | None:
    """Exhaustive conjugator scan against the standard Cartan patterns.

    Slow fallback/oracle for small ell: tries every w in GL_2(F_ell) and
    every kind, returns the first spec whose (normalizer) pattern contains
    w^-1 G w, or None.
    """
    ell = G.ell
    if ell == 2:
        std = cartan("nonsplit", 2)
        for code in range(16):
            try:
                w = GL2Element.from_code(code, 2)
            except ValueError:
                continue
            wi = w.inverse()
            if normalizer or all(wi * g * w in std for g in G.elements):
                return CartanSpec("nonsplit", 2, None, w)
        return None
    group = _group_codes(ell)
    ginv = _inv_codes(group, ell)
    codes = np.array(G.element_codes, dtype=np.int64)
    delta = smallest_nonresidue(ell)
    # rows of w^-1 * g * w for every candidate w
    rows = _mul_codes(_mul_codes(ginv[:, None], codes[None, :], ell), group[:, None], ell)
    a, b, c, d = _decode(rows, ell)
    split_c = (b == 0) & (c == 0)
    anti = (a == 0) & (d == 0)
    ns_c = (a == d) & (b == delta * c % ell)
    ns_coset = (a == (-d) % ell) & (b == (-delta * c) % ell)
    if normalizer:
        split_ok = (split_c | anti).all(axis=1)
        ns_ok = (ns_c | ns_coset).all(axis=1)
    else:
        split_ok = split_c.all(axis=1)
        ns_ok = ns_c.all(axis=1)
    hit = np.flatnonzero(split_ok)
    if len(hit):
        return CartanSpec("split", ell, None,
                          GL2Element.from_code(int(group[hit[0]]), ell))
    hit = np.flatnonzero(ns_ok)
    if len(hit):
        return CartanSpec("nonsplit", ell, delta,
                          GL2Element.from_code(int(group[hit[0]]), ell))
    return None


def _verify_inverting_coset(G: Subgroup, spec: CartanSpec) -> None:
    """Check the dihedral relation: conjugation by any element outside the
    Cartan inverts the Cartan part modulo scalars."""
    w, wi = spec.conjugator, spec.conjugator.inverse()

    def in_c(g):
        if G.ell == 2:
            return wi * g * w in cartan("nonsplit", 2)
        return _in_standard_cartan(wi * g * w, spec.kind, spec.delta)

    torus = [g for g in G.elements if in_c(g)]
    coset = [g for g in G.elements if not in_c(g)]
    if not coset or 2 * len(torus) != G.order:
        raise VerificationError("Cartan part of %r does not have index 2" % (G,))
    x = coset[0]
    for g in torus:
        if not (x * g * x.inverse() * g).is_scalar():
            raise VerificationError(
                "conjugation by the outer coset of %r does not invert the torus" % (G,))


def classify(G: Subgroup) -> ClassificationResult:
    """The trichotomy for semisimple subgroups: inside a Cartan (cyclic
    projective image), inside a Cartan normalizer but not the Cartan
    (dihedral image), or exceptional (A4, S4, A5).

    Containment witnesses are found by conjugating a common eigenbasis into
    standard position, with a brute-force conjugator scan as fallback for
    ell <= 7.
    """
    ell = G.ell
    if G.order % ell == 0:
        raise NotSemisimpleError(
            "|G| = %d is divisible by ell = %d; classification needs order prime to ell"
            % (G.order, ell))
    proj = projective_image_order(G)
    nonscalar = [g for g in G.elements if not g.is_scalar()]
    if not nonscalar:
        kind = "nonsplit" if ell == 2 else "split"
        spec = CartanSpec(kind, ell, None, GL2Element.identity(ell))
        return ClassificationResult(CASE_CARTAN, "cyclic(1)", spec, 1)
    if G.is_abelian():
        spec = _torus_witness(nonscalar[0])
        if not _all_in_pattern(G, spec, _in_standard_cartan):
            spec = brute_cartan_witness(G) if ell <= 7 else None
            if spec is None:
                raise VerificationError(
                    "abelian semisimple %r escaped every Cartan subgroup" % (G,))
        return ClassificationResult(CASE_CARTAN, "cyclic(%d)" % proj, spec, proj)
    for g0 in nonscalar:
        spec = _torus_witness(g0)
        if _all_in_pattern(G, spec, _in_standard_normalizer):
            _verify_inverting_coset(G, spec)
            return ClassificationResult(CASE_NORMALIZER, "dihedral(%d)" % proj,
                                        spec, proj)
    if ell <= 7:
        spec = brute_cartan_witness(G, normalizer=True)
        if spec is not None:
            _verify_inverting_coset(G, spec)
            return ClassificationResult(CASE_NORMALIZER, "dihedral(%d)" % proj,
                                        spec, proj)
    shape = _EXCEPTIONAL_SHAPES.get(
        (proj, frozenset(projective_order(g) for g in G.elements)))
    if shape is None:
        raise VerificationError(
            "%r fits no branch of the semisimple trichotomy" % (G,))
    return ClassificationResult(CASE_EXCEPTIONAL, shape, None, proj,
                                exceptional_type=shape)


@dataclass(frozen=True)
class LemmaReport:
    """Observed conclusions for one hypothesis-satisfying subgroup."""

    ell: int
    order: int
    hypothesis_met: bool
    n: int
    cartan_kind: str
    proper_containment: bool
    ell_mod_4: int
    has_orbit_of_size_2: bool
    orbit_sizes: tuple[int, ...]
    generator_entries: tuple[tuple[int, int, int, int], ...]

    def validate(self) -> None:
        """Raise VerificationError unless all four conclusions hold."""
        if not self.hypothesis_met:
            return
        problems = []
        if self.n <= 1 or self.n % 2 == 0:
            problems.append("projective image is not dihedral of twice-odd order (n=%d)" % self.n)
        elif ((self.ell - 1) // 2) % self.n:
            problems.append("n = %d does not divide (ell-1)/2 = %d"
                            % (self.n, (self.ell - 1) // 2))
        if self.cartan_kind != "split":
            problems.append("not inside the normalizer of a split Cartan (kind=%r)"
                            % self.cartan_kind)
        if not self.proper_containment:
            problems.append("containment in the normalizer is not proper")
        if self.ell_mod_4 != 3:
            problems.append("ell = %d is not 3 mod 4" % self.ell)
        if not self.has_orbit_of_size_2:
            problems.append("no orbit of size 2 (orbit sizes %r)" % (self.orbit_sizes,))
        if problems:
            raise VerificationError(
                "ell=%d, |G|=%d, generators %r: %s"
                % (self.ell, self.order, self.generator_entries, "; ".join(problems)))


def lemma_report(G: Subgroup) -> LemmaReport:
    """Fill a LemmaReport for a group satisfying lemma1_hypothesis."""
    if not lemma1_hypothesis(G):
        raise ValueError("subgroup does not satisfy the everywhere-local hypothesis")
    sizes = omega_orbit_sizes(G)
    gens = tuple(g.entries() for g in G.generators)
    try:
        res = classify(G)
    except NotSemisimpleError:
        return LemmaReport(G.ell, G.order, True, 0, "none", False, G.ell % 4,
                           2 in sizes, sizes, gens)
    if res.case == CASE_NORMALIZER:
        kind = res.witness.kind
        nsize = 2 * (G.ell - 1) ** 2 if kind == "split" else 2 * (G.ell ** 2 - 1)
        n = res.proj_order // 2
        proper = G.order < nsize
    else:
        kind, n, proper = "none", 0, False
    return LemmaReport(G.ell, G.order, True, n, kind, proper, G.ell % 4,
                       2 in sizes, sizes, gens)


def lemma1_verify(ell: int, expensive: bool = False) -> tuple[LemmaReport, ...]:
    """Check the four conclusions on every conjugacy class satisfying the
    hypothesis; raises VerificationError on any violation, returns the
    reports (possibly none)."""
    reports = []
    for G in enumerate_subgroups(ell, expensive=expensive):
        if not lemma1_hypothesis(G):
            continue
        rep = lemma_report(G)
        rep.validate()
        reports.append(rep)
    return tuple(reports)


def construct_prop3_group(ell: int, n: int) -> Subgroup:
    """The dihedral-image group witnessing the hypothesis: all diagonal and
    antidiagonal matrices with entries alpha^i, alpha^j where i = j mod d,
    d = (ell-1)/n.  Order 2(ell-1)^2/d; n = (ell-1)/2 gives the same-parity
    construction."""
    _require_prime(ell)
    if ell <= 3 or ell % 4 != 3:
        raise ValueError("need a prime ell > 3 with ell = 3 mod 4, got %d" % ell)
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3, got %d" % n)
    if ((ell - 1) // 2) % n:
        raise ValueError("n = %d does not divide (ell-1)/2 = %d" % (n, (ell - 1) // 2))
    d = (ell - 1) // n
    alpha = int(primitive_root(ell))
    pw = [pow(alpha, e, ell) for e in range(ell - 1)]
    els = []
    for i in range(ell - 1):
        for j in range(i % d, ell - 1, d):
            els.append(GL2Element(pw[i], 0, 0, pw[j], ell))
            els.append(GL2Element(0, pw[i], pw[j], 0, ell))
    gens = (GL2Element(alpha, 0, 0, alpha, ell),
            GL2Element(1, 0, 0, pw[d], ell),
            GL2Element(0, 1, 1, 0, ell))
    G = from_elements(els, generators=gens)
    if G.order != 2 * (ell - 1) ** 2 // d:
        raise VerificationError("constructed group has order %d, expected %d"
                                % (G.order, 2 * (ell - 1) ** 2 // d))
    return G
