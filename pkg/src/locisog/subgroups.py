"""Subgroups of GL_2(F_ell) as explicit element sets: generated closures,
conjugacy testing, and exhaustive enumeration of conjugacy classes for small
ell.

Matrices are packed into the integer code ((a*ell + b)*ell + c)*ell + d, an
order-preserving bijection with row-major entry tuples, so whole subgroups
live in sorted numpy arrays and the inner loops (closure, conjugation,
normalizers) are vectorized.  Enumeration proceeds by iterated one-element
extension of known class representatives until a fixpoint; candidates are
taken one per orbit of the normalizer acting on the complement (conjugate
candidates generate conjugate extensions), and identification is exact
against a table holding every conjugate element-set of every known class.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .arith import _require_prime
from .errors import VerificationError
from .gl2 import GL2Element

ENUMERABLE_CHEAP = (2, 3, 5, 7)
ENUMERABLE_EXPENSIVE = (11,)

_CHUNK = 1 << 21  # element budget per vectorized conjugation slab


def _decode(codes, ell):
    d = codes % ell
    r = codes // ell
    c = r % ell
    r = r // ell
    return r // ell, r % ell, c, d


def _encode(a, b, c, d, ell):
    return ((a * ell + b) * ell + c) * ell + d


def _id_code(ell: int) -> int:
    return _encode(1, 0, 0, 1, ell)


def _mul_codes(u, v, ell):
    a1, b1, c1, d1 = _decode(u, ell)
    a2, b2, c2, d2 = _decode(v, ell)
    return _encode((a1 * a2 + b1 * c2) % ell, (a1 * b2 + b1 * d2) % ell,
                   (c1 * a2 + d1 * c2) % ell, (c1 * b2 + d1 * d2) % ell, ell)


@lru_cache(maxsize=None)
def _inv_table(ell: int):
    t = np.zeros(ell, dtype=np.int64)
    for x in range(1, ell):
        t[x] = pow(x, -1, ell)
    return t


def _inv_codes(codes, ell):
    a, b, c, d = _decode(codes, ell)
    di = _inv_table(ell)[(a * d - b * c) % ell]
    return _encode(d * di % ell, (-b * di) % ell, (-c * di) % ell, a * di % ell, ell)


@lru_cache(maxsize=None)
def _group_codes(ell: int):
    """Sorted codes of every invertible matrix over F_ell."""
    _require_prime(ell)
    codes = np.arange(ell ** 4, dtype=np.int64)
    a, b, c, d = _decode(codes, ell)
    return codes[(a * d - b * c) % ell != 0]


@lru_cache(maxsize=None)
def _code_index(ell: int):
    """code -> position in _group_codes(ell), or -1."""
    g = _group_codes(ell)
    idx = np.full(ell ** 4, -1, dtype=np.int64)
    idx[g] = np.arange(len(g))
    return idx


def _closure_codes(gen_codes, ell):
    """Sorted codes of the subgroup generated by gen_codes (BFS over products)."""
    member = np.zeros(ell ** 4, dtype=bool)
    member[_id_code(ell)] = True
    gens = np.unique(np.asarray(gen_codes, dtype=np.int64))
    frontier = gens[~member[gens]]
    member[frontier] = True
    while len(frontier):
        prod = np.unique(_mul_codes(frontier[:, None], gens[None, :], ell))
        frontier = prod[~member[prod]]
        member[frontier] = True
    return np.flatnonzero(member).astype(np.int64)


def _sorted_key(codes) -> bytes:
    # big-endian so byte order == numeric lexicographic order
    return codes.astype(">i4").tobytes()


class Subgroup:
    """A subgroup of GL_2(F_ell) held as the sorted array of element codes."""

    __slots__ = ("ell", "_codes", "_gen_codes", "_el_cache")

    def __init__(self, ell: int, codes, gen_codes: tuple[int, ...]):
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "_codes", codes)
        object.__setattr__(self, "_gen_codes", tuple(int(c) for c in gen_codes))
        object.__setattr__(self, "_el_cache", None)

    def __setattr__(self, *args):
        raise AttributeError("Subgroup is immutable")

    @property
    def order(self) -> int:
        return len(self._codes)

    @property
    def elements(self) -> tuple[GL2Element, ...]:
        if self._el_cache is None:
            els = tuple(GL2Element.from_code(int(c), self.ell) for c in self._codes)
            object.__setattr__(self, "_el_cache", els)
        return self._el_cache

    @property
    def generators(self) -> tuple[GL2Element, ...]:
        return tuple(GL2Element.from_code(c, self.ell) for c in self._gen_codes)

    @property
    def element_codes(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self._codes)

    def contains(self, g: GL2Element) -> bool:
        if g.ell != self.ell:
            raise ValueError("mixed moduli %d and %d" % (self.ell, g.ell))
        i = int(np.searchsorted(self._codes, g.code()))
        return i < len(self._codes) and int(self._codes[i]) == g.code()

    def contains_code(self, code: int) -> bool:
        i = int(np.searchsorted(self._codes, code))
        return i < len(self._codes) and int(self._codes[i]) == code

    def is_abelian(self) -> bool:
        gens = self._gen_codes
        for i, u in enumerate(gens):
            for v in gens[i + 1:]:
                if _mul_codes(np.int64(u), np.int64(v), self.ell) != \
                        _mul_codes(np.int64(v), np.int64(u), self.ell):
                    return False
        return True

    def det_image_size(self) -> int:
        a, b, c, d = _decode(self._codes, self.ell)
        return len(np.unique((a * d - b * c) % self.ell))

    def element_order_multiset(self) -> tuple[int, ...]:
        ell, codes = self.ell, self._codes
        cur = codes.copy()
        orders = np.zeros(len(codes), dtype=np.int64)
        ident = _id_code(ell)
        k = 1
        while True:
            fresh = (cur == ident) & (orders == 0)
            orders[fresh] = k
            live = orders == 0
            if not live.any():
                break
            cur[live] = _mul_codes(cur[live], codes[live], ell)
            k += 1
            if k > 4 * ell * ell * ell:
                raise AssertionError("element order runaway; subgroup not closed?")
        return tuple(sorted(int(o) for o in orders))

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.ell == other.ell
                and len(self._codes) == len(other._codes)
                and bool((self._codes == other._codes).all()))

    def __hash__(self):
        return hash((self.ell, _sorted_key(self._codes)))

    def __repr__(self):
        return "Subgroup(ell=%d, order=%d)" % (self.ell, self.order)


def closure(generators, ell: int | None = None) -> Subgroup:
    """The subgroup generated by the given GL2Elements (trivial when empty)."""
    gens = list(generators)
    if not gens:
        if ell is None:
            raise ValueError("need ell to build the trivial subgroup from no generators")
        _require_prime(ell)
        return Subgroup(ell, np.array([_id_code(ell)], dtype=np.int64), ())
    mods = {g.ell for g in gens}
    if len(mods) != 1:
        raise ValueError("generators live over different moduli: %s" % sorted(mods))
    m = mods.pop()
    if ell is not None and ell != m:
        raise ValueError("generators live over F_%d, not F_%d" % (m, ell))
    codes = [g.code() for g in gens]
    return Subgroup(m, _closure_codes(codes, m), tuple(codes))


def from_elements(elements, generators=None) -> Subgroup:
    """Wrap an explicit element set, verifying it really is a subgroup."""
    els = sorted({g for g in elements}, key=lambda g: g.code())
    if not els:
        raise ValueError("a subgroup needs at least the identity")
    ell = els[0].ell
    if any(g.ell != ell for g in els):
        raise ValueError("mixed moduli in element set")
    codes = np.array(sorted(g.code() for g in els), dtype=np.int64)
    member = np.zeros(ell ** 4, dtype=bool)
    member[codes] = True
    if not member[_id_code(ell)]:
        raise ValueError("element set lacks the identity")
    prods = _mul_codes(codes[:, None], codes[None, :], ell)
    if not member[prods].all():
        raise ValueError("element set is not closed under multiplication")
    if generators is not None:
        gen_codes = tuple(g.code() for g in generators)
        gen = _closure_codes(gen_codes, ell)
        if len(gen) != len(codes) or (gen != codes).any():
            raise ValueError("stated generators do not generate the element set")
    else:
        gen_codes = tuple(int(c) for c in _greedy_generators(codes, ell))
    return Subgroup(ell, codes, gen_codes)


def _greedy_generators(codes, ell):
    target = len(codes)
    gens: list[int] = []
    have = np.array([_id_code(ell)], dtype=np.int64)
    if target == 1:
        return gens
    for c in codes:
        c = int(c)
        i = np.searchsorted(have, c)
        if i < len(have) and have[i] == c:
            continue
        gens.append(c)
        have = _closure_codes(gens, ell)
        if len(have) == target:
            return gens
    raise AssertionError("generator search failed; set not closed?")


def _conjugate_slabs(els, ell, conjugators=None):
    """Yield (slice, sorted-conjugate-rows) over chunks of conjugating elements."""
    group = _group_codes(ell) if conjugators is None else conjugators
    step = max(1, _CHUNK // max(1, len(els)))
    for i in range(0, len(group), step):
        g = group[i:i + step]
        gi = _inv_codes(g, ell)
        rows = _mul_codes(_mul_codes(g[:, None], els[None, :], ell), gi[:, None], ell)
        rows.sort(axis=1)
        yield slice(i, i + len(g)), rows


def _normalizer_mask(els, ell):
    group = _group_codes(ell)
    out = np.zeros(len(group), dtype=bool)
    for sl, rows in _conjugate_slabs(els, ell):
        out[sl] = (rows == els[None, :]).all(axis=1)
    return out


def conjugacy_key(G: Subgroup) -> tuple[int, ...]:
    """The lexicographically least element-code tuple among all conjugates."""
    best = None
    for _, rows in _conjugate_slabs(G._codes, G.ell):
        for r in np.unique(rows, axis=0):
            key = _sorted_key(r)
            if best is None or key < best:
                best = key
    return tuple(int(v) for v in np.frombuffer(best, dtype=">i4"))


def are_conjugate(G1: Subgroup, G2: Subgroup) -> bool:
    """Conjugacy in GL_2(F_ell), with cheap invariant rejections first."""
    if G1.ell != G2.ell:
        raise ValueError("mixed moduli %d and %d" % (G1.ell, G2.ell))
    if G1.order != G2.order:
        return False
    if G1.is_abelian() != G2.is_abelian():
        return False
    if G1.det_image_size() != G2.det_image_size():
        return False
    if G1.element_order_multiset() != G2.element_order_multiset():
        return False
    target = G2._codes
    for _, rows in _conjugate_slabs(G1._codes, G1.ell):
        if (rows == target[None, :]).all(axis=1).any():
            return True
    return False


def conjugating_element(G1: Subgroup, G2: Subgroup) -> GL2Element | None:
    """Some w with w G1 w^-1 = G2, or None."""
    if G1.ell != G2.ell or G1.order != G2.order:
        return None
    group = _group_codes(G1.ell)
    target = G2._codes
    for sl, rows in _conjugate_slabs(G1._codes, G1.ell):
        hit = np.flatnonzero((rows == target[None, :]).all(axis=1))
        if len(hit):
            return GL2Element.from_code(int(group[sl][hit[0]]), G1.ell)
    return None


def _orbit_reps_under(ngens, ell):
    """Positions of orbit minima for conjugation by <ngens> on all of GL_2."""
    group = _group_codes(ell)
    idx = _code_index(ell)
    n = len(group)
    labels = np.arange(n)
    perms = []
    for g in ngens:
        gi = int(_inv_codes(np.int64(g), ell))
        p = idx[_mul_codes(_mul_codes(np.int64(g), group, ell), np.int64(gi), ell)]
        perms.append(p)
        perms.append(np.argsort(p))
    while True:
        before = labels
        for p in perms:
            labels = np.minimum(labels, labels[p])
        if (labels == before).all():
            break
    return np.flatnonzero(labels == np.arange(n))


def enumerate_subgroups(ell: int, expensive: bool = False) -> tuple[Subgroup, ...]:
    """All conjugacy classes of subgroups of GL_2(F_ell), one representative
    each, sorted by (order, conjugacy key).

    ell in {2, 3, 5, 7} runs in seconds to minutes; ell = 11 only with
    expensive=True.
    """
    if ell in ENUMERABLE_EXPENSIVE:
        if not expensive:
            raise ValueError("ell = %d enumeration is expensive; pass expensive=True" % ell)
    elif ell not in ENUMERABLE_CHEAP:
        raise ValueError("subgroup enumeration supports ell in %s (+%s opt-in), got %d"
                         % (ENUMERABLE_CHEAP, ENUMERABLE_EXPENSIVE, ell))
    group = _group_codes(ell)

    classes: list[dict] = []
    seen: dict[bytes, int] = {}

    def register(els, gen_codes):
        canonical = None
        for _, rows in _conjugate_slabs(els, ell):
            for r in np.unique(rows, axis=0):
                key = _sorted_key(r)
                if canonical is None or key < canonical:
                    canonical = key
                seen.setdefault(key, len(classes))
        classes.append({"els": els, "gens": tuple(int(c) for c in gen_codes),
                        "key": canonical})

    register(np.array([_id_code(ell)], dtype=np.int64), ())
    qi = 0
    while qi < len(classes):
        rec = classes[qi]
        qi += 1
        els = rec["els"]
        if len(els) == len(group):
            continue
        nmask = _normalizer_mask(els, ell)
        ngens = _greedy_generators(group[nmask], ell)
        member = np.zeros(ell ** 4, dtype=bool)
        member[els] = True
        for pos in _orbit_reps_under(ngens, ell):
            x = int(group[pos])
            if member[x]:
                continue
            ext = _closure_codes(list(rec["gens"]) + [x], ell)
            if _sorted_key(ext) in seen:
                continue
            if len(rec["gens"]) + 1 > 3:
                raise VerificationError(
                    "subgroup of GL2(F_%d) needed more than 3 generators" % ell)
            register(ext, rec["gens"] + (x,))

    order = sorted(range(len(classes)),
                   key=lambda i: (len(classes[i]["els"]), classes[i]["key"]))
    return tuple(Subgroup(ell, classes[i]["els"], classes[i]["gens"]) for i in order)


def normalizer(G: Subgroup) -> Subgroup:
    """N_{GL_2}(G) as a subgroup (explicit scan; small ell only)."""
    mask = _normalizer_mask(G._codes, G.ell)
    codes = _group_codes(G.ell)[mask]
    return Subgroup(G.ell, codes, tuple(int(c) for c in _greedy_generators(codes, G.ell)))
