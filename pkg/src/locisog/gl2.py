"""GL_2 over a prime field: matrices, the projective line P^1(F_ell), the
permutation profile of a matrix acting on the ell + 1 lines, and Cartan
subgroups together with their normalizers.

Points of P^1 are the lines through the origin in F_ell^2; matrices act by
left multiplication on column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import _require_prime, legendre_kronecker, sqrt_mod
from .errors import VerificationError


class GL2Element:
    """An invertible 2x2 matrix [[a, b], [c, d]] over F_ell."""

    __slots__ = ("ell", "a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int, ell: int):
        _require_prime(ell)
        a, b, c, d = a % ell, b % ell, c % ell, d % ell
        if (a * d - b * c) % ell == 0:
            raise ValueError("singular matrix [[%d,%d],[%d,%d]] mod %d" % (a, b, c, d, ell))
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args):
        raise AttributeError("GL2Element is immutable")

    @classmethod
    def identity(cls, ell: int) -> "GL2Element":
        return cls(1, 0, 0, 1, ell)

    @classmethod
    def from_code(cls, code: int, ell: int) -> "GL2Element":
        d = code % ell
        code //= ell
        c = code % ell
        code //= ell
        b = code % ell
        a = code // ell
        return cls(a, b, c, d, ell)

    def code(self) -> int:
        """Pack the entries into ((a*ell + b)*ell + c)*ell + d."""
        return ((self.a * self.ell + self.b) * self.ell + self.c) * self.ell + self.d

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.ell

    def trace(self) -> int:
        return (self.a + self.d) % self.ell

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def __mul__(self, other: "GL2Element") -> "GL2Element":
        if not isinstance(other, GL2Element):
            return NotImplemented
        if other.ell != self.ell:
            raise ValueError("mixed moduli %d and %d" % (self.ell, other.ell))
        m = self.ell
        return GL2Element(self.a * other.a + self.b * other.c,
                          self.a * other.b + self.b * other.d,
                          self.c * other.a + self.d * other.c,
                          self.c * other.b + self.d * other.d, m)

    def inverse(self) -> "GL2Element":
        di = pow(self.det(), -1, self.ell)
        return GL2Element(self.d * di, -self.b * di, -self.c * di, self.a * di, self.ell)

    def __pow__(self, e: int) -> "GL2Element":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        out = GL2Element.identity(self.ell)
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate_by(self, g: "GL2Element") -> "GL2Element":
        return g * self * g.inverse()

    def __eq__(self, other):
        return (isinstance(other, GL2Element) and self.ell == other.ell
                and self.entries() == other.entries())

    def __hash__(self):
        return hash((self.ell, self.a, self.b, self.c, self.d))

    def __repr__(self):
        return "GL2Element(%d, %d, %d, %d, ell=%d)" % (self.a, self.b, self.c, self.d, self.ell)


class ProjPoint:
    """A point of P^1(F_ell), normalized to (1 : y) or (0 : 1)."""

    __slots__ = ("ell", "x", "y")

    def __init__(self, x: int, y: int, ell: int):
        _require_prime(ell)
        x, y = x % ell, y % ell
        if x != 0:
            xi = pow(x, -1, ell)
            x, y = 1, y * xi % ell
        elif y != 0:
            y = 1
        else:
            raise ValueError("(0 : 0) is not a projective point")
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, *args):
        raise AttributeError("ProjPoint is immutable")

    @classmethod
    def all_points(cls, ell: int) -> tuple["ProjPoint", ...]:
        """The ell + 1 lines: (1 : t) for t in F_ell, then (0 : 1)."""
        return tuple(cls(1, t, ell) for t in range(ell)) + (cls(0, 1, ell),)

    def __eq__(self, other):
        return (isinstance(other, ProjPoint) and self.ell == other.ell
                and self.x == other.x and self.y == other.y)

    def __hash__(self):
        return hash((self.ell, self.x, self.y))

    def __repr__(self):
        return "ProjPoint(%d, %d, ell=%d)" % (self.x, self.y, self.ell)


def act(g: GL2Element, p: ProjPoint) -> ProjPoint:
    """The image of the line p under left multiplication by g."""
    if g.ell != p.ell:
        raise ValueError("mixed moduli %d and %d" % (g.ell, p.ell))
    return ProjPoint(g.a * p.x + g.b * p.y, g.c * p.x + g.d * p.y, g.ell)


def fixed_points(g: GL2Element) -> tuple[ProjPoint, ...]:
    return tuple(p for p in ProjPoint.all_points(g.ell) if act(g, p) == p)


def fixed_point_count(g: GL2Element) -> int:
    """|Omega^g| without listing: via the characteristic polynomial discriminant."""
    if g.is_scalar():
        return g.ell + 1
    if g.ell == 2:
        return len(fixed_points(g))
    disc = (g.trace() ** 2 - 4 * g.det()) % g.ell
    chi = legendre_kronecker(disc, g.ell)
    return 2 if chi == 1 else (1 if chi == 0 else 0)


def projective_order(g: GL2Element) -> int:
    """Order of the image of g in PGL_2(F_ell)."""
    h, r = g, 1
    while not h.is_scalar():
        h = h * g
        r += 1
    return r


def pgl_canonical(g: GL2Element) -> GL2Element:
    """The lift of g's class in PGL_2 scaled so the first nonzero entry is 1."""
    for e in g.entries():
        if e:
            u = pow(e, -1, g.ell)
            return GL2Element(g.a * u, g.b * u, g.c * u, g.d * u, g.ell)
    raise AssertionError("zero matrix cannot be invertible")


@dataclass(frozen=True)
class ElementActionProfile:
    """Orbit statistics of one matrix on P^1(F_ell).

    r: order of the image in PGL_2; k: fixed points; s: number of orbits;
    sigma: sign of the permutation; orbit_sizes: sorted orbit sizes.
    """

    ell: int
    r: int
    k: int
    s: int
    sigma: int
    orbit_sizes: tuple[int, ...]

    def validate(self) -> None:
        n = self.ell + 1
        if self.k not in (0, 1, 2, n):
            raise VerificationError("profile %r: k not in {0, 1, 2, ell+1}" % (self,))
        if sum(self.orbit_sizes) != n:
            raise VerificationError("profile %r: orbit sizes do not cover P^1" % (self,))
        if sum(1 for t in self.orbit_sizes if t == 1) != self.k:
            raise VerificationError("profile %r: fixed-point count mismatch" % (self,))
        if any(t != self.r for t in self.orbit_sizes if t > 1):
            raise VerificationError("profile %r: non-trivial orbit size differs from r" % (self,))
        if self.sigma != (-1) ** (n - self.s):
            raise VerificationError("profile %r: sign inconsistent with orbit count" % (self,))


def action_profile(g: GL2Element) -> ElementActionProfile:
    """Full orbit decomposition of <g> acting on P^1(F_ell)."""
    pts = ProjPoint.all_points(g.ell)
    index = {p: i for i, p in enumerate(pts)}
    perm = [index[act(g, p)] for p in pts]
    seen = [False] * len(pts)
    sizes = []
    for i in range(len(pts)):
        if seen[i]:
            continue
        j, n = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        sizes.append(n)
    sizes.sort()
    k = sum(1 for t in sizes if t == 1)
    s = len(sizes)
    prof = ElementActionProfile(g.ell, projective_order(g), k, s,
                                (-1) ** (g.ell + 1 - s), tuple(sizes))
    prof.validate()
    return prof


def smallest_nonresidue(ell: int) -> int:
    for z in range(2, ell):
        if legendre_kronecker(z, ell) == -1:
            return z
    raise ValueError("no quadratic non-residue mod %d" % ell)


def cartan(kind: str, ell: int, delta: int | None = None) -> frozenset[GL2Element]:
    """The standard Cartan subgroup of GL_2(F_ell).

    split: diagonal matrices, order (ell-1)^2 (undefined for ell = 2).
    nonsplit: [[x, delta*y], [y, x]] for a non-residue delta, order ell^2 - 1;
    for ell = 2 the unique subgroup of order 3.
    """
    if kind not in ("split", "nonsplit"):
        raise ValueError("kind must be 'split' or 'nonsplit', got %r" % (kind,))
    _require_prime(ell)
    if kind == "split":
        if ell == 2:
            raise ValueError("split Cartan is undefined for ell = 2 "
                             "(the diagonal torus of GL2(F_2) is trivial)")
        return frozenset(GL2Element(a, 0, 0, d, ell)
                         for a in range(1, ell) for d in range(1, ell))
    if ell == 2:
        if delta is not None:
            raise ValueError("no usable non-residue mod 2; omit delta for ell = 2")
        return frozenset((GL2Element.identity(2), GL2Element(0, 1, 1, 1, 2),
                          GL2Element(1, 1, 1, 0, 2)))
    if delta is None:
        delta = smallest_nonresidue(ell)
    elif legendre_kronecker(delta, ell) != -1:
        raise ValueError("delta = %d is not a non-residue mod %d" % (delta, ell))
    out = []
    for x in range(ell):
        for y in range(ell):
            if x or y:
                out.append(GL2Element(x, delta * y, y, x, ell))
    return frozenset(out)


@dataclass(frozen=True)
class CartanSpec:
    """A Cartan subgroup given by kind and the conjugator from the standard copy.

    elements() = w * C_standard * w^-1 where w is the conjugator.
    """

    kind: str
    ell: int
    delta: int | None
    conjugator: GL2Element

    def elements(self) -> frozenset[GL2Element]:
        w = self.conjugator
        wi = w.inverse()
        return frozenset(w * m * wi for m in cartan(self.kind, self.ell, self.delta))

    def normalizer(self) -> frozenset[GL2Element]:
        w = self.conjugator
        wi = w.inverse()
        std = _standard_cartan_normalizer(self.kind, self.ell, self.delta)
        return frozenset(w * m * wi for m in std)


def _standard_cartan_normalizer(kind: str, ell: int, delta: int | None = None):
    if kind == "split":
        diag = cartan("split", ell)
        anti = frozenset(GL2Element(0, b, c, 0, ell)
                         for b in range(1, ell) for c in range(1, ell))
        return diag | anti
    if ell == 2:
        return frozenset(GL2Element(a, b, c, d, 2)
                         for a in range(2) for b in range(2)
                         for c in range(2) for d in range(2)
                         if (a * d - b * c) % 2)
    if delta is None:
        delta = smallest_nonresidue(ell)
    base = cartan("nonsplit", ell, delta)
    flip = GL2Element(1, 0, 0, -1, ell)
    return base | frozenset(m * flip for m in base)


def _eigenvector(g: GL2Element, lam: int) -> tuple[int, int]:
    """A nonzero vector with g*v = lam*v."""
    m = g.ell
    b, am = g.b % m, (lam - g.a) % m
    if b or am:
        return (b, am)
    return ((lam - g.d) % m, g.c % m)


def split_conjugator(g: GL2Element) -> GL2Element:
    """A matrix whose columns are eigenvectors of g (needs two rational eigenlines)."""
    m = g.ell
    disc = (g.trace() ** 2 - 4 * g.det()) % m
    s = sqrt_mod(disc, m)
    if s is None or s == 0:
        raise ValueError("matrix %r has no pair of distinct rational eigenvalues" % (g,))
    inv2 = pow(2, -1, m)
    l1 = (g.trace() + s) * inv2 % m
    l2 = (g.trace() - s) * inv2 % m
    v1, v2 = _eigenvector(g, l1), _eigenvector(g, l2)
    return GL2Element(v1[0], v2[0], v1[1], v2[1], m)


def nonsplit_conjugator(g: GL2Element, delta: int) -> GL2Element:
    """A matrix w with w^-1 g w in the standard nonsplit Cartan for this delta."""
    m = g.ell
    disc = (g.trace() ** 2 - 4 * g.det()) % m
    if disc == 0 or legendre_kronecker(disc, m) != -1:
        raise ValueError("matrix %r does not have conjugate irrational eigenvalues" % (g,))
    s = sqrt_mod(disc * pow(delta, -1, m), m)
    inv2 = pow(2, -1, m)
    # eigenvector (b, (d-a)/2 + (s/2) sqrt(delta)) = P + sqrt(delta) Q
    p_vec = (g.b % m, (g.d - g.a) * inv2 % m)
    q_vec = (0, s * inv2 % m)
    return GL2Element(q_vec[0], p_vec[0], q_vec[1], p_vec[1], m)


def _in_standard_cartan(m: GL2Element, kind: str, delta: int | None) -> bool:
    if kind == "split":
        return m.b == 0 and m.c == 0
    return m.a == m.d and m.b == delta * m.c % m.ell


def _in_standard_normalizer(m: GL2Element, kind: str, delta: int | None) -> bool:
    if kind == "split":
        return (m.b == 0 and m.c == 0) or (m.a == 0 and m.d == 0)
    if m.a == m.d and m.b == delta * m.c % m.ell:
        return True
    return m.a == (-m.d) % m.ell and m.b == (-delta * m.c) % m.ell


def standardize_cartan(C) -> CartanSpec:
    """Recognize a conjugate of a standard Cartan and return kind + conjugator.

    Validates the defining properties along the way: correct order, scalars
    inside, and simultaneous (anti)diagonalizability.
    """
    els = sorted(set(C), key=lambda g: g.code())
    if not els:
        raise ValueError("empty set is not a Cartan subgroup")
    ell = els[0].ell
    if any(g.ell != ell for g in els):
        raise ValueError("mixed moduli in Cartan candidate")
    for a in range(1, ell):
        if GL2Element(a, 0, 0, a, ell) not in set(els):
            raise ValueError("candidate does not contain all scalars")
    if ell == 2:
        if len(els) == 3 and set(els) == cartan("nonsplit", 2):
            return CartanSpec("nonsplit", 2, None, GL2Element.identity(2))
        raise ValueError("not a Cartan subgroup of GL2(F_2)")
    if len(els) == (ell - 1) ** 2:
        kind, delta = "split", None
    elif len(els) == ell * ell - 1:
        kind, delta = "nonsplit", smallest_nonresidue(ell)
    else:
        raise ValueError("order %d matches no Cartan subgroup of GL2(F_%d)"
                         % (len(els), ell))
    g0 = next((g for g in els if not g.is_scalar()), None)
    if g0 is None:
        raise ValueError("candidate is all scalars")
    w = split_conjugator(g0) if kind == "split" else nonsplit_conjugator(g0, delta)
    wi = w.inverse()
    for g in els:
        if not _in_standard_cartan(wi * g * w, kind, delta):
            raise ValueError("candidate is not simultaneously of Cartan form")
    return CartanSpec(kind, ell, delta, w)


def normalizer_of_cartan(C) -> frozenset[GL2Element]:
    """The normalizer of a Cartan subgroup (any conjugate copy)."""
    spec = standardize_cartan(C)
    if spec.ell == 2:
        return _standard_cartan_normalizer("nonsplit", 2)
    n = spec.normalizer()
    if not set(C) <= n:
        raise AssertionError("normalizer does not contain the Cartan it came from")
    return n
