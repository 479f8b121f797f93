"""Integral cohomology ring of a universal hyperplane/curve family.

Two presets are supported: the universal hyperplane section of a cubic
fourfold (a Zariski locally trivial P^4-fibration over the rank-23 middle
lattice) and the universal curve of a primitive genus-g linear system on a
K3 surface (a P^{g-1}-bundle over the rank-22 lattice).  The ring is the
projective-bundle module over the ambient cohomology with one tautological
relation expressing H^{f+1} in lower H-powers through alternating powers
of the ambient polarization; the relation is certified at build time by an
independent divisor-lift degree oracle, exhaustively over all top-degree
monomials.

Degrees are real (even) cohomological degrees throughout.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd

from .abelian import (
    FinAbGroup,
    IntegerMatrix,
    middle_cohomology,
    solve,
)
from .lattices import Lattice, orthogonal_complement, pairing, standard_lattice, standard_vectors


class BadPreset(ValueError):
    pass


class DegreeOverflow(ValueError):
    pass


class NoDualClass(ValueError):
    pass


class IndexOutOfRange(ValueError):
    pass


class MissingDistinguishedVector(ValueError):
    pass


CUBIC = "cubic_fourfold"
K3 = "k3_linear_system"


@dataclass(frozen=True)
class AmbientPreset:
    """Geometry data for the family: ambient middle lattice, fibration shape."""

    kind: str
    lattice: Lattice
    distinguished: tuple      # h^2, resp. c1(L), in the lattice basis
    fiber_dim: int            # projective fiber dimension of q (f)
    base_dim: int             # dim of the base projective space (N)
    top_degree: int           # deg of the top polarization power on the ambient
    genus: int = 0

    def __post_init__(self):
        object.__setattr__(self, "distinguished",
                           self.lattice.check_vector(self.distinguished))


def cubic_preset(lattice=None, h2=None) -> AmbientPreset:
    if lattice is None:
        lattice = standard_lattice("cubic_h4_default")
        h2 = standard_vectors("cubic_h4_default")["h2"]
    if h2 is None:
        raise BadPreset("a distinguished h^2 vector is required")
    if lattice.rank != 23:
        raise BadPreset("cubic middle lattice must have rank 23")
    if abs(lattice.gram.determinant()) != 1:
        raise BadPreset("cubic middle lattice must be unimodular")
    if pairing(lattice, h2, h2) != 3:
        raise BadPreset("the distinguished vector must have square 3")
    return AmbientPreset(CUBIC, lattice, tuple(h2), fiber_dim=4, base_dim=5, top_degree=3)


def k3_preset(g, lattice=None, c1=None) -> AmbientPreset:
    if g < 2:
        raise BadPreset("genus must be at least 2")
    if lattice is None:
        lattice = _k3_default_lattice()
        c1 = (1, g - 1) + (0,) * 20
    if c1 is None:
        raise BadPreset("a distinguished c1(L) vector is required")
    if lattice.rank != 22:
        raise BadPreset("K3 lattice must have rank 22")
    if abs(lattice.gram.determinant()) != 1:
        raise BadPreset("K3 lattice must be unimodular")
    content = 0
    for x in c1:
        content = gcd(content, x)
    if content != 1:
        raise BadPreset("c1(L) must be primitive")
    if pairing(lattice, c1, c1) != 2 * g - 2:
        raise BadPreset("c1(L)^2 must equal 2g-2")
    return AmbientPreset(K3, lattice, tuple(c1), fiber_dim=g - 1, base_dim=g,
                         top_degree=2 * g - 2, genus=g)


def _k3_default_lattice():
    from .lattices import direct_sum
    return direct_sum(standard_lattice("U"), standard_lattice("U"), standard_lattice("U"),
                      standard_lattice("E8", negate=True), standard_lattice("E8", negate=True),
                      label="k3_default")


class _Ambient:
    """Graded cohomology ring of the ambient (X or S), exact integer arithmetic.

    Values are ints in the one-dimensional degrees and coordinate tuples in
    the middle degree.
    """

    def __init__(self, preset: AmbientPreset):
        self.preset = preset
        self.lattice = preset.lattice
        self.dist = preset.distinguished
        if preset.kind == CUBIC:
            self.top = 8
            self.middle = 4
            self.ranks = {0: 1, 2: 1, 4: self.lattice.rank, 6: 1, 8: 1}
        else:
            self.top = 4
            self.middle = 2
            self.ranks = {0: 1, 2: self.lattice.rank, 4: 1}

    def rank(self, degree):
        return self.ranks.get(degree, 0)

    def zero_value(self, degree):
        return (0,) * self.lattice.rank if degree == self.middle else 0

    def is_zero(self, degree, value):
        if degree == self.middle:
            return all(x == 0 for x in value)
        return value == 0

    def add(self, degree, a, b):
        if degree == self.middle:
            return tuple(x + y for x, y in zip(a, b))
        return a + b

    def scale(self, degree, c, a):
        if degree == self.middle:
            return tuple(c * x for x in a)
        return c * a

    def mul(self, d1, v1, d2, v2):
        """Product; returns (degree, value) or None when it vanishes."""
        d = d1 + d2
        if d > self.top:
            return None
        if d1 > d2:
            d1, v1, d2, v2 = d2, v2, d1, v1
        if d1 == 0:
            return (d2, self.scale(d2, v1, v2))
        if self.preset.kind == CUBIC:
            if (d1, d2) == (2, 2):
                return (4, self.scale(4, v1 * v2, self.dist))
            if (d1, d2) == (2, 4):
                # h . alpha = <alpha, h^2> lambda, lambda the degree-6 generator
                return (6, v1 * pairing(self.lattice, v2, self.dist))
            if (d1, d2) == (2, 6):
                return (8, v1 * v2)
            if (d1, d2) == (4, 4):
                return (8, pairing(self.lattice, v1, v2))
            return None
        # K3 ambient
        if (d1, d2) == (2, 2):
            return (4, pairing(self.lattice, v1, v2))
        return None

    def integrate(self, degree, value) -> int:
        return value if degree == self.top else 0

    def ell(self, power):
        """(degree, value) of the polarization power, or None when zero."""
        if power == 0:
            return (0, 1)
        if self.preset.kind == CUBIC:
            if power == 1:
                return (2, 1)
            if power == 2:
                return (4, self.dist)
            if power == 3:
                return (6, 3)
            if power == 4:
                return (8, 3)
            return None
        if power == 1:
            return (2, self.dist)
        if power == 2:
            return (4, self.preset.top_degree)
        return None

    def basis_values(self, degree):
        if degree == self.middle:
            n = self.lattice.rank
            return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
        if self.rank(degree):
            return [1]
        return []

    def coords(self, degree, value):
        if degree == self.middle:
            return list(value)
        return [value] if self.rank(degree) else []


class SectionRingClass:
    """Homogeneous class sum_i q*(x_i) . H^i with x_i in ambient degree deg-2i."""

    __slots__ = ("ring", "degree", "comps")

    def __init__(self, ring, degree, comps):
        self.ring = ring
        self.degree = degree
        self.comps = {i: v for i, v in comps.items()
                      if not ring.ambient.is_zero(degree - 2 * i, v)}

    def is_zero(self):
        return not self.comps

    def __add__(self, other):
        if self.degree != other.degree or self.ring is not other.ring:
            raise DegreeOverflow("cannot add classes of different degrees")
        amb = self.ring.ambient
        comps = dict(self.comps)
        for i, v in other.comps.items():
            d = self.degree - 2 * i
            comps[i] = amb.add(d, comps.get(i, amb.zero_value(d)), v)
        return SectionRingClass(self.ring, self.degree, comps)

    def __rmul__(self, scalar):
        amb = self.ring.ambient
        return SectionRingClass(self.ring, self.degree,
                                {i: amb.scale(self.degree - 2 * i, scalar, v)
                                 for i, v in self.comps.items()})

    def __eq__(self, other):
        return (isinstance(other, SectionRingClass)
                and self.degree == other.degree
                and self.comps == other.comps)

    def __repr__(self):
        return f"SectionRingClass(deg={self.degree}, comps={self.comps})"


class SectionRing:
    """Ring handle for H*(Y, Z) of the universal family; immutable after build."""

    def __init__(self, preset: AmbientPreset):
        self.preset = preset
        self.ambient = _Ambient(preset)
        self.f = preset.fiber_dim
        self.N = preset.base_dim
        self.dim = preset.base_dim + (3 if preset.kind == CUBIC else 1)  # complex dim of Y
        self.top = 2 * self.dim
        self.d = 3 if preset.kind == CUBIC else 1   # fiber dimension of p
        self._certify()

    # --- constructors -------------------------------------------------

    def zero(self, degree):
        return SectionRingClass(self, degree, {})

    def one(self):
        return SectionRingClass(self, 0, {0: 1})

    def pullback(self, ambient_degree, value):
        """q* of an ambient class."""
        if not self.ambient.rank(ambient_degree):
            raise DegreeOverflow(f"no ambient classes in degree {ambient_degree}")
        return SectionRingClass(self, ambient_degree, {0: value})

    def h_power(self, j):
        """The class H^j, reduced into the basis when j exceeds the fiber dimension."""
        if j <= self.f:
            return SectionRingClass(self, 2 * j, {j: 1})
        cls = SectionRingClass(self, 2 * self.f, {self.f: 1})
        H = SectionRingClass(self, 2, {1: 1})
        for _ in range(j - self.f):
            cls = self.cup(cls, H)
        return cls

    def fiber_class(self):
        """Class of a fiber of p, i.e. H^N reduced into the basis."""
        return self.h_power(self.N)

    def xi_family(self):
        """The duality classes: (1, q*h, q*b, q*(bh)) resp. (1, q*beta)."""
        b = dual_class(self.preset)
        if self.preset.kind == CUBIC:
            bh = self.ambient.mul(4, b, 2, 1)
            return (self.one(),
                    self.pullback(2, 1),
                    self.pullback(4, b),
                    self.pullback(6, bh[1]))
        return (self.one(), self.pullback(2, b))

    # --- ring structure -----------------------------------------------

    def graded_rank(self, degree):
        if degree < 0 or degree > self.top:
            return 0
        return sum(self.ambient.rank(degree - 2 * i) for i in range(self.f + 1))

    def graded_ranks(self):
        return tuple(self.graded_rank(k) for k in range(self.top + 1))

    def cup(self, x: SectionRingClass, y: SectionRingClass) -> SectionRingClass:
        degree = x.degree + y.degree
        if degree > self.top:
            raise DegreeOverflow(f"product degree {degree} exceeds {self.top}")
        amb = self.ambient
        raw = {}
        for i, xv in x.comps.items():
            for j, yv in y.comps.items():
                prod = amb.mul(x.degree - 2 * i, xv, y.degree - 2 * j, yv)
                if prod is None:
                    continue
                pd, pv = prod
                k = i + j
                raw[k] = amb.add(pd, raw.get(k, amb.zero_value(pd)), pv)
        return SectionRingClass(self, degree, self._reduce(degree, raw))

    def _reduce(self, degree, comps):
        """Rewrite H-powers above the fiber dimension via the tautological relation."""
        amb = self.ambient
        while True:
            over = [i for i, v in comps.items()
                    if i > self.f and not amb.is_zero(degree - 2 * i, v)]
            if not over:
                break
            i = max(over)
            v = comps.pop(i)
            a = degree - 2 * i
            for t in range(1, self.f + 2):
                ell = amb.ell(t)
                if ell is None:
                    continue
                prod = amb.mul(a, v, ell[0], ell[1])
                if prod is None:
                    continue
                pd, pv = prod
                sign = 1 if t % 2 == 1 else -1
                k = i - t
                comps[k] = amb.add(pd, comps.get(k, amb.zero_value(pd)),
                                   amb.scale(pd, sign, pv))
        return comps

    def push_to_base(self, x: SectionRingClass) -> dict:
        """p_* as a dict {j: coefficient of H^j on the base}.

        Computed through the ambient-product lift: multiply by the divisor
        class (ell (x) 1 + 1 (x) H) and integrate over the ambient factor.
        """
        amb = self.ambient
        result = {}
        for i, v in x.comps.items():
            a = x.degree - 2 * i
            ell = amb.ell(1)
            prod = amb.mul(a, v, ell[0], ell[1]) if ell else None
            if prod is not None:
                c = amb.integrate(prod[0], prod[1])
                if c and i <= self.N:
                    result[i] = result.get(i, 0) + c
            c = amb.integrate(a, v)
            if c and i + 1 <= self.N:
                result[i + 1] = result.get(i + 1, 0) + c
        return {j: c for j, c in result.items() if c}

    def deg(self, x: SectionRingClass) -> int:
        """Total degree (integral over Y) of a top-degree class."""
        if x.degree != self.top:
            return 0
        return self.push_to_base(x).get(self.N, 0)

    # --- certification -------------------------------------------------

    def _lift_degree(self, a, b):
        """deg over the ambient product of (ell^a H^b (ell + H))."""
        amb = self.ambient
        total = 0
        for extra_ell, hpow in ((1, b), (0, b + 1)):
            if hpow != self.N:
                continue
            ell = amb.ell(a + extra_ell)
            if ell is not None:
                total += amb.integrate(ell[0], ell[1])
        return total

    def _certify(self):
        """Two-way top-degree oracle over all monomials ell^a H^b."""
        half_top = self.ambient.top // 2
        for a in range(half_top + 1):
            b = self.dim - a
            if b < 0:
                continue
            ell = self.ambient.ell(a)
            if ell is None:
                continue
            cls = self.cup(self.pullback(ell[0], ell[1]), self.h_power(b))
            if self.deg(cls) != self._lift_degree(a, b):
                raise BadPreset(
                    f"tautological relation failed certification at monomial ({a},{b})")

    def basis(self, degree):
        """Tags (i, s) enumerating the graded basis of H^degree."""
        tags = []
        for i in range(self.f + 1):
            a = degree - 2 * i
            for s in range(self.ambient.rank(a)):
                tags.append((i, s))
        return tags

    def coords(self, x: SectionRingClass):
        amb = self.ambient
        out = []
        for i in range(self.f + 1):
            a = x.degree - 2 * i
            if not amb.rank(a):
                continue
            v = x.comps.get(i, amb.zero_value(a))
            out.extend(amb.coords(a, v))
        return out

    def basis_class(self, degree, tag):
        i, s = tag
        a = degree - 2 * i
        return SectionRingClass(self, degree, {i: self.ambient.basis_values(a)[s]})


def build_ring(preset: AmbientPreset) -> SectionRing:
    return SectionRing(preset)


def _as_ring(preset_or_ring):
    if isinstance(preset_or_ring, SectionRing):
        return preset_or_ring
    return build_ring(preset_or_ring)


def dual_class(preset: AmbientPreset):
    """A class pairing to 1 with the distinguished vector."""
    functional = preset.lattice.gram.apply(preset.distinguished)
    b = solve(IntegerMatrix([functional]), (1,))
    if b is None:
        raise NoDualClass("the distinguished vector has divisibility > 1")
    return b


def decomposition_gram(preset_or_ring) -> IntegerMatrix:
    """Matrix of deg(xi_i . xi_{d-j} . [fiber]); lower triangular, unit diagonal."""
    ring = _as_ring(preset_or_ring)
    xi = ring.xi_family()
    fiber = ring.fiber_class()
    d = ring.d
    rows = []
    for i in range(d + 1):
        row = []
        for j in range(d + 1):
            total = xi[i].degree + xi[d - j].degree + fiber.degree
            if total != ring.top:
                row.append(0)
                continue
            row.append(ring.deg(ring.cup(ring.cup(xi[i], xi[d - j]), fiber)))
        rows.append(row)
    return IntegerMatrix(rows)


def lambda_cohomology(preset_or_ring, k: int) -> FinAbGroup:
    """Middle cohomology of the two-sided base/family complex in weight k."""
    ring = _as_ring(preset_or_ring)
    if k < 0 or k > 2 * ring.N - 1:
        raise IndexOutOfRange(f"k must lie in 0..{2 * ring.N - 1}")
    d = ring.d
    m = k + d
    if m % 2 == 1 or ring.graded_rank(m) == 0:
        return FinAbGroup.trivial()
    tags = ring.basis(m)
    xi = ring.xi_family()

    in_cols = []
    for i in range((d - 1) // 2 + 1):
        base_deg = m - 2 * i
        if base_deg < 0 or base_deg > 2 * ring.N or base_deg % 2:
            continue
        cls = ring.cup(ring.h_power(base_deg // 2), xi[i])
        in_cols.append(ring.coords(cls))
    f_mat = IntegerMatrix.from_columns(len(tags), in_cols)

    out_rows = []
    for j in range((d + 1) // 2, d + 1):
        base_deg = m - 2 * j
        if base_deg < 0 or base_deg > 2 * ring.N or base_deg % 2:
            continue
        row = []
        for tag in tags:
            pushed = ring.push_to_base(ring.cup(ring.basis_class(m, tag), xi[d - j]))
            row.append(pushed.get(base_deg // 2, 0))
        out_rows.append(row)
    g_mat = IntegerMatrix(out_rows) if out_rows else IntegerMatrix([[0] * len(tags)])

    result = middle_cohomology(f_mat, g_mat)
    if result.torsion:
        warnings.warn(f"lambda cohomology at k={k} has torsion {result.torsion}",
                      stacklevel=2)
    return result


def lambda_complex_matrices(preset_or_ring, k: int):
    """The (incoming, outgoing) matrices of the weight-k complex, for diagnostics."""
    ring = _as_ring(preset_or_ring)
    if k < 0 or k > 2 * ring.N - 1:
        raise IndexOutOfRange(f"k must lie in 0..{2 * ring.N - 1}")
    d = ring.d
    m = k + d
    tags = ring.basis(m)
    xi = ring.xi_family()
    in_cols = []
    for i in range((d - 1) // 2 + 1):
        base_deg = m - 2 * i
        if base_deg < 0 or base_deg > 2 * ring.N or base_deg % 2:
            continue
        in_cols.append(ring.coords(ring.cup(ring.h_power(base_deg // 2), xi[i])))
    out_rows = []
    for j in range((d + 1) // 2, d + 1):
        base_deg = m - 2 * j
        if base_deg < 0 or base_deg > 2 * ring.N or base_deg % 2:
            continue
        row = []
        for tag in tags:
            pushed = ring.push_to_base(ring.cup(ring.basis_class(m, tag), xi[d - j]))
            row.append(pushed.get(base_deg // 2, 0))
        out_rows.append(row)
    f_mat = IntegerMatrix.from_columns(len(tags), in_cols)
    g_mat = IntegerMatrix(out_rows) if out_rows else IntegerMatrix([[0] * len(tags)])
    return f_mat, g_mat


def h1_pairing_gram(preset_or_ring) -> Lattice:
    """Pairing (u, v) -> deg(u . v . H^{N-1}) on kernel representatives.

    Representatives are pullbacks of a basis of the orthogonal complement
    of the distinguished vector; the result carries the induced Gram.
    """
    ring = _as_ring(preset_or_ring)
    preset = ring.preset
    basis, _ = orthogonal_complement(preset.lattice, [preset.distinguished])
    mid = ring.ambient.middle
    reps = [ring.pullback(mid, basis.column(j)) for j in range(basis.cols)]
    power = ring.h_power(ring.N - 1)
    gram = [[ring.deg(ring.cup(ring.cup(u, v), power)) for v in reps] for u in reps]
    return Lattice(len(reps), IntegerMatrix(gram), "h1-pairing")


def sigma_perp(preset: AmbientPreset, sigma_generators):
    """Orthogonal complement of the span of Sigma, the model of H^1(B, Lambda).

    Sigma must contain the distinguished vector.
    """
    gens = [preset.lattice.check_vector(v) for v in sigma_generators]
    if not gens:
        raise MissingDistinguishedVector("Sigma is empty")
    span = IntegerMatrix.from_columns(preset.lattice.rank, gens)
    if solve(span, preset.distinguished) is None:
        raise MissingDistinguishedVector(
            "Sigma does not contain the distinguished vector")
    basis, complement = orthogonal_complement(preset.lattice, gens)
    return basis, complement, FinAbGroup.free(basis.cols)


def threefold_cohomology(defect: int, b3: int) -> dict:
    """Integral cohomology table of a threefold section with the given defect."""
    if defect < 0 or b3 < 0:
        raise ValueError("defect and b3 must be nonnegative")
    table = {k: FinAbGroup.trivial() for k in range(7)}
    table[0] = FinAbGroup.free(1)
    table[2] = FinAbGroup.free(1)
    table[3] = FinAbGroup.free(b3)
    table[4] = FinAbGroup.free(1 + defect)
    table[6] = FinAbGroup.free(1)
    return table
