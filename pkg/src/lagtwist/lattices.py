"""Integral lattices with symmetric bilinear forms.

A lattice is a free Z-module of finite rank with a symmetric integer Gram
matrix in a fixed basis.  Vectors are plain integer tuples in that basis.
Named constructions cover the hyperbolic plane U, the root lattices A2 and
E8, unit lattices, and two rank-23/24 defaults used by the cubic-fourfold
and OG10 reports (see `standard_lattice`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .abelian import (
    DimensionMismatch,
    FinAbGroup,
    IntegerMatrix,
    cokernel,
    kernel,
    smith_normal_form,
)


class UnknownLatticeName(ValueError):
    pass


class ZeroVector(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    rank: int
    gram: IntegerMatrix
    label: str = ""

    def __post_init__(self):
        if self.gram.rows != self.rank or self.gram.cols != self.rank:
            raise DimensionMismatch("gram size does not match rank")
        if self.gram != self.gram.transpose():
            raise ValueError("gram matrix must be symmetric")

    def check_vector(self, v):
        v = tuple(int(x) for x in v)
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} in rank-{self.rank} lattice")
        return v

    def is_even(self):
        return all(self.gram.entries[i][i] % 2 == 0 for i in range(self.rank))

    def rescale(self, scale):
        gram = IntegerMatrix([[scale * x for x in row] for row in self.gram.entries])
        suffix = f"({scale})" if scale != 1 else ""
        return Lattice(self.rank, gram, self.label + suffix)

    def negate(self):
        return self.rescale(-1)


@dataclass(frozen=True)
class LatticeInvariants:
    rank: int
    signature: tuple          # (positive, negative, zero)
    determinant: int
    discriminant_group: FinAbGroup
    discriminant_form: tuple = field(default=())  # residues mod 2Z, even lattices only

    def same_up_to_sign(self, other):
        """Equal invariants after flipping the sign of one of the forms."""
        p, n, z = self.signature
        return (self.rank == other.rank
                and (n, p, z) == other.signature
                and abs(self.determinant) == abs(other.determinant)
                and self.discriminant_group == other.discriminant_group)


_U = [[0, 1], [1, 0]]
_A2 = [[2, -1], [-1, 2]]
# Bourbaki numbering: chain 1-3-4-5-6-7-8 with node 2 attached to node 4
_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def _e8_gram():
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2
    for i, j in _E8_EDGES:
        g[i][j] = g[j][i] = -1
    return g


def direct_sum(*lattices, label=""):
    total = sum(lat.rank for lat in lattices)
    gram = [[0] * total for _ in range(total)]
    offset = 0
    for lat in lattices:
        for i in range(lat.rank):
            for j in range(lat.rank):
                gram[offset + i][offset + j] = lat.gram.entries[i][j]
        offset += lat.rank
    name = label or " + ".join(lat.label for lat in lattices if lat.label)
    return Lattice(total, IntegerMatrix(gram), name)


def standard_lattice(name, n=None, scale=1, negate=False) -> Lattice:
    """Named lattice, optionally rescaled or negated.

    Recognized names: U, A2, E8, unit (needs n), cubic_h4_default,
    og10_h2_default.
    """
    key = name.lower()
    if key == "u":
        lat = Lattice(2, IntegerMatrix(_U), "U")
    elif key == "a2":
        lat = Lattice(2, IntegerMatrix(_A2), "A2")
    elif key == "e8":
        lat = Lattice(8, IntegerMatrix(_e8_gram()), "E8")
    elif key == "unit":
        if n is None:
            raise UnknownLatticeName("unit lattice needs a rank")
        lat = Lattice(n, IntegerMatrix.identity(n), f"unit({n})")
    elif key == "cubic_h4_default":
        # odd unimodular diag(1^21, -1^2); h^2 = e1+e2+e3 has square 3
        diag = [1] * 21 + [-1] * 2
        gram = [[diag[i] if i == j else 0 for j in range(23)] for i in range(23)]
        lat = Lattice(23, IntegerMatrix(gram), "cubic_h4_default")
    elif key == "og10_h2_default":
        lat = direct_sum(
            standard_lattice("U"), standard_lattice("U"), standard_lattice("U"),
            standard_lattice("E8", negate=True), standard_lattice("E8", negate=True),
            standard_lattice("A2", negate=True),
            label="og10_h2_default")
    else:
        raise UnknownLatticeName(name)
    if negate:
        lat = lat.negate()
    if scale != 1:
        lat = lat.rescale(scale)
    return lat


def standard_vectors(name):
    """Distinguished vectors that ship with the named lattices."""
    key = name.lower()
    if key == "cubic_h4_default":
        h2 = (1, 1, 1) + (0,) * 20
        return {"h2": h2}
    if key == "og10_h2_default":
        theta = (1,) + (0,) * 23
        eta = (0, 1) + (0,) * 22
        return {"theta": theta, "eta": eta}
    return {}


def pairing(lattice: Lattice, v, w) -> int:
    v = lattice.check_vector(v)
    w = lattice.check_vector(w)
    gw = lattice.gram.apply(w)
    return sum(a * b for a, b in zip(v, gw))


def divisibility(lattice: Lattice, v) -> int:
    """gcd of the pairings of v against a lattice basis."""
    v = lattice.check_vector(v)
    if all(x == 0 for x in v):
        raise ZeroVector("divisibility of the zero vector")
    d = 0
    for x in lattice.gram.apply(v):
        d = gcd(d, x)
    if d == 0:
        raise ValueError("vector pairs to zero with the whole lattice (degenerate)")
    return d


def orthogonal_complement(lattice: Lattice, vectors):
    """Saturated orthogonal complement of a set of vectors.

    Returns (basis matrix with basis columns, complement Lattice with the
    induced Gram).
    """
    vectors = [lattice.check_vector(v) for v in vectors]
    if not vectors:
        basis = IntegerMatrix.identity(lattice.rank)
        return basis, lattice
    pairing_rows = IntegerMatrix([lattice.gram.apply(v) for v in vectors])
    rank, basis = kernel(pairing_rows)
    induced = basis.transpose() @ lattice.gram @ basis
    return basis, Lattice(rank, induced, lattice.label + "-perp" if lattice.label else "")


def saturation(lattice: Lattice, vectors) -> IntegerMatrix:
    """Basis (columns) of the primitive closure of the span of the vectors."""
    vectors = [lattice.check_vector(v) for v in vectors]
    if not vectors:
        return IntegerMatrix.from_columns(lattice.rank, [])
    m = IntegerMatrix.from_columns(lattice.rank, vectors)
    snf = smith_normal_form(m)
    r = snf.rank()
    u_inv = _unimodular_inverse(snf.U)
    return IntegerMatrix.from_columns(lattice.rank, [u_inv.column(i) for i in range(r)])


def is_saturated(lattice: Lattice, vectors) -> bool:
    vectors = [lattice.check_vector(v) for v in vectors]
    if not vectors:
        return True
    m = IntegerMatrix.from_columns(lattice.rank, vectors)
    snf = smith_normal_form(m)
    diag = snf.diagonal()
    if snf.rank() != len(vectors):
        return False
    return all(d == 1 for d in diag if d != 0)


def sublattice(lattice: Lattice, basis: IntegerMatrix, label=""):
    induced = basis.transpose() @ lattice.gram @ basis
    return Lattice(basis.cols, induced, label)


def _unimodular_inverse(m: IntegerMatrix) -> IntegerMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = m.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m.entries)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = [[a[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return IntegerMatrix([[int(x) for x in row] for row in out])


def signature(lattice: Lattice):
    """Exact signature (p, n, z) by rational congruence diagonalization."""
    n = lattice.rank
    a = [[Fraction(x) for x in row] for row in lattice.gram.entries]
    pos = neg = zero = 0
    t = 0
    while t < n:
        if a[t][t] == 0:
            swap = next((j for j in range(t + 1, n) if a[j][j] != 0), None)
            if swap is not None:
                a[t], a[swap] = a[swap], a[t]
                for row in a:
                    row[t], row[swap] = row[swap], row[t]
            else:
                # all remaining diagonal entries vanish; a hyperbolic move
                # a[t] += a[j] makes the diagonal entry 2*a[t][j] != 0
                j = next((j for j in range(t + 1, n) if a[t][j] != 0), None)
                if j is None:
                    off = any(a[i][k] != 0 for i in range(t, n) for k in range(t, n))
                    if not off:
                        zero += n - t
                        break
                    t += 1
                    zero += 1
                    continue
                for k in range(n):
                    a[t][k] += a[j][k]
                for row in a:
                    row[t] += row[j]
        pivot = a[t][t]
        if pivot == 0:
            zero += 1
            t += 1
            continue
        for i in range(t + 1, n):
            if a[i][t] != 0:
                f = a[i][t] / pivot
                for k in range(n):
                    a[i][k] -= f * a[t][k]
                for row in a:
                    row[i] -= f * row[t]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        t += 1
    return (pos, neg, zero)


def invariants(lattice: Lattice) -> LatticeInvariants:
    det = lattice.gram.determinant()
    disc = cokernel(lattice.gram)
    form_values = ()
    if lattice.is_even() and det != 0:
        form_values = tuple(_discriminant_form_values(lattice))
    return LatticeInvariants(
        rank=lattice.rank,
        signature=signature(lattice),
        determinant=det,
        discriminant_group=disc,
        discriminant_form=form_values,
    )


def _discriminant_form_values(lattice: Lattice):
    """q(generator) mod 2Z on the discriminant-group generators of an even lattice."""
    snf = smith_normal_form(lattice.gram)
    u_inv = _unimodular_inverse(snf.U)
    gram_inv = _fraction_inverse(lattice.gram)
    values = []
    for i in range(lattice.rank):
        d = snf.D.entries[i][i]
        if d <= 1:
            continue
        x = u_inv.column(i)
        q = sum(Fraction(x[r]) * gram_inv[r][c] * x[c]
                for r in range(lattice.rank) for c in range(lattice.rank))
        num, den = q.numerator, q.denominator
        values.append(Fraction(num % (2 * den), den))
    return values


def _fraction_inverse(m: IntegerMatrix):
    n = m.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m.entries)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [[a[i][n + j] for j in range(n)] for i in range(n)]
