"""Exact linear algebra over the integers.

Everything here works with arbitrary-precision Python ints; there is no
floating point anywhere in this module.  The central objects are integer
matrices (viewed as maps between free abelian groups) and finitely
generated abelian groups in invariant-factor form.  Conventions:

* a matrix with r rows and c columns is the map Z^c -> Z^r acting on
  column vectors;
* kernels are always returned saturated (the quotient by their span is
  torsion free);
* invariant factors are stored in an ascending divisibility chain
  d_1 | d_2 | ... with every d_i >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


class CompositionNonzero(ValueError):
    """Raised when a two-step complex does not compose to zero."""


class DimensionMismatch(ValueError):
    """Raised when vector or matrix shapes are incompatible."""


class IntegerMatrix:
    """Immutable integer matrix, row-major.

    The explicit `cols` argument matters only for matrices with no rows,
    where the width cannot be inferred.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows_of_entries, cols=None):
        rows = tuple(tuple(int(x) for x in row) for row in rows_of_entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionMismatch("ragged rows")
            if cols is not None and cols != width:
                raise DimensionMismatch("explicit column count disagrees with rows")
        else:
            width = cols or 0
        self.rows = len(rows)
        self.cols = width
        self.entries = rows

    @classmethod
    def from_shape(cls, rows, cols, entries_rows):
        m = cls(entries_rows)
        if (m.rows, m.cols) != (rows, cols):
            raise DimensionMismatch(f"expected {rows}x{cols}, got {m.rows}x{m.cols}")
        return m

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_columns(cls, n_rows, columns):
        columns = [tuple(int(x) for x in c) for c in columns]
        for c in columns:
            if len(c) != n_rows:
                raise DimensionMismatch("column length mismatch")
        return cls([[c[i] for c in columns] for i in range(n_rows)])

    def column(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return IntegerMatrix([[self.entries[i][j] for i in range(self.rows)]
                              for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch("matrix product shape mismatch")
            return IntegerMatrix(
                [[sum(self.entries[i][k] * other.entries[k][j] for k in range(self.cols))
                  for j in range(other.cols)] for i in range(self.rows)],
                cols=other.cols)
        return NotImplemented

    def apply(self, vector):
        vector = tuple(int(x) for x in vector)
        if len(vector) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        return tuple(sum(row[k] * vector[k] for k in range(self.cols)) for row in self.entries)

    def is_zero(self):
        return all(x == 0 for row in self.entries for x in row)

    def determinant(self):
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __eq__(self, other):
        return (isinstance(other, IntegerMatrix)
                and self.entries == other.entries
                and self.cols == other.cols)

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        return f"IntegerMatrix({[list(r) for r in self.entries]})"


def _canonical_factors(factors):
    """Reduce a multiset of cyclic orders to an ascending invariant-factor chain.

    Zero means an infinite cyclic summand and is returned separately as a
    free-rank increment.
    """
    free = 0
    by_prime: dict[int, list[int]] = {}
    for d in factors:
        d = abs(int(d))
        if d == 0:
            free += 1
            continue
        if d == 1:
            continue
        n = d
        p = 2
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                by_prime.setdefault(p, []).append(e)
            p += 1
        if n > 1:
            by_prime.setdefault(n, []).append(1)
    chain_len = max((len(v) for v in by_prime.values()), default=0)
    chain = [1] * chain_len
    for p, exps in by_prime.items():
        exps.sort()
        # right-align so the largest powers multiply into the last factor
        for offset, e in enumerate(reversed(exps)):
            chain[chain_len - 1 - offset] *= p ** e
    return free, tuple(c for c in chain if c > 1)


@dataclass(frozen=True)
class FinAbGroup:
    """Finitely generated abelian group Z^free_rank + Z/d_1 + ... (d_i | d_{i+1})."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        extra_free, chain = _canonical_factors(self.torsion)
        object.__setattr__(self, "free_rank", int(self.free_rank) + extra_free)
        object.__setattr__(self, "torsion", chain)
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @classmethod
    def free(cls, rank):
        return cls(rank, ())

    @classmethod
    def cyclic(cls, n):
        return cls(0, (n,)) if n != 0 else cls(1, ())

    @classmethod
    def trivial(cls):
        return cls(0, ())

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def is_free(self):
        return not self.torsion

    def torsion_order(self):
        order = 1
        for d in self.torsion:
            order *= d
        return order

    def direct_sum(self, other):
        return FinAbGroup(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def tensor_cyclic(self, m):
        """This group tensored with Z/m (m >= 1)."""
        m = int(m)
        if m < 1:
            raise ValueError("modulus must be >= 1")
        if m == 1:
            return FinAbGroup.trivial()
        factors = [m] * self.free_rank + [gcd(d, m) for d in self.torsion]
        return FinAbGroup(0, tuple(factors))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ M @ V == D, with U, V unimodular and D in Smith form."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    def diagonal(self):
        n = min(self.D.rows, self.D.cols)
        return tuple(self.D.entries[i][i] for i in range(n))

    def rank(self):
        return sum(1 for d in self.diagonal() if d != 0)


def smith_normal_form(m: IntegerMatrix) -> SnfDecomposition:
    """Smith normal form with unimodular transforms, smallest-pivot strategy."""
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, factor):
        # row_dst += factor * row_src
        arow, urow = a[src], u[src]
        ad, ud = a[dst], u[dst]
        for k in range(cols):
            ad[k] += factor * arow[k]
        for k in range(rows):
            ud[k] += factor * urow[k]

    def add_col(src, dst, factor):
        for r in a:
            r[dst] += factor * r[src]
        for r in v:
            r[dst] += factor * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def nearest_quotient(x, p):
        # quotient leaving a remainder in (-|p|/2, |p|/2]
        # Python's remainder shares the divisor's sign, so stepping the
        # quotient up by one always shrinks it past the midpoint
        q, r = divmod(x, p)
        if 2 * abs(r) > abs(p):
            q += 1
        return q

    def select_pivot(t):
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        return pivot

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # the smallest pivot is re-selected on every pass; together with
        # nearest-integer quotients this keeps coefficient growth tame
        pivot = select_pivot(t)
        if pivot is None:
            break
        while True:
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    add_row(t, i, -nearest_quotient(a[i][t], a[t][t]))
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    add_col(t, j, -nearest_quotient(a[t][j], a[t][t]))
            col_clear = all(a[i][t] == 0 for i in range(t + 1, rows))
            row_clear = all(a[t][j] == 0 for j in range(t + 1, cols))
            if col_clear and row_clear:
                # enforce the divisibility chain; a fixup reopens the pass
                offender = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % a[t][t] != 0:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                add_row(offender, t, 1)
            pivot = select_pivot(t)

        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return SnfDecomposition(IntegerMatrix(u), IntegerMatrix(a), IntegerMatrix(v))


def cokernel(f: IntegerMatrix) -> FinAbGroup:
    """Z^rows / image(f) in canonical invariant-factor form."""
    snf = smith_normal_form(f)
    diag = [d for d in snf.diagonal() if d != 0]
    return FinAbGroup(f.rows - len(diag), tuple(d for d in diag if d > 1))


def kernel(f: IntegerMatrix):
    """Saturated kernel of f as (rank, basis matrix with basis columns)."""
    snf = smith_normal_form(f)
    r = snf.rank()
    basis_cols = [snf.V.column(j) for j in range(r, f.cols)]
    return len(basis_cols), IntegerMatrix.from_columns(f.cols, basis_cols)


def image_rank(f: IntegerMatrix) -> int:
    return smith_normal_form(f).rank()


def solve(f: IntegerMatrix, target):
    """One integer solution x of f @ x = target, or None if there is none."""
    target = tuple(int(x) for x in target)
    if len(target) != f.rows:
        raise DimensionMismatch("target length mismatch")
    snf = smith_normal_form(f)
    rhs = snf.U.apply(target)
    r = snf.rank()
    y = [0] * f.cols
    for i in range(f.rows):
        d = snf.D.entries[i][i] if i < min(f.rows, f.cols) else 0
        if d == 0:
            if rhs[i] != 0:
                return None
        else:
            if rhs[i] % d != 0:
                return None
            y[i] = rhs[i] // d
    return snf.V.apply(y)


def solve_matrix(f: IntegerMatrix, targets: IntegerMatrix):
    """Integer matrix Y with f @ Y = targets, or None."""
    cols = []
    for j in range(targets.cols):
        x = solve(f, targets.column(j))
        if x is None:
            return None
        cols.append(x)
    return IntegerMatrix.from_columns(f.cols, cols)


def middle_cohomology(f: IntegerMatrix, g: IntegerMatrix) -> FinAbGroup:
    """ker(g)/im(f) for a two-step complex Z^a -f-> Z^b -g-> Z^c."""
    if f.rows != g.cols:
        raise DimensionMismatch("complex shapes do not chain")
    if not (g @ f).is_zero():
        raise CompositionNonzero("g o f != 0")
    k_rank, k_basis = kernel(g)
    if k_rank == 0:
        return FinAbGroup.trivial()
    # columns of f lie in ker(g); the kernel basis is saturated, so the
    # coordinates are integral
    y = solve_matrix(k_basis, f)
    if y is None:
        raise AssertionError("kernel basis not saturated")
    return cokernel(y)


def quotient_by_span(ambient_rank: int, generators) -> FinAbGroup:
    """Z^n modulo the subgroup generated by the given vectors."""
    generators = [tuple(int(x) for x in gen) for gen in generators]
    for gen in generators:
        if len(gen) != ambient_rank:
            raise DimensionMismatch("generator length mismatch")
    if not generators:
        return FinAbGroup.free(ambient_rank)
    return cokernel(IntegerMatrix.from_columns(ambient_rank, generators))


def tensor_mod(group: FinAbGroup, m: int) -> FinAbGroup:
    """group (x) Z/m."""
    return group.tensor_cyclic(m)


def element_order_in_quotient(ambient_rank: int, generators, vector):
    """Order of the class of `vector` in Z^n / span(generators), or None if infinite."""
    vector = tuple(int(x) for x in vector)
    if len(vector) != ambient_rank:
        raise DimensionMismatch("vector length mismatch")
    generators = [tuple(int(x) for x in gen) for gen in generators]
    if not generators:
        return 1 if all(x == 0 for x in vector) else None
    span = IntegerMatrix.from_columns(ambient_rank, generators)
    snf = smith_normal_form(span)
    coords = snf.U.apply(vector)
    r = snf.rank()
    order = 1
    for i in range(ambient_rank):
        d = snf.D.entries[i][i] if i < min(snf.D.rows, snf.D.cols) else 0
        if d == 0:
            if coords[i] != 0:
                return None
        else:
            order = lcm(order, d // gcd(d, coords[i]))
    return order


def rational_rank(matrix: IntegerMatrix) -> int:
    """Rank over Q by fraction Gaussian elimination (independent of SNF)."""
    a = [[Fraction(x) for x in row] for row in matrix.entries]
    rank = 0
    for col in range(matrix.cols):
        pivot_row = None
        for i in range(rank, matrix.rows):
            if a[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[rank], a[pivot_row] = a[pivot_row], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(matrix.rows):
            if i != rank and a[i][col] != 0:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank
