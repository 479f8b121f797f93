"""Independent oracles used by the tests.

Everything here is deliberately implemented from scratch, without the
library's Smith normal form path: a plain elementary-operations
diagonalization with first-nonzero pivoting and no transform tracking, a
gcd-of-minors invariant factor computation, fraction Gaussian rank, and a
literal breadth-first coset enumeration for small finite quotients.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm


def naive_invariant_factors(rows):
    """Diagonal of a Smith form via simple row/column reduction with
    first-nonzero pivoting and nearest-integer division.

    Returns (nonzero invariant factors ascending, rank).
    """

    def nearest_q(x, p):
        # Python's remainder shares the divisor's sign, so stepping the
        # quotient up by one always shrinks it past the midpoint
        q, r = divmod(x, p)
        if 2 * abs(r) > abs(p):
            q += 1
        return q

    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    t = 0
    while t < min(m, n):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i0, j0 = pivot
        a[t], a[i0] = a[i0], a[t]
        for r in a:
            r[t], r[j0] = r[j0], r[t]
        while True:
            for i in range(t + 1, m):
                while a[i][t] != 0:
                    q = nearest_q(a[i][t], a[t][t])
                    for k in range(n):
                        a[i][k] -= q * a[t][k]
                    if a[i][t] != 0:
                        a[t], a[i] = a[i], a[t]
            for j in range(t + 1, n):
                while a[t][j] != 0:
                    q = nearest_q(a[t][j], a[t][t])
                    for r in a:
                        r[j] -= q * r[t]
                    if a[t][j] != 0:
                        for r in a:
                            r[t], r[j] = r[j], r[t]
            col_clear = all(a[i][t] == 0 for i in range(t + 1, m))
            row_clear = all(a[t][j] == 0 for j in range(t + 1, n))
            if col_clear and row_clear:
                break
        t += 1
    diag = [abs(a[i][i]) for i in range(min(m, n))]
    nonzero = [d for d in diag if d != 0]
    # fold the diagonal into a divisibility chain: diag(a, b) ~ diag(gcd, lcm)
    changed = True
    while changed:
        changed = False
        for i in range(len(nonzero)):
            for j in range(i + 1, len(nonzero)):
                if nonzero[j] % nonzero[i] != 0:
                    g = gcd(nonzero[i], nonzero[j])
                    nonzero[i], nonzero[j] = g, lcm(nonzero[i], nonzero[j])
                    changed = True
    nonzero.sort()
    return nonzero, len(nonzero)


def cofactor_det(rows):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        sign = 1 if j % 2 == 0 else -1
        total += sign * rows[0][j] * cofactor_det(minor)
    return total


def determinantal_divisors(rows):
    """Invariant factors via d_k = gcd(k-minors)/gcd((k-1)-minors)."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    factors = []
    previous = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rsel in combinations(range(m), k):
            for csel in combinations(range(n), k):
                minor = [[rows[i][j] for j in csel] for i in rsel]
                g = gcd(g, cofactor_det(minor))
        if g == 0:
            break
        factors.append(g // previous)
        previous = g
    return factors


def fraction_rank(rows):
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def middle_cohomology_oracle(f_rows, g_rows):
    """(free rank, torsion chain) of ker(g)/im(f) through the split sequence

        0 -> ker g/im f -> Z^b/im f -> Z^b/ker g -> 0

    whose last term is free of rank rank(g), so the middle term splits.
    """
    b = len(f_rows)
    torsion, rank_f = naive_invariant_factors(f_rows)
    coker_free = b - rank_f
    torsion = [d for d in torsion if d > 1]
    rank_g = fraction_rank(g_rows)
    return coker_free - rank_g, torsion


def _fraction_inverse(columns):
    """Inverse of the square matrix whose columns are given, over Q."""
    n = len(columns)
    a = [[Fraction(columns[j][i]) for j in range(n)]
         + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [[a[i][n + j] for j in range(n)] for i in range(n)]


def enumerate_quotient_order(columns, ambient_rank, cap=4000):
    """Literal coset count of Z^n / span(columns) by breadth-first search.

    A full-rank independent subset S of the generators is inverted over Q;
    the fractional part of S^{-1} x is an exact coset invariant for the
    sublattice spanned by S, so cosets are plain dictionary keys.  The
    remaining generators are folded in by union-find.  Returns None when
    the quotient is infinite or larger than the cap.
    """
    n = ambient_rank
    columns = [tuple(c) for c in columns]
    subset = []
    for col in columns:
        trial = subset + [col]
        if fraction_rank([[c[i] for c in trial] for i in range(n)]) == len(trial):
            subset.append(col)
        if len(subset) == n:
            break
    if len(subset) < n:
        return None
    inverse = _fraction_inverse(subset)

    def key(vector):
        out = []
        for row in inverse:
            value = sum(r * x for r, x in zip(row, vector))
            out.append(value - value.__floor__())
        return tuple(out)

    zero = key((0,) * n)
    reps = {zero: tuple(0 for _ in range(n))}
    frontier = [reps[zero]]
    basis = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    while frontier:
        nxt = []
        for rep in frontier:
            for step_vec in basis:
                cand = tuple(a + b for a, b in zip(rep, step_vec))
                k = key(cand)
                if k in reps:
                    continue
                reps[k] = cand
                nxt.append(cand)
                if len(reps) > cap:
                    return None
        frontier = nxt

    # union-find over the finite quotient for the leftover generators
    parent = {k: k for k in reps}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    extras = [c for c in columns if c not in subset]
    for extra in extras:
        for k, rep in reps.items():
            shifted = key(tuple(a + b for a, b in zip(rep, extra)))
            ra, rb = find(k), find(shifted)
            if ra != rb:
                parent[ra] = rb
    return sum(1 for k in reps if find(k) == k)
