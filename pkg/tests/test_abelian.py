import random

import pytest
from hypothesis import given, settings, strategies as st

from lagtwist.abelian import (
    CompositionNonzero,
    DimensionMismatch,
    FinAbGroup,
    IntegerMatrix,
    cokernel,
    element_order_in_quotient,
    kernel,
    middle_cohomology,
    quotient_by_span,
    rational_rank,
    smith_normal_form,
    solve,
    tensor_mod,
)

from oracles import (
    determinantal_divisors,
    enumerate_quotient_order,
    fraction_rank,
    middle_cohomology_oracle,
    naive_invariant_factors,
)

small_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c),
            min_size=r, max_size=r)))


def test_snf_identity():
    s = smith_normal_form(IntegerMatrix.identity(3))
    assert s.D == IntegerMatrix.identity(3)


def test_snf_one_by_one():
    s = smith_normal_form(IntegerMatrix([[3]]))
    assert s.D == IntegerMatrix([[3]])


def test_snf_diag_2_3():
    # naive elementary reduction gives diag(1, 6)
    m = IntegerMatrix([[2, 0], [0, 3]])
    assert smith_normal_form(m).diagonal() == (1, 6)
    assert naive_invariant_factors([[2, 0], [0, 3]])[0] == [1, 6]


@settings(max_examples=120, deadline=None)
@given(small_matrices)
def test_snf_reconstruction_and_unimodularity(rows):
    m = IntegerMatrix(rows)
    s = smith_normal_form(m)
    assert s.U @ m @ s.V == s.D
    assert abs(s.U.determinant()) == 1
    assert abs(s.V.determinant()) == 1
    diag = s.diagonal()
    for a, b in zip(diag, diag[1:]):
        if b != 0:
            assert a != 0 and b % a == 0
        assert a >= 0 and b >= 0


@settings(max_examples=60, deadline=None)
@given(small_matrices)
def test_snf_matches_determinantal_divisors(rows):
    diag = [d for d in smith_normal_form(IntegerMatrix(rows)).diagonal() if d != 0]
    assert diag == determinantal_divisors(rows)


def test_cokernel_examples():
    assert cokernel(IntegerMatrix([[3]])) == FinAbGroup.cyclic(3)
    assert cokernel(IntegerMatrix([[2, -1], [-1, 2]])) == FinAbGroup.cyclic(3)
    assert cokernel(IntegerMatrix.identity(4)).is_trivial()


@settings(max_examples=60, deadline=None)
@given(small_matrices, st.randoms(use_true_random=False))
def test_cokernel_unimodular_invariance(rows, rng):
    m = IntegerMatrix(rows)
    base = cokernel(m)
    left = _random_unimodular(m.rows, rng)
    right = _random_unimodular(m.cols, rng)
    assert cokernel(left @ m @ right) == base


def _random_unimodular(n, rng, steps=6):
    mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            mat[i][k] += c * mat[j][k]
    return IntegerMatrix(mat)


def test_kernel_examples():
    rank, basis = kernel(IntegerMatrix.zero(1, 2))
    assert rank == 2
    rank, _ = kernel(IntegerMatrix([[1, 1, 1]]))
    assert rank == 2


def test_kernel_saturated():
    # multiples of a primitive kernel stay out: quotient by the kernel basis
    # must be torsion free
    rng = random.Random(5)
    for _ in range(40):
        rows = [[rng.randint(-4, 4) for _ in range(4)] for _ in range(2)]
        m = IntegerMatrix(rows)
        _, basis = kernel(m)
        if basis.cols == 0:
            continue
        quotient = quotient_by_span(4, basis.columns())
        assert not quotient.torsion


def test_middle_cohomology_examples():
    zero_on = lambda b: IntegerMatrix([[0] * b])
    f = IntegerMatrix.zero(3, 1)
    g = zero_on(3)
    assert middle_cohomology(f, g) == FinAbGroup.free(3)
    assert middle_cohomology(IntegerMatrix([[2]]), IntegerMatrix([[0]])) \
        == FinAbGroup.cyclic(2)


def test_middle_cohomology_rejects_nonzero_composition():
    with pytest.raises(CompositionNonzero):
        middle_cohomology(IntegerMatrix([[1]]), IntegerMatrix([[1]]))


def test_middle_cohomology_against_split_oracle():
    rng = random.Random(11)
    trials = 0
    while trials < 80:
        a, b, c = rng.randint(1, 3), rng.randint(1, 4), rng.randint(1, 3)
        f_rows = [[rng.randint(-3, 3) for _ in range(a)] for _ in range(b)]
        g_rows = [[rng.randint(-3, 3) for _ in range(b)] for _ in range(c)]
        f, g = IntegerMatrix(f_rows), IntegerMatrix(g_rows)
        if not (g @ f).is_zero():
            g = IntegerMatrix.zero(c, b)
            g_rows = [[0] * b for _ in range(c)]
        got = middle_cohomology(f, g)
        want_rank, want_torsion = middle_cohomology_oracle(f_rows, g_rows)
        assert got.free_rank == want_rank
        assert list(got.torsion) == want_torsion
        trials += 1


def test_middle_cohomology_split_complexes_rank():
    # f split injective, g split surjective: free rank is b - a - c
    rng = random.Random(3)
    for _ in range(30):
        b = rng.randint(2, 5)
        a = rng.randint(0, b - 1)
        c = rng.randint(0, b - a)
        u = _random_unimodular(b, rng)
        u_inv_rows = _inverse_unimodular(u)
        f = IntegerMatrix.from_columns(b, [u.column(j) for j in range(a)])
        g = IntegerMatrix(u_inv_rows[b - c:]) if c else IntegerMatrix([[0] * b])
        got = middle_cohomology(f, g)
        assert got == FinAbGroup.free(b - a - c)


def _inverse_unimodular(u):
    from fractions import Fraction
    n = u.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(u.entries)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [[int(a[i][n + j]) for j in range(n)] for i in range(n)]


def test_quotient_by_span_examples():
    assert quotient_by_span(2, [(1, 0), (0, 1)]).is_trivial()
    assert quotient_by_span(2, [(2, 0)]) == FinAbGroup(1, (2,))
    with pytest.raises(DimensionMismatch):
        quotient_by_span(2, [(1, 0, 0)])


def test_quotient_order_against_enumeration():
    rng = random.Random(23)
    checked = 0
    while checked < 12:
        n = rng.randint(1, 3)
        cols = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n)]
        group = quotient_by_span(n, cols)
        if group.free_rank:
            continue
        order = group.torsion_order()
        if order > 600:
            continue
        counted = enumerate_quotient_order(cols, n)
        assert counted == order
        checked += 1


def test_tensor_mod():
    assert tensor_mod(FinAbGroup.free(1), 3) == FinAbGroup.cyclic(3)
    assert tensor_mod(FinAbGroup.cyclic(2), 3).is_trivial()
    assert tensor_mod(FinAbGroup.free(22), 3) == FinAbGroup(0, (3,) * 22)
    assert tensor_mod(FinAbGroup(2, (4, 12)), 1).is_trivial()
    assert tensor_mod(FinAbGroup(0, (12,)), 8) == FinAbGroup.cyclic(4)


def test_finab_canonical_form():
    assert FinAbGroup(0, (2, 3)) == FinAbGroup.cyclic(6)
    assert FinAbGroup(0, (4, 6)) == FinAbGroup(0, (2, 12))
    assert FinAbGroup(0, (1, 1)).is_trivial()
    assert str(FinAbGroup(2, (3,))) == "Z^2 + Z/3"


def test_rational_rank_matches_oracle():
    rng = random.Random(2)
    for _ in range(40):
        rows = [[rng.randint(-5, 5) for _ in range(rng.randint(1, 4))]
                for _ in range(rng.randint(1, 4))]
        width = len(rows[0])
        rows = [r[:width] + [0] * (width - len(r)) for r in rows]
        assert rational_rank(IntegerMatrix(rows)) == fraction_rank(rows)


def test_solve_and_element_order():
    m = IntegerMatrix([[2, 0], [0, 3]])
    assert solve(m, (4, 9)) == (2, 3)
    assert solve(m, (1, 0)) is None
    assert element_order_in_quotient(2, [(2, 0), (0, 3)], (1, 0)) == 2
    assert element_order_in_quotient(2, [(2, 0)], (0, 1)) is None
    assert element_order_in_quotient(2, [(2, 0), (0, 3)], (1, 1)) == 6


def test_matrix_json_round_trip():
    from lagtwist.serialize import matrix_from_json, matrix_to_json
    m = IntegerMatrix([[10 ** 30, -2], [0, 7]])
    encoded = matrix_to_json(m)
    assert encoded[0][0] == str(10 ** 30)
    assert matrix_from_json(encoded) == m


def test_kernel_of_pairing_functional_rank_22():
    # the pairing row of the distinguished square-3 vector on the rank-23
    # default is a surjective functional, so its kernel has rank 22
    from lagtwist.lattices import standard_lattice, standard_vectors
    lat = standard_lattice("cubic_h4_default")
    h2 = standard_vectors("cubic_h4_default")["h2"]
    row = IntegerMatrix([lat.gram.apply(h2)])
    rank, _ = kernel(row)
    assert rank == 22


def test_quotient_by_ns_and_complement_is_z3():
    from lagtwist.lattices import orthogonal_complement, standard_lattice, standard_vectors
    lat = standard_lattice("cubic_h4_default")
    h2 = standard_vectors("cubic_h4_default")["h2"]
    basis, _ = orthogonal_complement(lat, [h2])
    assert quotient_by_span(23, [h2] + basis.columns()) == FinAbGroup.cyclic(3)


def test_cross_module_middle_cohomology_golden():
    # the weight-1 complex built by the section ring, fed through the
    # generic two-step cohomology, gives the free rank-22 group
    from lagtwist.sectionring import build_ring, cubic_preset, lambda_complex_matrices
    ring = build_ring(cubic_preset())
    f_mat, g_mat = lambda_complex_matrices(ring, 1)
    assert middle_cohomology(f_mat, g_mat) == FinAbGroup.free(22)
