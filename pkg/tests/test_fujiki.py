import random
from fractions import Fraction
from math import factorial

import pytest

from lagtwist.fujiki import (
    BadFamilyDimension,
    BeauvilleSetup,
    OddCount,
    PreconditionViolated,
    bbf_roundtrip,
    fujiki_constant,
    intersection_number,
    matching_sum,
    og10_setup,
    permutation_sum,
)
from lagtwist.lattices import pairing, standard_lattice

THETA = (1,) + (0,) * 23
ETA = (0, 1) + (0,) * 22


def test_fujiki_constants():
    assert fujiki_constant("K3_hilb", 1) == 1
    assert fujiki_constant("k3_hilb", 2) == 3
    assert fujiki_constant("og10", 5) == 945
    with pytest.raises(BadFamilyDimension):
        fujiki_constant("og10", 4)
    with pytest.raises(BadFamilyDimension):
        fujiki_constant("k3_hilb", 0)
    with pytest.raises(BadFamilyDimension):
        fujiki_constant("kummer", 3)


def test_matching_sum_pair():
    U = standard_lattice("U")
    assert matching_sum([(1, 0), (0, 1)], U) == 1
    with pytest.raises(OddCount):
        matching_sum([(1, 0)], U)


def test_matching_sum_all_equal():
    # (2n-1)!! q(u)^n
    U = standard_lattice("U")
    u = (1, 2)
    q = pairing(U, u, u)
    for n in (1, 2, 3, 4):
        double_factorial = 1
        for k in range(2 * n - 1, 0, -2):
            double_factorial *= k
        assert matching_sum([u] * (2 * n), U) == double_factorial * q ** n


def test_matching_orthogonal_configuration():
    # (u, v, theta^{n-1}, eta^{n-1}) with u, v orthogonal to theta, eta and
    # q(eta) = 0 gives (n-1)! q(u,v) q(theta,eta)^{n-1}
    lat = og10_setup().lattice
    rng = random.Random(99)
    for n in (2, 3, 4):
        u = (0, 0) + tuple(rng.randint(-2, 2) for _ in range(22))
        v = (0, 0) + tuple(rng.randint(-2, 2) for _ in range(22))
        vectors = [u, v] + [THETA] * (n - 1) + [ETA] * (n - 1)
        expected = factorial(n - 1) * pairing(lat, u, v)
        assert matching_sum(vectors, lat) == expected
        # brute force over all permutations for n <= 4
        assert permutation_sum(vectors, lat) == 2 ** n * factorial(n) * expected


def test_permutation_vs_matching_exhaustive():
    rng = random.Random(4)
    U = standard_lattice("U")
    A2 = standard_lattice("A2")
    for lat in (U, A2):
        for n in (1, 2, 3):
            vectors = [tuple(rng.randint(-3, 3) for _ in range(2))
                       for _ in range(2 * n)]
            assert permutation_sum(vectors, lat) == \
                2 ** n * factorial(n) * matching_sum(vectors, lat)


def test_permutation_oracle_cap():
    U = standard_lattice("U")
    with pytest.raises(ValueError):
        permutation_sum([(1, 0)] * 14, U)


def test_intersection_number_identities():
    setup = og10_setup()
    lat = setup.lattice
    rng = random.Random(8)
    for _ in range(5):
        u = tuple(rng.randint(-2, 2) for _ in range(24))
        q = pairing(lat, u, u)
        assert intersection_number(setup, [u] * 10) == 945 * Fraction(q) ** 5
    # isotropic class
    assert intersection_number(setup, [ETA] * 10) == 0
    with pytest.raises(OddCount):
        intersection_number(setup, [ETA] * 9)


def test_intersection_multilinear_and_symmetric():
    setup = og10_setup()
    lat = setup.lattice
    rng = random.Random(15)
    vecs = [tuple(rng.randint(-2, 2) for _ in range(24)) for _ in range(10)]
    base = intersection_number(setup, vecs)
    shuffled = vecs[:]
    rng.shuffle(shuffled)
    assert intersection_number(setup, shuffled) == base
    # linearity in the first argument
    a = tuple(rng.randint(-2, 2) for _ in range(24))
    b = tuple(rng.randint(-2, 2) for _ in range(24))
    combo = tuple(x + 2 * y for x, y in zip(a, b))
    lhs = intersection_number(setup, [combo] + vecs[1:])
    rhs = intersection_number(setup, [a] + vecs[1:]) \
        + 2 * intersection_number(setup, [b] + vecs[1:])
    assert lhs == rhs


def test_bbf_roundtrip_og10():
    setup = og10_setup()
    lat = setup.lattice
    rng = random.Random(16)
    for _ in range(20):
        u = (0, 0) + tuple(rng.randint(-4, 4) for _ in range(22))
        v = (0, 0) + tuple(rng.randint(-4, 4) for _ in range(22))
        assert bbf_roundtrip(setup, u, v, THETA, ETA) == pairing(lat, u, v)


def test_bbf_roundtrip_n1_and_orthogonal_pair():
    # n = 1 reduces to q(u, v) = the integral of u v
    from lagtwist.lattices import direct_sum
    UU = direct_sum(standard_lattice("U"), standard_lattice("U"))
    setup = BeauvilleSetup(UU, fujiki_constant("k3_hilb", 1), 1)
    u, v = (0, 0, 1, 1), (0, 0, 2, -1)
    assert bbf_roundtrip(setup, u, v, (1, 0, 0, 0), (0, 1, 0, 0)) == pairing(UU, u, v)

    og = og10_setup()
    u = (0, 0, 1, -1) + (0,) * 20
    v = (0, 0, 1, 1) + (0,) * 20
    assert pairing(og.lattice, u, v) == 0
    assert bbf_roundtrip(og, u, v, THETA, ETA) == 0


def test_bbf_roundtrip_theta_choice_independent():
    # theta may be shifted by multiples of eta and by <theta,eta>-orthogonal
    # vectors fixed by the configuration
    setup = og10_setup()
    lat = setup.lattice
    rng = random.Random(77)
    u = (0, 0) + tuple(rng.randint(-3, 3) for _ in range(22))
    v = (0, 0) + tuple(rng.randint(-3, 3) for _ in range(22))
    base = bbf_roundtrip(setup, u, v, THETA, ETA)
    for shift in (-2, -1, 1, 3):
        theta2 = (1, shift) + (0,) * 22    # still q(theta2, eta) = 1
        assert pairing(lat, theta2, ETA) == 1
        assert bbf_roundtrip(setup, u, v, theta2, ETA) == base


def test_bbf_roundtrip_preconditions():
    setup = og10_setup()
    bad_u = (1, 0) + (0,) * 22    # pairs with eta
    with pytest.raises(PreconditionViolated) as err:
        bbf_roundtrip(setup, bad_u, bad_u, THETA, ETA)
    assert "q(u,eta)" in str(err.value)


def test_simplified_formula_matches_example():
    # q(u,v) = 1/(n-1)! * integral(u v theta^{n-1} eta^{n-1}) under the
    # stated Fujiki constant, for n up to 5
    for n in (2, 3, 4, 5):
        lat = og10_setup().lattice
        setup = BeauvilleSetup(lat, fujiki_constant("k3_hilb", n), n)
        rng = random.Random(100 + n)
        u = (0, 0) + tuple(rng.randint(-2, 2) for _ in range(22))
        v = (0, 0) + tuple(rng.randint(-2, 2) for _ in range(22))
        integral = intersection_number(setup, [u, v] + [THETA] * (n - 1) + [ETA] * (n - 1))
        assert Fraction(1, factorial(n - 1)) * integral == pairing(lat, u, v)
