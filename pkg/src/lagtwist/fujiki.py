"""Exact verification of the Fujiki relation and the BBF extraction formula.

Top intersection numbers of degree-2 classes on a hyperkahler manifold are
polynomials in the BBF form: the integral of a product of 2n classes is
the Fujiki constant times the full permutation sum of pairwise form values
over (2n)!.  The permutation sum collapses to 2^n n! times a sum over
perfect matchings, which is what the solver enumerates; the raw
permutation sum is kept as an independent oracle for small n.

All arithmetic is exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial

from .lattices import Lattice, pairing


class BadFamilyDimension(ValueError):
    pass


class OddCount(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


PERMUTATION_ORACLE_LIMIT = 6   # 12! terms is the desk ceiling


@dataclass(frozen=True)
class BeauvilleSetup:
    """BBF lattice model of second cohomology plus the Fujiki data."""

    lattice: Lattice
    fujiki_constant: Fraction
    half_dimension: int

    def __post_init__(self):
        if self.fujiki_constant <= 0:
            raise ValueError("the Fujiki constant must be positive")
        if self.half_dimension < 1:
            raise ValueError("half dimension must be at least 1")


def fujiki_constant(family: str, n: int) -> Fraction:
    """(2n)!/(2^n n!) for the two deformation families handled here."""
    key = family.lower().replace("-", "_")
    if key in ("k3_hilb", "k3n", "k3_hilbert"):
        if n < 1:
            raise BadFamilyDimension("n must be at least 1")
    elif key == "og10":
        if n != 5:
            raise BadFamilyDimension("the OG10 family has n = 5")
    else:
        raise BadFamilyDimension(f"unknown family {family!r}")
    return Fraction(factorial(2 * n), 2 ** n * factorial(n))


def og10_setup() -> BeauvilleSetup:
    from .lattices import standard_lattice
    return BeauvilleSetup(standard_lattice("og10_h2_default"),
                          fujiki_constant("og10", 5), 5)


def _pair_table(vectors, lattice: Lattice):
    vecs = [lattice.check_vector(v) for v in vectors]
    k = len(vecs)
    return [[pairing(lattice, vecs[i], vecs[j]) for j in range(k)] for i in range(k)]


def matching_sum(vectors, lattice: Lattice) -> int:
    """Sum over perfect matchings of the product of pairwise form values."""
    if len(vectors) % 2 != 0:
        raise OddCount("need an even number of vectors")
    table = _pair_table(vectors, lattice)

    def rec(indices):
        if not indices:
            return 1
        first, rest = indices[0], indices[1:]
        total = 0
        for pos, other in enumerate(rest):
            factor = table[first][other]
            if factor:
                total += factor * rec(rest[:pos] + rest[pos + 1:])
        return total

    return rec(tuple(range(len(vectors))))


def permutation_sum(vectors, lattice: Lattice) -> int:
    """Brute-force sum over all (2n)! permutations; the oracle for matching_sum."""
    if len(vectors) % 2 != 0:
        raise OddCount("need an even number of vectors")
    n = len(vectors) // 2
    if n > PERMUTATION_ORACLE_LIMIT:
        raise ValueError(f"permutation oracle is capped at n = {PERMUTATION_ORACLE_LIMIT}")
    table = _pair_table(vectors, lattice)
    total = 0
    for sigma in permutations(range(2 * n)):
        prod = 1
        for i in range(n):
            prod *= table[sigma[2 * i]][sigma[2 * i + 1]]
            if prod == 0:
                break
        total += prod
    return total


def intersection_number(setup: BeauvilleSetup, vectors) -> Fraction:
    """Integral over the manifold of the product of 2n degree-2 classes."""
    n = setup.half_dimension
    if len(vectors) != 2 * n:
        raise OddCount(f"need exactly {2 * n} vectors")
    msum = matching_sum(vectors, setup.lattice)
    return setup.fujiki_constant * Fraction(2 ** n * factorial(n), factorial(2 * n)) * msum


def bbf_roundtrip(setup: BeauvilleSetup, u, v, theta, eta) -> Fraction:
    """Recover q(u, v) from intersection numbers in the polarized configuration.

    Requires u, v orthogonal to theta and eta, q(eta) = 0 and
    q(theta, eta) = 1; returns exactly the Gram value.
    """
    lat = setup.lattice
    n = setup.half_dimension
    failures = []
    for name, a, b, want in (("q(u,theta)", u, theta, 0), ("q(u,eta)", u, eta, 0),
                             ("q(v,theta)", v, theta, 0), ("q(v,eta)", v, eta, 0),
                             ("q(eta,eta)", eta, eta, 0), ("q(theta,eta)", theta, eta, 1)):
        if pairing(lat, a, b) != want:
            failures.append(f"{name} = {pairing(lat, a, b)}, expected {want}")
    if failures:
        raise PreconditionViolated("; ".join(failures))
    classes = [u, v] + [theta] * (n - 1) + [eta] * (n - 1)
    integral = intersection_number(setup, classes)
    return comb(2 * n, n) * Fraction(n, 2 ** n) * integral / setup.fujiki_constant
