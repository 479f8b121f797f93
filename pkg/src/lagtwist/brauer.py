"""K3-type Hodge data and the analytic Brauer group calculus.

A K3-type datum is an integral lattice H together with a saturated
Neron-Severi sublattice NS(H).  The analytic Brauer group of such a datum
is a one-dimensional complex line modulo a discrete subgroup of rank
tau = rank(H) - rank(NS); it is represented here by that corank together
with its on-demand m-torsion, never by transcendental data.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd

from .abelian import (
    FinAbGroup,
    IntegerMatrix,
    element_order_in_quotient,
    kernel,
    quotient_by_span,
    solve,
    solve_matrix,
)
from .lattices import Lattice, is_saturated, saturation, sublattice


class NotSaturated(ValueError):
    pass


class NotSurjective(ValueError):
    pass


@dataclass(frozen=True)
class K3HodgeDatum:
    """Lattice plus saturated algebraic sublattice; weight metadata only."""

    lattice: Lattice
    ns_basis: tuple
    weight_index: int = 1

    def __post_init__(self):
        ns = tuple(self.lattice.check_vector(v) for v in self.ns_basis)
        object.__setattr__(self, "ns_basis", ns)

    @classmethod
    def build(cls, lattice, ns_vectors, weight_index=1, strict=False):
        """Construct a datum, saturating the NS input if needed.

        With strict=True an unsaturated NS raises NotSaturated instead of
        being silently repaired.
        """
        ns_vectors = [lattice.check_vector(v) for v in ns_vectors]
        if not is_saturated(lattice, ns_vectors):
            if strict:
                raise NotSaturated("NS generators do not span a saturated sublattice")
            warnings.warn("NS input was not saturated; replaced by its primitive closure",
                          stacklevel=2)
            basis = saturation(lattice, ns_vectors)
            ns_vectors = basis.columns()
        return cls(lattice, tuple(ns_vectors), weight_index)

    @property
    def rank(self):
        return self.lattice.rank

    @property
    def ns_rank(self):
        return len(self.ns_basis)

    def ns_matrix(self):
        return IntegerMatrix.from_columns(self.rank, list(self.ns_basis))


@dataclass(frozen=True)
class BrauerDescriptor:
    """C / Z^tau, carried by its corank; torsion recovered on demand."""

    tau: int

    @property
    def symbolic_form(self):
        return f"C mod Z^{self.tau}"

    def torsion(self, m) -> FinAbGroup:
        m = int(m)
        if m < 1:
            raise ValueError("modulus must be >= 1")
        if m == 1:
            return FinAbGroup.trivial()
        return FinAbGroup(0, (m,) * self.tau)

    def is_trivial(self):
        return self.tau == 0

    def __str__(self):
        return "0" if self.tau == 0 else self.symbolic_form


def brauer_an(datum: K3HodgeDatum) -> BrauerDescriptor:
    """Analytic Brauer group of the datum, as its transcendental corank."""
    return BrauerDescriptor(datum.rank - datum.ns_rank)


def brauer_torsion(datum: K3HodgeDatum, m: int) -> FinAbGroup:
    """m-torsion of the Brauer group: coker(NS (x) Z/m -> H (x) Z/m)."""
    m = int(m)
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if m == 1:
        return FinAbGroup.trivial()
    n = datum.rank
    gens = list(datum.ns_basis)
    gens.extend(tuple(m if i == j else 0 for i in range(n)) for j in range(n))
    return quotient_by_span(n, gens)


@dataclass(frozen=True)
class BrauerKernelSequence:
    """0 -> Z/m -> Br_an(kernel datum) -> Br_an(ambient datum) -> 0."""

    first: FinAbGroup
    middle: BrauerDescriptor
    last: BrauerDescriptor


@dataclass(frozen=True)
class RestrictionKernel:
    m: int
    generator: tuple                 # integer vector in the ambient basis
    generator_mod_m: tuple           # coordinates in the kernel basis, reduced mod m
    order: int
    kernel_datum: K3HodgeDatum
    kernel_basis: IntegerMatrix
    sequence: BrauerKernelSequence


def restriction_kernel(datum: K3HodgeDatum, functional) -> RestrictionKernel:
    """Kernel Hodge datum of a surjective integer functional, with the
    cyclic subgroup it contributes to the Brauer group.

    The contributed subgroup is Z/m with m the gcd of the functional on
    NS; its generator is the reduction of m*g - s for any g with v(g) = 1
    and s in NS with v(s) = m.
    """
    v = tuple(int(x) for x in functional)
    datum.lattice.check_vector(v)
    content = 0
    for x in v:
        content = gcd(content, x)
    if content != 1:
        raise NotSurjective("functional is not surjective onto Z")

    ns_values = [sum(a * b for a, b in zip(v, s)) for s in datum.ns_basis]
    m = 0
    for val in ns_values:
        m = gcd(m, val)
    if m == 0:
        raise ValueError("functional vanishes on NS; the kernel contributes a free group")

    n = datum.rank
    _, k_basis = kernel(IntegerMatrix([v]))

    # NS of the kernel: combinations of NS generators killed by the functional
    _, coeffs = kernel(IntegerMatrix([ns_values]))
    ns_mat = datum.ns_matrix()
    ns_h_cols = [(ns_mat @ coeffs).column(j) for j in range(coeffs.cols)]

    g = solve(IntegerMatrix([v]), (1,))
    s_coeff = solve(IntegerMatrix([ns_values]), (m,))
    s = ns_mat.apply(s_coeff)
    t = tuple(m * a - b for a, b in zip(g, s))
    assert sum(a * b for a, b in zip(v, t)) == 0

    t_in_kernel = solve_matrix(k_basis, IntegerMatrix.from_columns(n, [t]))
    t_coords = t_in_kernel.column(0)
    ns_h_in_kernel = solve_matrix(k_basis, IntegerMatrix.from_columns(n, ns_h_cols)) \
        if ns_h_cols else IntegerMatrix.from_columns(k_basis.cols, [])

    kernel_lat = sublattice(datum.lattice, k_basis,
                            (datum.lattice.label + "-ker") if datum.lattice.label else "")
    kernel_datum = K3HodgeDatum(kernel_lat,
                                tuple(ns_h_in_kernel.columns()),
                                datum.weight_index)

    # order of the generator in H/(NS(H) + mH)
    k = k_basis.cols
    gens = list(ns_h_in_kernel.columns())
    gens.extend(tuple(m if i == j else 0 for i in range(k)) for j in range(k))
    order = element_order_in_quotient(k, gens, t_coords)

    sequence = BrauerKernelSequence(
        first=FinAbGroup.cyclic(m) if m > 1 else FinAbGroup.trivial(),
        middle=brauer_an(kernel_datum),
        last=brauer_an(datum),
    )
    return RestrictionKernel(
        m=m,
        generator=t,
        generator_mod_m=tuple(x % m for x in t_coords) if m > 1 else tuple(0 for _ in t_coords),
        order=order,
        kernel_datum=kernel_datum,
        kernel_basis=k_basis,
        sequence=sequence,
    )


def pairing_functional(datum: K3HodgeDatum, vector):
    """The integer functional <-, vector> on the datum's lattice."""
    vector = datum.lattice.check_vector(vector)
    return datum.lattice.gram.apply(vector)
