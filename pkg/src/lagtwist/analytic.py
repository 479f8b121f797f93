"""Symbolic abelian groups and a rule-driven spectral sequence engine.

Grid entries are formal direct sums of the atoms Z^r, Z/d, C^a (additive
complex lines), (C*)^c, and C/Z^tau tokens (a complex line modulo a
rank-tau discrete subgroup).  Differentials are classified morphisms:
zero, the exponential C -> C*, an integer matrix between finitely
generated parts, or a declared morphism carrying an audit note.  Two rules
fire automatically: a divisible source has no nonzero map to a finitely
generated target, and a torsion source has none to a torsion-free target.
Everything else must be a rule morphism or an explicit declaration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import FinAbGroup, IntegerMatrix, middle_cohomology, cokernel, kernel


class UnresolvedDifferential(ValueError):
    def __init__(self, location, message=""):
        self.location = location
        super().__init__(message or f"unresolved differential at {location}")


class BudgetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class AnalyticGroup:
    """Formal sum of atoms Z^r + torsion + C^cc + (C*)^cstar + C/Z^tau tokens."""

    free_rank: int = 0
    torsion: tuple = ()
    cc: int = 0
    cstar: int = 0
    torus_quots: tuple = ()

    def __post_init__(self):
        canonical = FinAbGroup(0, self.torsion)
        object.__setattr__(self, "torsion", canonical.torsion)
        object.__setattr__(self, "torus_quots",
                           tuple(sorted(int(t) for t in self.torus_quots)))
        if min(self.free_rank, self.cc, self.cstar, 0) < 0:
            raise ValueError("negative multiplicity")

    # --- constructors ---------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def free(cls, r):
        return cls(free_rank=r)

    @classmethod
    def cyclic(cls, n):
        return cls(torsion=(n,))

    @classmethod
    def lines(cls, a):
        return cls(cc=a)

    @classmethod
    def units(cls, c):
        return cls(cstar=c)

    @classmethod
    def torus_quotient(cls, tau):
        return cls(torus_quots=(tau,))

    @classmethod
    def from_finab(cls, group: FinAbGroup):
        return cls(free_rank=group.free_rank, torsion=group.torsion)

    # --- structure ------------------------------------------------------

    def is_trivial(self):
        return (self.free_rank == 0 and not self.torsion and self.cc == 0
                and self.cstar == 0 and not self.torus_quots)

    def is_finitely_generated(self):
        return self.cc == 0 and self.cstar == 0 and not self.torus_quots

    def is_divisible(self):
        return self.free_rank == 0 and not self.torsion

    def is_torsion(self):
        return (self.free_rank == 0 and self.cc == 0 and self.cstar == 0
                and not self.torus_quots)

    def is_torsion_free(self):
        # C* and C/Z^tau contain torsion (roots of unity); C and Z^r do not
        return not self.torsion and self.cstar == 0 and not self.torus_quots

    def finitely_generated_part(self) -> FinAbGroup:
        return FinAbGroup(self.free_rank, self.torsion)

    def direct_sum(self, other):
        return AnalyticGroup(self.free_rank + other.free_rank,
                             self.torsion + other.torsion,
                             self.cc + other.cc,
                             self.cstar + other.cstar,
                             self.torus_quots + other.torus_quots)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        if self.cc:
            parts.append("C" if self.cc == 1 else f"C^{self.cc}")
        if self.cstar:
            parts.append("C*" if self.cstar == 1 else f"(C*)^{self.cstar}")
        parts.extend(f"C/Z^{t}" for t in self.torus_quots)
        return " + ".join(parts) if parts else "0"


def classify_forced_zero(src: AnalyticGroup, tgt: AnalyticGroup) -> bool:
    """True when every homomorphism src -> tgt vanishes for structural reasons.

    False means undetermined, not nonzero.
    """
    if src.is_trivial() or tgt.is_trivial():
        return True
    if src.is_divisible() and tgt.is_finitely_generated():
        return True
    if src.is_torsion() and tgt.is_torsion_free():
        return True
    return False


ZERO = "zero"
EXP = "exp"
MATRIX = "integer_matrix"
DECLARED = "declared"


@dataclass(frozen=True)
class MorphismDescriptor:
    kind: str
    exp_rank: int = 0
    matrix: IntegerMatrix | None = None
    kernel: AnalyticGroup | None = None
    image: AnalyticGroup | None = None
    cokernel: AnalyticGroup | None = None
    note: str = ""

    def __post_init__(self):
        if self.kind == DECLARED and not self.note:
            raise ValueError("declared morphisms must carry a provenance note")


def zero_morphism():
    return MorphismDescriptor(ZERO)


def exp_morphism(rank):
    return MorphismDescriptor(EXP, exp_rank=rank)


def matrix_morphism(matrix: IntegerMatrix):
    return MorphismDescriptor(MATRIX, matrix=matrix)


def declared_zero(note: str, source: AnalyticGroup | None = None,
                  target: AnalyticGroup | None = None):
    return MorphismDescriptor(DECLARED, kernel=source, image=AnalyticGroup.zero(),
                              cokernel=target, note=note)


def _kernel_of(morphism: MorphismDescriptor, group: AnalyticGroup, location):
    if morphism.kind == ZERO:
        return group
    if morphism.kind == EXP:
        if group.cc != morphism.exp_rank:
            raise UnresolvedDifferential(
                location, "exp morphism must consume the full C^a part")
        return AnalyticGroup(group.free_rank + morphism.exp_rank, group.torsion,
                             0, group.cstar, group.torus_quots)
    if morphism.kind == MATRIX:
        if not (group.is_finitely_generated() and not group.torsion):
            raise UnresolvedDifferential(
                location, "integer matrices act on free finitely generated parts")
        rank, _ = kernel(morphism.matrix)
        return AnalyticGroup.free(rank)
    if morphism.kind == DECLARED:
        if morphism.kernel is None:
            raise UnresolvedDifferential(location, "declared morphism lacks a kernel")
        return morphism.kernel
    raise UnresolvedDifferential(location, f"unknown morphism kind {morphism.kind}")


def _quotient_by_image(kernel_group: AnalyticGroup, incoming: MorphismDescriptor,
                       node_group: AnalyticGroup, location):
    if incoming.kind == ZERO:
        return kernel_group
    if incoming.kind == EXP:
        # exp is surjective onto the C* part it hits
        a = incoming.exp_rank
        if kernel_group.cstar < a:
            raise UnresolvedDifferential(
                location, "exp image does not fit in the kernel")
        return AnalyticGroup(kernel_group.free_rank, kernel_group.torsion,
                             kernel_group.cc, kernel_group.cstar - a,
                             kernel_group.torus_quots)
    if incoming.kind == MATRIX:
        if not (kernel_group.is_finitely_generated() and not kernel_group.torsion):
            raise UnresolvedDifferential(
                location, "integer matrices act on free finitely generated parts")
        quotient = cokernel(incoming.matrix)
        if kernel_group.free_rank != incoming.matrix.rows:
            raise UnresolvedDifferential(
                location, "matrix target does not match the kernel rank")
        return AnalyticGroup.from_finab(quotient)
    if incoming.kind == DECLARED:
        image = incoming.image if incoming.image is not None else AnalyticGroup.zero()
        if image.is_trivial():
            return kernel_group
        raise UnresolvedDifferential(
            location, "declared morphisms with nonzero image are not supported")
    raise UnresolvedDifferential(location, f"unknown morphism kind {incoming.kind}")


def homology_at(incoming: MorphismDescriptor, group: AnalyticGroup,
                outgoing: MorphismDescriptor, location=None) -> AnalyticGroup:
    """kernel(outgoing)/image(incoming), atom-wise."""
    if incoming.kind == MATRIX and outgoing.kind == MATRIX:
        return AnalyticGroup.from_finab(
            middle_cohomology(incoming.matrix, outgoing.matrix))
    kern = _kernel_of(outgoing, group, location)
    return _quotient_by_image(kern, incoming, group, location)


@dataclass(frozen=True)
class SSPage:
    """A single page: grid (p, q) -> group, differentials of bidegree (r, 1-r)."""

    page: int
    grid: dict
    differentials: dict = field(default_factory=dict)

    def group(self, p, q) -> AnalyticGroup:
        return self.grid.get((p, q), AnalyticGroup.zero())

    def support(self):
        return sorted(self.grid)

    def diagonal_sum(self, total) -> AnalyticGroup:
        out = AnalyticGroup.zero()
        for (p, q), group in sorted(self.grid.items()):
            if p + q == total:
                out = out.direct_sum(group)
        return out


def turn_page(page: SSPage, declarations=None) -> SSPage:
    """Compute the next page; every bidegree-valid differential between two
    nonzero entries must resolve through a rule or a declaration."""
    declarations = dict(declarations or {})
    r = page.page

    def resolve(p, q):
        src = page.group(p, q)
        tgt = page.group(p + r, q - r + 1)
        if (p, q) in page.differentials:
            return page.differentials[(p, q)]
        if (p, q) in declarations:
            return declarations[(p, q)]
        if classify_forced_zero(src, tgt):
            return zero_morphism()
        raise UnresolvedDifferential((p, q))

    new_grid = {}
    for (p, q), group in page.grid.items():
        outgoing = resolve(p, q)
        incoming = resolve(p - r, q + r - 1)
        value = homology_at(incoming, group, outgoing, location=(p, q))
        if not value.is_trivial():
            new_grid[(p, q)] = value
    return SSPage(r + 1, new_grid, {})


# --- Deligne cohomology calculators --------------------------------------


def deligne_tate(rank: int, k: int, m: int):
    """Deligne cohomology pair (H^{2k}, H^{2k+1}) of a rank-r Hodge-Tate
    piece sitting in degree 2k, for twist m."""
    if rank < 0 or k < 0 or m < 0:
        raise ValueError("rank, degree index, and twist must be nonnegative")
    if m <= k:
        return AnalyticGroup.free(rank), AnalyticGroup.zero()
    return AnalyticGroup.zero(), AnalyticGroup.units(rank)


def projective_space_deligne(n: int, m: int) -> dict:
    """Full Deligne cohomology table of P^n for twist m, keyed by degree."""
    table = {}
    for k in range(n + 1):
        even, odd = deligne_tate(1, k, m)
        if not even.is_trivial():
            table[2 * k] = even
        if not odd.is_trivial():
            table[2 * k + 1] = odd
    return table


def deligne_k3(datum):
    """Middle Deligne cohomology pair of a K3-type datum at its own twist:
    (NS as a free group, the Brauer quotient)."""
    from .brauer import brauer_an
    descriptor = brauer_an(datum)
    ns_part = AnalyticGroup.free(datum.ns_rank)
    brauer_part = (AnalyticGroup.zero() if descriptor.tau == 0
                   else AnalyticGroup.torus_quotient(descriptor.tau))
    return ns_part, brauer_part


def k3_surface_deligne_table(datum) -> dict:
    """Degrees 0..4 of the first Deligne complex on a K3 surface."""
    ns_part, brauer_part = deligne_k3(datum)
    _, h1 = deligne_tate(1, 0, 1)    # C* in degree 1
    h4, _ = deligne_tate(1, 2, 1)    # Z in degree 4
    table = {1: h1, 2: ns_part, 4: h4}
    if not brauer_part.is_trivial():
        table[3] = brauer_part
    return table


# --- The Deligne-Leray scenario ------------------------------------------


@dataclass(frozen=True)
class DeligneLerayReport:
    e2: SSPage
    e3: SSPage
    e_infinity: SSPage
    h0_rank: int
    h1_corank: int
    degree_totals: dict
    degree6_rank: int
    declarations: tuple
    filtration_note: str


_BUDGET_NOTE = "sum of the ranks of the groups on the degree-6 diagonal is 26"
_DIVISIBLE_NOTE = "map factors through the integral kernel of the next exp; " \
                  "a divisible group has no nonzero map to it"
_FILTRATION_NOTE = "bottom filtration step on degree 4 is the saturated span " \
                   "of the two ambient divisor monomials"


def build_deligne_leray_e2(datum, h2) -> SSPage:
    """E2 page of the direct-image spectral sequence for the twisted Deligne
    complex on the universal hyperplane section.

    Rows q = 1, 2, 3, 6 are the base cohomology of the constant and
    structure sheaves; row q = 4 is computed from the section ring.  The
    two unknown cells (0,4) and (1,4) are filled with their solved values
    (algebraic rank and Brauer corank of the input datum).
    """
    from .brauer import brauer_an
    from .sectionring import build_ring, cubic_preset, lambda_cohomology

    if datum.rank != 23:
        raise ValueError("the scenario needs a rank-23 cubic-shaped datum")
    preset = cubic_preset(datum.lattice, h2)
    ring = build_ring(preset)

    rho = datum.ns_rank
    tau = brauer_an(datum).tau

    grid = {}
    for p in range(0, 11, 2):
        grid[(p, 6)] = AnalyticGroup.free(1)
        grid[(p, 1)] = AnalyticGroup.units(1)
    for p in (2, 4, 6, 8):
        grid[(p, 2)] = AnalyticGroup.lines(1)
    grid[(0, 3)] = AnalyticGroup.units(1)
    for p in range(1, 10, 2):
        grid[(p, 3)] = AnalyticGroup.free(1)
    grid[(0, 4)] = AnalyticGroup.free(rho)
    if tau:
        grid[(1, 4)] = AnalyticGroup.torus_quotient(tau)
    for p in range(2, 11, 2):
        k = p + 1
        lam = lambda_cohomology(ring, k) if k <= 2 * ring.N - 1 else None
        rank = (lam.free_rank if lam else 0) + 1
        grid[(p, 4)] = AnalyticGroup.free(rank)

    differentials = {(p, 2): exp_morphism(1) for p in (2, 4, 6, 8)}
    return SSPage(2, grid, differentials)


def deligne_leray_scenario(datum, h2, e2_overrides=None) -> DeligneLerayReport:
    """Run the two page turns and check every diagonal total against the
    Deligne cohomology of the total space."""
    from .brauer import brauer_an
    from .sectionring import build_ring, cubic_preset

    e2 = build_deligne_leray_e2(datum, h2)
    if e2_overrides:
        grid = dict(e2.grid)
        grid.update(e2_overrides)
        e2 = SSPage(2, grid, e2.differentials)

    rho = datum.ns_rank
    tau = brauer_an(datum).tau

    decl2 = {
        (0, 3): declared_zero(_DIVISIBLE_NOTE, source=e2.group(0, 3),
                              target=e2.group(2, 2)),
        (1, 4): declared_zero(_BUDGET_NOTE, source=e2.group(1, 4),
                              target=e2.group(3, 3)),
    }
    e3 = turn_page(e2, decl2)
    decl3 = {
        (1, 4): declared_zero(_BUDGET_NOTE, source=e3.group(1, 4),
                              target=e3.group(4, 2)),
    }
    e4 = turn_page(e3, decl3)
    if e4.grid != e3.grid:
        raise BudgetMismatch("the sequence does not degenerate on the third page")
    e_infinity = SSPage(e3.page, e3.grid, {})

    ring = build_ring(cubic_preset(datum.lattice, h2))
    rank6 = ring.graded_rank(6)
    expected = {
        3: AnalyticGroup.units(2),
        4: AnalyticGroup.free(2 + rho),
        5: (AnalyticGroup.torus_quotient(tau) if tau else AnalyticGroup.zero()),
        6: AnalyticGroup.free(rank6),
    }
    totals = {}
    for total, want in expected.items():
        got = e_infinity.diagonal_sum(total)
        totals[total] = got
        if got != want:
            raise BudgetMismatch(
                f"degree-{total} diagonal totals {got}, expected {want}")

    used = (((0, 3), 2, _DIVISIBLE_NOTE),
            ((1, 4), 2, _BUDGET_NOTE),
            ((1, 4), 3, _BUDGET_NOTE))
    return DeligneLerayReport(
        e2=e2, e3=e3, e_infinity=e_infinity,
        h0_rank=rho, h1_corank=tau,
        degree_totals=totals, degree6_rank=rank6,
        declarations=used,
        filtration_note=_FILTRATION_NOTE,
    )
