"""Exact-arithmetic toolkit for lattice, cohomology, and twist invariants of
Lagrangian fibrations attached to cubic fourfolds and polarized K3 surfaces."""

from .abelian import (
    FinAbGroup,
    IntegerMatrix,
    SnfDecomposition,
    cokernel,
    kernel,
    middle_cohomology,
    quotient_by_span,
    smith_normal_form,
    tensor_mod,
)
from .analytic import (
    AnalyticGroup,
    MorphismDescriptor,
    SSPage,
    classify_forced_zero,
    deligne_k3,
    deligne_leray_scenario,
    deligne_tate,
    homology_at,
    turn_page,
)
from .brauer import BrauerDescriptor, K3HodgeDatum, brauer_an, brauer_torsion, restriction_kernel
from .fujiki import (
    BeauvilleSetup,
    bbf_roundtrip,
    fujiki_constant,
    intersection_number,
    matching_sum,
)
from .lattices import (
    Lattice,
    LatticeInvariants,
    divisibility,
    invariants,
    orthogonal_complement,
    pairing,
    saturation,
    standard_lattice,
)
from .report import (
    BMInput,
    CubicInput,
    ShaReport,
    bm_sha_report,
    degree_twist_generator,
    higher_j_cohomology,
    og10_lattice_check,
    og10_sha_report,
)
from .sectionring import (
    AmbientPreset,
    SectionRing,
    SectionRingClass,
    build_ring,
    cubic_preset,
    decomposition_gram,
    dual_class,
    h1_pairing_gram,
    k3_preset,
    lambda_cohomology,
    sigma_perp,
    threefold_cohomology,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
