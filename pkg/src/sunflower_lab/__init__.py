"""Exact tools for sunflower-free set families: detection, bounds, search, certificates."""

from ._backend import BACKEND
from .bounds import (
    BoundDomainError,
    BoundValue,
    RecursionVariant,
    Rounding,
    TheoremId,
    ahs_lower,
    corollary_help2_threshold,
    deza_bound,
    er_bound,
    kostochka_bound,
    lemma_binom_check,
    lemma_help,
    f_lower_bound,
    main2_bound,
    main3_bound,
    main_bound,
    recursion_f_bound,
    rw_bound,
)
from .constructions import fano_plane, product_compose, transversal_family
from .detect import (
    NoSunflowerCertificate,
    SunflowerCertificate,
    find_sunflower,
    has_sunflower,
    max_petals,
    verify_sunflower,
)
from .family import (
    DuplicateMemberError,
    FamilyError,
    FamilyFormatError,
    GroundSet,
    IntersectionProfile,
    MemberSet,
    SetFamily,
    check_ell_intersecting,
    check_L_intersecting,
    format_family,
    intersection_profile,
    is_isomorphic,
    is_uniform,
    parse_family,
    read_family,
    write_family,
)
from .prover import (
    DecompositionNode,
    DezaOutcome,
    PreconditionError,
    ProofFailure,
    audit_ell_cover,
    decompose_L_intersecting,
    deza_check,
    soul_check,
    verify_certificate,
)
from .search import SearchProblem, SearchResult, extremal_search, f_table, g_table

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
