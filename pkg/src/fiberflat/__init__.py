"""Fiber criteria for flatness and purity, mechanized over exact polynomial rings."""

__version__ = "0.1.0"

from .config import Budgets, budgets, use_budgets
from .errors import (
    ConsistencyViolation,
    CriterionInapplicable,
    FiberflatError,
    NotWellDefinedError,
    ParseError,
    ResourceBudgetError,
    UnsupportedError,
)
from .fields import FieldElem, PrimeField, RationalFunctions, Rationals, SimpleExtension, field_arith
from .polys import PolyRing, Polynomial, parse_polynomial, poly_arith
from .groebner import Ideal, QuotientRing, SubmoduleGens, ideal_ops, module_ops, normal_form, reduced_gb, syzygies
from .fpmod import (
    ModuleMap,
    PresentedModule,
    RingMap,
    base_change,
    coker_image,
    direct_sum,
    free_resolution,
    kernel,
    pushforward,
    tensor,
)
from .homology import TorResult, TorsionDecomposition, graded_piece, tor, tor_over_base, torsion_decompose
from .spectra import PrimeIdeal, PrimeList, enumerate_primes, fiber, residue_field
from .criteria import (
    CriterionReport,
    check_cor_3_3,
    check_cor_5_5,
    check_fiber_faithful_flatness,
    check_fiber_flatness,
    check_fiber_purity,
    check_lemma_2_5,
    check_lemma_4_5,
    check_local_criterion,
    check_local_flatness_consequences,
    check_nzd_reduction,
    check_pointwise_purity,
    check_prop_5_3,
    check_pure_subalgebra,
    check_thm_3_2,
    check_thm_4_1,
    check_thm_4_2,
    check_thm_7_1,
    check_tor_fiber_criterion,
    check_tor_fiber_criterion_ideals,
    is_faithfully_flat,
    is_flat,
    is_pure_into_flat,
)
from .gallery import (
    AbelianGroup,
    TruncatedExample,
    audit_question_6_1,
    audit_truncation,
    diag_morphism,
    verify_claim_a,
    verify_claim_b,
    verify_claim_c_boundary,
    verify_claim_d,
)
