"""Hierarchical threshold secret sharing over polynomial rings.

A dealer splits a secret polynomial over F_p into per-participant
shares living modulo pairwise-coprime moduli; participants are grouped
into levels with strictly increasing thresholds, and reconstruction at
each level solves a system of polynomial congruences. A counting
verifier checks the scheme's security claims exhaustively at small
parameters.
"""

from .access import (
    HierarchyConfig,
    ValidationReport,
    Violation,
    build_config,
    degree_slack,
    is_authorized,
    level_prefix,
    minimal_authorized_sets,
    validate_config,
    validate_profile,
    worst_case_unauthorized_sets,
)
from .crt import CongruenceSystem, check_pairwise_coprime, crt_solve
from .fieldpoly import (
    Polynomial,
    PrimeModulus,
    count_monic_irreducibles,
    ext_gcd,
    inv_mod,
    is_irreducible,
    iter_polys,
    random_monic_irreducible,
    random_poly,
)
from .hashing import HashFamily, hash_family, mask_poly
from .oracle import (
    AdversaryView,
    CountingReport,
    adversary_view,
    count_preimages,
    enumerate_candidates,
    estimate_condition_iv_rejection,
    estimate_conditional_entropy,
)
from .scheme import (
    DealResult,
    DealerTranscript,
    LevelPolynomial,
    PublicBulletin,
    ShareBundle,
    level_residue,
    reconstruct,
    recover_level,
    split,
)

__version__ = "0.1.0"
