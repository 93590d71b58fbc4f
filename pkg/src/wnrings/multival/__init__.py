"""Multivaluation rings, their modules, and certified decision procedures."""

from .dilworth import dilworth_chains, max_antichain_bruteforce
from .ring import (
    ContinuityReport,
    IntegralityReport,
    MaximalIdeal,
    ModuleVec,
    MultiValRing,
    SumCertificate,
    WeightCertificate,
    check_wset_total,
    crt_selectors,
    division_continuity,
    jacobson_witness,
    localization_member,
    localization_search,
    maximal_ideals,
    member_sum,
    not_integral_witness,
    subring_generated,
    weight,
    wset_select,
)
from .topology import (
    ApproxWitness,
    BumpReport,
    CoarseningReport,
    CoembedRefutation,
    Coembedding,
    CommonVCoarsening,
    Independent,
    VnResult,
    classify_pair,
    coarsening_report,
    coembeddable,
    verify_bump,
    vn_check,
)
