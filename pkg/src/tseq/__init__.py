"""Exact computations with T-sequences in torsion abelian groups.

Prüfer groups and direct sums of cyclic groups, canonical coefficient
forms, windowed combination sets, p-adic characters and their common
kernels. Everything is exact integer/rational arithmetic.
"""

from .canonical import CanonicalRep, CoeffRep, canonical_form, canonical_support, canonicalize, eval_coeffs
from .characters import (
    DsCharacter,
    TruncatedPAdic,
    build_faithful_witness,
    classify_mchi1,
    continuity_report,
    ds_continuity,
    eval_char,
    r_block,
    radical_from_kernels,
)
from .constructions import interleave, make_sequence, prop33_blocks
from .errors import *  # noqa: F401,F403
from .group_core import (
    CircleRational,
    DirectSumContext,
    DirectSumElement,
    Factored,
    Prime,
    PruferElement,
    PruferGroup,
    SubgroupTable,
    add,
    ds_make,
    ds_support,
    generated_subgroup,
    neg,
    order,
    order_mod_subgroup,
    prufer_make,
    scalar_mul,
    torsion_elements,
)
from .windows import (
    CombWitness,
    EvidenceUpToHorizon,
    Proven,
    Refuted,
    SequenceHandle,
    Verdict,
    Window,
    cond_i_values,
    cond_ii_inf,
    cond_iii_inf,
    cond_iv_check,
    cor24_check,
    enum_Alm,
    gap_verdict,
    member_Alm,
    zp_scan,
)

__version__ = "0.1.0"
