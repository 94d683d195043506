"""Flat-injective presentations of finite-dimensional multiparameter persistence modules.

Typical use::

    from flange import example_resolution, flange_presentation, rank_fip

    res = example_resolution()
    Phi = flange_presentation(res)
    rank_fip(Phi, (1, 1), (2, 2))
"""

from __future__ import annotations

from .cech import cech_boundary, flange_presentation, flange_presentation_preimage
from .contraction import (
    ContractionSet,
    assemble_S,
    compute_contraction,
    compute_contraction_fast,
    compute_contractions,
    contraction_identity_holds,
)
from .core import NEG_INF, POS_INF, PrimeField
from .errors import (
    AcyclicityError,
    AssemblyError,
    ChainComplexError,
    CompositionError,
    DimensionError,
    FlangeError,
    FormatError,
    GradeArithmeticError,
    GradeIndexError,
    QueryError,
    RangeError,
    ValidityError,
)
from .gmatrix import (
    GradedMatrix,
    block_diag,
    graded_transpose,
    is_anti_valid,
    is_minimal,
    is_valid,
    kronecker,
    multiply,
    shift_matrix,
)
from .oracle import (
    PointwiseModule,
    RankQuery,
    expand_fip,
    expand_free,
    random_box_sum,
    rank_fip,
    rank_free,
    rank_injective,
    rank_oracle,
)
from .scc_io import (
    FlatInjectivePresentation,
    FreeResolution,
    example_resolution,
    load,
    parse_fip,
    parse_scc2020,
    save,
    validate_resolution,
    write_fip,
    write_scc2020,
)

__version__ = "0.1.0"
