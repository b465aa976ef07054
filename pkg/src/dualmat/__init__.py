"""Dual complex matrices: dual SVD, Hartwig-Spindelboeck forms, generalized inverses and partial orders."""

from .config import DEFAULT, Tolerance, default_tolerance
from .dmatrix import DualMatrix, dm_adjoint, dm_approx_eq, dm_inv, dm_mul, is_dual_unitary
from .dsvd import DualSVD, appreciable_rank, dual_rank, dual_svd, essential_part
from .dualnum import DualComplex, DualReal, dc_inv, dc_mul, dreal_leq, is_appreciable
from .errors import (
    ConvergenceFailure,
    DualMatError,
    InverseNotExists,
    NotAppreciable,
    NotIndexOne,
    ParseError,
    ShapeMismatch,
    SingularStandardPart,
    ToleranceBreach,
)
from .ginv import (
    ExistenceReport,
    GinvResult,
    dcgi,
    dggi,
    dmpgi,
    dmpgi_exists,
    dual_index_is_one,
    ndmpi,
    verify_defining_equations,
)
from .hsd import HSBasic, HSPartitioned, HSRefined, essential_in_hs, hs_basic, hs_partitioned, hs_refined
from .relations import (
    IdentityReport,
    OrderVerdict,
    coincidence,
    dcore_dominator,
    dcore_leq,
    dminus_leq,
    identity_suite_core,
    identity_suite_group,
    self_inverse_checks,
)

__version__ = "0.1.0"
