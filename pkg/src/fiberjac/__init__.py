"""Stability of rank-1 degree-0 sheaves on Kodaira fibers and the
moduli (Jacobian) curves of elliptic fibrations with such fibers.

The package models the reduced unstarred Kodaira fiber types (smooth,
I_N, II, III, IV) as dual graphs, classifies the slope (semi)stability
of rank-1 degree-0 sheaf classes on them by two independent routes,
computes Jordan-Holder graded objects and S-equivalence, classifies the
moduli curve of every fiber, and ingests concrete Weierstrass families
over a one-parameter base with exact rational arithmetic.
"""

from .fibers import (
    FiberDescriptionError,
    FiberError,
    FiberGraph,
    IrreducibleFiberError,
    KodairaType,
    NodePoint,
    Polarization,
    SmoothPoint,
    Subcurve,
    TangencyPoint,
    TriplePoint,
    boundary,
    boundary_points,
    build_fiber,
    euler_characteristic,
    parse_fiber_label,
    proper_connected_subcurves,
    singular_points,
    subcurve,
)
from .jacobian import (
    THE_EXTRA_POINT,
    AbelJacobiFamily,
    FiberEntry,
    FibrationDescription,
    FibrationReport,
    ModuliClassification,
    ModuliKind,
    ModuliPoint,
    StableLocusGroup,
    abel_jacobi_class,
    abel_jacobi_family,
    jacobian_type,
    load_fibration_description,
    relative_report,
)
from .stability import (
    GradedObject,
    HilbertData,
    LineBundle,
    MultiDegree,
    NodalTorsionFree,
    NotSemistableError,
    SearchSpaceError,
    SheafClass,
    SingularPointDual,
    StabilityClass,
    StabilityError,
    StabilityVerdict,
    StratificationReport,
    SubsheafOnSubcurve,
    UnsupportedSheafError,
    classify_by_rule,
    classify_sheaf,
    enumerate_stratification,
    graded_object,
    hilbert_data,
    iter_degree_vectors,
    oracle_classify,
    s_equivalent,
)
from .weierstrass import (
    INFINITE_VALUATION,
    IsotriviallySingularError,
    ModelError,
    NonMinimalModelError,
    ReductionData,
    UnsupportedReduction,
    WeierstrassModel,
    classify_reduction,
    invariants,
    load_model,
    reduction_at,
    scan_discriminant,
    valuation,
)

__version__ = "0.1.0"
