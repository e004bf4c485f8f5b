"""Iterated update rules on credal sets over finite spaces.

Credal sets are represented by their extreme points (:class:`FGCS`) or,
on a two-point space, by an interval of probabilities
(:class:`IntervalCredal`). The package provides Bayes-type update rules,
Hausdorff distances under total variation and the Hilbert projective
metric, orbit iteration with convergence and rate diagnostics, Monte Carlo
checks of contraction claims, and a closed-form Gaussian example.
"""
from .contraction import (
    ContractionReport,
    PsiEstimate,
    birkhoff_tau,
    estimate_psi,
    verify_point_contraction,
    verify_set_contraction,
)
from .errors import (
    AdditivityViolationError,
    CredalError,
    DimensionError,
    EmptyCredalError,
    EmptyEnvelopeError,
    EmptyEvidenceError,
    LPError,
    MonotonicityError,
    NormalizationError,
    ParameterError,
    PositivityError,
    SamplingError,
    SandwichViolation,
    ScenarioError,
    TraceError,
)
from .gaussian import (
    DataBatch,
    GaussianFGCS,
    GaussianParam,
    conjugate_update,
    discretize,
    run_illustration,
)
from .geometry import (
    FGCS,
    IntervalCredal,
    contains,
    hausdorff_finite_hilbert,
    hausdorff_interval,
    hausdorff_tv,
    includes,
    point_to_set_tv,
    random_fgcs,
    reduce,
    set_distance,
    support_function,
)
from .iteration import (
    OrbitTrace,
    RateFit,
    fit_rate,
    iterate,
    sandwich_run,
    uniqueness_check,
)
from .rules import (
    AnchorContraction,
    CBDLRule,
    EvidenceClass,
    LowerEnvelope,
    OnBinary,
    PCBDLRule,
    ShiftRule,
    UpdateRule,
    UpperEnvelope,
    anchor_contraction,
    cbdl_update,
    continuity_probe,
    envelope_maps,
    example4_shift,
    monotonicity_probe,
    pcbdl_credal_update,
    pcbdl_update,
    rule_from_descriptor,
)
from .simplex import (
    Dist,
    Likelihood,
    PositiveDist,
    bayes_tilt,
    hilbert_distance,
    support_value,
    tv_distance,
)

__version__ = "0.1.0"
