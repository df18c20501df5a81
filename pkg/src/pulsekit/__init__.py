"""Toolkit for pinned pulses in impurity-driven reaction-diffusion systems.

The pipeline, bottom to top: model (two-component systems with a
narrow Gaussian impurity), existence (matched pinned-pulse solutions),
spectral (point spectrum through a cubic reduction), hopf (oscillatory
instability thresholds), normal_form (amplitude-equation coefficients
at the threshold), simulate (direct time stepping), and cli/reporting
(the command line front end).
"""

from .existence import PinnedPulse, continue_pulse, refine_pulse, solve_pulse
from .hopf import (
    AssumptionAudit,
    HopfPoint,
    audit_assumptions,
    locate_hopf_closed_form,
    locate_hopf_scan,
)
from .model import (
    BivariatePoly,
    ImpurityProfile,
    PiecewiseExpSolution,
    ReactionSystem,
    SystemParams,
    eval_piecewise,
)
from .normal_form import (
    BreathingPrediction,
    NormalFormData,
    coefficient_a,
    coefficient_b,
    predict_breather,
    solve_adjoint,
    solve_resolvent_quadratic,
)
from .simulate import SimConfig, SimDiagnostics, run_simulation, stable_dt
from .spectral import (
    CubicReduction,
    EigenSolution,
    StabilityVerdict,
    classify_stability,
    eigen_determinant,
    find_eigenvalues,
    reduce_to_cubic,
    shengjin_roots,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionAudit",
    "BivariatePoly",
    "BreathingPrediction",
    "CubicReduction",
    "EigenSolution",
    "HopfPoint",
    "ImpurityProfile",
    "NormalFormData",
    "PiecewiseExpSolution",
    "PinnedPulse",
    "ReactionSystem",
    "SimConfig",
    "SimDiagnostics",
    "StabilityVerdict",
    "SystemParams",
    "audit_assumptions",
    "classify_stability",
    "coefficient_a",
    "coefficient_b",
    "continue_pulse",
    "eigen_determinant",
    "eval_piecewise",
    "find_eigenvalues",
    "locate_hopf_closed_form",
    "locate_hopf_scan",
    "predict_breather",
    "reduce_to_cubic",
    "refine_pulse",
    "run_simulation",
    "shengjin_roots",
    "solve_adjoint",
    "solve_pulse",
    "solve_resolvent_quadratic",
    "stable_dt",
    "__version__",
]
