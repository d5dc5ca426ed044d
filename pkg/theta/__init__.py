"""
Certified Jacobi theta functions on the imaginary axis and their Gaussian limit.
"""
from .contracts import (
    CertificationReport,
    EvalReport,
    ExpansionCertification,
    ExpansionReport,
    Method,
    Nome,
    ThetaKind,
)
from .core import q_pochhammer, q_pochhammer_multi, series_scale, theta_product, theta_series
from .errors import OracleRefusal, ThetaConvergenceError, ThetaDomainError, ThetaError
from .frac import Decomposition, cospi, decompose, sinpi
from .gauss import (
    certify,
    certify_expansion,
    cor_bound,
    cor_intermediate_bound,
    cor_precondition,
    gaussian_approx,
    leading_expansion,
    measured_remainder,
    thm22_bound,
    thm22_check,
)
from .modular import theta_auto, theta_transformed, transform_identity_residual, transformed_remainder
from .scaled import PlainValue, ScaledReal, add, mul, sum_scaled, to_plain

__all__ = [
    "CertificationReport", "EvalReport", "ExpansionCertification", "ExpansionReport", "Method", "Nome",
    "ThetaKind", "q_pochhammer", "q_pochhammer_multi", "series_scale", "theta_product", "theta_series",
    "OracleRefusal", "ThetaConvergenceError", "ThetaDomainError", "ThetaError", "Decomposition", "cospi",
    "decompose", "sinpi", "certify", "certify_expansion", "cor_bound", "cor_intermediate_bound",
    "cor_precondition", "gaussian_approx", "leading_expansion", "measured_remainder", "thm22_bound",
    "thm22_check", "theta_auto", "theta_transformed", "transform_identity_residual", "transformed_remainder",
    "PlainValue", "ScaledReal", "add", "mul", "sum_scaled", "to_plain",
]
