"""Six-vertex model with domain wall boundary conditions via Hankel determinants.

Exact partition functions at arbitrary precision, brute-force ASM
enumeration, large-N asymptotics, the equilibrium measure of the
disordered phase, and exact ASM counts.
"""
from .errors import (
    BranchError,
    CapExceeded,
    ConditioningError,
    DegenerateFit,
    IceHankelError,
    InvalidASM,
    NonConvergence,
    PhaseError,
    PrecisionError,
    QuadratureError,
    RootFindError,
)
from .params import Angle, ModelParams, VertexWeights, make_params, weights_of
from .precision import Certified, PrecisionReal, adaptive_precision
from .hankel import (
    RecurrenceTable,
    certified_partition_Z,
    certified_recurrence_table,
    free_energy_F,
    hankel_tau,
    partition_Z,
    recurrence_table,
    toda_check,
)
from .enumerator import enumerate_asm, evaluate_Z, weight_polynomial, x_enumeration
from .asymptotics import asymptotic_constants, fit_kappa, predicted_R_n, residual_scan
from .equilibrium import endpoints, endpoints_oracle
from .asm_exact import asm3_count, asm_asymptotic_check, asm_count, special_Z

__all__ = [
    "Angle",
    "ModelParams",
    "VertexWeights",
    "make_params",
    "weights_of",
    "PrecisionReal",
    "Certified",
    "adaptive_precision",
    "RecurrenceTable",
    "hankel_tau",
    "partition_Z",
    "certified_partition_Z",
    "free_energy_F",
    "recurrence_table",
    "certified_recurrence_table",
    "toda_check",
    "enumerate_asm",
    "weight_polynomial",
    "evaluate_Z",
    "x_enumeration",
    "asymptotic_constants",
    "predicted_R_n",
    "residual_scan",
    "fit_kappa",
    "endpoints",
    "endpoints_oracle",
    "asm_count",
    "asm3_count",
    "special_Z",
    "asm_asymptotic_check",
    "IceHankelError",
    "PhaseError",
    "PrecisionError",
    "ConditioningError",
    "NonConvergence",
    "CapExceeded",
    "InvalidASM",
    "QuadratureError",
    "BranchError",
    "RootFindError",
    "DegenerateFit",
]
