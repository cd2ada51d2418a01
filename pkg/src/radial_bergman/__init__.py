"""Weighted Bergman kernels of radial weights: moments, kernels, zeros."""

from .errors import AccuracyError, BoundaryZeroError, DomainError, ValidationError
from .weights import (PLANE, UNIT_DISK, DomainSpec, MittagLefflerWeight, TabulatedWeight,
                      TruncatedDiskWeight, ValidationReport, validate, weight_value)
from .moments import (MomentSequence, ml_moment_closed_form, moment_table, quadrature_moment,
                      truncated_disk_moment)
from .mittag_leffler import MLFunctionParams, ml_eval
from .kernel import (CLOSED, LIMIT, SERIES, KernelEvaluator, kernel_eval_closed, kernel_eval_series, limit_disk_kernel,
                     reproduce_check)
from .zeros import (ZeroReport, find_zeros_in_disk, kernel_zero_function, winding_count,
                    zero_growth_scan)
from .equivalent_weights import (ConvergenceReport, convergence_report, emergent_zero,
                                 hypothesis_check, ramadanov_distance)

MLWeightParams = MittagLefflerWeight
TruncatedDiskWeightParams = TruncatedDiskWeight
TabulatedRadialWeight = TabulatedWeight

__all__ = [
    "AccuracyError", "BoundaryZeroError", "DomainError", "ValidationError",
    "PLANE", "UNIT_DISK", "DomainSpec", "MittagLefflerWeight", "TabulatedWeight",
    "TruncatedDiskWeight", "ValidationReport", "validate", "weight_value",
    "MLWeightParams", "TruncatedDiskWeightParams", "TabulatedRadialWeight",
    "MomentSequence", "ml_moment_closed_form", "moment_table", "quadrature_moment",
    "truncated_disk_moment", "MLFunctionParams", "ml_eval",
    "CLOSED", "LIMIT", "SERIES", "KernelEvaluator", "kernel_eval_closed", "kernel_eval_series", "limit_disk_kernel",
    "reproduce_check", "ZeroReport", "find_zeros_in_disk", "kernel_zero_function", "winding_count", "zero_growth_scan",
    "ConvergenceReport", "convergence_report", "emergent_zero", "hypothesis_check", "ramadanov_distance",
]
