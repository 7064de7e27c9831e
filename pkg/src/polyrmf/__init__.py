"""Random multiplicative functions at polynomial arguments.

Exact sieving and factor tables for polynomial values, squarefree-kernel
moment counts, Pell-type curve point enumeration, seeded random
multiplicative function samplers with Monte Carlo CLT experiments, and
multi-scale fluctuation scans.
"""
from .errors import DomainError, InfeasibleScaleError
from .poly import (
    IRREDUCIBLE_QUADRATIC,
    LINEAR_FACTORS,
    UNSUPPORTED,
    IntPolynomial,
    PolyClass,
    classify,
    fixed_divisor,
    is_admissible,
    roots_mod,
)
from .sieve import (
    LargestPrimeStats,
    ValueRecord,
    ValueTable,
    kappa_euler,
    largest_prime_stats,
    sieve_values,
    smooth_count,
    squarefree_count,
)
from .moments import (
    GcdHistogram,
    KernelKey,
    MomentReport,
    fourth_moment_exact,
    gcd_class_histogram,
    mcleish_condition_sums,
    moment_report,
    off_diagonal_count,
    pair_kernel,
    second_moment_exact,
)
from .curves import CurveScanReport, exponent_scan, integral_points
from .rmf import CltReport, RmfSampler, f_value, monte_carlo_clt, partial_sum, partial_sum_by_class
from .fluctuations import (
    FluctuationReport,
    PrimeClassSets,
    ScaleSet,
    build_prime_class_sets,
    lil_scan,
    scale_set,
    three_sum_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "InfeasibleScaleError",
    "IntPolynomial",
    "PolyClass",
    "LINEAR_FACTORS",
    "IRREDUCIBLE_QUADRATIC",
    "UNSUPPORTED",
    "classify",
    "fixed_divisor",
    "is_admissible",
    "roots_mod",
    "ValueRecord",
    "ValueTable",
    "LargestPrimeStats",
    "sieve_values",
    "squarefree_count",
    "kappa_euler",
    "largest_prime_stats",
    "smooth_count",
    "KernelKey",
    "MomentReport",
    "GcdHistogram",
    "pair_kernel",
    "second_moment_exact",
    "fourth_moment_exact",
    "off_diagonal_count",
    "mcleish_condition_sums",
    "moment_report",
    "gcd_class_histogram",
    "CurveScanReport",
    "integral_points",
    "exponent_scan",
    "RmfSampler",
    "CltReport",
    "f_value",
    "partial_sum",
    "partial_sum_by_class",
    "monte_carlo_clt",
    "ScaleSet",
    "PrimeClassSets",
    "FluctuationReport",
    "scale_set",
    "build_prime_class_sets",
    "three_sum_decomposition",
    "lil_scan",
    "__version__",
]
