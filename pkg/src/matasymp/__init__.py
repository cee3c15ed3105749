"""Asymptotic expansions of matrix-valued Laplace integrals and special functions."""

from . import expansions, matcore, oracle, specfun
from .errors import MatasympError
from .expansions import (
    ExpansionTermList,
    LaplaceProblem,
    TruncationResult,
    WatsonInput,
    evaluate_expansion,
    laplace_coefficients,
    laplace_evaluate,
    watson_terms,
)
from .matcore import (
    hermitian_part,
    load_matrix,
    matrix_exp,
    matrix_log,
    matrix_power,
    matrix_power_integral,
    mu,
    omega,
    save_matrix,
    spectral_profile,
)
from .oracle import MatrixFamily, generate, lift_scalar, matrix_laplace_quadrature
from .specfun import (
    BesselSpec,
    KummerParams,
    bessel_asymptotic,
    bessel_integral,
    bessel_leading,
    gamma_matrix,
    gamma_remainder_bound,
    gamma_stirling,
    kummer_asymptotic,
    kummer_mellin_barnes,
    kummer_series,
    reciprocal_gamma,
    stirling_coefficients,
)

__version__ = "0.1.0"
