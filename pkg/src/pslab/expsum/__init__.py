"""Exponential sums, their lemma checkers and the supporting identities."""

from .algebra import CoefficientAlgebra, bilinear_phase_partials, case4_coefficients, case4_grid, case4_report
from .bprocess import BProcessResult, b_process, b_process_check
from .families import lemma_suite, scale_sup
from .heath_brown import HeathBrownResult, heath_brown_decompose
from .lemmas import (
    delta_expansion_check,
    kratzel_min_sum_check,
    mh_eh_check,
    mh_eh_split,
    min_sum_check,
    min_sum_zhai,
    psi_fourier_check,
    psi_fourier_grid_check,
    vdc_derivative_check,
    weyl_vdc_check,
    zhai_Sk_check,
)
from .phase import (
    BilinearSpec,
    PhaseSpec,
    RNorm,
    chebyshev_psi_range,
    exp_sum,
    mobius_coeffs,
    prime_exp_sum,
    random_unimodular,
    type_i_sum,
    type_ii_sum,
    unit_coeffs,
)
from .reports import LemmaCheckReport, LemmaId, reports_to_json

__all__ = [name for name in dir() if not name.startswith("_")]
