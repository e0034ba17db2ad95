"""Piatetski-Shapiro prime counting and exponential-sum diagnostics."""

from .arith import GammaExponent, GammaPair, ps_member
from .count import (
    CountReport,
    TheoremReport,
    count_report,
    f_decomposition,
    main_term,
    pi_gamma,
    pi_gamma_dual,
    pi_intersect,
    pi_intersect_dual,
    theorem_report,
)
from .errors import ArgumentError, CapacityError, DomainError, HypothesisError, NumericError, PslabError
from .sieve import prime_count, primes_up_to

__version__ = "0.1.0"
