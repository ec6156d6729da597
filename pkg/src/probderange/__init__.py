"""Probabilistic degenerate derangement polynomials in exact rational arithmetic."""

from .combinatorics import (
    derangement2_deg_poly,
    derangement_deg_poly,
    derangement_poly,
    falling_deg,
    fubini_deg,
    rising_deg,
    stirling1,
    stirling1_deg_unsigned,
    stirling2_deg,
)
from .moments import MomentProfile, parse_distribution, raw_moment
from .oracles import EvalPoint, gf_oracle
from .probfamily import (
    ProbContext,
    bell_prob,
    derange2_prob,
    derange_prob,
    derange_prob_r,
    euler_prob,
    fubini_prob,
    stirling2_prob,
)
from .series import Series, binomial_pow, deg_exp_series, deg_log_series
from .verify import VerificationReport, verify_theorem

__version__ = "0.1.0"
