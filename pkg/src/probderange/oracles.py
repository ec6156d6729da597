"""Generating functions built only from series primitives.

These are the independent second route for every closed form in
:mod:`probderange.probfamily` and :mod:`probderange.combinatorics`: a value
is ``n! [t^n]`` of the named series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .moments import MomentProfile, mgf_series
from .series import (
    Series,
    as_rational,
    binomial_pow,
    deg_exp_series,
    exp_series,
    series_exp,
)


@dataclass(frozen=True)
class EvalPoint:
    """One sample point: rational ``lam`` and ``x``, a distribution ``Y`` and an integer ``r``."""

    lam: Fraction
    x: Fraction
    Y: MomentProfile = field(default_factory=MomentProfile.constant)
    r: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        object.__setattr__(self, "x", as_rational(self.x))
        if self.r < 0:
            raise ValueError("r must be nonnegative")

    def __str__(self):
        return f"lambda={self.lam} x={self.x} Y={self.Y} r={self.r}"

    def as_dict(self) -> dict:
        return {"lambda": str(self.lam), "x": str(self.x), "dist": str(self.Y), "r": self.r}


def _one_minus_ct_inverse(c: Fraction, order: int) -> Series:
    # 1/(1 - c t) = 1 + c t + c^2 t^2 + ...
    return Series([c**k for k in range(order + 1)], order)


def _u(point: EvalPoint, order: int, sign: int = 1) -> Series:
    return mgf_series(point.Y, point.lam, sign, order)


def _d_prob(p, N, k):
    num = deg_exp_series(p.x, p.lam, N) * _u(p, N, -1)
    return num * _one_minus_ct_inverse(Fraction(1), N)


def _d_prob_r(p, N, k):
    r = p.r
    geometric = binomial_pow(-(r + 1), N).scale(-1)  # (1 - t)^-(r+1)
    return (geometric * _u(p, N, -1)).shift(r)


def _D_prob(p, N, k):
    return _u(p, N, -1) * _one_minus_ct_inverse(p.x, N)


def _fubini_prob(p, N, k):
    return 1 / (1 - p.x * (_u(p, N) - 1))


def _bell_prob(p, N, k):
    return series_exp(p.x * (_u(p, N) - 1))


def _euler_prob(p, N, k):
    return 2 / (_u(p, N) + 1)


def _stirling2_prob(p, N, k):
    return (_u(p, N) - 1) ** k / factorial(k)


def _d_deg(p, N, k):
    return deg_exp_series(p.x - 1, p.lam, N) * _one_minus_ct_inverse(Fraction(1), N)


def _D_deg(p, N, k):
    return deg_exp_series(-1, p.lam, N) * _one_minus_ct_inverse(p.x, N)


def _fubini_deg(p, N, k):
    return 1 / (1 - p.x * (deg_exp_series(1, p.lam, N) - 1))


def _stirling2_deg(p, N, k):
    return (deg_exp_series(1, p.lam, N) - 1) ** k / factorial(k)


def _d_classical(p, N, k):
    return exp_series(N).scale(p.x - 1) * _one_minus_ct_inverse(Fraction(1), N)


def _phi_euler_product(p, N, k):
    # 2 exp((1-x)(u-1)) / (1 + u): the finite side of the Abel-summed identity
    u = _u(p, N)
    return 2 * series_exp((1 - p.x) * (u - 1)) / (u + 1)


GF_BUILDERS = {
    "d_prob": _d_prob,
    "d_prob_r": _d_prob_r,
    "D_prob": _D_prob,
    "fubini_prob": _fubini_prob,
    "bell_prob": _bell_prob,
    "euler_prob": _euler_prob,
    "stirling2_prob": _stirling2_prob,
    "d_deg": _d_deg,
    "D_deg": _D_deg,
    "fubini_deg": _fubini_deg,
    "stirling2_deg": _stirling2_deg,
    "d_classical": _d_classical,
    "phi_euler": _phi_euler_product,
}

# ids whose series do not involve the degenerate exponential
LAMBDA_FREE = {"d_classical"}


def gf_oracle(def_id: str, point: EvalPoint, order: int, k: int = 0) -> Series:
    """Truncated generating function ``def_id`` at ``point``.

    ``k`` selects the column for the Stirling ids; ``point.r`` is used by
    ``d_prob_r``.
    """
    try:
        build = GF_BUILDERS[def_id]
    except KeyError:
        raise KeyError(f"unknown generating function {def_id!r}; known: {', '.join(GF_BUILDERS)}") from None
    if order < 0:
        raise ValueError("order must be nonnegative")
    if point.lam == 0 and def_id not in LAMBDA_FREE:
        raise ValueError("lambda = 0 has no degenerate series; use the closed-form table instead")
    return build(point, order, k)


def oracle_value(def_id: str, point: EvalPoint, n: int, k: int = 0) -> Fraction:
    """``n! [t^n]`` of the named generating function."""
    return gf_oracle(def_id, point, n, k).egf(n)
