"""Probabilistic degenerate special numbers attached to a random variable ``Y``.

Each object here is computed from a finite sum over exact moments of ``Y``.
The matching generating-function routes live in :mod:`probderange.oracles`
and the test suite checks that the two agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .combinatorics import falling_deg
from .moments import (
    MomentProfile,
    deg_falling_moment,
    deg_rising_moment,
    iid_sum_deg_moment,
    shifted_deg_moment,
)
from .series import as_rational


@dataclass(frozen=True)
class ProbContext:
    """The ambient ``(Y, lam)`` shared by every value, plus the largest index ``n_max``."""

    Y: MomentProfile
    lam: Fraction
    n_max: int = 12

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        if not isinstance(self.n_max, int) or self.n_max < 0:
            raise ValueError(f"n_max must be a nonnegative integer, got {self.n_max!r}")

    @property
    def order(self) -> int:
        return self.n_max + 1

    def check(self, n: int) -> None:
        if n < 0 or n > self.n_max:
            raise ValueError(f"index n={n} outside 0..{self.n_max}")


@lru_cache(maxsize=None)
def _stirling2_prob_row(y: MomentProfile, lam: Fraction, n: int) -> tuple[Fraction, ...]:
    sums = [iid_sum_deg_moment(y, j, n, lam) for j in range(n + 1)]
    row = []
    for k in range(n + 1):
        acc = sum((comb(k, j) * (-1) ** (k - j) * sums[j] for j in range(k + 1)), Fraction(0))
        row.append(acc / factorial(k))
    return tuple(row)


def stirling2_prob(ctx: ProbContext, n: int, k: int) -> Fraction:
    """``{n brace k}_{Y,lam} = (1/k!) sum_j C(k,j) (-1)^(k-j) E[(S_j)_{n,lam}]``."""
    ctx.check(n)
    if k < 0 or k > n:
        raise ValueError(f"index k={k} outside 0..{n}")
    return _stirling2_prob_row(ctx.Y, ctx.lam, n)[k]


def bell_prob(ctx: ProbContext, n: int, x) -> Fraction:
    ctx.check(n)
    x = as_rational(x)
    row = _stirling2_prob_row(ctx.Y, ctx.lam, n)
    return sum((row[k] * x**k for k in range(n + 1)), Fraction(0))


def fubini_prob(ctx: ProbContext, n: int, x) -> Fraction:
    ctx.check(n)
    x = as_rational(x)
    row = _stirling2_prob_row(ctx.Y, ctx.lam, n)
    return sum((row[k] * factorial(k) * x**k for k in range(n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def _euler_prob_seq(y: MomentProfile, lam: Fraction, n_max: int) -> tuple[Fraction, ...]:
    # (mgf + 1) * E = 2 coefficientwise, with mgf_0 = 1
    mu = [deg_falling_moment(y, j, lam) for j in range(n_max + 1)]
    out: list[Fraction] = []
    for n in range(n_max + 1):
        if n == 0:
            out.append(Fraction(1))
            continue
        s = sum((comb(n, k) * mu[n - k] * out[k] for k in range(n)), Fraction(0))
        out.append(-s / 2)
    return tuple(out)


def euler_prob(ctx: ProbContext, n: int) -> Fraction:
    """Probabilistic degenerate Euler number, from the moment recurrence of ``2/(E[e_lam^Y]+1)``."""
    ctx.check(n)
    return _euler_prob_seq(ctx.Y, ctx.lam, max(n, 16))[n]


def derange_prob(ctx: ProbContext, n: int, x) -> Fraction:
    """``d^Y_{n,lam}(x) = n! sum_{k<=n} E[(x-Y)_{k,lam}] / k!``."""
    ctx.check(n)
    x = as_rational(x)
    total = sum(
        (shifted_deg_moment(x, ctx.Y, k, ctx.lam) / factorial(k) for k in range(n + 1)),
        Fraction(0),
    )
    return total * factorial(n)


def derange_prob_r(ctx: ProbContext, r: int, n: int) -> Fraction:
    """Probabilistic degenerate r-derangement number ``d^{(r,Y)}_{n,lam}``; zero for ``n < r``."""
    ctx.check(n)
    if r < 0:
        raise ValueError("r must be nonnegative")
    if n < r:
        return Fraction(0)
    total = Fraction(0)
    for k in range(r, n + 1):
        total += comb(k, r) * (-1) ** (n - k) * deg_rising_moment(ctx.Y, n - k, ctx.lam) / factorial(n - k)
    return total * factorial(n)


def derange2_prob(ctx: ProbContext, n: int, x) -> Fraction:
    """Second-kind polynomial ``D^Y_{n,lam}(x) = n! sum_k (-1)^k E[<Y>_{k,lam}] x^(n-k) / k!``."""
    ctx.check(n)
    x = as_rational(x)
    total = Fraction(0)
    for k in range(n + 1):
        total += (-1) ** k * deg_rising_moment(ctx.Y, k, ctx.lam) * x ** (n - k) / factorial(k)
    return total * factorial(n)


def derange2_prob_recurrence(ctx: ProbContext, n: int, x) -> Fraction:
    """Same polynomial via ``D_n = n x D_{n-1} + (-1)^n E[<Y>_{n,lam}]``."""
    ctx.check(n)
    x = as_rational(x)
    d = Fraction(1)
    for m in range(1, n + 1):
        d = m * x * d + (-1) ** m * deg_rising_moment(ctx.Y, m, ctx.lam)
    return d


def derange_prob_dual(ctx: ProbContext, n: int, x) -> Fraction:
    """``sum_l C(n,l) d^Y_{l,lam} (x)_{n-l,lam}``, the convolution form of ``d^Y_{n,lam}(x)``."""
    ctx.check(n)
    x = as_rational(x)
    return sum(
        (comb(n, l) * derange_prob(ctx, l, 0) * falling_deg(x, n - l, ctx.lam) for l in range(n + 1)),
        Fraction(0),
    )

