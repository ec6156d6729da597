"""Degenerate factorials, Stirling triangles, derangement and Fubini polynomials.

Everything here is a closed form in ``lam`` and ``x``, so ``lam = 0`` is
allowed and gives the classical objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .series import as_rational, neg_deg_log_one_minus

KINDS = ("stirling1", "stirling2-degenerate", "stirling1-unsigned-degenerate")


def _check_indices(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise ValueError(f"negative index ({n}, {k})")
    if k > n:
        raise ValueError(f"index k={k} exceeds n={n}")


def falling_deg(x, n: int, lam) -> Fraction:
    """``(x)_{n,lam} = x (x - lam) ... (x - (n-1) lam)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x, lam = as_rational(x), as_rational(lam)
    p = Fraction(1)
    for i in range(n):
        p *= x - i * lam
    return p


def rising_deg(x, n: int, lam) -> Fraction:
    """``<x>_{n,lam} = x (x + lam) ... (x + (n-1) lam)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x, lam = as_rational(x), as_rational(lam)
    p = Fraction(1)
    for i in range(n):
        p *= x + i * lam
    return p


def falling(x, n: int) -> Fraction:
    return falling_deg(x, n, 1)


@dataclass(frozen=True)
class TriangleCache:
    """Lower-triangular table ``table[n][k]`` for ``0 <= k <= n <= n_max``."""

    kind: str
    lam: Fraction | None
    table: tuple[tuple[Fraction, ...], ...]

    @property
    def n_max(self) -> int:
        return len(self.table) - 1

    def __call__(self, n: int, k: int) -> Fraction:
        _check_indices(n, k)
        if n > self.n_max:
            raise IndexError(f"row {n} beyond cached n_max={self.n_max}")
        return self.table[n][k]


def _grow(n: int) -> int:
    # round cache sizes up so nearby requests share one triangle
    return max(16, 1 << (n.bit_length()))


@lru_cache(maxsize=None)
def _stirling1_triangle(n_max: int) -> TriangleCache:
    rows = [(Fraction(1),)]
    for n in range(n_max):
        prev = rows[-1]
        row = []
        for k in range(n + 2):
            v = prev[k - 1] if k >= 1 else 0
            if k <= n:
                v -= n * prev[k]
            row.append(Fraction(v))
        rows.append(tuple(row))
    return TriangleCache("stirling1", None, tuple(rows))


def stirling1_triangle(n_max: int) -> TriangleCache:
    return _stirling1_triangle(_grow(n_max))


def stirling1(n: int, k: int) -> Fraction:
    """Signed Stirling number of the first kind, ``(x)_n = sum_k S1(n,k) x^k``."""
    _check_indices(n, k)
    return stirling1_triangle(n)(n, k)


@lru_cache(maxsize=None)
def _stirling2_deg_triangle(lam: Fraction, n_max: int) -> TriangleCache:
    # Solve (j)_{n,lam} = sum_{k<=j} S(n,k) (j)_k at j = 0..n; lower
    # triangular in j with diagonal j!, so forward substitution is exact.
    rows = []
    falls = [[falling(j, k) for k in range(n_max + 1)] for j in range(n_max + 1)]
    for n in range(n_max + 1):
        row: list[Fraction] = []
        for j in range(n + 1):
            rhs = falling_deg(j, n, lam)
            for k in range(j):
                rhs -= row[k] * falls[j][k]
            row.append(rhs / factorial(j))
        rows.append(tuple(row))
    return TriangleCache("stirling2-degenerate", lam, tuple(rows))


def stirling2_deg_triangle(lam, n_max: int) -> TriangleCache:
    return _stirling2_deg_triangle(as_rational(lam), _grow(n_max))


def stirling2_deg(n: int, k: int, lam) -> Fraction:
    """Degenerate Stirling number of the second kind ``{n brace k}_lam``.

    Defined by ``(x)_{n,lam} = sum_k {n brace k}_lam (x)_k``.
    """
    _check_indices(n, k)
    return stirling2_deg_triangle(lam, n)(n, k)


def stirling2(n: int, k: int) -> Fraction:
    return stirling2_deg(n, k, 0)


@lru_cache(maxsize=None)
def _stirling1_udeg_triangle(lam: Fraction, n_max: int) -> TriangleCache:
    base = neg_deg_log_one_minus(lam, n_max)
    rows = [[Fraction(0)] * (j + 1) for j in range(n_max + 1)]
    power = base ** 0
    for l in range(n_max + 1):
        # (1/l!) (-log_lam(1 - t))^l, read off exponentially
        for j in range(l, n_max + 1):
            rows[j][l] = power.egf(j) / factorial(l)
        power = power * base
    return TriangleCache("stirling1-unsigned-degenerate", lam, tuple(tuple(r) for r in rows))


def stirling1_deg_unsigned(j: int, l: int, lam) -> Fraction:
    """Unsigned degenerate Stirling number of the first kind ``[j brack l]_lam``."""
    _check_indices(j, l)
    return _stirling1_udeg_triangle(as_rational(lam), _grow(j))(j, l)


def derangement_poly(n: int, x) -> Fraction:
    """``d_n(x) = n! sum_{k<=n} (x-1)^k / k!``; ``d_n(0)`` counts derangements."""
    return derangement_deg_poly(n, x, 0)


def derangement_deg_poly(n: int, x, lam) -> Fraction:
    """Degenerate derangement polynomial ``d_{n,lam}(x) = n! sum_k (x-1)_{k,lam} / k!``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x, lam = as_rational(x), as_rational(lam)
    total, term = Fraction(0), Fraction(1)
    for k in range(n + 1):
        total += term
        term = term * (x - 1 - k * lam) / (k + 1)
    return total * factorial(n)


def derangement2_deg_poly(n: int, x, lam) -> Fraction:
    """Second-kind degenerate derangement polynomial ``D_{n,lam}(x)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x, lam = as_rational(x), as_rational(lam)
    total = Fraction(0)
    for k in range(n + 1):
        total += falling_deg(-1, k, lam) / factorial(k) * x ** (n - k)
    return total * factorial(n)


def fubini_deg(n: int, x, lam) -> Fraction:
    """Degenerate Fubini polynomial ``F_{n,lam}(x) = sum_k {n brace k}_lam k! x^k``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = as_rational(x)
    tri = stirling2_deg_triangle(lam, n)
    return sum((tri(n, k) * factorial(k) * x**k for k in range(n + 1)), Fraction(0))


def binom(q, k: int) -> Fraction:
    """Generalized binomial coefficient; exact integer arithmetic for integer ``q >= 0``."""
    if k < 0:
        return Fraction(0)
    if isinstance(q, int) and q >= 0:
        return Fraction(comb(q, k))
    q = as_rational(q)
    if q.denominator == 1 and q >= 0:
        return Fraction(comb(int(q), k))
    return falling_deg(q, k, 1) / factorial(k)

