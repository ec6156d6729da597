"""Abel summation with Richardson extrapolation in high-precision decimals.

``A(r) = sum_m a_m r^m`` is summed for a few radii ``r < 1``; the limit
``r -> 1-`` is estimated by polynomial extrapolation in ``h = 1 - r``.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Sequence

import gmpy2
from gmpy2 import mpfr

DEFAULT_RADII = ("0.90", "0.95", "0.99", "0.999")
DEFAULT_ORDER = 3
DEFAULT_TAIL = "1e-20"
DEFAULT_PRECISION = 50
PRECISION_ENV = "PROBDERANGE_ABEL_DPS"
MAX_TERMS = 5_000_000


class AbelSummationError(ArithmeticError):
    """The damped series could not be summed to the requested precision."""


@dataclass(frozen=True)
class AbelResult:
    value: object  # mpfr, or a list of mpfr for vector-valued terms
    error: object
    radii: tuple
    partial_sums: tuple
    terms_used: tuple


def working_precision(dps: int | None = None) -> int:
    """Decimal digits for Abel mode; ``PROBDERANGE_ABEL_DPS`` overrides the default."""
    if dps is not None:
        return int(dps)
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{PRECISION_ENV} must be an integer digit count, got {env!r}") from None
        if value < 15:
            raise ValueError(f"{PRECISION_ENV} must be at least 15")
        return value
    return DEFAULT_PRECISION


@contextmanager
def workdps(dps: int):
    """Run with ``dps`` decimal digits (plus guard bits) of binary precision."""
    bits = math.ceil(dps * math.log2(10)) + 16
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        yield


def damped_sum(
    term: Callable[[int], object],
    r,
    *,
    degree: int = 0,
    bound=None,
    tail_tol=DEFAULT_TAIL,
    max_terms: int = MAX_TERMS,
):
    """``sum_m term(m) r^m`` truncated once the tail is provably below ``tail_tol``.

    The tail bound assumes ``|term(m)| <= bound * (m+1)**degree``.  Without
    ``bound`` the running maximum of ``|term(m)| / (m+1)**degree`` stands in,
    which is a heuristic.  ``term`` may return a sequence, in which case the
    partial sums are vectors and the bound applies componentwise.
    """
    r = mpfr(r)
    if not 0 < r < 1:
        raise AbelSummationError(f"radius {r} is not in (0, 1)")
    tol = mpfr(tail_tol)
    peak = degree / -gmpy2.log(r)
    rm = mpfr(1)
    acc = None
    vector = False
    running = mpfr(0) if bound is None else mpfr(bound)
    for m in range(max_terms):
        a = term(m)
        if acc is None:
            vector = isinstance(a, (list, tuple))
            acc = [mpfr(0)] * len(a) if vector else mpfr(0)
        if vector:
            size = mpfr(0)
            for i, ai in enumerate(a):
                acc[i] += ai * rm
                if abs(ai) > size:
                    size = abs(ai)
        else:
            acc += a * rm
            size = abs(a)
        if bound is None:
            running = max(running, size / (m + 1) ** degree)
        # the bound decreases past the peak, so checking it every few terms is enough
        if m > peak and m % 16 == 0:
            q = r * (mpfr(m + 2) / (m + 1)) ** degree
            if q < 1:
                tail = running * mpfr(m + 2) ** degree * rm * r / (1 - q)
                if tail < tol:
                    return acc, m + 1
        rm *= r
    raise AbelSummationError(
        f"non-summable at given precision: tail still above {tail_tol} after {max_terms} terms at r={r}"
    )


def richardson(hs: Sequence, values: Sequence, order: int):
    """Extrapolate ``values(h)`` to ``h = 0`` with a degree-``order`` polynomial.

    Uses the ``order + 1`` smallest ``h``; the error estimate is the gap to
    the degree ``order - 1`` extrapolant on the smallest ``order`` of them.
    """
    if order < 0:
        raise ValueError("extrapolation order must be nonnegative")
    if len(hs) < order + 1:
        raise ValueError(f"order {order} extrapolation needs {order + 1} radii, got {len(hs)}")
    pairs = sorted(zip(hs, values), key=lambda p: p[0])[: order + 1]
    est = _neville_at_zero([p[0] for p in pairs], [p[1] for p in pairs])
    if order == 0:
        return est, abs(pairs[0][1] - (pairs[1][1] if len(pairs) > 1 else pairs[0][1]))
    low = _neville_at_zero([p[0] for p in pairs[:order]], [p[1] for p in pairs[:order]])
    return est, abs(est - low)


def _neville_at_zero(xs, ys):
    p = list(ys)
    n = len(xs)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            p[i] = (xs[j] * p[i] - xs[i] * p[i + 1]) / (xs[j] - xs[i])
    return p[0]


def abel_sum(
    term: Callable[[int], object],
    radii: Sequence = DEFAULT_RADII,
    extrapolation_order: int = DEFAULT_ORDER,
    *,
    degree: int = 0,
    bound=None,
    tail_tol=DEFAULT_TAIL,
    dps: int | None = None,
) -> AbelResult:
    """Abel sum ``lim_{r->1-} sum_m term(m) r^m`` with an error estimate.

    >>> float(abel_sum(lambda m: (-1) ** m).value)
    0.5
    """
    radii = [str(r) if not isinstance(r, str) else r for r in radii]
    with workdps(working_precision(dps)):
        rs = [mpfr(r) for r in radii]
        if any(b <= a for a, b in zip(rs, rs[1:])):
            raise ValueError("radii must be strictly increasing")
        partials, used = [], []
        for r in rs:
            s, k = damped_sum(term, r, degree=degree, bound=bound, tail_tol=tail_tol)
            partials.append(s)
            used.append(k)
        hs = [1 - r for r in rs]
        if isinstance(partials[0], list):
            comps = list(zip(*partials))
            ests = [richardson(hs, c, extrapolation_order) for c in comps]
            value = [e[0] for e in ests]
            error = [e[1] for e in ests]
        else:
            value, error = richardson(hs, partials, extrapolation_order)
        return AbelResult(value, error, tuple(radii), tuple(partials), tuple(used))
