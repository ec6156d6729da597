"""Truncated formal power series over exact rationals.

Coefficients use the ordinary convention: ``s[n]`` is the coefficient of
``t**n``.  Exponential generating functions are read off with
:meth:`Series.egf`, which applies the ``n!`` factor at extraction time.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

Rational = Fraction


class NonInvertibleSeries(ZeroDivisionError):
    """Raised when dividing by a series with zero constant term."""


class CompositionError(ValueError):
    """Raised when the inner series of a composition has a nonzero constant term."""


_RATIONAL = re.compile(r"([+-]?\d+)(?:\s*/\s*(\d+))?")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to :class:`Fraction`.

    Floats and decimal strings are refused so nothing inexact leaks into
    the exact pipeline.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL.fullmatch(value.strip())
        if not m:
            raise ValueError(f"not an exact rational: {value!r} (use an integer or num/den)")
        return Fraction(int(m[1]), int(m[2] or 1))
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a Fraction or 'num/den' string")
    return Fraction(value)


class Series:
    """Immutable truncated power series ``c_0 + c_1 t + ... + c_N t^N``."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable, order: int | None = None):
        coeffs = [as_rational(c) for c in coefficients]
        if order is None:
            if not coeffs:
                raise ValueError("empty series needs an explicit order")
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        if len(coeffs) <= order:
            coeffs.extend([Fraction(0)] * (order + 1 - len(coeffs)))
        self._c = tuple(coeffs[: order + 1])

    @classmethod
    def _raw(cls, coeffs: Sequence[Fraction]) -> "Series":
        # trusted constructor: coeffs already Fractions of the right length
        s = object.__new__(cls)
        s._c = tuple(coeffs)
        return s

    @classmethod
    def constant(cls, c, order: int) -> "Series":
        return cls([c], order)

    @classmethod
    def monomial(cls, k: int, order: int, c=1) -> "Series":
        coeffs = [Fraction(0)] * (order + 1)
        if k <= order:
            coeffs[k] = as_rational(c)
        return cls._raw(coeffs)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, n):
        return self._c[n]

    def __iter__(self):
        return iter(self._c)

    def egf(self, n: int) -> Fraction:
        """``n! * [t^n]``, the n-th term of the sequence this series generates exponentially."""
        return self._c[n] * factorial(n)

    def egf_list(self) -> list[Fraction]:
        return [self.egf(n) for n in range(len(self._c))]

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise ValueError(f"cannot raise truncation order from {self.order} to {order}")
        return Series._raw(self._c[: order + 1])

    def __eq__(self, other):
        if isinstance(other, Series):
            m = min(len(self._c), len(other._c))
            return self._c[:m] == other._c[:m]
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        body = ", ".join(str(c) for c in self._c)
        return f"Series([{body}], order={self.order})"

    # ring operations -------------------------------------------------------

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        return Series.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        m = min(len(self._c), len(other._c))
        return Series._raw([a + b for a, b in zip(self._c[:m], other._c[:m])])

    __radd__ = __add__

    def __neg__(self):
        return Series._raw([-a for a in self._c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Series):
            return series_mul(self, other)
        c = as_rational(other)
        return Series._raw([a * c for a in self._c])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return series_div(self, other)
        c = as_rational(other)
        return Series._raw([a / c for a in self._c])

    def __rtruediv__(self, other):
        return series_div(self._coerce(other), self)

    def __pow__(self, m: int):
        return series_pow(self, m)

    def compose(self, inner: "Series") -> "Series":
        return series_compose(self, inner)

    def shift(self, k: int) -> "Series":
        """Multiply by ``t**k`` keeping the truncation order."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        n = len(self._c)
        return Series._raw(([Fraction(0)] * k + list(self._c))[:n])

    def scale(self, c) -> "Series":
        """Substitute ``t -> c*t``."""
        c = as_rational(c)
        out, p = [], Fraction(1)
        for a in self._c:
            out.append(a * p)
            p *= c
        return Series._raw(out)


def series_mul(a: Series, b: Series) -> Series:
    n = min(a.order, b.order)
    ac, bc = a.coefficients, b.coefficients
    out = []
    for k in range(n + 1):
        s = Fraction(0)
        for i in range(k + 1):
            x = ac[i]
            if x:
                y = bc[k - i]
                if y:
                    s += x * y
        out.append(s)
    return Series._raw(out)


def series_div(a: Series, b: Series) -> Series:
    """Quotient ``a / b``; the divisor must have a nonzero constant term."""
    b0 = b[0]
    if b0 == 0:
        raise NonInvertibleSeries("non-invertible series: divisor has zero constant term")
    n = min(a.order, b.order)
    q: list[Fraction] = []
    for k in range(n + 1):
        s = a[k]
        for i in range(1, k + 1):
            if b[i]:
                s -= b[i] * q[k - i]
        q.append(s / b0)
    return Series._raw(q)


def series_pow(a: Series, m: int) -> Series:
    """``a**m`` for integer ``m >= 0`` by repeated squaring."""
    if m < 0:
        return series_pow(series_div(Series.constant(1, a.order), a), -m)
    result = Series.constant(1, a.order)
    base = a
    while m:
        if m & 1:
            result = series_mul(result, base)
        m >>= 1
        if m:
            base = series_mul(base, base)
    return result


def series_compose(outer: Series, inner: Series) -> Series:
    """``outer(inner(t))``; ``inner`` must have zero constant term."""
    if inner[0] != 0:
        raise CompositionError("composition undefined: inner series has nonzero constant term")
    n = min(outer.order, inner.order)
    inner = inner.truncate(n)
    # Horner: valuation of inner >= 1 keeps every step exact at order n
    acc = Series.constant(outer[n], n)
    for k in range(n - 1, -1, -1):
        acc = series_mul(acc, inner) + outer[k]
    return acc


def binomial_pow(q, order: int) -> Series:
    """``(1 + s)**q`` for rational ``q``: coefficient k is ``binom(q, k)``."""
    q = as_rational(q)
    out, c = [], Fraction(1)
    for k in range(order + 1):
        out.append(c)
        c = c * (q - k) / (k + 1)
    return Series._raw(out)


def exp_series(order: int) -> Series:
    """Classical ``exp(s)``; the lambda -> 0 limit of the degenerate exponential."""
    return Series._raw([Fraction(1, factorial(k)) for k in range(order + 1)])


def log1p_series(order: int) -> Series:
    """Classical ``log(1 + s)``."""
    return Series._raw([Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, order + 1)])


def series_exp(a: Series) -> Series:
    """``exp(a)`` for ``a`` with zero constant term."""
    return series_compose(exp_series(a.order), a)


def deg_exp_series(x, lam, order: int) -> Series:
    """Degenerate exponential ``e_lam^x(t) = (1 + lam t)**(x/lam)``.

    Coefficient k is ``(x)_{k,lam} / k!``.  ``lam = 0`` is rejected; use
    ``exp_series(order).scale(x)`` for the classical limit.
    """
    x, lam = as_rational(x), as_rational(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero for the degenerate exponential")
    out, c = [], Fraction(1)
    for k in range(order + 1):
        out.append(c)
        c = c * (x - k * lam) / (k + 1)
    return Series._raw(out)


def deg_log_series(lam, order: int) -> Series:
    """``log_lam(1 + s) = ((1 + s)**lam - 1) / lam``, inverse of ``e_lam(t) - 1``."""
    lam = as_rational(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero for the degenerate logarithm")
    b = binomial_pow(lam, order)
    return Series._raw([Fraction(0)] + [c / lam for c in b.coefficients[1:]])


def neg_deg_log_one_minus(lam, order: int) -> Series:
    """``-log_lam(1 - t)`` with coefficients polynomial in ``lam``.

    Coefficient j >= 1 is ``(1-lam)(2-lam)...(j-1-lam) / j!``, which stays
    valid at ``lam = 0`` where it reduces to ``-log(1 - t)``.
    """
    lam = as_rational(lam)
    out = [Fraction(0)]
    p = Fraction(1)
    for j in range(1, order + 1):
        out.append(p / factorial(j))
        p *= j - lam
    return Series._raw(out)
