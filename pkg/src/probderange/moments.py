"""Exact moment sequences for a small catalog of random variables.

A random variable is represented only through its raw moments ``E[Y^n]``,
which is all the generating-function identities ever look at.  Parameters
are rationals, so every moment is a rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .combinatorics import falling_deg, rising_deg, stirling1, stirling2
from .series import Series, as_rational, series_pow

CATALOG = ("constant", "bernoulli", "discrete", "poisson", "gamma", "uniform01")


class DistributionError(ValueError):
    """Bad distribution descriptor or parameters."""


@dataclass(frozen=True)
class MomentProfile:
    """A distribution known through its exact raw moments.

    ``params`` depends on ``kind``: ``(c,)`` for constant, ``(p,)`` for
    Bernoulli, ``((v1, p1), (v2, p2), ...)`` for discrete, ``(alpha,)`` for
    Poisson, ``(alpha, beta)`` for gamma (shape, rate) and ``()`` for the
    uniform law on [0, 1].  ``shift`` adds a constant to the variable.
    """

    kind: str
    params: tuple = ()
    shift: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        if self.kind not in CATALOG:
            raise DistributionError(f"unknown distribution kind {self.kind!r}")
        object.__setattr__(self, "shift", as_rational(self.shift))
        if self.kind == "discrete":
            pairs = tuple((as_rational(v), as_rational(p)) for v, p in self.params)
            object.__setattr__(self, "params", pairs)
        else:
            object.__setattr__(self, "params", tuple(as_rational(p) for p in self.params))
        _validate(self)

    # constructors mirror the CLI grammar
    @classmethod
    def constant(cls, c=1) -> "MomentProfile":
        return cls("constant", (c,))

    @classmethod
    def bernoulli(cls, p) -> "MomentProfile":
        return cls("bernoulli", (p,))

    @classmethod
    def discrete(cls, pairs) -> "MomentProfile":
        return cls("discrete", tuple(pairs))

    @classmethod
    def poisson(cls, alpha) -> "MomentProfile":
        return cls("poisson", (alpha,))

    @classmethod
    def gamma(cls, alpha=1, beta=1) -> "MomentProfile":
        return cls("gamma", (alpha, beta))

    @classmethod
    def uniform01(cls) -> "MomentProfile":
        return cls("uniform01", ())

    def shifted(self, c) -> "MomentProfile":
        """The law of ``Y + c``."""
        return MomentProfile(self.kind, self.params, self.shift + as_rational(c))

    @property
    def descriptor(self) -> str:
        if self.shift:
            raise DistributionError("shifted profiles have no descriptor string")
        if self.kind == "uniform01":
            return "uniform01"
        if self.kind == "discrete":
            return "discrete:" + ",".join(f"{v}={p}" for v, p in self.params)
        return f"{self.kind}:" + ",".join(str(p) for p in self.params)

    def __str__(self):
        try:
            return self.descriptor
        except DistributionError:
            return f"{self.kind}{self.params}+{self.shift}"

    def moments(self, n_max: int) -> list[Fraction]:
        return [raw_moment(self, n) for n in range(n_max + 1)]


def _validate(y: MomentProfile) -> None:
    k, ps = y.kind, y.params
    expected = {"constant": 1, "bernoulli": 1, "poisson": 1, "gamma": 2, "uniform01": 0}
    if k in expected and len(ps) != expected[k]:
        raise DistributionError(f"{k} takes {expected[k]} parameter(s), got {len(ps)}")
    if k == "bernoulli" and not 0 <= ps[0] <= 1:
        raise DistributionError("Bernoulli probability must lie in [0, 1]")
    if k == "poisson" and ps[0] < 0:
        raise DistributionError("Poisson rate must be nonnegative")
    if k == "gamma" and (ps[0] <= 0 or ps[1] <= 0):
        raise DistributionError("gamma shape and rate must be positive")
    if k == "discrete":
        if not ps:
            raise DistributionError("discrete distribution needs at least one atom")
        if any(not 0 <= p <= 1 for _, p in ps):
            raise DistributionError("discrete weights must lie in [0, 1]")
        if sum(p for _, p in ps) != 1:
            raise DistributionError("discrete weights must sum to 1")


def parse_distribution(text: str) -> MomentProfile:
    """Parse ``constant:c``, ``bernoulli:p``, ``discrete:v1=p1,v2=p2``,
    ``poisson:a``, ``gamma:a,b`` or ``uniform01``."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "uniform01":
            if rest.strip():
                raise DistributionError("uniform01 takes no parameters")
            return MomentProfile.uniform01()
        if kind not in CATALOG:
            raise DistributionError(f"unknown distribution {kind!r}; expected one of {', '.join(CATALOG)}")
        if not rest.strip():
            raise DistributionError(f"{kind} needs parameters")
        if kind == "discrete":
            pairs = []
            for atom in rest.split(","):
                v, eq, p = atom.partition("=")
                if not eq:
                    raise DistributionError(f"discrete atom {atom!r} must be value=weight")
                pairs.append((as_rational(v), as_rational(p)))
            return MomentProfile.discrete(pairs)
        values = tuple(as_rational(p) for p in rest.split(","))
        return MomentProfile(kind, values)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, DistributionError):
            raise
        raise DistributionError(f"bad distribution descriptor {text!r}: {exc}") from None


@lru_cache(maxsize=None)
def _base_moment(y: MomentProfile, n: int) -> Fraction:
    k, ps = y.kind, y.params
    if k == "constant":
        return ps[0] ** n
    if k == "bernoulli":
        return Fraction(1) if n == 0 else ps[0]
    if k == "discrete":
        return sum((p * v**n for v, p in ps), Fraction(0))
    if k == "poisson":
        # Touchard polynomial keeps the value rational
        return sum((stirling2(n, j) * ps[0] ** j for j in range(n + 1)), Fraction(0))
    if k == "gamma":
        alpha, beta = ps
        return rising_deg(alpha, n, 1) / beta**n
    if k == "uniform01":
        return Fraction(1, n + 1)
    raise AssertionError(k)


@lru_cache(maxsize=None)
def raw_moment(y: MomentProfile, n: int) -> Fraction:
    """Exact ``E[Y^n]``."""
    if n < 0:
        raise ValueError("moment order must be nonnegative")
    if not y.shift:
        return _base_moment(y, n)
    c = y.shift
    return sum((comb(n, i) * c ** (n - i) * _base_moment(y, i) for i in range(n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def deg_falling_moment(y: MomentProfile, n: int, lam) -> Fraction:
    """``E[(Y)_{n,lam}] = sum_k S1(n,k) lam^(n-k) E[Y^k]``."""
    lam = as_rational(lam)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum((stirling1(n, k) * lam ** (n - k) * raw_moment(y, k) for k in range(n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def deg_rising_moment(y: MomentProfile, n: int, lam) -> Fraction:
    """``E[<Y>_{n,lam}] = sum_k |S1(n,k)| lam^(n-k) E[Y^k]``."""
    lam = as_rational(lam)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(
        ((-1) ** (n - k) * stirling1(n, k) * lam ** (n - k) * raw_moment(y, k) for k in range(n + 1)),
        Fraction(0),
    )


def shifted_deg_moment(x, y: MomentProfile, n: int, lam) -> Fraction:
    """``E[(x - Y)_{n,lam}]`` by the degenerate Vandermonde expansion."""
    x, lam = as_rational(x), as_rational(lam)
    return sum(
        (
            comb(n, j) * falling_deg(x, j, lam) * (-1) ** (n - j) * deg_rising_moment(y, n - j, lam)
            for j in range(n + 1)
        ),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def mgf_series(y: MomentProfile, lam, sign: int, order: int) -> Series:
    """``E[e_lam^{sign*Y}(t)]`` truncated at ``order``; ``lam = 0`` gives ``E[exp(sign*Y*t)]``."""
    lam = as_rational(lam)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    coeffs = []
    for n in range(order + 1):
        if sign == 1:
            v = deg_falling_moment(y, n, lam)
        else:
            v = (-1) ** n * deg_rising_moment(y, n, lam)
        coeffs.append(v / factorial(n))
    return Series(coeffs, order)


@lru_cache(maxsize=None)
def _mgf_power(y: MomentProfile, lam: Fraction, m: int, order: int) -> Series:
    return series_pow(mgf_series(y, lam, 1, order), m)


def iid_sum_deg_moment(y: MomentProfile, m: int, n: int, lam) -> Fraction:
    """``E[(S_m)_{n,lam}]`` for ``S_m`` a sum of ``m`` independent copies of ``Y``."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    # share one power series across nearby n
    order = max(16, 1 << n.bit_length())
    return _mgf_power(y, as_rational(lam), m, order).egf(n)
