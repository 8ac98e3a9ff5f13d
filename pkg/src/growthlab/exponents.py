"""Exact arithmetic for Lebesgue exponents and growth regimes.

Everything in this module is decidable: exponents are rationals (or the
symbol infinity), intervals are compared endpoint by endpoint, and the
classification of the growth parameter s against the excluded integers
{-k, ..., -1} uses exact comparisons. No floating point enters any
interval identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Union

__all__ = [
    "Exponent",
    "AdmissibleInterval",
    "Regime",
    "RegimeInfo",
    "tensor_dim",
    "sobolev_exponent",
    "holder_conjugate",
    "admissible_interval",
    "interval_composition_check",
    "regime",
]

ExponentLike = Union["Exponent", int, float, str, Fraction]


@total_ordering
class Exponent:
    """A Lebesgue exponent: an exact rational in [1, oo) or infinity.

    Infinity is stored as a sentinel (``fraction is None``) and compares
    greater than every finite value.
    """

    __slots__ = ("_frac",)

    def __init__(self, value: ExponentLike):
        if isinstance(value, Exponent):
            self._frac = value._frac
            return
        if isinstance(value, str):
            v = value.strip().lower()
            if v in ("inf", "infinity", "oo"):
                self._frac = None
                return
            self._frac = Fraction(v)
        elif isinstance(value, float) and math.isinf(value):
            self._frac = None
        else:
            self._frac = Fraction(value)
        if self._frac is not None and self._frac < 1:
            raise ValueError(f"exponent must be >= 1, got {self._frac}")

    @classmethod
    def inf(cls) -> "Exponent":
        e = object.__new__(cls)
        e._frac = None
        return e

    @property
    def is_inf(self) -> bool:
        return self._frac is None

    @property
    def fraction(self) -> Fraction:
        if self._frac is None:
            raise ValueError("infinite exponent has no rational value")
        return self._frac

    def __float__(self) -> float:
        return math.inf if self._frac is None else float(self._frac)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Exponent):
            try:
                other = Exponent(other)
            except (ValueError, TypeError):
                return NotImplemented
        return self._frac == other._frac

    def __lt__(self, other) -> bool:
        if not isinstance(other, Exponent):
            other = Exponent(other)
        if self._frac is None:
            return False
        if other._frac is None:
            return True
        return self._frac < other._frac

    def __hash__(self):
        return hash(self._frac)

    def __repr__(self) -> str:
        return "inf" if self._frac is None else str(self._frac)


@dataclass(frozen=True)
class AdmissibleInterval:
    """Target-exponent interval [lower, upper] or [lower, upper).

    The lower endpoint is always closed; ``upper_closed`` is False exactly
    at the critical exponent p = N/j with N > 1.
    """

    lower: Exponent
    upper: Exponent
    upper_closed: bool

    def __post_init__(self):
        if self.upper < self.lower:
            raise ValueError("interval endpoints out of order")

    def contains(self, q: ExponentLike) -> bool:
        q = Exponent(q)
        if q < self.lower:
            return False
        if q < self.upper:
            return True
        return q == self.upper and self.upper_closed

    def __repr__(self) -> str:
        close = "]" if self.upper_closed else ")"
        return f"[{self.lower}, {self.upper}{close}"


class Regime(Enum):
    ABOVE_MINUS_ONE = "above"
    BAND = "band"
    BELOW_MINUS_K = "below"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class RegimeInfo:
    """Where s sits relative to {-k, ..., -1} and the degree threshold k_s.

    ``k_s`` splits the canonical polynomial: degrees >= k_s are determined
    by behavior at infinity, degrees < k_s are free (averages / Taylor).
    For the excluded integers k_s carries no meaning and is only clamped
    into range.
    """

    k: int
    s: float
    component: Regime
    k_s: int
    band_index: int | None = None

    @property
    def excluded(self) -> bool:
        return self.component is Regime.EXCLUDED


def tensor_dim(k: int, n: int) -> int:
    """Number of independent entries of a symmetric order-k tensor on R^n."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    return math.comb(n + k - 1, k)


def sobolev_exponent(p: ExponentLike, j: int, n: int) -> Exponent:
    """j-th order conjugate: Np/(N - jp) below the critical index, else inf."""
    p = Exponent(p)
    if p.is_inf:
        raise ValueError("conjugate of an infinite exponent is not defined here")
    if j < 1 or n < 1:
        raise ValueError("need j >= 1 and N >= 1")
    pf = p.fraction
    if pf * j < n:
        return Exponent(n * pf / (n - j * pf))
    return Exponent.inf()


def holder_conjugate(p: ExponentLike) -> Exponent:
    p = Exponent(p)
    if p.is_inf:
        return Exponent(1)
    if p.fraction == 1:
        return Exponent.inf()
    pf = p.fraction
    return Exponent(pf / (pf - 1))


def admissible_interval(j: int, p: ExponentLike, n: int) -> AdmissibleInterval:
    """Interval of target exponents q for a j-th order transfer from L^p.

    [p, p^{*j}] closed, except half-open [p, inf) at the critical index
    p = N/j with N > 1. On the line the interval is [p, inf] regardless
    of j.
    """
    p = Exponent(p)
    if p.is_inf:
        raise ValueError("p must be finite")
    upper = sobolev_exponent(p, j, n)
    critical = p.fraction * j == n
    if critical and not (n == 1 and j == 1 and p.fraction == 1):
        return AdmissibleInterval(p, Exponent.inf(), upper_closed=False)
    return AdmissibleInterval(p, upper, upper_closed=True)


def interval_composition_check(j: int, p: ExponentLike, n: int) -> bool:
    """Decide whether chaining one first-order step with a (j-1)-th order one
    covers exactly the j-th order interval.

    The union of I_{j-1, p1} over finite p1 in I_{1,p} is assembled in exact
    rational arithmetic (lower endpoint, upper endpoint, closure) and compared
    with I_{j,p}.
    """
    if j < 2:
        raise ValueError("composition needs j >= 2")
    p = Exponent(p)
    first = admissible_interval(1, p, n)
    target = admissible_interval(j, p, n)

    # Threshold above which a finite p1 already gives an unbounded closed
    # (j-1)-interval: p1 > N/(j-1).
    crit = Fraction(n, j - 1)

    union_lower = first.lower
    up = first.upper
    if up.is_inf:
        # Finite p1 beyond the threshold exist, each contributing [p1, inf].
        union_upper, union_closed = Exponent.inf(), True
    elif up.fraction > crit:
        union_upper, union_closed = Exponent.inf(), True
    elif up.fraction == crit:
        # p1 = N/(j-1) contributes [p1, inf); smaller p1 only approach inf.
        union_upper, union_closed = Exponent.inf(), False
    else:
        union_upper, union_closed = sobolev_exponent(up, j - 1, n), True

    return (
        union_lower == target.lower
        and union_upper == target.upper
        and union_closed == target.upper_closed
    )


def regime(s: float, k: int) -> RegimeInfo:
    """Classify s against the excluded integers and compute k_s.

    Comparison is exact on the given float (epsilon 0); callers who want
    near-excluded behavior should scan s explicitly.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if s == round(s) and -k <= s <= -1:
        ks = min(k, max(0, math.floor(s + k + 1)))
        return RegimeInfo(k=k, s=s, component=Regime.EXCLUDED, k_s=ks)
    if s > -1:
        return RegimeInfo(k=k, s=s, component=Regime.ABOVE_MINUS_ONE, k_s=k)
    if s < -k:
        return RegimeInfo(k=k, s=s, component=Regime.BELOW_MINUS_K, k_s=0)
    band = math.floor(-s)  # s in (-(band+1), -band)
    return RegimeInfo(
        k=k,
        s=s,
        component=Regime.BAND,
        k_s=math.floor(s + k + 1),
        band_index=band,
    )
