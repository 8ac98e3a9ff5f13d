"""One-dimensional weighted Hardy inequality kernels.

Each operation returns the two sides (lhs, rhs) of one inequality for a
radial profile f on (0, inf) or [rho, inf): power weights above return the
pair anchored at f(rho), power weights below require decay at infinity, and
the exponential scale mirrors both. ``ok_criterion`` evaluates the two-weight
product A(xi) B(xi) whose boundedness over xi > 0 characterizes when the
below-threshold inequality holds, and must agree with exact interval
membership of q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DivergentRhs, NoDecay
from .exponents import Exponent, admissible_interval, holder_conjugate
from .fields import ScalarField
from .grids import DEFAULT_R_MAX, log_panel_rule
from .norms import _tail_sum

__all__ = [
    "RadialProfile",
    "hardy_pair_power_above",
    "hardy_sup_power_above",
    "hardy_pair_power_below",
    "hardy_sup_power_below",
    "hardy_exponential",
    "ok_criterion",
    "ok_criterion_ex",
]

_FD_STEP = 1e-5


@dataclass
class RadialProfile:
    """A locally absolutely continuous function of the radius.

    ``value`` is vectorized over r; ``derivative`` may be None, in which case
    central differences with step h = 1e-5 (1 + r) are used.
    """

    value: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    decay_at_infinity: bool = False

    def d(self, r: np.ndarray) -> np.ndarray:
        if self.derivative is not None:
            return np.asarray(self.derivative(r), dtype=float)
        h = _FD_STEP * (1.0 + r)
        return (self.value(r + h) - self.value(r - h)) / (2.0 * h)

    @classmethod
    def from_field(cls, u: ScalarField, decay: bool | None = None) -> "RadialProfile":
        if u.radial_profile is None:
            raise ValueError("field carries no radial profile")
        return cls(
            value=u.radial_profile,
            derivative=u.profile_derivative,
            decay_at_infinity=bool(u.compact_support is not None) if decay is None else decay,
        )


def _interval_nodes(lower: float, r_max: float, panels: int = 64, pts: int = 16):
    if lower <= 0.0:
        return log_panel_rule(1e-4, r_max, panels, pts)
    return log_panel_rule(1e-4, r_max, panels, pts, lower=lower)


def _integral(contrib_fn, lower: float, r_max: float = DEFAULT_R_MAX):
    r, w = _interval_nodes(lower, r_max)
    # divergent integrands may overflow pointwise; _tail_sum maps that to inf
    with np.errstate(over="ignore", under="ignore"):
        contrib = w * contrib_fn(r)
    total, info = _tail_sum(r, contrib, r_max)
    return total, info


def _check_rhs(rhs_pow: float, p: float):
    if math.isinf(rhs_pow):
        raise DivergentRhs("the derivative side is infinite; the inequality is vacuous")
    return rhs_pow ** (1.0 / p)


def hardy_pair_power_above(
    f: RadialProfile, s: float, p: float, q: float, rho: float, n: int,
    r_max: float = DEFAULT_R_MAX,
) -> tuple[float, float]:
    """Both sides of the above-threshold pair on [rho, inf), anchored at f(rho)."""
    if not s > -1:
        raise ValueError("this kernel needs s > -1")
    if not (1 <= p <= q) or math.isinf(q):
        raise ValueError("need 1 <= p <= q < inf")
    f_rho = float(f.value(np.array([rho]))[0])

    def lhs_fn(r):
        return (1 + r) ** (-(s + 1) * q - n) * r ** (n - 1) * np.abs(f.value(r) - f_rho) ** q

    def rhs_fn(r):
        return (1 + r) ** (-s * p - n) * r ** (n - 1) * np.abs(f.d(r)) ** p

    lhs_pow, _ = _integral(lhs_fn, rho, r_max)
    rhs_pow, _ = _integral(rhs_fn, rho, r_max)
    rhs = _check_rhs(rhs_pow, p)
    return (math.inf if math.isinf(lhs_pow) else lhs_pow ** (1.0 / q)), rhs


def hardy_sup_power_above(
    f: RadialProfile, s: float, p: float, big_r: float, n: int,
    r_max: float = DEFAULT_R_MAX, per_decade: int = 512,
) -> tuple[float, float]:
    """Sampled sup of (1+r)^{-(s+1)}|f - f(R)| over r >= R against the
    derivative integral from R; the sup is a lower-bound estimate."""
    if not s > -1:
        raise ValueError("this kernel needs s > -1")
    f_R = float(f.value(np.array([big_r]))[0])
    decades = math.log10(r_max / big_r)
    radii = np.geomspace(big_r, r_max, max(int(per_decade * decades), 64))
    lhs = float(np.max((1 + radii) ** (-(s + 1)) * np.abs(f.value(radii) - f_R)))

    def rhs_fn(r):
        return (1 + r) ** (-s * p - n) * r ** (n - 1) * np.abs(f.d(r)) ** p

    rhs_pow, _ = _integral(rhs_fn, big_r, r_max)
    return lhs, _check_rhs(rhs_pow, p)


def _require_decay(f: RadialProfile):
    if not f.decay_at_infinity:
        raise NoDecay("profile must vanish at infinity for the below-threshold kernels")


def hardy_pair_power_below(
    f: RadialProfile, s: float, p: float, q: float, n: int,
    r_max: float = DEFAULT_R_MAX,
) -> tuple[float, float]:
    """Both sides of the below-threshold pair on (0, inf) for decaying f."""
    if not s < -1:
        raise ValueError("this kernel needs s < -1")
    _require_decay(f)

    def lhs_fn(r):
        return (1 + r) ** (-(s + 1) * q - n) * r ** (n - 1) * np.abs(f.value(r)) ** q

    def rhs_fn(r):
        return (1 + r) ** (-s * p - n) * r ** (n - 1) * np.abs(f.d(r)) ** p

    lhs_pow, _ = _integral(lhs_fn, 0.0, r_max)
    rhs_pow, _ = _integral(rhs_fn, 0.0, r_max)
    rhs = _check_rhs(rhs_pow, p)
    return (math.inf if math.isinf(lhs_pow) else lhs_pow ** (1.0 / q)), rhs


def hardy_sup_power_below(
    f: RadialProfile, s: float, p: float, n: int, big_r: float = 0.0,
    r_max: float = DEFAULT_R_MAX, per_decade: int = 512,
) -> tuple[float, float]:
    """Sup variant below threshold (needs p > N so the sup norm is admissible)."""
    if not s < -1:
        raise ValueError("this kernel needs s < -1")
    if not p > n:
        raise ValueError("the sup variant needs p > N")
    _require_decay(f)
    lo = max(big_r, 1e-6)
    radii = np.geomspace(lo, r_max, int(per_decade * math.log10(r_max / lo)))
    lhs = float(np.max((1 + radii) ** (-(s + 1)) * np.abs(f.value(radii))))

    def rhs_fn(r):
        return (1 + r) ** (-s * p - n) * r ** (n - 1) * np.abs(f.d(r)) ** p

    rhs_pow, _ = _integral(rhs_fn, big_r, r_max)
    return lhs, _check_rhs(rhs_pow, p)


def hardy_exponential(
    f: RadialProfile, s: float, p: float, n: int,
    variant: str = "above", rho: float = 1.0,
    r_max: float = DEFAULT_R_MAX,
) -> tuple[float, float]:
    """Exponential-weight pair: from rho with anchor f(rho) when s > 0, from 0
    with decay when s < 0. Both sides carry e^{-s p r} r^{N-1}.

    Profiles whose values underflow to zero before the weight growth shows up
    in the dyadic bins are numerically indistinguishable from compactly
    supported ones; borderline decay exactly at rate e^{s r} may therefore be
    reported finite.
    """
    if s == 0:
        raise ValueError("exponential kernels need s != 0")
    def exp_contrib(r, magnitudes):
        # log-domain assembly: e^{-spr} can overflow exactly where the
        # profile underflows, and inf * 0 must resolve to 0, not nan
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            expo = -s * p * r + (n - 1) * np.log(r) + p * np.log(np.abs(magnitudes))
            out = np.exp(expo)
        return np.where(magnitudes == 0.0, 0.0, out)

    if variant == "above":
        if not s > 0:
            raise ValueError("variant 'above' needs s > 0")
        f_rho = float(f.value(np.array([rho]))[0])
        lower = rho

        def lhs_fn(r):
            return exp_contrib(r, f.value(r) - f_rho)

    elif variant == "below":
        if not s < 0:
            raise ValueError("variant 'below' needs s < 0")
        _require_decay(f)
        lower = 0.0

        def lhs_fn(r):
            return exp_contrib(r, f.value(r))

    else:
        raise ValueError("variant must be 'above' or 'below'")

    def rhs_fn(r):
        return exp_contrib(r, f.d(r))

    lhs_pow, _ = _integral(lhs_fn, lower, r_max)
    rhs_pow, _ = _integral(rhs_fn, lower, r_max)
    rhs = _check_rhs(rhs_pow, p)
    return (math.inf if math.isinf(lhs_pow) else lhs_pow ** (1.0 / p)), rhs


def ok_criterion_ex(
    s: float,
    p: float,
    q,
    n: int,
    xi_min: float = 1e-6,
    xi_max: float = 1e6,
    per_decade: int = 25,
):
    """Like ok_criterion but also returns the (xi, A, B) profile arrays."""
    if not s < -1:
        raise ValueError("the criterion applies to s < -1")
    q = Exponent(q)
    qf = float(q)
    if not q.is_inf and qf < p:
        raise ValueError("need q >= p")
    pprime = holder_conjugate(Exponent(p))

    n_xi = int(per_decade * math.log10(xi_max / xi_min))
    xi = np.geomspace(xi_min, xi_max, n_xi)

    big_r_max = xi_max * 10.0
    r, w = log_panel_rule(min(xi_min / 10.0, 1e-7), big_r_max, panels=180, points_per_panel=8)

    # A(xi): q-norm of the left weight over (0, xi).
    if q.is_inf:
        # sup over (0, xi) of (1+r)^{-(s+1)}, increasing since s < -1
        a_vals = (1 + xi) ** (-(s + 1))
    else:
        a_contrib = w * (1 + r) ** (-(s + 1) * qf - n) * r ** (n - 1)
        a_cum = np.cumsum(a_contrib)
        idx = np.searchsorted(r, xi, side="right") - 1
        a_vals = np.where(idx >= 0, a_cum[np.maximum(idx, 0)], 0.0) ** (1.0 / qf)

    # B(xi): dual-norm of the right weight over (xi, inf). Suffix sums are
    # accumulated from the right so the huge near-origin contributions cannot
    # cancel them away.
    if pprime.is_inf:
        # p = 1: the expression is decreasing on (0, inf) for s < -1, so the
        # essential sup over (xi, inf) is attained at xi.
        b_vals = (1 + xi) ** (s + n) * xi ** ((1 - n))
    else:
        ppf = float(pprime)
        b_contrib = w * (1 + r) ** ((s + n / p) * ppf) * r ** ((1 - n) / p * ppf)
        _, tail_info = _tail_sum(r, b_contrib, big_r_max)
        tail = math.inf if tail_info["divergent"] else tail_info["tail"]
        suffix = np.concatenate((np.cumsum(b_contrib[::-1])[::-1], [0.0]))
        idx = np.searchsorted(r, xi, side="right")
        b_vals = (suffix[idx] + tail) ** (1.0 / ppf)

    product = a_vals * b_vals
    sup_estimate = float(np.max(product))

    low = product[0] > 1.10 * product[per_decade]
    high = product[-1] > 1.10 * product[-1 - per_decade]
    verdict = "divergent" if (low or high) else "finite"
    return sup_estimate, verdict, (xi, a_vals, b_vals)


def ok_criterion(
    s: float,
    p: float,
    q,
    n: int,
    xi_min: float = 1e-6,
    xi_max: float = 1e6,
    per_decade: int = 25,
) -> tuple[float, str]:
    """Sup estimate and verdict for the two-weight product A(xi) B(xi).

    A is the norm of the left weight over (0, xi), B the dual norm of the
    right weight over (xi, inf). The verdict is "finite" when the product
    stops growing toward both ends of the log grid (increase of at most 10%
    per decade) and "divergent" otherwise; it must match q in I_{1,p}.
    """
    sup_estimate, verdict, _ = ok_criterion_ex(s, p, q, n, xi_min, xi_max, per_decade)
    return sup_estimate, verdict
