"""Construction of the canonical polynomial subtracted in the growth-transfer
inequalities, together with the degree test for weighted-space membership of
polynomials.

The polynomial of degree <= k-1 is built layer by layer, from degree k-1 down
to 0. At each layer the part already built is subtracted from the field, and
each coefficient of the current layer comes from one of three rules:

* ``limit``: the limit at infinity of spherical means of the matching partial
  derivative (the unique part; used for degrees >= k_s),
* ``ball``: an average of the partial derivative over a fixed ball,
* ``taylor``: the value of the partial derivative at a fixed point (only
  meaningful when p > N, or on the line).

Limits are extrapolated from spherical means on geometric radii by a linear
fit against the expected residual decay.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .errors import DimensionOne, ExcludedS, NoConvergence, SZero
from .exponents import Regime, regime
from .fields import (
    ScalarField,
    _default_sphere,
    alpha_factorial,
    lin_combine,
    multi_indices,
    polynomial_field,
)
from .grids import BallRule, Domain
from .norms import Scale

__all__ = [
    "MultiIndexPolynomial",
    "PiStrategy",
    "ball_average_coeff",
    "limit_coeff",
    "limit_coeff_ex",
    "taylor_coeff",
    "construct_pi",
    "poly_membership",
]

DEFAULT_FIT_BASE_RADIUS = 8.0
DEFAULT_FIT_RADII = 6


@dataclass
class MultiIndexPolynomial:
    """Polynomial stored as multi-index -> coefficient, with per-coefficient
    provenance recording which rule produced it."""

    dim: int
    coeffs: dict[tuple[int, ...], float]
    provenance: dict[tuple[int, ...], str] = dc_field(default_factory=dict)
    fit_residuals: dict[tuple[int, ...], float] = dc_field(default_factory=dict)

    def degree(self, tol: float = 0.0) -> int:
        """Largest total order with |coefficient| > tol; -1 for the zero polynomial."""
        degs = [sum(a) for a, c in self.coeffs.items() if abs(c) > tol]
        return max(degs) if degs else -1

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.degree(tol) < 0

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.as_field().evaluator(np.asarray(points, dtype=float))

    def derivative(self, beta) -> "MultiIndexPolynomial":
        """Formal partial derivative, as a polynomial."""
        beta = tuple(int(b) for b in beta)
        out: dict[tuple[int, ...], float] = {}
        for alpha, c in self.coeffs.items():
            if any(b > a for a, b in zip(alpha, beta)):
                continue
            factor = c
            for a, b in zip(alpha, beta):
                factor *= math.perm(a, b)
            out[tuple(a - b for a, b in zip(alpha, beta))] = factor
        return MultiIndexPolynomial(self.dim, out)

    def as_field(self, name: str = "pi") -> ScalarField:
        return polynomial_field(self.coeffs, self.dim, name=name)

    def to_json_dict(self) -> dict:
        entries = [
            {
                "alpha": list(alpha),
                "value": self.coeffs[alpha],
                "provenance": self.provenance.get(alpha, "unknown"),
            }
            for alpha in sorted(self.coeffs)
        ]
        k = self.degree() + 1 if self.coeffs else 0
        return {"N": self.dim, "k": max(k, 0), "coeffs": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=False)

    @classmethod
    def from_json_dict(cls, data: dict) -> "MultiIndexPolynomial":
        coeffs = {}
        prov = {}
        for entry in data["coeffs"]:
            alpha = tuple(int(a) for a in entry["alpha"])
            coeffs[alpha] = float(entry["value"])
            prov[alpha] = entry.get("provenance", "unknown")
        return cls(dim=int(data["N"]), coeffs=coeffs, provenance=prov)

    @classmethod
    def zero(cls, dim: int) -> "MultiIndexPolynomial":
        return cls(dim=dim, coeffs={})


@dataclass(frozen=True)
class PiStrategy:
    """How the free (low-degree) coefficients are chosen.

    ``auto`` averages over the unit ball at the origin; ``ball`` averages over
    B(x0, rho) with optional per-multi-index overrides; ``taylor`` evaluates
    derivatives at x0 (requires p > N or N = 1); ``point`` is the same
    evaluation without the admissibility gate, standing for the shrinking-ball
    limit used by pure-power scaling arguments (needs a smooth representative).
    """

    kind: str = "auto"
    x0: Optional[tuple] = None
    rho: float = 1.0
    per_alpha: Optional[dict] = None

    @classmethod
    def auto(cls) -> "PiStrategy":
        return cls("auto")

    @classmethod
    def ball(cls, x0=None, rho: float = 1.0, per_alpha=None) -> "PiStrategy":
        return cls("ball", None if x0 is None else tuple(x0), rho, per_alpha)

    @classmethod
    def taylor(cls, x0=None) -> "PiStrategy":
        return cls("taylor", None if x0 is None else tuple(x0))

    @classmethod
    def point(cls, x0=None) -> "PiStrategy":
        return cls("point", None if x0 is None else tuple(x0))


def ball_average_coeff(
    u: ScalarField,
    alpha,
    x0=None,
    rho: float = 1.0,
    ball: BallRule | None = None,
) -> float:
    """(alpha!)^{-1} times the average of partial^alpha u over B(x0, rho)."""
    alpha = tuple(int(a) for a in alpha)
    if ball is None:
        ball = BallRule.build(u.dim, center=x0, rho=rho)
    vals = u.derivative(alpha, ball.nodes)
    return float(vals @ ball.weights) / ball.volume / alpha_factorial(alpha)


def taylor_coeff(u: ScalarField, alpha, x0=None) -> float:
    """(alpha!)^{-1} partial^alpha u(x0)."""
    alpha = tuple(int(a) for a in alpha)
    x0 = np.zeros(u.dim) if x0 is None else np.asarray(x0, dtype=float)
    return float(u.derivative(alpha, x0[None, :])[0]) / alpha_factorial(alpha)


def limit_coeff_ex(
    u: ScalarField,
    alpha,
    r0: float = DEFAULT_FIT_BASE_RADIUS,
    n_radii: int = DEFAULT_FIT_RADII,
    decay_exponent: float = -1.0,
    residual_model: str = "power",
):
    """Limit at infinity of (alpha!)^{-1} spherical means of partial^alpha u.

    Means are sampled on geometric radii r0 * 2^m. When their successive
    differences behave geometrically, the limit comes from difference-ratio
    extrapolation, which is exact for any single-power residual c + a r^beta.
    Otherwise the means are fitted against c + a r^decay_exponent (or
    c + a exp(decay_exponent r) on the exponential scale). Returns (c, info);
    raises NoConvergence when the deviations |mean - c| fail to decrease over
    the last three radii.
    """
    alpha = tuple(int(a) for a in alpha)
    radii = r0 * 2.0 ** np.arange(n_radii)
    nodes, weights = _default_sphere(u.dim, u.domain)
    pts = (radii[:, None, None] * nodes[None, :, :]).reshape(-1, u.dim)
    vals = u.derivative(alpha, pts).reshape(n_radii, -1)
    wn = weights / np.sum(weights)
    means = np.empty(n_radii)
    for i in range(n_radii):
        row = vals[i]
        # keep the mean of constant data bitwise exact: a residual constant at
        # the 1e-15 level is already outside every space below threshold
        means[i] = row[0] if np.all(row == row[0]) else float(row @ wn)
    means /= alpha_factorial(alpha)

    mean_scale = float(np.max(np.abs(means)))
    floor = 1e-12 * (1.0 + mean_scale)
    diffs = np.diff(means)
    c = None
    method = "constant"
    if np.max(np.abs(diffs)) <= floor:
        # already settled to machine level; the last mean is the limit
        c = float(means[-1])
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = diffs[1:] / diffs[:-1]
        usable = (
            np.all(np.isfinite(ratios))
            and np.all(ratios > 0.0)
            and float(np.max(ratios)) <= 0.95
            and float(np.max(ratios)) <= 2.0 * float(np.min(ratios))
        )
        if usable:
            rho = float(ratios[-1])
            c = float(means[-1] + diffs[-1] * rho / (1.0 - rho))
            method = "difference-ratio"
    if c is None:
        if residual_model == "power":
            basis = radii**decay_exponent
        elif residual_model == "exp":
            basis = np.exp(decay_exponent * radii)
        else:
            raise ValueError("residual_model must be 'power' or 'exp'")
        design = np.stack([np.ones_like(radii), basis], axis=1)
        sol, *_ = np.linalg.lstsq(design, means, rcond=None)
        c = float(sol[0])
        method = "fit"

    dev = np.abs(means - c)
    conv_floor = 1e-11 * (1.0 + mean_scale)
    tail_dev = dev[-3:]
    decreasing = all(
        tail_dev[i + 1] <= tail_dev[i] * (1.0 + 1e-9) + conv_floor
        for i in range(len(tail_dev) - 1)
    )
    info = {
        "radii": radii,
        "means": means,
        "deviations": dev,
        "method": method,
        "fit_residual": float(np.max(dev[-2:])),
    }
    if not decreasing:
        raise NoConvergence(
            f"spherical means of d^{alpha} do not settle: deviations {tail_dev.tolist()}"
        )
    return c, info


def limit_coeff(
    u: ScalarField,
    alpha,
    r0: float = DEFAULT_FIT_BASE_RADIUS,
    n_radii: int = DEFAULT_FIT_RADII,
    decay_exponent: float = -1.0,
    residual_model: str = "power",
) -> float:
    return limit_coeff_ex(u, alpha, r0, n_radii, decay_exponent, residual_model)[0]


def _validate_regime(u: ScalarField, k: int, s: float, scale: Scale):
    if scale is Scale.EXPONENTIAL:
        if s == 0:
            raise SZero("the exponential scale is undefined at s = 0")
        if s < 0 and u.dim == 1 and u.domain is Domain.FULL_SPACE:
            raise DimensionOne("s < 0 on the full line: restrict to a half-line")
        return k if s > 0 else 0
    info = regime(s, k)
    if info.component is Regime.EXCLUDED:
        raise ExcludedS(f"s = {s} is an excluded integer for k = {k}")
    if s < -1 and u.dim == 1 and u.domain is Domain.FULL_SPACE:
        raise DimensionOne("s < -1 on the full line: restrict to a half-line")
    return info.k_s


def construct_pi(
    u: ScalarField,
    k: int,
    s: float,
    p=2,
    strategy: PiStrategy | None = None,
    scale: Scale = Scale.SHIFTED,
    r0: float = DEFAULT_FIT_BASE_RADIUS,
    n_radii: int = DEFAULT_FIT_RADII,
    lowest_degree: int = 0,
) -> MultiIndexPolynomial:
    """Build the canonical polynomial of degree <= k-1 for the field u.

    Degrees >= k_s use limit coefficients (unique part); lower degrees follow
    the strategy. ``lowest_degree`` > 0 stops the recursion early, leaving the
    irrelevant bottom part at zero (partial transfers only need degrees down
    to k - l). The result does not depend on p beyond the Taylor-strategy
    admissibility check.
    """
    from .exponents import Exponent

    threshold = _validate_regime(u, k, s, scale)
    strategy = strategy or PiStrategy.auto()
    p = Exponent(p)
    if strategy.kind == "taylor" and not (u.dim == 1 or p > Exponent(u.dim)):
        raise ValueError("a Taylor polynomial requires p > N (or N = 1)")

    coeffs: dict[tuple[int, ...], float] = {}
    prov: dict[tuple[int, ...], str] = {}
    residuals: dict[tuple[int, ...], float] = {}
    for m in range(k - 1, lowest_degree - 1, -1):
        if coeffs:
            built = MultiIndexPolynomial(u.dim, dict(coeffs))
            v = lin_combine([(1.0, u), (-1.0, built.as_field())], name=f"{u.name}-pi")
        else:
            v = u
        for alpha in multi_indices(m, u.dim):
            if m >= threshold:
                if scale is Scale.EXPONENTIAL:
                    c, info = limit_coeff_ex(
                        v, alpha, r0=r0, n_radii=n_radii,
                        decay_exponent=s, residual_model="exp",
                    )
                else:
                    s_eff = s + (k - 1 - m)
                    c, info = limit_coeff_ex(
                        v, alpha, r0=r0, n_radii=n_radii,
                        decay_exponent=s_eff + 1.0, residual_model="power",
                    )
                rule = "limit"
                residuals[alpha] = info["fit_residual"]
            elif strategy.kind in ("taylor", "point"):
                c = taylor_coeff(v, alpha, strategy.x0)
                rule = f"{strategy.kind}({list(strategy.x0) if strategy.x0 else 0})"
            else:
                x0, rho = strategy.x0, strategy.rho
                if strategy.per_alpha and alpha in strategy.per_alpha:
                    x0, rho = strategy.per_alpha[alpha]
                c = ball_average_coeff(v, alpha, x0=x0, rho=rho)
                rule = f"ball({list(x0) if x0 else 0},{rho:g})"
            coeffs[alpha] = c
            prov[alpha] = rule
    return MultiIndexPolynomial(dim=u.dim, coeffs=coeffs, provenance=prov, fit_residuals=residuals)


def poly_membership(
    pi: MultiIndexPolynomial,
    s: float,
    k: int,
    q=None,
    tol: float = 1e-10,
) -> bool:
    """Whether the polynomial lies in the weighted space at level s + k.

    Equivalent to pi = 0 or deg(pi) < s + k; the answer does not depend on
    the integrability exponent q, which is accepted only for symmetry with
    the norm API. Coefficients at or below ``tol`` count as zero.
    """
    info = regime(s, k)
    if info.component is Regime.EXCLUDED:
        raise ExcludedS(f"s = {s} is an excluded integer for k = {k}")
    d = pi.degree(tol)
    return d < 0 or d < s + k
