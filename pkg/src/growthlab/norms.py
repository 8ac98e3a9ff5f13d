"""Weighted Lebesgue norms on polar grids.

Three weight scales are supported: shifted power (1+|x|)^t, pure power |x|^t
(used after scaling arguments), and exponential e^{-s|x|}. A norm with
parameters (s, q) applies the factor (1+|x|)^{-s-N/q} (or its pure-power /
exponential analogue) inside the q-norm, so finiteness encodes sub-|x|^s
growth in the L^q sense.

Finiteness is decided numerically: contributions are accumulated over dyadic
radial bins, the tail is extrapolated geometrically when it decays, and the
norm is declared infinite when the top bins grow (ratio > 1.05) or are not
summable. Sup norms (q = infinity) are grid maxima and therefore lower-bound
estimators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import OriginSingular
from .exponents import Exponent
from .fields import ScalarField, TensorField, evaluate_on_grid
from .grids import Domain, PolarGrid

__all__ = [
    "Scale",
    "Weight",
    "Region",
    "weighted_norm",
    "weighted_norm_ex",
    "tensor_norm",
    "tensor_norm_ex",
    "membership",
    "default_grid",
]

GROW_RATIO = 1.05  # top dyadic bins growing faster than this: divergent
FLAT_RATIO = 0.98  # tail ratio at/above this: geometric extrapolation impossible
# A "growing" tail whose whole mass stays below this fraction of the integral
# is numerical contamination (float cancellation in polynomial subtraction),
# not divergence: genuine divergence always dominates its own top bins.
NEGLIGIBLE_TAIL = 1e-4


class Scale(Enum):
    SHIFTED = "shifted"
    PURE = "pure"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class Weight:
    """Pointwise radial factor: (1+r)^e, r^e, or exp(e r)."""

    kind: Scale
    exponent: float

    def value(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind is Scale.SHIFTED:
            return (1.0 + r) ** self.exponent
        if self.kind is Scale.PURE:
            return r**self.exponent
        return np.exp(self.exponent * r)

    def log_value(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind is Scale.SHIFTED:
            return self.exponent * np.log1p(r)
        if self.kind is Scale.PURE:
            return self.exponent * np.log(r)
        return self.exponent * r


def norm_weight(scale: Scale, s: float, q: Exponent, dim: int) -> Weight:
    """The factor applied inside the q-norm for growth parameter s."""
    if scale is Scale.EXPONENTIAL:
        return Weight(scale, -s)
    nq = 0.0 if q.is_inf else dim / float(q)
    return Weight(scale, -s - nq)


@dataclass(frozen=True)
class Region:
    """Full space, a centered ball or its exterior, or the annulus (tau, 2 tau)."""

    kind: str
    radius: Optional[float] = None

    @classmethod
    def full(cls) -> "Region":
        return cls("full")

    @classmethod
    def ball(cls, r: float) -> "Region":
        if r <= 0:
            raise ValueError("radius must be positive")
        return cls("ball", r)

    @classmethod
    def exterior(cls, r: float) -> "Region":
        if r <= 0:
            raise ValueError("radius must be positive")
        return cls("exterior", r)

    @classmethod
    def annulus(cls, tau: float) -> "Region":
        if tau <= 0:
            raise ValueError("tau must be positive")
        return cls("annulus", tau)

    def radial_mask(self, r: np.ndarray) -> np.ndarray:
        if self.kind == "full":
            return np.ones_like(r, dtype=bool)
        if self.kind == "ball":
            return r <= self.radius
        if self.kind == "exterior":
            return r > self.radius
        return (r > self.radius) & (r < 2 * self.radius)

    @property
    def includes_origin(self) -> bool:
        return self.kind in ("full", "ball")

    @property
    def unbounded(self) -> bool:
        return self.kind in ("full", "exterior")


@lru_cache(maxsize=8)
def default_grid(dim: int, domain: Domain = Domain.FULL_SPACE) -> PolarGrid:
    return PolarGrid.build(dim, domain=domain)


def _dyadic_bins(radii: np.ndarray, values: np.ndarray, reduce_max: bool) -> dict[int, float]:
    m = np.floor(np.log2(radii)).astype(int)
    bins: dict[int, float] = {}
    for mm in np.unique(m):
        sel = values[m == mm]
        bins[int(mm)] = float(np.max(sel)) if reduce_max else float(np.sum(sel))
    return bins


def _tail_sum(radii, contrib, r_max):
    """Accumulate contributions and a geometric tail estimate.

    Returns (total or inf, info). The three highest *full* dyadic bins drive
    the decision. When the bin ratio rho is summable, the tail beyond r_max
    is the continuum power-law extrapolation with local exponent log2(rho),
    calibrated on the last full bin; for pure-power integrands this is exact.
    """
    info = {"divergent": False, "tail": 0.0, "tail_fraction": 0.0, "tail_ratio": None}
    total = float(np.sum(contrib))
    if not math.isfinite(total):
        info["divergent"] = True
        return math.inf, info
    bins = _dyadic_bins(radii, contrib, reduce_max=False)
    top = math.floor(math.log2(r_max))
    full = [bins.get(m, 0.0) for m in (top - 3, top - 2, top - 1)]
    if full[2] <= 0.0:
        return total, info
    if full[0] <= 0.0 or full[1] <= 0.0:
        info["tail_ratio"] = math.inf
        info["divergent"] = True
        return math.inf, info
    r1, r2 = full[1] / full[0], full[2] / full[1]
    rho = math.sqrt(r1 * r2)
    info["tail_ratio"] = rho
    if min(r1, r2) > GROW_RATIO or rho >= FLAT_RATIO:
        if sum(full) + bins.get(top, 0.0) <= NEGLIGIBLE_TAIL * total:
            info["suppressed_tail"] = True
            return total, info
        info["divergent"] = True
        return math.inf, info
    a = math.log2(rho)
    tail = full[2] * r_max**a / (2.0 ** ((top - 1) * a) - 2.0 ** (top * a))
    info["tail"] = tail
    total += tail
    info["tail_fraction"] = tail / total if total > 0 else 0.0
    return total, info


def _tail_max(radii, values, r_max):
    info = {"divergent": False, "tail_ratio": None}
    peak = float(np.max(values)) if len(values) else 0.0
    if not math.isfinite(peak):
        info["divergent"] = True
        return math.inf, info
    bins = _dyadic_bins(radii, values, reduce_max=True)
    top = math.floor(math.log2(r_max))
    full = [bins.get(m, 0.0) for m in (top - 3, top - 2, top - 1)]
    if full[2] <= 0.0 or full[1] <= 0.0 or full[0] <= 0.0:
        return peak, info
    r1, r2 = full[1] / full[0], full[2] / full[1]
    info["tail_ratio"] = math.sqrt(r1 * r2)
    if min(r1, r2) > GROW_RATIO:
        if max(full) <= NEGLIGIBLE_TAIL * peak:
            info["suppressed_tail"] = True
            return peak, info
        info["divergent"] = True
        return math.inf, info
    return peak, info


def _origin_divergent(radii, values, reduce_max: bool) -> bool:
    """Mirror of the tail test at the origin, on the three innermost bins."""
    bins = _dyadic_bins(radii, values, reduce_max)
    keys = sorted(bins)
    if len(keys) < 4:
        return False
    inner = [bins[k] for k in keys[:3]]
    if inner[0] <= 0.0:
        return False
    if inner[1] <= 0.0 or inner[2] <= 0.0:
        return True
    r1, r2 = inner[0] / inner[1], inner[1] / inner[2]
    if reduce_max:
        return min(r1, r2) > GROW_RATIO
    return min(r1, r2) > GROW_RATIO or math.sqrt(r1 * r2) >= FLAT_RATIO


def _norm_from_samples(
    values: np.ndarray,
    r: np.ndarray,
    wr: np.ndarray,
    sphere_weights: np.ndarray,
    dim: int,
    r_max: float,
    s: float,
    q,
    scale: Scale,
    region: Region,
):
    q = Exponent(q)
    w = norm_weight(scale, s, q, dim)
    if len(r) == 0:
        return 0.0, {"divergent": False, "empty_region": True}

    if q.is_inf:
        per_radius = np.max(np.abs(values), axis=1)
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            weighted = np.exp(w.log_value(r) + np.log(np.maximum(per_radius, 0.0)))
        weighted = np.where(per_radius > 0, weighted, 0.0)
        if scale is Scale.PURE and region.includes_origin:
            if _origin_divergent(r, weighted, reduce_max=True):
                raise OriginSingular("pure-power sup weight blows up at the origin")
        if region.unbounded:
            return _tail_max(r, weighted, r_max)
        return (float(np.max(weighted)), {"divergent": False})

    qf = float(q)
    angular = np.abs(values) ** qf @ sphere_weights
    base = wr * r ** (dim - 1) * angular
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        contrib = np.exp(qf * w.log_value(r) + np.log(np.maximum(base, 0.0)))
    contrib = np.where(base > 0, contrib, 0.0)

    if scale is Scale.PURE and region.includes_origin:
        if _origin_divergent(r, contrib, reduce_max=False):
            raise OriginSingular(
                "pure-power weight is not integrable at the origin for this field"
            )
    if region.unbounded:
        total, info = _tail_sum(r, contrib, r_max)
    else:
        total, info = float(np.sum(contrib)), {"divergent": False}
    if math.isinf(total):
        return math.inf, info
    return total ** (1.0 / qf), info


def _region_radial_rule(region: Region, grid: PolarGrid):
    """Radial rule with panel boundaries aligned to the region.

    Fitted rules keep ball/exterior/annulus integrals spectrally accurate;
    masking the global nodes would smear the boundary across a panel.
    """
    from .grids import log_panel_rule

    ppp = grid.points_per_panel
    n_panels = max(len(grid.radial_nodes) // ppp, 4)
    if region.kind == "full":
        return grid.radial_nodes, grid.radial_weights
    if region.kind == "ball":
        R = region.radius
        return log_panel_rule(min(1e-4, R / 10.0), R, max(n_panels // 2, 8), ppp)
    if region.kind == "exterior":
        return log_panel_rule(1e-4, grid.r_max, max(n_panels // 2, 8), ppp,
                              lower=region.radius)
    tau = region.radius
    return log_panel_rule(1e-4, 2 * tau, 8, ppp, lower=tau)


def _values_at(u: ScalarField, r: np.ndarray, grid: PolarGrid) -> np.ndarray:
    if u.radial and u.radial_profile is not None:
        vals = np.asarray(u.radial_profile(r), dtype=float)
        return np.broadcast_to(vals[:, None], (len(r), grid.n_sphere)).copy()
    pts = r[:, None, None] * grid.sphere_nodes[None, :, :]
    return u.evaluator(pts.reshape(-1, u.dim)).reshape(len(r), grid.n_sphere)


def weighted_norm_ex(
    u: ScalarField,
    s: float,
    q,
    scale: Scale = Scale.SHIFTED,
    region: Region | None = None,
    grid: PolarGrid | None = None,
):
    """Weighted norm plus quadrature diagnostics (tail fraction, divergence)."""
    region = region or Region.full()
    grid = grid or default_grid(u.dim, u.domain)
    if region.kind == "full":
        values = evaluate_on_grid(u, grid)
        r, wr = grid.radial_nodes, grid.radial_weights
    else:
        r, wr = _region_radial_rule(region, grid)
        values = _values_at(u, r, grid)
    return _norm_from_samples(values, r, wr, grid.sphere_weights, grid.dim,
                              grid.r_max, s, q, scale, region)


def weighted_norm(
    u: ScalarField,
    s: float,
    q,
    scale: Scale = Scale.SHIFTED,
    region: Region | None = None,
    grid: PolarGrid | None = None,
) -> float:
    """||u|| in the (s, q) weighted space over the region; inf when divergent."""
    return weighted_norm_ex(u, s, q, scale, region, grid)[0]


def tensor_norm_ex(
    t: TensorField,
    s: float,
    p,
    scale: Scale = Scale.SHIFTED,
    region: Region | None = None,
    grid: PolarGrid | None = None,
):
    """Tensor magnitude norm. Regions restrict the sampled nodes (no refit),
    so non-full regions here are qualitative checks, not precise integrals."""
    region = region or Region.full()
    grid = grid or t.grid
    if grid is not t.grid:
        raise ValueError("tensor field was sampled on a different grid")
    mask = region.radial_mask(grid.radial_nodes)
    return _norm_from_samples(
        t.magnitude()[mask],
        grid.radial_nodes[mask],
        grid.radial_weights[mask],
        grid.sphere_weights,
        grid.dim,
        grid.r_max,
        s,
        p,
        scale,
        region,
    )


def tensor_norm(
    t: TensorField,
    s: float,
    p,
    scale: Scale = Scale.SHIFTED,
    region: Region | None = None,
    grid: PolarGrid | None = None,
) -> float:
    """Weighted norm of the pointwise tensor magnitude |T(x)|."""
    return tensor_norm_ex(t, s, p, scale, region, grid)[0]


def membership(
    u: ScalarField,
    s: float,
    q,
    scale: Scale = Scale.SHIFTED,
    grid: PolarGrid | None = None,
) -> bool:
    """Whether the weighted norm over the full space is finite.

    Decided by the dyadic-annulus tail test; an origin singularity in the
    pure-power scale also counts as non-membership.
    """
    try:
        value = weighted_norm(u, s, q, scale=scale, grid=grid)
    except OriginSingular:
        return False
    return math.isfinite(value)
