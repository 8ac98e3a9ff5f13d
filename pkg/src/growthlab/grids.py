"""Polar quadrature grids: radial panels times sphere rules.

All integrals in the library run on these grids. The radial direction uses
Gauss-Legendre panels on a log-spaced partition of (0, R_max], which resolves
both the origin and power/exponential tails. Sphere rules are deterministic
and spectrally accurate up to dimension 3; higher dimensions fall back to
seeded Monte Carlo and are exploratory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

__all__ = [
    "Domain",
    "PolarGrid",
    "BallRule",
    "unit_ball_volume",
    "sphere_surface",
    "sphere_rule",
    "log_panel_rule",
]

DEFAULT_R_MAX = 1.0e4
DEFAULT_R_MIN = 1.0e-4
DEFAULT_PANELS = 64
DEFAULT_PANEL_POINTS = 16
DEFAULT_MC_POINTS = 2**16
DEFAULT_SEED = 12345


class Domain(Enum):
    FULL_SPACE = "full"
    HALF_LINE_POS = "half+"
    HALF_LINE_NEG = "half-"


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sphere_surface(n: int) -> float:
    """Surface measure of the unit sphere in R^n (= N * omega_N)."""
    return n * unit_ball_volume(n)


@lru_cache(maxsize=None)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def log_panel_rule(
    r_min: float,
    r_max: float,
    panels: int = DEFAULT_PANELS,
    points_per_panel: int = DEFAULT_PANEL_POINTS,
    lower: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on (lower, r_max].

    When ``lower`` is 0 the panel boundaries are log-spaced between r_min and
    r_max with a head panel stretching down to 0; for positive ``lower`` the
    panels are log-spaced from ``lower`` directly and r_min is ignored.
    """
    if not (0 <= lower < r_max) or not (0 < r_min < r_max):
        raise ValueError("need 0 <= lower < r_max and 0 < r_min < r_max")
    if lower > 0:
        bounds = np.geomspace(lower, r_max, panels + 1)
    else:
        bounds = np.concatenate(([0.0], np.geomspace(r_min, r_max, panels)))
    x, w = _leggauss(points_per_panel)
    a, b = bounds[:-1], bounds[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def sphere_rule(
    dim: int,
    angular_factor: float = 1,
    seed: int = DEFAULT_SEED,
    domain: Domain = Domain.FULL_SPACE,
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (m, dim) and weights (m,) summing to the sphere surface measure.

    dim 1: the two signs; dim 2: uniform trapezoid in the angle; dim 3:
    Gauss-Legendre in cos(theta) x uniform azimuth; dim >= 4: fixed-seed
    Monte Carlo. ``angular_factor`` scales the node counts for refinement
    studies. Half-line domains (dim 1 only) keep a single signed node.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if domain is not Domain.FULL_SPACE:
        if dim != 1:
            raise ValueError("half-line domains only exist for dim 1")
        sign = 1.0 if domain is Domain.HALF_LINE_POS else -1.0
        return np.array([[sign]]), np.array([1.0])
    if dim == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if dim == 2:
        m = max(8, int(256 * angular_factor))
        theta = 2 * np.pi * np.arange(m) / m
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        weights = np.full(m, 2 * np.pi / m)
        return nodes, weights
    if dim == 3:
        n_pol = max(4, int(32 * angular_factor))
        n_az = max(8, int(64 * angular_factor))
        ct, w_ct = _leggauss(n_pol)
        phi = 2 * np.pi * np.arange(n_az) / n_az
        st = np.sqrt(1.0 - ct**2)
        nodes = np.empty((n_pol, n_az, 3))
        nodes[:, :, 0] = st[:, None] * np.cos(phi)[None, :]
        nodes[:, :, 1] = st[:, None] * np.sin(phi)[None, :]
        nodes[:, :, 2] = ct[:, None]
        weights = np.repeat(w_ct * (2 * np.pi / n_az), n_az)
        return nodes.reshape(-1, 3), weights
    # Exploratory dimensions: seeded Monte Carlo on the sphere.
    m = max(1024, int(DEFAULT_MC_POINTS * angular_factor))
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((m, dim))
    nodes = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    weights = np.full(m, sphere_surface(dim) / m)
    return nodes, weights


@dataclass
class PolarGrid:
    """Radial quadrature nodes/weights times sphere nodes/weights.

    ``radial_weights`` are plain dr weights; the r^{N-1} Jacobian is applied
    by the integrators, not stored here.
    """

    dim: int
    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    sphere_nodes: np.ndarray
    sphere_weights: np.ndarray
    r_max: float
    domain: Domain = Domain.FULL_SPACE
    points_per_panel: int = DEFAULT_PANEL_POINTS
    _points: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def build(
        cls,
        dim: int,
        r_max: float = DEFAULT_R_MAX,
        panels: int = DEFAULT_PANELS,
        points_per_panel: int = DEFAULT_PANEL_POINTS,
        r_min: float = DEFAULT_R_MIN,
        angular_factor: float = 1,
        seed: int = DEFAULT_SEED,
        domain: Domain = Domain.FULL_SPACE,
    ) -> "PolarGrid":
        r, wr = log_panel_rule(r_min, r_max, panels, points_per_panel)
        sn, sw = sphere_rule(dim, angular_factor=angular_factor, seed=seed, domain=domain)
        return cls(
            dim=dim,
            radial_nodes=r,
            radial_weights=wr,
            sphere_nodes=sn,
            sphere_weights=sw,
            r_max=r_max,
            domain=domain,
            points_per_panel=points_per_panel,
        )

    def refined(self, radial: int = 2, angular: float = 2) -> "PolarGrid":
        """Same span, ``radial`` times the panels and ``angular`` times the sphere nodes."""
        n_panels = int(round(len(self.radial_nodes) / self.points_per_panel)) * radial
        return PolarGrid.build(
            self.dim,
            r_max=self.r_max,
            panels=max(n_panels, 2),
            points_per_panel=self.points_per_panel,
            angular_factor=angular,
            domain=self.domain,
        )

    @property
    def n_radial(self) -> int:
        return len(self.radial_nodes)

    @property
    def n_sphere(self) -> int:
        return len(self.sphere_weights)

    @property
    def sphere_measure(self) -> float:
        return float(np.sum(self.sphere_weights))

    def points(self) -> np.ndarray:
        """All grid points, shape (n_radial, n_sphere, dim); cached."""
        if self._points is None:
            self._points = (
                self.radial_nodes[:, None, None] * self.sphere_nodes[None, :, :]
            )
        return self._points

    def cell_weights(self) -> np.ndarray:
        """Volume weights w_r * r^{N-1} * w_sigma, shape (n_radial, n_sphere)."""
        rad = self.radial_weights * self.radial_nodes ** (self.dim - 1)
        return rad[:, None] * self.sphere_weights[None, :]


@dataclass
class BallRule:
    """Volume quadrature on a ball B(center, rho); weights sum to its volume."""

    center: np.ndarray
    rho: float
    nodes: np.ndarray  # (m, dim)
    weights: np.ndarray  # (m,)

    @classmethod
    def build(
        cls,
        dim: int,
        center=None,
        rho: float = 1.0,
        radial_points: int = 24,
        angular_factor: float = 1,
        seed: int = DEFAULT_SEED,
    ) -> "BallRule":
        center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        x, w = _leggauss(radial_points)
        r = 0.5 * rho * (x + 1.0)
        wr = 0.5 * rho * w
        sn, sw = sphere_rule(dim, angular_factor=angular_factor, seed=seed)
        nodes = center[None, None, :] + r[:, None, None] * sn[None, :, :]
        weights = (wr * r ** (dim - 1))[:, None] * sw[None, :]
        return cls(center=center, rho=rho, nodes=nodes.reshape(-1, dim), weights=weights.ravel())

    @property
    def volume(self) -> float:
        return float(np.sum(self.weights))
