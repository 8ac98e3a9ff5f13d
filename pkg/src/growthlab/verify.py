"""End-to-end verification of the multidimensional growth-transfer
inequalities: for an admissible case (N, k, j, s, p, q, scale), build the
canonical polynomial, compute both weighted norms, and report their ratio.
Empirical constants are maxima of such ratios over field families; they are
lower bounds for the optimal constants and carry no certification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionOne,
    DivergentRhs,
    EmptyEffective,
    ExcludedS,
    InadmissiblePQ,
    NonIntegrable,
    NotMeanZero,
    SZero,
)
from .exponents import Exponent, Regime, admissible_interval, regime
from .fields import (
    ScalarField,
    annulus_max,
    derivative_magnitude_field,
    dilate,
    from_callable,
    gradient_k,
    lin_combine,
    make_field,
    product_field,
    radial_symmetrize,
    spherical_mean,
)
from .grids import Domain, PolarGrid
from .norms import Region, Scale, default_grid, tensor_norm_ex, weighted_norm_ex
from .polynomials import MultiIndexPolynomial, PiStrategy, construct_pi, poly_membership

__all__ = [
    "InequalityCase",
    "Report",
    "SymmetrizationSplit",
    "verify_case",
    "estimate_constant",
    "estimate_constant_ex",
    "decay_check",
    "ckn_split_verify",
    "symmetrization_split",
    "scaling_experiment",
    "embedding_report",
    "exp_verify",
    "default_family",
    "mixed_family",
]


@dataclass(frozen=True)
class InequalityCase:
    """One verification instance. Validation happens at construction, before
    any quadrature runs: q must lie in the admissible interval, s must avoid
    the excluded integers (power scale) or zero (exponential scale), and
    s below threshold on the full line requires N > 1."""

    dim: int
    k: int
    j: int
    s: float
    p: Exponent
    q: Exponent
    scale: Scale = Scale.SHIFTED
    domain: Domain = Domain.FULL_SPACE
    strategy: PiStrategy = PiStrategy.auto()

    def __post_init__(self):
        object.__setattr__(self, "p", Exponent(self.p))
        object.__setattr__(self, "q", Exponent(self.q))
        if not isinstance(self.scale, Scale):
            object.__setattr__(self, "scale", Scale(self.scale))
        if not isinstance(self.domain, Domain):
            object.__setattr__(self, "domain", Domain(self.domain))
        if not 1 <= self.j <= self.k:
            raise ValueError("need 1 <= j <= k")
        if self.p.is_inf:
            raise ValueError("p must be finite")
        if self.scale is Scale.EXPONENTIAL:
            if self.s == 0:
                raise SZero("exponential scale needs s != 0; use the power scale at s = 0")
            if self.s < 0 and self.dim == 1 and self.domain is Domain.FULL_SPACE:
                raise DimensionOne("s < 0 on the full line: use a half-line domain")
        else:
            info = regime(self.s, self.k)
            if info.component is Regime.EXCLUDED:
                raise ExcludedS(f"s = {self.s} is excluded for k = {self.k}")
            if self.s < -1 and self.dim == 1 and self.domain is Domain.FULL_SPACE:
                raise DimensionOne("s < -1 on the full line: use a half-line domain")
        interval = admissible_interval(self.j, self.p, self.dim)
        if not interval.contains(self.q):
            raise InadmissiblePQ(f"q = {self.q} outside {interval} for (j, p) = ({self.j}, {self.p})")

    @property
    def lhs_growth(self) -> float:
        """Growth parameter on the transferred side (s + j; s on the exp scale)."""
        return self.s if self.scale is Scale.EXPONENTIAL else self.s + self.j

    def to_json_dict(self) -> dict:
        return {
            "N": self.dim,
            "k": self.k,
            "j": self.j,
            "s": self.s,
            "p": repr(self.p),
            "q": repr(self.q),
            "scale": self.scale.value,
            "domain": self.domain.value,
            "strategy": self.strategy.kind,
        }


@dataclass
class Report:
    """Outcome of one (field, case) verification."""

    case: InequalityCase
    field_name: str
    lhs: float
    rhs: float
    ratio: Optional[float]
    verdict: str  # "ok" | "vacuous" | "lhs-divergent"
    pi: Optional[MultiIndexPolynomial] = None
    decay_profile: Optional[list[tuple[float, float]]] = None
    diagnostics: dict = dc_field(default_factory=dict)

    def to_json_dict(self) -> dict:
        diag = {}
        for key, value in self.diagnostics.items():
            if key == "fit_residuals" and isinstance(value, dict):
                diag[key] = {",".join(map(str, a)): v for a, v in value.items()}
            else:
                diag[key] = value
        return {
            "case": self.case.to_json_dict(),
            "field": self.field_name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "verdict": self.verdict,
            "pi_u": self.pi.to_json_dict() if self.pi is not None else None,
            "decay_profile": self.decay_profile,
            "diagnostics": diag,
        }

    def csv_row(self) -> list[str]:
        c = self.case
        deg = "" if self.pi is None else str(self.pi.degree(1e-10))
        ratio = "" if self.ratio is None else repr(self.ratio)
        return [
            self.field_name,
            str(c.dim), str(c.k), str(c.j), repr(c.s),
            repr(c.p), repr(c.q), c.scale.value,
            repr(self.lhs), repr(self.rhs), ratio, deg, self.verdict,
        ]


CSV_COLUMNS = ["field", "N", "k", "j", "s", "p", "q", "scale",
               "lhs", "rhs", "ratio", "pi_degree", "verdict"]


def _case_grid(case: InequalityCase, grid: PolarGrid | None) -> PolarGrid:
    return grid if grid is not None else default_grid(case.dim, case.domain)


def verify_case(u: ScalarField, case: InequalityCase, grid: PolarGrid | None = None) -> Report:
    """Compute both sides of the transfer inequality for one field.

    The polynomial is built first from the field alone; the right side must
    be finite (DivergentRhs otherwise) and a zero right side yields a vacuous
    report rather than an error. For q = infinity the left side is a sampled
    sup, hence a lower bound.
    """
    if u.dim != case.dim:
        raise ValueError("field dimension does not match the case")
    grid = _case_grid(case, grid)
    diagnostics: dict = {}

    rhs_tensor = gradient_k(u, case.k, grid)
    rhs, rhs_info = tensor_norm_ex(rhs_tensor, case.s, case.p, case.scale, grid=grid)
    diagnostics["rhs_tail_fraction"] = rhs_info.get("tail_fraction", 0.0)
    if math.isinf(rhs):
        raise DivergentRhs(
            f"|grad^{case.k} {u.name}| is not in the weighted L^{case.p} space at s = {case.s}"
        )
    if case.scale is Scale.PURE and case.s < -case.dim / float(case.p):
        local, _ = tensor_norm_ex(
            rhs_tensor, -case.dim / float(case.p), case.p, Scale.PURE,
            region=Region.ball(1.0), grid=grid,
        )
        if not math.isfinite(local):
            raise NonIntegrable("grad^k u is not p-integrable on the unit ball")

    strategy = case.strategy
    if case.scale is Scale.PURE and strategy.kind == "auto":
        # pure-power weights see the shrinking-ball limit of the averages,
        # which is point evaluation at the origin
        strategy = PiStrategy.point()
    pi = construct_pi(
        u, case.k, case.s, case.p, strategy=strategy, scale=case.scale,
    )
    diagnostics["fit_residuals"] = pi.fit_residuals
    diff = u if pi.is_zero() else lin_combine(
        [(1.0, u), (-1.0, pi.as_field())], name=f"{u.name}-pi"
    )

    if case.k - case.j >= 1:
        lhs_tensor = gradient_k(diff, case.k - case.j, grid)
        lhs, lhs_info = tensor_norm_ex(lhs_tensor, case.lhs_growth, case.q, case.scale, grid=grid)
    else:
        lhs, lhs_info = weighted_norm_ex(diff, case.lhs_growth, case.q, case.scale, grid=grid)
    diagnostics["lhs_tail_fraction"] = lhs_info.get("tail_fraction", 0.0)

    if rhs == 0.0:
        verdict, ratio = "vacuous", None
    elif math.isinf(lhs):
        verdict, ratio = "lhs-divergent", math.inf
    else:
        verdict, ratio = "ok", lhs / rhs
    return Report(case=case, field_name=u.name, lhs=lhs, rhs=rhs, ratio=ratio,
                  verdict=verdict, pi=pi, diagnostics=diagnostics)


def estimate_constant_ex(
    family: Sequence[ScalarField],
    case: InequalityCase,
    grid: PolarGrid | None = None,
):
    """Max ratio over the family (an empirical lower bound for the optimal
    constant), the per-field reports, and the skipped members."""
    if not family:
        raise EmptyEffective("empty field family")
    grid = _case_grid(case, grid)
    reports, skips = [], []
    best = None
    for u in family:
        try:
            rep = verify_case(u, case, grid)
        except (DivergentRhs, NonIntegrable) as exc:
            skips.append({"field": u.name, "reason": type(exc).__name__, "detail": str(exc)})
            continue
        reports.append(rep)
        if rep.verdict == "ok" and rep.ratio is not None:
            best = rep.ratio if best is None else max(best, rep.ratio)
    if best is None:
        raise EmptyEffective("no family member produced a usable ratio")
    return best, reports, skips


def estimate_constant(
    family: Sequence[ScalarField],
    case: InequalityCase,
    grid: PolarGrid | None = None,
) -> float:
    return estimate_constant_ex(family, case, grid)[0]


def decay_check(
    u: ScalarField,
    case: InequalityCase,
    max_exponent: int = 12,
    grid: PolarGrid | None = None,
):
    """Annulus maxima of |x|^{-(s+j)} |grad^{k-j}(u - pi)| on dyadic annuli.

    Only admissible when the sup norm is in range (p > N/j, or p = N = j = 1).
    Returns (profile, verdict) with verdict "decaying" when the last three
    values strictly decrease.
    """
    p = float(case.p)
    if not (p > case.dim / case.j or (p == 1 and case.dim == 1 and case.j == 1)):
        raise InadmissiblePQ("the pointwise decay statement needs p > N/j (or p = N = j = 1)")
    pi = construct_pi(u, case.k, case.s, case.p, strategy=case.strategy, scale=case.scale)
    diff = u if pi.is_zero() else lin_combine([(1.0, u), (-1.0, pi.as_field())])
    mag = derivative_magnitude_field(diff, case.k - case.j)
    expo = -(case.s + case.j)

    def weighted(points):
        r = np.linalg.norm(points, axis=1)
        return r**expo * mag.evaluator(points)

    wfield = from_callable(u.dim, weighted, name=f"decay({u.name})")
    profile = []
    for m in range(max_exponent + 1):
        tau = float(2**m)
        profile.append((tau, annulus_max(wfield, tau)))
    last = [v for _, v in profile[-3:]]
    # an identically-zero tail (compact support) counts as decayed
    verdict = (
        "decaying"
        if (last[0] > last[1] > last[2]) or all(v == 0.0 for v in last)
        else "not-decaying"
    )
    return profile, verdict


def ckn_split_verify(
    u: ScalarField,
    a: float,
    p,
    q,
    grid: PolarGrid | None = None,
    mean_zero_tol: float = 1e-8,
) -> Report:
    """Pure-power inequality for fields with vanishing radial symmetrization:
    || |x|^{(a+N)/p - N/q} u ||_q against || |x|^{1 + a/p} grad u ||_p.

    Equivalent to the first-order transfer at s = -1 - (a+N)/p with no
    polynomial subtracted, which is exactly why the mean-zero hypothesis is
    checked first.
    """
    if u.dim < 2:
        raise ValueError("the mean-zero split needs N > 1")
    p_e, q_e = Exponent(p), Exponent(q)
    n = u.dim
    s = -1.0 - (a + n) / float(p_e)
    case = InequalityCase(dim=n, k=1, j=1, s=s, p=p_e, q=q_e, scale=Scale.PURE)
    grid = _case_grid(case, grid)

    radii = np.geomspace(1e-2, 1e3, 26)
    means = np.atleast_1d(spherical_mean(u, radii, grid))
    if float(np.max(np.abs(means))) >= mean_zero_tol:
        raise NotMeanZero(
            f"max |spherical mean| = {float(np.max(np.abs(means))):.3e} >= {mean_zero_tol}"
        )

    hyp, _ = weighted_norm_ex(u, s + 1.0, p_e, Scale.PURE, grid=grid)
    if not math.isfinite(hyp):
        raise NonIntegrable("|x|^{a/p} u is not in L^p; the split hypothesis fails")
    rhs_tensor = gradient_k(u, 1, grid)
    rhs, rhs_info = tensor_norm_ex(rhs_tensor, s, p_e, Scale.PURE, grid=grid)
    if math.isinf(rhs):
        raise DivergentRhs("|x|^{1+a/p} grad u is not in L^p")
    lhs, lhs_info = weighted_norm_ex(u, s + 1.0, q_e, Scale.PURE, grid=grid)

    if rhs == 0.0:
        verdict, ratio = "vacuous", None
    elif math.isinf(lhs):
        verdict, ratio = "lhs-divergent", math.inf
    else:
        verdict, ratio = "ok", lhs / rhs
    return Report(
        case=case, field_name=u.name, lhs=lhs, rhs=rhs, ratio=ratio, verdict=verdict,
        pi=MultiIndexPolynomial.zero(u.dim),
        diagnostics={
            "a": a,
            "max_spherical_mean": float(np.max(np.abs(means))),
            "rhs_tail_fraction": rhs_info.get("tail_fraction", 0.0),
            "lhs_tail_fraction": lhs_info.get("tail_fraction", 0.0),
        },
    )


@dataclass
class SymmetrizationSplit:
    report_radial: Report
    report_meanzero: Report
    contraction_ok: bool
    norm_full: float
    norm_radial: float


def symmetrization_split(
    u: ScalarField, case: InequalityCase, grid: PolarGrid | None = None
) -> SymmetrizationSplit:
    """Split u into its radial symmetrization and the mean-zero remainder.

    Checks the gradient-norm contraction of symmetrization (with 1e-6 slack)
    and verifies the case on both parts.
    """
    if case.k != 1:
        raise ValueError("the symmetrization split is a first-order construction")
    grid = _case_grid(case, grid)
    u_s = radial_symmetrize(u, grid=grid)
    w = lin_combine([(1.0, u), (-1.0, u_s)], name=f"{u.name}-sym")

    n_full, _ = tensor_norm_ex(gradient_k(u, 1, grid), case.s, case.p, case.scale, grid=grid)
    n_rad, _ = tensor_norm_ex(gradient_k(u_s, 1, grid), case.s, case.p, case.scale, grid=grid)
    contraction_ok = n_rad <= n_full * (1.0 + 1e-6)

    return SymmetrizationSplit(
        report_radial=verify_case(u_s, case, grid),
        report_meanzero=verify_case(w, case, grid),
        contraction_ok=contraction_ok,
        norm_full=n_full,
        norm_radial=n_rad,
    )


def scaling_experiment(
    u: ScalarField,
    case: InequalityCase,
    lambdas: Sequence[float],
    grid: PolarGrid | None = None,
) -> list[Report]:
    """Verify the shifted-weight case on dilates u(lambda x).

    By change of variables this is the (lambda + |x|)-weighted inequality for
    u itself, so the ratio trend as lambda -> 0 approaches the pure-power
    ratio, which is attached to every report for comparison.
    """
    if case.scale is not Scale.SHIFTED:
        raise ValueError("scaling experiments start from the shifted-power scale")
    grid = _case_grid(case, grid)
    pure_ratio = None
    try:
        pure_report = verify_case(u, replace(case, scale=Scale.PURE), grid)
        pure_ratio = pure_report.ratio
    except (DivergentRhs, NonIntegrable):
        pass
    reports = []
    for lam in lambdas:
        rep = verify_case(dilate(u, lam), case, grid)
        rep.diagnostics["lambda"] = lam
        rep.diagnostics["pure_scale_ratio"] = pure_ratio
        reports.append(rep)
    return reports


def embedding_report(
    u: ScalarField,
    k: int,
    s: float,
    p,
    q,
    grid: PolarGrid | None = None,
) -> dict:
    """Membership of u in the graph spaces and the norm-equivalence ratios.

    norm_ratio is the full-norm-to-seminorm quotient
    (||u|| + ||grad^k u||) / ||grad^k u||; the per-order ratios bound each
    intermediate gradient by the full norm.
    """
    info = regime(s, k)
    if info.component is Regime.EXCLUDED:
        raise ExcludedS(f"s = {s} is excluded for k = {k}")
    p_e, q_e = Exponent(p), Exponent(q)
    grid = grid if grid is not None else default_grid(u.dim, u.domain)

    ngrad, _ = tensor_norm_ex(gradient_k(u, k, grid), s, p_e, Scale.SHIFTED, grid=grid)
    nu_p, _ = weighted_norm_ex(u, s + k, p_e, Scale.SHIFTED, grid=grid)
    nu_q, _ = weighted_norm_ex(u, s + k, q_e, Scale.SHIFTED, grid=grid)
    full = nu_p + ngrad

    ratios = {}
    for j in range(1, k + 1):
        if k - j >= 1:
            nj, _ = tensor_norm_ex(gradient_k(u, k - j, grid), s + j, p_e, Scale.SHIFTED, grid=grid)
        else:
            nj = nu_p
        ratios[j] = nj / full if full > 0 and math.isfinite(full) else math.inf

    pi = construct_pi(u, k, s, p_e)
    return {
        "in_Wkqp": math.isfinite(nu_q) and math.isfinite(ngrad),
        "in_Wkpp": math.isfinite(nu_p) and math.isfinite(ngrad),
        "norm_u_q": nu_q,
        "norm_u_p": nu_p,
        "norm_gradk": ngrad,
        "norm_ratio": full / ngrad if ngrad > 0 else math.inf,
        "ratios": ratios,
        "pi_membership": poly_membership(pi, s, k, q_e),
    }


def exp_verify(u: ScalarField, case: InequalityCase, grid: PolarGrid | None = None) -> Report:
    """verify_case specialized to the exponential scale (s = 0 is rejected at
    case construction)."""
    if case.scale is not Scale.EXPONENTIAL:
        raise ValueError("exp_verify needs a case with the exponential scale")
    return verify_case(u, case, grid)


def default_family(dim: int = 3, count: int = 20, seed: int = 101) -> list[ScalarField]:
    """Seeded random radial splines, the default family for constant estimates."""
    rng = np.random.default_rng(seed)
    fields = []
    for i in range(count):
        n_knots = int(rng.integers(4, 7))
        radii = np.sort(rng.uniform(0.4, 6.0, size=n_knots))
        values = rng.uniform(-1.0, 1.0, size=n_knots)
        values[np.argmax(np.abs(values))] = np.sign(values[np.argmax(np.abs(values))]) * 1.0
        u = make_field("radial_spline", dim, knots=list(zip(radii, values)))
        u.name = f"radial_spline[{i}]"
        fields.append(u)
    return fields


def mixed_family(dim: int = 3, count: int = 100, seed: int = 2024) -> list[ScalarField]:
    """Radial spline times a low-degree polynomial: seeded non-radial fields."""
    rng = np.random.default_rng(seed)
    fields = []
    for i in range(count):
        n_knots = int(rng.integers(4, 7))
        radii = np.sort(rng.uniform(0.5, 5.0, size=n_knots))
        values = rng.uniform(-1.0, 1.0, size=n_knots)
        g = make_field("radial_spline", dim, knots=list(zip(radii, values)))
        coeffs = {tuple(0 for _ in range(dim)): float(rng.uniform(-1, 1))}
        for ax in range(dim):
            e = tuple(1 if t == ax else 0 for t in range(dim))
            coeffs[e] = float(rng.uniform(-1, 1))
        ax1, ax2 = rng.integers(0, dim, size=2)
        quad = tuple((1 if t == ax1 else 0) + (1 if t == ax2 else 0) for t in range(dim))
        coeffs[quad] = coeffs.get(quad, 0.0) + float(rng.uniform(-0.5, 0.5))
        from .fields import polynomial_field

        poly = polynomial_field(coeffs, dim, name="angular")
        u = product_field(g, poly, name=f"spline*poly[{i}]")
        fields.append(u)
    return fields
