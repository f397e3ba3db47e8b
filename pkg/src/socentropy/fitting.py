"""Estimation pipeline.

smooth -> locate the peak -> lambda from the peak -> theta by maximal
Pearson correlation of the linearized stationarity condition -> alpha,
beta by least squares -> goodness of fit -> class segmentation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .distribution import (
    BenefitDistribution,
    PeakInfo,
    SmoothingConfig,
    cpf,
    detect_peak,
    smooth,
)
from .entropy import InequalityReport, inequality_index
from .errors import (
    DomainError,
    FitError,
    InsufficientDataError,
    InvalidInputError,
    InvalidPeakError,
    SingularRegressionError,
    SocEntropyError,
)
from .laws import (
    FitParameters,
    lambda_from_omega_p,
    phi_be,
    solve_stationarity,
    stationarity_lhs,
    temperature_check,
)
from .lorenz import SymmetryVerdict, classify_symmetry, lorenz_points
from .segmentation import segment_xy

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_N_STARTS = 8
_POLISH_TOL = 1e-12


@dataclass(frozen=True)
class FitConfig:
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    pin_peak_to_min: bool = False
    theta_range: tuple[float, float] = (-0.9, 0.9)
    theta_tolerance: float = 1e-4
    max_segments: int = 6
    segment_criterion: Literal["bic", "fixed-k"] = "bic"
    min_segment_bins: int = 4
    exclude_zero_occupation: bool = True
    weighted: bool = False

    def __post_init__(self):
        lo, hi = self.theta_range
        if not (-0.99 <= lo <= 0.0 <= hi <= 0.99) or lo >= hi:
            raise InvalidInputError(
                f"theta_range must lie within [-0.99, 0.99] and contain 0, got {self.theta_range}"
            )
        if not self.theta_tolerance > 0:
            raise InvalidInputError("theta_tolerance must be positive")
        if self.min_segment_bins < 3:
            raise InvalidInputError("min_segment_bins must be at least 3")
        if self.max_segments < 1:
            raise InvalidInputError("max_segments must be at least 1")
        if self.segment_criterion not in ("bic", "fixed-k"):
            raise InvalidInputError(f"unknown segment_criterion {self.segment_criterion!r}")


@dataclass(frozen=True)
class Regression:
    alpha: float
    beta: float
    pearson_r: float
    r_squared: float
    n: int


@dataclass(frozen=True)
class Segment:
    label: int
    bin_range: tuple[int, int]  # inclusive
    omega_range: tuple[float, float]
    benefit_range: tuple[float, float]
    params: FitParameters
    pearson_r: float


@dataclass(frozen=True)
class Goodness:
    pearson_r: float
    rmse_nu: float
    r_squared: float


@dataclass
class FitReport:
    global_params: FitParameters
    peak: PeakInfo
    poverty_fraction_Fp: float
    gini: float
    symmetry: SymmetryVerdict
    inequality: InequalityReport
    segments: list[Segment]
    goodness: Goodness
    mean_phi: float
    warnings: list[str] = field(default_factory=list)
    # per-bin arrays for plot output; not part of the serialized report
    smoothed: BenefitDistribution | None = field(default=None, repr=False, compare=False)
    nu_fitted: np.ndarray | None = field(default=None, repr=False, compare=False)


# -- stages -----------------------------------------------------------------


def estimate_lambda(peak: PeakInfo) -> float:
    if not peak.omega_p > 0:
        raise InvalidPeakError(f"peak abscissa must be positive, got {peak.omega_p}")
    return lambda_from_omega_p(peak.omega_p)


def _usable(dist: BenefitDistribution, exclude_zero: bool = True) -> np.ndarray:
    pos = dist.nu > 0
    if not exclude_zero and not pos.all():
        raise InvalidInputError(
            "zero-occupation bins present; enable exclude_zero_occupation to fit"
        )
    return np.flatnonzero(pos)


def _pearson_deficit(x: np.ndarray, y: np.ndarray, w: np.ndarray | None = None) -> tuple[float, float]:
    """Return ``(1 - r, r)``.

    ``1 - r`` comes from directly computed residuals, so it keeps full
    relative precision as r approaches 1.
    """
    w = np.ones_like(x) if w is None else w
    sw = w.sum()
    xc = x - (w * x).sum() / sw
    yc = y - (w * y).sum() / sw
    sxx = (w * xc * xc).sum()
    syy = (w * yc * yc).sum()
    if sxx <= 0 or syy <= 0:
        return 1.0, 0.0
    b = (w * xc * yc).sum() / sxx
    res = yc - b * xc
    frac = min((w * res * res).sum() / syy, 1.0)
    r = math.copysign(math.sqrt(1.0 - frac), b)
    deficit = frac / (1.0 + r) if r > 0 else 1.0 - r
    return deficit, r


def _golden(f, a: float, b: float, tol: float) -> tuple[float, float, float, float]:
    """Golden-section minimization on ``[a, b]``; returns ``(x, f(x), a, b)``."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    cands = [(fc, abs(c), c), (fd, abs(d), d), (f(a), abs(a), a), (f(b), abs(b), b)]
    fx, _, x = min(cands)
    return x, fx, a, b


def _theta_search(x, nu, theta_range, tol, w=None) -> tuple[float, float]:
    def objective(theta):
        return _pearson_deficit(x, stationarity_lhs(nu, theta), w)[0]

    lo, hi = theta_range
    edges = np.linspace(lo, hi, _N_STARTS + 1)
    # (objective, |theta|, theta, bracket) -- ties resolved toward small |theta|
    cands = [(objective(0.0), 0.0, 0.0, (0.0, 0.0))]
    for a, b in zip(edges[:-1], edges[1:]):
        t, ft, ba, bb = _golden(objective, float(a), float(b), tol)
        cands.append((ft, abs(t), t, (ba, bb)))
    best = min(cands, key=lambda c: (c[0], c[1]))
    theta = best[2]
    if best[0] > 0:
        # refine well below the coarse tolerance: the deficit is ~ quadratic
        # in the theta error with no offset, so it stays resolvable
        pa = max(lo, theta - 2 * tol)
        pb = min(hi, theta + 2 * tol)
        t, ft, _, _ = _golden(objective, pa, pb, _POLISH_TOL)
        if ft < best[0]:
            theta = t
    deficit, r = _pearson_deficit(x, stationarity_lhs(nu, theta), w)
    return float(theta), r


def _xy(dist, lam, bins):
    x = np.asarray(phi_be(dist.omega[bins], lam))
    return x, dist.nu[bins]


def _weights(dist, bins, weighted):
    return dist.population[bins] if weighted else None


def estimate_theta(
    dist: BenefitDistribution,
    lam: float,
    cfg: FitConfig = FitConfig(),
    bins: np.ndarray | None = None,
) -> tuple[float, float]:
    """Interaction parameter maximizing the linearity of the stationarity plot.

    Returns ``(theta, pearson_r)``. The search is golden-section over 8
    equal sub-intervals of ``cfg.theta_range`` plus an explicit evaluation
    at ``theta = 0``; the winner is then polished to ~1e-12.
    """
    if bins is None:
        bins = _usable(dist, cfg.exclude_zero_occupation)
    if len(bins) < 3:
        raise InsufficientDataError("need at least 3 bins with positive occupation")
    x, nu = _xy(dist, lam, bins)
    return _theta_search(x, nu, cfg.theta_range, cfg.theta_tolerance, _weights(dist, bins, cfg.weighted))


def regress_alpha_beta(
    dist: BenefitDistribution,
    lam: float,
    theta: float,
    bins: np.ndarray | None = None,
    weighted: bool = False,
) -> Regression:
    """Least-squares line ``stationarity_lhs(nu, theta) = beta * phi + alpha``."""
    if bins is None:
        bins = _usable(dist)
    if len(bins) < 3:
        raise InsufficientDataError("need at least 3 bins with positive occupation")
    x, nu = _xy(dist, lam, bins)
    y = np.asarray(stationarity_lhs(nu, theta))
    w = _weights(dist, bins, weighted)
    w = np.ones_like(x) if w is None else w
    sw = w.sum()
    xm = (w * x).sum() / sw
    ym = (w * y).sum() / sw
    xc, yc = x - xm, y - ym
    sxx = (w * xc * xc).sum()
    if not sxx > 0:
        raise SingularRegressionError("benefits give a constant free energy; slope undefined")
    beta = (w * xc * yc).sum() / sxx
    alpha = ym - beta * xm
    syy = (w * yc * yc).sum()
    if syy > 0:
        res = yc - beta * xc
        r2 = 1.0 - (w * res * res).sum() / syy
        r = math.copysign(math.sqrt(max(r2, 0.0)), beta)
    else:
        r2 = r = math.nan
    return Regression(alpha=float(alpha), beta=float(beta), pearson_r=r, r_squared=r2, n=len(bins))


def predict(omega_grid, params: FitParameters) -> np.ndarray:
    """Fitted occupations; NaN where the law has no finite positive value."""
    om = np.atleast_1d(np.asarray(omega_grid, dtype=float))
    t = params.beta * np.asarray(phi_be(om, params.lam)) + params.alpha
    out = np.full(om.shape, np.nan)
    for i, ti in enumerate(t):
        try:
            out[i] = solve_stationarity(float(ti), params.theta)
        except DomainError:
            pass
    return out


def goodness(dist: BenefitDistribution, predicted) -> Goodness:
    obs = np.asarray(dist.nu, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if obs.shape != pred.shape:
        raise InvalidInputError("predicted and observed lengths differ")
    m = (obs > 0) & np.isfinite(pred)
    o, p = obs[m], pred[m]
    if len(o) == 0:
        return Goodness(math.nan, math.nan, math.nan)
    rmse = math.sqrt(np.mean((o - p) ** 2))
    ss_tot = float(((o - o.mean()) ** 2).sum())
    r2 = 1.0 - float(((o - p) ** 2).sum()) / ss_tot if ss_tot > 0 else math.nan
    if ss_tot > 0 and np.ptp(p) > 0:
        r = float(np.corrcoef(o, p)[0, 1])
    else:
        r = math.nan
    return Goodness(pearson_r=r, rmse_nu=rmse, r_squared=r2)


def segment(dist: BenefitDistribution, lam: float, cfg: FitConfig = FitConfig()) -> list[Segment]:
    """Split the bins into classes with their own straight line.

    Breakpoints come from the noninteracting (theta = 0) linearization;
    each segment is then refitted with its own theta, alpha and beta.
    ``lam`` is shared by all segments.
    """
    bins = _usable(dist, cfg.exclude_zero_occupation)
    if len(bins) < 2 * cfg.min_segment_bins:
        raise InsufficientDataError(
            f"segmentation needs {2 * cfg.min_segment_bins} positive bins, have {len(bins)}"
        )
    x, nu = _xy(dist, lam, bins)
    y = np.asarray(stationarity_lhs(nu, 0.0))
    seg = segment_xy(x, y, cfg.max_segments, cfg.min_segment_bins, cfg.segment_criterion)
    bounds = seg.bounds()
    out = []
    for label, (start, stop) in enumerate(bounds):
        sub = bins[start:stop]
        theta, _ = estimate_theta(dist, lam, cfg, sub)
        reg = regress_alpha_beta(dist, lam, theta, sub, cfg.weighted)
        first = int(sub[0])
        last = int(bins[bounds[label + 1][0]] - 1) if label + 1 < len(bounds) else int(sub[-1])
        om = (float(dist.omega[first]), float(dist.omega[last]))
        out.append(
            Segment(
                label=label,
                bin_range=(first, last),
                omega_range=om,
                benefit_range=(om[0] * dist.w_bar, om[1] * dist.w_bar),
                params=FitParameters(reg.alpha, reg.beta, lam, theta),
                pearson_r=reg.pearson_r,
            )
        )
    return out


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except FitError:
        raise
    except SocEntropyError as exc:
        raise FitError(name, exc) from exc


def fit(dist: BenefitDistribution, cfg: FitConfig = FitConfig()) -> FitReport:
    """Run the full pipeline on a normalized distribution.

    Inequality measures (Gini, redundancy index, poverty fraction) describe
    the input data; the model stages work on the smoothed occupations.
    Stage failures are re-raised as :class:`FitError` naming the stage.
    """
    warnings: list[str] = []
    sm = _stage("smooth", smooth, dist, cfg.smoothing)
    peak = _stage("peak", detect_peak, sm, cfg.pin_peak_to_min)
    lam = _stage("lambda", estimate_lambda, peak)
    bins = _stage("theta", _usable, sm, cfg.exclude_zero_occupation)
    if len(bins) < len(sm):
        warnings.append(f"{len(sm) - len(bins)} zero-occupation bin(s) excluded from regression")
    theta, _ = _stage("theta", estimate_theta, sm, lam, cfg, bins)
    reg = _stage("regression", regress_alpha_beta, sm, lam, theta, bins, cfg.weighted)
    params = FitParameters(reg.alpha, reg.beta, lam, theta)
    if not params.extreme_poverty_defined:
        warnings.append("alpha <= 0: extreme-poverty fraction undefined")
    nu_fit = predict(sm.omega, params)
    if np.isnan(nu_fit).any():
        warnings.append(f"{int(np.isnan(nu_fit).sum())} bin(s) outside the fitted law's domain")
    good = goodness(sm, nu_fit)
    if len(bins) >= 2 * cfg.min_segment_bins:
        segments = _stage("segment", segment, sm, lam, cfg)
    else:
        warnings.append("too few bins to segment; reporting the global fit as one segment")
        first, last = int(bins[0]), int(bins[-1])
        om = (float(sm.omega[first]), float(sm.omega[last]))
        segments = [
            Segment(0, (first, last), om, (om[0] * sm.w_bar, om[1] * sm.w_bar), params, reg.pearson_r)
        ]
    gi = _stage("inequality", lambda d: lorenz_points(d).gini, dist)
    return FitReport(
        global_params=params,
        peak=peak,
        poverty_fraction_Fp=cpf(dist, peak.omega_p),
        gini=gi,
        symmetry=classify_symmetry(gi),
        inequality=inequality_index(dist),
        segments=segments,
        goodness=good,
        mean_phi=temperature_check(sm, lam),
        warnings=warnings,
        smoothed=sm,
        nu_fitted=nu_fit,
    )
