"""Forward-model data generation for tests, fixtures and demos.

Produces noiseless (or noisy) distributions that follow the interacting
occupation law exactly on an omega grid that contains the peak abscissa,
with state weights chosen so that the population-weighted mean of omega
is exactly 1 (as any normalized distribution must be).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .distribution import BenefitDistribution, BinnedSeries
from .errors import InvalidInputError
from .laws import (
    FitParameters,
    nu_theta,
    omega_p_from_lambda,
    phi_be,
    stationarity_sup,
)

PARAM_BOUNDS = {
    "alpha": (0.1, 2.0),
    "beta": (0.2, 3.0),
    "lam": (-3.0, -0.3),
    "theta": (-0.5, 0.5),
}


def level_at_peak(params: FitParameters) -> float:
    return params.alpha + params.beta * float(phi_be(omega_p_from_lambda(params.lam), params.lam))


def is_regular(params: FitParameters, margin: float = 0.05) -> bool:
    """Whether the law is finite and positive on ``[0, omega_p]``.

    Requires ``beta*phi + alpha > margin`` at the peak (no divergence) and,
    for negative theta, ``alpha`` safely below the solvable range.
    """
    if params.beta <= 0:
        return False
    if level_at_peak(params) <= margin:
        return False
    return params.alpha < (1.0 - margin) * stationarity_sup(params.theta)


def draw_params(rng: np.random.Generator, bounds=PARAM_BOUNDS, max_tries: int = 10_000) -> FitParameters:
    """Uniform draw within ``bounds``, rejecting irregular parameter sets."""
    for _ in range(max_tries):
        p = FitParameters(*(float(rng.uniform(*bounds[k])) for k in ("alpha", "beta", "lam", "theta")))
        if is_regular(p) and omega_grid(p).max() > 1.0:
            return p
    raise InvalidInputError("no regular parameter set found within bounds")


def omega_grid(params: FitParameters, n_bins: int = 200, span: float = 6.0) -> np.ndarray:
    """Linear grid from ``omega_p/20`` up, containing ``omega_p`` exactly.

    The upper end is ``max(span * omega_p, 3)``, pulled in for negative
    theta so that the level stays below 95% of the solvable maximum.
    """
    wp = omega_p_from_lambda(params.lam)
    lo = wp / 20.0
    hi = max(span * wp, 3.0)
    cap = stationarity_sup(params.theta)
    if math.isfinite(cap):
        def excess(w):
            return params.alpha + params.beta * float(phi_be(w, params.lam)) - 0.95 * cap

        if excess(hi) > 0:
            hi = brentq(excess, wp, hi)
    if not lo < wp < hi:
        raise InvalidInputError("degenerate grid")
    grid = np.linspace(lo, hi, n_bins)
    grid[int(np.argmin(np.abs(grid - wp)))] = wp
    return grid


def unit_mean_weights(omega: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """State counts ``g_k = exp(-gamma * omega_k)`` making ``sum(g nu omega) == sum(g nu)``."""
    if not omega.min() < 1.0 < omega.max():
        raise InvalidInputError("omega grid must straddle 1 to admit a unit mean")

    def mean_minus_one(gamma):
        w = nu * np.exp(-gamma * (omega - 1.0))
        return float((w * omega).sum() / w.sum()) - 1.0

    a, b = -1.0, 1.0
    while mean_minus_one(a) < 0:
        a *= 2
    while mean_minus_one(b) > 0:
        b *= 2
    gamma = brentq(mean_minus_one, a, b, xtol=1e-15)
    return np.exp(-gamma * (omega - 1.0))


def forward_distribution(
    params: FitParameters,
    omega: np.ndarray | None = None,
    n_bins: int = 200,
    w_bar: float = 1.0,
) -> BenefitDistribution:
    """Exact forward-model distribution on ``omega`` (default: :func:`omega_grid`)."""
    if omega is None:
        omega = omega_grid(params, n_bins)
    nu = np.asarray(nu_theta(omega, params), dtype=float)
    g = unit_mean_weights(omega, nu)
    n = math.fsum(g * nu)
    return BenefitDistribution(omega=omega, nu=nu, g=g, n_total=n, w_total=n * w_bar, w_bar=w_bar)


def piecewise_linear_distribution(
    rng: np.random.Generator,
    n_bins: int = 600,
    breaks: tuple[int, int] = (200, 400),
    slopes: tuple[float, float, float] = (4.0, 1.0, 0.25),
    lam: float = -1.0,
    sigma: float = 0.01,
    width: float = 50.0,
) -> tuple[BenefitDistribution, tuple[int, int]]:
    """Three-piece linearized data for segmentation tests.

    Bins lie above the peak, where ``phi`` is increasing. The noninteracting
    linearization ``ln(1 + 1/nu)`` is a continuous three-piece line in
    ``phi`` with the given slopes (decreasing, as for increasingly "hot"
    classes), plus Gaussian noise ``sigma``. Returns the distribution and
    the true first bin of segments 2 and 3.

    The defaults space bins widely enough in ``phi`` (slope change times
    bin spacing well above ``sigma``) for breakpoints to be located to
    within one bin, and use enough bins for BIC to reject spurious
    segments reliably.
    """
    wp = omega_p_from_lambda(lam)
    omega = np.linspace(wp * 1.2, wp * 1.2 + width, n_bins)
    x = np.asarray(phi_be(omega, lam))
    y = np.empty(n_bins)
    b1, b2 = breaks
    y0 = 0.5 - slopes[0] * x[0]
    y[:b1] = y0 + slopes[0] * x[:b1]
    y1 = y[b1 - 1] + slopes[1] * (x[b1] - x[b1 - 1])
    y[b1:b2] = y1 + slopes[1] * (x[b1:b2] - x[b1])
    y2 = y[b2 - 1] + slopes[2] * (x[b2] - x[b2 - 1])
    y[b2:] = y2 + slopes[2] * (x[b2:] - x[b2])
    y = y + rng.normal(0.0, sigma, n_bins)
    if np.any(y <= 0):
        raise InvalidInputError("linearized level must stay positive")
    nu = 1.0 / np.expm1(y)
    g = unit_mean_weights(omega, nu)
    n = math.fsum(g * nu)
    return BenefitDistribution(omega=omega, nu=nu, g=g, n_total=n, w_total=n, w_bar=1.0), breaks


def to_series(dist: BenefitDistribution, w_bar: float = 1.0) -> BinnedSeries:
    """Benefit table reproducing ``dist`` (states given explicitly)."""
    return BinnedSeries(benefit=dist.omega * w_bar, count=dist.population, states=dist.g)

