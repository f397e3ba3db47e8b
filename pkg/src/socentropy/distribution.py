"""Binned benefit data: ingestion, normalization, smoothing and peak location.

A dataset is a table of benefit levels ``w_k`` (dollars, kWh, years...),
the number of individuals ``N_k`` at each level and, optionally, the number
of states ``G_k`` those individuals share. Normalizing divides benefits by
the population mean, giving dimensionless ``omega_k = w_k / w_bar`` and
per-state occupations ``nu_k = N_k / G_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidInputError

_MASS_RTOL = 1e-9


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class BinnedSeries:
    """Raw binned table.

    ``states`` may be ``None``; then each bin with a positive count gets
    ``G_k = count_k`` (so ``nu_k = 1``) and empty bins get a single state.
    """

    benefit: np.ndarray
    count: np.ndarray
    states: np.ndarray | None = None
    period: str = "1 year"

    def __post_init__(self):
        object.__setattr__(self, "benefit", _frozen(self.benefit))
        object.__setattr__(self, "count", _frozen(self.count))
        if self.states is not None:
            object.__setattr__(self, "states", _frozen(self.states))

    def __len__(self) -> int:
        return len(self.benefit)

    def check(self) -> None:
        """Raise :class:`InvalidInputError` unless the series is usable."""
        b, c = self.benefit, self.count
        if b.ndim != 1 or b.shape != c.shape:
            raise InvalidInputError("benefit and count must be 1-D of equal length")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise InvalidInputError("benefit and count must be finite")
        if np.any(b < 0):
            raise InvalidInputError("negative benefit")
        if np.any(c < 0):
            raise InvalidInputError("negative count")
        if c.sum() <= 0:
            raise InvalidInputError("total count is zero")
        if np.any(np.diff(b) <= 0):
            raise InvalidInputError("benefits must be strictly increasing")
        if self.states is not None:
            s = self.states
            if s.shape != b.shape:
                raise InvalidInputError("states column length mismatch")
            if np.any(s <= 0) or not np.all(np.isfinite(s)):
                raise InvalidInputError("states must be positive")


@dataclass(frozen=True)
class BenefitDistribution:
    """Normalized distribution over ``K`` groups of states.

    Attributes
    ----------
    omega : ndarray
        Normalized benefits, strictly increasing.
    nu : ndarray
        Occupation numbers ``N_k / G_k``.
    g : ndarray
        State counts ``G_k``.
    n_total : float
        Number of individuals ``N = sum(g * nu)``.
    w_total : float
        Total benefit ``W`` in benefit units.
    w_bar : float
        Mean benefit ``W / N``.
    """

    omega: np.ndarray
    nu: np.ndarray
    g: np.ndarray
    n_total: float
    w_total: float
    w_bar: float

    def __post_init__(self):
        for name in ("omega", "nu", "g"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        if not (self.omega.shape == self.nu.shape == self.g.shape) or self.omega.ndim != 1:
            raise InvalidInputError("omega, nu and g must be 1-D of equal length")

    def __len__(self) -> int:
        return len(self.omega)

    @property
    def population(self) -> np.ndarray:
        """Individuals per bin, ``G_k * nu_k``."""
        return self.g * self.nu

    @property
    def benefit(self) -> np.ndarray:
        """Bin benefits back in benefit units."""
        return self.omega * self.w_bar

    def check(self, mean_omega: bool = True) -> None:
        """Validate the distribution invariants.

        ``mean_omega=False`` skips the unit-mean check, which smoothing is
        allowed to break (it moves mass between bins at fixed omega).
        """
        if np.any(self.omega < 0) or np.any(np.diff(self.omega) <= 0):
            raise InvalidInputError("omega must be nonnegative and strictly increasing")
        if np.any(self.nu < 0) or np.any(self.g <= 0):
            raise InvalidInputError("nu must be >= 0 and g > 0")
        pop = self.population
        n = math.fsum(pop)
        if abs(n - self.n_total) > _MASS_RTOL * self.n_total:
            raise InvalidInputError("sum(g*nu) != N")
        if mean_omega:
            m = math.fsum(pop * self.omega)
            if abs(m - self.n_total) > _MASS_RTOL * self.n_total:
                raise InvalidInputError("population-weighted mean of omega != 1")


@dataclass(frozen=True)
class SmoothingConfig:
    window: int = 5
    passes: int = 1

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise InvalidInputError(f"smoothing window must be odd and positive, got {self.window}")
        if self.passes < 1:
            raise InvalidInputError(f"smoothing passes must be positive, got {self.passes}")


@dataclass(frozen=True)
class PeakInfo:
    omega_p: float
    index: int
    mode: Literal["detected", "pinned-to-minimum"] = "detected"


def normalize(series: BinnedSeries) -> BenefitDistribution:
    """Divide benefits by the population mean and form occupation numbers.

    Examples
    --------
    >>> d = normalize(BinnedSeries([1, 6], [3, 1]))
    >>> d.w_bar, d.omega.tolist()
    (2.25, [0.4444444444444444, 2.6666666666666665])
    """
    series.check()
    count = series.count
    if series.states is None:
        g = np.where(count > 0, count, 1.0)
    else:
        g = series.states
    n = math.fsum(count)
    w = math.fsum(series.benefit * count)
    if w <= 0:
        raise InvalidInputError("total benefit is zero")
    w_bar = w / n
    return BenefitDistribution(
        omega=series.benefit / w_bar,
        nu=count / g,
        g=g,
        n_total=n,
        w_total=w,
        w_bar=w_bar,
    )


def _moving_average(v: np.ndarray, window: int) -> np.ndarray:
    # centered window, truncated at the edges; direct sums (no cumsum
    # differencing) so small tail values keep their relative precision
    kernel = np.ones(window)
    sums = np.convolve(v, kernel, mode="same")
    widths = np.convolve(np.ones_like(v), kernel, mode="same")
    return sums / widths


def smooth(dist: BenefitDistribution, cfg: SmoothingConfig = SmoothingConfig()) -> BenefitDistribution:
    """Moving-average smoothing of ``nu`` that conserves the population.

    ``omega`` and ``g`` are untouched; after each pass ``nu`` is rescaled so
    that ``sum(g * nu) == N``.
    """
    if cfg.window > len(dist):
        raise InvalidInputError(
            f"smoothing window {cfg.window} exceeds bin count {len(dist)}"
        )
    if cfg.window == 1:
        return dist
    nu = np.array(dist.nu)
    for _ in range(cfg.passes):
        nu = _moving_average(nu, cfg.window)
        nu *= dist.n_total / math.fsum(dist.g * nu)
    return BenefitDistribution(
        omega=dist.omega,
        nu=nu,
        g=dist.g,
        n_total=dist.n_total,
        w_total=dist.w_total,
        w_bar=dist.w_bar,
    )


def detect_peak(dist: BenefitDistribution, pin_to_min: bool = False) -> PeakInfo:
    """Locate the occupation maximum; ties go to the smallest omega.

    With ``pin_to_min`` the first bin is returned whatever the data, for
    datasets whose true peak lies below the observed range.
    """
    if pin_to_min:
        return PeakInfo(float(dist.omega[0]), 0, "pinned-to-minimum")
    i = int(np.argmax(dist.nu))
    return PeakInfo(float(dist.omega[i]), i, "detected")


def cpf(dist: BenefitDistribution, omega: float) -> float:
    """Cumulative population fraction ``Pr(w <= omega)``."""
    mask = dist.omega <= omega
    return min(1.0, math.fsum(dist.population[mask]) / dist.n_total)
