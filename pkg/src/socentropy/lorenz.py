"""Lorenz curves, Gini coefficients and the uniform (symmetric) family."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .distribution import BenefitDistribution
from .errors import InvalidInputError, NoSymmetricEquivalentError

GINI_SYMMETRY_LIMIT = 1.0 / 3.0


@dataclass(frozen=True)
class LorenzCurve:
    F: np.ndarray
    L: np.ndarray
    gini: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.F.tolist(), self.L.tolist()))


@dataclass(frozen=True)
class SymmetryVerdict:
    kind: Literal["symmetry-feasible", "asymmetry-required"]
    gini: float
    equivalent_ratio: float | None


def lorenz_points(dist: BenefitDistribution) -> LorenzCurve:
    """Lorenz polyline and its Gini coefficient.

    Bins are accumulated in ascending omega; empty bins add no vertex. The
    Gini follows from trapezoidal integration of the polyline,
    ``Gi = 1 - 2 * integral(L dF)``, exact for piecewise-linear L.
    """
    order = np.argsort(dist.omega, kind="stable")
    pop = dist.population[order]
    ben = pop * dist.omega[order]
    keep = pop > 0
    pop, ben = pop[keep], ben[keep]
    n = math.fsum(pop)
    w = math.fsum(ben)
    if w <= 0:
        raise InvalidInputError("total benefit is zero")
    F = np.concatenate(([0.0], np.cumsum(pop) / n))
    L = np.concatenate(([0.0], np.cumsum(ben) / w))
    F[-1] = L[-1] = 1.0
    L = np.minimum(L, F)
    area = math.fsum(np.diff(F) * (L[1:] + L[:-1]) / 2.0)
    gini = min(max(1.0 - 2.0 * area, 0.0), 1.0)
    for a in (F, L):
        a.setflags(write=False)
    return LorenzCurve(F=F, L=L, gini=gini)


def gini(dist: BenefitDistribution) -> float:
    return lorenz_points(dist).gini


def _check_unit(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise InvalidInputError(f"{name} must lie in [0, 1], got {x}")


def uniform_lorenz(F, R: float):
    """Lorenz curve of a uniform distribution with min/max benefit ratio ``R``."""
    _check_unit("R", R)
    Fa = np.asarray(F, dtype=float)
    if np.any((Fa < 0) | (Fa > 1)):
        raise InvalidInputError("F must lie in [0, 1]")
    out = (2.0 * R * Fa + (1.0 - R) * Fa**2) / (1.0 + R)
    return float(out) if out.ndim == 0 else out


def uniform_gini(R: float) -> float:
    """Gini of the uniform family: ``(1/3) (1 - R) / (1 + R)``."""
    _check_unit("R", R)
    return (1.0 - R) / (3.0 * (1.0 + R))


def equivalent_ratio(gini: float) -> float:
    """Invert :func:`uniform_gini`.

    Raises
    ------
    NoSymmetricEquivalentError
        If ``gini > 1/3``; no member of the uniform family reaches it.
    """
    if gini < 0:
        raise InvalidInputError(f"gini must be nonnegative, got {gini}")
    if gini > GINI_SYMMETRY_LIMIT:
        raise NoSymmetricEquivalentError(
            f"gini {gini:.6g} exceeds 1/3: asymmetric distribution required"
        )
    return max(0.0, (1.0 - 3.0 * gini) / (1.0 + 3.0 * gini))


def classify_symmetry(gini: float) -> SymmetryVerdict:
    if gini > GINI_SYMMETRY_LIMIT:
        return SymmetryVerdict("asymmetry-required", gini, None)
    return SymmetryVerdict("symmetry-feasible", gini, equivalent_ratio(gini))
