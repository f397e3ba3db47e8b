"""Entropy functionals.

Quasi-logarithms, Bose-Einstein group entropies for benefits (``h_be``) and
for individuals (``s_be``), their theta-deformed and classical (MBG)
counterparts, and the redundancy-based inequality index with the welfare
it implies.

Scalar functions accept floats or arrays and return the same kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .distribution import BenefitDistribution
from .errors import DomainError

LN2 = math.log(2.0)
# below this |theta| the deformation is beyond double precision, while
# theta * ln(x) would fall into subnormals; use the logarithmic branch
THETA_EPS = 1e-100


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def _nonneg(name: str, x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if np.any(a < 0) or np.any(np.isnan(a)):
        raise DomainError(f"{name} must be >= 0")
    return a


def qlog(x, theta: float = 0.0):
    """Quasi-logarithm ``(1 - x**-theta) / theta``; ``ln x`` at ``theta == 0``.

    >>> qlog(2.0, 1.0)
    0.5
    """
    a = np.asarray(x, dtype=float)
    if np.any(~(a > 0)):
        raise DomainError("qlog requires x > 0")
    ln = np.log(a)
    if abs(theta) < THETA_EPS:
        return _out(ln)
    return _out(-np.expm1(-theta * ln) / theta)


def _be_form(x: np.ndarray) -> np.ndarray:
    # (1+x) ln(1+x) - x ln x rearranged as ln(1+x) + x ln(1 + 1/x), which
    # avoids cancellation for both tiny and huge x; 0 at x == 0
    pos = x > 0
    safe = np.where(pos, x, 1.0)
    return np.where(pos, np.log1p(safe) + safe * np.log1p(1.0 / safe), 0.0)


def h_be(omega):
    """B-E diversity per benefit state: ``(1+w) ln(1+w) - w ln w``."""
    return _out(_be_form(_nonneg("omega", omega)))


def s_be(nu):
    """B-E entropy production per state; same form as :func:`h_be`."""
    return _out(_be_form(_nonneg("nu", nu)))


def s_theta(nu, theta: float):
    """Interaction-deformed entropy production.

    ``(1+nu) qlog(1+nu) - nu qlog(nu)``; the ``nu -> 0`` limit is 0 and
    ``theta == 0`` is exactly :func:`s_be`.
    """
    if theta == 0:
        return s_be(nu)
    v = _nonneg("nu", nu)
    pos = v > 0
    safe = np.where(pos, v, 1.0)
    val = (1.0 + v) * qlog(1.0 + v, theta) - np.where(pos, safe * np.asarray(qlog(safe, theta)), 0.0)
    return _out(val)


def h_mbg(omega):
    """Classical diversity term ``w (1 - ln w)``, 0 at ``w == 0``."""
    w = _nonneg("omega", omega)
    return _out(w - xlogy(w, w))


def s_mbg(nu):
    """Classical entropy production per state, ``nu (1 - ln nu)``."""
    v = _nonneg("nu", nu)
    return _out(v - xlogy(v, v))


def big_H_be(dist: BenefitDistribution) -> float:
    """Diversity entropy ``sum_k G_k nu_k h_be(omega_k)``."""
    return math.fsum(dist.population * h_be(dist.omega))


def big_S_be(dist: BenefitDistribution) -> float:
    """Entropy production ``sum_k G_k s_be(nu_k)``."""
    return math.fsum(dist.g * s_be(dist.nu))


def big_H_mbg(dist: BenefitDistribution) -> float:
    return math.fsum(dist.population * h_mbg(dist.omega))


def big_S_mbg(dist: BenefitDistribution) -> float:
    return math.fsum(dist.g * s_mbg(dist.nu))


@dataclass(frozen=True)
class InequalityReport:
    H: float
    H_max: float
    index_I: float
    welfare_U: float

    @property
    def redundancy(self) -> float:
        return self.index_I


def inequality_index(dist: BenefitDistribution) -> InequalityReport:
    """Redundancy ``I = 1 - H / H_max`` and welfare ``U = w_bar (1 - I)``.

    ``H_max`` is the diversity entropy of the same population with every
    benefit equal to the mean, i.e. ``N * 2 ln 2``.
    """
    H = big_H_be(dist)
    # same arithmetic path as H so that I == 0 exactly at equality
    H_max = math.fsum(dist.population * h_be(np.ones_like(dist.omega)))
    index = min(max(1.0 - H / H_max, 0.0), 1.0)
    return InequalityReport(H=H, H_max=H_max, index_I=index, welfare_U=dist.w_bar * (1.0 - index))
