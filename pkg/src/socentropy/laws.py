"""Social free energy, occupation laws and the stationarity condition.

The model ties occupations to benefits through the free energy per
individual ``phi(omega, lam) = omega + lam * h_be(omega)``.  Writing
``t = beta * phi + alpha``, noninteracting individuals satisfy
``ln(1 + 1/nu) = t`` and interacting ones
``((1 - theta) / theta) * (nu**-theta - (1 + nu)**-theta) = t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit

from .distribution import BenefitDistribution
from .entropy import THETA_EPS, _out, h_be
from .errors import DivergentOccupationError, DomainError, NoSolutionError


@dataclass(frozen=True)
class FitParameters:
    """Model parameters.

    ``lam`` is the diversity multiplier (``lambda`` is reserved in Python).
    ``mu`` and ``temperature`` are derived and cannot be set.
    """

    alpha: float
    beta: float
    lam: float
    theta: float = 0.0

    @property
    def mu(self) -> float:
        if self.beta == 0:
            return -math.copysign(math.inf, self.alpha)
        return -self.alpha / self.beta

    @property
    def temperature(self) -> float:
        return math.inf if self.beta == 0 else 1.0 / self.beta

    @property
    def extreme_poverty_defined(self) -> bool:
        return self.alpha > 0


@dataclass(frozen=True)
class InteractionRange:
    theta: float
    dimensionality_d: int | None
    verdict: Literal["short-range", "long-range"]
    interactions_per_individual: float | None


def phi_be(omega, lam: float):
    """Social free energy ``omega + lam * h_be(omega)``; zero at ``omega == 0``."""
    return _out(np.asarray(omega, dtype=float) + lam * np.asarray(h_be(omega)))


def phi_mbg(omega, lam: float):
    """Classical free energy ``omega * (1 + lam * ln omega)``."""
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise DomainError("phi_mbg requires omega > 0")
    return _out(w * (1.0 + lam * np.log(w)))


def omega_p_from_lambda(lam: float) -> float:
    """Peak abscissa ``1 / (exp(-1/lam) - 1)`` for ``lam < 0``."""
    if not lam < 0:
        raise DomainError(f"lambda must be negative, got {lam}")
    return 1.0 / math.expm1(-1.0 / lam)


def lambda_from_omega_p(omega_p: float) -> float:
    """Inverse of :func:`omega_p_from_lambda`: ``-1 / ln(1 + 1/omega_p)``."""
    if not omega_p > 0:
        raise DomainError(f"omega_p must be positive, got {omega_p}")
    return -1.0 / math.log1p(1.0 / omega_p)


def omega_p_mbg(lam: float) -> float:
    """Classical poverty-peak location as quoted for the MBG limit, ``exp(1/lam)``.

    Note this is not the stationary point of :func:`phi_mbg` (that one sits
    at ``exp(-1 - 1/lam)``); no consistency between the two is implied.
    """
    return math.exp(1.0 / lam)


def _level(omega, params: FitParameters) -> np.ndarray:
    return params.beta * np.asarray(phi_be(omega, params.lam)) + params.alpha


def nu_be(omega, params: FitParameters):
    """Bose-Einstein occupation ``1 / (exp(t) - 1)``.

    Raises
    ------
    DivergentOccupationError
        Where ``t = beta * phi + alpha <= 0``.
    """
    t = _level(omega, params)
    if np.any(~(t > 0)):
        raise DivergentOccupationError("beta*phi + alpha <= 0: occupation diverges")
    return _out(1.0 / np.expm1(t))


def nu_fd(omega, params: FitParameters):
    """Fermi-Dirac occupation ``1 / (exp(t) + 1)``, always in (0, 1)."""
    return _out(expit(-_level(omega, params)))


def nu_mbg(omega, params: FitParameters):
    """Classical occupation ``exp(-(beta * phi_mbg + alpha))``."""
    t = params.beta * np.asarray(phi_mbg(omega, params.lam)) + params.alpha
    return _out(np.exp(-t))


def stationarity_lhs(nu, theta: float = 0.0):
    """Marginal entropy production ``d s_theta / d nu``.

    ``ln(1 + 1/nu)`` at ``theta == 0``; otherwise
    ``((1 - theta)/theta) * (nu**-theta - (1 + nu)**-theta)``, evaluated as
    ``(1 - theta) * nu**-theta * qlog(1 + 1/nu, theta)`` to avoid
    cancellation. Strictly decreasing in ``nu`` for ``-1 < theta < 1``.
    """
    v = np.asarray(nu, dtype=float)
    if np.any(~(v > 0)):
        raise DomainError("stationarity_lhs requires nu > 0")
    inv = np.log1p(1.0 / v)
    if abs(theta) < THETA_EPS:
        return _out(inv)
    return _out((1.0 - theta) * np.exp(-theta * np.log(v)) * (-np.expm1(-theta * inv)) / theta)


def stationarity_sup(theta: float) -> float:
    """Supremum of :func:`stationarity_lhs` over ``nu > 0``.

    Infinite for ``theta >= 0``; ``(1 - theta) / -theta`` for negative theta.
    """
    return math.inf if theta >= 0 else (1.0 - theta) / -theta


def _solve_one(t: float, theta: float) -> float:
    if not t > 0:
        raise DivergentOccupationError(f"level t={t} <= 0: occupation diverges")
    if theta == 0:
        return 1.0 / math.expm1(t)
    if t >= stationarity_sup(theta):
        raise NoSolutionError(
            f"level t={t} is beyond the range of the stationarity condition at theta={theta}"
        )

    # root in u = ln(nu); the theta = 0 solution seeds the bracket
    def f(u):
        return float(stationarity_lhs(math.exp(u), theta)) - t

    u0 = -math.log(math.expm1(t)) if t < 700 else -t
    lo = hi = u0
    step = 1.0
    while f(lo) <= 0:
        lo -= step
        step *= 2
        if lo < -700:
            raise NoSolutionError(f"level t={t} not bracketable at theta={theta}")
    step = 1.0
    while f(hi) >= 0:
        hi += step
        step *= 2
        if hi > 700:
            raise NoSolutionError(f"level t={t} not bracketable at theta={theta}")
    u = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return math.exp(u)


def solve_stationarity(t, theta: float):
    """Occupation ``nu > 0`` with ``stationarity_lhs(nu, theta) == t``."""
    ta = np.asarray(t, dtype=float)
    if ta.ndim == 0:
        return _solve_one(float(ta), theta)
    return np.array([_solve_one(float(x), theta) for x in ta.ravel()]).reshape(ta.shape)


def nu_theta(omega, params: FitParameters):
    """Interacting occupation law: numerical inverse of the stationarity condition."""
    return solve_stationarity(_level(omega, params), params.theta)


def extreme_poverty_fraction(alpha: float) -> float:
    """Model occupation at ``omega == 0``: ``1 / (exp(alpha) - 1)``."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    with np.errstate(over="ignore"):
        return float(1.0 / np.expm1(alpha))


def temperature_check(dist: BenefitDistribution, lam: float) -> float:
    """Population mean of ``phi_be``; compare with the regressed ``1/beta``."""
    return math.fsum(dist.population * phi_be(dist.omega, lam)) / dist.n_total


def classify_interaction(theta: float, d: int | None = None) -> InteractionRange:
    if not theta > -1:
        raise DomainError(f"theta must exceed -1, got {theta}")
    if theta > 0:
        per = 1.0 / (theta * d) if d else None
        return InteractionRange(theta, d, "short-range", per)
    return InteractionRange(theta, d, "long-range", None)
