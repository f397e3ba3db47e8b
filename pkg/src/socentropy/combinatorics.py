"""Exact configuration counts for classical, Fermi-Dirac and Bose-Einstein statistics.

All arithmetic is on Python integers. The brute-force enumerator is an
independent check of the closed forms at desk scale.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import ExclusionViolationError, InvalidInputError, TooLargeError

Statistics = Literal["mbg", "fd", "be"]
STATISTICS = ("mbg", "fd", "be")

MAX_COUNT_SIZE = 60  # cap on entities + states for closed forms
MAX_ENUMERATE = 8


@dataclass(frozen=True)
class ConfigurationCount:
    statistics: Statistics
    entities: int
    states: int
    value: int


def _check(n: int, g: int) -> None:
    if not (isinstance(n, int) and isinstance(g, int)):
        raise InvalidInputError("entities and states must be integers")
    if n < 0 or g < 0:
        raise InvalidInputError("entities and states must be nonnegative")
    if n + g > MAX_COUNT_SIZE:
        raise TooLargeError(f"entities + states = {n + g} exceeds cap {MAX_COUNT_SIZE}")


def count_mbg(n: int, k: int) -> int:
    """Labeled assignments of ``n`` entities to ``k`` states, ``k**n``."""
    _check(n, k)
    if k == 0 and n > 0:
        raise InvalidInputError("no states to populate")
    return k**n


def count_fd(n: int, g: int) -> int:
    """At most one entity per state: ``C(g, n)``."""
    _check(n, g)
    if n > g:
        raise ExclusionViolationError(f"{n} entities cannot occupy {g} exclusive states")
    return math.comb(g, n)


def count_be_individuals(n: int, g: int) -> int:
    """Indistinguishable entities, unlimited occupancy: ``C(n + g - 1, n)``."""
    _check(n, g)
    if g < 1:
        raise InvalidInputError("need at least one state")
    return math.comb(n + g - 1, n)


def count_be_resources(w: int, c: int) -> int:
    """Same count as :func:`count_be_individuals` for ``w`` benefit units on ``c`` states."""
    return count_be_individuals(w, c)


def count(n: int, g: int, statistics: Statistics) -> ConfigurationCount:
    fn = {"mbg": count_mbg, "fd": count_fd, "be": count_be_individuals}
    try:
        value = fn[statistics](n, g)
    except KeyError:
        raise InvalidInputError(f"unknown statistics {statistics!r}") from None
    return ConfigurationCount(statistics, n, g, value)


def enumerate_configs(n: int, g: int, statistics: Statistics) -> int:
    """Count configurations by listing them.

    Every labeled assignment of entities to states is generated. Classical
    statistics counts them all; Bose-Einstein identifies assignments that
    differ only by exchanging entities, i.e. keeps one sorted occupation
    vector per class; Fermi-Dirac additionally drops classes with a doubly
    occupied state.
    """
    if statistics not in STATISTICS:
        raise InvalidInputError(f"unknown statistics {statistics!r}")
    if n < 0 or g < 0:
        raise InvalidInputError("entities and states must be nonnegative")
    if n > MAX_ENUMERATE or g > MAX_ENUMERATE:
        raise TooLargeError(f"enumeration limited to n, g <= {MAX_ENUMERATE}")
    assignments = itertools.product(range(g), repeat=n)
    if statistics == "mbg":
        return sum(1 for _ in assignments)
    classes = {tuple(sorted(a)) for a in assignments}
    if statistics == "be":
        return len(classes)
    return sum(1 for c in classes if len(set(c)) == len(c))


def stirling_gap(n: int, g: int, statistics: Statistics = "be") -> float:
    """Relative error of the large-``g`` form ``C(n+g, n)`` against ``C(n+g-1, n)``.

    Only Bose-Einstein counts have this approximation. Not subject to the
    size cap, since the point is to probe large ``g``.
    """
    if statistics != "be":
        raise InvalidInputError("the large-state approximation applies to B-E counts only")
    if n < 0 or g < 1:
        raise InvalidInputError("need n >= 0 and g >= 1")
    exact = math.comb(n + g - 1, n)
    approx = math.comb(n + g, n)
    return float(Fraction(abs(approx - exact), exact))
