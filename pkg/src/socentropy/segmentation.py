"""Piecewise-linear least squares by dynamic programming.

Given points ordered along some external axis (here: bins in increasing
benefit), find contiguous segments each fitted by its own straight line,
minimizing the total squared residual. The number of segments is either
fixed or chosen by BIC.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError

# residual floor relative to the spread of y; keeps BIC finite on exact lines
_SSE_FLOOR_REL = 1e-7


@dataclass(frozen=True)
class Segmentation:
    starts: tuple[int, ...]  # first point of each segment; segment k ends at starts[k+1]
    n_points: int
    sse: float
    bic: dict[int, float]

    @property
    def n_segments(self) -> int:
        return len(self.starts)

    def bounds(self) -> list[tuple[int, int]]:
        """Half-open ``(start, stop)`` point ranges."""
        ends = list(self.starts[1:]) + [self.n_points]
        return list(zip(self.starts, ends))


def _cost_matrix(x: np.ndarray, y: np.ndarray, min_size: int) -> np.ndarray:
    # cost[i, j] = SSE of the OLS line through points i..j-1
    n = len(x)
    x = x - x.mean()
    y = y - y.mean()
    ps = [np.concatenate(([0.0], np.cumsum(a))) for a in (np.ones(n), x, y, x * x, x * y, y * y)]
    i = np.arange(n + 1)[:, None]
    j = np.arange(n + 1)[None, :]
    cnt, sx, sy, sxx, sxy, syy = (p[j] - p[i] for p in ps)
    with np.errstate(divide="ignore", invalid="ignore"):
        cxx = sxx - sx * sx / cnt
        cxy = sxy - sx * sy / cnt
        cyy = syy - sy * sy / cnt
        sse = np.where(cxx > 1e-300, cyy - cxy * cxy / cxx, cyy)
    sse = np.maximum(sse, 0.0)
    sse[(j - i) < min_size] = np.inf
    return sse


def _partition(cost: np.ndarray, n: int, k: int) -> tuple[float, list[int]]:
    best = np.full((k + 1, n + 1), np.inf)
    arg = np.zeros((k + 1, n + 1), dtype=int)
    best[0, 0] = 0.0
    for s in range(1, k + 1):
        # total[i, j] = best[s-1, i] + cost[i, j]; argmin keeps the first minimum
        total = best[s - 1][:, None] + cost
        arg[s] = np.argmin(total, axis=0)
        best[s] = total[arg[s], np.arange(n + 1)]
    starts = []
    j = n
    for s in range(k, 0, -1):
        i = int(arg[s, j])
        starts.append(i)
        j = i
    return float(best[k, n]), starts[::-1]


def segment_xy(
    x,
    y,
    max_segments: int = 6,
    min_size: int = 4,
    criterion: str = "bic",
) -> Segmentation:
    """Optimal contiguous segmentation of ``(x, y)`` into straight lines.

    With ``criterion="bic"`` every segment count from 1 to ``max_segments``
    is solved exactly and the one minimizing
    ``n ln(SSE/n) + (3k - 1) ln n`` is kept (2 line parameters per segment
    plus one per breakpoint); ties go to fewer segments. With
    ``criterion="fixed-k"`` exactly ``max_segments`` segments are used.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    if criterion not in ("bic", "fixed-k"):
        raise ValueError(f"unknown segment criterion {criterion!r}")
    k_max = min(max_segments, n // min_size)
    if k_max < 1 or (criterion == "fixed-k" and max_segments * min_size > n):
        raise InsufficientDataError(
            f"{n} points cannot hold {max_segments if criterion == 'fixed-k' else 1} "
            f"segment(s) of at least {min_size}"
        )
    cost = _cost_matrix(x, y, min_size)
    floor = n * (_SSE_FLOOR_REL * max(float(np.std(y)), 1e-300)) ** 2
    ks = [max_segments] if criterion == "fixed-k" else range(1, k_max + 1)
    bic: dict[int, float] = {}
    best = None
    for k in ks:
        sse, starts = _partition(cost, n, k)
        bic[k] = n * math.log(max(sse, floor) / n) + (3 * k - 1) * math.log(n)
        if best is None or bic[k] < best[0]:
            best = (bic[k], sse, starts)
    _, sse, starts = best
    return Segmentation(starts=tuple(starts), n_points=n, sse=sse, bic=bic)
