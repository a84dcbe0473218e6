"""Dimension of the repeller from finite-depth interval covers.

The headline estimator solves the finite-depth pressure equation
sum_w |I_w|^s = 1 by bisection (the sum is strictly decreasing in s, so
the root is unique and bracketed by s = 0 and s = 1). A box-counting
cross-check fits the slope of log N against log 1/eps over depth-indexed
covers. Both sit inside the a-priori bracket obtained from the certified
slope range 3 e^(-B1 T) <= F' <= 3 e^(B1 T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .cookie import CookieMap
from .errors import BoundViolationError, DepthCapError, DomainError
from .symbolic import IntervalSet, _concat, interval_table

LN2 = math.log(2.0)
DIMENSION_DEPTH_CAP = 16


@dataclass(frozen=True)
class DimensionEstimate:
    depth: int
    method: str
    value: float
    lower: float
    upper: float


def certified_bracket(constants) -> tuple[float, float]:
    """Dimension bounds from the certified slope range of the map."""
    lo = LN2 / math.log(3.0 * math.exp(constants.B1 * constants.T))
    hi = LN2 / math.log(3.0 * math.exp(-constants.B1 * constants.T))
    return lo, hi


def pressure_sum(log_sizes: np.ndarray, s: float) -> float:
    """log of sum_w |I_w|^s, stable at any depth."""
    return float(logsumexp(s * log_sizes))


def pressure_root(log_sizes: np.ndarray, tol: float = 1e-10) -> float:
    """Unique root of sum_w |I_w|^s = 1 by bisection on [0, 1]."""
    lo, hi = 0.0, 1.0
    if pressure_sum(log_sizes, lo) <= 0.0 or pressure_sum(log_sizes, hi) >= 0.0:
        raise BoundViolationError(
            "pressure root not bracketed by [0,1]; interval sizes are wrong")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pressure_sum(log_sizes, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bowen_dimension(cmap: CookieMap, depth: int, tol: float = 1e-10) -> float:
    table = interval_table(cmap, depth)
    return pressure_root(table.log_sizes(), tol=tol)


def box_dimension(cmap: CookieMap, depth: int) -> float:
    """Least-squares slope of log N(eps) vs log(1/eps) over depth covers.

    The depth-j cover uses all 2^j basic intervals at mesh eps_j = their
    largest width; convergence is only first order in depth, so this is a
    cross-check, not the headline number.
    """
    table = IntervalSet.root()
    log_n = []
    log_inv_eps = []
    for j in range(1, depth + 1):
        table = _concat(table.pull_back(cmap, 0), table.pull_back(cmap, 1))
        log_n.append(j * LN2)
        log_inv_eps.append(-float(table.log_sizes().max()))
    slope = np.polyfit(np.array(log_inv_eps), np.array(log_n), 1)[0]
    return float(slope)


def dimension_estimate(cmap: CookieMap, depth: int,
                       method: str = "bowen") -> DimensionEstimate:
    """Finite-depth dimension of the repeller, with its certified bracket."""
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    if depth > DIMENSION_DEPTH_CAP:
        raise DepthCapError(
            f"dimension estimate capped at depth {DIMENSION_DEPTH_CAP}, got {depth}")
    if method == "bowen":
        value = bowen_dimension(cmap, depth)
    elif method == "box":
        value = box_dimension(cmap, depth)
    else:
        raise DomainError(f"method must be 'bowen' or 'box', got {method!r}")
    lo, hi = certified_bracket(cmap.constants)
    return DimensionEstimate(depth=depth, method=method, value=value,
                             lower=lo, upper=hi)
