"""Golden-section search helpers."""

from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0        # 1/phi
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0     # 1/phi^2


def golden_max(f: Callable[[float], float], a: float, b: float,
               tol: float = 1e-12) -> tuple[float, float]:
    """Locate a local maximum of f on [a, b].

    Returns (x, f(x)) for the best point seen. Assumes f is unimodal on the
    bracket; on a flat or multimodal bracket it still returns the best of
    the evaluated points, which is all the callers need.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQ * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
    return (c, yc) if yc > yd else (d, yd)


def golden_min(f: Callable[[float], float], a: float, b: float,
               tol: float = 1e-12) -> tuple[float, float]:
    """Locate a local minimum of f on [a, b]; see golden_max."""
    x, y = golden_max(lambda t: -f(t), a, b, tol)
    return x, -y
