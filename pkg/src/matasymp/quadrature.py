"""Adaptive quadrature for matrix-valued integrands.

Thin layer over :func:`scipy.integrate.quad_vec` (Gauss-Kronrod panels with
embedded error estimates, globally adaptive, max-norm acceptance). What it
adds is the panel layout: geometric breakpoints toward an endpoint where the
integrand is concentrated or singular, and explicit truncation of
semi-infinite ranges.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.integrate import quad_vec

from .errors import NotConvergent

DEFAULT_EPSABS = 1e-12
DEFAULT_EPSREL = 1e-12
TAIL_LOG_EPS = np.log(1e-14)


def geometric_points(a: float, b: float, levels: int = 40, toward: str = "a") -> list[float]:
    """Breakpoints ``a + (b - a) * 2**-k``, clustered at ``a`` (or ``b``)."""
    width = b - a
    if toward == "a":
        pts = [a + width * 2.0 ** -k for k in range(1, levels + 1)]
    else:
        pts = [b - width * 2.0 ** -k for k in range(1, levels + 1)]
    return sorted(p for p in pts if a < p < b)


def integrate_matrix(
    fun: Callable[[float], np.ndarray],
    a: float,
    b: float,
    *,
    points: list[float] | None = None,
    epsabs: float = DEFAULT_EPSABS,
    epsrel: float = DEFAULT_EPSREL,
    limit: int = 20000,
) -> np.ndarray:
    """Integrate a matrix-valued ``fun`` over the finite interval ``[a, b]``."""
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValueError("integrate_matrix needs a finite interval; truncate tails first")
    if b <= a:
        raise ValueError("need a < b")
    res, err, info = quad_vec(
        fun, a, b, epsabs=epsabs, epsrel=epsrel, points=points, limit=limit,
        full_output=True,
    )
    if not np.all(np.isfinite(res)):
        raise NotConvergent("quadrature produced non-finite values")
    return np.asarray(res)


def decay_cutoff(rate: float, *, log_scale: float = 0.0, extra: float = 0.0) -> float:
    """Smallest T with ``exp(log_scale - rate*T) < 1e-14`` (plus ``extra`` slack).

    ``rate`` is the exponential decay rate of the integrand envelope.
    """
    if rate <= 0:
        raise NotConvergent("integrand envelope does not decay")
    return (log_scale - TAIL_LOG_EPS) / rate + extra
