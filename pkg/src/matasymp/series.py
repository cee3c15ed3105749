"""Truncated formal power series on coefficient arrays.

A series is a 1-D complex array ``c`` standing for ``sum_k c[k] x**k``,
truncated at a fixed order. All operations take an explicit ``n`` (number
of coefficients kept) so truncation never depends on input lengths.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 16


def _fit(a, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    a = np.asarray(a, dtype=complex).ravel()
    m = min(n, a.size)
    out[:m] = a[:m]
    return out


def mul(a, b, n: int) -> np.ndarray:
    a, b = _fit(a, n), _fit(b, n)
    return np.convolve(a, b)[:n]


def derivative(a, n: int) -> np.ndarray:
    """Derivative, keeping ``n`` coefficients (input needs ``n + 1``)."""
    a = _fit(a, n + 1)
    return a[1:] * np.arange(1, n + 1)


def power(a, p: complex, n: int) -> np.ndarray:
    """``a(x)**p`` for ``a[0] != 0`` via the J.C.P. Miller recurrence.

    Uses the principal branch for ``a[0]**p``.
    """
    a = _fit(a, n)
    if a[0] == 0:
        raise ValueError("power needs a nonzero constant term")
    f = np.zeros(n, dtype=complex)
    f[0] = a[0] ** p
    for k in range(1, n):
        j = np.arange(1, k + 1)
        f[k] = np.sum(((p + 1) * j - k) * a[j] * f[k - j]) / (k * a[0])
    return f


def compose(a, b, n: int) -> np.ndarray:
    """``a(b(x))`` for ``b[0] == 0`` (Horner in the series ring)."""
    a, b = _fit(a, n), _fit(b, n)
    if b[0] != 0:
        raise ValueError("inner series must have zero constant term")
    out = np.zeros(n, dtype=complex)
    for coef in a[::-1]:
        out = mul(out, b, n)
        out[0] += coef
    return out


def revert(b, n: int) -> np.ndarray:
    """Compositional inverse of ``y = b(x)`` with ``b[0] == 0``, ``b[1] != 0``.

    Solves order by order: once ``c[1..k-1]`` are fixed, the ``x**k``
    coefficient of ``b(c(y))`` is linear in ``c[k]`` with slope ``b[1]``.
    """
    b = _fit(b, n)
    if n < 2:
        return np.zeros(n, dtype=complex)
    if b[0] != 0 or b[1] == 0:
        raise ValueError("reversion needs b[0] == 0 and b[1] != 0")
    c = np.zeros(n, dtype=complex)
    c[1] = 1.0 / b[1]
    for k in range(2, n):
        residual = compose(b, c, k + 1)[k]
        c[k] = -residual / b[1]
    return c
