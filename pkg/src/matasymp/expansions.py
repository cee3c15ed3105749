"""Matrix Watson's lemma and Laplace's method.

Both produce an :class:`ExpansionTermList`, a finite list of
``coefficient * A**(-exponent)`` terms behind an optional left prefactor
``exp(-h(a) A)``. :func:`evaluate_expansion` turns a term list into a
matrix for a concrete ``A``.

Laplace coefficients come from series reversion: with ``u = x - a`` and
``v = (h(x) - h(a))**(1/mu)`` we invert ``v = u G(u)`` and re-expand
``phi(x) dx/dt`` in powers of ``v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import gamma as gamma_fn

from . import matcore, series
from .errors import InsufficientSeries, MatasympError, NotSectorial, OracleFailure


MAX_TERMS = series.MAX_ORDER


class InvalidProblem(MatasympError):
    """A Laplace problem fails a sampled hypothesis (h must exceed h(a))."""


# ---------------------------------------------------------------------------
# Data types.

@dataclass
class WatsonInput:
    """``f(t) = sum_{n>=1} a_n t**(n/r - 1)`` near 0, ``|f| <= M0 exp(b t)`` far out."""

    coefficients: Sequence[complex]
    scale: float
    radius: float
    growth_m0: float
    growth_b: float = 0.0
    evaluator: Callable[[float], complex] | None = field(default=None, repr=False)
    evaluator_id: str | None = None

    def __post_init__(self):
        self.coefficients = [complex(c) for c in self.coefficients]
        if not all(np.isfinite(c) for c in self.coefficients):
            raise ValueError("coefficients must be finite")
        if self.scale <= 0 or self.radius <= 0 or self.growth_m0 <= 0:
            raise ValueError("scale, radius and growth_m0 must be positive")
        if self.growth_b < 0:
            raise ValueError("growth_b must be >= 0")

    @property
    def endpoint_exponent(self) -> float:
        """Power of ``t`` in the leading term, ``1/r - 1``."""
        return 1.0 / self.scale - 1.0

    def to_json(self) -> dict:
        return {
            "kind": "watson",
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "scale": self.scale,
            "radius": self.radius,
            "growth_m0": self.growth_m0,
            "growth_b": self.growth_b,
            "evaluator": self.evaluator_id,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "WatsonInput":
        ev_id = doc.get("evaluator")
        return cls(
            coefficients=[complex(re, im) for re, im in doc["coefficients"]],
            scale=float(doc["scale"]),
            radius=float(doc["radius"]),
            growth_m0=float(doc["growth_m0"]),
            growth_b=float(doc.get("growth_b", 0.0)),
            evaluator=SCALAR_FUNCTIONS[ev_id] if ev_id else None,
            evaluator_id=ev_id,
        )


@dataclass
class LaplaceProblem:
    """Data for ``int_a^b phi(x) exp(-h(x) A) dx``.

    ``h(x) ~ h(a) + sum_s a_s u**(s + mu)`` and ``phi(x) ~ sum_s b_s u**(s + lam - 1)``
    with ``u = x - a``.
    """

    h_coefficients: Sequence[float]
    h_order: float
    h_at_a: float
    phi_coefficients: Sequence[complex]
    phi_order: float
    interval: tuple[float, float] = (0.0, math.inf)
    h: Callable[[float], float] | None = field(default=None, repr=False)
    phi: Callable[[float], complex] | None = field(default=None, repr=False)
    evaluator_id: str | None = None

    def __post_init__(self):
        self.h_coefficients = [float(c) for c in self.h_coefficients]
        self.phi_coefficients = [complex(c) for c in self.phi_coefficients]
        if not self.h_coefficients or self.h_coefficients[0] <= 0:
            raise ValueError("leading h coefficient a_0 must be positive")
        if self.h_order <= 0 or self.phi_order <= 0:
            raise ValueError("h_order and phi_order must be positive")
        a, b = self.interval
        if not (math.isfinite(a) and b > a):
            raise ValueError("interval needs finite a and b > a")

    def to_json(self) -> dict:
        return {
            "kind": "laplace",
            "h_coefficients": list(self.h_coefficients),
            "h_order": self.h_order,
            "h_at_a": self.h_at_a,
            "phi_coefficients": [[c.real, c.imag] for c in self.phi_coefficients],
            "phi_order": self.phi_order,
            "interval": [self.interval[0], "inf" if math.isinf(self.interval[1]) else self.interval[1]],
            "evaluator": self.evaluator_id,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LaplaceProblem":
        ev_id = doc.get("evaluator")
        h, phi = LAPLACE_FUNCTIONS[ev_id] if ev_id else (None, None)
        a, b = doc.get("interval", [0.0, "inf"])
        return cls(
            h_coefficients=doc["h_coefficients"],
            h_order=float(doc["h_order"]),
            h_at_a=float(doc["h_at_a"]),
            phi_coefficients=[complex(re, im) for re, im in doc["phi_coefficients"]],
            phi_order=float(doc["phi_order"]),
            interval=(float(a), float(b)),
            h=h,
            phi=phi,
            evaluator_id=ev_id,
        )


@dataclass(frozen=True)
class ExpansionTermList:
    """``exp(-h(a) A) sum_k coefficient_k A**(-exponent_k)``; absent terms are zero."""

    terms: tuple
    prefactor_h_at_a: float = 0.0

    def __post_init__(self):
        exps = [e for _, e in self.terms]
        if any(e2 <= e1 for e1, e2 in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly increasing")

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class TruncationResult:
    value: np.ndarray
    n_terms: int
    first_omitted_norm: float


# ---------------------------------------------------------------------------
# Watson's lemma.

def watson_terms(inp: WatsonInput, n_terms: int) -> ExpansionTermList:
    """Terms ``(a_n Gamma(n/r), n/r)`` for ``n = 1..n_terms``; missing ``a_n`` are zero."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    r = inp.scale
    coeffs = list(inp.coefficients) + [0j] * max(0, n_terms - len(inp.coefficients))
    terms = tuple((coeffs[n - 1] * gamma_fn(n / r), n / r) for n in range(1, n_terms + 1))
    return ExpansionTermList(terms, 0.0)


def _require_sectorial(A: np.ndarray) -> None:
    lam = np.linalg.eigvals(A)
    if np.any(lam == 0) or np.pi / 2 - np.max(np.abs(np.angle(lam))) <= 0:
        raise NotSectorial("spectrum outside every sector |arg| <= pi/2 - delta")
    m = matcore.mu(A)
    if m <= 0:
        raise NotSectorial(f"mu(A) = {m:.3g} <= 0")


def evaluate_expansion(A, terms: ExpansionTermList, n_terms: int) -> TruncationResult:
    """Sum the first ``n_terms`` terms at ``A``; estimate the remainder by the next one."""
    M = matcore.as_matrix(A)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    _require_sectorial(M)
    if terms.prefactor_h_at_a != 0:
        pre = matcore.matrix_exp(-terms.prefactor_h_at_a * M)
    else:
        pre = matcore.identity_like(M)

    def term(k):
        coef, ex = terms.terms[k]
        if coef == 0:
            return np.zeros_like(M)
        return coef * matcore.matrix_power(M, -ex)

    total = np.zeros_like(M)
    for k in range(min(n_terms, len(terms))):
        total = total + term(k)
    omitted = 0.0
    if n_terms < len(terms):
        omitted = matcore.norm2(pre @ term(n_terms))
    return TruncationResult(pre @ total, n_terms, float(omitted))


# ---------------------------------------------------------------------------
# Laplace's method.

def laplace_reversion(problem: LaplaceProblem, n: int) -> np.ndarray:
    """Coefficients of ``u = x - a`` as a series in ``v = (h(x) - h(a))**(1/mu)``.

    Entry ``k`` multiplies ``v**k``; entry 0 is zero.
    """
    if n > MAX_TERMS + 1:
        raise ValueError(f"reversion order limited to {MAX_TERMS}")
    a = np.asarray(problem.h_coefficients[:n], dtype=complex)
    if a.size < n:
        raise InsufficientSeries(f"need {n} h coefficients, got {a.size}")
    mu_ = problem.h_order
    # v = a0^(1/mu) u (1 + sum a_s/a0 u^s)^(1/mu) = u G(u)
    G = series.power(a / a[0], 1.0 / mu_, n) * a[0].real ** (1.0 / mu_)
    v_of_u = np.concatenate([[0.0], G])[: n + 1]
    return series.revert(v_of_u, n + 1)


def laplace_coefficient_values(problem: LaplaceProblem, n_terms: int) -> np.ndarray:
    """The raw ``c_s`` of ``phi/h' ~ sum_s c_s t**((s + lam - mu)/mu)``."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if len(problem.h_coefficients) < n_terms or len(problem.phi_coefficients) < n_terms:
        raise InsufficientSeries(
            f"need >= {n_terms} coefficients for h and phi, got "
            f"{len(problem.h_coefficients)} and {len(problem.phi_coefficients)}"
        )
    n = n_terms
    U = laplace_reversion(problem, n)  # n + 1 entries, U[0] = 0
    W = U[1:]  # U(v) = v W(v)
    dU = series.derivative(U, n)
    lam = problem.phi_order
    B = np.asarray(problem.phi_coefficients[:n], dtype=complex)
    B_of_U = series.compose(B, U[:n], n)
    f = series.mul(series.mul(series.power(W, lam - 1.0, n), B_of_U, n), dU, n)
    return f / problem.h_order


def laplace_coefficients(problem: LaplaceProblem, n_terms: int) -> ExpansionTermList:
    """Terms ``(Gamma((s+lam)/mu) c_s, (s+lam)/mu)`` with prefactor ``h(a)``."""
    c = laplace_coefficient_values(problem, n_terms)
    lam, mu_ = problem.phi_order, problem.h_order
    terms = tuple((gamma_fn((s + lam) / mu_) * c[s], (s + lam) / mu_) for s in range(n_terms))
    return ExpansionTermList(terms, problem.h_at_a)


def check_h_dominates(problem: LaplaceProblem, samples: int = 1000) -> bool:
    """Sampled form of ``h(x) > h(a)`` on ``(a, b)``; vacuous without an evaluator."""
    if problem.h is None:
        return True
    a, b = problem.interval
    xs = np.linspace(a, min(b, a + 1e3), samples + 2)[1:-1]
    return bool(all(problem.h(x) > problem.h_at_a for x in xs))


def laplace_evaluate(A, problem: LaplaceProblem, n_terms: int) -> TruncationResult:
    """Truncated Laplace expansion of ``int_a^b phi(x) exp(-h(x) A) dx``.

    One extra coefficient beyond ``n_terms`` is required for the remainder estimate.
    """
    if not check_h_dominates(problem):
        raise InvalidProblem("h(x) <= h(a) somewhere on (a, b)")
    terms = laplace_coefficients(problem, n_terms + 1)
    return evaluate_expansion(A, terms, n_terms)


# ---------------------------------------------------------------------------
# Remainder order study.

def empirical_order(
    base,
    terms: ExpansionTermList,
    oracle: Callable[[np.ndarray], np.ndarray],
    scales: Sequence[float],
    n_terms: int,
    *,
    noise_rtol: float = 1e-12,
) -> float:
    """Log-log slope of ``||oracle(sA) - truncation(sA)||`` against ``s``.

    Returns ``-inf`` when every remainder is at rounding level (exact expansions).
    """
    s_vals = np.asarray(scales, dtype=float)
    if s_vals.size < 4 or np.any(np.diff(s_vals) <= 0) or np.any(s_vals <= 0):
        raise ValueError("need >= 4 increasing positive scales")
    M = matcore.as_matrix(base)
    rem, ref = [], []
    for s in s_vals:
        try:
            exact = np.asarray(oracle(s * M))
        except MatasympError as exc:
            raise OracleFailure(f"oracle failed at scale {s}: {exc}") from exc
        if not np.all(np.isfinite(exact)):
            raise OracleFailure(f"oracle returned non-finite values at scale {s}")
        approx = evaluate_expansion(s * M, terms, n_terms).value
        rem.append(matcore.norm2(exact - approx))
        ref.append(matcore.norm2(exact))
    rem, ref = np.array(rem), np.array(ref)
    if np.all(rem <= noise_rtol * ref):
        return -math.inf
    return float(np.polyfit(np.log(s_vals), np.log(np.maximum(rem, 1e-300)), 1)[0])


# ---------------------------------------------------------------------------
# Built-in scalar data (JSON refers to these by id).

def _reciprocal_1p(t):
    return 1.0 / (1.0 + t)


def _inv_sqrt(t):
    return t ** -0.5


SCALAR_FUNCTIONS: dict[str, Callable] = {
    "reciprocal_1p": _reciprocal_1p,
    "inv_sqrt": _inv_sqrt,
}

LAPLACE_FUNCTIONS: dict[str, tuple[Callable, Callable]] = {
    "gaussian": (lambda x: x * x, lambda x: 1.0),
    "x_plus_x2": (lambda x: x + x * x, lambda x: 1.0),
}

_FULL = MAX_TERMS + 1


def builtin_watson(name: str) -> WatsonInput:
    if name == "reciprocal_1p":
        coeffs = [(-1.0) ** (n - 1) for n in range(1, _FULL + 1)]
        return WatsonInput(coeffs, 1.0, 1.0, 1.0, 0.0, _reciprocal_1p, name)
    if name == "inv_sqrt":
        coeffs = [1.0] + [0.0] * (_FULL - 1)
        return WatsonInput(coeffs, 2.0, 1.0, 1.0, 0.0, _inv_sqrt, name)
    raise KeyError(f"unknown Watson evaluator {name!r}")


def builtin_laplace(name: str) -> LaplaceProblem:
    zeros = [0.0] * (_FULL - 1)
    if name == "gaussian":
        h, phi = LAPLACE_FUNCTIONS[name]
        return LaplaceProblem([1.0] + zeros, 2.0, 0.0, [1.0] + zeros, 1.0,
                              (0.0, math.inf), h, phi, name)
    if name == "x_plus_x2":
        h, phi = LAPLACE_FUNCTIONS[name]
        return LaplaceProblem([1.0, 1.0] + zeros[1:], 1.0, 0.0, [1.0] + zeros, 1.0,
                              (0.0, math.inf), h, phi, name)
    raise KeyError(f"unknown Laplace evaluator {name!r}")
