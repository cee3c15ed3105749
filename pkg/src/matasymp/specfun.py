"""Gamma, Bessel and Kummer functions of a matrix argument, with their asymptotics.

Scalar special functions are lifted through :func:`matcore.diagonalize`
(conditioning gate 1e8). Integral representations are evaluated by direct
matrix quadrature and serve as cross-checks of the lifted values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
import scipy.linalg as sla
from scipy import special as sp

from . import matcore
from .errors import (
    ContourPole,
    MuTooSmall,
    NoConvergence,
    NoDecay,
    NotConvergent,
    NotHermitianPD,
    NotSectorial,
    SectorViolation,
    SingularShift,
    SpectrumNotRight,
)
from .expansions import TruncationResult
from .quadrature import geometric_points, integrate_matrix

SQRT_2PI = math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------------------
# Gamma.

def _require_right_spectrum(lam: np.ndarray) -> None:
    if np.any(lam.real <= 0):
        raise SpectrumNotRight(f"min Re(lambda) = {lam.real.min():.3g} <= 0")


def scalar_gamma(z: complex) -> complex:
    return complex(sp.gamma(complex(z)))


def gamma_matrix(A) -> np.ndarray:
    """``Gamma(A)`` by lifting the scalar gamma function."""
    dec = matcore.diagonalize(A)
    _require_right_spectrum(dec.eigenvalues)
    return dec.apply(sp.gamma(dec.eigenvalues))


def gamma_integral(A, *, epsabs: float = 0.0, epsrel: float = 1e-12) -> np.ndarray:
    """``int_0^inf t^{A-I} e^{-t} dt`` by quadrature.

    ``t = u**p`` with ``p = max(1, 1/omega(A))`` flattens the ``t**(omega-1)``
    behaviour at 0. The tail cut uses ``||t^{A-I}|| <= t**(lambda_max(A+) - 1)``.
    """
    M = matcore.as_matrix(A)
    w = matcore.omega(M)
    if w <= 0:
        raise NotConvergent(f"omega(A) = {w:.3g} <= 0")
    top = float(np.linalg.eigvalsh(matcore.hermitian_part(M))[-1]) - 1.0
    T = matcore.power_tail_cutoff(max(top, 0.0), 1.0)
    p = max(1.0, 1.0 / w)
    U = T ** (1.0 / p)

    def integrand(u):
        t = u ** p
        return (p * u ** (p - 1.0) * math.exp(-t)) * matcore.scalar_base_power(t, M)

    pts = sorted(set(geometric_points(0.0, U) + list(np.linspace(0.0, U, 12)[1:-1])))
    return integrate_matrix(integrand, 0.0, U, points=pts, epsabs=epsabs, epsrel=epsrel)


def reciprocal_gamma(A, n_shift: int = 1) -> np.ndarray:
    """``A (A+I) ... (A+(n-1)I) Gamma(A + nI)^{-1}``."""
    M = matcore.as_matrix(A)
    if n_shift < 1:
        raise ValueError("n_shift must be >= 1")
    eye = matcore.identity_like(M)
    lam = np.linalg.eigvals(M)
    scale = max(1.0, float(np.max(np.abs(lam))))
    for k in range(n_shift):
        if np.min(np.abs(lam + k)) <= 1e-13 * scale:
            raise SingularShift(f"A + {k}I is singular")
    if np.min((lam + n_shift).real) <= 0:
        raise SpectrumNotRight(f"omega(A + {n_shift}I) <= 0")
    prod = eye
    for k in range(n_shift):
        prod = prod @ (M + k * eye)
    G = gamma_matrix(M + n_shift * eye)
    return np.linalg.solve(G.T, prod.T).T


# Stirling series ------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n (B_1 = -1/2) from the standard binomial recurrence."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(Fraction(math.comb(m + 1, k)) * B[k] for k in range(m))
        B.append(-acc / (m + 1))
    return tuple(B)


@lru_cache(maxsize=None)
def _stirling_exact(n_terms: int) -> tuple[Fraction, ...]:
    # log Gamma*(z) = sum_j B_{2j} / (2j (2j-1)) w^{2j-1}, w = 1/z; then exponentiate
    B = _bernoulli(n_terms + 1)
    L = [Fraction(0)] * (n_terms + 1)
    for k in range(1, n_terms + 1, 2):
        j2 = k + 1
        L[k] = B[j2] / (j2 * (j2 - 1))
    g = [Fraction(1)]
    for k in range(1, n_terms):
        g.append(sum(j * L[j] * g[k - j] for j in range(1, k + 1)) / k)
    return tuple(g[:n_terms])


@dataclass(frozen=True)
class StirlingExpansion:
    g: tuple
    n_terms: int

    @property
    def exact(self) -> tuple[Fraction, ...]:
        return _stirling_exact(self.n_terms)


def stirling_coefficients(n_terms: int) -> StirlingExpansion:
    """``g_0..g_{n-1}`` with ``Gamma*(z) ~ sum g_k z**-k``."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    exact = _stirling_exact(n_terms)
    return StirlingExpansion(tuple(float(x) for x in exact), n_terms)


def _gamma_sector_check(A, theta: float) -> matcore.Diagonalization:
    dec = matcore.diagonalize(A)
    lam = dec.eigenvalues
    if np.any(lam == 0) or np.max(np.abs(np.angle(lam))) >= np.pi / 2:
        raise SectorViolation("spectrum not inside a sector |arg| < pi/2")
    if np.min(lam.real) < theta:
        raise SectorViolation(f"min Re(lambda) below theta = {theta}")
    return dec


def stirling_prefactor(A) -> np.ndarray:
    """``sqrt(2 pi) e^{-A} A^{A - I/2}``."""
    M = matcore.as_matrix(A)
    return SQRT_2PI * matcore.matrix_exp(-M) @ matcore.self_power(M, shift=-0.5)


def stirling_sum(A, n_terms: int) -> TruncationResult:
    """``sum_{k<N} g_k A^{-k}`` (prefactor excluded), with the next term's norm."""
    M = matcore.as_matrix(A)
    g = stirling_coefficients(n_terms + 1).g
    Minv = np.linalg.inv(M)
    term = matcore.identity_like(M)
    total = np.zeros_like(M)
    for k in range(n_terms):
        total = total + g[k] * term
        term = term @ Minv
    return TruncationResult(total, n_terms, matcore.norm2(g[n_terms] * term))


def gamma_stirling(A, n_terms: int, *, theta: float = 0.0) -> TruncationResult:
    """``sqrt(2 pi) e^{-A} A^{A-I/2} sum_{k<N} g_k A^{-k}``.

    ``theta`` is the shifted-sector vertex: every eigenvalue must have
    ``Re >= theta``.
    """
    M = matcore.as_matrix(A)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    _gamma_sector_check(M, theta)
    pre = stirling_prefactor(M)
    s = stirling_sum(M, n_terms)
    g_next = stirling_coefficients(n_terms + 1).g[n_terms]
    omitted = matcore.norm2(pre @ (g_next * matcore.matrix_power(M, -n_terms)))
    return TruncationResult(pre @ s.value, n_terms, omitted)


def gamma_remainder_bound(A, n_terms: int) -> float:
    """``(1 + zeta(N)) Gamma(N) (2 pi)^{-(N+1)} ||A^{-1}||^N`` for Hermitian PD ``A``.

    Infinite for ``N = 1`` since ``zeta(1)`` diverges.
    """
    M = matcore.as_matrix(A)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    if not (matcore.is_hermitian(M) and matcore.mu(M) > 0):
        raise NotHermitianPD("gamma remainder bound needs a Hermitian positive definite matrix")
    return remainder_bound_constant(n_terms) * matcore.inv_norm(M) ** n_terms


def remainder_bound_constant(n_terms: int) -> float:
    N = n_terms
    return float((1.0 + sp.zeta(N)) * math.gamma(N) / (2.0 * math.pi) ** (N + 1))


def scaled_gamma_scalar(z: complex) -> complex:
    """``Gamma(z) e^z z^{1/2 - z} / sqrt(2 pi)`` in 30-digit arithmetic."""
    with mpmath.workdps(30):
        zz = mpmath.mpc(z)
        val = mpmath.exp(mpmath.loggamma(zz) + zz - (zz - 0.5) * mpmath.log(zz)
                         - 0.5 * mpmath.log(2 * mpmath.pi))
        return complex(val)


def scaled_gamma(A, *, theta: float = 0.0) -> np.ndarray:
    """``Gamma*(A) = (2 pi)^{-1/2} e^A A^{I/2 - A} Gamma(A)``.

    Evaluated by lifting the scalar ``Gamma*``, which stays finite where
    ``Gamma(A)`` itself would overflow.
    """
    dec = _gamma_sector_check(A, theta)
    return dec.apply([scaled_gamma_scalar(z) for z in dec.eigenvalues])


# ---------------------------------------------------------------------------
# Bessel.

@dataclass(frozen=True)
class BesselSpec:
    kind: str
    z: complex

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        if kind not in ("J", "I"):
            raise ValueError("kind must be 'J' or 'I'")
        z = complex(self.z)
        object.__setattr__(self, "z", z)
        if z == 0:
            raise SectorViolation("z must be nonzero")
        limit = math.pi if kind == "J" else math.pi / 2
        if abs(cmath.phase(z)) >= limit:
            raise SectorViolation(f"|arg z| must be < {limit:.4g} for kind {kind}")

    def kernel(self, t: float) -> complex:
        return cmath.cos(self.z * t) if self.kind == "J" else cmath.cosh(self.z * t)


def bessel_integral(A, spec: BesselSpec, *, epsabs: float = 0.0, epsrel: float = 1e-12) -> np.ndarray:
    """``(z/2)^A Gamma^{-1}(A + I/2) / sqrt(pi) int_{-1}^{1} (1-t^2)^{A-I/2} k(zt) dt``.

    The even integrand is folded onto ``[0, 1]`` and mapped by ``t = 1 - u^2``
    (then ``u = w^q`` when ``mu(A) < 0``) so the endpoint behaves like
    ``w**(>= 0)``.
    """
    M = matcore.as_matrix(A)
    m = matcore.mu(M)
    if m <= -0.5:
        raise MuTooSmall(f"mu(A) = {m:.3g} <= -1/2")
    eye = matcore.identity_like(M)
    shifted = M - 0.5 * eye
    q = max(1.0, 1.0 / (1.0 + 2.0 * m))

    def integrand(w):
        u = w ** q
        t = 1.0 - u * u
        # (1 - t^2)^{A - I/2} dt = 2u (u^2 (2 - u^2))^{A - I/2} du
        log_base = math.log(u * u * (2.0 - u * u))
        jac = 2.0 * u * q * w ** (q - 1.0)
        return (2.0 * jac * spec.kernel(t)) * sla.expm(log_base * shifted)

    pts = sorted(set(geometric_points(0.0, 1.0, 30) + geometric_points(0.0, 1.0, 30, toward="b")))
    integral = integrate_matrix(integrand, 0.0, 1.0, points=pts, epsabs=epsabs, epsrel=epsrel)
    front = matcore.base_power(spec.z / 2.0, M) @ reciprocal_gamma(M + 0.5 * eye) / math.sqrt(math.pi)
    return front @ integral


def _require_c1(M: np.ndarray) -> None:
    lam = np.linalg.eigvals(M)
    if np.any(lam == 0) or np.max(np.abs(np.angle(lam))) >= np.pi / 2:
        raise NotSectorial("spectrum outside every sector |arg| <= pi/2 - delta")


def bessel_leading(A, spec: BesselSpec) -> np.ndarray:
    """``L(A) = (z/2)^A Gamma^{-1}(A + I/2) (A - I/2)^{-1/2}``."""
    M = matcore.as_matrix(A)
    _require_c1(M)
    eye = matcore.identity_like(M)
    return (matcore.base_power(spec.z / 2.0, M) @ reciprocal_gamma(M + 0.5 * eye)
            @ matcore.matrix_power(M - 0.5 * eye, -0.5))


def bessel_asymptotic(A, spec: BesselSpec) -> np.ndarray:
    """``(2 pi)^{-1/2} (e z / 2)^A A^{-A - I/2}``, shared by both kinds."""
    M = matcore.as_matrix(A)
    _require_c1(M)
    return matcore.base_power(math.e * spec.z / 2.0, M) @ matcore.self_power(M, shift=0.5, scale=-1.0) / SQRT_2PI


# ---------------------------------------------------------------------------
# Kummer.

def pochhammer(x: complex, n: int) -> complex:
    """Rising factorial ``x (x+1) ... (x+n-1)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


def _is_nonpositive_integer(x: complex) -> bool:
    x = complex(x)
    return x.imag == 0 and x.real <= 0 and float(x.real).is_integer()


@dataclass(frozen=True)
class KummerParams:
    a: complex
    b: complex

    def __post_init__(self):
        if _is_nonpositive_integer(self.b):
            raise ValueError("b must not be a non-positive integer")


KUMMER_NORM_LIMIT = 50.0
KUMMER_MAX_TERMS = 10_000


def kummer_series(params: KummerParams, A) -> np.ndarray:
    """``sum_n (a)_n / (b)_n A^n / n!``, stopped after 3 consecutive negligible terms."""
    M = matcore.as_matrix(A)
    if matcore.norm2(M) > KUMMER_NORM_LIMIT:
        raise NoConvergence(f"||A|| > {KUMMER_NORM_LIMIT}: series unreliable in double precision")
    a, b = params.a, params.b
    term = matcore.identity_like(M)
    total = term.copy()
    small = 0
    for n in range(KUMMER_MAX_TERMS):
        term = term @ M * ((a + n) / ((b + n) * (n + 1)))
        total = total + term
        if matcore.norm2(term) < 1e-16 * matcore.norm2(total):
            small += 1
            if small == 3:
                return total
        else:
            small = 0
    raise NoConvergence(f"no convergence within {KUMMER_MAX_TERMS} terms")


def kummer_first_formula_residual(params: KummerParams, A) -> float:
    """``||1F1(a;b;A) - e^A 1F1(b-a;b;-A)||``."""
    M = matcore.as_matrix(A)
    lhs = kummer_series(params, M)
    rhs = matcore.matrix_exp(M) @ kummer_series(KummerParams(params.b - params.a, params.b), -M)
    return matcore.norm2(lhs - rhs)


def kummer_asymptotic(params: KummerParams, A, n_terms: int, argument_sign: int = -1) -> TruncationResult:
    """Large-``A`` expansion of ``1F1(a;b;-A)`` (sign -1) or ``1F1(a;b;A)`` (sign +1)."""
    M = matcore.as_matrix(A)
    if argument_sign not in (-1, 1):
        raise ValueError("argument_sign must be +1 or -1")
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    _require_c1(M)
    a, b = complex(params.a), complex(params.b)
    if argument_sign < 0:
        scale = sp.gamma(b) * sp.rgamma(b - a)
        front = scale * matcore.matrix_power(M, -a)
        p, q = a, a - b + 1.0
    else:
        scale = sp.gamma(b) * sp.rgamma(a)
        front = scale * matcore.matrix_exp(M) @ matcore.matrix_power(M, a - b)
        p, q = b - a, 1.0 - a
    Minv = np.linalg.inv(M)
    power = matcore.identity_like(M)
    total = np.zeros_like(M)
    coef = 1.0 + 0j
    for n in range(n_terms):
        total = total + coef * power
        coef *= (p + n) * (q + n) / (n + 1)
        power = power @ Minv
    omitted = matcore.norm2(front @ (coef * power))
    return TruncationResult(front @ total, n_terms, omitted)


def _mb_gamma_ratio(s: complex, a: complex, b: complex) -> complex:
    return complex(np.exp(sp.loggamma(-s) + sp.loggamma(s + a)) * sp.rgamma(s + b))


def default_contour(params: KummerParams) -> float:
    return -min(complex(params.a).real, 1.0) / 2.0


def kummer_mellin_barnes(
    params: KummerParams,
    A,
    contour_re: float | None = None,
    truncation: float | None = None,
    *,
    epsrel: float = 1e-10,
) -> np.ndarray:
    """``Gamma(a)/Gamma(b) 1F1(a;b;-A)`` from the vertical-line Mellin-Barnes integral.

    ``(2 pi i)^{-1} int Gamma(-s) Gamma(s+a) / Gamma(s+b) A^s ds`` over
    ``Re s = contour_re``. The line is cut where the integrand norm falls
    below 1e-12 of its peak (or at ``|Im s| = truncation``).
    """
    M = matcore.as_matrix(A)
    a, b = complex(params.a), complex(params.b)
    c = default_contour(params) if contour_re is None else float(contour_re)
    if c >= 0 and float(c).is_integer():
        raise ContourPole(f"Re s = {c} passes through a pole of Gamma(-s)")
    k = -a.real - c
    if k >= 0 and abs(k - round(k)) < 1e-12:
        raise ContourPole(f"Re s = {c} passes through a pole of Gamma(s + a)")
    if not -a.real < c < 0:
        raise ValueError("contour must separate the poles: -Re(a) < contour_re < 0")
    lam = np.linalg.eigvals(M)
    if np.any(lam == 0) or np.pi / 2 - np.max(np.abs(np.angle(lam))) <= 0:
        raise NoDecay("sector margin is not positive; integrand does not decay")
    L = matcore.matrix_log(M)

    def integrand(y):
        s = complex(c, y)
        return (_mb_gamma_ratio(s, a, b) / (2.0 * math.pi)) * sla.expm(s * L)

    peak = matcore.norm2(integrand(0.0))
    Y, quiet = 0.0, 0
    step = 0.5
    while quiet < 6:
        Y += step
        level = max(matcore.norm2(integrand(Y)), matcore.norm2(integrand(-Y)))
        quiet = quiet + 1 if level < 1e-12 * peak else 0
        if truncation is not None and Y >= truncation:
            Y = float(truncation)
            break
        if Y > 1e4:
            raise NoDecay("integrand still above threshold at |Im s| = 1e4")
    pts = list(np.linspace(-Y, Y, 41)[1:-1])
    return integrate_matrix(integrand, -Y, Y, points=pts, epsabs=0.0, epsrel=epsrel)
