"""Dense complex linear algebra and the spectral conditions behind the expansions.

Matrices are plain ``numpy`` complex arrays; :func:`as_matrix` is the single
gate that validates shape and finiteness. The spectral 2-norm is used
throughout.

Normal matrices take a Schur route for log/powers (the Schur factor is
diagonal and the similarity unitary); everything else goes through
``scipy.linalg.expm``/``logm``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg as sla
from scipy.special import gamma as _gamma

from .errors import BranchCut, NearDefective, NotSectorial, SingularResolvent
from .quadrature import decay_cutoff, geometric_points, integrate_matrix

CONDITION_GATE = 1e8
NORMALITY_RTOL = 1e-12


def as_matrix(A) -> np.ndarray:
    """Return ``A`` as a square, finite, complex 2-D array (a copy)."""
    M = np.array(A, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def identity_like(A: np.ndarray) -> np.ndarray:
    return np.eye(A.shape[0], dtype=complex)


def norm2(A) -> float:
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(np.asarray(A), 2))


def inv_norm(A) -> float:
    """``||A^{-1}||_2``, computed as 1 / smallest singular value."""
    s = np.linalg.svd(np.asarray(A, dtype=complex), compute_uv=False)
    return math.inf if s[-1] == 0 else float(1.0 / s[-1])


# ---------------------------------------------------------------------------
# JSON matrix format: {"dim": n, "entries": [[re, im], ...]} row-major.

def matrix_to_json(A) -> dict:
    M = as_matrix(A)
    flat = M.reshape(-1)
    return {"dim": int(M.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(doc: dict) -> np.ndarray:
    try:
        n = int(doc["dim"])
        entries = doc["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError("matrix JSON needs 'dim' and 'entries'") from exc
    if len(entries) != n * n:
        raise ValueError(f"expected {n * n} entries, got {len(entries)}")
    vals = np.array([complex(float(re), float(im)) for re, im in entries], dtype=complex)
    return as_matrix(vals.reshape(n, n))


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(json.loads(Path(path).read_text()))


def save_matrix(A, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(A)))


# ---------------------------------------------------------------------------
# Structure tests and spectral data.

def hermitian_part(A) -> np.ndarray:
    """``(A + A^H) / 2``, symmetrized exactly."""
    M = as_matrix(A)
    H = 0.5 * (M + M.conj().T)
    return 0.5 * (H + H.conj().T)


def is_normal(A, rtol: float = NORMALITY_RTOL) -> bool:
    M = as_matrix(A)
    scale = norm2(M) ** 2
    comm = M @ M.conj().T - M.conj().T @ M
    return norm2(comm) <= rtol * max(scale, np.finfo(float).tiny)


def is_hermitian(A, rtol: float = NORMALITY_RTOL) -> bool:
    M = as_matrix(A)
    return norm2(M - M.conj().T) <= rtol * max(norm2(M), np.finfo(float).tiny)


def mu(A) -> float:
    """Smallest eigenvalue of the Hermitian part; controls ``||exp(-tA)||``."""
    return float(np.linalg.eigvalsh(hermitian_part(A))[0])


def omega(A) -> float:
    """Smallest real part over the spectrum."""
    return float(np.min(np.linalg.eigvals(as_matrix(A)).real))


@dataclass(frozen=True)
class Diagonalization:
    """``A = P diag(eigenvalues) P^{-1}`` with ``cond = ||P|| ||P^{-1}||``."""

    eigenvalues: np.ndarray
    P: np.ndarray
    Pinv: np.ndarray
    cond: float
    unitary: bool = False

    def apply(self, values) -> np.ndarray:
        """Rebuild ``P diag(values) P^{-1}``."""
        return (self.P * np.asarray(values, dtype=complex)) @ self.Pinv


def diagonalize(A, gate: float = CONDITION_GATE) -> Diagonalization:
    """Eigendecomposition with a conditioning gate.

    Normal matrices use the complex Schur form, so ``P`` is unitary even when
    eigenvalues cluster. Raises :class:`NearDefective` when ``cond(P) > gate``.
    """
    M = as_matrix(A)
    if is_normal(M):
        T, Z = sla.schur(M, output="complex")
        return Diagonalization(np.diag(T).copy(), Z, Z.conj().T, 1.0, unitary=True)
    lam, P = np.linalg.eig(M)
    P = P / np.linalg.norm(P, axis=0)
    cond = float(np.linalg.cond(P, 2))
    if not np.isfinite(cond) or cond > gate:
        raise NearDefective(f"eigenvector condition {cond:.3g} exceeds {gate:.0e}")
    return Diagonalization(lam, P, np.linalg.inv(P), cond)


@dataclass(frozen=True)
class SpectralProfile:
    eigenvalues: np.ndarray
    omega: float
    mu: float
    delta_margin: float
    eta: float
    n_p: float
    is_normal: bool
    is_hermitian_pd: bool


def _delta_margin(lam: np.ndarray) -> float:
    if np.any(np.abs(lam) == 0):
        return -math.inf
    return float(np.pi / 2 - np.max(np.abs(np.angle(lam))))


def spectral_profile(A) -> SpectralProfile:
    M = as_matrix(A)
    dec = diagonalize(M)
    lam = dec.eigenvalues
    w = float(np.min(lam.real))
    m = mu(M)
    normal = dec.unitary
    hpd = is_hermitian(M) and m > 0
    return SpectralProfile(
        eigenvalues=lam,
        omega=w,
        mu=m,
        delta_margin=_delta_margin(lam),
        eta=m / w if w > 0 else math.nan,
        n_p=max(1.0, dec.cond),
        is_normal=normal,
        is_hermitian_pd=hpd,
    )


def check_c1(A, delta: float) -> bool:
    """True iff every eigenvalue is nonzero with ``|arg| <= pi/2 - delta``."""
    if not 0 < delta < np.pi / 2:
        raise ValueError("delta must lie in (0, pi/2)")
    lam = np.linalg.eigvals(as_matrix(A))
    if np.any(np.abs(lam) == 0):
        return False
    # tiny slack so that angles hit exactly by construction are admitted
    return bool(np.all(np.abs(np.angle(lam)) <= np.pi / 2 - delta + 1e-12))


@dataclass(frozen=True)
class C2Report:
    m_bound: float
    omega1: float
    lambda_samples: list
    n_max: int
    worst_ratio: float
    passed: bool


def check_c2_sampled(A, m_bound: float, omega1: float, lambda_grid, n_max: int) -> C2Report:
    """Sample ``||R_lam(A)^n|| (omega1 - lam)^n / M`` over the grid and ``n <= n_max``.

    A diagnostic only: it cannot certify the bound for every ``n``. The pass
    test allows 1e-12 of rounding above 1, since Hermitian matrices attain
    the bound with equality.
    """
    M = as_matrix(A)
    grid = [float(x) for x in lambda_grid]
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    lam = np.linalg.eigvals(M)
    for x in grid:
        if np.min(np.abs(lam - x)) <= 1e-14 * max(1.0, abs(x)):
            raise SingularResolvent(f"lambda={x} is an eigenvalue")
    if omega1 > omega(M) + 1e-12:
        raise ValueError("omega1 must not exceed omega(A)")
    if any(x >= omega1 for x in grid):
        raise ValueError("every sample must lie left of omega1")
    eye = identity_like(M)
    worst = 0.0
    for x in grid:
        R = np.linalg.solve(x * eye - M, eye)
        Rn = eye
        for n in range(1, n_max + 1):
            Rn = Rn @ R
            ratio = norm2(Rn) * (omega1 - x) ** n
            worst = max(worst, ratio)
    worst_ratio = worst / m_bound if m_bound > 0 else math.inf
    return C2Report(m_bound, omega1, grid, n_max, worst_ratio, worst_ratio <= 1.0 + 1e-12)


# ---------------------------------------------------------------------------
# Matrix functions.

def matrix_exp(A) -> np.ndarray:
    return sla.expm(as_matrix(A))


def _check_branch(lam: np.ndarray) -> None:
    on_cut = (lam.real <= 0) & (np.abs(lam.imag) <= 1e-14 * np.maximum(np.abs(lam), 1e-300))
    if np.any(on_cut | (lam == 0)):
        raise BranchCut("eigenvalue on the closed negative real axis")


def matrix_log(A) -> np.ndarray:
    """Principal logarithm."""
    M = as_matrix(A)
    if is_normal(M):
        dec = diagonalize(M)
        _check_branch(dec.eigenvalues)
        return dec.apply(np.log(dec.eigenvalues))
    _check_branch(np.linalg.eigvals(M))
    L = sla.logm(M, disp=False)[0]
    return np.asarray(L, dtype=complex)


def matrix_power(A, alpha) -> np.ndarray:
    """Principal power ``A^alpha = exp(alpha log A)`` for scalar complex ``alpha``."""
    M = as_matrix(A)
    if alpha == 0:
        return identity_like(M)
    if is_normal(M):
        dec = diagonalize(M)
        _check_branch(dec.eigenvalues)
        return dec.apply(np.exp(alpha * np.log(dec.eigenvalues)))
    return sla.expm(alpha * matrix_log(M))


def self_power(A, shift: complex = 0.0, scale: complex = 1.0) -> np.ndarray:
    """``exp(scale (A + shift I) log A)``; e.g. ``A^{A - I/2}`` or ``A^{-A - I/2}``."""
    M = as_matrix(A)
    if is_normal(M):
        dec = diagonalize(M)
        _check_branch(dec.eigenvalues)
        lam = dec.eigenvalues
        return dec.apply(np.exp(scale * (lam + shift) * np.log(lam)))
    L = matrix_log(M)
    return sla.expm(scale * (M + shift * identity_like(M)) @ L)


def base_power(base: complex, A) -> np.ndarray:
    """``base^A = exp(A log base)`` with the principal scalar logarithm."""
    if base == 0:
        raise BranchCut("base must be nonzero")
    return sla.expm(complex(np.log(complex(base))) * as_matrix(A))


def scalar_base_power(t: float, A) -> np.ndarray:
    """``t^{A - I} = exp((A - I) ln t)`` for real ``t > 0``."""
    if t <= 0:
        raise ValueError("t must be positive")
    M = as_matrix(A)
    return sla.expm(math.log(t) * (M - identity_like(M)))


def power_tail_cutoff(power: float, rate: float) -> float:
    """T beyond which ``t^power exp(-rate t)`` stays below 1e-14 of its peak."""
    T = decay_cutoff(rate)
    if power <= 0:
        return T
    t_peak = power / rate
    log_peak = power * math.log(t_peak) - rate * t_peak
    while power * math.log(T) - rate * T > log_peak + math.log(1e-14):
        T *= 1.5
    return T


def matrix_power_integral(A, alpha: float, *, epsabs: float = 1e-13, epsrel: float = 1e-13) -> np.ndarray:
    """``A^{-alpha}`` from ``Gamma(alpha)^{-1} int_0^inf t^{alpha-1} exp(-tA) dt``.

    For ``alpha < 1`` the substitution ``t = u^{1/alpha}`` removes the
    endpoint singularity. The range is cut where the semigroup envelope
    ``exp(-mu(A) t) t^(alpha-1)`` drops below 1e-14.
    """
    M = as_matrix(A)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    m = mu(M)
    if m <= 0:
        raise NotSectorial(f"mu(A) = {m:.3g} <= 0")
    T = power_tail_cutoff(alpha - 1.0, m)
    if alpha < 1:
        p = 1.0 / alpha
        U = T ** alpha

        def integrand(u):
            return p * sla.expm(-(u ** p) * M)

        val = integrate_matrix(integrand, 0.0, U, points=geometric_points(0.0, U),
                               epsabs=epsabs, epsrel=epsrel)
    else:
        def integrand(t):
            return t ** (alpha - 1.0) * sla.expm(-t * M)

        val = integrate_matrix(integrand, 0.0, T, points=geometric_points(0.0, T),
                               epsabs=epsabs, epsrel=epsrel)
    return val / _gamma(alpha)
