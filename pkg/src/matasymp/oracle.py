"""Reference evaluators and seeded matrix families.

Nothing here reuses the expansion code: matrix integrals are done by direct
quadrature of ``exp(-tA)`` (scipy ``expm`` at each node) and scalar
functions are lifted through an eigendecomposition.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import mpmath
import numpy as np
import scipy.linalg as sla
from scipy.optimize import brentq

from . import matcore
from .errors import GenerationFailed, NotConvergent
from .quadrature import decay_cutoff, geometric_points, integrate_matrix

FAMILY_KINDS = ("hermitian_pd", "normal_sectorial", "diagonalizable_conditioned")


@dataclass(frozen=True)
class MatrixFamily:
    """A seeded generator description.

    Eigenvalues are ``r * exp(i theta)`` with ``r`` in ``[r_min, r_max]`` and
    ``|theta| <= angle_max``; ``hermitian_pd`` ignores the angle.
    """

    kind: str
    dim: int
    r_min: float = 1.0
    r_max: float = 2.0
    angle_max: float = math.pi / 4
    target_np: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.dim < 1 or not 0 < self.r_min <= self.r_max:
            raise ValueError("need dim >= 1 and 0 < r_min <= r_max")
        if not 0 <= self.angle_max < math.pi / 2:
            raise ValueError("angle_max must lie in [0, pi/2)")
        if self.target_np < 1:
            raise ValueError("target_np must be >= 1")

    @property
    def delta(self) -> float:
        """Sector margin ``pi/2 - angle_max`` every member satisfies."""
        return math.pi / 2 - (0.0 if self.kind == "hermitian_pd" else self.angle_max)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, doc: dict) -> "MatrixFamily":
        return cls(**doc)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def _eigenvalues(fam: MatrixFamily, rng: np.random.Generator) -> np.ndarray:
    r = rng.uniform(fam.r_min, fam.r_max, fam.dim)
    if fam.kind == "hermitian_pd":
        return r.astype(complex)
    theta = rng.uniform(-fam.angle_max, fam.angle_max, fam.dim)
    return r * np.exp(1j * theta)


def _measured_np(A: np.ndarray) -> float:
    lam, P = np.linalg.eig(A)
    P = P / np.linalg.norm(P, axis=0)
    return float(np.linalg.cond(P, 2))


def _conditioned(lam: np.ndarray, target: float, rng: np.random.Generator) -> np.ndarray:
    n = lam.size
    if n == 1 or target <= 1.0 + 1e-12:
        U = random_unitary(rng, n)
        return (U * lam) @ U.conj().T
    N = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), 1)
    U = random_unitary(rng, n)

    def build(eps):
        P = U @ (np.eye(n) + eps * N)
        return (P * lam) @ np.linalg.inv(P)

    def gap(log_eps):
        return math.log(_measured_np(build(math.exp(log_eps)))) - math.log(target)

    lo, hi = -20.0, 0.0
    while gap(hi) < 0:
        hi += 1.0
        if hi > 20:
            raise GenerationFailed("cannot reach target conditioning")
    return build(math.exp(brentq(gap, lo, hi, xtol=1e-6)))


def _member_ok(fam: MatrixFamily, A: np.ndarray) -> bool:
    lam = np.linalg.eigvals(A)
    if fam.kind == "hermitian_pd":
        ok_spec = np.all(np.abs(lam.imag) < 1e-10 * fam.r_max)
    else:
        ok_spec = matcore.check_c1(A, fam.delta)
    if not ok_spec or np.min(np.abs(lam)) <= 0:
        return False
    if fam.kind == "diagonalizable_conditioned":
        return abs(_measured_np(A) / fam.target_np - 1.0) <= 0.2
    return True


def generate_one(fam: MatrixFamily, index: int) -> np.ndarray:
    """Member ``index`` of the family: a pure function of ``(fam, index)``."""
    for attempt in range(100):
        rng = np.random.default_rng([fam.seed, index, attempt])
        lam = _eigenvalues(fam, rng)
        if fam.kind == "diagonalizable_conditioned":
            A = _conditioned(lam, fam.target_np, rng)
        else:
            U = random_unitary(rng, fam.dim)
            A = (U * lam) @ U.conj().T
            if fam.kind == "hermitian_pd":
                A = 0.5 * (A + A.conj().T)
        if _member_ok(fam, A):
            return A
    raise GenerationFailed(f"no valid member for index {index} after 100 attempts")


def generate(fam: MatrixFamily, count: int) -> list[np.ndarray]:
    return [generate_one(fam, i) for i in range(count)]


# ---------------------------------------------------------------------------
# Scalar lifting.

def lift_scalar(f: Callable, A) -> np.ndarray:
    """``P diag(f(lambda_i)) P^{-1}``; ``f`` is applied elementwise to the eigenvalues."""
    dec = matcore.diagonalize(A)
    vals = np.array([f(z) for z in dec.eigenvalues], dtype=complex)
    return dec.apply(vals)


# ---------------------------------------------------------------------------
# Matrix Laplace-type integrals.

def matrix_laplace_quadrature(
    f: Callable[[float], complex],
    A,
    domain: tuple[float, float] = (0.0, math.inf),
    *,
    h: Callable[[float], float] | None = None,
    growth_m0: float = 1.0,
    growth_b: float = 0.0,
    endpoint_exponent: float = 0.0,
    epsabs: float = 1e-12,
    epsrel: float = 1e-12,
) -> np.ndarray:
    """``int f(t) exp(-tA) dt`` (or ``int f(x) exp(-h(x) A) dx`` when ``h`` is given).

    For the plain transform on ``(0, inf)`` the tail is cut where the envelope
    ``M0 exp((b - mu(A)) t)`` falls below 1e-14, using ``||exp(-tA)|| <= exp(-mu t)``.
    ``endpoint_exponent`` is the power ``beta > -1`` of ``f`` at the left end;
    a negative value triggers the substitution ``t = u**(1/(1+beta))``.
    """
    M = matcore.as_matrix(A)
    a, b = domain
    m = matcore.mu(M)
    if h is None:
        if m <= growth_b:
            raise NotConvergent(f"mu(A) = {m:.3g} does not exceed growth rate {growth_b}")
        if math.isinf(b):
            b = a + decay_cutoff(m - growth_b, log_scale=math.log(max(growth_m0, 1.0)))

        def weight(x):
            return sla.expm(-x * M)
    else:
        if m <= 0:
            raise NotConvergent(f"mu(A) = {m:.3g} <= 0")
        h_a = h(a)
        if math.isinf(b):
            # (mu * (h(X) - h(a))) must clear the 1e-14 envelope
            X = a + 1.0
            while m * (h(X) - h_a) < -math.log(1e-14) + 5.0:
                X = a + 2.0 * (X - a)
                if X - a > 1e12:
                    raise NotConvergent("h does not grow fast enough to truncate")
            b = X

        def weight(x):
            return sla.expm(-h(x) * M)

    if endpoint_exponent < 0:
        if endpoint_exponent <= -1:
            raise NotConvergent("endpoint singularity is not integrable")
        p = 1.0 / (1.0 + endpoint_exponent)
        U = (b - a) ** (1.0 / p)

        # Gauss-Kronrod nodes are interior, so u = 0 is never evaluated
        def integrand(u):
            x = a + u ** p
            return (p * u ** (p - 1.0) * f(x)) * weight(x)

        return integrate_matrix(integrand, 0.0, U, points=geometric_points(0.0, U),
                                epsabs=epsabs, epsrel=epsrel)

    def integrand(x):
        return f(x) * weight(x)

    return integrate_matrix(integrand, a, b, points=geometric_points(a, b),
                            epsabs=epsabs, epsrel=epsrel)


# ---------------------------------------------------------------------------
# Scalar references.

def exp_e1(z: complex, *, tol: float = 1e-16, max_iter: int = 10000) -> complex:
    """``exp(z) E_1(z) = int_0^inf exp(-zt) / (1 + t) dt`` for ``Re z > 0``.

    Modified Lentz evaluation of ``1/(z + 1/(1 + 1/(z + 2/(1 + 2/(z + ...)))))``.
    """
    z = complex(z)
    if z.real <= 0:
        raise ValueError("continued fraction used only for Re z > 0")
    tiny = 1e-300
    # b0 = 0; a1 = 1, b1 = z; then a_{2k} = k, b_{2k} = 1; a_{2k+1} = k, b_{2k+1} = z
    f = tiny
    C, D = f, 0.0
    for j in range(1, max_iter):
        if j == 1:
            aj, bj = 1.0, z
        elif j % 2 == 0:
            aj, bj = j // 2, 1.0
        else:
            aj, bj = j // 2, z
        D = bj + aj * D
        D = tiny if D == 0 else D
        C = bj + aj / C
        C = tiny if C == 0 else C
        D = 1.0 / D
        delta = C * D
        f *= delta
        if abs(delta - 1.0) < tol:
            return f
    raise NotConvergent("continued fraction did not converge")


def hyp1f1_reference(a: complex, b: complex, z: complex, *, dps: int = 40) -> complex:
    """Scalar ``1F1(a; b; z)`` from mpmath at ``dps`` digits.

    The plain series cancels badly for large negative argument, so the
    Kummer tests lift this through the eigenbasis instead.
    """
    with mpmath.workdps(dps):
        return complex(mpmath.hyp1f1(a, b, z))
