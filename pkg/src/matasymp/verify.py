"""Invariant suites run by ``matasymp verify``.

Each check returns a :class:`Check` carrying the measured worst case and
the tolerance it was held to. ``measured <= tolerance`` is a pass unless the
check says otherwise (slope windows report the distance outside the window).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import expansions as ex
from . import matcore as mc
from . import oracle as orc
from . import specfun as sf


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"{self.name}: {status} ({self.measured:.3e}, {self.tolerance:.1e})"


def _check(name, measured, tol) -> Check:
    return Check(name, float(measured), float(tol), bool(measured <= tol))


def families(seed: int, dim: int = 4) -> dict[str, orc.MatrixFamily]:
    return {
        "hermitian_pd": orc.MatrixFamily("hermitian_pd", dim, 1.0, 5.0, seed=seed),
        "normal_sectorial": orc.MatrixFamily("normal_sectorial", dim, 1.0, 5.0, math.pi / 4, seed=seed),
        "conditioned": orc.MatrixFamily("diagonalizable_conditioned", dim, 1.0, 5.0, math.pi / 4,
                                        target_np=5.0, seed=seed),
    }


# ---------------------------------------------------------------------------
# matcore

def semigroup_bound(mats, ts=np.linspace(0.1, 10.0, 12)) -> float:
    worst = -math.inf
    for A in mats:
        m = mc.mu(A)
        for t in ts:
            worst = max(worst, mc.norm2(mc.matrix_exp(-t * A)) - math.exp(-t * m))
    return worst


def mu_estimate_gap(mats, delta: float) -> float:
    """Worst ``||A^{-1}||^{-1} sin(delta) - mu(A)`` (should be <= 0)."""
    return max(math.sin(delta) / mc.inv_norm(A) - mc.mu(A) for A in mats)


def eigenvalue_identity_gap(mats) -> float:
    worst = 0.0
    for A in mats:
        herm = np.linalg.eigvalsh(mc.hermitian_part(A))
        re = np.sort(np.linalg.eigvals(A).real)
        worst = max(worst, float(np.max(np.abs(herm - re))))
    return worst


def imaginary_power_excess(mats, delta: float, ts=np.linspace(-20, 20, 41)) -> float:
    """Worst ``(||A^{it}|| - bound) / max(1, bound)``."""
    worst = -math.inf
    for A in mats:
        for t in ts:
            bound = math.exp((math.pi / 2 - delta) * abs(t))
            val = mc.norm2(mc.matrix_power(A, 1j * t))
            worst = max(worst, (val - bound) / max(1.0, bound))
    return worst


def moment_equality_gap(mats, rs=(0.5, 1.5, 2.5)) -> float:
    worst = 0.0
    for A in mats:
        inv = mc.inv_norm(A)
        for r in rs:
            worst = max(worst, abs(mc.norm2(mc.matrix_power(A, -r)) - inv ** r))
    return worst


def power_integral_gap(mats, alphas=(0.5, 1.0, 2.5)) -> float:
    worst = 0.0
    for A in mats:
        for a in alphas:
            ref = mc.matrix_power(A, -a)
            worst = max(worst, mc.norm2(mc.matrix_power_integral(A, a) - ref) / mc.norm2(ref))
    return worst


def c2_hermitian_worst(mats, n_max: int = 6) -> float:
    worst = 0.0
    for A in mats:
        w = mc.omega(A)
        grid = [w - 0.5, w - 1.0, 0.0, -3.0]
        worst = max(worst, mc.check_c2_sampled(A, 1.0, w, grid, n_max).worst_ratio)
    return worst


def lift_exp_gap(mats) -> float:
    worst = 0.0
    for A in mats:
        ref = mc.matrix_exp(-A)
        lifted = orc.lift_scalar(lambda z: np.exp(-z), A)
        worst = max(worst, mc.norm2(lifted - ref) / mc.norm2(ref))
    return worst


def eta_gap(mats) -> float:
    return max(abs(mc.mu(A) / mc.omega(A) - 1.0) for A in mats)


def matcore_suite(seed: int, count: int = 20) -> list[Check]:
    fams = families(seed)
    herm = orc.generate(fams["hermitian_pd"], count)
    norm = orc.generate(fams["normal_sectorial"], count)
    cond = orc.generate(fams["conditioned"], max(4, count // 4))
    delta = fams["normal_sectorial"].delta
    return [
        _check("semigroup_bound", semigroup_bound(herm + norm + cond), 1e-10),
        _check("mu_estimate", mu_estimate_gap(herm + norm, delta), 1e-10),
        _check("eigenvalue_identity", eigenvalue_identity_gap(herm + norm), 1e-10),
        _check("imaginary_power_bound", imaginary_power_excess(norm, delta), 1e-10),
        _check("moment_equality", moment_equality_gap(herm + norm), 1e-10),
        _check("power_integral_vs_power", power_integral_gap(herm[:5]), 1e-8),
        _check("c2_sampled_hermitian", c2_hermitian_worst(herm), 1.0 + 1e-12),
        _check("lift_vs_expm", lift_exp_gap(herm + norm + cond), 1e-10),
        _check("family_eta", eta_gap(herm + norm), 1e-10),
    ]


# ---------------------------------------------------------------------------
# expansions

def c0_identity_gap(rng: np.random.Generator, draws: int = 100) -> float:
    worst = 0.0
    for _ in range(draws):
        a0, b0 = rng.uniform(0.2, 5.0), rng.uniform(-3.0, 3.0)
        mu_, lam = rng.uniform(0.3, 4.0), rng.uniform(0.3, 4.0)
        extra_h = list(rng.uniform(-1, 1, 3))
        extra_phi = list(rng.uniform(-1, 1, 3))
        prob = ex.LaplaceProblem([a0] + extra_h, mu_, 0.0, [b0] + extra_phi, lam)
        got = ex.laplace_coefficients(prob, 1).terms[0][0]
        want = math.gamma(lam / mu_) * b0 / mu_ * a0 ** (-lam / mu_)
        worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
    return worst


def reversion_roundtrip_gap(rng: np.random.Generator, draws: int = 20, n: int = 8) -> float:
    """Substitute ``u(v)`` back into ``h``: ``sum_s a_s U^{s+mu} = v^mu`` to order ``n``.

    Errors are relative to the summed magnitudes of the contributions at each order.
    """
    from . import series

    worst = 0.0
    for _ in range(draws):
        mu_ = float(rng.integers(1, 4))
        a = [rng.uniform(0.5, 3.0)] + list(rng.uniform(-1, 1, n))
        prob = ex.LaplaceProblem(a, mu_, 0.0, [1.0] * (n + 1), 1.0)
        W = ex.laplace_reversion(prob, n)[1:]  # u = v W(v)
        acc = np.zeros(n, dtype=complex)
        mag = np.zeros(n)
        for s in range(n):
            contrib = np.zeros(n, dtype=complex)
            contrib[s:] = a[s] * series.power(W, s + mu_, n)[: n - s]
            acc += contrib
            mag += np.abs(contrib)
        target = np.zeros(n)
        target[0] = 1.0
        worst = max(worst, float(np.max(np.abs(acc - target) / np.maximum(mag, 1.0))))
    return worst


def watson_order_slope(base, n_terms: int = 3, scales=(10, 30, 100, 300, 1000)) -> float:
    inp = ex.builtin_watson("reciprocal_1p")
    terms = ex.watson_terms(inp, n_terms + 1)

    def oracle(A):
        return orc.matrix_laplace_quadrature(inp.evaluator, A, epsabs=0.0, epsrel=1e-14)

    return ex.empirical_order(base, terms, oracle, scales, n_terms)


def laplace_order_slope(base, n_terms: int = 2, scales=(10, 30, 100, 300, 1000)) -> float:
    prob = ex.builtin_laplace("x_plus_x2")
    terms = ex.laplace_coefficients(prob, n_terms + 1)

    def oracle(A):
        return orc.matrix_laplace_quadrature(prob.phi, A, h=prob.h, epsabs=0.0, epsrel=1e-14)

    return ex.empirical_order(base, terms, oracle, scales, n_terms)


def prefactor_shift_gap(mats, kappa: float = 0.7) -> float:
    prob = ex.builtin_laplace("x_plus_x2")
    shifted = ex.LaplaceProblem(prob.h_coefficients, prob.h_order, kappa, prob.phi_coefficients,
                                prob.phi_order, prob.interval,
                                lambda x: x + x * x + kappa, prob.phi)
    worst = 0.0
    for A in mats:
        base = ex.laplace_evaluate(A, prob, 3).value
        moved = ex.laplace_evaluate(A, shifted, 3).value
        ref = mc.matrix_exp(-kappa * A) @ base
        worst = max(worst, mc.norm2(moved - ref) / mc.norm2(ref))
    return worst


def _window(name, slope, lo, hi) -> Check:
    dist = max(lo - slope, slope - hi, 0.0) if math.isfinite(slope) else math.inf
    return Check(name, slope, hi - lo, dist == 0.0)


def expansions_suite(seed: int, count: int = 20) -> list[Check]:
    rng = np.random.default_rng(seed)
    fams = families(seed)
    norm = orc.generate(fams["normal_sectorial"], 1)[0]
    herm = orc.generate(fams["hermitian_pd"], max(3, count // 5))
    return [
        _check("laplace_c0_identity", c0_identity_gap(rng), 1e-12),
        _check("reversion_roundtrip", reversion_roundtrip_gap(rng), 1e-10),
        _window("watson_order_slope(N=3)", watson_order_slope(norm), -4.2, -3.8),
        _window("laplace_order_slope(N=2)", laplace_order_slope(norm), -3.3, -2.7),
        _check("laplace_prefactor_shift", prefactor_shift_gap(herm), 1e-12),
    ]


# ---------------------------------------------------------------------------
# specfun

def functional_equation_gap(mats) -> float:
    worst = 0.0
    for A in mats:
        eye = np.eye(A.shape[0])
        lhs = sf.gamma_matrix(A + eye)
        rhs = A @ sf.gamma_matrix(A)
        worst = max(worst, mc.norm2(lhs - rhs) / mc.norm2(lhs))
    return worst


def gamma_remainder(A, n_terms: int) -> float:
    """``||Gamma*(A) - sum_{k<N} g_k A^{-k}||`` with ``Gamma*`` the scaled gamma.

    ``Gamma*(A)`` is formed eigenvalue by eigenvalue rather than as a quotient
    of the two full matrices: for a spread spectrum those differ in scale by
    many orders across eigen-directions and a matrix solve would lose the
    small components entirely.
    """
    return mc.norm2(sf.scaled_gamma(A) - sf.stirling_sum(A, n_terms).value)


def gamma_bound_excess(mats, orders=(1, 2, 3, 4)) -> float:
    """Worst ``measured / bound``; a pass needs <= 1."""
    worst = 0.0
    for A in mats:
        for N in orders:
            bound = sf.gamma_remainder_bound(A, N)
            worst = max(worst, gamma_remainder(A, N) / bound)
    return worst


def kummer_identity_gap(rng: np.random.Generator, draws: int, dim: int = 3) -> float:
    worst = 0.0
    for _ in range(draws):
        X = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        A = X * (rng.uniform(0.1, 3.0) / mc.norm2(X))
        a = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        b = complex(rng.uniform(0.2, 3), rng.uniform(-1, 1))
        p = sf.KummerParams(a, b)
        res = sf.kummer_first_formula_residual(p, A)
        worst = max(worst, res / mc.norm2(sf.kummer_series(p, A)))
    return worst


def stirling_relative_errors(base, n_terms: int, scales) -> np.ndarray:
    """``||Gamma*(sA) - S_N(sA)|| / ||Gamma*(sA)||`` (overflow-free relative error)."""
    out = []
    for s in scales:
        G = sf.scaled_gamma(s * base)
        S = sf.stirling_sum(s * base, n_terms).value
        out.append(mc.norm2(G - S) / mc.norm2(G))
    return np.array(out)


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def bessel_ratio_deviation(base, scales, z: complex = 1.0, kind: str = "J") -> np.ndarray:
    spec = sf.BesselSpec(kind, z)
    out = []
    for s in scales:
        A = s * base
        J = sf.bessel_integral(A, spec)
        L = sf.bessel_leading(A, spec)
        out.append(mc.norm2(np.linalg.solve(L, J) - np.eye(A.shape[0])))
    return np.array(out)


def bessel_asym_ratio_deviation(base, scales, z: complex = 1.0, kind: str = "J") -> np.ndarray:
    spec = sf.BesselSpec(kind, z)
    out = []
    for s in scales:
        A = s * base
        R = np.linalg.solve(sf.bessel_leading(A, spec), sf.bessel_asymptotic(A, spec))
        out.append(mc.norm2(R - np.eye(A.shape[0])))
    return np.array(out)


def _decreasing(name, values) -> Check:
    worst = float(np.max(np.diff(values))) if len(values) > 1 else 0.0
    return Check(name, worst, 0.0, worst < 0)


def specfun_suite(seed: int, count: int = 20) -> list[Check]:
    rng = np.random.default_rng(seed)
    herm = orc.generate(orc.MatrixFamily("hermitian_pd", 3, 5.0, 100.0, seed=seed), count)
    hsmall = orc.generate(orc.MatrixFamily("hermitian_pd", 3, 1.0, 5.0, seed=seed), count)
    base = orc.generate(orc.MatrixFamily("hermitian_pd", 3, 1.0, 2.0, seed=seed), 1)[0]
    # ratios of graded matrix functions need a clustered spectrum to stay resolvable
    cluster = orc.generate(orc.MatrixFamily("hermitian_pd", 3, 1.0, 1.05, seed=seed), 1)[0]
    scales = [8, 16, 32, 64, 128, 256]
    checks = [
        _check("gamma_functional_equation", functional_equation_gap(hsmall), 1e-9),
        _check("gamma_remainder_bound(ratio)", gamma_bound_excess(herm), 1.0),
        _check("kummer_first_formula", kummer_identity_gap(rng, count), 1e-10),
    ]
    for N in (2, 3):
        errs = stirling_relative_errors(base, N, scales)
        checks.append(_decreasing(f"stirling_error_decreasing(N={N})", errs))
        checks.append(_window(f"stirling_slope(N={N})", loglog_slope(scales, errs), -N - 0.3, -N + 0.3))
    bscales = [8, 16, 32, 64]
    dev = bessel_ratio_deviation(cluster, bscales)
    checks.append(_decreasing("bessel_leading_ratio_decreasing", dev))
    checks.append(_check("bessel_leading_ratio_final", dev[-1], 0.05))
    asym = bessel_asym_ratio_deviation(cluster, bscales)
    checks.append(_decreasing("bessel_asymptotic_ratio_decreasing", asym))
    return checks


SUITES: dict[str, Callable[[int], list[Check]]] = {
    "matcore": matcore_suite,
    "expansions": expansions_suite,
    "specfun": specfun_suite,
}


def run(suite: str, seed: int) -> list[Check]:
    if suite == "all":
        return [c for name in SUITES for c in SUITES[name](seed)]
    if suite not in SUITES:
        raise KeyError(suite)
    return SUITES[suite](seed)
