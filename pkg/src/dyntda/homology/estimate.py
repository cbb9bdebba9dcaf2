"""Stochastic estimation of normalized Betti numbers.

The estimator targets ``beta_r / |S_r| = tr(P_0) / |S_r|`` where ``P_0`` is the
projector onto ``ker L_r``. ``P_0`` is replaced by a Chebyshev polynomial
``f(L_r)`` that is close to 1 on ``[0, gap/2]`` and close to 0 on
``[gap, lambda_max]``, and the trace by a Rademacher (Hutchinson) average. The
probe count follows Hoeffding's bound so that
``|estimate - beta_r/|S_r|| <= eps`` with probability at least ``1 - eta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.special import erfc, erfcinv

from ..cliquecomplex import CliqueComplex
from ..errors import FilterDegreeError, GapTooSmallError, UndefinedMultiplicativeError
from .betti import BettiReport, laplacian_kernel_dim
from .chains import laplacian

GAP_FLOOR = 1e-8
MAX_FILTER_DEGREE = 500


def probe_count(eps: float, eta: float) -> int:
    return math.ceil(2.0 / eps**2 * math.log(2.0 / eta))


@dataclass(frozen=True, eq=False)
class StepFilter:
    """Polynomial ``f`` on ``[0, upper]`` approximating the kernel indicator."""

    poly: Chebyshev | None  # None means f == 1 (no nonzero spectrum)
    gap: float
    upper: float
    sup_error: float

    @property
    def degree(self) -> int:
        return 0 if self.poly is None else self.poly.degree()

    def __call__(self, x):
        if self.poly is None:
            return np.ones_like(np.asarray(x, dtype=float))
        return self.poly(x)

    def apply(self, L, Z: np.ndarray) -> np.ndarray:
        """``f(L) @ Z`` by the Chebyshev three-term recurrence."""
        if self.poly is None:
            return Z.copy()
        c = self.poly.coef
        half = self.upper / 2.0

        def X(V):  # maps spectrum [0, upper] onto [-1, 1]
            return (L @ V - half * V) / half

        T_prev, T_cur = Z, X(Z)
        out = c[0] * T_prev + (c[1] * T_cur if len(c) > 1 else 0.0)
        for k in range(2, len(c)):
            T_prev, T_cur = T_cur, 2.0 * X(T_cur) - T_prev
            out = out + c[k] * T_cur
        return out


def _check_points(gap: float, upper: float, deg: int) -> tuple[np.ndarray, np.ndarray]:
    k = 16 * (deg + 1) + 64
    return np.linspace(0.0, gap / 2.0, k), np.linspace(gap, upper, 4 * k)


def design_step_filter(gap: float, lam_max: float, eps: float, max_degree: int = MAX_FILTER_DEGREE) -> StepFilter:
    """Lowest-degree interpolant of a smoothed step with sup error <= eps/4."""
    if lam_max <= 0:
        return StepFilter(None, gap, 0.0, 0.0)
    budget = eps / 4.0
    upper = lam_max * (1.0 + 1e-9)
    centre = 0.75 * gap
    # smoothing tails contribute at most budget/4 at gap/2 and at gap
    width = (gap / 4.0) / erfcinv(budget / 2.0)

    def step(x):
        return 0.5 * erfc((x - centre) / width)

    deg, last_err = 2, math.inf
    while True:
        poly = Chebyshev.interpolate(step, deg, domain=[0.0, upper])
        lo, hi = _check_points(gap, upper, deg)
        err = max(np.max(np.abs(poly(lo) - 1.0)), np.max(np.abs(poly(hi))))
        if err <= budget:
            return StepFilter(poly, gap, upper, float(err))
        last_err = err
        if deg >= max_degree:
            raise FilterDegreeError(
                f"filter error {last_err:.3e} > {budget:.3e} at degree cap {max_degree} (gap {gap:.3e}, max {lam_max:.3e})"
            )
        deg = min(max_degree, max(deg + 1, int(deg * 1.25)))


@dataclass(frozen=True)
class NormalizedBettiEstimate:
    value: float
    eps: float
    eta: float
    probes: int
    s_r: int
    degree: int
    gap: float
    lambda_max: float


def spectral_summary(L) -> tuple[int, float, float]:
    """Kernel dimension, smallest nonzero eigenvalue and largest eigenvalue."""
    kdim, w, _ = laplacian_kernel_dim(L)
    nonzero = w[kdim:]
    if len(nonzero) == 0:
        return kdim, math.inf, 0.0
    return kdim, float(nonzero[0]), float(w[-1])


def hutchinson_mean(apply, n: int, probes: int, seed: int) -> float:
    """Mean of ``z^T A z / n`` over Rademacher probes, one seed substream per probe."""
    children = np.random.SeedSequence(seed).spawn(probes)
    Z = np.empty((n, probes))
    for k, child in enumerate(children):
        Z[:, k] = np.random.default_rng(child).integers(0, 2, size=n) * 2.0 - 1.0
    AZ = apply(Z)
    return float(np.mean(np.einsum("ij,ij->j", Z, AZ)) / n)


def betti_normalized_estimate(K: CliqueComplex, r: int, eps: float, eta: float, seed: int = 0,
                              gap_floor: float = GAP_FLOOR) -> NormalizedBettiEstimate:
    """Estimate ``beta_r / |S_r|`` to additive ``eps`` with confidence ``1 - eta``."""
    if not 0 < eps < 1 or not 0 < eta < 1:
        raise ValueError("eps and eta must lie in (0, 1)")
    L = laplacian(K, r).matrix
    n = L.shape[0]
    if n == 0:
        raise ValueError(f"S_{r} is empty")
    _, gap, lam_max = spectral_summary(L)
    if lam_max > 0 and gap < gap_floor:
        raise GapTooSmallError(gap, gap_floor)
    filt = design_step_filter(gap, lam_max, eps)
    m = probe_count(eps, eta)
    value = hutchinson_mean(lambda Z: filt.apply(L, Z), n, m, seed)
    return NormalizedBettiEstimate(
        float(np.clip(value, 0.0, 1.0)), eps, eta, m, n, filt.degree, gap, lam_max
    )


def attach_estimates(report: BettiReport, K: CliqueComplex, eps: float, eta: float, seed: int = 0) -> BettiReport:
    """Fill the estimate fields of every nonempty level of ``report``."""
    for entry in report.entries:
        if entry.s_r == 0:
            continue
        est = betti_normalized_estimate(K, entry.r, eps, eta, seed=seed + entry.r)
        report = report.with_entry(
            type(entry)(entry.r, entry.betti, entry.s_r, entry.normalized, est.value, eps, eta, est.probes)
        )
    return report


@dataclass(frozen=True)
class PrecisionConversion:
    eps: float
    hybrid_cost_factor: float  # |S_r|^2 / beta_r^2
    quantum_cost_factor: float  # sqrt(|S_r| / beta_r)


def multiplicative_precision(delta: float, betti: int, s_r: int) -> PrecisionConversion:
    """Additive accuracy giving relative accuracy ``delta`` on ``beta_r``, plus cost factors."""
    if betti < 1:
        raise UndefinedMultiplicativeError("multiplicative precision is undefined for beta_r = 0")
    if s_r < 1:
        raise ValueError("|S_r| must be >= 1")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return PrecisionConversion(delta * betti / s_r, (s_r * s_r) / (betti * betti), math.sqrt(s_r / betti))


def hybrid_repetitions(r: int, s_r: int, s_r1: int, eps: float, eta: float) -> float:
    """Informational: repetitions ``log(r |S_r| |S_{r+1}|) log(1/eta) / eps^2`` (constants dropped)."""
    return math.log(max(2, r * s_r * s_r1)) * math.log(1.0 / eta) / eps**2


def dirac_depth_estimate(n_vertices: int, n_edges: int, r: int, s_r: int, gap: float, eps: float, eta: float) -> float:
    """Informational circuit-depth figure for the block-encoded Dirac route; never asserted."""
    return (
        6 * n_edges * math.log(1.0 / eta) / math.sqrt(eps)
        * (math.pi / 2 * math.sqrt(math.comb(n_vertices, r) / s_r) + n_vertices / gap * math.log(1.0 / eps))
    )
