"""Regularization-parameter selection.

The discrepancy principle picks ``mu`` for standard Tikhonov (shared by all
modified methods) and ``k`` for TSVD. :func:`optimal_params` picks the
parameter that minimizes the true error, for oracle experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .filters import RegMethod, SpectralProblem, build_modification, spectral_solution

__all__ = [
    "NoiseDominatesData",
    "DiscrepancyUnattainable",
    "DiscrepancySpec",
    "tikhonov_residual",
    "tsvd_residual_sq",
    "discrepancy_mu",
    "discrepancy_k",
    "SharedMu",
    "shared_mu_pipeline",
    "OptimalParam",
    "optimal_params",
]

_RTOL = 1e-10
_MAX_ITER = 100


class NoiseDominatesData(ValueError):
    """``eta * epsilon >= ||b||``: the zero solution already fits the data."""


class DiscrepancyUnattainable(ValueError):
    """No parameter value brings the residual down to ``eta * epsilon``."""


@dataclass(frozen=True)
class DiscrepancySpec:
    epsilon: float
    eta: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not self.eta >= 1:
            raise ValueError("eta must be >= 1")

    @property
    def target(self) -> float:
        return self.eta * self.epsilon


def _split_data(sp: SpectralProblem):
    """Data in the live components and the squared residual floor."""
    n = sp.n
    bt = sp.b_tilde
    live = sp.sigma > 0
    floor_sq = float(np.sum(bt[n:] ** 2) + np.sum(bt[:n][~live] ** 2))
    return sp.sigma[live] ** 2, bt[:n][live] ** 2, floor_sq


def tikhonov_residual(sp: SpectralProblem, mu: float) -> float:
    """``||Sigma x_mu - b_tilde||`` for standard Tikhonov."""
    s2, b2, floor_sq = _split_data(sp)
    nu = mu * mu
    c = nu / (s2 + nu)
    return math.sqrt(float(np.sum(c * c * b2)) + floor_sq)


def discrepancy_mu(sp: SpectralProblem, spec: DiscrepancySpec) -> float:
    """Solve ``||Sigma x_mu - b_tilde|| = eta * epsilon`` for ``mu > 0``.

    Newton's method on ``g(nu) = rho(nu)**2 - target**2`` with ``nu = mu**2``,
    stepping in ``log(nu)`` and falling back to bisection whenever a step
    leaves the current bracket.
    """
    s2, b2, floor_sq = _split_data(sp)
    target = spec.target
    target_sq = target * target
    total = math.sqrt(float(np.sum(b2)) + floor_sq)
    if target >= total:
        raise NoiseDominatesData(f"eta*epsilon = {target:.6g} >= ||b|| = {total:.6g}")
    if target_sq <= floor_sq:
        raise DiscrepancyUnattainable(
            f"eta*epsilon = {target:.6g} <= residual floor {math.sqrt(floor_sq):.6g}"
        )

    def g_and_slope(t):
        # slope is d g / d log(nu)
        nu = math.exp(t)
        d = s2 + nu
        c = nu / d
        g = float(np.sum(c * c * b2)) + floor_sq - target_sq
        slope = float(np.sum(2.0 * c * c * b2 * s2 / d))
        return g, slope

    s1sq = float(s2.max())
    hi = math.log(2.0 * target * s1sq / (total - target))
    g_hi, _ = g_and_slope(hi)
    while g_hi < 0:
        hi += math.log(10.0)
        g_hi, _ = g_and_slope(hi)
    lo = hi - math.log(1e4)
    g_lo, _ = g_and_slope(lo)
    while g_lo > 0:
        lo -= math.log(1e4)
        if lo < math.log(1e-300):
            raise DiscrepancyUnattainable("residual floor is numerically indistinguishable from eta*epsilon")
        g_lo, _ = g_and_slope(lo)

    t = 0.5 * (lo + hi)
    for _ in range(_MAX_ITER):
        g, slope = g_and_slope(t)
        rho = math.sqrt(max(g + target_sq, 0.0))
        if abs(rho - target) <= 0.01 * _RTOL * target:
            return math.exp(0.5 * t)
        if g < 0:
            lo = t
        else:
            hi = t
        step_ok = slope > 0
        if step_ok:
            t_new = t - g / slope
            step_ok = lo < t_new < hi
        t = t_new if step_ok else 0.5 * (lo + hi)
        if hi - lo < 1e-15:
            break
    mu = math.exp(0.5 * t)
    if abs(tikhonov_residual(sp, mu) - target) <= _RTOL * target:
        return mu
    raise RuntimeError("discrepancy equation did not converge")


def tsvd_residual_sq(sp: SpectralProblem) -> np.ndarray:
    """Squared TSVD residuals for ``k = 0..rank``."""
    b2 = sp.b_tilde**2
    tails = np.append(np.cumsum(b2[::-1])[::-1], 0.0)
    return tails[: sp.rank + 1]


def discrepancy_k(sp: SpectralProblem, spec: DiscrepancySpec) -> int:
    """Smallest truncation index whose residual is at most ``eta * epsilon``."""
    tails = tsvd_residual_sq(sp)
    ok = np.flatnonzero(tails <= spec.target**2)
    if ok.size == 0:
        raise DiscrepancyUnattainable(
            f"TSVD residual at full rank {math.sqrt(tails[-1]):.6g} exceeds eta*epsilon"
        )
    return int(ok[0])


@dataclass(frozen=True)
class SharedMu:
    """One ``mu`` from the Tikhonov discrepancy equation, reused by every method."""

    mu: float
    methods: dict[str, RegMethod] = field(default_factory=dict)
    k_effective: dict[str, int | None] = field(default_factory=dict)


def shared_mu_pipeline(sp: SpectralProblem, spec: DiscrepancySpec, methods) -> SharedMu:
    """Bind the discrepancy ``mu`` (and TSVD ``k``) into each method template."""
    mu = discrepancy_mu(sp, spec)
    bound, ks = {}, {}
    for m in methods:
        if m.kind == "tsvd":
            k = discrepancy_k(sp, spec)
            bound[m.label] = m.with_k(k)
            ks[m.label] = k
        else:
            mm = m.with_mu(mu)
            bound[m.label] = mm
            ks[m.label] = build_modification(mm, sp.sigma).k_effective
    return SharedMu(mu=mu, methods=bound, k_effective=ks)


# oracle-optimal parameters ----------------------------------------------------
@dataclass(frozen=True)
class OptimalParam:
    method: RegMethod
    rel_error: float
    grid_best: float


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def optimal_params(
    sp: SpectralProblem, x_true, method: RegMethod, n_grid: int = 50, rtol: float = 1e-6
) -> OptimalParam:
    """Parameter of ``method`` minimizing ``||x - x_true|| / ||x_true||``.

    TSVD scans every ``k`` in ``[0, rank]``. Other methods pre-scan a log grid
    over ``[sigma_rank * 1e-3, sigma_1 * 1e3]`` and refine the best bracket by
    golden-section search on ``log(mu)``.
    """
    xt = sp.V.T @ np.asarray(x_true, dtype=float)
    xnorm = float(np.linalg.norm(xt))
    if xnorm == 0:
        raise ValueError("x_true is zero")

    if method.kind == "tsvd":
        r = sp.rank
        coef = sp.b_tilde[:r] / sp.sigma[:r]
        head = np.concatenate([[0.0], np.cumsum((coef - xt[:r]) ** 2)])
        tail = np.concatenate([np.cumsum((xt**2)[::-1])[::-1], [0.0]])[: r + 1]
        err = np.sqrt(np.maximum(head + tail, 0.0)) / xnorm
        k = int(np.argmin(err))
        return OptimalParam(method.with_k(k), float(err[k]), float(err[k]))

    def err_at(logmu):
        x = spectral_solution(sp, method.with_mu(math.exp(logmu)))
        return float(np.linalg.norm(x - xt)) / xnorm

    s_lo = sp.sigma[max(sp.rank, 1) - 1]
    grid = np.linspace(math.log(s_lo * 1e-3), math.log(sp.sigma[0] * 1e3), n_grid)
    errs = [err_at(t) for t in grid]
    i = int(np.argmin(errs))
    best_t, best_e = grid[i], errs[i]
    grid_best = best_e

    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n_grid - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = err_at(c), err_at(d)
    width = math.log1p(rtol)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = err_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = err_at(d)
        for t, e in ((c, fc), (d, fd)):
            if e < best_e:
                best_t, best_e = t, e
    return OptimalParam(method.with_mu(math.exp(best_t)), best_e, grid_best)
