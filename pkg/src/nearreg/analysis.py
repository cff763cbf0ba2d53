"""Condition numbers, regularization-matrix norms and the proposition checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import RegMethod, build_modification

__all__ = [
    "MethodDiagnostics",
    "kappa_normal",
    "frob_norm_reg",
    "relative_error",
    "diagnostics",
    "ClaimResult",
    "PropositionReport",
    "verify_propositions",
    "random_spectrum",
]

REL_SLACK = 1e-12
PROBE = 1e-6


def kappa_normal(sigma, dsq) -> float:
    """Spectral condition number of ``A.T A + L.T L``.

    Only positive eigenvalues of the modified diagonal take part.
    """
    eig = np.asarray(sigma, dtype=float) ** 2 + np.asarray(dsq, dtype=float)
    pos = eig[eig > 0]
    if pos.size == 0:
        raise ValueError("regularized normal matrix has no positive eigenvalue")
    return float(pos.max() / pos.min())


def frob_norm_reg(sigma, dsq) -> float:
    """``||L||_F`` for ``L = diag(sqrt|dsq|) V.T``."""
    return math.sqrt(float(np.sum(np.abs(np.asarray(dsq, dtype=float)))))


def relative_error(x, x_true) -> float:
    x = np.asarray(x, dtype=float)
    x_true = np.asarray(x_true, dtype=float)
    nt = np.linalg.norm(x_true)
    if nt == 0:
        raise ValueError("x_true is zero")
    return float(np.linalg.norm(x - x_true) / nt)


@dataclass(frozen=True)
class MethodDiagnostics:
    kappa: float
    frob_norm_L: float
    k_effective: int | None
    mu: float | None


def diagnostics(method: RegMethod, sigma) -> MethodDiagnostics:
    mod = build_modification(method, sigma)
    return MethodDiagnostics(
        kappa=kappa_normal(sigma, mod.dsq),
        frob_norm_L=frob_norm_reg(sigma, mod.dsq),
        k_effective=mod.k_effective,
        mu=method.mu,
    )


# proposition checks -----------------------------------------------------------
@dataclass(frozen=True)
class ClaimResult:
    claim: str
    verdict: str  # "pass", "fail" or "n/a"
    lhs: float = math.nan
    rhs: float = math.nan
    note: str = ""

    def line(self) -> str:
        return f"{self.claim} lhs={self.lhs!r} rhs={self.rhs!r} verdict={self.verdict}" + (
            f" note={self.note}" if self.note else ""
        )


@dataclass
class PropositionReport:
    results: list[ClaimResult]

    @property
    def failures(self) -> list[ClaimResult]:
        return [r for r in self.results if r.verdict == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def count(self, verdict: str) -> int:
        return sum(r.verdict == verdict for r in self.results)

    def to_text(self) -> str:
        return "\n".join(r.line() for r in self.results) + "\n"


def _le(a, b):
    return a <= b * (1 + REL_SLACK) + 0.0


RESOLVABLE_GAP = 1e-10


def _lt(a, b, gap=1.0):
    """Strict ``a < b`` with a relative margin above ``REL_SLACK``.

    ``gap`` is the exact relative gap ``(b - a) / b`` known in closed form.
    When it is too small to be resolved in floating point (for instance
    ``mu**2 / sigma_1**2`` for tiny ``mu``) only ``a <= b`` is demanded.
    """
    if gap > RESOLVABLE_GAP:
        return a < b * (1 - REL_SLACK)
    return _le(a, b)


def _eq(a, b):
    return abs(a - b) <= REL_SLACK * max(abs(a), abs(b))


def _claim(name, ok, lhs=math.nan, rhs=math.nan, note=""):
    return ClaimResult(name, "pass" if ok else "fail", float(lhs), float(rhs), note)


def _na(name, note):
    return ClaimResult(name, "n/a", note=note)


def _kn(method, sigma):
    return kappa_normal(sigma, build_modification(method, sigma).dsq)


def _fn(method, sigma):
    return frob_norm_reg(sigma, build_modification(method, sigma).dsq)


def verify_propositions(sigma, mu: float, theta: float = 0.5) -> PropositionReport:
    """Check the condition-number and norm relations among the modified methods.

    ``sigma`` must be positive and nonincreasing. Claims whose hypotheses do
    not hold for the given ``mu`` are reported as ``n/a``. Equivalences are
    checked at ``mu`` itself and at probes just above and below the
    threshold.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 1 or sigma.size < 2 or np.any(np.diff(sigma) > 0) or sigma[-1] <= 0:
        raise ValueError("sigma must be positive, nonincreasing, with at least 2 entries")
    n = sigma.size
    s1, sn = sigma[0], sigma[-1]
    out: list[ClaimResult] = []

    def tik(m):
        return RegMethod("tikhonov", mu=m)

    def fr(m):
        return RegMethod("frmod", mu=m)

    def sh(m, k=None):
        return RegMethod("shiftk", mu=m, k=k)

    kappa_ata = s1**2 / sn**2
    in_band = sn <= mu <= s1
    k_shift = build_modification(sh(mu), sigma).k_effective

    # -- both condition numbers bounded by kappa(A.T A)
    if in_band:
        lhs = max(_kn(fr(mu), sigma), _kn(tik(mu), sigma))
        out.append(_claim("frmod-tik/kappa-bounded", _le(lhs, kappa_ata), lhs, kappa_ata))
    else:
        out.append(_na("frmod-tik/kappa-bounded", "mu outside [sigma_n, sigma_1]"))

    # -- kappa(FrMod) <= kappa(Tik)  <=>  mu^2 >= s1*sn
    thr = math.sqrt(s1 * sn)

    def kappa_order(m):
        a, b = _kn(fr(m), sigma), _kn(tik(m), sigma)
        return a <= b, m * m >= s1 * sn, a, b

    if not in_band:
        out.append(_na("frmod-tik/kappa-order", "mu outside [sigma_n, sigma_1]"))
    elif abs(mu * mu / (s1 * sn) - 1) < 1e-9:
        out.append(_na("frmod-tik/kappa-order", "mu indistinguishable from the threshold"))
    else:
        left, right, a, b = kappa_order(mu)
        out.append(_claim("frmod-tik/kappa-order", left == right, a, b))
    # the kappa gap at relative offset d is about 2 (sigma_n/sigma_1) d
    delta = min(max(PROBE, 1e-9 * s1 / sn), 0.1)
    for tag, m in (("above", thr * (1 + delta)), ("below", thr * (1 - delta))):
        left, right, a, b = kappa_order(m)
        out.append(_claim(f"frmod-tik/kappa-order/probe-{tag}", left == right and left == (tag == "above"), a, b))

    # -- ShiftK
    if k_shift >= 1:
        ks = _kn(sh(mu), sigma)
        formula = s1**2 / (sn**2 + mu**2)
        out.append(_claim("shiftk/kappa-formula", _eq(ks, formula), ks, formula))
        kt = _kn(tik(mu), sigma)
        # strict inequality exactly when mu != 0
        gap = mu**2 / (s1**2 + mu**2)
        ok = _lt(ks, kt, gap) if mu != 0 else _eq(ks, kt)
        out.append(_claim("shiftk/kappa-below-tik", ok, ks, kt))
        k0s, k0t = _kn(sh(0.0, k_shift), sigma), _kn(tik(0.0), sigma)
        out.append(_claim("shiftk/kappa-below-tik/probe-mu0", _eq(k0s, k0t), k0s, k0t))
        nl, nm = _fn(sh(mu), sigma), math.sqrt(n) * mu
        out.append(_claim("shiftk/norm-below-tik", _lt(nl, nm, k_shift / (2 * n)), nl, nm))
        if sn <= mu < s1:
            kf = _kn(fr(mu), sigma)
            out.append(_claim("shiftk/kappa-below-frmod", _lt(ks, kf, sn**2 / (sn**2 + mu**2)), ks, kf))
            # rank-deficient variant: equality
            sig0 = sigma.copy()
            sig0[-1] = 0.0
            k0 = build_modification(sh(mu), sig0).k_effective
            if k0 >= 1 and mu < s1:
                a = kappa_normal(sig0, build_modification(sh(mu), sig0).dsq)
                b = kappa_normal(sig0, build_modification(fr(mu), sig0).dsq)
                out.append(_claim("shiftk/kappa-equals-frmod-rank-deficient", _eq(a, b), a, b))
        else:
            out.append(_na("shiftk/kappa-below-frmod", "mu outside [sigma_n, sigma_1)"))
    else:
        out.append(_na("shiftk", "split index k_mu = 0"))

    # -- CutK; checked for every k = 1..n
    kc = lambda k: RegMethod("cutk", k=k)  # noqa: E731
    if sn <= mu < s1:
        kf = _kn(fr(mu), sigma)
        bad_cut = []
        for k in range(1, n + 1):
            kk = _kn(kc(k), sigma)
            formula = s1**2 / sigma[k - 1] ** 2
            if not _eq(kk, formula):
                bad_cut.append(f"kappa k={k}")
            left = _le(kk, kf)
            right = mu <= sigma[k - 1] * (1 + REL_SLACK)
            if left != right:
                bad_cut.append(f"order k={k}")
        out.append(_claim("cutk/kappa-formula+order-vs-frmod", not bad_cut, note=";".join(bad_cut)))
        kcut = int(np.count_nonzero(sigma > mu))
        if kcut >= 1:
            for tag, m in (("above", sigma[kcut - 1] * (1 + PROBE)), ("below", sigma[kcut - 1] * (1 - PROBE))):
                if not sn <= m < s1:
                    continue
                a, b = _kn(kc(kcut), sigma), _kn(fr(m), sigma)
                out.append(_claim(f"cutk/order-vs-frmod/probe-{tag}", _le(a, b) == (tag == "below"), a, b))
    else:
        out.append(_na("cutk/order-vs-frmod", "mu outside [sigma_n, sigma_1)"))

    if k_shift >= 1:
        ksh = _kn(sh(mu), sigma)
        bad_shift = []
        for k in range(1, n + 1):
            left = _le(_kn(kc(k), sigma), ksh)
            right = mu * mu + sn**2 <= sigma[k - 1] ** 2 * (1 + REL_SLACK)
            if left != right:
                bad_shift.append(f"k={k}")
        out.append(_claim("cutk/order-vs-shiftk", not bad_shift, note=";".join(bad_shift)))
    else:
        out.append(_na("cutk/order-vs-shiftk", "split index k_mu = 0"))

    kcut = int(np.count_nonzero(sigma > mu))
    if 1 <= kcut and mu > 0:
        a, b = _fn(kc(kcut), sigma), _fn(sh(mu, kcut), sigma)
        out.append(_claim("cutk/norm-below-shiftk", _le(a, b), a, b))
    else:
        out.append(_na("cutk/norm-below-shiftk", "mu >= sigma_1"))

    # -- Scaled
    if mu > 0:
        sc = RegMethod("scaled", mu=mu)
        a, b = _kn(sc, sigma), _kn(tik(mu), sigma)
        out.append(_claim("scaled/kappa-equals-tik", _eq(a, b), a, b))
        a, b = _fn(sc, sigma), math.sqrt(n) * mu
        out.append(_claim("scaled/norm-below-tik", _lt(a, b, 1 / (2 * n)), a, b))

        # -- ScaledK
        sk = RegMethod("scaledk", mu=mu)
        k_sk = build_modification(sk, sigma).k_effective
        a, b = _kn(sk, sigma), _kn(tik(mu), sigma)
        out.append(_claim("scaledk/kappa-equals-tik", _eq(a, b), a, b))
        a, b = _fn(sk, sigma) ** 2, (n - k_sk) * mu**2
        tail_gap = float(np.mean((mu**2 + sigma[k_sk:] ** 2) / (s1**2 + mu**2)))
        out.append(_claim("scaledk/norm-below-shiftk-bound", _lt(a, b, tail_gap), a, b))
        if k_sk >= 1:
            out.append(_claim("scaledk/shiftk-bound-below-tik", _lt(b, n * mu**2, k_sk / n), b, n * mu**2))
        else:
            out.append(_na("scaledk/shiftk-bound-below-tik", "split index k_mu = 0"))

        # -- norm relations at a common split index
        a, b = _fn(sk, sigma), _fn(sh(mu, k_sk), sigma)
        out.append(_claim("scaledk/norm-below-shiftk", _lt(a, b, tail_gap / 2), a, b))
        a, b = _fn(sk, sigma), _fn(sc, sigma)
        if k_sk >= 1 and s1 > sigma[k_sk - 1]:
            head = mu**2 * (s1**2 - sigma[1:k_sk] ** 2) / (s1**2 + mu**2)
            gap = float(np.sum(head)) / (2 * b * b)
            out.append(_claim("scaledk/norm-below-scaled", _lt(a, b, gap), a, b))
        else:
            out.append(_claim("scaledk/norm-at-most-scaled", _le(a, b), a, b))
    else:
        out.append(_na("scaled", "mu = 0"))

    # -- ScaledK with sigma_k > mu^2/sigma_1 >= sigma_{k+1} against FrMod
    if 0 < mu < s1:
        k5 = int(np.count_nonzero(sigma > mu * mu / s1))
        a = _fn(RegMethod("scaledk", mu=mu, k=k5), sigma)
        b = _fn(fr(mu), sigma)
        out.append(_claim("scaledk/norm-below-frmod", _le(a, b), a, b))
    else:
        out.append(_na("scaledk/norm-below-frmod", "mu outside (0, sigma_1)"))

    # -- theta family at a common split index (ShiftK's, feasible for all theta)
    if k_shift >= 1 and mu > 0:
        thetas = sorted({0.0, 0.25, 0.5, 0.75, 1.0, float(theta)})
        th = [RegMethod("theta", mu=mu, k=k_shift, theta=t) for t in thetas]
        norms = [_fn(m, sigma) for m in th]
        kappas = [_kn(m, sigma) for m in th]
        out.append(_claim(
            "theta/norm-nonincreasing",
            all(_le(b, a) for a, b in zip(norms, norms[1:])),
            norms[0], norms[-1],
        ))
        # consecutive kappas differ by (t2 - t1) mu^2 / (s1^2 + t2 mu^2) relative
        inc = all(
            _lt(a, b, (t2 - t1) * mu**2 / (s1**2 + t2 * mu**2))
            for (t1, a), (t2, b) in zip(zip(thetas, kappas), zip(thetas[1:], kappas[1:]))
        )
        out.append(_claim("theta/kappa-increasing", inc, kappas[0], kappas[-1]))
        k0, k1 = kappas[0], kappas[-1]
        bad = [
            t for t, kt in zip(thetas, kappas)
            if not _eq(kt, (1 - t) * k0 + t * k1) or not _eq(kt, (s1**2 + t * mu**2) / (sn**2 + mu**2))
        ]
        out.append(_claim("theta/kappa-affine", not bad, note=";".join(map(str, bad))))
    else:
        out.append(_na("theta", "split index k_mu = 0"))

    return PropositionReport(out)


def random_spectrum(rng: np.random.Generator, n: int = 30, decades: float = 8.0) -> np.ndarray:
    """Positive nonincreasing spectrum with log-uniform entries in ``[10**-decades, 1]``."""
    return np.sort(10.0 ** rng.uniform(-decades, 0.0, n))[::-1]
