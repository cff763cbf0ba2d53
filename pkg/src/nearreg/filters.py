"""Spectral filtering for TSVD, Tikhonov and the SVD-based modified families.

Every method is a diagonal modification ``dsq`` added to ``sigma**2`` in
the right singular basis, i.e. the regularization matrix is
``L = diag(sqrt(dsq)) @ V.T``. Only ``dsq`` is ever stored.

Method kinds
------------
========== ======================================================================
tsvd       keep the first ``k`` components
tikhonov   ``dsq = mu**2``
frmod      ``dsq = max(mu**2 - sigma**2, 0)``
shiftk     ``dsq = mu**2`` on the trailing ``n - k`` components
cutk       ``dsq = -sigma**2`` on the trailing block (same solution as TSVD)
scaled     ``dsq = mu**2 / (s1**2 + mu**2) * (s1**2 - sigma**2)``
scaledk    as ``scaled`` on the trailing block only
theta      ``mu**2 / (s1**2 + theta mu**2) * (s1**2 - theta sigma**2)`` trailing
========== ======================================================================

For ``shiftk``, ``scaledk`` and ``theta`` the split index ``k`` is, unless
given explicitly, the largest ``k`` in ``[0, n-1]`` that keeps the modified
diagonal ``sigma**2 + dsq`` nonincreasing.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .linalg import SvdFactorization, numerical_rank, DEFAULT_RANK_TOL

__all__ = [
    "METHOD_KINDS",
    "MU_KINDS",
    "UnregularizedNullComponent",
    "UnregularizedComponentWarning",
    "RegMethod",
    "SpectralProblem",
    "DiagonalModification",
    "to_spectral",
    "build_modification",
    "spectral_solution",
    "solve_spectral",
    "filter_factors",
    "filter_factor_csv",
]

METHOD_KINDS = ("tsvd", "tikhonov", "frmod", "shiftk", "cutk", "scaled", "scaledk", "theta")
MU_KINDS = ("tikhonov", "frmod", "shiftk", "cutk", "scaled", "scaledk", "theta")
_SPLIT_KINDS = ("shiftk", "scaledk", "theta")


class UnregularizedNullComponent(ArithmeticError):
    """A component with positive singular value has a zero denominator."""


class UnregularizedComponentWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class RegMethod:
    """A regularization method and its parameters.

    ``mu`` is required by every kind except ``tsvd``; ``k`` is required by
    ``tsvd`` and optional elsewhere (it overrides the automatic split index
    for ``shiftk``/``scaledk``/``theta`` and replaces ``mu`` for ``cutk``).
    """

    kind: str
    mu: float | None = None
    k: int | None = None
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in METHOD_KINDS:
            raise ValueError(f"unknown method kind {self.kind!r}")
        if self.mu is not None and not self.mu >= 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")
        if self.k is not None and self.k < 0:
            raise ValueError(f"k must be nonnegative, got {self.k}")
        if self.kind == "theta":
            if self.theta is None or not 0.0 <= self.theta <= 1.0:
                raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        elif self.theta is not None:
            raise ValueError(f"theta is only meaningful for kind 'theta', not {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "theta":
            return f"theta:{self.theta:g}"
        return self.kind

    @property
    def uses_mu(self) -> bool:
        return self.kind in MU_KINDS

    def with_mu(self, mu: float) -> "RegMethod":
        return replace(self, mu=float(mu))

    def with_k(self, k: int) -> "RegMethod":
        return replace(self, k=int(k))

    @classmethod
    def parse(cls, text: str) -> "RegMethod":
        """Parse a method label such as ``shiftk`` or ``theta:0.5``."""
        text = text.strip().lower()
        aliases = {"mui": "tikhonov", "tik": "tikhonov", "identity": "tikhonov"}
        if text.startswith("theta"):
            _, sep, val = text.partition(":")
            if not sep:
                raise ValueError("theta methods need a value, e.g. 'theta:0.5'")
            return cls("theta", theta=float(val))
        return cls(aliases.get(text, text))


@dataclass(frozen=True)
class SpectralProblem:
    """A least-squares problem expressed in the SVD basis of ``A``."""

    sigma: np.ndarray
    b_tilde: np.ndarray
    V: np.ndarray
    rank: int

    @property
    def n(self) -> int:
        return self.sigma.shape[0]

    @property
    def m(self) -> int:
        return self.b_tilde.shape[0]

    def to_original(self, x_tilde) -> np.ndarray:
        return self.V @ x_tilde


@dataclass(frozen=True)
class DiagonalModification:
    dsq: np.ndarray
    k_effective: int | None = None


def to_spectral(factorization: SvdFactorization, b, tol: float = DEFAULT_RANK_TOL) -> SpectralProblem:
    b = np.asarray(b, dtype=float)
    U, sigma, V = factorization.U, factorization.sigma, factorization.V
    if b.shape != (U.shape[0],):
        raise ValueError(f"b has shape {b.shape}, expected ({U.shape[0]},)")
    return SpectralProblem(
        sigma=sigma.copy(), b_tilde=U.T @ b, V=V, rank=numerical_rank(sigma, tol)
    )


# split-index rules ------------------------------------------------------------
def _last_true(ok: np.ndarray) -> int:
    """1-based index of the last True entry of ``ok``, or 0."""
    idx = np.flatnonzero(ok)
    return int(idx[-1]) + 1 if idx.size else 0


def _split_index(kind: str, s2: np.ndarray, mu2: float, theta: float = 0.0) -> int:
    # junction test between positions k and k+1 (1-based), k = 1..n-1
    head, tail = s2[:-1], s2[1:]
    s12 = s2[0]
    if kind == "shiftk":
        ok = head >= tail + mu2
    elif kind == "scaledk":
        ok = head * (s12 + mu2) >= s12 * (tail + mu2)
    else:
        ok = head * (s12 + theta * mu2) >= s12 * (tail + mu2)
    return _last_true(ok)


def _cut_index(sigma: np.ndarray, mu: float) -> int:
    # sigma_{k+1} <= mu < sigma_k
    return int(np.count_nonzero(sigma > mu))


def _require_mu(method: RegMethod) -> float:
    if method.mu is None:
        raise ValueError(f"method {method.label!r} needs a value of mu")
    return float(method.mu)


def build_modification(method: RegMethod, sigma) -> DiagonalModification:
    """Diagonal ``dsq`` of ``L.T L`` in the right singular basis."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0]
    s2 = sigma**2
    kind = method.kind

    if kind in ("tsvd", "cutk"):
        if method.k is not None:
            k = method.k
        elif kind == "cutk":
            k = _cut_index(sigma, _require_mu(method))
        else:
            raise ValueError("tsvd needs a truncation index k")
        if k > n:
            raise ValueError(f"k = {k} exceeds n = {n}")
        dsq = np.zeros(n)
        dsq[k:] = -s2[k:]
        return DiagonalModification(dsq, k)

    mu = _require_mu(method)
    mu2 = mu * mu
    if kind == "tikhonov":
        return DiagonalModification(np.full(n, mu2))
    if kind == "frmod":
        return DiagonalModification(np.maximum(mu2 - s2, 0.0))
    if kind == "scaled":
        dsq = mu2 / (s2[0] + mu2) * (s2[0] - s2)
        dsq[0] = 0.0
        return DiagonalModification(dsq)

    # shiftk / scaledk / theta
    theta = 1.0 if kind == "scaledk" else (method.theta or 0.0)
    if method.k is not None:
        k = method.k
        if k > n:
            raise ValueError(f"k = {k} exceeds n = {n}")
    else:
        k = _split_index(kind, s2, mu2, theta)
    dsq = np.zeros(n)
    if kind == "shiftk":
        dsq[k:] = mu2
    else:
        dsq[k:] = mu2 / (s2[0] + theta * mu2) * (s2[0] - theta * s2[k:])
    return DiagonalModification(dsq, k)


# solving ----------------------------------------------------------------------
def spectral_solution(sp: SpectralProblem, method: RegMethod, strict: bool = False) -> np.ndarray:
    """Coefficients ``x_tilde = V.T x`` of the regularized solution."""
    sigma = sp.sigma
    n = sp.n
    if method.kind == "tsvd":
        if method.k is None:
            raise ValueError("tsvd needs a truncation index k")
        if method.k > sp.rank:
            raise ValueError(f"tsvd index k = {method.k} exceeds the rank {sp.rank}")
    mod = build_modification(method, sigma)
    denom = sigma**2 + mod.dsq
    bt = sp.b_tilde[:n]
    x = np.zeros(n)
    live = denom > 0
    x[live] = sigma[live] * bt[live] / denom[live]

    if method.kind not in ("tsvd", "cutk"):
        dead = ~live & (sigma > 0) & (bt != 0)
        if np.any(dead):
            msg = f"{int(dead.sum())} component(s) with positive singular value are unregularized"
            if strict:
                raise UnregularizedNullComponent(msg)
            warnings.warn(msg, UnregularizedComponentWarning, stacklevel=2)
    return x


def solve_spectral(sp: SpectralProblem, method: RegMethod, strict: bool = False) -> np.ndarray:
    """Regularized solution in the original coordinates."""
    return sp.to_original(spectral_solution(sp, method, strict=strict))


def filter_factors(sp_or_sigma, method: RegMethod, rank: int | None = None) -> np.ndarray:
    """Filter factors ``phi_j`` for ``j = 1..rank`` from their closed forms.

    Accepts a :class:`SpectralProblem` or a bare singular-value vector.
    """
    if isinstance(sp_or_sigma, SpectralProblem):
        sigma = sp_or_sigma.sigma
        rank = sp_or_sigma.rank if rank is None else rank
    else:
        sigma = np.asarray(sp_or_sigma, dtype=float)
        rank = numerical_rank(sigma) if rank is None else rank
    s = sigma[:rank]
    s2 = s**2
    kind = method.kind

    if kind in ("tsvd", "cutk"):
        k = build_modification(method, sigma).k_effective
        return (np.arange(rank) < k).astype(float)

    mu2 = _require_mu(method) ** 2
    if kind == "tikhonov":
        return s2 / (s2 + mu2)
    if kind == "frmod":
        return np.where(s2 >= mu2, 1.0, s2 / mu2 if mu2 > 0 else 1.0)
    s12 = sigma[0] ** 2
    if kind == "scaled":
        phi = s2 * (s12 + mu2) / (s12 * (s2 + mu2))
        phi[:1] = 1.0
        return phi

    k = build_modification(method, sigma).k_effective
    if kind == "shiftk":
        tail = s2 / (s2 + mu2)
    else:
        theta = 1.0 if kind == "scaledk" else method.theta
        tail = s2 * (s12 + theta * mu2) / (s12 * (s2 + mu2))
    return np.where(np.arange(rank) < k, 1.0, tail)


def filter_factor_csv(sp: SpectralProblem, methods: list[RegMethod]) -> str:
    """CSV with columns ``j, sigma_j`` and one ``phi`` column per method."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "sigma_j"] + [f"phi_{m.label}" for m in methods])
    cols = [filter_factors(sp, m) for m in methods]
    for j in range(sp.rank):
        w.writerow([j + 1, repr(float(sp.sigma[j]))] + [repr(float(c[j])) for c in cols])
    return buf.getvalue()
