"""Dense real linear algebra used by the spectral solvers.

The SVD is delegated to LAPACK through :func:`numpy.linalg.svd`; everything
here returns plain ``ndarray`` objects so callers can keep using numpy idioms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

__all__ = [
    "SingularRegularizedSystem",
    "SvdFactorization",
    "svd",
    "numerical_rank",
    "random_orthogonal",
    "dct_matrix",
    "solve_normal_equations_oracle",
    "frobenius_norm",
    "euclidean_norm",
    "orthogonality_residual",
]

DEFAULT_RANK_TOL = 1e-14


class SingularRegularizedSystem(np.linalg.LinAlgError):
    """The regularized normal-equations matrix is singular."""


@dataclass(frozen=True)
class SvdFactorization:
    """Full SVD ``A = U @ diag(sigma) @ V.T`` with ``U`` m x m and ``V`` n x n.

    Singular values are nonincreasing. Each column of ``U`` is normalized so
    that its largest-magnitude entry is positive (``V`` is flipped to match).
    """

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.U.shape[0], self.V.shape[0]

    def reconstruct(self) -> np.ndarray:
        m, n = self.shape
        return (self.U[:, :n] * self.sigma) @ self.V.T


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def svd(A) -> SvdFactorization:
    """Full singular value decomposition of an ``m x n`` matrix with ``m >= n``.

    Raises
    ------
    ValueError
        If ``m < n`` (transpose and relabel before calling) or ``A`` has
        non-finite entries.
    numpy.linalg.LinAlgError
        If the LAPACK kernel fails to converge.
    """
    A = _as_matrix(A)
    m, n = A.shape
    if m < n:
        raise ValueError(f"svd requires m >= n, got {m} x {n}")
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    V = Vt.T.copy()
    # sign convention on the first n left singular vectors
    idx = np.argmax(np.abs(U[:, :n]), axis=0)
    signs = np.sign(U[idx, np.arange(n)])
    signs[signs == 0] = 1.0
    U[:, :n] *= signs
    V *= signs
    return SvdFactorization(U=U, sigma=s, V=V)


def numerical_rank(sigma, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values strictly above ``tol * sigma[0]``."""
    sigma = np.asarray(sigma, dtype=float)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if sigma.size == 0 or sigma[0] == 0:
        return 0
    return int(np.count_nonzero(sigma > tol * sigma[0]))


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random orthogonal matrix from the QR factorization of a Gaussian matrix.

    The diagonal of ``R`` is made positive, which gives the Haar distribution.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    G = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    d = np.sign(np.diag(R))
    d[d == 0] = 1.0
    return Q * d


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix ``C`` with ``C @ x`` the transform of ``x``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    j = np.arange(n)[:, None]
    t = np.arange(n)[None, :]
    C = np.cos(np.pi * (2 * t + 1) * j / (2 * n))
    C[0] *= np.sqrt(1.0 / n)
    C[1:] *= np.sqrt(2.0 / n)
    return C


def solve_normal_equations_oracle(A, dsq, V, b) -> np.ndarray:
    """Solve ``(A.T A + V diag(dsq) V.T) x = A.T b`` by a dense factorization.

    Only meant as an independent check on the spectral solvers. Cholesky is
    tried first; an LU solve is the fallback for indefinite ``dsq``.
    """
    A = _as_matrix(A)
    V = np.asarray(V, dtype=float)
    dsq = np.asarray(dsq, dtype=float)
    b = np.asarray(b, dtype=float)
    M = A.T @ A + (V * dsq) @ V.T
    M = (M + M.T) / 2
    rhs = A.T @ b
    try:
        c, low = la.cho_factor(M)
        return la.cho_solve((c, low), rhs)
    except la.LinAlgError:
        pass
    try:
        x = la.solve(M, rhs, assume_a="sym")
    except la.LinAlgError as exc:
        raise SingularRegularizedSystem(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularRegularizedSystem("regularized normal equations are singular")
    return x


def frobenius_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(M, dtype=float), "fro"))


def euclidean_norm(x) -> float:
    return float(np.linalg.norm(np.asarray(x, dtype=float)))


def orthogonality_residual(Q) -> float:
    """``||Q.T Q - I||_F``."""
    Q = np.asarray(Q, dtype=float)
    return frobenius_norm(Q.T @ Q - np.eye(Q.shape[1]))
