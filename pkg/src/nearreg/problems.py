"""Discrete ill-posed test problems: phillips, shaw, deriv2 and heat.

Each generator returns a square matrix ``A``, a discrete exact solution
``x_true`` and consistent data ``b_true = A @ x_true``.

Discretizations
---------------
phillips
    Galerkin with orthonormal box functions on ``[-6, 6]``. Entries are the
    exact double integrals ``(1/h) * int int phi(s - t)`` over pairs of cells,
    evaluated through the second antiderivative of ``phi``. ``x_true`` holds
    the Galerkin coefficients ``(1/sqrt(h)) * int phi`` over each cell.
shaw
    Midpoint (Nystrom) rule on ``[-pi/2, pi/2]``, ``A[i, j] = h * k(s_i, t_j)``
    and ``x_true[j] = x(t_j)``.
deriv2
    Galerkin with orthonormal box functions on ``[0, 1]`` for the Green's
    function of the second derivative. Off-diagonal entries are products of
    one-dimensional integrals; diagonal entries come from the exact integral
    over the split square. ``x_true`` holds Galerkin coefficients of the hat
    function ``x(t) = min(t, 1 - t)``.
heat
    Midpoint rule for the Volterra equation with kernel
    ``k(tau) = tau**-1.5 / (2 kappa sqrt(pi)) * exp(-1 / (4 kappa**2 tau))``,
    ``kappa = 1``, giving a lower-triangular Toeplitz matrix. ``x_true`` is the
    usual piecewise pulse supported on the first half of the interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np
from scipy.linalg import toeplitz

__all__ = [
    "TestProblem",
    "PROBLEMS",
    "phillips",
    "shaw",
    "deriv2",
    "heat",
    "make_problem",
    "heat_kernel",
    "deriv2_rhs_function",
    "write_matrix_text",
    "read_matrix_text",
]


@dataclass(frozen=True)
class TestProblem:
    # keep pytest from collecting this as a test class
    __test__ = False

    name: str
    A: np.ndarray
    x_true: np.ndarray
    b_true: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[1]


def _check_n(n, minimum=4, multiple=1, name="problem"):
    if not isinstance(n, (int, np.integer)) or n < minimum or n % multiple:
        msg = f"{name}: n must be an integer >= {minimum}"
        if multiple > 1:
            msg += f" divisible by {multiple}"
        raise ValueError(f"{msg}, got {n!r}")


def _finish(name, A, x):
    A = np.ascontiguousarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    return TestProblem(name=name, A=A, x_true=x, b_true=A @ x)


# phillips ---------------------------------------------------------------------
_C = np.pi / 3


def _phillips_phi1(x):
    """First antiderivative of ``phi`` vanishing at 0."""
    x = np.asarray(x, dtype=float)
    inner = x + np.sin(_C * x) / _C
    return np.where(np.abs(x) < 3, inner, np.sign(x) * 3.0)


def _phillips_phi2(x):
    """Second antiderivative of ``phi`` (even, vanishing at 0)."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    inner = 0.5 * ax**2 + (1 - np.cos(_C * ax)) / _C**2
    at3 = 4.5 + 2 / _C**2
    return np.where(ax < 3, inner, at3 + 3.0 * (ax - 3))


def phillips(n: int = 200) -> TestProblem:
    _check_n(n, multiple=4, name="phillips")
    h = 12.0 / n
    d = np.arange(n) * h
    col = (_phillips_phi2(d + h) - 2 * _phillips_phi2(d) + _phillips_phi2(d - h)) / h
    A = toeplitz(col)
    edges = -6.0 + np.arange(n + 1) * h
    x = np.diff(_phillips_phi1(edges)) / np.sqrt(h)
    return _finish("phillips", A, x)


# shaw -------------------------------------------------------------------------
def _shaw_kernel(s, t):
    u = np.pi * (np.sin(s) + np.sin(t))
    return (np.cos(s) + np.cos(t)) ** 2 * np.sinc(u / np.pi) ** 2


def shaw(n: int = 200) -> TestProblem:
    _check_n(n, multiple=2, name="shaw")
    h = np.pi / n
    t = -np.pi / 2 + (np.arange(n) + 0.5) * h
    A = h * _shaw_kernel(t[:, None], t[None, :])
    A = (A + A.T) / 2
    x = 2 * np.exp(-6 * (t - 0.8) ** 2) + np.exp(-2 * (t + 0.5) ** 2)
    return _finish("shaw", A, x)


# deriv2 -----------------------------------------------------------------------
def _hat_integral(t):
    t = np.asarray(t, dtype=float)
    return np.where(t < 0.5, 0.5 * t**2, 0.125 + (t - 0.5) - 0.5 * (t**2 - 0.25))


def deriv2_rhs_function(s):
    """Right-hand side ``g(s)`` that matches the hat-function solution."""
    s = np.asarray(s, dtype=float)
    return np.where(
        s < 0.5,
        (4 * s**3 - 3 * s) / 24,
        (-4 * s**3 + 12 * s**2 - 9 * s + 1) / 24,
    )


def deriv2(n: int = 200) -> TestProblem:
    _check_n(n, name="deriv2")
    h = 1.0 / n
    a = np.arange(n) * h
    mid = a + h / 2
    # int_cell t dt = h * mid, int_cell (s - 1) ds = h * (mid - 1)
    A = h * np.outer(mid - 1, mid)
    A = np.tril(A, -1)
    A = A + A.T
    # diagonal: (1/h) int_a^{a+h} (s - 1)(s^2 - a^2) ds
    def prim(s, a):
        return s**4 / 4 - s**3 / 3 - a**2 * s**2 / 2 + a**2 * s

    A[np.diag_indices(n)] = (prim(a + h, a) - prim(a, a)) / h
    edges = np.arange(n + 1) * h
    x = np.diff(_hat_integral(edges)) / np.sqrt(h)
    return _finish("deriv2", A, x)


# heat -------------------------------------------------------------------------
def heat_kernel(tau, kappa: float = 1.0):
    """Inverse-heat kernel; zero for ``tau <= 0``."""
    tau = np.asarray(tau, dtype=float)
    out = np.zeros_like(tau)
    pos = tau > 0
    tp = tau[pos]
    out[pos] = tp**-1.5 / (2 * kappa * np.sqrt(np.pi)) * np.exp(-1.0 / (4 * kappa**2 * tp))
    return out


def heat(n: int = 200, kappa: float = 1.0) -> TestProblem:
    _check_n(n, name="heat")
    h = 1.0 / n
    t = (np.arange(n) + 0.5) * h
    col = h * heat_kernel(t, kappa)
    A = np.tril(toeplitz(col))
    x = np.zeros(n)
    ti = np.arange(1, n // 2 + 1) * 20.0 / n
    x[: n // 2] = np.select(
        [ti < 2, ti < 3],
        [0.75 * ti**2 / 4, 0.75 + (ti - 2) * (3 - ti)],
        0.75 * np.exp(-(ti - 3) * 2),
    )
    return _finish("heat", A, x)


PROBLEMS = {"phillips": phillips, "shaw": shaw, "deriv2": deriv2, "heat": heat}


def make_problem(name: str, n: int = 200) -> TestProblem:
    try:
        gen = PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
    return gen(n)


# text export ------------------------------------------------------------------
def write_matrix_text(fh: TextIO, M) -> None:
    """Write ``rows cols`` then one row of entries per line.

    Vectors are written as a single column.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    fh.write(f"{M.shape[0]} {M.shape[1]}\n")
    for row in M:
        fh.write(" ".join(repr(float(v)) for v in row))
        fh.write("\n")


def read_matrix_text(fh: TextIO) -> np.ndarray:
    tokens = fh.read().split()
    rows, cols = int(tokens[0]), int(tokens[1])
    vals = np.array([float(t) for t in tokens[2:]])
    if vals.size != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {vals.size}")
    return vals.reshape(rows, cols)
