import io

import numpy as np
import pytest
from scipy import integrate

from nearreg.linalg import numerical_rank, svd
from nearreg.problems import (
    PROBLEMS,
    deriv2,
    deriv2_rhs_function,
    heat,
    heat_kernel,
    make_problem,
    phillips,
    read_matrix_text,
    shaw,
    write_matrix_text,
)


@pytest.fixture(scope="module")
def spectra():
    return {name: svd(gen(200).A).sigma for name, gen in PROBLEMS.items()}


@pytest.mark.parametrize("name", sorted(PROBLEMS))
@pytest.mark.parametrize("n", [8, 40, 200])
def test_consistent_and_finite(name, n):
    p = make_problem(name, n)
    assert p.A.shape == (n, n) and p.x_true.shape == (n,)
    assert np.all(np.isfinite(p.A)) and np.all(np.isfinite(p.x_true))
    np.testing.assert_array_equal(p.A @ p.x_true, p.b_true)


@pytest.mark.parametrize("gen", [phillips, shaw, deriv2])
def test_symmetric(gen):
    A = gen(200).A
    assert np.linalg.norm(A - A.T) <= 1e-12 * np.linalg.norm(A)


@pytest.mark.parametrize("gen, bad", [(phillips, 10), (phillips, 0), (shaw, 7), (deriv2, 3), (heat, 2)])
def test_invalid_sizes(gen, bad):
    with pytest.raises(ValueError):
        gen(bad)


def test_unknown_problem():
    with pytest.raises(ValueError):
        make_problem("foxgood")


def _phillips_phi(t):
    return np.where(np.abs(t) < 3, 1 + np.cos(np.pi * t / 3), 0.0)


def test_phillips_entries_match_quadrature():
    n = 16
    h = 12.0 / n
    A = phillips(n).A
    for i, j in [(0, 0), (5, 5), (5, 6), (3, 7), (8, 11), (0, 15)]:
        si, tj = -6 + i * h, -6 + j * h
        val, _ = integrate.dblquad(
            lambda t, s: _phillips_phi(s - t), si, si + h, tj, tj + h, epsabs=1e-13, epsrel=1e-12
        )
        assert A[i, j] == pytest.approx(val / h, rel=1e-9, abs=1e-12)


def test_phillips_data_close_to_galerkin_rhs():
    # Galerkin coefficients of the analytic right-hand side agree with A @ x up
    # to discretization error
    n = 200
    h = 12.0 / n
    p = phillips(n)

    def g(s):
        return (6 - abs(s)) * (1 + 0.5 * np.cos(np.pi * s / 3)) + 9 / (2 * np.pi) * np.sin(np.pi * abs(s) / 3)

    b = np.array([integrate.quad(g, -6 + i * h, -6 + (i + 1) * h)[0] for i in range(n)]) / np.sqrt(h)
    assert np.linalg.norm(p.b_true - b) <= 1e-3 * np.linalg.norm(b)


def test_phillips_ill_conditioned(spectra):
    s = spectra["phillips"]
    assert s[0] / s[-1] > 1e6


def test_shaw_center_entry_uses_limit():
    n = 200
    h = np.pi / n
    A = shaw(n).A
    # s_i + t_j = 0 on the anti-diagonal, where sin(u)/u -> 1
    i = 40
    j = n - 1 - i
    s = -np.pi / 2 + (i + 0.5) * h
    assert A[i, j] == pytest.approx(h * (2 * np.cos(s)) ** 2, rel=1e-14)
    assert np.all(np.isfinite(A))


def test_shaw_severely_ill_posed(spectra):
    assert numerical_rank(spectra["shaw"]) < 50


def test_deriv2_entries_match_quadrature():
    n = 10
    h = 1.0 / n
    A = deriv2(n).A

    def kernel(s, t):
        return s * (t - 1) if s < t else t * (s - 1)

    for i, j in [(3, 6), (7, 2), (0, 9)]:
        val, _ = integrate.dblquad(
            lambda t, s: kernel(s, t), i * h, (i + 1) * h, j * h, (j + 1) * h, epsabs=1e-14, epsrel=1e-12
        )
        assert A[i, j] == pytest.approx(val / h, rel=1e-8, abs=1e-15)
    # the kernel has a kink on s = t; integrate the two triangles separately
    for i in (0, 4, 9):
        lo, hi = i * h, (i + 1) * h
        below, _ = integrate.dblquad(lambda t, s: t * (s - 1), lo, hi, lo, lambda s: s, epsabs=1e-15)
        above, _ = integrate.dblquad(lambda t, s: s * (t - 1), lo, hi, lambda s: s, hi, epsabs=1e-15)
        assert A[i, i] == pytest.approx((below + above) / h, rel=1e-10)


def test_deriv2_hat_solution():
    n = 200
    x = deriv2(n).x_true
    h = 1.0 / n
    assert np.argmax(x) in (n // 2 - 1, n // 2)
    # coefficients are sqrt(h) * x(midpoint) for the piecewise-linear hat
    assert x.max() == pytest.approx(np.sqrt(h) * (0.5 - h / 2), rel=1e-12)


def test_deriv2_rhs_function():
    assert float(deriv2_rhs_function(0.5)) == pytest.approx(-1 / 24, rel=1e-15)
    # g solves the boundary value problem whose Green's function is the kernel
    val, _ = integrate.quad(lambda t: (0.3 * (t - 1) if 0.3 < t else t * (0.3 - 1)) * min(t, 1 - t), 0, 1, points=[0.3, 0.5])
    assert float(deriv2_rhs_function(0.3)) == pytest.approx(val, rel=1e-10)


def test_heat_lower_triangular(spectra):
    A = heat(200).A
    assert np.all(np.triu(A, 1) == 0)
    s = spectra["heat"]
    assert s[0] / s[-1] > 1e6


def test_heat_kernel_limits():
    assert heat_kernel(np.array([1e-4]))[0] < 1e-300
    assert heat_kernel(np.array([0.0, -1.0])).tolist() == [0.0, 0.0]


@pytest.mark.parametrize("name", sorted(PROBLEMS))
def test_no_significant_gap(spectra, name):
    s = spectra[name]
    # beyond ~1e-12 relative the computed singular values are roundoff
    top = min(100, numerical_rank(s, 1e-12))
    ratios = s[: top - 1] / s[1:top]
    assert s[0] > 0 and ratios.max() < 20


def test_text_roundtrip():
    p = deriv2(8)
    buf = io.StringIO()
    write_matrix_text(buf, p.A)
    text = buf.getvalue()
    assert text.splitlines()[0] == "8 8"
    np.testing.assert_array_equal(read_matrix_text(io.StringIO(text)), p.A)
    buf = io.StringIO()
    write_matrix_text(buf, p.x_true)
    assert buf.getvalue().startswith("8 1\n")
