import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nearreg.filters import (
    METHOD_KINDS,
    RegMethod,
    SpectralProblem,
    UnregularizedComponentWarning,
    UnregularizedNullComponent,
    build_modification,
    filter_factor_csv,
    filter_factors,
    solve_spectral,
    spectral_solution,
    to_spectral,
)
from nearreg.linalg import random_orthogonal, solve_normal_equations_oracle, svd


def spectral(sigma, b_tilde, V=None):
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.size
    V = np.eye(n) if V is None else V
    return SpectralProblem(sigma, np.asarray(b_tilde, dtype=float), V, int(np.count_nonzero(sigma > 0)))


def all_methods(mu, k=2, theta=0.5):
    return [
        RegMethod("tsvd", k=k),
        RegMethod("tikhonov", mu=mu),
        RegMethod("frmod", mu=mu),
        RegMethod("shiftk", mu=mu),
        RegMethod("cutk", mu=mu),
        RegMethod("scaled", mu=mu),
        RegMethod("scaledk", mu=mu),
        RegMethod("theta", mu=mu, theta=theta),
    ]


# to_spectral ------------------------------------------------------------------
def test_to_spectral_identity_and_invariance(rng):
    f = svd(np.diag([3.0, 2.0, 1.0]))
    b = np.array([1.0, -2.0, 0.5])
    sp = to_spectral(f, b)
    np.testing.assert_allclose(np.abs(sp.b_tilde), np.abs(b))
    A = rng.standard_normal((7, 4))
    b = rng.standard_normal(7)
    f = svd(A)
    sp = to_spectral(f, b)
    assert np.linalg.norm(sp.b_tilde) == pytest.approx(np.linalg.norm(b), rel=1e-12)
    np.testing.assert_allclose(f.U @ sp.b_tilde, b, atol=1e-12)
    assert sp.rank == 4


# build_modification -----------------------------------------------------------
def test_frmod_example():
    np.testing.assert_allclose(build_modification(RegMethod("frmod", mu=1.0), [2, 1, 0.5]).dsq, [0, 0, 0.75])


def test_shiftk_example():
    mod = build_modification(RegMethod("shiftk", mu=1.0), [2, 1, 0.5])
    # k = 1: 4 >= 1 + 1 holds, 1 >= 0.25 + 1 fails
    assert mod.k_effective == 1
    np.testing.assert_allclose(mod.dsq, [0, 1, 1])
    np.testing.assert_allclose(np.array([4, 1, 0.25]) + mod.dsq, [4, 2, 1.25])


def test_shiftk_largest_feasible_k():
    s = np.array([10.0, 5.0, 4.9, 0.1])
    mod = build_modification(RegMethod("shiftk", mu=1.0), s)
    # junctions: k=1 ok, k=2 fails (25 < 24.01 + 1), k=3 ok -> largest is 3
    assert mod.k_effective == 3


def test_scaled_example():
    np.testing.assert_allclose(build_modification(RegMethod("scaled", mu=1.0), [2, 1]).dsq, [0, 0.6])


def test_cutk_index_from_mu():
    s = [3.0, 2.0, 1.0]
    assert build_modification(RegMethod("cutk", mu=2.5), s).k_effective == 1
    assert build_modification(RegMethod("cutk", mu=2.0), s).k_effective == 1
    assert build_modification(RegMethod("cutk", mu=5.0), s).k_effective == 0
    assert build_modification(RegMethod("cutk", mu=0.5), s).k_effective == 3
    np.testing.assert_allclose(build_modification(RegMethod("cutk", k=1), s).dsq, [0, -4, -1])


def test_theta_collapses():
    s = np.array([2.0, 1.9, 1.0, 0.3, 0.1])
    mu = 0.7
    t0 = build_modification(RegMethod("theta", mu=mu, theta=0.0), s)
    sh = build_modification(RegMethod("shiftk", mu=mu), s)
    assert t0.k_effective == sh.k_effective
    np.testing.assert_allclose(t0.dsq, sh.dsq, rtol=1e-15)
    t1 = build_modification(RegMethod("theta", mu=mu, theta=1.0), s)
    sk = build_modification(RegMethod("scaledk", mu=mu), s)
    assert t1.k_effective == sk.k_effective
    np.testing.assert_allclose(t1.dsq, sk.dsq, rtol=1e-15)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        RegMethod("theta", mu=1.0, theta=1.5)
    with pytest.raises(ValueError):
        RegMethod("theta", mu=1.0)
    with pytest.raises(ValueError):
        RegMethod("tikhonov", mu=-1.0)
    with pytest.raises(ValueError):
        RegMethod("ridge", mu=1.0)
    with pytest.raises(ValueError):
        RegMethod("shiftk", mu=1.0, theta=0.2)
    with pytest.raises(ValueError):
        build_modification(RegMethod("tikhonov"), [1.0])


@pytest.mark.parametrize(
    "text, expected",
    [
        ("theta:0.5", RegMethod("theta", theta=0.5)),
        ("ShiftK", RegMethod("shiftk")),
        ("mui", RegMethod("tikhonov")),
        ("tsvd", RegMethod("tsvd")),
    ],
)
def test_parse(text, expected):
    assert RegMethod.parse(text) == expected


def test_parse_rejects():
    with pytest.raises(ValueError):
        RegMethod.parse("theta")
    with pytest.raises(ValueError):
        RegMethod.parse("theta:2")


# solve_spectral ---------------------------------------------------------------
def test_tsvd_zero():
    sp = spectral([2.0, 1.0], [2.0, 1.0])
    np.testing.assert_array_equal(solve_spectral(sp, RegMethod("tsvd", k=0)), [0.0, 0.0])


def test_tikhonov_hand_example():
    sp = spectral([2.0, 1.0], [2.0, 1.0])
    x = solve_spectral(sp, RegMethod("tikhonov", mu=1.0))
    np.testing.assert_allclose(x, [0.8, 0.5], rtol=1e-15)
    xo = solve_normal_equations_oracle(np.diag([2.0, 1.0]), [1.0, 1.0], np.eye(2), [2.0, 1.0])
    np.testing.assert_allclose(x, xo, rtol=1e-12)


def test_cutk_equals_tsvd(rng):
    s = np.sort(rng.uniform(0.01, 3, 8))[::-1]
    sp = spectral(s, rng.standard_normal(10), random_orthogonal(8, rng))
    mu = 0.5 * (s[3] + s[4])
    np.testing.assert_allclose(
        solve_spectral(sp, RegMethod("cutk", mu=mu)), solve_spectral(sp, RegMethod("tsvd", k=4)), rtol=1e-15
    )


def test_tsvd_k_beyond_rank():
    sp = spectral([2.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        spectral_solution(sp, RegMethod("tsvd", k=2))


def test_zero_singular_value_maps_to_zero():
    sp = spectral([2.0, 0.0], [1.0, 1.0])
    x = spectral_solution(sp, RegMethod("frmod", mu=0.5))
    assert x[1] == 0.0


def test_unregularized_component_strict_and_lenient():
    # sigma**2 underflows to zero while sigma > 0
    sp = spectral([1.0, 1e-170], [1.0, 1.0])
    with pytest.raises(UnregularizedNullComponent):
        spectral_solution(sp, RegMethod("tikhonov", mu=0.0), strict=True)
    with pytest.warns(UnregularizedComponentWarning):
        x = spectral_solution(sp, RegMethod("tikhonov", mu=0.0))
    assert x[1] == 0.0


def _random_problem(rng, m=14, n=10):
    A = rng.standard_normal((m, n)) @ np.diag(np.logspace(0, -2, n))
    b = rng.standard_normal(m)
    return A, b, svd(A)


def test_oracle_equivalence_all_methods(rng):
    for _ in range(20):
        A, b, f = _random_problem(rng)
        sp = to_spectral(f, b)
        mu = float(np.exp(rng.uniform(np.log(f.sigma[-1]), np.log(f.sigma[0]))))
        for meth in all_methods(mu, theta=float(rng.uniform())):
            x = solve_spectral(sp, meth)
            dsq = build_modification(meth, f.sigma).dsq
            if np.all(f.sigma**2 + dsq > 0):
                xo = solve_normal_equations_oracle(A, dsq, f.V, b)
            else:
                M = A.T @ A + (f.V * dsq) @ f.V.T
                xo = np.linalg.lstsq(M, A.T @ b, rcond=1e-10)[0]
            assert np.linalg.norm(x - xo) <= 1e-8 * np.linalg.norm(x), meth


# filter factors ---------------------------------------------------------------
def test_filter_examples():
    np.testing.assert_allclose(filter_factors([2.0, 1.0], RegMethod("tikhonov", mu=1.0)), [0.8, 0.5])
    np.testing.assert_allclose(filter_factors([2.0, 1.0, 0.5], RegMethod("frmod", mu=1.0)), [1, 1, 0.25])
    np.testing.assert_array_equal(filter_factors([3.0, 2.0, 1.0], RegMethod("tsvd", k=2)), [1, 1, 0])


def test_filter_length_is_rank():
    sp = spectral([2.0, 1.0, 0.0], [1.0, 1.0, 1.0])
    assert filter_factors(sp, RegMethod("tikhonov", mu=1.0)).shape == (2,)


spectra = st.lists(st.floats(1e-6, 1e3), min_size=2, max_size=25).map(lambda v: np.sort(v)[::-1])


@settings(max_examples=150, deadline=None)
@given(spectra, st.floats(1e-7, 1e4), st.floats(0, 1), st.integers(0, 25))
def test_filter_properties(sigma, mu, theta, k):
    k = min(k, sigma.size)
    for meth in all_methods(mu, k=k, theta=theta):
        phi = filter_factors(sigma, meth, rank=sigma.size)
        mod = build_modification(meth, sigma)
        denom = sigma**2 + mod.dsq
        assert np.all(phi >= 0) and np.all(phi <= 1 + 1e-15)
        live = denom > 0
        np.testing.assert_allclose(phi[live], sigma[live] ** 2 / denom[live], rtol=1e-12, atol=1e-300)
        assert np.all(phi[~live] == 0)
        if meth.kind in ("shiftk", "scaledk", "theta"):
            assert np.all(np.diff(denom) <= 1e-14 * denom[0])
        if meth.kind not in ("tsvd", "cutk"):
            assert np.all(mod.dsq >= 0)


@settings(max_examples=100, deadline=None)
@given(spectra, st.floats(1e-4, 1e2))
def test_shiftk_filter_structure(sigma, mu):
    meth = RegMethod("shiftk", mu=mu)
    k = build_modification(meth, sigma).k_effective
    phi = filter_factors(sigma, meth, rank=sigma.size)
    assert np.all(phi[:k] == 1.0)
    np.testing.assert_array_equal(phi[k:], sigma[k:] ** 2 / (sigma[k:] ** 2 + mu**2))


@settings(max_examples=100, deadline=None)
@given(spectra, st.floats(1e-3, 1e2), st.floats(0, 1))
def test_theta_affine_identity(sigma, mu, theta):
    k = build_modification(RegMethod("theta", mu=mu, theta=theta), sigma).k_effective
    phi = lambda t: filter_factors(sigma, RegMethod("theta", mu=mu, k=k, theta=t), rank=sigma.size)  # noqa: E731
    np.testing.assert_allclose(phi(theta), (1 - theta) * phi(0.0) + theta * phi(1.0), rtol=1e-12, atol=1e-15)


def test_tikhonov_filters_decrease_in_mu():
    s = np.logspace(0, -4, 12)
    mus = np.logspace(-5, 1, 30)
    phis = np.array([filter_factors(s, RegMethod("tikhonov", mu=m)) for m in mus])
    assert np.all(np.diff(phis, axis=0) < 0)


def test_small_mu_limit_is_least_squares(rng):
    A = rng.standard_normal((9, 6))
    b = rng.standard_normal(9)
    sp = to_spectral(svd(A), b)
    xls = np.linalg.lstsq(A, b, rcond=None)[0]
    for kind in ("tikhonov", "frmod", "scaled"):
        x = solve_spectral(sp, RegMethod(kind, mu=1e-7))
        assert np.linalg.norm(x - xls) <= 1e-9 * np.linalg.norm(xls), kind


def test_filter_csv():
    sp = spectral([2.0, 1.0, 0.5], [1.0, 1.0, 1.0])
    text = filter_factor_csv(sp, [RegMethod("tikhonov", mu=1.0), RegMethod("theta", mu=1.0, theta=0.5)])
    lines = text.splitlines()
    assert lines[0] == "j,sigma_j,phi_tikhonov,phi_theta:0.5"
    assert len(lines) == 4
    assert lines[1].split(",")[:3] == ["1", "2.0", "0.8"]


def test_method_kinds_complete():
    assert len(METHOD_KINDS) == 8
