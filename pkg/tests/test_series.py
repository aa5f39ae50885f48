"""Series arithmetic and the Galerkin machinery, cross-checked against
independent oracles: gaussian-moment Monte Carlo and Beta-integral
quadrature for monomial norms, pointwise evaluation for products and
compositions, and exact eigenstructure for diagonal maps."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

import lfmspec as L
from lfmspec import LinearFractionalMap, TruncatedSeries
from lfmspec.series import basis_multi_indices, monomial_norm_sq


def lfm_1d(a, b, c, d):
    return LinearFractionalMap([[a]], [b], [c], d)


# ---------------------------------------------------------------------------
# basis ordering


def test_basis_grlex_order():
    b = basis_multi_indices(2, 2)
    assert b == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_basis_size():
    assert len(basis_multi_indices(3, 12)) == math.comb(15, 3)


# ---------------------------------------------------------------------------
# monomial norms


def test_monomial_norm_one_variable():
    # in one variable the monomials are orthonormal
    for k in (0, 1, 5, 40, 300):
        assert monomial_norm_sq((k,)) == pytest.approx(1.0, rel=1e-12)


def test_monomial_norm_beta_integral():
    # N=2: ||z1^j z2^k||^2 = 2 * int_0^{pi/2} cos^{2j+1} sin^{2k+1}
    for j, k in [(0, 0), (1, 0), (2, 3), (5, 5), (10, 1)]:
        val, _ = integrate.quad(
            lambda t: 2 * math.cos(t) ** (2 * j + 1) * math.sin(t) ** (2 * k + 1),
            0,
            math.pi / 2,
        )
        assert monomial_norm_sq((j, k)) == pytest.approx(val, rel=1e-9)


def test_monomial_norm_gaussian_moments():
    # E|g^alpha|^2 / |g|^(2|alpha|) over complex gaussians equals the norm
    rng = np.random.default_rng(42)
    g = (rng.standard_normal((200_000, 3)) + 1j * rng.standard_normal((200_000, 3))) / math.sqrt(2)
    for alpha in [(1, 0, 0), (1, 1, 0), (2, 0, 1)]:
        k = sum(alpha)
        num = np.abs(g[:, 0]) ** (2 * alpha[0]) * np.abs(g[:, 1]) ** (2 * alpha[1]) * np.abs(g[:, 2]) ** (2 * alpha[2])
        mc = float(np.mean(num / np.linalg.norm(g, axis=1) ** (2 * k)))
        assert monomial_norm_sq(alpha) == pytest.approx(mc, rel=0.02)


def test_monomial_norm_large_degree_stable():
    v = monomial_norm_sq((250, 250))
    assert 0 < v < 1e-100


# ---------------------------------------------------------------------------
# series arithmetic


def test_series_multiplication_matches_numpy():
    rng = np.random.default_rng(1)
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    b = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    fa = TruncatedSeries(1, 12, {(k,): a[k] for k in range(6)})
    fb = TruncatedSeries(1, 12, {(k,): b[k] for k in range(5)})
    prod = fa * fb
    ref = np.convolve(a, b)
    for k, c in enumerate(ref):
        assert prod.coefficient((k,)) == pytest.approx(c, abs=1e-12)


def test_series_multiplication_truncates_at_min_degree():
    fa = TruncatedSeries(1, 3, {(3,): 1.0})
    fb = TruncatedSeries(1, 5, {(2,): 1.0})
    assert (fa * fb).coeffs == {}  # degree 5 exceeds min(3, 5) = 3


def test_series_evaluate_two_variables():
    rng = np.random.default_rng(2)
    coeffs = {}
    for alpha in basis_multi_indices(2, 4):
        coeffs[alpha] = complex(rng.standard_normal(), rng.standard_normal())
    f = TruncatedSeries(2, 8, coeffs)
    g = TruncatedSeries(2, 8, {(1, 0): 1.0, (0, 2): -0.5j})
    z = np.array([0.21 - 0.05j, 0.17j])
    lhs = (f * g).evaluate(z)
    assert lhs == pytest.approx(f.evaluate(z) * g.evaluate(z), abs=1e-12)


def test_series_dimension_mismatch():
    fa = TruncatedSeries(1, 3, {(1,): 1.0})
    fb = TruncatedSeries(2, 3, {(1, 0): 1.0})
    with pytest.raises(L.DimensionMismatch):
        fa * fb


# ---------------------------------------------------------------------------
# binomial series


def test_binomial_series_evaluation_oracle():
    for s in (0.5, -0.45, 2.0, 1.3 - 0.7j):
        f = L.binomial_series(s, 60)
        for x in (0.05, 0.1 + 0.1j, -0.2):
            exact = np.exp(s * np.log1p(-x))
            assert f.evaluate([x]) == pytest.approx(exact, abs=1e-13)


def test_binomial_series_integer_exponent_terminates():
    f = L.binomial_series(3, 10)
    # (1-z)^3 has exactly 4 terms
    assert sorted(sum(a) for a in f.coeffs) == [0, 1, 2, 3]
    assert f.coefficient((2,)) == pytest.approx(3.0)


def test_binomial_series_other_variable():
    f = L.binomial_series(2, 5, n=2, var=1)
    assert f.coefficient((0, 1)) == pytest.approx(-2.0)
    assert f.coefficient((1, 0)) == 0


# ---------------------------------------------------------------------------
# map power series


def test_map_series_geometric_expansion():
    # z/(2-z) = sum_k z^k / 2^k, k >= 1
    f = lfm_1d(1, 0, -1, 2)
    s = L.map_power_series(f, (1,), 20)
    for k in range(1, 21):
        assert s.coefficient((k,)) == pytest.approx(2.0 ** -k, rel=1e-13)
    assert s.coefficient((0,)) == 0


def test_map_power_series_pointwise():
    f = LinearFractionalMap([[0.4, 0.1], [0, 0.35]], [0.05, 0], [0.1, -0.05], 1.2)
    rng = np.random.default_rng(3)
    s = L.map_power_series(f, (2, 1), 18)
    for _ in range(5):
        z = 0.25 * (rng.standard_normal(2) + 1j * rng.standard_normal(2))
        w = f(z)
        assert s.evaluate(z) == pytest.approx(w[0] ** 2 * w[1], abs=1e-12)


def test_reciprocal_times_denominator_is_one():
    from lfmspec.series import _denominator_series, _reciprocal_of_affine

    f = LinearFractionalMap([[0.4, 0.1], [0, 0.35]], [0.05, 0], [0.3, -0.2j], 1.5)
    den = _denominator_series(f, 15)
    inv = _reciprocal_of_affine(den)
    one = den * inv
    assert one.coefficient((0, 0)) == pytest.approx(1.0, abs=1e-13)
    off = {a: c for a, c in one.coeffs.items() if sum(a) > 0}
    assert max((abs(c) for c in off.values()), default=0.0) < 1e-13


def test_reciprocal_needs_constant_term():
    with pytest.raises(L.ZeroConstantTerm):
        from lfmspec.series import _reciprocal_of_affine

        _reciprocal_of_affine(TruncatedSeries(1, 4, {(1,): 1.0}))


def test_compose_series_is_linear_in_terms():
    f = lfm_1d(1, 0, -1, 2)
    F = TruncatedSeries(1, 30, {(0,): 2.0, (1,): -1.0j, (4,): 0.7})
    direct = L.compose_series(F, f, 15)
    parts = sum(
        (L.map_power_series(f, a, 15) * c for a, c in F.coeffs.items()),
        TruncatedSeries.constant(1, 15, 0),
    )
    for a in parts.coeffs:
        assert direct.coefficient(a) == pytest.approx(parts.coefficient(a), abs=1e-14)


def test_compose_uses_terms_above_output_degree():
    # high-order terms of F feed low-order composed coefficients whenever
    # phi(0) != 0; dropping them first would corrupt the result
    f = lfm_1d(0.5, 0.5, 0, 1)
    F = L.binomial_series(0.5, 80)
    full = L.compose_series(F, f, 10)
    clipped = L.compose_series(F.truncated(10), f, 10)
    diff = max(abs(full.coefficient(a) - clipped.coefficient(a)) for a in full.coeffs)
    assert diff > 1e-6


# ---------------------------------------------------------------------------
# compression


def test_compression_diagonal_map_exact():
    f = LinearFractionalMap([[0.5, 0], [0, 1 / 3]], [0, 0], [0, 0], 1)
    comp = L.build_compression(f, 6)
    m = comp.matrix
    expected = np.diag([0.5 ** a[0] * (1 / 3) ** a[1] for a in comp.basis])
    assert np.allclose(m, expected, atol=1e-14)


def test_compression_triangular_when_origin_fixed():
    f = lfm_1d(1, 0, -1, 2)
    comp = L.build_compression(f, 12)
    m = comp.matrix
    for i, alpha in enumerate(comp.basis):
        for j, beta in enumerate(comp.basis):
            if sum(alpha) < sum(beta):
                assert m[i, j] == 0


def test_compression_spectrum_sorted():
    eigs = L.compression_spectrum(lfm_1d(1, 0, -1, 2), 10)
    mods = [abs(x) for x in eigs]
    assert mods == sorted(mods, reverse=True)
    assert eigs[0] == pytest.approx(1.0, abs=1e-10)


def test_compression_caps():
    with pytest.raises(L.SizeCapExceeded):
        L.build_compression(lfm_1d(1, 0, -1, 2), 61)
    with pytest.raises(L.SizeCapExceeded):
        L.build_compression(LinearFractionalMap(np.eye(3) * 0.5, np.zeros(3), np.zeros(3), 1), 13)


def test_compression_csv_formats():
    f = lfm_1d(0.5, 0, 0, 1)
    eigs = L.compression_spectrum(f, 3)
    text = L.compression_to_csv(eigs)
    lines = text.strip().split("\n")
    assert lines[0] == "re,im"
    assert len(lines) == 5
    comp = L.build_compression(f, 3)
    from lfmspec.series import compression_basis_json, compression_matrix_to_csv

    mat_csv = compression_matrix_to_csv(comp)
    assert mat_csv.startswith("row,col,re,im\n")
    header = compression_basis_json(comp)
    assert header["basis"][0] == [0]
    assert header["degree"] == 3


def test_series_from_vector_round_trip():
    f = lfm_1d(1, 0, -1, 2)
    eigs, vecs, comp = L.compression_spectrum(f, 8, return_vectors=True)
    func = L.series_from_vector(comp, vecs[:, 3])
    # eigenvector of the compression: C_phi func = lam func through degree 8
    r = L.eigenfunction_residual(f, eigs[3], func, 8)
    assert r < 1e-12


# ---------------------------------------------------------------------------
# eigenfunction residuals


def test_monomials_are_eigenfunctions_of_diagonal_maps():
    th = 2 * math.pi * (math.sqrt(2) - 1)
    f = LinearFractionalMap([[np.exp(1j * th), 0], [0, 0.5]], [0, 0], [0, 0], 1)
    for beta in [(1, 0), (0, 1), (2, 3), (4, 1)]:
        F = TruncatedSeries.monomial(2, 10, beta)
        lam = np.exp(1j * beta[0] * th) * 0.5 ** beta[1]
        assert L.eigenfunction_residual(f, lam, F, 10) < 1e-13


def test_residual_detects_wrong_eigenvalue():
    f = lfm_1d(0.5, 0.5, 0, 1)
    F = L.binomial_series(1.0, 200)
    good = L.eigenfunction_residual(f, 0.5, F, 25)
    bad = L.eigenfunction_residual(f, 0.4, F, 25)
    assert good < 1e-10
    assert bad == pytest.approx(0.1, rel=1e-9)  # ||(0.5 - 0.4) F|| / ||F||


def test_residual_rejects_zero_function():
    f = lfm_1d(0.5, 0, 0, 1)
    with pytest.raises(L.ZeroFunction):
        L.eigenfunction_residual(f, 0.5, TruncatedSeries(1, 5), 5)


# ---------------------------------------------------------------------------
# norms


def test_weighted_norm_hand_value():
    ser = TruncatedSeries(1, 5, {(0,): 1, (3,): 2j, (5,): -1})
    # (k+1)^{2 nu} with nu = 1/2: 1 + 4*4 + 1*6
    assert L.weighted_norm_sq(ser, 0.5) == pytest.approx(23.0)


def test_sobolev_norm_boundary_weight_is_hardy():
    # c = -1 radial weight degenerates to the sphere: s-grading only
    ser = TruncatedSeries(1, 5, {(0,): 1, (3,): 2j, (5,): -1})
    assert L.sobolev_norm_sq(ser, 0.5, 0.5) == pytest.approx(1 + 3 * 4 + 5 * 1)


def test_sobolev_rejects_nonintegrable_weight():
    ser = TruncatedSeries(1, 2, {(1,): 1})
    with pytest.raises(L.ParameterConstraintViolated):
        L.sobolev_norm_sq(ser, 0.0, 1.0)  # c = -3


@given(
    s=st.floats(min_value=0.0, max_value=2.0),
    nu=st.floats(min_value=-1.0, max_value=0.5),
    seed=st.integers(min_value=0, max_value=10_000),
)
@settings(max_examples=40, deadline=None)
def test_norm_ratio_lies_in_interval(s, nu, seed):
    if 2 * s - 2 * nu - 1 < -1:
        return
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    deg = int(rng.integers(1, 12))
    coeffs = {}
    for alpha in basis_multi_indices(n, deg):
        if rng.random() < 0.4:
            coeffs[alpha] = complex(rng.standard_normal(), rng.standard_normal())
    if not coeffs:
        return
    ser = TruncatedSeries(n, deg, coeffs)
    w = L.weighted_norm_sq(ser, nu)
    so = L.sobolev_norm_sq(ser, s, nu)
    lo, hi = L.norm_equivalence_interval(s, nu, deg)
    assert lo - 1e-12 <= w / so <= hi + 1e-12
