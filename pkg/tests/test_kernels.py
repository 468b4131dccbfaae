from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from zygmund.kernels import (
    MOLLIFIER,
    WAVELET,
    InadmissibleScaling,
    Kernel,
    KernelError,
    ResolutionError,
    bump_mollifier,
    central_stencil,
    check_admissible,
    check_moments,
    derivative_wavelet,
    fd_derivative,
    fd_weights,
    make_scaling,
    measured_order,
    smooth_step,
    spectral_pair,
    wavelet_from_mollifier,
)
from zygmund.signals import InvalidParameter


@pytest.fixture(scope="module")
def pair():
    return spectral_pair(0.25, 4.0)


class TestFiniteDifferences:
    def test_classic_weights(self):
        assert fd_weights(2, [-1, 0, 1]) == [1, -2, 1]
        assert fd_weights(1, [-1, 0, 1]) == [Fraction(-1, 2), 0, Fraction(1, 2)]

    @pytest.mark.parametrize("deriv", [1, 2, 3, 4])
    def test_factored_stencil_reproduces_weights(self, deriv):
        half, core = central_stencil(deriv, 6)
        full = np.array(core, dtype=float)
        for _ in range(deriv):
            full = np.convolve(full, [-1.0, 1.0])
        ref = np.array([float(w) for w in fd_weights(deriv, range(-half, half + 1))])
        assert np.allclose(full, ref, atol=1e-12)

    @pytest.mark.parametrize("deriv", [1, 2, 3])
    def test_polynomial_exactness(self, deriv):
        dx = 0.01
        x = dx * np.arange(400)
        f = x**5
        d, pad = fd_derivative(f, dx, deriv, accuracy=8)
        inner = d[2 * pad : 400]
        xs = x[pad : 400 - pad]
        exact = {1: 5 * xs**4, 2: 20 * xs**3, 3: 60 * xs**2}[deriv]
        assert np.allclose(inner, exact, rtol=1e-7, atol=1e-7)


class TestBump:
    def test_normalised(self):
        k = bump_mollifier(1.0, 0, 1024)
        assert k.kind == MOLLIFIER
        assert abs(check_moments(k, 0)[0] - 1) <= 1e-10

    @pytest.mark.parametrize("N,n", [(2, 1024), (4, 4096), (5, 2049)])
    def test_moments_vanish(self, N, n):
        k = bump_mollifier(1.0, N, n)
        m = check_moments(k, N)
        assert abs(m[0] - 1) <= 1e-10
        assert np.max(np.abs(m[1:])) <= 1e-8
        assert k.moment_order == N

    def test_order0_second_moment_positive(self):
        m = check_moments(bump_mollifier(), 3)
        assert abs(m[1]) < 1e-15 and m[2] > 0

    def test_radius_scales_support(self):
        k = bump_mollifier(0.5)
        assert k.support_radius == 0.5
        assert k(0.6) == 0.0 and k(0.0) > 0

    def test_unresolved_grid(self):
        with pytest.raises(InvalidParameter):
            bump_mollifier(1.0, 0, 32)

    def test_zero_kernel_moments(self):
        z = Kernel(np.zeros(65), -1.0, 1 / 32, WAVELET, 0)
        assert not np.any(check_moments(z, 4))


class TestDerivedWavelets:
    def test_mean_zero(self):
        mu = wavelet_from_mollifier(bump_mollifier())
        assert mu.kind == WAVELET
        assert abs(check_moments(mu, 0)[0]) <= 1e-8

    def test_order2_mollifier(self):
        mu = wavelet_from_mollifier(bump_mollifier(1.0, 2))
        assert np.max(np.abs(check_moments(mu, 2))) <= 1e-7
        assert mu.moment_order == 2

    def test_second_moment_relation(self):
        chi = bump_mollifier()
        mu = wavelet_from_mollifier(chi)
        m2chi = check_moments(chi, 2)[2]
        assert check_moments(mu, 2)[2] == pytest.approx(-2 * m2chi, rel=1e-6)
        # symmetric: order stops at 1 even though 0 was requested
        assert measured_order(mu) == 1

    def test_rejects_wavelet_input(self):
        mu = wavelet_from_mollifier(bump_mollifier())
        with pytest.raises(KernelError):
            wavelet_from_mollifier(mu)
        with pytest.raises(KernelError):
            derivative_wavelet(mu, 1)

    def test_derivative_wavelet_orders(self):
        chi = bump_mollifier()
        k1 = derivative_wavelet(chi, 1)
        assert abs(check_moments(k1, 0)[0]) <= 1e-8
        k3 = derivative_wavelet(chi, 3)
        assert np.max(np.abs(check_moments(k3, 2))) <= 1e-7
        assert k3.moment_order == 2 and measured_order(k3) == 2

    def test_first_derivative_wavelet_is_odd(self):
        k = derivative_wavelet(bump_mollifier(), 1)
        assert np.allclose(k.samples, -k.samples[::-1], atol=1e-12 * np.abs(k.samples).max())

    def test_too_many_derivatives(self):
        with pytest.raises(ResolutionError):
            derivative_wavelet(bump_mollifier(1.0, 0, 128), 12)

    def test_scale_identity(self):
        # -eps d/deps chi_eps(x) equals the scaled reflected-conjugate wavelet
        chi = bump_mollifier()
        mu = wavelet_from_mollifier(chi)
        x = np.linspace(-0.45, 0.45, 301)
        for eps in (0.25, 0.5):
            h = 1e-4 * eps
            ce = lambda e: chi(x / e) / e
            lhs = -eps * (ce(eps + h) - ce(eps - h)) / (2 * h)
            rhs = mu(-x / eps) / eps
            assert np.max(np.abs(lhs - rhs)) <= 1e-5 * np.max(np.abs(rhs))


class TestSmoothStep:
    def test_limits_and_monotone(self):
        u = np.linspace(-0.5, 1.5, 2001)
        v, d = smooth_step(u)
        assert np.all(v[u <= 0] == 1) and np.all(v[u >= 1] == 0)
        assert np.all(np.diff(v) <= 0) and np.all(d <= 0)

    def test_derivative_matches_values(self):
        u = np.linspace(0.05, 0.95, 50)
        h = 1e-6
        num = (smooth_step(u + h)[0] - smooth_step(u - h)[0]) / (2 * h)
        assert np.allclose(smooth_step(u)[1], num, atol=1e-6)


class TestSpectralPair:
    def test_theorem_grade_and_support(self, pair):
        assert pair.theorem_grade
        assert pair.psi(1 / 8) == 0.0 and pair.psi(8.0) == 0.0
        xi = np.linspace(0, 10, 5001)
        p = pair.psi(xi)
        assert np.all(p >= 0)
        assert np.all(p[(xi > 0.26) & (xi < 3.99)] > 0)
        assert not spectral_pair(0.5, 4.0, n_freq=2**10).theorem_grade

    def test_bad_band(self):
        with pytest.raises(InvalidParameter):
            spectral_pair(2.0, 1.0)

    @pytest.mark.parametrize("xi", [0.1, 0.5, 1.0, 2.0, 3.5, 6.0])
    def test_scale_integrals(self, pair, xi):
        # psi(xi/t)/t integrated over (0, 1) rebuilds phi; over (0, inf) gives 1
        f = lambda t: pair.psi(xi / t) / t
        lo, hi = xi / pair.b, xi / pair.a
        part = integrate.quad(f, max(lo, 1e-12), min(1.0, hi), epsabs=1e-12, limit=200)[0] if lo < 1 else 0.0
        full = integrate.quad(f, lo, hi, epsabs=1e-12, limit=200)[0]
        assert part == pytest.approx(float(pair.phi(xi)), abs=1e-6)
        assert full == pytest.approx(1.0, abs=1e-6)

    def test_kernel_mass(self, pair):
        assert check_moments(pair.chi_kernel, 0)[0] == pytest.approx(1.0, abs=1e-8)
        assert abs(check_moments(pair.mu_kernel, 0)[0]) <= 1e-8
        assert pair.chi_kernel.tail_bound < 1e-12
        assert pair.chi_kernel.moment_order >= 1 and pair.mu_kernel.moment_order >= 1

    def test_calderon_partition(self, pair):
        # phi(xi) + int_1^T psi(xi/t) dt/t = phi(xi/T)
        xi, T = 3.0, 50.0
        f = lambda t: pair.psi(xi / t) / t
        val = pair.phi(xi) + integrate.quad(f, 1.0, T, limit=200)[0]
        assert val == pytest.approx(float(pair.phi(xi / T)), abs=1e-8)


class TestScalings:
    def test_log(self):
        c = check_admissible(make_scaling("log"))
        assert c.admissible
        g = make_scaling("log")
        assert g(1e-12 / 2) / g(1e-12) == pytest.approx(1.0, abs=0.03)

    def test_power_one_boundary(self):
        g = make_scaling("power", 1.0)
        c = check_admissible(g)
        assert c.admissible and c.max_eps_gamma == pytest.approx(1.0)

    def test_power_two_rejected(self):
        with pytest.raises(InadmissibleScaling):
            make_scaling("pow:2")
        assert not check_admissible(make_scaling("pow:2", strict=False)).admissible

    @pytest.mark.parametrize("spec", ["log", "pow:0.5", "pow:1", "powlog:2", "powlog:3"])
    def test_admissible_family(self, spec):
        assert check_admissible(make_scaling(spec)).admissible

    def test_unknown_kind(self):
        with pytest.raises(InvalidParameter):
            make_scaling("cubic")

    @given(st.sampled_from(["log", "pow:0.5", "pow:1", "powlog:2"]), st.floats(1e-8, 0.9))
    def test_inverse_roundtrip(self, spec, eps):
        g = make_scaling(spec)
        assert float(g.inverse(g(eps))) == pytest.approx(eps, rel=1e-9)
