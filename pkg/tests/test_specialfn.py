"""Special-function accuracy against independent oracles.

Derived expected values are computed inside the tests by the stated
independent route (quadrature of defining integrals, locally re-implemented
series plus bisection, high-precision term-by-term summation), never by the
code path under test.
"""

import math

import numpy as np
import pytest
from mpmath import mp, mpf

from billiardstats.errors import (DomainError, NonConvergenceError, PoleError,
                                  ValidationError)
from billiardstats.policy import SeriesPolicy
from billiardstats.quadrature import fourier_invert, integrate_1d
from billiardstats.specialfn import (MeijerG4044Params, bessel_j,
                                     bessel_j_zero, besselj_int, elliptic_k,
                                     elliptic_kc, gamma, hyp2f1, hyp_pfq,
                                     inc_beta, j0, j1, meijer_g_4044,
                                     struve_h0)

SQRT_PI = math.sqrt(math.pi)


class TestGamma:
    def test_unit_values(self):
        assert gamma(1.0) == pytest.approx(1.0, abs=1e-14)
        assert gamma(0.5) == pytest.approx(SQRT_PI, rel=1e-14)

    def test_against_quadrature_oracle(self):
        # gamma(7/6) = int_0^inf t^(1/6) e^-t dt; the tail beyond 60 is < 1e-24
        oracle = integrate_1d(lambda t: t ** (1.0 / 6.0) * np.exp(-t),
                              0.0, 60.0, 1e-13)
        assert oracle.converged
        assert gamma(7.0 / 6.0) == pytest.approx(oracle.value, rel=1e-12)

    def test_recurrence_and_reflection(self):
        for x in [0.17, 1.3, 7.5, 33.2, 101.7, 169.2]:
            assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)
        assert gamma(-0.5) == pytest.approx(-2.0 * SQRT_PI, rel=1e-12)

    def test_poles(self):
        for x in [0.0, -1.0, -7.0]:
            with pytest.raises(PoleError):
                gamma(x)


def _local_j0_series(x: float) -> float:
    """Test-local ascending series for J0 (the bisection oracle)."""
    term = np.longdouble(1.0)
    total = np.longdouble(1.0)
    z = -np.longdouble(x) ** 2 / 4.0
    for k in range(1, 200):
        term = term * z / (k * k)
        total += term
        if abs(term) < 1e-25 * abs(total):
            break
    return float(total)


class TestBesselJ:
    def test_values_at_zero(self):
        assert j0(0.0) == 1.0
        assert besselj_int(4, 0.0) == 0.0
        assert bessel_j(0.0, 0.0) == 1.0

    def test_first_zero_by_series_bisection(self):
        lo, hi = 2.0, 3.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if _local_j0_series(lo) * _local_j0_series(mid) <= 0:
                hi = mid
            else:
                lo = mid
        oracle_zero = 0.5 * (lo + hi)
        assert bessel_j_zero(0, 1) == pytest.approx(oracle_zero, abs=1e-11)
        assert bessel_j_zero(0, 1) == pytest.approx(2.404825557695773, abs=1e-10)
        assert bessel_j_zero(0, 2) == pytest.approx(5.520078110286311, abs=1e-10)

    def test_j1_is_minus_derivative_of_j0(self):
        h = 1e-6
        for x in [0.3, 1.7, 6.2, 19.5, 80.0]:
            fd = -(j0(x + h) - j0(x - h)) / (2.0 * h)
            assert j1(x) == pytest.approx(fd, abs=1e-8)

    def test_zero_interlacing(self):
        for m in [0, 1, 5, 20]:
            zeros = [bessel_j_zero(m, n) for n in range(1, 8)]
            assert all(a < b for a, b in zip(zeros, zeros[1:]))
            for z in zeros:
                assert abs(bessel_j(m, z)) < 1e-10

    def test_series_vs_integral_duality(self):
        # J0(x) = (1/pi) int_0^pi cos(x sin t) dt on a log-spaced grid
        for x in np.logspace(-2, math.log10(60.0), 50):
            r = integrate_1d(lambda t: np.cos(x * np.sin(t)), 0.0, math.pi,
                             1e-12)
            assert j0(float(x)) == pytest.approx(r.value / math.pi, abs=1e-10)

    def test_real_order(self):
        # downward recurrence identity J_{nu-1} + J_{nu+1} = (2 nu / x) J_nu
        for nu, x in [(1.5, 3.0), (4.7, 12.0), (25.5, 40.0), (10.3, 150.0)]:
            lhs = bessel_j(nu - 1.0, x) + bessel_j(nu + 1.0, x)
            rhs = 2.0 * nu / x * bessel_j(nu, x)
            assert lhs == pytest.approx(rhs, abs=2e-10)

    def test_negative_order_rejected(self):
        with pytest.raises(DomainError):
            bessel_j(-0.5, 1.0)
        with pytest.raises(ValidationError):
            bessel_j_zero(0, 0)


class TestStruveH0:
    def test_odd_function(self):
        assert struve_h0(0.0) == 0.0
        x = np.linspace(0.1, 90.0, 40)
        np.testing.assert_allclose(struve_h0(-x), -struve_h0(x), rtol=0, atol=0)

    def test_integral_representation_oracle(self):
        # H0(x) = (2/pi) int_0^{pi/2} sin(x cos t) dt
        for x in [1.0, 5.0, 14.0, 19.9, 20.1, 45.0, 99.0]:
            r = integrate_1d(lambda t: np.sin(x * np.cos(t)), 0.0,
                             math.pi / 2.0, 1e-12)
            oracle = 2.0 / math.pi * r.value
            assert struve_h0(x) == pytest.approx(oracle, abs=1e-9 * max(1, abs(oracle)))

    def test_crossover_consistency(self):
        # both representations agree through the |x| = 20 switch
        for x in [19.5, 19.99, 20.01, 20.5]:
            r = integrate_1d(lambda t: np.sin(x * np.cos(t)), 0.0,
                             math.pi / 2.0, 1e-12)
            assert struve_h0(x) == pytest.approx(2.0 / math.pi * r.value,
                                                 abs=2e-10)


class TestEllipticK:
    def test_at_zero(self):
        assert elliptic_k(0.0) == pytest.approx(math.pi / 2.0, rel=1e-15)

    def test_quadrature_oracle(self):
        m = 0.75
        r = integrate_1d(lambda t: 1.0 / np.sqrt(1.0 - m * np.sin(t) ** 2),
                         0.0, math.pi / 2.0, 1e-13)
        assert elliptic_k(m) == pytest.approx(r.value, abs=1e-12)

    def test_log_asymptote(self):
        eps = 1e-6
        assert elliptic_k(1.0 - eps) == pytest.approx(
            0.5 * math.log(16.0 / eps), abs=1e-5)
        assert elliptic_kc(eps) == pytest.approx(0.5 * math.log(16.0 / eps),
                                                 abs=1e-5)

    def test_monotone_increasing(self):
        k = elliptic_k(np.linspace(0.0, 0.999, 200))
        assert np.all(np.diff(k) > 0)

    def test_domain(self):
        for bad in [-0.1, 1.0, 1.5]:
            with pytest.raises(DomainError):
                elliptic_k(bad)


def _hyp2f1_mp_oracle(a, b, c, z, terms=4000):
    """Direct Pochhammer summation at 30 significant digits."""
    with mp.workdps(30):
        total = mpf(1)
        term = mpf(1)
        for k in range(terms):
            term = term * (mpf(a) + k) * (mpf(b) + k) / ((mpf(c) + k) * (k + 1)) * mpf(z)
            total += term
            if abs(term) < mpf(10) ** -28 * abs(total):
                break
        return float(total)


class TestHyp2F1:
    def test_at_zero(self):
        assert hyp2f1(0.3, 0.7, 1.1, 0.0) == 1.0

    def test_direct_summation_oracle(self):
        third = 1.0 / 3.0
        got = hyp2f1(third, third, 2 * third, 0.5)
        assert got == pytest.approx(_hyp2f1_mp_oracle(third, third, 2 * third, 0.5),
                                    rel=1e-12)

    def test_equilateral_argument_at_psi_one(self):
        z = 4.0 / 27.0
        got = hyp2f1(2 / 3, 2 / 3, 1 / 3, z)
        assert math.isfinite(got)
        assert got == pytest.approx(_hyp2f1_mp_oracle(2 / 3, 2 / 3, 1 / 3, z),
                                    rel=1e-12)

    def test_near_one_with_raised_budget(self):
        pol = SeriesPolicy(max_terms=500_000)
        z = 0.999
        got = hyp2f1(-1 / 3, 2 / 3, 1 / 3, z, pol)
        assert got == pytest.approx(
            _hyp2f1_mp_oracle(-1 / 3, 2 / 3, 1 / 3, z, terms=200_000), rel=1e-9)

    def test_budget_exhaustion_reported(self):
        with pytest.raises(NonConvergenceError):
            hyp2f1(0.5, 0.5, 1.5, 0.99999, SeriesPolicy(max_terms=100))

    def test_domain(self):
        with pytest.raises(DomainError):
            hyp2f1(0.5, 0.5, 1.5, 1.0)
        with pytest.raises(ValidationError):
            hyp2f1(0.5, 0.5, -2.0, 0.5)


class TestHypPfq:
    def test_empty_sum(self):
        assert hyp_pfq([0.3, 0.9], [1.0, 1.0, 2.0], 0.0) == 1.0

    def test_leading_coefficient_2f3(self):
        # 2F3(1/3, 2/3; 1/2, 1, 1; z) = 1 + (4/9) z + O(z^2)
        z = 1e-6
        got = hyp_pfq([1 / 3, 2 / 3], [0.5, 1.0, 1.0], z)
        assert got - 1.0 == pytest.approx((4.0 / 9.0) * z, abs=1e-12)

    def test_leading_coefficient_3f4(self):
        # 3F4(1/4, 1/2, 3/4; 1/3, 2/3, 1, 1; z) = 1 + (27/64) z + O(z^2)
        z = 1e-6
        got = hyp_pfq([0.25, 0.5, 0.75], [1 / 3, 2 / 3, 1.0, 1.0], z)
        assert got - 1.0 == pytest.approx((27.0 / 64.0) * z, abs=1e-12)

    def test_reduces_to_j0(self):
        x = np.linspace(0.5, 50.0, 25)
        vals = hyp_pfq([], [1.0], -x ** 2 / 4.0)
        ref = j0(x)
        env = np.maximum(np.abs(ref), np.sqrt(2.0 / (math.pi * x)))
        assert np.max(np.abs(vals - ref) / env) < 1e-10

    def test_cancellation_regime_matches_high_precision(self):
        # deep cancellation: max term ~ exp(2 sqrt|z|) dwarfs the result
        a, b = (0.25, 0.5, 0.75), (1 / 3, 2 / 3, 1.0, 1.0)
        z = -5000.0
        with mp.workdps(80):
            total = mpf(1)
            term = mpf(1)
            for k in range(4000):
                num = (mpf(1) / 4 + k) * (mpf(1) / 2 + k) * (mpf(3) / 4 + k)
                den = (mpf(1) / 3 + k) * (mpf(2) / 3 + k) * (1 + k) ** 2 * (k + 1)
                term = term * mpf(z) * num / den
                total += term
                if abs(term) < mpf(10) ** -60 * (abs(total) + 1):
                    break
            oracle = float(total)
        assert hyp_pfq(a, b, z) == pytest.approx(oracle, rel=1e-10)

    def test_p_greater_q_rejected(self):
        with pytest.raises(ValidationError):
            hyp_pfq([0.5, 0.5], [1.0], -1.0)


class TestIncBeta:
    def test_trivial_values(self):
        assert inc_beta(0.0, 0.3, 0.5) == 0.0
        assert inc_beta(0.7, 1.0, 1.0) == pytest.approx(0.7, rel=1e-13)

    def test_quadrature_oracle(self):
        a, b = 0.5 - 1.0 / 5.0, 0.5
        z = 0.5
        r = integrate_1d(lambda t: t ** (a - 1.0) * (1.0 - t) ** (b - 1.0),
                         0.0, z, 1e-12)
        assert inc_beta(z, a, b) == pytest.approx(r.value, rel=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            inc_beta(1.0, 0.3, 0.5)
        with pytest.raises(DomainError):
            inc_beta(0.5, -1.5, 0.5)


class TestMeijerG:
    def test_params_frozen(self):
        MeijerG4044Params()  # defaults accepted
        with pytest.raises(ValidationError):
            MeijerG4044Params(a=(0.1, 0.2, 0.3, 0.4))

    def test_against_fourier_inversion_oracle(self):
        # G(27 psi^2/64) = (4 sqrt2 pi / 3) P(psi) with P the numerical
        # Fourier inversion of the 3F4 characteristic function
        def cf(xi):
            z = -16.0 * np.asarray(xi) ** 2 / 27.0
            re = (math.pi ** 2 / 2.0) * hyp_pfq(
                (0.25, 0.5, 0.75), (1 / 3, 2 / 3, 1.0, 1.0), z)
            return re + 0j * np.asarray(xi)

        for psi in [0.2, 0.5, 1.0]:
            res = fourier_invert(cf, psi, math.pi ** 2 / 2.0, tol=2e-5,
                                 internal_freq=math.sqrt(64.0 / 27.0))
            oracle = 4.0 * math.sqrt(2.0) * math.pi / 3.0 * res.value
            assert meijer_g_4044(27.0 * psi ** 2 / 64.0) == pytest.approx(
                oracle, abs=1e-4)

    def test_normalization_by_quadrature(self):
        # the symmetric density 2 * 3 G(27 psi^2/64) / (4 sqrt2 pi) on
        # (0, sqrt(64/27)) integrates to one
        edge = math.sqrt(64.0 / 27.0)
        pref = 2.0 * 3.0 / (4.0 * math.sqrt(2.0) * math.pi)

        def dens(p):
            p = np.atleast_1d(p)
            out = [pref * meijer_g_4044(
                min(max(27.0 * v * v / 64.0, 1e-200), 1.0 - 1e-16))
                for v in p]
            return np.asarray(out)

        r = integrate_1d(dens, 0.0, edge, 5e-7)
        assert abs(r.value - 1.0) < 1e-5

    def test_positive_on_grid(self):
        for z in np.linspace(0.02, 0.98, 20):
            assert meijer_g_4044(float(z)) > 0.0

    def test_domain(self):
        for bad in [0.0, 1.0, -0.2, 1.3]:
            with pytest.raises(DomainError):
                meijer_g_4044(bad)
