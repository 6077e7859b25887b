"""Quadrature and Fourier-inversion behavior."""

import math

import numpy as np
import pytest

from billiardstats.billiards import BilliardSpec, Domain, Mode, Shape
from billiardstats.distributions import pdf_closed, support_edge
from billiardstats.errors import ValidationError
from billiardstats.quadrature import (QuadratureResult, fourier_invert,
                                      integrate_1d, integrate_2d)
from billiardstats.specialfn import elliptic_kc, hyp_pfq, j0, struve_h0


class TestIntegrate1D:
    def test_arcsine_singular_endpoint(self):
        r = integrate_1d(lambda u: 1.0 / np.sqrt(1.0 - u * u), 0.0, 1.0, 1e-10)
        assert r.converged
        assert r.value == pytest.approx(math.pi / 2.0, abs=1e-10)

    def test_plain_sine(self):
        r = integrate_1d(np.sin, 0.0, math.pi, 1e-12)
        assert r.converged
        assert r.value == pytest.approx(2.0, abs=1e-12)

    def test_bessel_weighted_arcsine_vs_series(self):
        # expand J0(5u) term by term: int_0^1 u^{2t}/sqrt(1-u^2) du
        # = sqrt(pi) Gamma(t + 1/2) / (2 Gamma(t+1))
        total = 0.0
        term_coeff = 1.0
        for t in range(60):
            if t > 0:
                term_coeff *= -(5.0 / 2.0) ** 2 / (t * t)
            total += term_coeff * (math.sqrt(math.pi) / 2.0
                                   * math.gamma(t + 0.5) / math.gamma(t + 1.0))
        r = integrate_1d(lambda u: j0(5.0 * u) / np.sqrt(1.0 - u * u),
                         0.0, 1.0, 1e-11)
        assert r.value == pytest.approx(total, abs=1e-9)

    def test_oscillatory_fallback(self):
        r = integrate_1d(lambda x: np.cos(40.0 * x), 0.0, 10.0, 1e-10)
        assert r.converged
        assert r.value == pytest.approx(math.sin(400.0) / 40.0, abs=1e-10)

    def test_error_contract(self):
        r = integrate_1d(lambda u: np.log(np.abs(u)), 0.0, 1.0, 1e-9)
        assert abs(r.value + 1.0) <= max(1e-9, r.error_estimate)

    def test_invalid_interval(self):
        with pytest.raises(ValidationError):
            integrate_1d(np.sin, 1.0, 0.0)

    def test_refinement_monotonicity(self):
        cases = [
            (lambda u: 1.0 / np.sqrt(1.0 - u * u), 0.0, 1.0),
            (np.sin, 0.0, math.pi),
            (lambda x: np.exp(-x) * np.cos(3.0 * x), 0.0, 8.0),
        ]
        for f, a, b in cases:
            prev = None
            for tol in [1e-4, 5e-5, 2.5e-5, 1.25e-5, 1e-7, 1e-9]:
                est = integrate_1d(f, a, b, tol).error_estimate
                if prev is not None:
                    assert est <= prev * (1.0 + 1e-12)
                prev = est


class TestIntegrate2D:
    def test_square_area(self):
        r = integrate_2d(lambda x, y: np.ones_like(x),
                         Domain(Shape.RECTANGLE), 1e-10)
        assert r.converged
        assert r.value == pytest.approx(math.pi ** 2, abs=1e-10)

    def test_triangle_area(self):
        r = integrate_2d(lambda x, y: np.ones_like(x),
                         Domain(Shape.ISOSCELES_RIGHT), 1e-10)
        assert r.value == pytest.approx(math.pi ** 2 / 2.0, abs=1e-10)

    def test_isosceles_square_second_power(self):
        # the t = 2 moment integral over the full square equals pi^2/2
        r = integrate_2d(
            lambda x, y: (np.sin(x) * np.sin(2 * y) - np.sin(2 * x) * np.sin(y)) ** 2,
            Domain(Shape.RECTANGLE), 1e-9)
        assert r.value == pytest.approx(math.pi ** 2 / 2.0, abs=1e-8)

    def test_result_invariants(self):
        r = integrate_2d(lambda x, y: np.sin(x) * np.sin(y),
                         Domain(Shape.RECTANGLE), 1e-9)
        assert isinstance(r, QuadratureResult)
        assert r.evaluations > 0
        assert r.error_estimate >= 0.0


def _cf_rect(xi):
    return math.pi ** 2 * j0(np.asarray(xi) / 2.0) ** 2 + 0j * np.asarray(xi)


def _cf_box1(xi):
    xi = np.asarray(xi)
    return math.pi * (j0(xi) + 1j * struve_h0(xi))


class TestFourierInvert:
    def test_bessel_cf_at_zero(self):
        res = fourier_invert(lambda xi: math.pi * j0(xi) + 0j * np.asarray(xi),
                             0.0, math.pi, tol=1e-7, internal_freq=1.0)
        assert res.converged
        assert res.value == pytest.approx(1.0 / math.pi, abs=1e-6)

    def test_rectangle_cf_at_support_edge_gives_jump_midpoint(self):
        # the density jumps from 1/pi to 0 at |psi| = 1; pointwise Fourier
        # inversion converges to the midpoint of the jump there
        res = fourier_invert(_cf_rect, 1.0, math.pi ** 2, tol=1e-5,
                             internal_freq=1.0)
        assert res.value == pytest.approx(0.5 / math.pi, abs=1e-4)

    def test_gaussian_self_transform(self):
        res = fourier_invert(lambda xi: np.exp(-np.asarray(xi) ** 2 / 2.0)
                             + 0j * np.asarray(xi),
                             0.0, 1.0, tol=1e-9, internal_freq=0.0)
        assert res.converged
        assert res.value == pytest.approx(1.0 / math.sqrt(2.0 * math.pi),
                                          abs=1e-8)

    def test_reproduces_rectangle_density_on_support(self):
        for psi in [0.05, 0.2, 0.5, 0.8, 0.95]:
            res = fourier_invert(_cf_rect, psi, math.pi ** 2, tol=1e-5,
                                 internal_freq=1.0)
            expect = (2.0 / math.pi ** 2) * elliptic_kc(psi * psi)
            assert res.value == pytest.approx(expect, abs=1e-3)

    def test_reproduces_box1d_density_including_odd_part(self):
        for psi in [0.4, -0.4, 0.75, -0.75]:
            res = fourier_invert(_cf_box1, psi, math.pi, tol=1e-6,
                                 internal_freq=1.0)
            expect = ((1.0 + math.copysign(1.0, psi))
                      / (math.pi * math.sqrt(1.0 - psi * psi)))
            assert res.value == pytest.approx(expect, abs=1e-3)

    def test_density_integrates_to_one(self):
        # composite rule over the support, the singular point crossed by
        # a graded sub-grid; total within 1e-3
        from billiardstats._accel import gauss_legendre
        x8, w8 = gauss_legendre(8)
        segs = [(-1.0, -0.05), (-0.05, 0.05), (0.05, 1.0)]
        total = 0.0
        for a, b in segs:
            if a == -0.05:
                sub = np.concatenate([-np.logspace(math.log10(0.05), -2.7, 6),
                                      np.logspace(-2.7, math.log10(0.05), 6)])
            else:
                sub = np.linspace(a, b, 7)
            for lo, hi in zip(sub[:-1], sub[1:]):
                mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
                pts = mid + half * x8
                vals = [fourier_invert(_cf_rect, float(p), math.pi ** 2,
                                       tol=1e-4, internal_freq=1.0).value
                        for p in pts]
                total += float(np.dot(vals, w8)) * half
        assert total == pytest.approx(1.0, abs=1e-3)

    def test_closed_form_reproduction_grid(self):
        # inversion matches every closed-form density within 1e-3 absolute
        # outside the singular window (support edges are exercised at 0.96)
        cases = [
            BilliardSpec(Shape.BOX1D, 2),
            BilliardSpec(Shape.RECTANGLE, 3, 2),
            BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 3),
            BilliardSpec(Shape.EQUILATERAL, 1, 2, Mode.COS),
        ]
        from billiardstats.distributions import pdf_via_ft
        for spec in cases:
            edge = support_edge(spec)
            for frac in [0.05, 0.3, 0.7, 0.96]:
                psi = frac * edge
                got = pdf_via_ft(spec, psi, tol=1e-4)
                want = pdf_closed(spec, psi)
                assert got == pytest.approx(want, abs=1e-3), (spec, psi)

    def test_invalid_area(self):
        with pytest.raises(ValidationError):
            fourier_invert(_cf_rect, 0.5, 0.0)
