"""Geometry, eigenfunctions, spectra, sampling, nodal and tiling facts."""

import math

import numpy as np
import pytest
from scipy.stats import chisquare

from billiardstats.billiards import (BilliardSpec, Domain, Mode, Point, Shape,
                                     amplitude, domain_of, eigenfunction,
                                     energy, helmholtz_eigenvalue,
                                     nodal_domain_count, rhombic_inverse,
                                     rhombic_map, sample_uniform, tiling_class)
from billiardstats.errors import (OutsideDomainError, UnsupportedShapeError,
                                  ValidationError)

SQRT3 = math.sqrt(3.0)

ALL_STATES = [
    BilliardSpec(Shape.BOX1D, 3),
    BilliardSpec(Shape.RECTANGLE, 1, 1),
    BilliardSpec(Shape.RECTANGLE, 3, 2),
    BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 2),
    BilliardSpec(Shape.ISOSCELES_RIGHT, 2, 6),
    BilliardSpec(Shape.EQUILATERAL, 1, 2, Mode.COS),
    BilliardSpec(Shape.EQUILATERAL, 1, 3, Mode.SIN),
    BilliardSpec(Shape.HEMIEQUILATERAL, 1, 3, Mode.SIN),
    BilliardSpec(Shape.CIRCLE, 0, 1),
    BilliardSpec(Shape.CIRCLE, 20, 10),
]


class TestSpecValidation:
    def test_isosceles_equal_numbers_rejected(self):
        with pytest.raises(ValidationError):
            BilliardSpec(Shape.ISOSCELES_RIGHT, 2, 2)

    def test_equilateral_needs_mode(self):
        with pytest.raises(ValidationError):
            BilliardSpec(Shape.EQUILATERAL, 1, 2)

    def test_vanishing_families_rejected(self):
        for m, n, mode in [(1, 1, Mode.COS), (1, 2, Mode.SIN), (2, 4, Mode.SIN)]:
            with pytest.raises(ValidationError):
                BilliardSpec(Shape.EQUILATERAL, m, n, mode)

    def test_circle_allows_zero_order(self):
        BilliardSpec(Shape.CIRCLE, 0, 1)
        with pytest.raises(ValidationError):
            BilliardSpec(Shape.CIRCLE, 0, 0)

    def test_mode_rejected_elsewhere(self):
        with pytest.raises(ValidationError):
            BilliardSpec(Shape.RECTANGLE, 1, 1, Mode.COS)


class TestEigenfunctions:
    def test_rectangle_ground_maximum(self):
        spec = BilliardSpec(Shape.RECTANGLE, 1, 1)
        assert eigenfunction(spec, Point(math.pi / 2, math.pi / 2)) == pytest.approx(1.0)

    def test_isosceles_dirichlet_at_boundary_point(self):
        spec = BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 2)
        assert eigenfunction(spec, Point(1.3, 0.0)) == pytest.approx(0.0, abs=1e-14)
        assert eigenfunction(spec, Point(1.3, 1.3)) == pytest.approx(0.0, abs=1e-14)

    def test_equilateral_ground_rhombic_value(self):
        # at u = v = pi/3 the product form gives 4 (sqrt3/2)^2 sin(2 pi/3)
        spec = BilliardSpec(Shape.EQUILATERAL, 1, 2, Mode.COS)
        x, y = rhombic_inverse(math.pi / 3.0, math.pi / 3.0)
        assert eigenfunction(spec, Point(x, y)) == pytest.approx(
            3.0 * SQRT3 / 2.0, rel=1e-14)

    def test_outside_domain_rejected(self):
        spec = BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 2)
        with pytest.raises(OutsideDomainError):
            eigenfunction(spec, Point(0.5, 2.0))

    def test_dirichlet_boundary_everywhere(self):
        for spec in ALL_STATES:
            bx, by = domain_of(spec).boundary_points(1000)
            vals = amplitude(spec, bx, by)
            assert np.max(np.abs(vals)) < 1e-10, spec

    def test_helmholtz_residual(self):
        h = 1e-3
        rng = np.random.default_rng(11)
        for spec in ALL_STATES:
            if spec.shape is Shape.BOX1D:
                continue
            dom = domain_of(spec)
            x, y = sample_uniform(dom, rng, 400)
            ok = np.ones(x.shape, dtype=bool)
            for dx, dy in [(2*h, 0), (-2*h, 0), (0, 2*h), (0, -2*h)]:
                ok &= np.asarray(dom.contains(x + dx, y + dy))
            x, y = x[ok], y[ok]
            lap = (amplitude(spec, x + h, y) + amplitude(spec, x - h, y)
                   + amplitude(spec, x, y + h) + amplitude(spec, x, y - h)
                   - 4.0 * amplitude(spec, x, y)) / h ** 2
            k2 = helmholtz_eigenvalue(spec)
            resid = lap + k2 * amplitude(spec, x, y)
            # truncation of the 5-point stencil is O(h^2 k^2) relative
            assert np.max(np.abs(resid)) < 1e-2 * max(1.0, k2), spec

    def test_isosceles_antisymmetry(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(0, math.pi, 200)
        y = rng.uniform(0, math.pi, 200)
        s12 = BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 2)
        s21 = BilliardSpec(Shape.ISOSCELES_RIGHT, 2, 1)
        np.testing.assert_allclose(amplitude(s12, x, y),
                                   -amplitude(s12, y, x), atol=1e-14)
        np.testing.assert_allclose(amplitude(s21, x, y),
                                   -amplitude(s12, x, y), atol=1e-14)

    def test_equilateral_cartesian_vs_rhombic(self):
        spec = BilliardSpec(Shape.EQUILATERAL, 1, 2, Mode.COS)
        rng = np.random.default_rng(5)
        x = rng.uniform(0, math.pi, 500)
        y = rng.uniform(0, SQRT3 * math.pi / 2, 500)
        keep = np.asarray(Domain(Shape.EQUILATERAL).contains(x, y))
        x, y = x[keep], y[keep]
        u = x - y / SQRT3
        v = 2.0 * y / SQRT3
        product_form = 4.0 * np.sin(u) * np.sin(v) * np.sin(u + v)
        np.testing.assert_allclose(amplitude(spec, x, y), product_form,
                                   atol=1e-12)


class TestRhombicMap:
    def test_origin(self):
        assert rhombic_map(Point(0.0, 0.0)) == (0.0, 0.0)

    def test_rhombus_vertex(self):
        u, v = rhombic_map(Point(math.pi / 2, SQRT3 * math.pi / 2))
        assert u == pytest.approx(0.0, abs=1e-14)
        assert v == pytest.approx(math.pi, rel=1e-14)

    def test_roundtrip(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            x, y = rng.uniform(-5, 5, 2)
            u, v = rhombic_map(Point(x, y))
            xi, yi = rhombic_inverse(u, v)
            assert xi == pytest.approx(x, abs=1e-14)
            assert yi == pytest.approx(y, abs=1e-14)


class TestEnergy:
    def test_quoted_scalings(self):
        assert energy(BilliardSpec(Shape.RECTANGLE, 3, 2)) == 13.0
        assert energy(BilliardSpec(Shape.EQUILATERAL, 1, 2, Mode.COS)) == 3.0

    def test_circle_energy_is_squared_zero(self):
        from billiardstats.specialfn import bessel_j_zero
        z = bessel_j_zero(0, 1)
        assert energy(BilliardSpec(Shape.CIRCLE, 0, 1)) == pytest.approx(
            z * z, rel=1e-12)
        assert energy(BilliardSpec(Shape.CIRCLE, 0, 1)) == pytest.approx(
            5.7832, abs=1e-4)


class TestSampling:
    def test_rectangle_mean(self):
        rng = np.random.default_rng(42)
        x, _ = sample_uniform(Domain(Shape.RECTANGLE), rng, 10 ** 6)
        sigma = math.pi / math.sqrt(12.0) / 1000.0
        assert abs(float(np.mean(x)) - math.pi / 2.0) < 3.0 * sigma

    def test_circle_radial_fraction(self):
        rng = np.random.default_rng(42)
        x, y = sample_uniform(Domain(Shape.CIRCLE), rng, 10 ** 6)
        frac = float(np.mean(np.hypot(x, y) < math.pi / 2.0))
        sigma = math.sqrt(0.25 * 0.75 / 10 ** 6)
        assert abs(frac - 0.25) < 3.0 * sigma

    def test_square_grid_uniformity_chi2(self):
        rng = np.random.default_rng(123)
        x, y = sample_uniform(Domain(Shape.RECTANGLE), rng, 200_000)
        ix = np.minimum((x / math.pi * 10).astype(int), 9)
        iy = np.minimum((y / math.pi * 10).astype(int), 9)
        counts = np.bincount(ix * 10 + iy, minlength=100)
        _, pvalue = chisquare(counts)
        assert pvalue > 0.01

    def test_points_inside_domains(self):
        rng = np.random.default_rng(9)
        for shape in Shape:
            dom = Domain(shape)
            x, y = sample_uniform(dom, rng, 20_000)
            assert np.all(dom.contains(x, y)), shape

    def test_scalar_draw_returns_point(self):
        rng = np.random.default_rng(1)
        p = sample_uniform(Domain(Shape.EQUILATERAL), rng)
        assert isinstance(p, Point)

    def test_rectangle_sign_balance(self):
        rng = np.random.default_rng(77)
        x, y = sample_uniform(Domain(Shape.RECTANGLE), rng, 10 ** 6)
        vals = amplitude(BilliardSpec(Shape.RECTANGLE, 3, 2), x, y)
        pos = float(np.mean(vals > 0))
        neg = float(np.mean(vals < 0))
        assert abs(pos - neg) < 3.0 * math.sqrt(1.0 / 10 ** 6)
        vals = amplitude(BilliardSpec(Shape.RECTANGLE, 1, 1), x, y)
        assert np.all(vals >= 0.0)


class TestNodalAndTiling:
    def test_nodal_counts(self):
        assert nodal_domain_count(BilliardSpec(Shape.RECTANGLE, 3, 2)) == 6
        assert nodal_domain_count(BilliardSpec(Shape.RECTANGLE, 1, 1)) == 1
        assert nodal_domain_count(BilliardSpec(Shape.RECTANGLE, 3, 3)) == 9
        with pytest.raises(UnsupportedShapeError):
            nodal_domain_count(BilliardSpec(Shape.BOX1D, 2))

    def test_tiling_hierarchy(self):
        tc = tiling_class(BilliardSpec(Shape.ISOSCELES_RIGHT, 2, 6))
        assert tc.is_tiled and tc.d == 2
        assert (tc.parent.m, tc.parent.n) == (1, 3)
        tc = tiling_class(BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 3))
        assert tc.is_tiled and tc.d == 1 and tc.parent is None
        tc = tiling_class(BilliardSpec(Shape.ISOSCELES_RIGHT, 1, 2))
        assert not tc.is_tiled
        with pytest.raises(UnsupportedShapeError):
            tiling_class(BilliardSpec(Shape.RECTANGLE, 1, 2))
