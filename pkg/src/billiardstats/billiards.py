"""Billiard geometry, eigenfunctions, spectra, and uniform sampling.

Canonical sizes are fixed (side pi, circle radius pi); arbitrary sizes are
equivalent by rescaling and handled, where needed, as a CLI pre-transform.
Amplitudes are unnormalised: densities are normalised by domain area
downstream instead.

Shapes and eigenfunctions
-------------------------
box1d         sin(m x) on [0, pi]
rectangle     sin(m x) sin(n y) on [0, pi]^2
isosceles     sin(m x) sin(n y) - sin(n x) sin(m y) on {0 <= y <= x <= pi}
equilateral   three-term trigonometric sum on the side-pi triangle with the
              (cos, sin) selector for the symmetric/antisymmetric family;
              in rhombic coordinates u = x - y/sqrt3, v = 2y/sqrt3 the
              ground state collapses to 4 sin(u) sin(v) sin(u+v)
hemiequilateral
              the equilateral antisymmetric (sin) family restricted to the
              half triangle below its mirror line y = x/sqrt3 (the altitude
              through the origin vertex), where it satisfies Dirichlet
              conditions on the new edge; no closed-form densities exist,
              Monte Carlo only
circle        J_m(z_{m,n} r / pi) cos(m theta) on r <= pi (real convention)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import (OutsideDomainError, UnsupportedShapeError,
                     ValidationError)
from .specialfn import bessel_j_zero, besselj_int

_SQRT3 = math.sqrt(3.0)


class Shape(str, Enum):
    BOX1D = "box1d"
    RECTANGLE = "rectangle"
    ISOSCELES_RIGHT = "isosceles"
    EQUILATERAL = "equilateral"
    HEMIEQUILATERAL = "hemiequilateral"
    CIRCLE = "circle"


class Mode(str, Enum):
    COS = "cos"
    SIN = "sin"
    NA = "na"


def _sin_family_vanishes(m: int, n: int) -> bool:
    # the antisymmetric three-term sum cancels identically in these cases
    return m == n or n == 2 * m or m == 2 * n


def _cos_family_vanishes(m: int, n: int) -> bool:
    # with m = n the second and third terms cancel and the first vanishes
    return m == n


@dataclass(frozen=True)
class BilliardSpec:
    """One eigenstate: shape tag, quantum numbers, and (for the equilateral
    family) the symmetric/antisymmetric mode selector."""

    shape: Shape
    m: int
    n: int = 1
    mode: Mode = Mode.NA

    def __post_init__(self):
        shape, m, n, mode = self.shape, self.m, self.n, self.mode
        if shape is Shape.CIRCLE:
            if m < 0 or n < 1:
                raise ValidationError("circle requires m >= 0 and n >= 1")
        elif m < 1 or n < 1:
            raise ValidationError("quantum numbers must be positive")
        if shape is Shape.ISOSCELES_RIGHT and m == n:
            raise ValidationError(
                "isosceles-right eigenfunction vanishes identically for m = n")
        if shape is Shape.EQUILATERAL:
            if mode is Mode.NA:
                raise ValidationError("equilateral requires mode cos or sin")
            if mode is Mode.SIN and _sin_family_vanishes(m, n):
                raise ValidationError(
                    f"equilateral sin mode ({m},{n}) vanishes identically")
            if mode is Mode.COS and _cos_family_vanishes(m, n):
                raise ValidationError(
                    f"equilateral cos mode ({m},{n}) vanishes identically")
        elif shape is Shape.HEMIEQUILATERAL:
            if mode is not Mode.SIN:
                raise ValidationError(
                    "hemiequilateral states are the equilateral sin family")
            if _sin_family_vanishes(m, n):
                raise ValidationError(
                    f"hemiequilateral state ({m},{n}) vanishes identically")
        elif mode is not Mode.NA:
            raise ValidationError(f"mode selector is not defined for {shape.value}")


@dataclass(frozen=True)
class Point:
    x: float
    y: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError("point coordinates must be finite")


@dataclass(frozen=True)
class Domain:
    """Canonical billiard region (side pi, radius pi)."""

    shape: Shape

    @property
    def area(self) -> float:
        return {
            Shape.BOX1D: math.pi,  # length; densities normalise by it
            Shape.RECTANGLE: math.pi ** 2,
            Shape.ISOSCELES_RIGHT: math.pi ** 2 / 2.0,
            Shape.EQUILATERAL: _SQRT3 * math.pi ** 2 / 4.0,
            Shape.HEMIEQUILATERAL: _SQRT3 * math.pi ** 2 / 8.0,
            Shape.CIRCLE: math.pi ** 3,
        }[self.shape]

    def contains(self, x, y, tol: float = 1e-12):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if self.shape is Shape.BOX1D:
            return (x >= -tol) & (x <= math.pi + tol) & (np.abs(y) <= tol)
        if self.shape is Shape.RECTANGLE:
            return ((x >= -tol) & (x <= math.pi + tol)
                    & (y >= -tol) & (y <= math.pi + tol))
        if self.shape is Shape.ISOSCELES_RIGHT:
            return (y >= -tol) & (x <= math.pi + tol) & (y <= x + tol)
        if self.shape is Shape.EQUILATERAL:
            return ((y >= -tol) & (y <= _SQRT3 * x + tol)
                    & (y <= _SQRT3 * (math.pi - x) + tol))
        if self.shape is Shape.HEMIEQUILATERAL:
            return ((y >= -tol) & (y <= x / _SQRT3 + tol)
                    & (y <= _SQRT3 * (math.pi - x) + tol))
        if self.shape is Shape.CIRCLE:
            return np.hypot(x, y) <= math.pi + tol
        raise UnsupportedShapeError(self.shape)  # pragma: no cover

    def quadrature_map(self):
        """(map_fn, u-range, v-range) with map_fn(U, V) -> (X, Y, jacobian);
        the map flattens the region onto a rectangle for tensor quadrature."""
        if self.shape is Shape.RECTANGLE:
            def rect(u, v):
                return u, v, np.ones(np.broadcast_shapes(u.shape, v.shape))
            return rect, (0.0, math.pi), (0.0, math.pi)
        if self.shape is Shape.ISOSCELES_RIGHT:
            def tri(u, v):
                return u, u * v, np.broadcast_to(u, np.broadcast_shapes(
                    u.shape, v.shape))
            return tri, (0.0, math.pi), (0.0, 1.0)
        if self.shape is Shape.EQUILATERAL:
            def equi(s, t):
                # rhombic coordinates (u, v) = (s, (pi - s) t) cover the
                # triangle {u, v >= 0, u + v <= pi}
                v = (math.pi - s) * t
                x = s + 0.5 * v
                y = 0.5 * _SQRT3 * v
                jac = 0.5 * _SQRT3 * (math.pi - s)
                shape = np.broadcast_shapes(x.shape, y.shape)
                return (np.broadcast_to(x, shape), np.broadcast_to(y, shape),
                        np.broadcast_to(jac, shape))
            return equi, (0.0, math.pi), (0.0, 1.0)
        if self.shape is Shape.HEMIEQUILATERAL:
            def hemi(s, t):
                # collapsed-edge map of the triangle (0,0), (pi,0),
                # (3 pi/4, sqrt3 pi/4)
                x = s * math.pi * (1.0 - 0.25 * t)
                y = s * 0.25 * _SQRT3 * math.pi * t
                jac_val = s * (_SQRT3 * math.pi ** 2 / 4.0)
                shape = np.broadcast_shapes(x.shape, y.shape)
                return (np.broadcast_to(x, shape), np.broadcast_to(y, shape),
                        np.broadcast_to(jac_val, shape))
            return hemi, (0.0, 1.0), (0.0, 1.0)
        if self.shape is Shape.CIRCLE:
            def disc(r, th):
                x = r * np.cos(th)
                y = r * np.sin(th)
                shape = np.broadcast_shapes(x.shape, y.shape)
                return x, y, np.broadcast_to(r, shape)
            return disc, (0.0, math.pi), (0.0, 2.0 * math.pi)
        raise UnsupportedShapeError(
            f"no 2-D quadrature map for {self.shape.value}")

    def boundary_points(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        """Evenly spread points along the boundary (Dirichlet checks)."""
        t = (np.arange(count) + 0.5) / count
        if self.shape is Shape.BOX1D:
            x = np.where(t < 0.5, 0.0, math.pi)
            return x, np.zeros_like(x)
        if self.shape is Shape.RECTANGLE:
            corners = [(0, 0), (math.pi, 0), (math.pi, math.pi), (0, math.pi)]
        elif self.shape is Shape.ISOSCELES_RIGHT:
            corners = [(0, 0), (math.pi, 0), (math.pi, math.pi)]
        elif self.shape is Shape.EQUILATERAL:
            corners = [(0, 0), (math.pi, 0), (math.pi / 2, _SQRT3 * math.pi / 2)]
        elif self.shape is Shape.HEMIEQUILATERAL:
            corners = [(0, 0), (math.pi, 0),
                       (0.75 * math.pi, 0.25 * _SQRT3 * math.pi)]
        elif self.shape is Shape.CIRCLE:
            th = 2.0 * math.pi * t
            return math.pi * np.cos(th), math.pi * np.sin(th)
        else:  # pragma: no cover
            raise UnsupportedShapeError(self.shape)
        pts = np.array(corners + [corners[0]], dtype=np.float64)
        seg = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        s = t * cum[-1]
        idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg) - 1)
        frac = (s - cum[idx]) / seg[idx]
        x = pts[idx, 0] + frac * np.diff(pts[:, 0])[idx]
        y = pts[idx, 1] + frac * np.diff(pts[:, 1])[idx]
        return x, y


def domain_of(spec: BilliardSpec) -> Domain:
    return Domain(spec.shape)


# ---------------------------------------------------------------------------
# eigenfunctions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=512)
def _circle_zero(m: int, n: int) -> float:
    return bessel_j_zero(m, n)


def _equilateral_terms(m: int, n: int, x, y, antisymmetric: bool):
    cy = 2.0 / _SQRT3
    cx = 2.0 / 3.0
    trig = np.sin if antisymmetric else np.cos
    return (np.sin((m - n) * cy * y) * trig(-(m + n) * cx * x)
            + np.sin(n * cy * y) * trig((2 * m - n) * cx * x)
            - np.sin(m * cy * y) * trig((2 * n - m) * cx * x))


def amplitude(spec: BilliardSpec, x, y=0.0) -> np.ndarray | float:
    """Unnormalised eigenfunction amplitude, vectorised, no domain check."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    m, n = spec.m, spec.n
    if spec.shape is Shape.BOX1D:
        out = np.sin(m * x)
    elif spec.shape is Shape.RECTANGLE:
        out = np.sin(m * x) * np.sin(n * y)
    elif spec.shape is Shape.ISOSCELES_RIGHT:
        out = np.sin(m * x) * np.sin(n * y) - np.sin(n * x) * np.sin(m * y)
    elif spec.shape in (Shape.EQUILATERAL, Shape.HEMIEQUILATERAL):
        anti = (spec.mode is Mode.SIN)
        out = _equilateral_terms(m, n, x, y, anti)
    elif spec.shape is Shape.CIRCLE:
        r = np.hypot(x, y)
        theta = np.arctan2(y, x)
        z = _circle_zero(m, n)
        out = besselj_int(m, z * np.atleast_1d(r) / math.pi) * np.cos(m * theta)
        out = out if np.ndim(r) else np.asarray(out).reshape(())
    else:  # pragma: no cover
        raise UnsupportedShapeError(spec.shape)
    return out if (np.ndim(x) or np.ndim(y)) else float(out)


def eigenfunction(spec: BilliardSpec, p: Point) -> float:
    """Amplitude at a single point, with a domain membership check."""
    if not bool(domain_of(spec).contains(p.x, p.y)):
        raise OutsideDomainError(
            f"point ({p.x}, {p.y}) lies outside the {spec.shape.value} domain")
    return float(amplitude(spec, p.x, p.y))


def rhombic_map(p: Point | tuple) -> tuple[float, float]:
    """Rhombic coordinates u = x - y/sqrt3, v = 2y/sqrt3 (linear,
    invertible); maps the tiled rhombus onto [0, pi]^2."""
    x, y = (p.x, p.y) if isinstance(p, Point) else p
    return x - y / _SQRT3, 2.0 * y / _SQRT3


def rhombic_inverse(u: float, v: float) -> tuple[float, float]:
    return u + 0.5 * v, 0.5 * _SQRT3 * v


def energy(spec: BilliardSpec) -> float:
    """Eigenenergy scaling per shape (canonical size)."""
    m, n = spec.m, spec.n
    if spec.shape is Shape.BOX1D:
        return float(m * m)
    if spec.shape in (Shape.RECTANGLE, Shape.ISOSCELES_RIGHT):
        return float(m * m + n * n)
    if spec.shape in (Shape.EQUILATERAL, Shape.HEMIEQUILATERAL):
        return float(m * m + n * n - m * n)
    if spec.shape is Shape.CIRCLE:
        return _circle_zero(m, n) ** 2
    raise UnsupportedShapeError(spec.shape)  # pragma: no cover


def helmholtz_eigenvalue(spec: BilliardSpec) -> float:
    """Exact Laplacian eigenvalue of the canonical-size eigenfunction
    (-laplacian psi = k^2 psi); differs from :func:`energy` by the fixed
    geometry factor of the equilateral family and the circle radius."""
    if spec.shape in (Shape.EQUILATERAL, Shape.HEMIEQUILATERAL):
        return (16.0 / 9.0) * energy(spec)
    if spec.shape is Shape.CIRCLE:
        return energy(spec) / math.pi ** 2
    return energy(spec)


# ---------------------------------------------------------------------------
# uniform sampling
# ---------------------------------------------------------------------------

def sample_uniform(domain: Domain, rng: np.random.Generator, size=None):
    """Uniform points on the domain; returns a Point when size is None,
    otherwise (x, y) arrays.  Triangles use fold maps, the disc uses
    r = pi sqrt(U)."""
    n = 1 if size is None else int(size)
    if domain.shape is Shape.BOX1D:
        x = rng.uniform(0.0, math.pi, n)
        y = np.zeros_like(x)
    elif domain.shape is Shape.RECTANGLE:
        x = rng.uniform(0.0, math.pi, n)
        y = rng.uniform(0.0, math.pi, n)
    elif domain.shape is Shape.ISOSCELES_RIGHT:
        x = rng.uniform(0.0, math.pi, n)
        y = rng.uniform(0.0, math.pi, n)
        swap = y > x
        x2 = np.where(swap, y, x)
        y = np.where(swap, x, y)
        x = x2
    elif domain.shape in (Shape.EQUILATERAL, Shape.HEMIEQUILATERAL):
        u = rng.uniform(0.0, math.pi, n)
        v = rng.uniform(0.0, math.pi, n)
        over = u + v > math.pi
        u2 = np.where(over, math.pi - v, u)
        v = np.where(over, math.pi - u, v)
        u = u2
        x = u + 0.5 * v
        y = 0.5 * _SQRT3 * v
        if domain.shape is Shape.HEMIEQUILATERAL:
            # fold across the sin-family mirror line y = x/sqrt3
            above = y > x / _SQRT3
            xr = 0.5 * x + 0.5 * _SQRT3 * y
            yr = 0.5 * _SQRT3 * x - 0.5 * y
            x = np.where(above, xr, x)
            y = np.where(above, yr, y)
    elif domain.shape is Shape.CIRCLE:
        r = math.pi * np.sqrt(rng.uniform(0.0, 1.0, n))
        th = rng.uniform(0.0, 2.0 * math.pi, n)
        x = r * np.cos(th)
        y = r * np.sin(th)
    else:  # pragma: no cover
        raise UnsupportedShapeError(domain.shape)
    if size is None:
        return Point(float(x[0]), float(y[0]))
    return x, y


# ---------------------------------------------------------------------------
# nodal domains and tiling
# ---------------------------------------------------------------------------

def nodal_domain_count(spec: BilliardSpec) -> int:
    """Number of nodal domains; the rectangle's checkerboard gives m*n."""
    if spec.shape is not Shape.RECTANGLE:
        raise UnsupportedShapeError(
            "nodal domain counting is only available for the rectangle")
    return spec.m * spec.n


@dataclass(frozen=True)
class TilingClass:
    is_tiled: bool
    d: int
    parent: BilliardSpec | None


def tiling_class(spec: BilliardSpec) -> TilingClass:
    """Tiling structure of a right-isosceles state: antisymmetric about the
    hypotenuse bisector when m + n is even, and composed of d^2 copies of
    (m/d, n/d) when d = gcd(m, n) > 1."""
    if spec.shape is not Shape.ISOSCELES_RIGHT:
        raise UnsupportedShapeError(
            "tiling classification is only defined for the isosceles triangle")
    d = math.gcd(spec.m, spec.n)
    tiled = ((spec.m + spec.n) % 2 == 0) or d > 1
    parent = None
    if d > 1:
        parent = BilliardSpec(Shape.ISOSCELES_RIGHT, spec.m // d, spec.n // d)
    return TilingClass(tiled, d, parent)
