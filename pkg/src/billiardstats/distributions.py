"""Characteristic functions and amplitude densities of billiard eigenstates.

For each closed-form state the package carries three independent routes:

* ``cf_closed`` / ``pdf_closed``: the analytic expressions (Bessel, Struve,
  elliptic K, generalized hypergeometric, Meijer G, incomplete beta);
* ``cf_numeric``: direct quadrature of the defining domain integral
  integral_D exp(i xi Psi(x)) dx;
* ``pdf_via_ft``: numerical Fourier inversion of the characteristic
  function, the oracle for the closed-form densities.

Closed forms exist for: the 1-D box (any m), the rectangle (any m, n), the
right-isosceles states (1,2), (1,3) and the tiled hierarchy (d, 3d) with d
even (which shares the (1,3) density), the equilateral ground manifold
(1,2) cos, and the circle in its large-order asymptotic regime (m > 2).
Everything else is served by the numeric routes.

Conventions: amplitudes are unnormalised, densities are normalised by the
domain area; densities vanish outside their support; the densities of the
2-D shapes diverge at zero amplitude (and the 1-D box at |psi| = 1), where
:class:`~billiardstats.errors.SingularPointError` is raised instead of a
number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from ._accel import gauss_legendre
from .billiards import (BilliardSpec, Domain, Mode, Shape, amplitude,
                        domain_of, tiling_class)
from .errors import (NoClosedFormError, NonConvergenceError,
                     SingularPointError, UnsupportedShapeError,
                     ValidationError)
from .policy import DEFAULT_POLICY, SeriesPolicy
from .quadrature import (QuadratureResult, fourier_invert, integrate_1d,
                         tensor_grid)
from .specialfn import (bessel_j_zero, elliptic_kc, gamma, hyp2f1, hyp_pfq,
                        inc_beta, j0, meijer_g_4044, struve_h0)

_SQRT3 = math.sqrt(3.0)

# hypergeometric parameter blocks of the closed-form characteristic functions
_RECT_ODD_2F3 = ((1.0, 1.0), (1.5, 1.5, 1.5))
_ISO_3F4 = ((0.25, 0.5, 0.75), (1.0 / 3.0, 2.0 / 3.0, 1.0, 1.0))
_ISO_4F5 = ((0.75, 1.0, 1.0, 1.25), (5.0 / 6.0, 7.0 / 6.0, 1.5, 1.5, 1.5))
_EQUI_2F3 = ((1.0 / 3.0, 2.0 / 3.0), (0.5, 1.0, 1.0))


class Family(str, Enum):
    ARCSINE_1D = "arcsine1d"
    ELLIPTIC_K = "elliptic_k"
    MEIJER_G = "meijer_g"
    EQUILATERAL_HYP = "equilateral_hyp"
    CIRCLE_ASYMPTOTIC = "circle_asymptotic"
    NUMERIC_ONLY = "numeric_only"


@dataclass(frozen=True)
class DistributionForm:
    """Descriptor of the closed-form density of one eigenstate."""

    spec: BilliardSpec
    family: Family
    support: tuple[float, float] | None
    asymmetry_coefficient: float


def _iso_family(spec: BilliardSpec) -> str | None:
    """'ground' for (1,2), 'symmetric' for (1,3) and (d,3d) with d even."""
    m, n = spec.m, spec.n
    if (m, n) == (1, 2):
        return "ground"
    if (m, n) == (1, 3):
        return "symmetric"
    if n == 3 * m and m % 2 == 0:
        return "symmetric"
    return None


def _circle_log_edge(m: int, n: int) -> float:
    """log of the formal support edge: (e k_n)^(2m) = pi (2m)^(2m+1) psi^2."""
    k = bessel_j_zero(m, n)
    return m * (1.0 + math.log(k / (2.0 * m))) - 0.5 * math.log(2.0 * math.pi * m)


def distribution_form(spec: BilliardSpec) -> DistributionForm:
    """Family, support interval, and sign-asymmetry weight of a state."""
    m, n = spec.m, spec.n
    if spec.shape is Shape.BOX1D:
        lo = 0.0 if m == 1 else -1.0
        return DistributionForm(spec, Family.ARCSINE_1D, (lo, 1.0),
                                1.0 / m if m % 2 else 0.0)
    if spec.shape is Shape.RECTANGLE:
        both_odd = (m % 2 == 1 and n % 2 == 1)
        lo = 0.0 if (m, n) == (1, 1) else -1.0
        return DistributionForm(spec, Family.ELLIPTIC_K, (lo, 1.0),
                                1.0 / (m * n) if both_odd else 0.0)
    if spec.shape is Shape.ISOSCELES_RIGHT:
        kind = _iso_family(spec)
        edge = math.sqrt(64.0 / 27.0)
        if kind == "ground":
            return DistributionForm(spec, Family.MEIJER_G, (-edge, edge), 1.0)
        if kind == "symmetric":
            return DistributionForm(spec, Family.MEIJER_G, (-edge, edge), 0.0)
        return DistributionForm(spec, Family.NUMERIC_ONLY, None, 0.0)
    if spec.shape is Shape.EQUILATERAL:
        if {m, n} == {1, 2} and spec.mode is Mode.COS:
            edge = math.sqrt(27.0 / 4.0)
            return DistributionForm(spec, Family.EQUILATERAL_HYP,
                                    (-edge, edge), 1.0)
        return DistributionForm(spec, Family.NUMERIC_ONLY, None, 0.0)
    if spec.shape is Shape.CIRCLE:
        if m > 2:
            edge = math.exp(_circle_log_edge(m, n))
            return DistributionForm(spec, Family.CIRCLE_ASYMPTOTIC,
                                    (-edge, edge), 0.0)
        return DistributionForm(spec, Family.NUMERIC_ONLY, None, 0.0)
    return DistributionForm(spec, Family.NUMERIC_ONLY, None, 0.0)


def has_closed_form(spec: BilliardSpec) -> bool:
    return distribution_form(spec).family is not Family.NUMERIC_ONLY


def support_edge(spec: BilliardSpec) -> float:
    form = distribution_form(spec)
    if form.support is None:
        raise NoClosedFormError(f"no closed-form support for {spec}")
    return form.support[1]


# ---------------------------------------------------------------------------
# closed-form characteristic functions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _circle_cf_coeff(m: int, n: int) -> float:
    """c in cf = pi^3 1F2(1/m; 1, 1+1/m; -c xi^2), via logs."""
    k = bessel_j_zero(m, n)
    ln_c = (-(2 * m + 3) * math.log(2.0) + 2.0 * m
            + 2.0 * m * math.log(k / m) - math.log(m * math.pi))
    if ln_c > 700.0:
        raise ValidationError(
            f"circle asymptotic coefficient overflows for (m, n) = ({m}, {n})")
    return math.exp(ln_c)


def cf_closed(spec: BilliardSpec, xi, policy: SeriesPolicy = DEFAULT_POLICY):
    """Closed-form characteristic function, vectorised over xi.

    For the equilateral ground state only the symmetric (real) part has a
    closed form; the returned imaginary part is zero there and the density
    layer restores the sign asymmetry through its (1 + sgn psi) factor.
    """
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    m, n = spec.m, spec.n
    if spec.shape is Shape.BOX1D:
        re = math.pi * j0(np.abs(xi_arr))
        if m % 2 == 1:
            out = re + 1j * (math.pi / m) * struve_h0(xi_arr)
        else:
            out = re + 0j * xi_arr
    elif spec.shape is Shape.RECTANGLE:
        re = math.pi ** 2 * j0(xi_arr / 2.0) ** 2
        if m % 2 == 1 and n % 2 == 1:
            a, b = _RECT_ODD_2F3
            im = (4.0 / (m * n)) * xi_arr * hyp_pfq(a, b, -xi_arr ** 2 / 4.0,
                                                    policy)
            out = re + 1j * im
        else:
            out = re + 0j * xi_arr
    elif spec.shape is Shape.ISOSCELES_RIGHT:
        kind = _iso_family(spec)
        if kind is None:
            raise NoClosedFormError(
                f"no closed-form CF for isosceles ({m},{n}); use cf_numeric")
        a, b = _ISO_3F4
        z = -16.0 * xi_arr ** 2 / 27.0
        re = (math.pi ** 2 / 2.0) * hyp_pfq(a, b, z, policy)
        if kind == "ground":
            a4, b4 = _ISO_4F5
            im = (8.0 / 3.0) * xi_arr * hyp_pfq(a4, b4, z, policy)
            out = re + 1j * im
        else:
            out = re + 0j * xi_arr
    elif spec.shape is Shape.EQUILATERAL:
        if distribution_form(spec).family is not Family.EQUILATERAL_HYP:
            raise NoClosedFormError(
                f"no closed-form CF for equilateral ({m},{n}) {spec.mode.value}")
        a, b = _EQUI_2F3
        re = (_SQRT3 / 4.0) * math.pi ** 2 * hyp_pfq(
            a, b, -27.0 * xi_arr ** 2 / 16.0, policy)
        out = re + 0j * xi_arr
    elif spec.shape is Shape.CIRCLE:
        if m <= 2:
            raise NoClosedFormError(
                "circle asymptotic CF requires m > 2; use cf_numeric")
        c = _circle_cf_coeff(m, n)
        re = math.pi ** 3 * hyp_pfq((1.0 / m,), (1.0, 1.0 + 1.0 / m),
                                    -c * xi_arr ** 2, policy)
        out = re + 0j * xi_arr
    else:
        raise NoClosedFormError(f"no closed-form CF for {spec.shape.value}")
    out = np.asarray(out, dtype=np.complex128)
    return out if np.ndim(xi) else complex(out[0])


# ---------------------------------------------------------------------------
# numeric characteristic function (independent quadrature pathway)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _cached_grid(spec: BilliardSpec, level: int):
    """(amplitude values, weights) on the tensor grid of the domain."""
    if spec.shape is Shape.BOX1D:
        x, w = gauss_legendre(24)
        panels = 2 ** level * 8
        edges = np.linspace(0.0, math.pi, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        wts = (half[:, None] * w[None, :]).ravel()
        return amplitude(spec, pts), wts
    if spec.shape is Shape.CIRCLE:
        # angular integral done analytically: 2 pi J_0(|xi J_m|) for m != 0,
        # 2 pi exp(i xi J_0(..)) handled by the same radial reduction
        x, w = gauss_legendre(24)
        panels = 2 ** level * 8
        edges = np.linspace(0.0, math.pi, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        r = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        wts = (half[:, None] * w[None, :]).ravel() * 2.0 * math.pi * r
        radial = amplitude(spec, r, np.zeros_like(r))  # theta = 0 profile
        return radial, wts
    X, Y, W = tensor_grid(domain_of(spec), level)
    vals = amplitude(spec, X, Y)
    return vals.ravel(), np.asarray(W, dtype=np.float64).ravel()


def cf_numeric(spec: BilliardSpec, xi, tol: float = 1e-9,
               max_level: int = 7):
    """Characteristic function by direct quadrature of the domain integral,
    vectorised over xi; converges grid levels until the values settle."""
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    base_level = 2 if spec.shape in (Shape.BOX1D, Shape.CIRCLE) else 3
    prev = None
    out = None
    for level in range(base_level, max_level + 1):
        vals, wts = _cached_grid(spec, level)
        if spec.shape is Shape.CIRCLE and spec.m != 0:
            # angular reduction: int_0^{2pi} e^{i xi J cos(m th)} dth
            # = 2 pi J_0(xi J); wts already carry the 2 pi r factor
            phases = j0(np.abs(xi_arr[:, None] * vals[None, :]))
            out = (phases @ wts / (2.0 * math.pi)) * (2.0 * math.pi) + 0j
        else:
            out = np.exp(1j * xi_arr[:, None] * vals[None, :]) @ wts
        if prev is not None:
            err = float(np.max(np.abs(out - prev)))
            if err <= tol:
                return out if np.ndim(xi) else complex(out[0])
        prev = out
    raise NonConvergenceError(
        f"cf_numeric did not settle to {tol} for {spec} within grid budget")


# ---------------------------------------------------------------------------
# closed-form densities
# ---------------------------------------------------------------------------

def _sign_factor(asym: float, psi) -> np.ndarray:
    return 1.0 + asym * np.sign(psi)


def _pdf_box1d(spec, psi):
    m = spec.m
    with np.errstate(divide="ignore", invalid="ignore"):
        base = 1.0 / (math.pi * np.sqrt(1.0 - psi * psi))
    if m % 2 == 1:
        base = base * (m + np.sign(psi)) / m
    return np.where(np.abs(psi) < 1.0, base, 0.0)


def _pdf_rectangle(spec, psi):
    inside = np.abs(psi) <= 1.0
    vals = np.zeros_like(psi)
    if np.any(inside):
        # K(1 - psi^2) via the complementary argument: near psi = 0 the
        # parameter 1 - psi^2 would round onto the m = 1 singularity
        k = elliptic_kc(np.maximum(psi[inside] ** 2, 1e-308))
        vals[inside] = (2.0 / math.pi ** 2) * k * _sign_factor(
            distribution_form(spec).asymmetry_coefficient, psi[inside])
    return vals


def _pdf_isosceles(spec, psi, policy):
    form = distribution_form(spec)
    if form.family is not Family.MEIJER_G:
        raise NoClosedFormError(
            f"no closed-form density for isosceles ({spec.m},{spec.n})")
    edge = form.support[1]
    vals = np.zeros_like(psi)
    inside = np.abs(psi) < edge
    pref = 3.0 / (4.0 * math.sqrt(2.0) * math.pi)
    for i in np.flatnonzero(inside):
        # clamp against underflow to z = 0 (quadrature probes psi ~ 1e-200)
        # and against rounding onto z = 1 at the support edge
        z = min(max(27.0 * psi[i] ** 2 / 64.0, 1e-200), 1.0 - 1e-16)
        vals[i] = pref * meijer_g_4044(z, policy)
    vals[inside] *= _sign_factor(form.asymmetry_coefficient, psi[inside])
    return vals


_EQUI_POLICY = SeriesPolicy(max_terms=2_000_000)


def _pdf_equilateral(psi, policy):
    edge = math.sqrt(27.0 / 4.0)
    vals = np.zeros_like(psi)
    inside = np.abs(psi) < edge
    if not np.any(inside):
        return vals
    p = psi[inside]
    ap = np.abs(p)
    z = 4.0 * p * p / 27.0
    pol = policy if policy.max_terms >= _EQUI_POLICY.max_terms else _EQUI_POLICY
    f1 = hyp2f1(2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, z, pol)
    f2 = hyp2f1(-1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, z, pol)
    f3 = hyp2f1(1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, z, pol)
    g23_m16 = gamma(2.0 / 3.0) * gamma(-1.0 / 6.0)
    g13_76 = gamma(1.0 / 3.0) * gamma(7.0 / 6.0)
    # compensated combination: the two 2F1 terms cancel to O(psi^2)
    ld = np.longdouble
    bracket = (ld(g23_m16)
               * ((ld(27.0) - ld(4.0) * ld(p) * ld(p)) * f1.astype(ld)
                  - ld(27.0) * f2.astype(ld))
               + ld(72.0) * ld(g13_76) * ap.astype(ld) ** ld(4.0 / 3.0)
               * f3.astype(ld))
    dens = (1.0 + np.sign(p)) / (48.0 * math.pi ** 2.5 * ap ** (5.0 / 3.0))
    vals[inside] = (dens * bracket.astype(np.float64))
    return vals


def _pdf_circle(spec, psi):
    m, n = spec.m, spec.n
    if m <= 2:
        raise NoClosedFormError("circle asymptotic density requires m > 2")
    k = bessel_j_zero(m, n)
    edge = math.exp(_circle_log_edge(m, n))
    vals = np.zeros_like(psi)
    inside = np.abs(psi) < edge
    if not np.any(inside):
        return vals
    ap = np.abs(psi[inside])
    z = (ap / edge) ** 2
    lead = (2.0 ** (1.0 / m + 2.0) * m ** (1.0 / m + 1.0)
            * math.pi ** (1.0 / m) / math.e ** 2) / k ** 2
    first = (math.sqrt(math.pi) / math.cos(math.pi / m)
             / (gamma(0.5 + 1.0 / m) * gamma((m - 1.0) / m)))
    second = np.asarray(inc_beta(z, 0.5 - 1.0 / m, 0.5)) / math.pi
    vals[inside] = lead * ap ** (2.0 / m - 1.0) * (first - second)
    return vals


def pdf_closed(spec: BilliardSpec, psi, policy: SeriesPolicy = DEFAULT_POLICY):
    """Closed-form amplitude density, vectorised; zero outside the support.

    Raises :class:`SingularPointError` exactly at amplitudes where the
    density diverges (psi = 0 for the 2-D shapes and the circle,
    |psi| = 1 for the 1-D box).
    """
    psi_arr = np.atleast_1d(np.asarray(psi, dtype=np.float64))
    if spec.shape is Shape.BOX1D:
        if np.any(np.abs(psi_arr) == 1.0):
            raise SingularPointError(1.0, "1-D box density diverges at |psi| = 1")
        out = _pdf_box1d(spec, psi_arr)
    elif spec.shape is Shape.RECTANGLE:
        if np.any(psi_arr == 0.0):
            raise SingularPointError(0.0)
        out = _pdf_rectangle(spec, psi_arr)
    elif spec.shape is Shape.ISOSCELES_RIGHT:
        if np.any(psi_arr == 0.0):
            raise SingularPointError(0.0)
        out = _pdf_isosceles(spec, psi_arr, policy)
    elif spec.shape is Shape.EQUILATERAL:
        if distribution_form(spec).family is not Family.EQUILATERAL_HYP:
            raise NoClosedFormError(
                f"no closed-form density for equilateral ({spec.m},{spec.n}) "
                f"{spec.mode.value}")
        if np.any(psi_arr == 0.0):
            raise SingularPointError(0.0)
        out = _pdf_equilateral(psi_arr, policy)
    elif spec.shape is Shape.CIRCLE:
        if np.any(psi_arr == 0.0):
            raise SingularPointError(0.0)
        out = _pdf_circle(spec, psi_arr)
    else:
        raise NoClosedFormError(
            f"no closed-form density for {spec.shape.value}")
    return out if np.ndim(psi) else float(out[0])


# ---------------------------------------------------------------------------
# Fourier-inversion oracle
# ---------------------------------------------------------------------------

class _ChebPanels:
    """Piecewise-Chebyshev proxy of an expensive vectorised function on
    [0, inf), grown lazily in blocks of panels."""

    def __init__(self, fn, panel_len: float, nodes: int = 16):
        self.fn = fn
        self.h = float(panel_len)
        self.nodes = nodes
        k = np.arange(nodes)
        self._x = -np.cos((k + 0.5) * math.pi / nodes)  # Chebyshev points
        # cosine design matrix for coefficient recovery
        theta = np.arccos(self._x)
        self._design = np.cos(np.outer(np.arange(nodes), theta)) / nodes * 2.0
        self._design[0] *= 0.5
        self._coeff_re: list[np.ndarray] = []
        self._coeff_im: list[np.ndarray] = []

    def _grow(self, upto_panel: int):
        start = len(self._coeff_re)
        if upto_panel < start:
            return
        idx = np.arange(start, upto_panel + 1)
        centers = (idx[:, None] + 0.5) * self.h
        pts = centers + 0.5 * self.h * self._x[None, :]
        vals = np.asarray(self.fn(pts.ravel())).reshape(pts.shape)
        cr = vals.real @ self._design.T
        ci = vals.imag @ self._design.T
        self._coeff_re.extend(cr)
        self._coeff_im.extend(ci)

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
        panel = np.minimum((xi / self.h).astype(np.int64), 10 ** 9)
        self._grow(int(panel.max()))
        cre = np.asarray(self._coeff_re)
        cim = np.asarray(self._coeff_im)
        t = (xi - (panel + 0.5) * self.h) / (0.5 * self.h)
        out = np.zeros(xi.shape, dtype=np.complex128)
        # Clenshaw per point against its panel's coefficients
        b1 = np.zeros_like(xi, dtype=np.complex128)
        b2 = np.zeros_like(b1)
        coeffs = cre[panel] + 1j * cim[panel]
        for j in range(self.nodes - 1, 0, -1):
            b1, b2 = coeffs[:, j] + 2.0 * t * b1 - b2, b1
        out = coeffs[:, 0] + t * b1 - b2
        return out


@lru_cache(maxsize=32)
def _inversion_cf(spec: BilliardSpec):
    """(cf callable, internal frequency, xi cap) for Fourier inversion: the
    closed form when available (behind a Chebyshev proxy that amortises the
    high-precision series work), cf_numeric otherwise.

    The xi cap bounds how far the inversion may chase slow beat modes:
    hypergeometric-backed characteristic functions get markedly more
    expensive with xi (the cancellation grows like exp(c xi)), so densities
    within a few percent of the support edge carry a larger oracle error.
    """
    family = distribution_form(spec).family
    if family in (Family.ARCSINE_1D, Family.ELLIPTIC_K):
        proxy = _ChebPanels(lambda x: np.asarray(cf_closed(spec, x)),
                            panel_len=math.pi / 2.0)
        return proxy, 1.0, 6000.0
    if family in (Family.MEIJER_G, Family.EQUILATERAL_HYP):
        edge = support_edge(spec)
        proxy = _ChebPanels(lambda x: np.asarray(cf_closed(spec, x)),
                            panel_len=math.pi / (2.0 * edge))
        return proxy, edge, 560.0
    return (lambda x: np.asarray(cf_numeric(spec, x, tol=1e-8))), None, 200.0


def pdf_via_ft(spec: BilliardSpec, psi: float, tol: float = 1e-4,
               max_cells: int = 480) -> float:
    """Density via numerical Fourier inversion of the characteristic
    function; the independent oracle for ``pdf_closed``.

    For all-positive states whose closed CF carries only the symmetric part
    (the equilateral ground manifold) the inversion recovers the
    symmetrised density and the same (1 + sgn psi) factor as the closed
    form is applied.
    """
    cf, edge, xi_cap = _inversion_cf(spec)
    area = domain_of(spec).area
    cell = math.pi / max(abs(psi), edge if edge else 0.25, 0.25)
    max_cells = min(max_cells, max(int(xi_cap / cell), 48))
    res = fourier_invert(cf, float(psi), area, tol=tol,
                         internal_freq=edge, max_cells=max_cells)
    if not res.converged and res.error_estimate > 20.0 * tol:
        raise NonConvergenceError(
            f"Fourier inversion failed for {spec} at psi={psi}",
            error_estimate=res.error_estimate, evaluations=res.evaluations)
    value = res.value
    if (spec.shape is Shape.EQUILATERAL
            and distribution_form(spec).family is Family.EQUILATERAL_HYP):
        value = value * (1.0 + math.copysign(1.0, psi)) if psi != 0 else value
    return value


# ---------------------------------------------------------------------------
# small-amplitude asymptotics
# ---------------------------------------------------------------------------

def pdf_asymptotic(spec: BilliardSpec, psi) -> np.ndarray | float:
    """Leading small-amplitude law of the closed-form densities, including
    the state's sign-asymmetry factor (so pdf_closed/pdf_asymptotic -> 1 as
    psi -> 0 from either side where the density is nonzero)."""
    psi_arr = np.atleast_1d(np.asarray(psi, dtype=np.float64))
    ap = np.abs(psi_arr)
    form = distribution_form(spec)
    if spec.shape is Shape.RECTANGLE:
        base = np.log(16.0 / psi_arr ** 2) / math.pi ** 2
    elif spec.shape is Shape.ISOSCELES_RIGHT and form.family is Family.MEIJER_G:
        a = (3.0 ** 0.25 * math.pi ** 1.5
             / (gamma(1.0 / 12.0) * gamma(5.0 / 12.0) * gamma(0.75) ** 4))
        base = a / np.sqrt(ap) - (np.log(ap / 16.0) + 1.0) / (2.0 * math.pi ** 2)
    elif (spec.shape is Shape.EQUILATERAL
          and form.family is Family.EQUILATERAL_HYP):
        base = (-gamma(-2.0 / 3.0) * gamma(7.0 / 6.0)
                / (math.pi ** 2.5 * ap ** (1.0 / 3.0)))
    elif spec.shape is Shape.CIRCLE and form.family is Family.CIRCLE_ASYMPTOTIC:
        m, n = spec.m, spec.n
        k = bessel_j_zero(m, n)
        lead = (2.0 ** (1.0 / m + 2.0) * m ** (1.0 / m + 1.0)
                * math.pi ** (1.0 / m) / math.e ** 2) / k ** 2
        first = (math.sqrt(math.pi) / math.cos(math.pi / m)
                 / (gamma(0.5 + 1.0 / m) * gamma((m - 1.0) / m)))
        base = lead * first * ap ** (2.0 / m - 1.0)
    else:
        raise UnsupportedShapeError(
            f"no small-amplitude expansion for {spec.shape.value} "
            f"({spec.m},{spec.n})")
    out = base * _sign_factor(form.asymmetry_coefficient, psi_arr)
    return out if np.ndim(psi) else float(out[0])


def gaussian_rwm_pdf(area: float, psi) -> np.ndarray | float:
    """Gaussian random-wave baseline: N(0, 1/area) density of amplitudes."""
    if area <= 0:
        raise ValidationError("area must be positive")
    sigma2 = 1.0 / area
    psi_arr = np.asarray(psi, dtype=np.float64)
    out = np.exp(-psi_arr ** 2 / (2.0 * sigma2)) / math.sqrt(2.0 * math.pi * sigma2)
    return out if np.ndim(psi) else float(out)


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def _second_moment_series(spec: BilliardSpec) -> float:
    """<Psi^2> from the xi^2 coefficient of the closed-form CF."""
    m, n = spec.m, spec.n
    if spec.shape is Shape.BOX1D:
        # pi J0(xi): J0 = 1 - xi^2/4 + ...
        return 0.5
    if spec.shape is Shape.RECTANGLE:
        # pi^2 J0(xi/2)^2 = pi^2 (1 - xi^2/8 + ...)
        return 0.25
    if spec.shape is Shape.ISOSCELES_RIGHT and _iso_family(spec) is not None:
        a, b = _ISO_3F4
        c1 = math.prod(a) / math.prod(b)        # 27/64
        return 2.0 * c1 * (16.0 / 27.0)
    if (spec.shape is Shape.EQUILATERAL
            and distribution_form(spec).family is Family.EQUILATERAL_HYP):
        a, b = _EQUI_2F3
        c1 = math.prod(a) / math.prod(b)        # 4/9
        return 2.0 * c1 * (27.0 / 16.0)
    raise NoClosedFormError(f"no CF series coefficient for {spec}")


def _first_moment_series(spec: BilliardSpec) -> float:
    m, n = spec.m, spec.n
    if spec.shape is Shape.BOX1D:
        return 2.0 / (m * math.pi) if m % 2 else 0.0
    if spec.shape is Shape.RECTANGLE:
        both_odd = (m % 2 == 1 and n % 2 == 1)
        return 4.0 / (m * n * math.pi ** 2) if both_odd else 0.0
    if spec.shape is Shape.ISOSCELES_RIGHT and _iso_family(spec) is not None:
        if _iso_family(spec) == "ground":
            # Im cf = (8/3) xi 4F5(...): slope 8/3, area pi^2/2
            return (8.0 / 3.0) / (math.pi ** 2 / 2.0)
        return 0.0
    raise NoClosedFormError(f"no CF series coefficient for {spec}")


def moment(spec: BilliardSpec, k: int, method: str = "auto") -> float:
    """k-th amplitude moment (k in {1, 2}) under the uniform measure.

    ``series`` reads the CF series coefficients of the closed forms;
    ``quadrature`` integrates Psi^k over the domain; ``auto`` prefers the
    series and falls back to quadrature.
    """
    if k not in (1, 2):
        raise ValidationError("moments are implemented for k in {1, 2}")
    if method not in ("auto", "series", "quadrature"):
        raise ValidationError(f"unknown method {method!r}")
    if method in ("auto", "series"):
        try:
            return (_first_moment_series(spec) if k == 1
                    else _second_moment_series(spec))
        except NoClosedFormError:
            if method == "series":
                raise
    vals, wts = _cached_grid(spec, 6)
    area = domain_of(spec).area
    if spec.shape is Shape.CIRCLE and spec.m != 0 and k == 1:
        return 0.0  # cos(m theta) averages out exactly
    if spec.shape is Shape.CIRCLE:
        # grid holds the theta = 0 radial profile; average cos^k over angle
        ang = 0.5 if (k == 2 and spec.m != 0) else 1.0
        return float(np.dot(vals ** k, wts)) * ang / area
    return float(np.dot(vals ** k, wts)) / area


# ---------------------------------------------------------------------------
# closed-form cumulative distributions (for KS tests)
# ---------------------------------------------------------------------------

def closed_cdf(spec: BilliardSpec, grid_points: int = 4000,
               policy: SeriesPolicy = DEFAULT_POLICY):
    """(cdf callable, total mass) built by cumulative quadrature of
    pdf_closed on a grid graded toward the singular amplitude."""
    form = distribution_form(spec)
    if form.support is None:
        raise NoClosedFormError(f"no closed-form density for {spec}")
    lo, hi = form.support
    x, w = gauss_legendre(8)

    def segment_nodes(a, b, cluster_at_a):
        t = np.linspace(0.0, 1.0, grid_points // 2 + 1) ** 2.5
        pts = a + (b - a) * t if cluster_at_a else b - (b - a) * t[::-1]
        return pts

    # segments split at the singular point / support ends
    if lo < 0.0:
        edges = np.concatenate([
            segment_nodes(0.0, lo, True)[::-1], segment_nodes(0.0, hi, True)[1:]])
    else:
        edges = segment_nodes(0.0, hi, True)
    # box1d also diverges at the +-1 edges: grade toward them too
    if spec.shape is Shape.BOX1D:
        u = np.sin(np.linspace(0.0, 1.0, grid_points) * math.pi / 2.0) ** 2
        pos = np.concatenate([[0.0], u[1:-1] * hi, [hi]])
        edges = np.concatenate([-pos[::-1], pos[1:]]) if lo < 0 else pos

    def dens_fn(p):
        p = np.asarray(p, dtype=np.float64)
        # dodge exact singular points that quadrature nodes may round onto
        p = np.where(p == 0.0, 1e-150, p)
        if spec.shape is Shape.BOX1D:
            cap = np.nextafter(1.0, 0.0)
            p = np.clip(p, -cap, cap)
        return np.asarray(pdf_closed(spec, p, policy))

    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    dens = dens_fn(pts.ravel()).reshape(pts.shape)
    masses = np.sum(dens * w[None, :], axis=1) * half

    def graded_mass(a, b, singular_at_a):
        """Composite GL-16 on dyadic subintervals shrinking toward the
        singular endpoint; exact for the integrable power/log divergences."""
        if not singular_at_a:
            a, b = b, a  # integrate from the singular end; sign handled below
        xg, wg = gauss_legendre(16)
        total_mass = 0.0
        length = b - a
        for j in range(54):
            hi_f, lo_f = 2.0 ** (-j), 2.0 ** (-j - 1)
            seg_a = a + length * lo_f
            seg_b = a + length * hi_f
            midp = 0.5 * (seg_a + seg_b)
            halfp = 0.5 * (seg_b - seg_a)
            pts_loc = midp + halfp * xg
            total_mass += float(np.dot(dens_fn(pts_loc), wg)) * halfp
        return abs(total_mass)

    # intervals touching a singular amplitude get the singularity-aware rule
    singular_edges = [0.0]
    if spec.shape is Shape.BOX1D:
        singular_edges += [lo, hi]
    for s_edge in singular_edges:
        for j in np.flatnonzero(edges == s_edge):
            if j < masses.size:
                masses[j] = graded_mass(edges[j], edges[j + 1], True)
            if j >= 1:
                masses[j - 1] = graded_mass(edges[j - 1], edges[j], False)
    cum = np.concatenate([[0.0], np.cumsum(masses)])
    total = float(cum[-1])

    def cdf(psi):
        psi_arr = np.asarray(psi, dtype=np.float64)
        return np.interp(psi_arr, edges, cum, left=0.0, right=total)

    return cdf, total
