"""Adaptive 1-D/2-D integration and Fourier inversion of characteristic
functions.

integrate_1d
    tanh-sinh (double-exponential) levels for smooth or endpoint-singular
    integrands, with an adaptive Gauss-Legendre bisection fallback when the
    level sequence stalls (oscillatory integrands).
integrate_2d
    tensor-product composite Gauss-Legendre on a rectangle image of the
    domain; billiard domains supply their own affine/fold maps.
fourier_invert
    one-sided cosine/sine reformulation of the density integral
    P(psi) = (1/2 pi A) int exp(-i xi psi) cf(xi) dxi, integrated cell by
    cell between weight zeros and extrapolated with the epsilon algorithm.

All integrand callables must be numpy-vectorised.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._accel import cell_integrate, gauss_legendre, oscillatory_tail
from .errors import NonConvergenceError, ValidationError


@dataclass(frozen=True)
class QuadratureResult:
    """Value with accounting: when ``converged`` the error estimate is at or
    below the requested tolerance."""

    value: float
    error_estimate: float
    converged: bool
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0:
            raise ValidationError("error_estimate must be nonnegative")
        if self.evaluations <= 0:
            raise ValidationError("evaluations must be positive")


# ---------------------------------------------------------------------------
# tanh-sinh nodes
# ---------------------------------------------------------------------------

_TS_TMAX = 6.11  # beyond this the double-exponential weights underflow


def _tanh_sinh_points(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on (-1, 1) that are *new* at this level (trapezoid
    refinement: level 0 has step 1, level L adds odd multiples of 2^-L)."""
    h = 2.0 ** (-level)
    if level == 0:
        k = np.arange(-int(_TS_TMAX / h), int(_TS_TMAX / h) + 1)
        t = k * h
    else:
        n = int(_TS_TMAX / h)
        k = np.arange(-n, n + 1)
        t = k * h
        t = t[np.abs(k) % 2 == 1]
    u = 0.5 * math.pi * np.sinh(t)
    x = np.tanh(u)
    w = h * 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    keep = w > 1e-320
    return x[keep], w[keep]


def _integrate_tanh_sinh(f, a, b, tol, max_level=11):
    """tanh-sinh levels applied to the sine-substituted integrand.

    The substitution x = mid + half*sin(s) regularises inverse-square-root
    endpoint singularities exactly (and weakens stronger integrable ones), so
    nodes whose argument rounds onto a singular endpoint carry only their
    double-exponentially small weight and can be masked out safely.
    """
    mid = np.longdouble(0.5) * (np.longdouble(a) + np.longdouble(b))
    half = np.longdouble(0.5) * (np.longdouble(b) - np.longdouble(a))
    s_half = np.longdouble(0.5 * math.pi)
    total = 0.0
    evals = 0
    prev = None
    err = float("inf")
    for level in range(max_level + 1):
        x, w = _tanh_sinh_points(level)
        s = s_half * x.astype(np.longdouble)
        pts = mid + half * np.sin(s)
        jac = half * s_half * np.cos(s)
        with np.errstate(all="ignore"):
            vals = np.asarray(f(pts), dtype=np.float64)
        evals += x.size
        g = vals * jac.astype(np.float64)
        # Within ~1e-13 of an endpoint the caller's arithmetic only sees
        # rounding noise (or overflows outright).  The substituted integrand
        # g is continuous there, so borrow the nearest reliable value.
        dist = np.minimum(pts - np.longdouble(a), np.longdouble(b) - pts)
        noisy = (dist < 1e-13 * max(abs(a), abs(b), 1.0)) | ~np.isfinite(g)
        if np.any(noisy):
            ok = np.flatnonzero(~noisy)
            if ok.size == 0:
                g = np.zeros_like(g)
            else:
                lo, hi = ok[0], ok[-1]
                g = g.copy()
                g[:lo] = g[lo]
                g[hi + 1:] = g[hi]
                inner = np.flatnonzero(noisy[lo:hi + 1]) + lo
                g[inner] = 0.0  # interior nonfinite values: drop
        new_part = float(np.dot(g, w))
        total = new_part if level == 0 else 0.5 * total + new_part
        if prev is not None:
            err = abs(total - prev)
            # the level diff overestimates the error of the *previous* level;
            # demand a margin so it also bounds the current one
            if err <= 0.25 * tol and level >= 2:
                return QuadratureResult(total, max(err, 1e-17 * abs(total)),
                                        True, evals)
        prev = total
    return QuadratureResult(total, err, False, evals)


# ---------------------------------------------------------------------------
# adaptive Gauss-Legendre bisection (oscillatory fallback)
# ---------------------------------------------------------------------------

def _panel_estimate(f, a, b):
    x15, w15 = gauss_legendre(15)
    x31, w31 = gauss_legendre(31)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    v15 = float(np.dot(np.asarray(f(mid + half * x15), dtype=np.float64), w15)) * half
    v31 = float(np.dot(np.asarray(f(mid + half * x31), dtype=np.float64), w31)) * half
    return v31, abs(v31 - v15), 46


def _integrate_adaptive_gl(f, a, b, tol, max_panels=4000):
    value, err, evals = _panel_estimate(f, a, b)
    heap = [(-err, a, b, value)]
    total = value
    total_err = err
    n_panels = 1
    while total_err > tol and n_panels < max_panels:
        neg_err, pa, pb, pval = heapq.heappop(heap)
        pm = 0.5 * (pa + pb)
        v1, e1, n1 = _panel_estimate(f, pa, pm)
        v2, e2, n2 = _panel_estimate(f, pm, pb)
        evals += n1 + n2
        total += (v1 + v2) - pval
        total_err += (e1 + e2) - (-neg_err)
        heapq.heappush(heap, (-e1, pa, pm, v1))
        heapq.heappush(heap, (-e2, pm, pb, v2))
        n_panels += 1
    return QuadratureResult(total, max(total_err, 0.0), total_err <= tol, evals)


def integrate_1d(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                 tol: float = 1e-10) -> QuadratureResult:
    """Integrate a vectorised integrand over [a, b] to absolute tolerance.

    tanh-sinh levels handle integrable endpoint singularities; when the
    level-to-level differences stall (typical of oscillatory integrands) the
    adaptive Gauss-Legendre fallback takes over.
    """
    if not (a < b):
        raise ValidationError(f"integrate_1d requires a < b, got [{a}, {b}]")
    res = _integrate_tanh_sinh(f, a, b, tol)
    if res.converged:
        return res
    fallback = _integrate_adaptive_gl(f, a, b, tol)
    if fallback.converged or fallback.error_estimate < res.error_estimate:
        return QuadratureResult(fallback.value, fallback.error_estimate,
                                fallback.converged,
                                fallback.evaluations + res.evaluations)
    return res


# ---------------------------------------------------------------------------
# 2-D tensor quadrature over mapped domains
# ---------------------------------------------------------------------------

def tensor_grid(domain, level: int, nodes: int = 16):
    """(X, Y, W) arrays of a composite GL rule mapped onto the domain.

    ``domain`` must provide ``quadrature_map() -> (map_fn, (u0,u1), (v0,v1))``
    with ``map_fn(U, V) -> (X, Y, jacobian)``.
    """
    map_fn, (u0, u1), (v0, v1) = domain.quadrature_map()
    x, w = gauss_legendre(nodes)
    panels = 2 ** level

    def _axis(lo, hi):
        edges = np.linspace(lo, hi, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        wts = (half[:, None] * w[None, :]).ravel()
        return pts, wts

    u, wu = _axis(u0, u1)
    v, wv = _axis(v0, v1)
    U = u[:, None]
    V = v[None, :]
    X, Y, J = map_fn(U, V)
    W = wu[:, None] * wv[None, :] * J
    shape = np.broadcast_shapes(X.shape, Y.shape, W.shape)
    return (np.broadcast_to(X, shape), np.broadcast_to(Y, shape),
            np.broadcast_to(W, shape))


def integrate_2d(f: Callable[[np.ndarray, np.ndarray], np.ndarray], domain,
                 tol: float = 1e-9, max_level: int = 7) -> QuadratureResult:
    """Integrate f(x, y) over a billiard domain to absolute tolerance.

    Composite tensor Gauss-Legendre over uniformly refined panels of the
    mapped unit rectangle; refinement doubles per level until two successive
    levels agree.
    """
    prev = None
    evals = 0
    err = float("inf")
    total = 0.0
    for level in range(max_level + 1):
        X, Y, W = tensor_grid(domain, level)
        vals = np.asarray(f(X, Y), dtype=np.float64)
        evals += vals.size
        total = float(np.sum(vals * W))
        if prev is not None:
            err = abs(total - prev)
            if err <= tol and level >= 2:
                return QuadratureResult(total, err, True, evals)
        prev = total
    return QuadratureResult(total, err, False, evals)


# ---------------------------------------------------------------------------
# Fourier inversion of characteristic functions
# ---------------------------------------------------------------------------

def _estimate_internal_freq(cf, probe_to: float = 12.0) -> float:
    xi = np.linspace(1e-6, probe_to, 481)
    g = np.real(np.asarray(cf(xi)))
    signs = np.sign(g)
    changes = np.flatnonzero(signs[1:] * signs[:-1] < 0)
    if changes.size < 2:
        return 0.0
    first, last = xi[changes[0]], xi[changes[-1]]
    if last <= first:
        return 0.0
    return math.pi * (changes.size - 1) / (last - first)


def fourier_invert(cf: Callable[[np.ndarray], np.ndarray], psi: float,
                   A: float, *, tol: float = 1e-5,
                   internal_freq: float | None = None,
                   max_cells: int = 360, nodes: int = 24) -> QuadratureResult:
    """Recover the amplitude density at ``psi`` from a characteristic
    function by oscillatory quadrature.

    ``cf`` must be Hermitian-symmetric (real amplitudes), vectorised, and
    defined for xi >= 0; ``A`` is the domain volume that normalises the
    density.  ``tol`` is an absolute tolerance on the returned density.
    The cells follow the faster of the weight frequency |psi| and the
    characteristic function's own oscillation (pass ``internal_freq``, e.g.
    the support edge, to skip the probe); the cell sums are extrapolated by
    the shared epsilon-algorithm engine.
    """
    if A <= 0:
        raise ValidationError("domain volume A must be positive")
    f_int = _estimate_internal_freq(cf) if internal_freq is None else float(internal_freq)
    omega = max(abs(psi), f_int, 0.25)

    def integrand(xi: np.ndarray) -> np.ndarray:
        vals = np.asarray(cf(xi))
        return (np.real(vals) * np.cos(psi * xi)
                + np.imag(vals) * np.sin(psi * xi))

    cell = math.pi / omega
    scale = math.pi * A
    # resolve the total phase (weight + internal) across one cell
    per_cell_phase = (abs(psi) + f_int) * cell
    n_nodes = int(min(max(nodes, 8 + 3.2 * per_cell_phase), 48))
    # the residual beat between the weight and the characteristic
    # function's own oscillation must be sampled over a couple of periods
    # before the extrapolation is trusted
    beat = abs(abs(psi) - f_int)
    if f_int > 0 and 0 < beat < omega:
        min_cells = int(4.5 * omega / beat) + 8
    else:
        min_cells = 0
    val, err, converged, evals = oscillatory_tail(
        integrand, cell_len=cell, tol=tol, scale=scale,
        max_cells=max_cells, nodes=n_nodes, min_cells=min_cells)
    return QuadratureResult(val / scale, err / scale, converged, evals)
