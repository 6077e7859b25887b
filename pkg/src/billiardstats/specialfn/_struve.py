"""Struve function H_0.

Power series (extended-precision accumulation) up to |x| = 20; beyond the
crossover the identity H_0(x) = Y_0(x) + (2/pi) int_0^inf exp(-x u) /
sqrt(1 + u^2) du is used, with Y_0 from its Hankel expansion and the
monotone integral from Gauss-Laguerre quadrature.  The two representations
agree to better than 1e-10 at the crossover.
"""

from __future__ import annotations

import math

import numpy as np

from ._bessel import _y0_asymptotic

_LD = np.longdouble
_CROSSOVER = 20.0

_LAG_NODES, _LAG_WEIGHTS = np.polynomial.laguerre.laggauss(60)


def _struve_series(x: np.ndarray) -> np.ndarray:
    """sum_k (-1)^k (x/2)^{2k+1} / Gamma(k+3/2)^2, extended precision."""
    x = np.asarray(x, dtype=_LD)
    half = x / 2.0
    z = -(half * half)
    # k = 0 term: (x/2) / Gamma(3/2)^2 = (x/2) * 4/pi
    term = half * _LD(4.0 / math.pi)
    total = term.copy()
    for k in range(1, 400):
        # Gamma(k+3/2)^2 grows by (k+1/2)^2 each step
        term = term * z / ((_LD(k) + 0.5) * (_LD(k) + 0.5))
        total += term
        if np.all(np.abs(term) <= 1e-25 * np.abs(total) + 1e-320):
            break
    return total


def _struve_large(x: np.ndarray) -> np.ndarray:
    """H_0 = Y_0 + (2/pi) int_0^inf e^{-xu} (1+u^2)^{-1/2} du for x > 20."""
    x = np.asarray(x, dtype=np.float64)
    t = _LAG_NODES[None, :] / x[:, None]
    integral = np.sum(_LAG_WEIGHTS[None, :] / np.sqrt(1.0 + t * t), axis=1) / x
    return _y0_asymptotic(x) + (2.0 / math.pi) * integral


def struve_h0(x) -> np.ndarray | float:
    """Struve function H_0 (odd in x), scalar or array.

    Relative accuracy ~1e-10 for |x| <= 100 and beyond.
    """
    x_in = np.atleast_1d(np.asarray(x, dtype=np.float64))
    ax = np.abs(x_in)
    out = np.empty_like(ax)
    small = ax <= _CROSSOVER
    if np.any(small):
        out[small] = _struve_series(ax[small]).astype(np.float64)
    if np.any(~small):
        out[~small] = _struve_large(ax[~small])
    out = np.where(x_in < 0, -out, out)
    return out if np.ndim(x) else float(out[0])
