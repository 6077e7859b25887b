"""Complete elliptic integral of the first kind, parameter convention.

K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta),  0 <= m < 1,

evaluated through the arithmetic-geometric mean: K(m) = pi / (2 AGM(1,
sqrt(1-m))).  Note the argument is the *parameter* m = k^2, not the modulus
k; the product-of-arcsines derivation of the rectangle amplitude density
fixes this convention.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError


def _agm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    for _ in range(60):
        a_next = 0.5 * (a + b)
        b = np.sqrt(a * b)
        a = a_next
        if np.all(np.abs(a - b) <= 1e-17 * a):
            break
    return a


def elliptic_k(m_param) -> np.ndarray | float:
    """K(m) by AGM iteration, scalar or array; relative error ~1e-15.

    Diverges logarithmically as m -> 1: K(1-eps) ~ (1/2) log(16/eps).
    """
    m = np.atleast_1d(np.asarray(m_param, dtype=np.float64))
    if np.any(m < 0.0) or np.any(m >= 1.0):
        raise DomainError("elliptic_k requires 0 <= m < 1 (parameter convention)")
    out = math.pi / (2.0 * _agm(np.ones_like(m), np.sqrt(1.0 - m)))
    return out if np.ndim(m_param) else float(out[0])


def elliptic_kc(eps) -> np.ndarray | float:
    """K(1 - eps) with the complement passed directly, so arguments
    exponentially close to the logarithmic singularity at m = 1 do not
    round away (used by the amplitude densities near psi = 0)."""
    e = np.atleast_1d(np.asarray(eps, dtype=np.float64))
    if np.any(e <= 0.0) or np.any(e > 1.0):
        raise DomainError("elliptic_kc requires 0 < eps <= 1")
    out = math.pi / (2.0 * _agm(np.ones_like(e), np.sqrt(e)))
    return out if np.ndim(eps) else float(out[0])
