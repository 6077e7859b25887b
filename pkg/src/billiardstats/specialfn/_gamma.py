"""Gamma function via the Lanczos approximation.

The real-argument entry point is :func:`gamma`; the complex log-gamma
(needed by the Mellin-Barnes contour of the Meijer G evaluator) is exposed
as :func:`loggamma_complex` and works on numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import PoleError

# Lanczos coefficients for g = 7, n = 9 (double precision classic set).
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_series(z):
    """Lanczos partial-fraction sum A_g(z-1); valid for Re(z) > 0."""
    acc = _LANCZOS_COEFFS[0]
    for k, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc = acc + c / (z - 1.0 + k)
    return acc


_LD = np.longdouble


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Lanczos approximation with reflection for x < 0.5, accumulated in 80-bit
    extended precision; relative accuracy is better than 1e-13 over the
    representable range (the result overflows a double beyond ~171.6).

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    """
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise PoleError(f"gamma is not defined for {x}")
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at non-positive integer {x}")
    if x < 0.5:
        # Reflection: gamma(x) gamma(1-x) = pi / sin(pi x).
        return float(_LD(math.pi) / (_LD(_sinpi(x)) * _LD(gamma(1.0 - x))))
    xl = _LD(x)
    acc = _LD(_LANCZOS_COEFFS[0])
    for k, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc = acc + _LD(c) / (xl - 1.0 + k)
    t = xl - 0.5 + _LD(_LANCZOS_G)
    # exp-log form avoids overflow of t**(x-0.5) for large x.
    ln_val = _LD(_LN_SQRT_2PI) + (xl - 0.5) * np.log(t) - t + np.log(acc)
    if ln_val > 709.0:
        raise OverflowError(f"gamma({x}) overflows double precision")
    return float(np.exp(ln_val))


def _sinpi(x: float) -> float:
    """sin(pi x) with argument reduction (accurate for large |x|)."""
    r = x - math.floor(x)
    s = math.sin(math.pi * r)
    # floor parity decides the sign of the reduced sine
    if int(math.floor(x)) % 2:
        s = -s
    return s


def loggamma_complex(z: np.ndarray) -> np.ndarray:
    """Principal-branch log-gamma for complex arrays with Re(z) > 0.

    The Mellin-Barnes contour only needs arguments with positive real part,
    so no reflection is implemented.  The branch is continuous along
    vertical lines in the right half plane: both log factors below have
    arguments confined to the right half plane.
    """
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z.real <= 0.0):
        raise PoleError("loggamma_complex requires Re(z) > 0")
    a = _lanczos_series(z)
    t = z - 0.5 + _LANCZOS_G
    return _LN_SQRT_2PI + (z - 0.5) * np.log(t) - t + np.log(a)
