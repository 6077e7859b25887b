"""Incomplete Euler beta function B_z(a, b).

Evaluated through the ascending series

    B_z(a, b) = z^a * sum_k (1-b)_k / (k! (a+k)) * z^k,   0 <= z < 1,

which doubles as the analytic continuation for -1 < a < 0 (where the
defining integral diverges at the origin).  The amplitude-density use site
has b = 1/2 and a = 1/2 - 1/m.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, NonConvergenceError
from ..policy import DEFAULT_POLICY, SeriesPolicy

_LD = np.longdouble


def inc_beta(z, a: float, b: float, policy: SeriesPolicy = DEFAULT_POLICY):
    """B_z(a, b) for 0 <= z < 1, a > -1 non-integer-safe, scalar or array.

    Relative accuracy ~1e-12 away from z -> 1 (terms are eventually of one
    sign for the b < 1 use sites; no catastrophic cancellation).
    """
    if a <= -1.0:
        raise DomainError(f"inc_beta requires a > -1, got a={a}")
    if a == 0.0:
        raise DomainError("inc_beta has a pole at a = 0")
    z_arr = np.atleast_1d(np.asarray(z, dtype=np.float64))
    if np.any(z_arr < 0.0) or np.any(z_arr >= 1.0):
        raise DomainError("inc_beta requires 0 <= z < 1")
    zz = z_arr.astype(_LD)
    coeff = np.ones_like(zz)          # (1-b)_k z^k / k!
    total = np.ones_like(zz) / _LD(a)
    tol = _LD(max(policy.rel_tol * 1e-2, 1e-19))
    converged = False
    for k in range(policy.max_terms):
        coeff = coeff * zz * (_LD(1.0 - b) + k) / (_LD(k) + 1.0)
        term = coeff / (_LD(a) + k + 1.0)
        total += term
        if np.all(np.abs(term) <= tol * np.abs(total) + _LD(1e-320)):
            converged = True
            break
    if not converged:
        raise NonConvergenceError(
            f"inc_beta series did not converge within {policy.max_terms} terms")
    with np.errstate(divide="ignore"):
        lead = np.where(z_arr > 0.0, np.power(z_arr, a), 0.0)
    out = (lead * total.astype(np.float64))
    out = np.where(z_arr == 0.0, 0.0, out)
    return out if np.ndim(z) else float(out[0])
