"""Generalized hypergeometric series pFq (p <= q) and the Gauss function 2F1.

pFq with p <= q is entire, but for large negative arguments the alternating
series cancels catastrophically (the intermediate terms dwarf the result).
The evaluator therefore runs a cheap logarithmic pre-pass to bound the
largest term; if the predicted cancellation exceeds the guard ratio the sum
is reaccumulated in arbitrary precision (mpmath, gmpy2-backed) with the
precision sized to the cancellation plus a fixed guard.  Silent digit loss
is structurally impossible: either the double path is certified by the
guard, or the escalated path carries enough bits.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from mpmath import mp, mpf

from ..errors import DomainError, NonConvergenceError, ValidationError
from ..policy import DEFAULT_POLICY, SeriesPolicy

_LD = np.longdouble

# escalate when max |term| exceeds this multiple of the summed value
_CANCELLATION_GUARD = 1e12
# double path keeps ~19 digits in extended precision; spend at most 6 on
# cancellation so ~13 survive
_DOUBLE_SAFE_RATIO = 1e6


def _validate_params(a: Sequence[float], b: Sequence[float]) -> None:
    if len(a) > len(b):
        raise ValidationError(
            f"hyp_pfq requires p <= q, got p={len(a)}, q={len(b)}")
    for bj in b:
        if bj <= 0 and float(bj).is_integer():
            raise ValidationError(f"lower parameter {bj} is a non-positive integer")


_LN_COEFF_CACHE: dict[tuple, np.ndarray] = {}


def _ln_coeffs(a: tuple, b: tuple, n: int) -> np.ndarray:
    """ln |c_k| for c_k = prod (a)_k / prod (b)_k / k!, cached per family.

    ln c_{k+1} = ln c_k + ln|z-free step_k| with step_k built from the
    Pochhammer ratios at index k; ln c_0 = 0.
    """
    key = (a, b)
    cached = _LN_COEFF_CACHE.get(key)
    if cached is not None and cached.size >= n:
        return cached[:n]
    size = max(n, 256, 0 if cached is None else cached.size * 2)
    start = 0 if cached is None else cached.size - 1
    k = np.arange(start, size - 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        step = -np.log1p(k)
        for ai in a:
            step += np.log(np.abs(ai + k))
        for bj in b:
            step -= np.log(bj + k)
    if cached is None:
        grown = np.concatenate([[0.0], np.cumsum(step)])
    else:
        grown = np.concatenate([cached, cached[-1] + np.cumsum(step)])
    _LN_COEFF_CACHE[key] = grown
    return grown[:n]


def _pfq_log_prepass(a, b, z, max_terms):
    """Estimate ln(max |term|) and the index where terms fall 90 nats below it."""
    ln_z = math.log(abs(z))
    n = 256
    while True:
        ln_c = _ln_coeffs(a, b, n)
        k = np.arange(ln_c.size, dtype=np.float64)
        ln_t = ln_c + k * ln_z
        ln_max = float(np.max(ln_t))
        below = np.flatnonzero(ln_t < ln_max - 90.0)
        below = below[below > int(np.argmax(ln_t))]
        if below.size:
            return ln_max, int(below[0])
        if n >= max_terms:
            return ln_max, n
        n = min(n * 2, max_terms)


def _pfq_double(a, b, z_arr, policy: SeriesPolicy):
    """Extended-precision vectorised sum; returns (values, max_term_ratio)."""
    z = np.asarray(z_arr, dtype=_LD)
    term = np.ones_like(z)
    total = np.ones_like(z)
    max_term = np.ones_like(z)
    small_streak = np.zeros(z.shape, dtype=np.int64)
    tol = _LD(max(policy.rel_tol * 1e-3, 1e-22))
    for k in range(policy.max_terms):
        num = _LD(1.0)
        for ai in a:
            num = num * _LD(ai + k)
        den = _LD(k + 1)
        for bj in b:
            den = den * _LD(bj + k)
        term = term * z * (num / den)
        total += term
        np.maximum(max_term, np.abs(term), out=max_term)
        small = np.abs(term) <= tol * np.abs(total) + _LD(policy.abs_tol)
        small_streak = np.where(small, small_streak + 1, 0)
        if np.all(small_streak >= 2):
            ratio = max_term / np.maximum(np.abs(total), _LD(1e-300))
            return total.astype(np.float64), ratio.astype(np.float64)
    raise NonConvergenceError(
        f"pFq series did not converge within {policy.max_terms} terms",
        evaluations=policy.max_terms)


def _pfq_mp(a, b, z: float, policy: SeriesPolicy,
            prepass: tuple[float, int] | None = None) -> float:
    """Arbitrary-precision fallback for cancellation-heavy arguments."""
    ln_max, k_hint = prepass if prepass is not None else _pfq_log_prepass(
        a, b, z, policy.max_terms * 4)
    prec = max(policy.working_precision_bits, 64) + int(1.45 * max(ln_max, 0.0)) + 96
    with mp.workprec(prec):
        zm = mpf(z)
        # parameters as exact mpf values: the factor (a_i + k) must carry no
        # per-term rounding, or the cancellation amplifies it catastrophically
        a_mp = [mpf(ai) for ai in a]
        b_mp = [mpf(bj) for bj in b]
        term = mpf(1)
        total = mpf(1)
        tol = mpf(10) ** (-(mp.dps - 8))
        streak = 0
        limit = max(policy.max_terms, k_hint + 16)
        for k in range(limit):
            num = mpf(1)
            for ai in a_mp:
                num *= (ai + k)
            den = mpf(k + 1)
            for bj in b_mp:
                den *= (bj + k)
            term = term * zm * num / den
            total += term
            if abs(term) <= tol * (abs(total) + mpf(1)):
                streak += 1
                if streak >= 2:
                    return float(total)
            else:
                streak = 0
        raise NonConvergenceError(
            f"pFq high-precision series did not converge within {limit} terms",
            evaluations=limit)


def hyp_pfq(a: Sequence[float], b: Sequence[float], z,
            policy: SeriesPolicy = DEFAULT_POLICY):
    """Generalized hypergeometric pFq(a; b; z) for p <= q, scalar or array z.

    The cancellation guard escalates to arbitrary precision whenever the
    largest intermediate term exceeds 1e12 times the summed value (and the
    double path is already abandoned beyond a 1e6 ratio).  Target accuracy
    ~1e-12 relative for the entire real line reachable within
    ``policy.max_terms`` terms.
    """
    a = tuple(float(v) for v in a)
    b = tuple(float(v) for v in b)
    _validate_params(a, b)
    z_arr = np.atleast_1d(np.asarray(z, dtype=np.float64))
    out = np.empty_like(z_arr)

    flat = z_arr.ravel()
    out_flat = out.ravel()
    # cheap pre-screen: elements whose predicted max term is huge go straight
    # to the high-precision path
    needs_mp = np.zeros(flat.shape, dtype=bool)
    prepasses: dict[int, tuple[float, int]] = {}
    for idx, zv in enumerate(flat):
        if zv < 0.0 and abs(zv) > 4.0:
            pre = _pfq_log_prepass(a, b, zv, policy.max_terms * 4)
            if pre[0] > math.log(_DOUBLE_SAFE_RATIO):
                needs_mp[idx] = True
                prepasses[idx] = pre
    if np.any(~needs_mp):
        vals, ratio = _pfq_double(a, b, flat[~needs_mp], policy)
        promote = ratio > _DOUBLE_SAFE_RATIO
        sub_idx = np.flatnonzero(~needs_mp)
        out_flat[sub_idx[~promote]] = vals[~promote]
        needs_mp[sub_idx[promote]] = True
    for idx in np.flatnonzero(needs_mp):
        out_flat[idx] = _pfq_mp(a, b, float(flat[idx]), policy,
                                prepasses.get(idx))
    return out if np.ndim(z) else float(out_flat[0])


def hyp2f1(a: float, b: float, c: float, z,
           policy: SeriesPolicy = DEFAULT_POLICY):
    """Gauss hypergeometric 2F1(a, b; c; z) for 0 <= z < 1, scalar or array.

    Direct Gauss series; all the amplitude-density use sites have z >= 0 so
    there is no cancellation, only slow geometric convergence as z -> 1.
    Callers that probe close to the support edge pass a policy with a larger
    ``max_terms`` (the per-term cost is a handful of flops).
    """
    if c <= 0 and float(c).is_integer():
        raise ValidationError(f"hyp2f1 parameter c={c} is a non-positive integer")
    z_arr = np.atleast_1d(np.asarray(z, dtype=np.float64))
    if np.any(z_arr < 0.0) or np.any(z_arr >= 1.0):
        raise DomainError("hyp2f1 is implemented for 0 <= z < 1")
    out = np.empty_like(z_arr)
    flat = z_arr.ravel()
    out_flat = out.ravel()

    order = np.argsort(flat)
    active = order.copy()
    zz = flat[active].astype(_LD)
    term = np.ones_like(zz)
    total = np.ones_like(zz)
    tol = _LD(max(policy.rel_tol * 1e-2, 1e-20))
    k = 0
    while active.size:
        num = _LD(a + k) * _LD(b + k)
        den = _LD(c + k) * _LD(1 + k)
        term = term * zz * (num / den)
        total += term
        k += 1
        if k >= policy.max_terms:
            raise NonConvergenceError(
                f"2F1 series did not converge within {policy.max_terms} terms "
                f"(z up to {float(zz.max()):.17g})", evaluations=k)
        if k % 32 == 0 or k < 8:
            done = np.abs(term) <= tol * np.abs(total)
            if np.any(done):
                out_flat[active[done]] = total[done].astype(np.float64)
                keep = ~done
                active = active[keep]
                zz = zz[keep]
                term = term[keep]
                total = total[keep]
    return out if np.ndim(z) else float(out_flat[0])
