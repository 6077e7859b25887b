"""Shared low-level integration helpers.

Gauss-Legendre node cache, the Wynn epsilon algorithm, and a cell-based
integrator for semi-infinite oscillatory integrals: the integrand is
integrated over consecutive half-period cells and the sequence of partial
sums is extrapolated.  This is the single tail-summation engine behind both
the Fourier inversion of characteristic functions and the Mellin-Barnes
contour of the Meijer G evaluator.
"""

from __future__ import annotations

import numpy as np
from functools import lru_cache
from typing import Callable


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached Gauss-Legendre nodes/weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def wynn_epsilon(s: np.ndarray) -> tuple[float, float]:
    """Accelerate a sequence of partial sums with the epsilon algorithm.

    Returns (estimate, spread): the deepest finite even-column entry and the
    disagreement among the last few even columns, which serves as an error
    proxy.  Exact plateaus (zero differences) terminate the table early.
    """
    s = np.asarray(s, dtype=np.float64)
    n = s.size
    if n < 3:
        return float(s[-1]), float("inf") if n == 1 else abs(float(s[-1] - s[0]))
    prev2 = np.zeros(n + 1)   # epsilon_{-1}
    prev1 = s.copy()          # epsilon_0
    even_heads = [float(s[-1])]
    k = 0
    while prev1.size >= 2:
        k += 1
        diff = prev1[1:] - prev1[:-1]
        if np.any(diff == 0.0):
            break
        with np.errstate(over="ignore", invalid="ignore"):
            new = prev2[1:prev1.size] + 1.0 / diff
        if not np.all(np.isfinite(new)):
            break
        prev2, prev1 = prev1, new
        if k % 2 == 0 and prev1.size:
            even_heads.append(float(prev1[-1]))
    if len(even_heads) >= 3:
        spread = abs(even_heads[-1] - even_heads[-2]) + abs(even_heads[-2] - even_heads[-3])
    elif len(even_heads) == 2:
        spread = abs(even_heads[-1] - even_heads[-2])
    else:
        spread = float("inf")
    return even_heads[-1], spread


def iterated_average(s: np.ndarray) -> float:
    """Repeated adjacent averaging (Euler-style) of the partial sums."""
    v = np.asarray(s, dtype=np.float64).copy()
    while v.size > 1:
        v = 0.5 * (v[1:] + v[:-1])
    return float(v[0])


def cell_integrate(f: Callable[[np.ndarray], np.ndarray],
                   edges: np.ndarray, nodes: int) -> np.ndarray:
    """Integrate f over each [edges[i], edges[i+1]] with one GL rule; f is
    evaluated in a single batched call."""
    x, w = gauss_legendre(nodes)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = f(pts.ravel()).reshape(pts.shape)
    return np.sum(vals * w[None, :], axis=1) * half


def oscillatory_tail(f: Callable[[np.ndarray], np.ndarray], *,
                     cell_len: float, t0: float = 0.0, tol: float = 1e-9,
                     scale: float = 1.0, max_cells: int = 512, nodes: int = 24,
                     batch: int = 16, min_cells: int = 0
                     ) -> tuple[float, float, bool, int]:
    """integral_{t0}^{inf} f(t) dt for f that eventually oscillates and decays.

    Cells of length ``cell_len`` are integrated by Gauss-Legendre; the
    partial-sum sequence is extrapolated with the epsilon algorithm after
    every batch.  Absolutely convergent integrands short-circuit once the
    raw cells fall below the tolerance.  The convergence test is
    err <= tol * max(scale, |value|), so ``scale`` sets the magnitude the
    caller considers "order one".  ``min_cells`` delays the extrapolated
    exit: when the integrand carries a slow beat mode the extrapolation can
    look settled before the mode has been sampled at all, so callers pass a
    couple of beat periods here.

    Returns (value, error_estimate, converged, evaluations).
    """
    sums = []
    total = 0.0
    mag = 0.0
    evals = 0
    n_cells = 0
    best_val = 0.0
    best_err = float("inf")
    min_cells = min(min_cells, max_cells - 1)
    while n_cells < max_cells:
        take = min(batch, max_cells - n_cells)
        edges = t0 + cell_len * np.arange(n_cells, n_cells + take + 1)
        cells = cell_integrate(f, edges, nodes)
        evals += cells.size * nodes
        for c in cells:
            total += float(c)
            sums.append(total)
        n_cells += take
        mag = max(mag, float(np.max(np.abs(cells))), abs(total))
        # absolute convergence: raw cells already negligible
        tail_mag = float(np.max(np.abs(cells[-min(3, cells.size):])))
        if tail_mag <= 0.05 * tol * max(mag, scale, 1e-300) and n_cells >= 4:
            return total, tail_mag, True, evals
        if n_cells < min_cells:
            continue
        window = np.asarray(sums[-min(len(sums), 64):])
        est, spread = wynn_epsilon(window)
        # sensitivity of the extrapolation to dropping the last partial sums
        est1, _ = wynn_epsilon(window[:-1])
        est2, _ = wynn_epsilon(window[:-2])
        err = (abs(est - est1) + abs(est1 - est2)
               + 0.02 * min(spread, abs(est - iterated_average(window))))
        if err < best_err:
            best_val, best_err = est, err
        if best_err <= tol * max(scale, abs(best_val)):
            return best_val, best_err, True, evals
    converged = best_err <= 10.0 * tol * max(scale, abs(best_val))
    return best_val, best_err, converged, evals
