"""Monte Carlo amplitude sampling and goodness-of-fit machinery.

Sampling is reproducible: a fixed (spec, N, seed) triple always produces
the identical sample array and histogram, independent of chunking.  The
Kolmogorov-Smirnov statistic is computed from the raw sorted samples (the
empirical CDF is continuous even where the density diverges); the Pearson
chi-square test merges bins until every expected count reaches the
classical minimum, which also absorbs the singular-at-zero bins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2 as _chi2_dist

from ._accel import gauss_legendre
from .billiards import BilliardSpec, Shape, amplitude, domain_of, sample_uniform
from .distributions import Family, distribution_form
from .errors import ValidationError

_CHUNK = 1 << 20


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Monte Carlo amplitudes reduced to a histogram plus the sorted raw
    samples (the empirical CDF)."""

    spec: BilliardSpec
    seed: int
    samples: np.ndarray          # sorted amplitudes
    bin_edges: np.ndarray
    bin_masses: np.ndarray

    def __post_init__(self):
        if not np.all(np.diff(self.bin_edges) > 0):
            raise ValidationError("bin edges must be strictly increasing")
        if abs(float(np.sum(self.bin_masses)) - 1.0) > 1e-12:
            raise ValidationError("bin masses must sum to one")

    @property
    def samples_count(self) -> int:
        return int(self.samples.size)

    def empirical_cdf(self, psi) -> np.ndarray:
        psi_arr = np.asarray(psi, dtype=np.float64)
        return np.searchsorted(self.samples, psi_arr, side="right") / self.samples_count


def sample_amplitudes(spec: BilliardSpec, n_samples: int, seed: int,
                      bins: int = 200) -> EmpiricalDistribution:
    """Evaluate the eigenfunction at uniform random points of its domain.

    Bins span the closed-form support when one exists (200 equal-width bins
    by default) and the observed sample range otherwise (including the
    circle, whose formal asymptotic support is never attained).
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    dom = domain_of(spec)
    out = np.empty(n_samples)
    done = 0
    while done < n_samples:
        take = min(_CHUNK, n_samples - done)
        x, y = sample_uniform(dom, rng, take)
        out[done:done + take] = amplitude(spec, x, y)
        done += take
    out.sort()

    form = distribution_form(spec)
    if form.family in (Family.NUMERIC_ONLY, Family.CIRCLE_ASYMPTOTIC):
        lo, hi = float(out[0]), float(out[-1])
        pad = 1e-9 * max(hi - lo, 1.0)
        edges = np.linspace(lo - pad, hi + pad, bins + 1)
    else:
        edges = np.linspace(form.support[0], form.support[1], bins + 1)
    counts, _ = np.histogram(out, bins=edges)
    return EmpiricalDistribution(spec, seed, out, edges, counts / n_samples)


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov
# ---------------------------------------------------------------------------

def ks_statistic(emp: EmpiricalDistribution, cdf) -> float:
    """Sup distance between the empirical CDF (raw samples, not bins) and a
    reference CDF callable (monotone, 0 at the lower support end, 1 at the
    upper)."""
    s = emp.samples
    n = s.size
    f = np.asarray(cdf(s), dtype=np.float64)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_two_sample(emp_a: EmpiricalDistribution,
                  emp_b: EmpiricalDistribution) -> float:
    """Two-sample sup distance between the empirical CDFs."""
    a, b = emp_a.samples, emp_b.samples
    both = np.concatenate([a, b])
    both.sort(kind="mergesort")
    fa = np.searchsorted(a, both, side="right") / a.size
    fb = np.searchsorted(b, both, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def kolmogorov_sf(lam: float) -> float:
    """Tail probability of the Kolmogorov distribution,
    Q(lam) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lam^2)."""
    if lam <= 0.05:
        return 1.0
    total = 0.0
    for k in range(1, 200):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
        total += term
        if abs(term) < 1e-16:
            break
    return min(max(total, 0.0), 1.0)


def ks_critical(n_samples: int, alpha: float) -> float:
    """One-sample critical KS distance at significance alpha (asymptotic)."""
    lo, hi = 0.2, 4.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if kolmogorov_sf(mid) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / math.sqrt(n_samples)


def ks_two_sample_critical(n_a: int, n_b: int, alpha: float) -> float:
    c = math.sqrt(-0.5 * math.log(alpha / 2.0))
    return c * math.sqrt((n_a + n_b) / (n_a * n_b))


# ---------------------------------------------------------------------------
# Pearson chi-square
# ---------------------------------------------------------------------------

def _bin_masses_from_pdf(pdf, edges: np.ndarray) -> np.ndarray:
    """Expected bin masses by quadrature of the density, with dyadic grading
    applied to bins whose edge touches the singular amplitude zero."""
    x, w = gauss_legendre(16)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    with np.errstate(all="ignore"):
        vals = np.asarray(pdf(pts.ravel()), dtype=np.float64).reshape(pts.shape)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    masses = np.sum(vals * w[None, :], axis=1) * half

    def graded(a, b, singular_at_a):
        if not singular_at_a:
            a, b = b, a
        total = 0.0
        length = b - a
        for j in range(50):
            seg_a = a + length * 2.0 ** (-j - 1)
            seg_b = a + length * 2.0 ** (-j)
            m_, h_ = 0.5 * (seg_a + seg_b), 0.5 * (seg_b - seg_a)
            with np.errstate(all="ignore"):
                v = np.asarray(pdf(m_ + h_ * x), dtype=np.float64)
            total += float(np.dot(np.where(np.isfinite(v), v, 0.0), w)) * h_
        return abs(total)

    for j in np.flatnonzero(edges == 0.0):
        if j < masses.size:
            masses[j] = graded(edges[j], edges[j + 1], True)
        if j >= 1:
            masses[j - 1] = graded(edges[j - 1], edges[j], False)
    return masses


def chi_square(emp: EmpiricalDistribution, pdf,
               min_expected: float = 5.0) -> tuple[float, int]:
    """Pearson statistic of the sampled histogram against a density.

    Expected counts come from quadrature of ``pdf`` over each bin; adjacent
    bins are merged until every expected count reaches ``min_expected``.
    Returns (statistic, degrees of freedom).
    """
    n = emp.samples_count
    expected_mass = _bin_masses_from_pdf(pdf, emp.bin_edges)
    observed = emp.bin_masses * n
    expected = expected_mass * n

    merged_obs, merged_exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            merged_obs.append(acc_o)
            merged_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if merged_exp:
            merged_obs[-1] += acc_o
            merged_exp[-1] += acc_e
        else:
            raise ValidationError(
                "expected counts too small even after merging all bins")
    if len(merged_exp) < 2:
        raise ValidationError(
            "fewer than two bins remain after merging; test undefined")
    merged_obs = np.asarray(merged_obs)
    merged_exp = np.asarray(merged_exp)
    stat = float(np.sum((merged_obs - merged_exp) ** 2 / merged_exp))
    return stat, len(merged_exp) - 1


def chi_square_quantile(p: float, dof: int) -> float:
    """Quantile of the chi-square distribution (scipy-backed)."""
    return float(_chi2_dist.ppf(p, dof))
