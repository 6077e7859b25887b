"""Exact amplitude statistics of integrable quantum-billiard eigenfunctions.

Closed-form amplitude densities and characteristic functions for the 1-D
box, rectangle, right-isosceles and equilateral triangles, and the circle
(large-order asymptotics), cross-validated against Monte Carlo sampling and
numerical Fourier inversion.
"""

__version__ = "0.1.0"

from .billiards import (BilliardSpec, Domain, Mode, Point, Shape, TilingClass,
                        amplitude, domain_of, eigenfunction, energy,
                        helmholtz_eigenvalue, nodal_domain_count, rhombic_inverse,
                        rhombic_map, sample_uniform, tiling_class)
from .distributions import (DistributionForm, Family, cf_closed, cf_numeric,
                            closed_cdf, distribution_form, gaussian_rwm_pdf,
                            has_closed_form, moment, pdf_asymptotic, pdf_closed,
                            pdf_via_ft, support_edge)
from .errors import (BilliardStatsError, CancellationOverflowError, DomainError,
                     NoClosedFormError, NonConvergenceError, OutsideDomainError,
                     PoleError, SingularPointError, UnsupportedShapeError,
                     ValidationError)
from .mcstats import (EmpiricalDistribution, chi_square, chi_square_quantile,
                      ks_critical, ks_statistic, ks_two_sample,
                      ks_two_sample_critical, sample_amplitudes)
from .policy import DEFAULT_POLICY, SeriesPolicy
from .quadrature import (QuadratureResult, fourier_invert, integrate_1d,
                         integrate_2d)

__all__ = [
    "BilliardSpec", "BilliardStatsError", "CancellationOverflowError",
    "DEFAULT_POLICY", "DistributionForm", "Domain", "DomainError",
    "EmpiricalDistribution", "Family", "Mode", "NoClosedFormError",
    "NonConvergenceError", "OutsideDomainError", "Point", "PoleError",
    "QuadratureResult", "SeriesPolicy", "Shape", "SingularPointError",
    "TilingClass", "UnsupportedShapeError", "ValidationError", "amplitude",
    "cf_closed", "cf_numeric", "chi_square", "chi_square_quantile",
    "closed_cdf", "distribution_form", "domain_of", "eigenfunction", "energy",
    "fourier_invert", "gaussian_rwm_pdf", "has_closed_form",
    "helmholtz_eigenvalue", "integrate_1d", "integrate_2d", "ks_critical",
    "ks_statistic", "ks_two_sample", "ks_two_sample_critical", "moment",
    "nodal_domain_count", "pdf_asymptotic", "pdf_closed", "pdf_via_ft",
    "rhombic_inverse", "rhombic_map", "sample_amplitudes", "sample_uniform",
    "support_edge", "tiling_class",
]
