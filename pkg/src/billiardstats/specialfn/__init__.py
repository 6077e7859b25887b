"""Self-contained special functions used by the closed-form amplitude
distributions: gamma, Bessel J (real order) and its zeros, Struve H_0, the
complete elliptic integral K (parameter convention), generalized
hypergeometric pFq (p <= q), Gauss 2F1, the fixed Meijer G^{4,0}_{4,4}
instance, and the incomplete beta function.

All functions are pure and accept scalars; the hot-path ones (j0, j1,
elliptic_k, hyp2f1, hyp_pfq, struve_h0, inc_beta) also accept numpy arrays.
"""

from ._bessel import bessel_j, bessel_j_zero, besselj_int, j0, j1
from ._betainc import inc_beta
from ._elliptic import elliptic_k, elliptic_kc
from ._gamma import gamma, loggamma_complex
from ._hyper import hyp2f1, hyp_pfq
from ._meijer import MeijerG4044Params, meijer_g_4044
from ._struve import struve_h0

__all__ = [
    "MeijerG4044Params",
    "bessel_j",
    "bessel_j_zero",
    "besselj_int",
    "elliptic_k",
    "elliptic_kc",
    "gamma",
    "hyp2f1",
    "hyp_pfq",
    "inc_beta",
    "j0",
    "j1",
    "loggamma_complex",
    "meijer_g_4044",
    "struve_h0",
]
