"""Explicit 2-descent on E_p : y^2 = (x + 6p)(x - 9p)(x - 18p).

Selmer groups and ranks, local solvability with certificates, biquadratic
field certificates from rational points, and quadratic class-number audits.
"""

__version__ = "0.1.0"

from .arith import DomainError, FactorizationIncomplete
from .curve import INFINITY, CurveParams, RationalPoint, TheoremClass, make_curve
from .descent import SelmerPair, phi, torsion_image
from .localsolve import HomSpace, LocalVerdict, Rule, decide_local
from .selmer import SelmerGroup, SolverMode, compute_selmer, rank_bounds, sha_two_bound
from .fieldcraft import CertificateError, alpha_certificate, build_field, double_family
from .classnum import biquad_estimate, h_quadratic

__all__ = [
    "DomainError",
    "FactorizationIncomplete",
    "INFINITY",
    "CurveParams",
    "RationalPoint",
    "TheoremClass",
    "make_curve",
    "SelmerPair",
    "phi",
    "torsion_image",
    "HomSpace",
    "LocalVerdict",
    "Rule",
    "decide_local",
    "SelmerGroup",
    "SolverMode",
    "compute_selmer",
    "rank_bounds",
    "sha_two_bound",
    "CertificateError",
    "alpha_certificate",
    "build_field",
    "double_family",
    "biquad_estimate",
    "h_quadratic",
]
