"""Certify Koch-type Jordan curves as minimum sets of strictly subharmonic functions."""

__version__ = "0.1.0"

from .constants import (  # noqa: E402
    BiHolderBounds,
    Certificate,
    Verdict,
    ahlfors_constant,
    c_star,
    certify,
    certify_koch,
    gamma_of,
    hausdorff_dim,
    koch_A,
    koch_B,
    koch_bounds,
    ls_alpha,
    theta_tilde,
)
from .koch import Angle, SampledCurve, koch_curve, nodes, phi, phi_projection, pi_theta  # noqa: E402

__all__ = [
    "Angle",
    "BiHolderBounds",
    "Certificate",
    "SampledCurve",
    "Verdict",
    "ahlfors_constant",
    "c_star",
    "certify",
    "certify_koch",
    "gamma_of",
    "hausdorff_dim",
    "koch_A",
    "koch_B",
    "koch_bounds",
    "koch_curve",
    "ls_alpha",
    "nodes",
    "phi",
    "phi_projection",
    "pi_theta",
    "theta_tilde",
]
