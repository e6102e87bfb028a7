"""Closed-form constants, exponent formulas and the minimum-set decision.

The decision chain for a curve with a bi-Hölder parametrization
A|t-s|^g <= |phi(t) - phi(s)| <= B|t-s|^g is

    bounds (A, B, g) -> three-point constant c = 2^(1-g) B / A
                     -> Hölder exponents of the conformal maps (via arcsin(1/c))
                     -> decay exponent alpha of the Green function
                     -> certified iff alpha < 2, i.e. c < c_star.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from scipy.optimize import bisect

from .koch import check_angle

ROOT_XTOL = 1e-10
CROSSOVER_XTOL = 1e-8
MIN_GAMMA = 1e-6
THETA_TILDE_BRACKET = (1e-9, 0.09)


def gamma_of(theta: float) -> float:
    """Hölder exponent log(2 cos theta) / log 2 of the natural parametrization."""
    theta = check_angle(theta)
    # 4 cos^2 = 2 + 2 cos 2θ; this form rounds to exactly 1/2 at π/4
    return 0.5 * math.log2(2.0 + 2.0 * math.cos(2.0 * theta))


def hausdorff_dim(theta: float) -> float:
    return 1.0 / gamma_of(theta)


def koch_small_angle_term(theta: float) -> float:
    """cos 2θ cos θ - 8 cos²θ sin θ / (2 cos θ - 1); the lower bound that wins for small θ."""
    c, s = math.cos(theta), math.sin(theta)
    return math.cos(2 * theta) * c - 8 * c * c * s / (2 * c - 1)


def koch_A(theta: float) -> float:
    theta = check_angle(theta)
    c = math.cos(theta)
    if theta < math.pi / 8:
        return max(koch_small_angle_term(theta), 1.0 / (4 * c * c))
    return math.sin(3 * theta) / (8 * c**3)


def koch_B(theta: float) -> float:
    theta = check_angle(theta)
    c, s = math.cos(theta), math.sin(theta)
    return 1.0 / c + 8 * c * c * s / (2 * c - 1)


def ponomarev_A(theta: float) -> float:
    """Older lower constant, kept for comparison reports."""
    theta = check_angle(theta)
    c = math.cos(theta)
    if theta < math.pi / 8:
        return 1.0 / (4 * c * c)
    return math.sin(3 * theta) / (8 * c**3)


def ponomarev_B() -> float:
    return 4.0


@dataclass(frozen=True)
class BiHolderBounds:
    A: float
    B: float
    gamma: float

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0):
            raise ValueError("A and B must be positive")
        if self.A > self.B:
            raise ValueError(f"A={self.A} exceeds B={self.B}")
        if not (MIN_GAMMA < self.gamma <= 1.0):
            raise ValueError(f"gamma must lie in ({MIN_GAMMA}, 1], got {self.gamma}")


def koch_bounds(theta: float) -> BiHolderBounds:
    return BiHolderBounds(koch_A(theta), koch_B(theta), gamma_of(theta))


def ponomarev_bounds(theta: float) -> BiHolderBounds:
    return BiHolderBounds(ponomarev_A(theta), ponomarev_B(), gamma_of(theta))


def ahlfors_constant(b: BiHolderBounds) -> float:
    return 2.0 ** (1.0 - b.gamma) * b.B / b.A


def _check_c(c: float) -> float:
    c = float(c)
    if not c >= 1.0:
        raise ValueError(f"three-point constant must be >= 1, got {c}")
    return c


def lesley_forward_exponent(c: float) -> float:
    """Hölder exponent of the conformal maps onto the two complementary domains."""
    s = math.asin(1.0 / _check_c(c))
    return 2 * s * s / (math.pi**2 - math.pi * s)


def lesley_inverse_exponent(c: float) -> float:
    """Hölder exponent of the inverse conformal maps."""
    s = math.asin(1.0 / _check_c(c))
    return math.pi / (2 * math.pi - 2 * s)


def cross_exponent(alpha: float) -> float:
    """Exponent 1/(2 - alpha) transferred from one side of the curve to the other."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return 1.0 / (2.0 - alpha)


def ls_alpha(c: float) -> float:
    """Decay exponent of the Green function near the curve; increasing in c."""
    s = math.asin(1.0 / _check_c(c))
    return (math.pi**2 - math.pi * s) / (2 * s * s)


def c_star() -> float:
    """Largest admissible three-point constant: the solution of ls_alpha(c) = 2."""
    return 1.0 / math.sin((math.sqrt(17.0) - 1.0) * math.pi / 8.0)


class Verdict(str, enum.Enum):
    CERTIFIED = "CertifiedMinimumSet"
    NOT_CERTIFIED = "NotCertified"


@dataclass(frozen=True)
class Certificate:
    bounds: BiHolderBounds
    ahlfors_c: float
    lesley_forward: float
    lesley_inverse: float
    ls_alpha: float
    threshold_c_star: float
    verdict: Verdict
    hausdorff_dim: Optional[float] = None
    theta: Optional[float] = None
    legacy: Optional[dict] = field(default=None)

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED


def certify(b: BiHolderBounds, theta: Optional[float] = None) -> Certificate:
    """Run the decision chain on bi-Hölder bounds.

    With ``theta`` the certificate also carries the Hausdorff dimension and
    the legacy constants for comparison; the verdict never uses the latter.
    """
    c = ahlfors_constant(b)
    cs = c_star()
    legacy = None
    dim = None
    if theta is not None:
        theta = check_angle(theta)
        dim = hausdorff_dim(theta)
        old = ponomarev_bounds(theta)
        legacy = {"A": old.A, "B": old.B, "gamma": old.gamma, "ahlfors_c": ahlfors_constant(old)}
    return Certificate(
        bounds=b,
        ahlfors_c=c,
        lesley_forward=lesley_forward_exponent(c),
        lesley_inverse=lesley_inverse_exponent(c),
        ls_alpha=ls_alpha(c),
        threshold_c_star=cs,
        verdict=Verdict.CERTIFIED if c < cs else Verdict.NOT_CERTIFIED,
        hausdorff_dim=dim,
        theta=theta,
        legacy=legacy,
    )


def certify_koch(theta: float) -> Certificate:
    return certify(koch_bounds(theta), theta=theta)


def koch_criterion(theta: float) -> float:
    """Three-point constant implied by the Koch bounds at ``theta``."""
    return ahlfors_constant(koch_bounds(theta))


def theta_tilde() -> float:
    """Largest Koch angle certified by the pipeline (the criterion increases with theta)."""
    cs = c_star()
    lo, hi = THETA_TILDE_BRACKET
    return bisect(lambda th: koch_criterion(th) - cs, lo, hi, xtol=ROOT_XTOL)


def theta_crossovers() -> tuple[float, float]:
    """(theta0, theta1): where the small-angle term stops dominating 1/(4cos²θ), and where it turns negative."""
    theta0 = bisect(
        lambda th: koch_small_angle_term(th) - 1.0 / (4 * math.cos(th) ** 2),
        0.01, 0.12, xtol=CROSSOVER_XTOL,
    )
    theta1 = bisect(koch_small_angle_term, 0.01, math.pi / 8, xtol=CROSSOVER_XTOL)
    return theta0, theta1


def quasicircle_dim_bound(K: float) -> float:
    """Upper bound 1 + ((K-1)/(K+1))² on the dimension of a K-quasicircle."""
    if not K >= 1.0:
        raise ValueError("K must be >= 1")
    return 1.0 + ((K - 1.0) / (K + 1.0)) ** 2


def theta_dim_threshold() -> float:
    """Angle beyond which the Koch polygon exceeds dimension 10/9."""
    return math.acos(2.0 ** -0.1)
