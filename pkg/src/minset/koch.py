"""Koch curves of base angle theta, their dyadic nodes and natural parametrization.

Points in the plane are complex numbers throughout. The two contractions
generating the curve are orientation reversing: each maps the unit segment
onto one lateral side of the base triangle and the triangle itself inside
its parent, so the level-n triangles are nested.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import GuardError

MAX_LEVEL = 24
PHI_DEPTH = 53
DEFAULT_SIDES = 12


def check_angle(theta: float) -> float:
    theta = float(theta)
    if not (0.0 < theta <= math.pi / 4):
        raise ValueError(f"theta must lie in (0, pi/4], got {theta!r}")
    return theta


@dataclass(frozen=True)
class Angle:
    """Koch base angle in radians, constrained to (0, pi/4]."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", check_angle(self.theta))

    def __float__(self) -> float:
        return self.theta


def contraction(theta: float) -> float:
    """Similarity ratio 1/(2 cos theta) of both generating maps."""
    return 1.0 / (2.0 * math.cos(check_angle(theta)))


def apex(theta: float) -> complex:
    return complex(0.5, 0.5 * math.tan(check_angle(theta)))


@dataclass(frozen=True)
class Similarity:
    """z -> scale * e^{i rotation} * conj(z) + translation (plain z when ``reflect`` is False)."""

    scale: float
    rotation: float
    translation: complex
    reflect: bool = True

    @property
    def coefficient(self) -> complex:
        return self.scale * cmath.exp(1j * self.rotation)

    def __call__(self, z):
        w = np.conj(z) if self.reflect else z
        return self.coefficient * w + self.translation


def similarities(theta: float) -> tuple[Similarity, Similarity]:
    """The pair (S1, S2) mapping [0, 1] onto [0, apex] and [apex, 1]."""
    theta = check_angle(theta)
    lam = contraction(theta)
    return (
        Similarity(lam, theta, 0j),
        Similarity(lam, -theta, apex(theta)),
    )


@dataclass(frozen=True, eq=False)
class NodeSet:
    theta: float
    level: int
    nodes: np.ndarray  # complex, 2**level + 1 entries

    @property
    def segment_length(self) -> float:
        return contraction(self.theta) ** self.level


def nodes(theta: float, level: int, max_level: int = MAX_LEVEL) -> NodeSet:
    """Vertices of the level-``level`` polygonal approximation, in parameter order."""
    theta = check_angle(theta)
    level = int(level)
    if level < 0:
        raise ValueError("level must be non-negative")
    if level > max_level:
        raise GuardError(f"level {level} exceeds the cap {max_level}")
    s1, s2 = similarities(theta)
    z = np.array([0j, 1 + 0j])
    for _ in range(level):
        z = np.concatenate([s1(z), s2(z)[1:]])
    # endpoints are fixed points of the construction; pin them against rounding
    z[0], z[-1] = 0j, 1 + 0j
    return NodeSet(theta, level, z)


def phi(theta: float, t, depth: int = PHI_DEPTH):
    """Natural parametrization evaluated through the binary address of ``t``.

    ``t = 0.b1 b2 ...`` is sent to S_{b1} o ... o S_{b_depth}(r), where the
    anchor r in [0, 1) is the binary tail left after ``depth`` bits, so a
    truncated address lands on the level-``depth`` polygon rather than at the
    start of its segment. Dyadic parameters are exact once ``depth`` covers
    their last 1-bit (the tail is then 0); otherwise the truncation error is
    at most lambda**depth * sin(theta) / (1 - lambda).
    Accepts a scalar or an array of parameters.
    """
    theta = check_angle(theta)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)) or np.any(np.isnan(t)):
        raise ValueError("t must lie in [0, 1]")
    p = apex(theta)
    q = 1 - p
    x = t.copy()
    bits = np.empty((depth,) + t.shape, dtype=bool)
    for k in range(depth):
        x = x * 2.0
        bits[k] = x >= 1.0
        x = x - bits[k]
    z = x.astype(complex)
    for k in range(depth - 1, -1, -1):
        w = np.conj(z)
        z = np.where(bits[k], p + q * w, p * w)
    z = np.where(t == 1.0, 1 + 0j, z)
    return complex(z) if z.ndim == 0 else z


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def _inner_apex(s: complex, e: complex, other: complex, tan: float) -> complex:
    # isosceles apex over [s, e] on the side of ``other``
    side = 1.0 if _cross(e - s, other - s) > 0 else -1.0
    return 0.5 * (s + e) + side * 0.5j * (e - s) * tan


def phi_projection(theta: float, t: float, level: int, tol: float = 1e-9) -> complex:
    """Level-``level`` approximant built by repeated perpendicular projection.

    Start at ``t`` on the base segment; at each step draw the perpendicular to
    the active segment and move to its second intersection with the active
    triangle, which lands on one of the two lateral sides. That side becomes
    the next active segment. A point reaching the common vertex of the two
    sides stays there for all later levels.
    """
    theta = check_angle(theta)
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in the open interval (0, 1)")
    if level < 1:
        raise ValueError("level must be >= 1")
    tan = math.tan(theta)
    a, b = 0j, 1 + 0j
    c = apex(theta)
    z = complex(t, 0.0)
    for _ in range(level):
        d = 1j * (b - a)
        r = _cross(d, z - a) / _cross(d, c - a)
        hit = a + r * (c - a)
        if abs(hit - c) <= tol * abs(b - a):
            return c
        if r < 1.0:
            s, e, other = a, c, b
        else:
            r = _cross(d, z - c) / _cross(d, b - c)
            hit = c + r * (b - c)
            s, e, other = c, b, a
        z = hit
        a, b, c = s, e, _inner_apex(s, e, other, tan)
    return z


@dataclass(eq=False)
class SampledCurve:
    """Ordered samples (t, z) of a parametrized curve, t strictly increasing in [0, 1]."""

    t: np.ndarray
    z: np.ndarray
    closed: bool = False

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float).ravel()
        self.z = np.asarray(self.z, dtype=complex).ravel()
        if self.t.shape != self.z.shape:
            raise ValueError("t and z must have equal length")
        if self.t.size < 2:
            raise ValueError("a curve needs at least 2 samples")
        if not np.all(np.isfinite(self.t)) or not np.all(np.isfinite(self.z)):
            raise ValueError("samples must be finite")
        if self.t[0] < 0 or self.t[-1] > 1:
            raise ValueError("t must lie in [0, 1]")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("t must be strictly increasing")
        steps = np.diff(self.z)
        if self.closed:
            steps = np.append(steps, self.z[0] - self.z[-1])
        if np.any(steps == 0):
            raise ValueError("consecutive samples coincide")

    def __len__(self) -> int:
        return self.t.size


def koch_curve(theta: float, level: int) -> SampledCurve:
    """Level-``level`` nodes as an open curve, t = k / 2**level."""
    ns = nodes(theta, level)
    return SampledCurve(np.linspace(0.0, 1.0, ns.nodes.size), ns.nodes, closed=False)


def polygon_vertices(sides: int) -> np.ndarray:
    """Counter-clockwise regular polygon with unit sides centred at the origin."""
    radius = 1.0 / (2.0 * math.sin(math.pi / sides))
    k = np.arange(sides)
    return radius * np.exp(1j * (2 * np.pi * k / sides - np.pi / 2 - np.pi / sides))


def pi_theta(theta: float, sides: int = DEFAULT_SIDES, level: int = 6) -> SampledCurve:
    """Closed curve: every side of the regular polygon replaced by a Koch copy.

    Bumps point away from the centre. Edge j is traversed for
    t in [j/sides, (j+1)/sides).
    """
    theta = check_angle(theta)
    if sides < 3:
        raise ValueError("sides must be >= 3")
    base = nodes(theta, level).nodes[:-1]
    v = polygon_vertices(sides)
    w = np.roll(v, -1)
    # conj flips the bump to the right of travel, i.e. outward for a ccw polygon
    z = (v[:, None] + (w - v)[:, None] * np.conj(base)[None, :]).ravel()
    n = base.size
    t = (np.arange(sides)[:, None] * n + np.arange(n)[None, :]).ravel() / (sides * n)
    return SampledCurve(t, z, closed=True)


def corner_angles(curve: SampledCurve, sides: int) -> np.ndarray:
    """Interior angle of a closed Koch polygon at each polygon vertex."""
    n = len(curve) // sides
    idx = np.arange(sides) * n
    z = curve.z
    out = z[(idx + 1) % len(z)] - z[idx]
    back = z[idx - 1] - z[idx]
    # ccw traversal: interior lies to the left, measured from the outgoing edge
    return np.mod(np.angle(back / out), 2 * np.pi)


def first_segment_elevation(theta: float, level: int) -> float:
    """Angle between the base and the first segment of the level-``level`` nodes."""
    z = nodes(theta, level).nodes
    return float(np.angle(z[1] - z[0]))
