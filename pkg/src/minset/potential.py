"""Discrete logarithmic potentials on sampled curves.

The Green function with pole at infinity of a compact set K is approximated
by the normalized Leja polynomial

    V_hat(z) = max(0, (1/N) * (log|w_N(z)| - log ||w_N||_K)),
    w_N(z) = prod_{j<N} (z - p_j),

with p_j greedy Leja points drawn from a candidate sample of K and the sup
norm taken over the same candidates. All products are carried as sums of
logarithms. These are diagnostics: no rigorous bound links V_hat to V_K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import FitAbortedError
from .geometry import point_in_polygon
from .koch import SampledCurve

NOISE_FLOOR = 1e-6
TIE_TOL = 1e-12
ON_CURVE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LejaSet:
    points: np.ndarray  # complex, in greedy order
    log_sup_norms: np.ndarray  # entry k: log max_K prod_{j<=k} |z - p_j|
    indices: np.ndarray  # positions of ``points`` in the candidate array

    def __len__(self) -> int:
        return self.points.size


def _first_max(values: np.ndarray) -> int:
    # lowest index among values equal to the maximum up to rounding
    top = values.max()
    return int(np.flatnonzero(values >= top - TIE_TOL * max(1.0, abs(top)))[0])


def leja_points(candidates, n: int) -> LejaSet:
    """Greedy Leja sequence of length ``n`` from a finite candidate set."""
    c = np.asarray(candidates, dtype=complex).ravel()
    n = int(n)
    if n < 2:
        raise ValueError("need at least 2 Leja points")
    if n > c.size:
        raise ValueError(f"asked for {n} points from {c.size} candidates")
    if np.unique(c).size != c.size:
        raise ValueError("candidate points must be distinct")

    first = _first_max(np.abs(c - c.mean()))
    chosen = [first]
    taken = np.zeros(c.size, dtype=bool)
    taken[first] = True
    log_prod = np.zeros(c.size)
    sups = np.empty(n)
    with np.errstate(divide="ignore"):
        log_prod += np.log(np.abs(c - c[first]))
    sups[0] = log_prod.max()
    for k in range(1, n):
        nxt = _first_max(np.where(taken, -np.inf, log_prod))
        chosen.append(nxt)
        taken[nxt] = True
        with np.errstate(divide="ignore"):
            log_prod += np.log(np.abs(c - c[nxt]))
        sups[k] = log_prod.max()
    idx = np.array(chosen)
    return LejaSet(points=c[idx], log_sup_norms=sups, indices=idx)


def v_hat(z, leja: LejaSet, n: Optional[int] = None):
    """Leja-polynomial surrogate of the Green function; 0 on the Leja points."""
    n = len(leja) if n is None else int(n)
    if not 2 <= n <= len(leja):
        raise ValueError(f"n must lie in [2, {len(leja)}]")
    zz = np.asarray(z, dtype=complex)
    flat = zz.reshape(-1)
    out = np.empty(flat.size)
    p = leja.points[:n]
    for s in range(0, flat.size, 4096):
        block = flat[s:s + 4096]
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(block[:, None] - p[None, :])).sum(axis=1)
        out[s:s + 4096] = (logs - leja.log_sup_norms[n - 1]) / n
    out = np.maximum(out, 0.0)
    return float(out[0]) if zz.ndim == 0 else out.reshape(zz.shape)


def inverted_leja(curve: SampledCurve, n: int) -> LejaSet:
    """Leja set of the image of ``curve`` under z -> 1/z."""
    if np.any(curve.z == 0):
        raise ValueError("curve passes through the inversion centre")
    return leja_points(1.0 / curve.z, n)


def tilde_v_hat(
    z,
    curve: SampledCurve,
    leja_outer: LejaSet,
    leja_inner: LejaSet,
    n: Optional[int] = None,
    tol: float = ON_CURVE_TOL,
):
    """Glued surrogate: outside uses ``leja_outer``; inside evaluates at 1/z on the inverted curve."""
    if not curve.closed:
        raise ValueError("glued potential needs a closed curve")
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(zz == 0):
        raise ValueError("z = 0 is the pole of the glued function")
    near = np.min(np.abs(zz[:, None] - curve.z[None, :]), axis=1) <= tol
    inside = point_in_polygon(zz, curve.z) & ~near
    outside = ~inside & ~near
    out = np.zeros(zz.size)
    if outside.any():
        out[outside] = v_hat(zz[outside], leja_outer, n)
    if inside.any():
        out[inside] = v_hat(1.0 / zz[inside], leja_inner, n)
    return float(out[0]) if np.ndim(z) == 0 else out


@dataclass(frozen=True, eq=False)
class LsFit:
    base_t: float
    base_point: complex
    direction: complex
    distances: np.ndarray
    values: np.ndarray
    used: np.ndarray  # mask of probes above the noise floor
    slope: float
    intercept: float
    r_squared: float


def outward_direction(curve: SampledCurve, index: int, side: int = 1) -> complex:
    """Unit probe direction at sample ``index``.

    Interior samples use the normal to the chord through the two neighbours;
    closed curves orient it away from the bounded component, open curves take
    the left normal (``side=1``) or the right one (``side=-1``). At the ends
    of an open curve the direction continues the end chord outward.
    """
    z = curve.z
    m = z.size
    if not curve.closed and index in (0, m - 1):
        d = z[0] - z[1] if index == 0 else z[-1] - z[-2]
        return d / abs(d)
    chord = z[(index + 1) % m] - z[index - 1]
    normal = 1j * chord / abs(chord)
    if curve.closed:
        h = 1e-6 * abs(chord)
        if point_in_polygon(z[index] + h * normal, z)[0]:
            normal = -normal
        return normal
    return normal if side >= 0 else -normal


def ls_fit(
    curve: SampledCurve,
    leja: LejaSet,
    base_t: float,
    distances: Sequence[float],
    n: Optional[int] = None,
    direction: Optional[complex] = None,
    side: int = 1,
) -> LsFit:
    """Least-squares slope of log V_hat against log distance along a probe ray."""
    d = np.asarray(distances, dtype=float)
    if d.size < 4:
        raise ValueError("need at least 4 distances")
    if np.any(d <= 0) or np.any(d > 1) or np.any(np.diff(d) >= 0):
        raise ValueError("distances must lie in (0, 1] and strictly decrease")
    index = int(np.argmin(np.abs(curve.t - base_t)))
    u = outward_direction(curve, index, side) if direction is None else complex(direction) / abs(direction)
    base = complex(curve.z[index])
    values = np.asarray(v_hat(base + d * u, leja, n))
    used = values >= NOISE_FLOOR
    if used.sum() < 3:
        raise FitAbortedError(
            f"only {int(used.sum())} probes above the noise floor at t={curve.t[index]:.6g}"
        )
    x, y = np.log(d[used]), np.log(values[used])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss if ss > 0 else 1.0
    return LsFit(float(curve.t[index]), base, u, d, values, used, float(slope), float(intercept), r2)


@dataclass(frozen=True)
class LsExponentEstimate:
    exponent: float
    fits: list = field(default_factory=list)
    aborted: list = field(default_factory=list)  # (base_t, message)


def ls_exponent_estimate(
    curve: SampledCurve,
    leja: LejaSet,
    base_points: Sequence[float],
    distances: Sequence[float],
    n: Optional[int] = None,
    side: int = 1,
) -> LsExponentEstimate:
    """Worst local decay exponent over the base points.

    The uniform lower bound V >= C dist^alpha is governed by the slowest
    decay, i.e. the largest fitted slope.
    """
    if len(base_points) == 0:
        raise ValueError("base_points must be non-empty")
    fits, aborted = [], []
    for t in base_points:
        try:
            fits.append(ls_fit(curve, leja, t, distances, n, side=side))
        except FitAbortedError as exc:
            aborted.append((float(t), str(exc)))
    if not fits:
        raise FitAbortedError("every fit aborted")
    return LsExponentEstimate(max(f.slope for f in fits), fits, aborted)


# ------------------------------------------------------------ oracle curves


def circle_curve(m: int = 512) -> SampledCurve:
    k = np.arange(m)
    return SampledCurve(k / m, np.exp(2j * np.pi * k / m), closed=True)


def segment_curve(m: int = 8193) -> SampledCurve:
    """[-1, 1] with cosine-spaced samples (dense near the ends), t uniform."""
    t = np.linspace(0.0, 1.0, m)
    x = -np.cos(np.pi * t)
    if m % 2:
        x[m // 2] = 0.0
    return SampledCurve(t, x.astype(complex), closed=False)


def green_disk(z):
    return np.log(np.abs(z))


def green_segment(z):
    z = np.asarray(z, dtype=complex)
    w = z + np.sqrt(z - 1) * np.sqrt(z + 1)
    return np.log(np.abs(w))


def log_distances(k_first: int, k_last: int) -> np.ndarray:
    return 2.0 ** -np.arange(k_first, k_last + 1, dtype=float)


def mid_gap_t(curve: SampledCurve, leja: LejaSet, near_t: float) -> float:
    """Parameter of the sample near ``near_t`` farthest from the Leja points among its neighbours.

    Probes launched from a Leja point start in the logarithmic well of the
    surrogate; a sample between two Leja points avoids it.
    """
    m = len(curve)
    i0 = int(np.argmin(np.abs(curve.t - near_t)))
    span = max(1, int(math.ceil(m / len(leja))))
    window = np.arange(i0 - span, i0 + span + 1)
    if curve.closed:
        window %= m
    else:
        window = window[(window >= 0) & (window < m)]
    gap = np.min(np.abs(curve.z[window, None] - leja.points[None, :]), axis=1)
    return float(curve.t[window[int(np.argmax(gap))]])
