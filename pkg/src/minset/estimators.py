"""Empirical Hölder ratios and three-point constants measured on curve samples.

Every estimate here is an inner estimate: extremes over finitely many pairs
or triples can only under-report the true constants of the curve.

Work is split into fixed chunks of rows (exhaustive) or draws (sampled).
Each sampled chunk gets its own counter-derived seed, and chunk results are
reduced in chunk order, so the answer does not depend on how many worker
threads ran (``MINSET_THREADS``).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GuardError
from .geometry import diameter
from .koch import SampledCurve, koch_curve

EXHAUSTIVE_MAX = 4097
ROW_CHUNK = 64
DRAW_CHUNK = 1 << 15


@dataclass(frozen=True)
class Sampled:
    """Random-subset mode: ``count`` pairs or triples drawn from ``seed``."""

    seed: int
    count: int

    def __post_init__(self):
        if self.count <= 0:
            raise ValueError("sample count must be positive")


def worker_count() -> int:
    raw = os.environ.get("MINSET_THREADS")
    if raw:
        return max(1, int(raw))
    return min(4, os.cpu_count() or 1)


def _run_chunks(fn, chunks):
    workers = min(worker_count(), len(chunks))
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _draw_chunks(count: int):
    return [(c, min(DRAW_CHUNK, count - c * DRAW_CHUNK)) for c in range(-(-count // DRAW_CHUNK))]


def _mode_name(sample: Optional[Sampled]) -> str:
    return "exhaustive" if sample is None else f"sampled(seed={sample.seed}, count={sample.count})"


# --------------------------------------------------------------------- Hölder


@dataclass(frozen=True)
class HolderEstimate:
    gamma_used: float
    ratio_min: float
    ratio_max: float
    argmin_pair: tuple[float, float]
    argmax_pair: tuple[float, float]
    pair_count: int
    mode: str = "exhaustive"


def empirical_holder(
    curve: SampledCurve, gamma: float, sample: Optional[Sampled] = None
) -> HolderEstimate:
    """Extremes of |z_i - z_j| / |t_i - t_j|**gamma over pairs of samples."""
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    t, z = curve.t, curve.z
    m = t.size
    if m < 2:
        raise ValueError("need at least 2 samples")
    if np.unique(t).size != m:
        raise ValueError("duplicate parameter values")

    if sample is None:
        def work(r0):
            rows = np.arange(r0, min(r0 + ROW_CHUNK, m - 1))
            cols = np.arange(m)
            keep = cols[None, :] > rows[:, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.abs(z[rows, None] - z[None, :]) / np.abs(t[rows, None] - t[None, :]) ** gamma
            lo = np.where(keep, r, np.inf)
            hi = np.where(keep, r, -np.inf)
            a, b = np.unravel_index(np.argmin(lo), lo.shape), np.unravel_index(np.argmax(hi), hi.shape)
            return (lo[a], (rows[a[0]], a[1])), (hi[b], (rows[b[0]], b[1]))

        parts = _run_chunks(work, list(range(0, m - 1, ROW_CHUNK)))
        pair_count = m * (m - 1) // 2
    else:
        def work(chunk):
            index, n = chunk
            rng = _chunk_rng(sample.seed, index)
            i = rng.integers(0, m, n)
            j = rng.integers(0, m - 1, n)
            j = j + (j >= i)
            r = np.abs(z[i] - z[j]) / np.abs(t[i] - t[j]) ** gamma
            a, b = int(np.argmin(r)), int(np.argmax(r))
            return (r[a], (i[a], j[a])), (r[b], (i[b], j[b]))

        parts = _run_chunks(work, _draw_chunks(sample.count))
        pair_count = sample.count

    lo_val, lo_arg = parts[0][0]
    hi_val, hi_arg = parts[0][1]
    for (lv, la), (hv, ha) in parts[1:]:
        if lv < lo_val:
            lo_val, lo_arg = lv, la
        if hv > hi_val:
            hi_val, hi_arg = hv, ha

    def pair(ij):
        i, j = sorted(int(k) for k in ij)
        return (float(t[i]), float(t[j]))

    return HolderEstimate(
        gamma_used=float(gamma),
        ratio_min=float(lo_val),
        ratio_max=float(hi_val),
        argmin_pair=pair(lo_arg),
        argmax_pair=pair(hi_arg),
        pair_count=int(pair_count),
        mode=_mode_name(sample),
    )


# -------------------------------------------------------------- three points


@dataclass(frozen=True)
class AhlforsEstimate:
    c_hat: float
    delta_used: float
    arg_triple: tuple[float, float, float]
    triple_count: int
    mode: str = "exhaustive"
    self_touching: bool = False


def _distance_matrix(z: np.ndarray) -> np.ndarray:
    return np.abs(z[:, None] - z[None, :])


def _arc_diameters(dist: np.ndarray) -> np.ndarray:
    """table[L, s] = diameter of the forward arc s, s+1, ..., s+L (indices mod m)."""
    m = dist.shape[0]
    table = np.zeros((m, m))
    s = np.arange(m)
    for length in range(1, m):
        prev = table[length - 1]
        table[length] = np.maximum(np.maximum(prev, np.roll(prev, -1)), dist[s, (s + length) % m])
    return table


def _inner_arc_chosen(table, i, k, m):
    """For i < k: True when the arc i..k (not the wrap-around k..i) has the smaller diameter."""
    din = table[k - i, i]
    dout = table[m - (k - i), k]
    # ties go to the arc with fewer samples, then to the inner arc
    return (din < dout) | ((din == dout) & (k - i <= m - (k - i)))


def _ratio(num, den):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)


def empirical_ahlfors(
    curve: SampledCurve,
    delta: Optional[float] = None,
    sample: Optional[Sampled] = None,
) -> AhlforsEstimate:
    """Largest (|z1-z2| + |z2-z3|) / |z1-z3| over admissible sample triples.

    Admissible: |z1 - z3| <= delta and z2 strictly inside the connecting
    arc. For open curves that arc is the parameter interval; for closed
    curves it is whichever of the two arcs has the smaller sample diameter.
    ``delta`` defaults to a quarter of the curve diameter. Coincident samples
    with distinct parameters (a non-Jordan sampling) give an infinite ratio.
    """
    z = curve.z
    m = z.size
    if m < 3:
        raise ValueError("need at least 3 samples")
    diam = diameter(z)
    delta = diam / 4.0 if delta is None else float(delta)
    if not delta > 0:
        raise ValueError("delta must be positive")
    if sample is None and m > EXHAUSTIVE_MAX:
        raise GuardError(f"exhaustive triples capped at {EXHAUSTIVE_MAX} samples, got {m}; use sampled mode")
    if curve.closed and m > EXHAUSTIVE_MAX:
        raise GuardError(f"closed-curve arc tables capped at {EXHAUSTIVE_MAX} samples, got {m}")

    dist = _distance_matrix(z) if (sample is None or curve.closed) else None
    table = _arc_diameters(dist) if curve.closed else None

    if sample is None:
        fn = _closed_rows if curve.closed else _open_rows
        parts = _run_chunks(lambda r0: fn(dist, table, delta, r0, min(r0 + ROW_CHUNK, m)),
                            list(range(0, m, ROW_CHUNK)))
    else:
        fn = _closed_draws if curve.closed else _open_draws
        parts = _run_chunks(lambda ch: fn(z, dist, table, delta, sample.seed, ch),
                            _draw_chunks(sample.count))

    best, arg, count = -math.inf, None, 0
    for val, a, n in parts:
        count += n
        if a is not None and val > best:
            best, arg = val, a
    if arg is None:
        raise GuardError(f"no admissible triple with |z1 - z3| <= {delta}")
    i, j, k = arg
    return AhlforsEstimate(
        c_hat=max(1.0, float(best)),  # triangle inequality; absorbs rounding on collinear triples
        delta_used=delta,
        arg_triple=(float(curve.t[i]), float(curve.t[j]), float(curve.t[k])),
        triple_count=int(count),
        mode=_mode_name(sample),
        self_touching=bool(math.isinf(best)),
    )


def _open_rows(dist, table, delta, r0, r1):
    m = dist.shape[0]
    best, arg, count = -math.inf, None, 0
    for i in range(r0, min(r1, m - 2)):
        s = dist[i, i + 1:, None] + dist[i + 1:, i + 1:]
        np.maximum.accumulate(s, axis=0, out=s)
        inner = np.diagonal(s, offset=1)  # entry r: z3 index i+2+r, z2 over i+1..i+1+r
        den = dist[i, i + 2:]
        ok = den <= delta
        if not ok.any():
            continue
        count += int(np.sum((np.arange(den.size) + 1)[ok]))
        ratio = np.where(ok, _ratio(inner, den), -np.inf)
        r = int(np.argmax(ratio))
        if ratio[r] > best:
            k = i + 2 + r
            j = i + 1 + int(np.argmax(dist[i, i + 1:k] + dist[i + 1:k, k]))
            best, arg = float(ratio[r]), (i, j, k)
    return best, arg, count


def _closed_rows(dist, table, delta, r0, r1):
    m = dist.shape[0]
    best, arg, count = -math.inf, None, 0
    for i in range(r0, min(r1, m - 1)):
        ks = np.arange(i + 1, m)
        den = dist[i, ks]
        ok = den <= delta
        if not ok.any():
            continue
        s = dist[i, :, None] + dist
        inner_arc = _inner_arc_chosen(table, i, ks, m)
        pre = np.maximum.accumulate(s[i + 1:], axis=0)
        inner = np.full(ks.size, -np.inf)
        if ks.size > 1:
            inner[1:] = pre[np.arange(ks.size - 1), ks[1:]]
        suf = np.maximum.accumulate(s[::-1], axis=0)[::-1]
        outer = np.full(ks.size, -np.inf)
        outer[:-1] = suf[ks[:-1] + 1, ks[:-1]]
        if i > 0:
            outer = np.maximum(outer, s[:i, ks].max(axis=0))
        num = np.where(inner_arc, inner, outer)
        n_inside = np.where(inner_arc, ks - i - 1, m - (ks - i) - 1)
        ok &= n_inside > 0
        if not ok.any():
            continue
        count += int(n_inside[ok].sum())
        ratio = np.where(ok, _ratio(num, den), -np.inf)
        r = int(np.argmax(ratio))
        if ratio[r] > best:
            k = int(ks[r])
            js = np.arange(i + 1, k) if inner_arc[r] else np.r_[np.arange(k + 1, m), np.arange(0, i)]
            j = int(js[np.argmax(dist[i, js] + dist[js, k])])
            best, arg = float(ratio[r]), (i, j, k)
    return best, arg, count


def _sorted_triples(rng, m, n):
    tri = np.sort(rng.integers(0, m, (n, 3)), axis=1)
    distinct = (tri[:, 0] < tri[:, 1]) & (tri[:, 1] < tri[:, 2])
    return tri[distinct]


def _best_of(ratio, i, j, k, ok):
    if not ok.any():
        return -math.inf, None, 0
    ratio = np.where(ok, ratio, -np.inf)
    r = int(np.argmax(ratio))
    return float(ratio[r]), (int(i[r]), int(j[r]), int(k[r])), int(ok.sum())


def _open_draws(z, dist, table, delta, seed, chunk):
    index, n = chunk
    tri = _sorted_triples(_chunk_rng(seed, index), z.size, n)
    i, j, k = tri.T
    den = np.abs(z[i] - z[k])
    num = np.abs(z[i] - z[j]) + np.abs(z[j] - z[k])
    return _best_of(_ratio(num, den), i, j, k, den <= delta)


def _closed_draws(z, dist, table, delta, seed, chunk):
    index, n = chunk
    m = z.size
    tri = _sorted_triples(_chunk_rng(seed, index), m, n)
    a, b, c = tri.T
    # each sorted triple yields three (endpoints, middle) configurations
    ends_lo = np.r_[a, a, b]
    ends_hi = np.r_[c, b, c]
    mid = np.r_[b, c, a]
    mid_inside = np.r_[np.ones(a.size, bool), np.zeros(2 * a.size, bool)]
    admissible = _inner_arc_chosen(table, ends_lo, ends_hi, m) == mid_inside
    den = dist[ends_lo, ends_hi]
    num = dist[ends_lo, mid] + dist[mid, ends_hi]
    return _best_of(_ratio(num, den), ends_lo, mid, ends_hi, admissible & (den <= delta))


# ------------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepRow:
    level: int
    holder: HolderEstimate
    ahlfors: AhlforsEstimate


def convergence_sweep(
    theta: float,
    levels,
    delta: Optional[float] = None,
    sample: Optional[Sampled] = None,
) -> list[SweepRow]:
    """Hölder and three-point estimates on the Koch nodes at each level."""
    from .constants import gamma_of

    levels = [int(n) for n in levels]
    if not levels:
        raise ValueError("levels must be non-empty")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    gamma = gamma_of(theta)
    rows = []
    for level in levels:
        curve = koch_curve(theta, level)
        rows.append(SweepRow(level, empirical_holder(curve, gamma, sample),
                             empirical_ahlfors(curve, delta, sample)))
    return rows
