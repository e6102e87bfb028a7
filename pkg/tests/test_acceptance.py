"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from minset.constants import (
    ahlfors_constant,
    c_star,
    certify_koch,
    gamma_of,
    hausdorff_dim,
    koch_A,
    koch_B,
    koch_bounds,
    ls_alpha,
    quasicircle_dim_bound,
    theta_crossovers,
    theta_dim_threshold,
    theta_tilde,
)
from minset.estimators import empirical_ahlfors, empirical_holder
from minset.koch import koch_curve, nodes, phi, phi_projection
from minset.potential import circle_curve, leja_points, log_distances, ls_fit, mid_gap_t, segment_curve, v_hat

KOCH_ANGLES = [0.002, 0.05, 0.1, math.pi / 8, math.pi / 6]


def verdict(number, ok, detail, started):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail} ({time.perf_counter() - started:.2f} s)"
    print("\n" + line)
    assert ok, line


def test_criterion_01_c_star():
    t0 = time.perf_counter()
    c = c_star()
    ok = abs(c - 1.06237) < 5e-6 and abs(ls_alpha(c) - 2) < 1e-12
    verdict(1, ok, f"c* = {c:.12f}, ls_alpha(c*) - 2 = {ls_alpha(c) - 2:.2e}", t0)


def test_criterion_02_theta_tilde():
    t0 = time.perf_counter()
    tt = theta_tilde()
    below = certify_koch(tt * 0.99).certified
    above = certify_koch(tt * 1.01).certified
    ok = 0.00370 <= tt <= 0.00386 and below and not above
    verdict(2, ok, f"theta_tilde = {tt:.10f}, certified below: {below}, above: {above}", t0)


def test_criterion_03_crossovers():
    t0 = time.perf_counter()
    a, b = theta_crossovers()
    ok = 0.085 <= a <= 0.095 and 0.115 <= b <= 0.125
    verdict(3, ok, f"theta0 = {a:.7f}, theta1 = {b:.7f}", t0)


def test_criterion_04_dimension_bound():
    t0 = time.perf_counter()
    q = quasicircle_dim_bound(2)
    th = theta_dim_threshold()
    d = hausdorff_dim(th)
    ok = abs(q - 10 / 9) <= 1e-15 and abs(th - 0.368044) < 1e-5 and abs(d - 10 / 9) < 1e-10
    verdict(4, ok, f"bound(2) = {q!r}, threshold = {th:.8f}, dim there = {d!r}", t0)


def test_criterion_05_limits():
    t0 = time.perf_counter()
    g, dim = gamma_of(math.pi / 4), hausdorff_dim(math.pi / 4)
    small = 1e-4
    dg, da, db = abs(gamma_of(small) - 1), abs(koch_A(small) - 1), abs(koch_B(small) - 1)
    ok = g == 0.5 and dim == 2.0 and dg < 1e-4 and da < 1e-3 and db < 1e-3
    verdict(5, ok, f"gamma(pi/4) = {g!r}, dim(pi/4) = {dim!r}, at 1e-4: {dg:.1e} {da:.1e} {db:.1e}", t0)


def test_criterion_06_sandwich():
    t0 = time.perf_counter()
    parts, ok = [], True
    for th in KOCH_ANGLES:
        h = empirical_holder(koch_curve(th, 10), gamma_of(th))
        good = koch_A(th) - 1e-9 <= h.ratio_min and h.ratio_max <= koch_B(th) + 1e-9
        ok &= good
        parts.append(f"{th:.4f}: {koch_A(th):.4f} <= [{h.ratio_min:.4f}, {h.ratio_max:.4f}] <= {koch_B(th):.4f}")
    verdict(6, ok, "; ".join(parts), t0)
    assert time.perf_counter() - t0 < 60


def test_criterion_07_ahlfors():
    t0 = time.perf_counter()
    parts, ok = [], True
    for th in KOCH_ANGLES:
        a = empirical_ahlfors(koch_curve(th, 10))
        bound = ahlfors_constant(koch_bounds(th))
        ok &= a.c_hat <= bound + 1e-9
        parts.append(f"{th:.4f}: {a.c_hat:.5f} <= {bound:.4f}")
    verdict(7, ok, "; ".join(parts), t0)
    assert time.perf_counter() - t0 < 120


def test_criterion_08_potential_oracles():
    t0 = time.perf_counter()
    circle = circle_curve(512)
    lc = leja_points(circle.z, 128)
    err = abs(v_hat(2.0, lc) - math.log(2))
    circ = ls_fit(circle, lc, mid_gap_t(circle, lc, 0.0), log_distances(3, 8)).slope

    seg = segment_curve()
    ls = leja_points(seg.z, 2048)
    d = log_distances(2, 7)
    end = ls_fit(seg, ls, 1.0, d)
    mid = ls_fit(seg, ls, 0.5, d)
    ok = (
        err < 0.02
        and 0.85 <= circ <= 1.15
        and 0.4 <= end.slope <= 0.6
        and 0.85 <= mid.slope <= 1.15
        and end.direction == 1
        and abs(mid.direction - 1j) < 1e-12
    )
    detail = f"|V(2) - log 2| = {err:.5f}, circle slope = {circ:.4f}, segment end = {end.slope:.4f}, mid = {mid.slope:.4f}"
    verdict(8, ok, detail, t0)
    assert time.perf_counter() - t0 < 30


def _strip_timestamp_line(data: bytes) -> bytes:
    return b"".join(line for line in data.splitlines(keepends=True) if not line.lstrip().startswith(b'"timestamp"'))


def test_criterion_09_determinism(tmp_path):
    t0 = time.perf_counter()
    commands = {
        "estimate-sampled": ["estimate", "--theta", "0.1", "--level", "10", "--mode", "sampled",
                             "--count", "300000", "--seed", "17"],
        "estimate-polygon": ["estimate", "--theta", "0.05", "--sides", "12", "--level", "4", "--seed", "3"],
        "ls": ["ls", "--theta", "0.002", "--leja-n", "128", "--seed", "17"],
    }
    ok, parts = True, []
    for name, argv in commands.items():
        blobs = []
        for run, threads in enumerate(("1", "4", "1", "4")):
            out = tmp_path / f"{name}-{run}.json"
            env = dict(os.environ, MINSET_THREADS=threads)
            proc = subprocess.run([sys.executable, "-m", "minset", *argv, "--json-out", str(out)],
                                  env=env, capture_output=True)
            assert proc.returncode == 0, proc.stderr.decode()
            blobs.append(_strip_timestamp_line(out.read_bytes()))
        same = all(b == blobs[0] for b in blobs)
        ok &= same
        parts.append(f"{name}: {'identical' if same else 'DIFFERENT'}")
    verdict(9, ok, "; ".join(parts), t0)
    assert time.perf_counter() - t0 < 60


def test_criterion_10_cross_construction():
    t0 = time.perf_counter()
    worst = 0.0
    for th in (0.05, math.pi / 6):
        for n in range(1, 11):
            ks = np.arange(1, 2**n)
            ref = nodes(th, n).nodes[1:-1]
            via_phi = phi(th, ks / 2**n)
            via_proj = np.array([phi_projection(th, k / 2**n, n) for k in ks])
            worst = max(worst, float(np.max(np.abs(via_phi - via_proj))), float(np.max(np.abs(via_phi - ref))))
    verdict(10, worst < 1e-10, f"max discrepancy = {worst:.3e}", t0)
    assert time.perf_counter() - t0 < 10
