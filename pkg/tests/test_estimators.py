import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minset.constants import ahlfors_constant, gamma_of, koch_A, koch_B, koch_bounds
from minset.errors import GuardError
from minset.estimators import Sampled, convergence_sweep, empirical_ahlfors, empirical_holder
from minset.koch import SampledCurve, koch_curve, pi_theta


def brute_holder(curve, gamma):
    lo, hi = math.inf, -math.inf
    for i, j in itertools.combinations(range(len(curve)), 2):
        r = abs(curve.z[i] - curve.z[j]) / abs(curve.t[i] - curve.t[j]) ** gamma
        lo, hi = min(lo, r), max(hi, r)
    return lo, hi


def _arc_diam(z, idx):
    pts = z[idx]
    return max(abs(a - b) for a in pts for b in pts)


def brute_ahlfors(curve, delta):
    z, m = curve.z, len(curve)
    best = -math.inf
    for i, k in itertools.combinations(range(m), 2):
        if abs(z[i] - z[k]) > delta:
            continue
        inner = list(range(i, k + 1))
        if curve.closed:
            outer = list(range(k, m)) + list(range(0, i + 1))
            di, do = _arc_diam(z, inner), _arc_diam(z, outer)
            if do < di or (do == di and len(outer) < len(inner)):
                middles = outer[1:-1]
            else:
                middles = inner[1:-1]
        else:
            middles = inner[1:-1]
        for j in middles:
            best = max(best, (abs(z[i] - z[j]) + abs(z[j] - z[k])) / abs(z[i] - z[k]))
    return best


def random_curve(seed, m, closed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=m) + 1j * rng.normal(size=m)
    t = np.sort(rng.random(m))
    return SampledCurve(t, z, closed)


def test_segment_is_isometric():
    t = np.linspace(0, 1, 101)
    seg = SampledCurve(t, t.astype(complex))
    h = empirical_holder(seg, 1.0)
    assert h.ratio_min == pytest.approx(1, abs=1e-12)
    assert h.ratio_max == pytest.approx(1, abs=1e-12)
    assert h.pair_count == 101 * 100 // 2
    assert empirical_ahlfors(seg, delta=2.0).c_hat == pytest.approx(1.0, abs=1e-12)


def test_right_angle_corner():
    t = np.linspace(0, 1, 21)
    z = np.where(t <= 0.5, 2 * t, 1 + 1j * (2 * t - 1))
    a = empirical_ahlfors(SampledCurve(t, z), delta=2.0)
    assert a.c_hat == pytest.approx(math.sqrt(2), abs=1e-12)
    assert a.arg_triple[1] == 0.5


@pytest.mark.parametrize("seed", range(4))
def test_holder_matches_brute_force(seed):
    c = random_curve(seed, 90, False)
    h = empirical_holder(c, 0.7)
    lo, hi = brute_holder(c, 0.7)
    assert h.ratio_min == pytest.approx(lo, rel=1e-14)
    assert h.ratio_max == pytest.approx(hi, rel=1e-14)
    i, j = (int(np.searchsorted(c.t, s)) for s in h.argmin_pair)
    assert abs(c.z[i] - c.z[j]) / abs(c.t[i] - c.t[j]) ** 0.7 == pytest.approx(lo, rel=1e-14)


@pytest.mark.parametrize("seed,closed", [(0, False), (1, False), (2, True), (3, True), (4, True)])
def test_ahlfors_matches_brute_force(seed, closed):
    c = random_curve(seed, 40, closed)
    delta = 1.5
    a = empirical_ahlfors(c, delta=delta)
    assert a.c_hat == pytest.approx(max(1.0, brute_ahlfors(c, delta)), rel=1e-14)


def test_ahlfors_closed_polygon_brute_force():
    c = pi_theta(0.3, sides=5, level=2)
    assert empirical_ahlfors(c, 0.8).c_hat == pytest.approx(brute_ahlfors(c, 0.8), rel=1e-14)


def test_ahlfors_no_admissible_triple():
    c = SampledCurve([0, 0.5, 1], [0, 1, 2])
    with pytest.raises(GuardError):
        empirical_ahlfors(c, delta=0.5)


def test_argument_checks():
    c = koch_curve(0.1, 2)
    with pytest.raises(ValueError):
        empirical_holder(c, 0.0)
    with pytest.raises(ValueError):
        empirical_holder(c, 1.5)
    with pytest.raises(ValueError):
        empirical_ahlfors(c, delta=0.0)
    with pytest.raises(ValueError):
        Sampled(1, 0)


def test_exhaustive_guard():
    c = koch_curve(0.1, 13)
    with pytest.raises(GuardError):
        empirical_ahlfors(c)
    a = empirical_ahlfors(c, sample=Sampled(seed=5, count=20_000))
    assert a.c_hat >= 1 and a.mode.startswith("sampled")


# the stated lower constant A(θ) holds on the nodes only up to about 0.6577
SANDWICH_RANGE = st.floats(min_value=1e-3, max_value=0.65)


@settings(max_examples=20, deadline=None)
@given(SANDWICH_RANGE, st.integers(min_value=1, max_value=7))
def test_sandwich_property(theta, level):
    h = empirical_holder(koch_curve(theta, level), gamma_of(theta))
    assert koch_A(theta) - 1e-9 <= h.ratio_min
    assert h.ratio_max <= koch_B(theta) + 1e-9


@settings(max_examples=20, deadline=None)
@given(SANDWICH_RANGE, st.integers(min_value=4, max_value=7))
def test_ahlfors_property(theta, level):
    a = empirical_ahlfors(koch_curve(theta, level))
    assert 1.0 <= a.c_hat <= ahlfors_constant(koch_bounds(theta)) + 1e-9


def test_sandwich_upper_bound_on_whole_range():
    for theta in np.linspace(0.6, math.pi / 4, 12):
        assert empirical_holder(koch_curve(theta, 8), gamma_of(theta)).ratio_max <= koch_B(theta) + 1e-9


@pytest.mark.parametrize("theta", [0.66, 0.7, 0.75])
def test_lower_constant_fails_near_right_angle(theta):
    # recorded counterexample: nearly touching sub-arcs push ratio_min below A(θ)
    h = empirical_holder(koch_curve(theta, 6), gamma_of(theta))
    assert h.ratio_min < koch_A(theta)


def test_lower_constant_crossover():
    def gap(theta):
        return empirical_holder(koch_curve(theta, 6), gamma_of(theta)).ratio_min - koch_A(theta)

    assert gap(0.6577072) > 0 > gap(0.6577073)


def test_three_point_bound_fails_next_to_right_angle():
    assert empirical_ahlfors(koch_curve(0.7743, 8)).c_hat < ahlfors_constant(koch_bounds(0.7743))
    assert empirical_ahlfors(koch_curve(0.7744, 8)).c_hat > ahlfors_constant(koch_bounds(0.7744))


def test_pi_over_6_holder_baseline():
    h = empirical_holder(koch_curve(math.pi / 6, 8), gamma_of(math.pi / 6))
    assert h.ratio_min == pytest.approx(0.4834590783544264, rel=1e-12)
    assert h.ratio_max == pytest.approx(1.0120921947926993, rel=1e-12)
    assert h.ratio_max / h.ratio_min < 2.1


def test_pi_over_4_corner_and_self_contact():
    a = empirical_ahlfors(koch_curve(math.pi / 4, 8))
    assert a.c_hat >= math.sqrt(2) - 0.01
    # distinct nodes coincide at this angle, so the sampled curve is not Jordan
    assert a.self_touching and math.isinf(a.c_hat)


def test_pi_over_8_right_angle():
    a = empirical_ahlfors(koch_curve(math.pi / 8, 8))
    assert a.c_hat == pytest.approx(math.sqrt(2), abs=1e-9)
    assert not a.self_touching


def test_sweep_monotone():
    rows = convergence_sweep(0.2, [4, 6, 8])
    lo = [r.holder.ratio_min for r in rows]
    hi = [r.holder.ratio_max for r in rows]
    c = [r.ahlfors.c_hat for r in rows]
    assert all(b <= a + 1e-15 for a, b in zip(lo, lo[1:]))
    assert all(b >= a - 1e-15 for a, b in zip(hi, hi[1:]))
    assert all(b >= a - 1e-15 for a, b in zip(c, c[1:]))
    with pytest.raises(ValueError):
        convergence_sweep(0.2, [4, 2])


def test_sampled_within_exhaustive():
    c = koch_curve(0.3, 9)
    g = gamma_of(0.3)
    ex = empirical_holder(c, g)
    sm = empirical_holder(c, g, Sampled(seed=1, count=50_000))
    assert ex.ratio_min <= sm.ratio_min and sm.ratio_max <= ex.ratio_max
    assert sm.pair_count == 50_000
    exa = empirical_ahlfors(c)
    sma = empirical_ahlfors(c, sample=Sampled(seed=1, count=50_000))
    assert sma.c_hat <= exa.c_hat


def test_closed_sampled_within_exhaustive():
    c = pi_theta(0.1, 12, 4)
    exa = empirical_ahlfors(c)
    sma = empirical_ahlfors(c, sample=Sampled(seed=3, count=40_000))
    assert 1.0 <= sma.c_hat <= exa.c_hat


@pytest.mark.parametrize("closed", [False, True])
def test_thread_count_does_not_change_results(monkeypatch, closed):
    c = pi_theta(0.2, 12, 4) if closed else koch_curve(0.2, 9)
    out = []
    for threads in ("1", "4"):
        monkeypatch.setenv("MINSET_THREADS", threads)
        out.append((
            empirical_holder(c, 0.9),
            empirical_holder(c, 0.9, Sampled(seed=9, count=100_000)),
            empirical_ahlfors(c),
            empirical_ahlfors(c, sample=Sampled(seed=9, count=100_000)),
        ))
    assert out[0] == out[1]


def test_seed_changes_sample():
    c = koch_curve(0.2, 9)
    a = empirical_holder(c, 0.9, Sampled(seed=1, count=1000))
    b = empirical_holder(c, 0.9, Sampled(seed=2, count=1000))
    assert (a.ratio_min, a.argmin_pair) != (b.ratio_min, b.argmin_pair)
