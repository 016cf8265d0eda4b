"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines.  Every tolerance is pinned here, not configured elsewhere; all
quantities are prefix-relative finite-horizon surrogates.
"""

import functools
import math
import time
from fractions import Fraction

import numpy as np

from seqdist import (
    ALMOST_CONVERGENT,
    NOT_ALMOST_CONVERGENT,
    Membership,
    Partition,
    WindowSchedule,
    affine_combo,
    banach_limit_bounds,
    banach_limit_simply,
    banach_limit_via_quantization,
    count_extrema,
    cross_validate,
    detect_sublimits,
    fixture,
    interval_about,
    is_simply_distributed,
    limit_point_weight,
    lorentz_verdict,
    materialize,
    naive_count_extrema,
    quantize,
    set_weight,
    shift,
    sublimit_weight,
)

LN2 = math.log(2.0)


def criterion(num, text):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {num:>2}: FAIL - {text}")
                raise
            print(f"ACCEPTANCE {num:>2}: PASS - {text}")

        return wrapper

    return deco


@criterion(1, "count_extrema matches the brute-force oracle on 500 random memberships")
def test_criterion_1_oracle_equivalence():
    rng = np.random.default_rng(20250808)
    started = time.monotonic()
    sizes = list(rng.integers(1, 257, size=488)) + list(rng.integers(1200, 2001, size=12))
    sizes[-1] = 2000  # make sure the stated bound is exercised
    assert len(sizes) == 500
    for horizon in sizes:
        horizon = int(horizon)
        density = rng.uniform(0.0, 1.0)
        bits = (rng.random(horizon) < density).astype(np.int64)
        m = Membership(bits=bits, horizon=horizon)
        for n in range(1, horizon + 1):
            assert count_extrema(m, n) == naive_count_extrema(m, n)
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"oracle sweep took {elapsed:.1f}s"


@criterion(2, "transients weigh 0 (w_u <= n0/n_tail) and the constant weighs exactly 1")
def test_criterion_2_nonmeasure_weights():
    horizon = 10_000
    region = interval_about(1.0, 0.1, 1.0)
    for n0 in (1, 10, 100):
        p = materialize(fixture("F1", n0=n0), horizon)
        w = set_weight(p, region)
        assert isinstance(w.w_l_hat, Fraction) and isinstance(w.w_u_hat, Fraction)
        assert w.w_l_hat == 0
        assert w.w_u_hat <= Fraction(n0, w.n_tail)
    w2 = set_weight(materialize(fixture("F2"), horizon), region)
    assert w2.w_l_hat == 1 and w2.w_u_hat == 1


@criterion(3, "F4 simple sum is exactly 1/3 on period-aligned windows; Cesaro agrees")
def test_criterion_3_exact_thirds():
    horizon = 30_000
    sched = WindowSchedule(tuple(24 * 2**t for t in range(9)))  # all divisible by 3
    p = materialize(fixture("F4"), horizon)
    report = is_simply_distributed(p, 0.0, sched)
    assert report.simply_distributed
    by_value = dict(zip(report.values, report.weights))
    assert by_value[1.0].w_l_hat == Fraction(1, 3) == by_value[1.0].w_u_hat
    assert by_value[0.0].w_l_hat == Fraction(2, 3) == by_value[0.0].w_u_hat
    est = banach_limit_simply(report)
    assert est.point == 1 / 3
    lv = lorentz_verdict(p, sched)
    n_tail = lv.n_tail
    assert abs(lv.estimate - est.point) <= 2 / n_tail


@criterion(4, "alternating sequence: almost-convergent with estimate and gap at 0")
def test_criterion_4_lorentz_positive():
    lv = lorentz_verdict(materialize(fixture("F3"), 10_000))
    assert lv.verdict == ALMOST_CONVERGENT
    assert abs(lv.estimate) <= 1 / lv.n_tail
    assert lv.uniform_gap <= 2 / lv.n_tail


@criterion(5, "doubling blocks: not-almost-convergent with uniform gap exactly 1")
def test_criterion_5_lorentz_negative():
    sched = WindowSchedule(tuple(16 * 2**t for t in range(8)))  # up to 2**11
    lv = lorentz_verdict(materialize(fixture("F6"), 2**14), sched)
    assert lv.verdict == NOT_ALMOST_CONVERGENT
    assert all(gap == 1.0 for gap in lv.gap_trend)
    assert lv.uniform_gap == 1.0


@criterion(6, "quantization error stays strictly below the mesh on every fixture")
def test_criterion_6_quantization_error():
    def refined_top(bound, cells):
        pts = list(np.linspace(-bound, bound, cells + 1))
        pts.insert(-1, (pts[-2] + pts[-1]) / 2)
        return Partition(tuple(pts))

    for name in ("F1", "F2", "F3", "F4", "F5", "F6", "F7"):
        p = materialize(fixture(name), 4096)
        for cells in (3, 8, 32):
            part = refined_top(p.bound, cells)
            q = quantize(p, part)
            assert float(np.max(np.abs(q.values - p.values))) < part.mesh
    p2 = materialize(fixture("F2"), 4096)
    part = Partition((-1.0, 0.5, 1.0))
    q = quantize(p2, part)
    assert float(np.max(np.abs(q.values - p2.values))) == 0.5 < part.mesh


@criterion(7, "golden rotation quantizes to 0.5 within 1/64 + 0.01, consistent with Cesaro")
def test_criterion_7_properly_distributed():
    record = cross_validate(fixture("F5"), 100_000, mesh_schedule=(1 / 16, 1 / 64))
    point = record.quantization.point
    assert abs(point - 0.5) <= 1 / 64 + 0.01
    assert abs(point - record.lorentz.estimate) <= record.combined_bound
    assert record.consistent


@criterion(8, "dyadic harmonic: per-value weights, complement at 0, estimates near ln 2")
def test_criterion_8_unique_limit_point(f7_prefix_large):
    started = time.monotonic()
    horizon = 2**20
    sched = WindowSchedule.geometric(horizon)
    known = []
    for j in range(1, 11):
        eps = (1.0 / j - 1.0 / (j + 1)) / 2
        w = sublimit_weight(f7_prefix_large, 1.0 / j, eps, sched)
        n_tail = w.n_tail
        assert abs(float(w.midpoint) - 2.0**-j) <= 2.0**-j * 0.1 + 1 / n_tail
        known.append((1.0 / j, w))
    complement = limit_point_weight(known, 0.0)
    assert float(complement.w_u_hat) <= 0.01
    lv = lorentz_verdict(f7_prefix_large, sched)
    assert abs(lv.estimate - LN2) <= 0.01
    est = banach_limit_via_quantization(fixture("F7"), horizon, (1 / 16, 1 / 128), sched)
    assert abs(est.point - LN2) <= 0.01
    elapsed = time.monotonic() - started
    assert elapsed < 120.0, f"dyadic-harmonic sweep took {elapsed:.1f}s"


@criterion(9, "Cesaro estimate sits inside the weight-bounds interval (+/- 0.02 * 2M)")
def test_criterion_9_bounds_sandwich(f5_prefix_large, f7_prefix_large):
    cases = [
        ("F3", materialize(fixture("F3"), 10_000), 0.1),
        ("F4", materialize(fixture("F4"), 30_000), 0.1),
        ("F5", f5_prefix_large, 0.1),
        ("F7", f7_prefix_large, 0.01),
    ]
    for name, prefix, eps in cases:
        sched = WindowSchedule.geometric(prefix.horizon)
        report = detect_sublimits(prefix, eps, schedule=sched)
        lower, upper = banach_limit_bounds(
            [(c.center, c.weight) for c in report.clusters]
        )
        slack = 0.02 * 2.0 * prefix.bound
        estimate = lorentz_verdict(prefix, sched).estimate
        assert lower - slack <= estimate <= upper + slack, name


@criterion(10, "estimator axioms: shift invariance, linearity, exact normalization")
def test_criterion_10_banach_axioms():
    for name in ("F3", "F4", "F5"):
        spec = fixture(name)
        sched = WindowSchedule.geometric(30_000)
        base = lorentz_verdict(materialize(spec, 30_000), sched)
        moved = lorentz_verdict(materialize(shift(spec, 1), 30_000), sched)
        assert abs(base.estimate - moved.estimate) <= 2 * spec.bound / base.n_tail
    combo = affine_combo([(0.5, fixture("F3")), (0.25, fixture("F2"))])
    ez = lorentz_verdict(materialize(combo, 10_000)).estimate
    e3 = lorentz_verdict(materialize(fixture("F3"), 10_000)).estimate
    assert abs(ez - (0.5 * e3 + 0.25)) <= 1e-9 + 1e-12 * abs(ez)
    assert lorentz_verdict(materialize(fixture("F2"), 10_000)).estimate == 1.0
