import math

import pytest

from seqdist import (
    ALMOST_CONVERGENT,
    INCONCLUSIVE,
    NOT_ALMOST_CONVERGENT,
    WindowSchedule,
    affine_combo,
    cross_validate,
    fixture,
    lorentz_verdict,
    materialize,
    periodic,
    shift,
)


def test_alternating_is_almost_convergent():
    lv = lorentz_verdict(materialize(fixture("F3"), 10_000))
    assert lv.verdict == ALMOST_CONVERGENT
    assert lv.estimate == 0.0
    assert lv.uniform_gap == 0.0


def test_doubling_blocks_diverge():
    sched = WindowSchedule(tuple(16 * 2**t for t in range(8)))
    lv = lorentz_verdict(materialize(fixture("F6"), 2**14), sched)
    assert lv.verdict == NOT_ALMOST_CONVERGENT
    assert lv.uniform_gap == 1.0
    assert all(g == 1.0 for g in lv.gap_trend)


@pytest.mark.parametrize("constant", [1.0, 0.25, -0.5])
def test_constant_sequences_exact(constant):
    lv = lorentz_verdict(materialize(periodic([constant]), 5000))
    assert lv.verdict == ALMOST_CONVERGENT
    assert lv.estimate == constant
    assert lv.uniform_gap == 0.0


def test_transient_sequence_settles_to_zero():
    lv = lorentz_verdict(materialize(fixture("F1"), 10_000))
    assert lv.verdict == ALMOST_CONVERGENT
    assert abs(lv.estimate) <= 3 / lv.n_tail


def test_dyadic_harmonic_estimate(f7_prefix_large):
    lv = lorentz_verdict(f7_prefix_large)
    assert lv.verdict == ALMOST_CONVERGENT
    assert abs(lv.estimate - math.log(2)) < 1e-3


def test_inconclusive_midway():
    # A long transient caught mid-decay: tail gaps run 1, 100/128, 100/256,
    # neither settled below the gap tolerance nor all above the floor.
    lv = lorentz_verdict(materialize(fixture("F1", n0=100), 2000))
    assert lv.verdict == INCONCLUSIVE


def test_cross_validate_f4():
    record = cross_validate(fixture("F4"), 30_000)
    n_tail = record.lorentz.n_tail
    assert abs(record.lorentz.estimate - 1 / 3) <= 2 / n_tail
    assert abs(record.quantization.point - 1 / 3) <= record.quantization.error_bound
    assert record.consistent


def test_cross_validate_f7():
    record = cross_validate(fixture("F7"), 2**18)
    assert abs(record.lorentz.estimate - math.log(2)) <= 0.02
    assert abs(record.quantization.point - math.log(2)) <= 0.02
    assert record.consistent


def test_cross_validate_f6_both_refuse():
    record = cross_validate(fixture("F6"), 2**14)
    assert record.lorentz.verdict == NOT_ALMOST_CONVERGENT
    assert record.quantization.verdict == INCONCLUSIVE
    assert record.consistent  # wide bounds on both sides absorb the difference


@pytest.mark.parametrize(
    "name,horizon",
    [("F1", 10_000), ("F2", 10_000), ("F3", 10_000), ("F4", 30_000), ("F5", 100_000), ("F7", 2**18)],
)
def test_routes_agree_on_almost_convergent_fixtures(name, horizon):
    record = cross_validate(fixture(name), horizon)
    assert abs(record.difference) <= record.combined_bound
    assert record.consistent


def test_estimate_shift_invariance():
    for name in ("F3", "F4", "F5"):
        spec = fixture(name)
        sched = WindowSchedule.geometric(30_000)
        base = lorentz_verdict(materialize(spec, 30_000), sched)
        for k in (1, 5):
            moved = lorentz_verdict(materialize(shift(spec, k), 30_000), sched)
            assert abs(base.estimate - moved.estimate) <= 2 * k * 1.0 / base.n_tail


def test_estimate_linearity():
    z = affine_combo([(0.5, fixture("F3")), (0.25, fixture("F2"))])
    ez = lorentz_verdict(materialize(z, 10_000)).estimate
    e3 = lorentz_verdict(materialize(fixture("F3"), 10_000)).estimate
    assert abs(ez - (0.5 * e3 + 0.25)) <= 1e-9


def test_estimate_normalization():
    assert lorentz_verdict(materialize(fixture("F2"), 10_000)).estimate == 1.0


def test_verdict_as_estimate_record():
    lv = lorentz_verdict(materialize(fixture("F4"), 10_000))
    est = lv.as_estimate()
    assert est.method == "cesaro"
    assert est.lower <= est.point <= est.upper
    assert est.point == lv.estimate
    assert est.verdict == lv.verdict
