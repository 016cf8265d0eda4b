import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqdist import (
    IndexOutOfRangeError,
    InvalidSpecError,
    ResourceLimitError,
    affine_combo,
    eval_at,
    fixture,
    materialize,
    ones_then_zeros,
    periodic,
    rotation,
    shift,
    table,
)
from seqdist.sequences import MAX_HORIZON_ENV


def test_ones_then_zeros_values():
    spec = ones_then_zeros(3)
    assert eval_at(spec, 2) == 1.0
    assert eval_at(spec, 3) == 1.0
    assert eval_at(spec, 4) == 0.0


def test_dyadic_harmonic_single_value():
    # The 2-adic valuation of 4 is 2, so x(4) = 1/3.
    assert eval_at(fixture("F7"), 4) == 1.0 / 3.0


def test_dyadic_harmonic_residue_identity():
    # x(n) = 1/j exactly when n mod 2**j == 2**(j-1): check by the residue
    # rule directly, independent of the bit-trick implementation.
    spec = fixture("F7")
    for n in range(1, 4097):
        j = 1
        while n % (2**j) != 2 ** (j - 1):
            j += 1
        assert eval_at(spec, n) == 1.0 / j


def test_materialize_periodic():
    p = materialize(periodic([1, 0, 0]), 6)
    assert p.values.tolist() == [1, 0, 0, 1, 0, 0]


def test_materialize_all_ones():
    p = materialize(fixture("F2"), 4)
    assert p.values.tolist() == [1.0, 1.0, 1.0, 1.0]


def test_materialize_rational_rotation():
    p = materialize(rotation(0.5), 4)
    assert p.values.tolist() == [0.5, 0.0, 0.5, 0.0]


def test_doubling_blocks_layout():
    got = materialize(fixture("F6"), 15).values.tolist()
    assert got == [0, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1]


def test_materialize_matches_eval_pointwise():
    specs = [fixture(name) for name in ("F1", "F2", "F3", "F4", "F5", "F6", "F7")]
    specs.append(affine_combo([(0.5, fixture("F3")), (-0.25, fixture("F5"))]))
    for spec in specs:
        p = materialize(spec, 3000)
        for n in (1, 2, 3, 17, 256, 999, 3000):
            assert p.value_at(n) == eval_at(spec, n)


def test_bound_certified_on_samples():
    specs = [fixture(name) for name in ("F1", "F2", "F3", "F4", "F5", "F6", "F7")]
    specs.append(affine_combo([(0.3, fixture("F5")), (-1.5, fixture("F3"))]))
    samples = np.unique(np.geomspace(1, 10**6, 400).astype(int))
    for spec in specs:
        for n in samples:
            assert abs(eval_at(spec, int(n))) <= spec.bound


def test_shift_examples():
    shifted = shift(periodic([1, 0, 0]), 1)
    assert materialize(shifted, 6).values.tolist() == [0, 0, 1, 0, 0, 1]
    spec = fixture("F5")
    assert materialize(shift(spec, 0), 50).values.tolist() == materialize(spec, 50).values.tolist()
    gone = shift(ones_then_zeros(3), 3)
    assert not materialize(gone, 100).values.any()


@given(a=st.integers(min_value=0, max_value=40), b=st.integers(min_value=0, max_value=40))
@settings(max_examples=40, deadline=None)
def test_shift_composes(a, b):
    spec = fixture("F4")
    lhs = materialize(shift(shift(spec, a), b), 60).values
    rhs = materialize(shift(spec, a + b), 60).values
    assert lhs.tolist() == rhs.tolist()


def test_shift_of_eval():
    spec = fixture("F7")
    y = shift(spec, 5)
    for n in range(1, 64):
        assert eval_at(y, n) == eval_at(spec, n + 5)


def test_table_kind():
    spec = table([0.5, -0.25, 1.0])
    assert eval_at(spec, 2) == -0.25
    assert spec.bound == 1.0
    with pytest.raises(IndexOutOfRangeError):
        eval_at(spec, 4)
    with pytest.raises(IndexOutOfRangeError):
        materialize(spec, 4)


def test_affine_combo_bound_and_values():
    z = affine_combo([(0.5, fixture("F3")), (0.25, fixture("F2"))])
    assert z.bound == pytest.approx(0.75)
    p = materialize(z, 4)
    assert p.values.tolist() == [-0.25, 0.75, -0.25, 0.75]


def test_invalid_specs_rejected():
    with pytest.raises(InvalidSpecError):
        periodic([])
    with pytest.raises(InvalidSpecError):
        ones_then_zeros(0)
    with pytest.raises(InvalidSpecError):
        rotation(1.5)
    with pytest.raises(InvalidSpecError):
        table([])
    with pytest.raises(InvalidSpecError):
        affine_combo([])
    with pytest.raises(InvalidSpecError):
        fixture("F9")
    with pytest.raises(InvalidSpecError):
        fixture("F2", n0=5)
    with pytest.raises(InvalidSpecError):
        shift(fixture("F2"), -1)
    with pytest.raises(InvalidSpecError):
        eval_at(fixture("F2"), 0)


def test_horizon_cap(monkeypatch):
    monkeypatch.setenv(MAX_HORIZON_ENV, "100")
    with pytest.raises(ResourceLimitError):
        materialize(fixture("F2"), 101)
    assert materialize(fixture("F2"), 100).horizon == 100


def test_golden_rotation_default():
    spec = fixture("F5")
    assert spec.alpha == pytest.approx((math.sqrt(5) - 1) / 2)
    vals = materialize(spec, 1000).values
    assert np.all((0 <= vals) & (vals < 1))


def test_fixture_f1_n0_override():
    assert eval_at(fixture("F1", n0=10), 10) == 1.0
    assert eval_at(fixture("F1", n0=10), 11) == 0.0
