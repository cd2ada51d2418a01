import json
import math

import pytest
from hypothesis import given, strategies as st

from radial_bergman.errors import DomainError, ValidationError
from radial_bergman.weights import (PLANE, UNIT_DISK, DomainSpec, MittagLefflerWeight,
                                    TabulatedWeight, TruncatedDiskWeight, from_dict, to_dict,
                                    validate, weight_value)


def test_ml_weight_value_at_one():
    w = MittagLefflerWeight(-1, 1, 0.5)
    assert weight_value(w, 1.0) == pytest.approx(math.exp(-1) / (2 * math.pi), rel=1e-15)
    assert weight_value(w, 1.0) == pytest.approx(0.05854983, abs=5e-9)


def test_truncated_values():
    assert weight_value(TruncatedDiskWeight(1), 0.3) == 1.0
    assert weight_value(TruncatedDiskWeight(1), 0.99) == 1.0
    assert weight_value(TruncatedDiskWeight(4), 0.25) == 4.0
    assert weight_value(TruncatedDiskWeight(4), 0.8) == pytest.approx(1 / 0.64)


def test_value_at_origin():
    assert weight_value(MittagLefflerWeight(-1, 1, 0.5), 0.0) == math.inf
    assert weight_value(MittagLefflerWeight(2, 1, 0.5), 0.0) == 0.0
    assert weight_value(MittagLefflerWeight(0, 1, 0.5), 0.0) == pytest.approx(1 / (2 * math.pi))
    assert weight_value(TruncatedDiskWeight(7), 0.0) == 7.0


def test_outside_domain():
    with pytest.raises(DomainError):
        weight_value(TruncatedDiskWeight(2), 1.0)
    with pytest.raises(DomainError):
        weight_value(MittagLefflerWeight(0, 1, 1), -0.1)


def test_validate_examples():
    rep = validate(MittagLefflerWeight(-1, 1, 0.5))
    assert rep.valid and rep.c == 1 and not rep.integer_m
    rep = validate(MittagLefflerWeight(2, 1, 1.5))
    assert rep.valid and rep.c == 0.5 and not rep.integer_m
    assert not validate(MittagLefflerWeight(-2, 1, 0.5)).valid
    rep = validate(MittagLefflerWeight(0, 1, 1))
    assert rep.valid and rep.integer_m


def test_validate_truncated_and_tabulated():
    assert validate(TruncatedDiskWeight(1)).valid
    assert not validate(TruncatedDiskWeight(0.5)).valid
    assert not validate(TruncatedDiskWeight(2, PLANE)).valid
    assert validate(TabulatedWeight(((0.0, 1.0), (1.0, 2.0)))).valid
    assert not validate(TabulatedWeight(((0.5, 1.0), (0.2, 2.0)))).valid
    assert not validate(TabulatedWeight(((0.0, 1.0), (1.0, 0.0)))).valid
    assert not validate(TabulatedWeight(((0.0, 1.0), (1.0, 2.0)), PLANE)).valid


@given(st.floats(-5, 5), st.floats(-3, 3), st.floats(-3, 3))
def test_validate_rejects_exactly(n, alpha, m):
    rep = validate(MittagLefflerWeight(n, alpha, m))
    assert rep.valid == (n > -2 and alpha > 0 and m > 0)


@given(st.floats(1, 1e6), st.floats(1, 1e6), st.floats(1e-3, 0.999))
def test_truncated_monotone_in_q(q1, q2, r):
    lo, hi = sorted((q1, q2))
    a = weight_value(TruncatedDiskWeight(lo), r)
    b = weight_value(TruncatedDiskWeight(hi), r)
    assert a <= b <= 1 / (r * r) * (1 + 1e-15)


@given(st.floats(1, 1e6), st.floats(1e-3, 0.99), st.floats(1e-3, 0.99))
def test_truncated_nonincreasing_in_r(q, r1, r2):
    lo, hi = sorted((r1, r2))
    w = TruncatedDiskWeight(q)
    assert weight_value(w, lo) >= weight_value(w, hi)


@given(st.floats(-1.9, 0), st.floats(0.1, 3), st.floats(0.2, 3), st.floats(1e-3, 5),
       st.floats(1e-3, 5))
def test_ml_nonincreasing_for_nonpositive_n(n, alpha, m, r1, r2):
    lo, hi = sorted((r1, r2))
    w = MittagLefflerWeight(n, alpha, m)
    assert weight_value(w, lo) >= weight_value(w, hi)


def test_tabulated_log_linear():
    w = TabulatedWeight(((0.0, 1.0), (1.0, math.e ** 2)))
    assert weight_value(w, 0.5) == pytest.approx(math.e)
    assert w.domain == UNIT_DISK


@pytest.mark.parametrize("spec", [
    MittagLefflerWeight(-1, 1, 0.5),
    MittagLefflerWeight(0.25, 2, 1.5, DomainSpec("disk", 3.0)),
    TruncatedDiskWeight(100),
    TabulatedWeight(((0.0, 1.0), (0.5, 3.0), (1.0, 2.0))),
])
def test_json_round_trip(spec):
    text = json.dumps(to_dict(spec))
    assert from_dict(json.loads(text)) == spec


def test_json_rejects_unknown():
    with pytest.raises(ValidationError):
        from_dict({"family": "mittag_leffler", "n": 0, "alpha": 1, "m": 1, "extra": 1})
    with pytest.raises(ValidationError):
        from_dict({"family": "gaussian"})
    with pytest.raises(ValidationError):
        from_dict({"family": "truncated_disk"})
    with pytest.raises(ValidationError):
        from_dict({"family": "truncated_disk", "q": 2, "domain": {"kind": "disk"}})
