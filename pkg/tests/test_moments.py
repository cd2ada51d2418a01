import json
import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from radial_bergman.errors import ValidationError
from radial_bergman.moments import (CLOSED_FORM, QUADRATURE, MomentSequence, ml_log_moment,
                                    ml_moment_closed_form, ml_tail_radius, moment_table,
                                    quadrature_moment, truncated_disk_moment)
from radial_bergman.weights import DomainSpec, MittagLefflerWeight, TabulatedWeight, TruncatedDiskWeight

COSH_WEIGHT = MittagLefflerWeight(-1, 1, 0.5)


def mp_radial_moment(density, k, upper):
    """Independent oracle: 2 pi int_0^upper r^(2k+1) W(r) dr with mpmath.quad."""
    with mpmath.workdps(30):
        return float(2 * mpmath.pi * mpmath.quad(lambda r: r ** (2 * k + 1) * density(r),
                                                 [0, upper]))


def ml_density_mp(n, alpha, m):
    return lambda r: r ** n * mpmath.exp(-alpha * r ** (2 * m)) / (2 * mpmath.pi)


@pytest.mark.parametrize("w,k,expected", [
    (COSH_WEIGHT, 2, 24.0),
    (COSH_WEIGHT, 0, 1.0),
    (MittagLefflerWeight(0, 2, 0.5), 0, 0.25),
    (MittagLefflerWeight(0, 1, 1), 1, 0.5),
])
def test_ml_closed_form_examples(w, k, expected):
    assert ml_moment_closed_form(w, k) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("n,alpha,m,k", [
    (-1, 1, 0.5, 2), (0, 2, 0.5, 0), (0, 1, 1, 1), (0.5, 2, 1.5, 3), (1, 0.5, 0.75, 5),
    (-1.5, 3, 2.5, 1),
])
def test_ml_closed_form_against_mpmath_quad(n, alpha, m, k):
    # the alpha exponent is -(2k+2+n)/(2m); a different exponent would
    # disagree here whenever alpha != 1 and m != 1/2
    ref = mp_radial_moment(ml_density_mp(n, alpha, m), k, mpmath.inf)
    assert ml_moment_closed_form(MittagLefflerWeight(n, alpha, m), k) == pytest.approx(ref, rel=1e-12)


def test_closed_form_overflow_goes_to_log_space():
    w = MittagLefflerWeight(0, 1, 0.25)
    assert ml_moment_closed_form(w, 400) == math.inf
    assert math.isfinite(ml_log_moment(w, 400))
    seq = moment_table(w, 400)
    assert seq.overflowed and seq.is_log_convex()


@pytest.mark.parametrize("q,k,expected", [
    (1, 0, math.pi), (1, 3, math.pi / 4), (math.e ** 2, 0, 3 * math.pi),
])
def test_truncated_examples(q, k, expected):
    assert truncated_disk_moment(q, k) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("q", [1.0, 2.5, math.e ** 2, 100.0, 1e4])
@pytest.mark.parametrize("k", [0, 1, 2, 7])
def test_truncated_against_mpmath_quad(q, k):
    def dens(r):
        return mpmath.mpf(q) if r * r * q <= 1 else 1 / (r * r)
    with mpmath.workdps(30):
        rc = 1 / mpmath.sqrt(q)
        ref = float(2 * mpmath.pi * (mpmath.quad(lambda r: r ** (2 * k + 1) * q, [0, rc])
                                     + mpmath.quad(lambda r: r ** (2 * k - 1), [rc, 1])))
    assert truncated_disk_moment(q, k) == pytest.approx(ref, rel=1e-13)


def test_truncated_rejects_q_below_one():
    with pytest.raises(ValidationError):
        truncated_disk_moment(0.5, 1)


@given(st.integers(0, 200))
def test_unweighted_disk_exact(k):
    assert truncated_disk_moment(1, k) == pytest.approx(math.pi / (k + 1), rel=1e-15)


@given(st.floats(1, 1e8), st.floats(1, 1e8), st.integers(0, 60))
def test_truncated_nondecreasing_in_q(q1, q2, k):
    lo, hi = sorted((q1, q2))
    assert truncated_disk_moment(lo, k) <= truncated_disk_moment(hi, k) * (1 + 1e-14)


@pytest.mark.parametrize("k", [1, 2, 5, 20])
def test_truncated_limit_is_pi_over_k(k):
    assert truncated_disk_moment(1e300, k) == pytest.approx(math.pi / k, rel=1e-14)


@pytest.mark.parametrize("w,k,expected", [
    (COSH_WEIGHT, 2, 24.0),
    (TruncatedDiskWeight(1), 3, math.pi / 4),
    (TruncatedDiskWeight(math.e ** 2), 0, 3 * math.pi),
])
def test_quadrature_examples(w, k, expected):
    assert quadrature_moment(w, k, 1e-10) == pytest.approx(expected, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([-1.5, -1, -0.5, 0, 0.5, 1, 3]), st.sampled_from([0.3, 0.5, 1, 2, 5]),
       st.sampled_from([0.4, 0.5, 0.75, 1, 1.5, 2.5]), st.integers(0, 40))
def test_closed_form_matches_quadrature(n, alpha, m, k):
    w = MittagLefflerWeight(n, alpha, m)
    tol = 1e-10
    rel = abs(quadrature_moment(w, k, tol) / ml_moment_closed_form(w, k) - 1)
    assert rel < 10 * tol


def test_ml_on_a_disk_uses_quadrature():
    w = MittagLefflerWeight(0, 1, 1, DomainSpec("disk", 1.0))
    # 2 pi int_0^1 r e^{-r^2} / (2 pi) dr = (1 - e^-1) / 2
    assert quadrature_moment(w, 0, 1e-12) == pytest.approx((1 - math.exp(-1)) / 2, rel=1e-12)
    assert moment_table(w, 2).provenance == QUADRATURE


def test_tail_radius_certifies():
    w = MittagLefflerWeight(0, 1, 1)
    R = ml_tail_radius(w, 3, 1e-12)
    # tail of int r^7 e^{-r^2} past R, relative to W_3 = 3
    with mpmath.workdps(30):
        tail = float(mpmath.quad(lambda r: r ** 7 * mpmath.exp(-r * r), [R, mpmath.inf]))
    assert tail < 1e-12 * 3


def test_moment_table_examples():
    seq = moment_table(COSH_WEIGHT, 3)
    assert seq.values == (1.0, 2.0, 24.0, 720.0)
    assert seq.provenance == CLOSED_FORM
    seq = moment_table(TruncatedDiskWeight(1), 2)
    assert seq.values == pytest.approx([math.pi, math.pi / 2, math.pi / 3], rel=1e-15)
    tab = TabulatedWeight(((0.0, 1.0), (0.5, 2.0), (1.0, 1.5)))
    seq = moment_table(tab, 4)
    assert seq.provenance == QUADRATURE and seq.is_log_convex()


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.9, 4), st.floats(0.1, 5), st.floats(0.2, 4))
def test_ml_tables_log_convex(n, alpha, m):
    assert moment_table(MittagLefflerWeight(n, alpha, m), 60).is_log_convex()


@given(st.floats(1, 1e12))
def test_truncated_tables_log_convex(q):
    assert moment_table(TruncatedDiskWeight(q), 60).is_log_convex()


def test_csv_and_json():
    seq = moment_table(COSH_WEIGHT, 3)
    lines = seq.to_csv().splitlines()
    assert lines[0] == "k,W_k,log_W_k,provenance"
    assert lines[3].startswith("2,24,3.17805383034794")
    back = MomentSequence.from_json_obj(json.loads(seq.to_json()))
    assert back.values == seq.values and back.weight == seq.weight
    assert back.log_values == seq.log_values


def test_moment_table_rejects_invalid():
    with pytest.raises(ValidationError):
        moment_table(MittagLefflerWeight(-2, 1, 1), 3)
    with pytest.raises(ValidationError):
        moment_table(COSH_WEIGHT, -1)
