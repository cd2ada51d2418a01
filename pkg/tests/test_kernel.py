import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radial_bergman.errors import AccuracyError, DomainError, ValidationError
from radial_bergman.kernel import (CLOSED, SERIES, KernelEvaluator, kernel_eval_closed,
                                   kernel_eval_series, limit_disk_kernel, limit_profile, ml_params,
                                   reproduce_check)
from radial_bergman.moments import moment_table, truncated_disk_moment
from radial_bergman.weights import MittagLefflerWeight, TabulatedWeight, TruncatedDiskWeight

COSH = MittagLefflerWeight(-1, 1, 0.5)
ML_SETS = [COSH, MittagLefflerWeight(0, 1, 1), MittagLefflerWeight(0.5, 2, 1.5),
           MittagLefflerWeight(1, 0.5, 0.75), MittagLefflerWeight(-1.5, 3, 2.5)]


def series(w, tol=1e-14):
    return KernelEvaluator.from_weight(w, SERIES, tol)


def test_series_examples():
    assert kernel_eval_series(series(COSH), 4, 1) == pytest.approx(math.cosh(2), abs=1e-13)
    assert kernel_eval_series(series(TruncatedDiskWeight(1)), 0, 0) == pytest.approx(1 / math.pi,
                                                                                     abs=1e-15)
    assert abs(kernel_eval_series(series(COSH), -math.pi ** 2 / 4, 1)) < 1e-14


def test_closed_examples():
    assert kernel_eval_closed(COSH, 1, 1) == pytest.approx(math.cosh(1), abs=1e-14)
    assert kernel_eval_closed(COSH, 0, 0) == pytest.approx(1.0, abs=1e-15)
    for w in ML_SETS:
        p = (2 + w.n) / (2 * w.m)
        k0 = 2 * w.m * w.alpha ** p / math.gamma(p)
        assert kernel_eval_closed(w, 1.3, 0) == pytest.approx(k0, rel=1e-14)


def test_ml_params_mapping():
    p = ml_params(MittagLefflerWeight(2, 1, 1.5))
    assert p.beta == pytest.approx(2 / 3) and p.gamma_param == pytest.approx(4 / 3)


def test_closed_needs_plane_ml():
    with pytest.raises(ValidationError):
        KernelEvaluator.from_weight(TruncatedDiskWeight(2), CLOSED)
    with pytest.raises(ValidationError):
        kernel_eval_series(KernelEvaluator.from_weight(COSH, CLOSED), 1, 1)


def _agree(w, radius, tol=1e-12, count=100):
    rng = np.random.default_rng(11)
    ser, clo = series(w, tol), KernelEvaluator.from_weight(w, CLOSED, tol)
    for _ in range(count):
        s = radius * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
        a = mpmath.mpmathify(ser.profile(s, rel_tol=tol).value)
        b = mpmath.mpmathify(clo.profile(s, rel_tol=tol).value)
        # each is certified to max(tol, tol |f|); values can exceed double range
        assert abs(a - b) < 2 * tol * max(1, abs(a))


@pytest.mark.parametrize("w", ML_SETS[:4], ids=str)
def test_closed_matches_series_on_100_points(w):
    _agree(w, 100.0)


def test_closed_matches_series_high_order():
    # order 2.5 with alpha^(1/m) = 1.55: |s| = 100 would need ~10^6 terms
    _agree(ML_SETS[4], 6.0)


def test_closed_matches_series_at_moderate_s_absolutely():
    ser, clo = series(COSH, 1e-12), KernelEvaluator.from_weight(COSH, CLOSED, 1e-12)
    for s in (-90, -30 + 40j, 5j, 17):
        assert abs(complex(ser.profile(s).value) - complex(clo.profile(s).value)) < 2e-12 * max(
            1, abs(cmath.cosh(cmath.sqrt(s))))


@settings(max_examples=80, deadline=None)
@given(st.complex_numbers(max_magnitude=25))
def test_cos_identity(s):
    for ev in (series(COSH, 1e-13), KernelEvaluator.from_weight(COSH, CLOSED, 1e-13)):
        assert abs(complex(ev.profile(s).value) - cmath.cosh(cmath.sqrt(s))) < 1e-12


def test_cos_series_against_independent_factorials():
    # the cos display, read with the summation index: sum s^k / (2k)!
    with mpmath.workdps(30):
        ref = complex(mpmath.nsum(lambda k: mpmath.mpf(-7.5) ** k / mpmath.factorial(2 * k),
                                  [0, mpmath.inf]))
    assert complex(series(COSH).profile(-7.5).value) == pytest.approx(ref, abs=1e-14)


points = st.complex_numbers(max_magnitude=0.95)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1.0, 7.0, 1e3]), points, points)
def test_hermitian_symmetry_disk(q, z, w):
    ev = series(TruncatedDiskWeight(q), 1e-13)
    assert abs(ev(z, w) - ev(w, z).conjugate()) < 1e-12 * max(1, abs(ev(z, w)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ML_SETS), st.complex_numbers(max_magnitude=2.4),
       st.complex_numbers(max_magnitude=2.4), st.floats(0, 2 * math.pi))
def test_hermitian_and_rotation_plane(wt, z, w, theta):
    ev = series(wt, 1e-13)
    k = ev(z, w)
    scale = max(1.0, abs(k))
    assert abs(k - ev(w, z).conjugate()) < 1e-12 * scale
    u = cmath.exp(1j * theta)
    assert abs(ev(u * z, u * w) - k) < 1e-12 * scale


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1.0, 3.0, 50.0, 1e6]), points)
def test_diagonal_positivity_disk(q, z):
    ev = series(TruncatedDiskWeight(q), 1e-13)
    k = ev(z, z)
    assert abs(k.imag) < 1e-12 * abs(k)
    assert k.real >= (1 / truncated_disk_moment(q, 0)) * (1 - 1e-14)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ML_SETS), st.complex_numbers(max_magnitude=2.4))
def test_diagonal_positivity_plane(wt, z):
    ev = series(wt)
    k = ev(z, z)
    assert k.real >= 1 / moment_table(wt, 0).values[0] * (1 - 1e-14)


def test_from_moments_matches_from_weight():
    w = TruncatedDiskWeight(20)
    seq = moment_table(w, 200)
    a = KernelEvaluator.from_moments(seq)(0.5, 0.4j)
    b = series(w)(0.5, 0.4j)
    assert a == pytest.approx(b, abs=1e-14)


def test_short_table_cannot_certify():
    seq = moment_table(TruncatedDiskWeight(20), 5)
    with pytest.raises(AccuracyError):
        KernelEvaluator.from_moments(seq)(0.9, 0.9)


def test_tabulated_weight_kernel():
    w = TabulatedWeight(((0.0, 1.0), (1.0, 1.0)))
    ev = KernelEvaluator.from_weight(w, tol=1e-10, quad_tol=1e-13)
    # constant weight 1 on the disk: 1 / (pi (1 - s)^2)
    assert ev(0.5, 0.5) == pytest.approx(1 / (math.pi * 0.75 ** 2), rel=1e-9)


def test_domain_errors():
    ev = series(TruncatedDiskWeight(3))
    with pytest.raises(DomainError):
        ev(1.0, 0)
    with pytest.raises(DomainError):
        ev(0, 1.2j)
    with pytest.raises(DomainError):
        limit_disk_kernel(1.0, 0.2)


def test_limit_examples():
    assert limit_disk_kernel(0, 0.7) == 0
    assert limit_disk_kernel(0.5, 0.5) == pytest.approx(4 / (9 * math.pi), abs=1e-15)
    assert limit_disk_kernel(0.5, -0.5) == pytest.approx(-4 / (25 * math.pi), abs=1e-15)
    assert KernelEvaluator.limit()(0.5, 0.5) == pytest.approx(4 / (9 * math.pi), abs=1e-15)


@pytest.mark.parametrize("s", [0.25, -0.25, 0.3 + 0.4j, -0.6j])
def test_limit_against_series_oracles(s):
    # the stated series sum_{k>=1} (k/pi) s^k
    direct = sum(k / math.pi * s ** k for k in range(1, 400))
    assert limit_profile(s) == pytest.approx(direct, abs=1e-14)
    # and the kernel of a very large truncation level, whose moments approach pi/k
    big = series(TruncatedDiskWeight(1e300)).profile(s).value
    assert complex(big) == pytest.approx(limit_profile(s), abs=1e-2)


def test_limit_array_path():
    ev = KernelEvaluator.limit()
    s = np.array([0.1, -0.5j])
    assert np.allclose(ev.profile_array(s, 0), [limit_profile(x) for x in s], rtol=1e-15)


def test_profile_array_matches_scalar():
    ev = KernelEvaluator.from_weight(COSH, CLOSED)
    s = np.array([0.5, -9.0, 3 + 4j])
    vals = ev.profile_array(s, ev.terms_needed(10.0))
    assert np.allclose(vals, np.cosh(np.sqrt(s)), rtol=1e-13, atol=1e-14)


@pytest.mark.parametrize("ev_weight,poly,z", [
    (TruncatedDiskWeight(1), [1], 0.3),
    (COSH, [0, 0, 1], 1.0),
    (TruncatedDiskWeight(100), [0, 1], 0.4j),
    (MittagLefflerWeight(0.5, 2, 1.5), [1, -2j, 0.5, 1], 0.7 - 0.2j),
])
def test_reproduce_check(ev_weight, poly, z):
    ev = series(ev_weight)
    assert reproduce_check(ev, ev_weight, poly, z, quad_tol=1e-8) < 1e-8


def test_reproduce_check_detects_wrong_kernel():
    # the kernel of q=1 does not reproduce in the q=100 space
    assert reproduce_check(series(TruncatedDiskWeight(1)), TruncatedDiskWeight(100), [0, 1],
                           0.4j) > 1e-3


def test_reproduce_check_degree_limit():
    seq = moment_table(TruncatedDiskWeight(4), 2)
    with pytest.raises(ValidationError):
        reproduce_check(KernelEvaluator.from_moments(seq), TruncatedDiskWeight(4), [0, 0, 0, 1], 0.1)
