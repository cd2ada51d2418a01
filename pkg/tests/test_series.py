import cmath
import math

import mpmath
import numpy as np
import pytest

from radial_bergman.errors import AccuracyError
from radial_bergman.series import PowerSeries, log_abs, phase


def exp_series():
    return PowerSeries(lambda k: -math.lgamma(k + 1),
                       lambda n: [1 / mpmath.factorial(k) for k in range(n)])


def test_double_path_exp():
    res = exp_series().evaluate(3 + 4j, abs_tol=1e-11)
    assert abs(complex(res.value) - cmath.exp(3 + 4j)) < 1e-11
    assert res.digits == 0
    assert res.tail_bound < 1e-11


def test_cancellation_triggers_high_precision():
    # e^-60 from alternating terms as large as 1e25
    res = exp_series().evaluate(-60.0, abs_tol=0, rel_tol=1e-12)
    assert res.digits > 16
    assert complex(res.value).real == pytest.approx(math.exp(-60), rel=1e-12)


def test_huge_values_come_back_as_mpc():
    res = exp_series().evaluate(800.0, abs_tol=0, rel_tol=1e-13)
    assert isinstance(res.value, mpmath.mpc)
    assert log_abs(res.value) == pytest.approx(800.0, rel=1e-14)


def test_finite_table_tail_uses_last_ratio():
    lc = [-math.lgamma(k + 1) for k in range(40)]
    s = PowerSeries(lambda k: lc[k], length=40)
    assert complex(s.evaluate(1.0, abs_tol=1e-14).value).real == pytest.approx(math.e, rel=1e-14)
    with pytest.raises(AccuracyError):
        s.evaluate(30.0, abs_tol=1e-14)


def test_geometric_series_not_certifiable_at_radius():
    s = PowerSeries(lambda k: 0.0, max_terms=2000)
    assert complex(s.evaluate(0.5, abs_tol=1e-14).value) == pytest.approx(2.0, abs=1e-14)
    with pytest.raises(AccuracyError):
        s.evaluate(1.0, abs_tol=1e-14)


def test_truncation_bound_is_certified():
    s = exp_series()
    K, log_tail, _ = s.truncation(math.log(10.0), math.log(1e-15))
    true_tail = float(mpmath.nsum(lambda k: mpmath.mpf(10) ** k / mpmath.factorial(k), [K + 1, mpmath.inf]))
    assert true_tail <= math.exp(log_tail)
    assert math.exp(log_tail) < 1e-15


def test_evaluate_array_matches_scalar():
    s = exp_series()
    pts = np.array([0.3, -2 + 1j, 4j])
    vals = s.evaluate_array(pts, s.terms_needed(4.0))
    assert np.allclose(vals, np.exp(pts), rtol=1e-13, atol=0)


def test_helpers():
    assert log_abs(0j) == -math.inf
    assert phase(-1.0) == pytest.approx(math.pi)
    assert phase(mpmath.mpc(0, 1)) == pytest.approx(math.pi / 2)
