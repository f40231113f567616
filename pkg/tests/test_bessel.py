import math
import mpmath as mp

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cuspdet import bessel
from oracles import fd_derivative, series_i, series_k

# frozen from tests/oracles.py (mpmath, 30+ digits)
K10_2 = 162482.40397955914872
I5_3 = 0.091206477661513348526
K50_50 = 4.0060134766400895374e-13
K3_5 = 0.0082917684152309321748


def rel(a, b):
    return abs(a - b) / abs(b)


# -- closed forms and frozen oracle values -----------------------------------


def test_k_half_order_closed_form():
    assert rel(bessel.bessel_k(0.5, 1.0), math.sqrt(math.pi / 2) * math.exp(-1)) < 1e-14


def test_i_half_order_closed_form():
    assert rel(bessel.bessel_i(0.5, 1.0), math.sqrt(2 / math.pi) * math.sinh(1.0)) < 1e-14


def test_k0_large_argument_limit():
    xs = [50.0, 200.0, 1000.0]
    vals = [math.sqrt(x) * bessel.bessel_k(0, x, scaled=True) for x in xs]
    errs = [abs(v - math.sqrt(math.pi / 2)) for v in vals]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


def test_i0_small_argument():
    assert abs(bessel.bessel_i(0, 1e-8) - 1.0) < 1e-15


def test_k10_2_matches_series_oracle():
    assert rel(bessel.bessel_k(10, 2.0), K10_2) < 1e-10


def test_i5_3_matches_series_oracle():
    assert rel(bessel.bessel_i(5, 3.0), I5_3) < 1e-12


def test_frozen_values_reproduce_oracle():
    assert rel(float(series_k(10, 2)), K10_2) < 1e-15
    assert rel(float(series_i(5, 3)), I5_3) < 1e-15


def test_k_prime_recurrence_half_order():
    lhs = bessel.bessel_k_prime(0.5, 1.0)
    k12 = math.sqrt(math.pi / 2) * math.exp(-1)
    k32 = k12 * (1 + 1.0)
    assert rel(lhs, -k32 + 0.5 * k12) < 1e-14


def test_wronskian_point():
    nu, x = 0.7, 2.3
    w = x * (bessel.bessel_k(nu, x) * bessel.bessel_i_prime(nu, x)
             - bessel.bessel_k_prime(nu, x) * bessel.bessel_i(nu, x))
    assert abs(w - 1) < 1e-13


def test_k_prime_matches_finite_difference():
    fd = fd_derivative(lambda t: bessel.bessel_k(3, t), 5.0)
    assert rel(bessel.bessel_k_prime(3, 5.0), fd) < 1e-8
    assert rel(bessel.bessel_k(3, 5.0), K3_5) < 1e-12


def test_log_derivative_order_100():
    r = bessel.bessel_k_prime(100, 1.0) / bessel.bessel_k(100, 1.0)
    assert abs(r + 100) * 100 < 1.0
    m = bessel.bessel_k_log_derivative_order_asymptotic(100, 1.0)
    assert m.leading == -100
    # the remainder is the first correction -x/(2z) up to a relative O(1/z)
    assert abs(-m.remainder / m.bound - 1) < 2.0 / 100


def test_log_derivative_remainder_bounded_in_order():
    zs = np.array([50.0, 100.0, 200.0, 400.0])
    scaled = [bessel.bessel_k_log_derivative_order_asymptotic(z, 1.0).remainder * z for z in zs]
    slope = np.polyfit(zs, scaled, 1)[0]
    assert abs(slope) < 1e-3
    assert max(abs(s) for s in scaled) < 1.0


def test_log_derivative_half_order():
    r = bessel.bessel_k_prime(0.5, 1.0) / bessel.bessel_k(0.5, 1.0)
    assert abs(r - (-1 - 0.5)) < 1e-14


def test_log_derivative_warns_below_z_min():
    with pytest.warns(RuntimeWarning):
        bessel.bessel_k_log_derivative_order_asymptotic(5, 1.0)


def test_uniform_product_leading_term():
    z = 1e6
    for x in (0.1, 1.0, 10.0):
        v, _ = bessel.uniform_product(z, x, kmax=0)
        assert rel(v, 1 / (2 * z * math.sqrt(1 + x * x))) < 1e-15


def test_uniform_k_50():
    v, est = bessel.uniform_k(50, 1.0)
    assert rel(v, K50_50) < 1e-6
    assert rel(v, K50_50) < 10 * est + 1e-15


def test_uniform_matches_large_argument_form():
    z = 30.0
    A = bessel.large_arg_coeffs(z, 8)
    errs = []
    for x in (1e2, 1e4, 1e6):
        v, _ = bessel.uniform_k(z, x)
        X = z * x
        la = math.log(math.sqrt(math.pi / (2 * X))) - X
        # the bare leading form, and the same form with its correction series
        lv = v.log() if isinstance(v, bessel.ScaledValue) else math.log(v)
        series = sum(A[k] / X ** k for k in range(len(A)))
        errs.append(abs(math.exp(lv - la) - 1))
        assert abs(math.exp(lv - la) / series - 1) < 1e-8
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-4


def test_uniform_kmax_beyond_table():
    with pytest.raises(ValueError):
        bessel.uniform_k(50, 1.0, kmax=100)


def test_domain_errors():
    with pytest.raises(bessel.BesselDomainError):
        bessel.bessel_k(-1, 1.0)
    with pytest.raises(bessel.BesselDomainError):
        bessel.bessel_i(1, 0.0)


def test_overflow_returns_scaled_representation():
    v = bessel.bessel_i(2, 800.0)
    assert isinstance(v, bessel.ScaledValue)
    ref = bessel.bessel_i(2, 800.0, scaled=True)
    assert abs(v.log() - (math.log(ref) + 800.0)) < 1e-12


# -- coefficient tables ------------------------------------------------------


def test_u_polynomial_degrees():
    u = bessel.u_polynomials_exact()
    for k in range(1, len(u)):
        coeffs = u[k]
        assert len(coeffs) - 1 == 3 * k
        assert coeffs[-1] != 0


def test_uniform_coeffs_invariants():
    xs = np.geomspace(1e-3, 1e3, 200)
    cs = [bessel.UniformCoeffs.at(x) for x in xs]
    ps = np.array([c.p for c in cs])
    xis = np.array([c.xi for c in cs])
    assert np.all((ps > 0) & (ps < 1))
    assert np.all(np.diff(xis) > 0)


def test_large_arg_coeffs_vanish_at_half():
    a = bessel.LargeArgCoeffs.at(0.5, 10).a_coeffs
    assert a[0] == 1.0
    assert np.all(a[1:] == 0.0)


# -- suites over the sampled rectangle ---------------------------------------

ORDERS = np.linspace(0.0, 20.0, 41)
ARGS = np.geomspace(0.1, 50.0, 60)


def wronskian_defect(nu, x):
    d = bessel.ik_derivs(nu, x)
    return np.abs(x * (d.mk * d.mip - d.mkp * d.mi) - 1.0)


def test_wronskian_rectangle():
    nu, x = np.meshgrid(ORDERS, ARGS)
    assert float(np.max(wronskian_defect(nu, x))) < 1e-10


@given(st.floats(0.0, 20.0), st.floats(0.1, 50.0))
def test_wronskian_property(nu, x):
    assert float(wronskian_defect(nu, x)) < 1e-10


def test_monotone_in_argument():
    for nu in ORDERS:
        r = bessel.ik_scaled(nu, ARGS)
        lk = np.log(r.mk) - r.eta
        li = np.log(r.mi) + r.eta
        assert np.all(np.diff(lk) < 0)
        assert np.all(np.diff(li) > 0)


def test_monotone_in_order():
    for x in ARGS:
        r = bessel.ik_scaled(ORDERS, x)
        lk = np.log(r.mk) - r.eta
        li = np.log(r.mi) + r.eta
        assert np.all(np.diff(lk) > 0)
        assert np.all(np.diff(li) < 0)


def test_positivity():
    nu, x = np.meshgrid(np.linspace(0, 60, 31), np.geomspace(1e-3, 1e3, 40))
    r = bessel.ik_scaled(nu, x)
    assert np.all(r.mi > 0) and np.all(r.mk > 0)


def overlap_defects():
    """Largest relative disagreement between regimes in their overlap windows."""
    out = {}
    nu, x = np.meshgrid(np.linspace(0, 5, 11), np.linspace(15, 25, 11))
    a = bessel.ik_scaled(nu, x, "series")
    b = bessel.ik_scaled(nu, x, "large_arg")
    out["series_vs_large_arg"] = float(max(np.max(np.abs(a.mk / b.mk - 1)),
                                           np.max(np.abs(a.mi / b.mi - 1))))
    worst = 0.0
    for z in (20.0, 25.0, 30.0, 40.0):
        for x in (0.5, 5.0, 20.0, 45.0):
            v = bessel.ik_scaled(z, x, "uniform")
            lk = math.log(float(v.mk)) - float(v.eta)
            li = math.log(float(v.mi)) + float(v.eta)
            worst = max(worst, abs(lk - float(mp.log(series_k(z, x)))),
                        abs(li - float(mp.log(series_i(z, x)))))
    out["oracle_vs_uniform"] = worst
    return out


def test_regime_overlap():
    d = overlap_defects()
    assert d["series_vs_large_arg"] < 1e-8
    assert d["oracle_vs_uniform"] < 1e-8


def test_ratio_asymptotic_bounded():
    for x in (0.5, 1.0, 2.0):
        zs = np.geomspace(50, 800, 12)
        a = bessel.ik_scaled(zs, x)
        b = bessel.ik_scaled(zs + 1, x)
        ratio = b.mk / a.mk * np.exp(a.eta - b.eta)
        s = (ratio - 2 * zs / x) * zs
        assert np.max(np.abs(s)) < 10.0


def test_est_rel_err_honoured():
    for nu, x in ((0.3, 0.7), (4.0, 9.0), (12.0, 30.0), (25.0, 3.0), (2.0, 40.0)):
        e = bessel.bessel_eval(nu, x)
        assert rel(e.value_k, float(series_k(nu, x))) <= max(e.est_rel_err, 1e-14)
        assert rel(e.value_i, float(series_i(nu, x))) <= max(e.est_rel_err, 1e-14)
