import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cuspdet import bessel, detz, trace
from cuspdet.operator import (BoundaryCondition, NumericalError, OperatorSpec, Potential,
                              neumann_lambda, solve_psi)
from cuspdet.quadrature import gk_integrate_to_inf
from cuspdet.regfit import ExpansionBasis, fit_expansion

MODEL = OperatorSpec()
N0 = OperatorSpec(bc=BoundaryCondition.neumann(0.0))
N1 = OperatorSpec(bc=BoundaryCondition.neumann(1.0))
V = Potential.power_exp(1.0, 0.5, 1.0)
PERTURBED = OperatorSpec(potential=V)

# frozen from mpmath quadrature of the closed-form Green diagonal
G_DIR_Z3 = {1.5: 0.091750604563579053394, 4.0: 0.024932861581649296711,
            12.0: 0.0033703778085379883396}
TR_DIR = {0.5: 0.3613286168882225847, 3.0: 0.27821707855771545928,
          50.0: 0.045952409605572823865}
TR_N0 = {3.0: 0.31871908445333081074, 50.0: 0.046150348192422785278}
TR_N1 = {3.0: 0.33356145460246389167, 50.0: 0.046154346127694045497}
TR_N1_MU2_A05_Z7 = 0.19371893432366320966
TR_DIR_MU2_A05_Z7 = 0.1837703982882090176


def test_model_green_diagonal_closed_form():
    g = trace.green_diag(MODEL, 3.0)
    for x, ref in G_DIR_Z3.items():
        assert g(x) == pytest.approx(ref, rel=1e-10)


def test_green_diag_matches_bessel_formula():
    spec = OperatorSpec(a=0.5, mu=2.0)
    z = 1.7
    xs = np.linspace(0.5, 6.0, 30)
    ia, ka = bessel.bessel_i(z, 1.0), bessel.bessel_k(z, 1.0)
    ref = (bessel.bessel_ik_product(z, 2 * xs) - ia / ka * bessel.bessel_k(z, 2 * xs) ** 2) / xs
    got = trace.green_diag(spec, z)(xs)
    assert np.allclose(got, ref, rtol=1e-10, atol=1e-15)


def test_green_kernel_symmetry():
    rng = np.random.default_rng(7)
    spec = OperatorSpec(bc=BoundaryCondition.neumann(1.0), potential=V)
    for x, y in rng.uniform(1.0, 8.0, size=(20, 2)):
        assert trace.green_kernel(spec, 1.3, x, y) == pytest.approx(
            trace.green_kernel(spec, 1.3, y, x), rel=1e-12)


def test_green_kernel_diagonal_agrees():
    spec = OperatorSpec(bc=BoundaryCondition.neumann(1.0), potential=V)
    g = trace.green_diag(spec, 2.0)
    for x in (1.0, 1.7, 3.0, 6.5):
        assert trace.green_kernel(spec, 2.0, x, x) == pytest.approx(g(x), rel=1e-9)


@pytest.mark.parametrize("spec", [MODEL, N1, PERTURBED])
def test_x2_green_bounded(spec):
    xs = np.geomspace(spec.a, 1e3, 200)
    for z in (0.5, 5.0, 50.0):
        v = xs ** 2 * trace.green_diag(spec, z)(xs)
        assert np.all(np.isfinite(v))
        assert np.max(np.abs(v)) <= 2.0
        # far from the wall x G tends to 1 / (2 sqrt(z^2 + mu^2 x^2))
        far = xs[-1] / (2 * math.hypot(z, spec.mu * xs[-1]))
        assert v[-1] == pytest.approx(far, rel=1e-3)


def test_green_uniform_product_large_z():
    z = 200.0
    xs = np.linspace(3.0, 40.0, 12)
    g = trace.green_diag(MODEL, z)(xs)
    # away from a the K^2 boundary term is negligible and x G = I K
    up, err = bessel.uniform_product(z, xs / z)
    assert np.allclose(xs * g, up, rtol=1e-6)
    lead = 1 / (2 * np.sqrt(z * z + xs * xs))
    assert np.allclose(xs * g, lead, rtol=1e-4)


def test_green_diag_wronskian_recorded():
    g = trace.green_diag(MODEL, 2.0)
    assert float(g.wronskian_norm) == pytest.approx(bessel.bessel_k(2.0, 1.0), rel=1e-12)


def test_proximity_guard():
    # alpha with lambda_alpha(z=1) = 0 makes -1 an eigenvalue
    lam0 = neumann_lambda(N0, 1.0)
    bad = OperatorSpec(bc=BoundaryCondition.neumann(lam0))
    with pytest.raises(NumericalError):
        trace.resolvent_trace(bad, 1.0)


# -- traces ---------------------------------------------------------------------


@pytest.mark.parametrize("spec,table", [(MODEL, TR_DIR), (N0, TR_N0), (N1, TR_N1)])
def test_trace_matches_oracle(spec, table):
    for z, ref in table.items():
        assert trace.resolvent_trace(spec, z) == pytest.approx(ref, rel=1e-12)


def test_trace_scaled_parameters():
    assert trace.resolvent_trace(OperatorSpec(0.5, 2.0, BoundaryCondition.neumann(1.0)), 7.0) == \
        pytest.approx(TR_N1_MU2_A05_Z7, rel=1e-12)
    assert trace.resolvent_trace(OperatorSpec(0.5, 2.0), 7.0) == pytest.approx(TR_DIR_MU2_A05_Z7, rel=1e-12)


def test_trace_at_zero_shift():
    t = trace.resolvent_trace(MODEL, 0.0)
    assert math.isfinite(t) and t > 0


@given(st.sampled_from([MODEL, N1, PERTURBED, OperatorSpec(0.5, 2.0, BoundaryCondition.neumann(0.0))]),
       st.floats(0.1, 300.0), st.floats(1.01, 3.0))
def test_trace_positive_and_decreasing(spec, z, factor):
    t1 = trace.resolvent_trace(spec, z)
    t2 = trace.resolvent_trace(spec, z * factor)
    assert t1 > 0 and t2 > 0
    assert t2 < t1


def test_dirichlet_below_neumann():
    for z in (1.0, 10.0, 100.0):
        assert trace.resolvent_trace(MODEL, z) < trace.resolvent_trace(N0, z)


def test_weighted_trace_of_constant_weight_on_support():
    # weight = V and the Green diagonal integrated directly
    spec = OperatorSpec(bc=BoundaryCondition.neumann(1.0))
    g = trace.green_diag(spec, 1.0)
    ref = gk_integrate_to_inf(lambda x: V(x) * g(x), 1.0, abstol=1e-15, reltol=1e-12)
    assert trace.weighted_trace(spec, 1.0, V) == pytest.approx(ref, rel=1e-9)


def slope(zs, vals):
    return float(np.polyfit(np.log(zs), np.log(np.abs(vals)), 1)[0])


def test_bc_difference_order():
    zs = np.geomspace(20, 400, 12)
    d = trace.resolvent_traces(MODEL, zs) - trace.resolvent_traces(N1, zs)
    assert slope(zs, d) <= -2 + 0.05


def test_perturbation_difference_order():
    zs = np.geomspace(20, 400, 12)
    d = trace.resolvent_traces(PERTURBED, zs) - trace.resolvent_traces(MODEL, zs)
    # O(z^(-2 - min(1, eps))) with eps >= 1 for an exponentially decaying V
    assert slope(zs, d) <= -2.9


@pytest.mark.parametrize("spec", [OperatorSpec(bc=BoundaryCondition.neumann(1.0)),
                                  OperatorSpec(bc=BoundaryCondition.neumann(1.0), potential=V)])
@pytest.mark.parametrize("z", [0.7, 2.0, 6.0])
def test_squared_l2_norm_identity(spec, z):
    # int psi^2 = 1/(2 z mu_alpha^2) d lambda_alpha/dz with mu_alpha = 1/(sqrt(a) psi(a))
    psi = solve_psi(spec, z)
    h0, _, s0 = psi.scaled(np.array(spec.a))

    def sq(x):
        h, _, s = psi.scaled(np.asarray(x))
        return (h * np.exp(s - s0)) ** 2

    lhs = gk_integrate_to_inf(sq, spec.a, abstol=1e-16, reltol=1e-13)
    d = 1e-4
    lam = lambda t: neumann_lambda(spec, t, psi=solve_psi(spec, t))
    dlam = (lam(z + d) - lam(z - d)) / (2 * d)
    rhs = spec.a * float(h0) ** 2 / (2 * z) * dlam
    assert lhs == pytest.approx(rhs, rel=1e-7)


# -- expansion fit --------------------------------------------------------------


@pytest.fixture(scope="module")
def fits():
    return {name: trace.fit_trace_expansion(s) for name, s in
            (("D", MODEL), ("N0", N0), ("N1", N1), ("DV", PERTURBED),
             ("N1V", OperatorSpec(bc=BoundaryCondition.neumann(1.0), potential=V)))}


def test_fit_leading_coefficients(fits):
    for e in fits.values():
        assert e.b0 == pytest.approx(0.5, abs=1e-6)
        assert e.a0 == pytest.approx(0.5 * math.log(2.0), abs=1e-5)
        assert abs(e.a1) == pytest.approx(0.25, abs=1e-3)
        assert e.fit_window == (20.0, 400.0)


def test_fit_a0_depends_on_mu_a():
    e = trace.fit_trace_expansion(OperatorSpec(0.5, 2.0))
    assert e.fit_window == (20.0, 400.0)
    e = trace.fit_trace_expansion(OperatorSpec(1.0, 2.0))
    assert e.a0 == pytest.approx(0.5 * math.log(1.0), abs=1e-5)
    assert e.fit_window == (40.0, 800.0)


def test_fit_boundary_sign_of_a1(fits):
    # Dirichlet resolvent is dominated by the Neumann-type one
    assert fits["D"].a1 < 0 < fits["N0"].a1
    assert fits["N1"].a1 - fits["D"].a1 == pytest.approx(0.5, abs=2e-3)


def log_det_log_coefficient(spec):
    """Coefficient of log(nu) in log det(H + nu^2) from the Wronskian formula."""
    nus = np.geomspace(20, 400, 25)
    vals = [detz.detz_wronskian(spec.with_nu(n), check_drift=False).log_value for n in nus]
    b = ExpansionBasis.of([(1, 1), (1, 0), (0, 1), (0, 0), (-1, 0), (-2, 0), (-3, 0)])
    return fit_expansion(nus, np.array(vals), b).coeff(0, 1)


@pytest.mark.parametrize("name,spec", [("D", MODEL), ("N1", N1)])
def test_a1_consistent_with_determinant(fits, name, spec):
    # d/dnu log det = 2 nu Tr, so a log(nu) term c in log det gives a1 = c / 2
    c = log_det_log_coefficient(spec)
    assert fits[name].a1 == pytest.approx(c / 2, abs=1e-3)


def test_fit_potential_independent(fits):
    for base, pert in (("D", "DV"), ("N1", "N1V")):
        e0, e1 = fits[base], fits[pert]
        for attr, (a, k) in (("b0", (-1, 1)), ("a0", (-1, 0)), ("a1", (-2, 0))):
            u = math.hypot(e0.uncertainty(a, k), e1.uncertainty(a, k))
            assert abs(getattr(e0, attr) - getattr(e1, attr)) < 3 * u + 1e-6


@pytest.mark.parametrize("spec", [MODEL, N1, PERTURBED])
def test_no_log_term_at_order_two(spec):
    e = trace.fit_trace_expansion(spec, extra_terms=[(-2, 1)])
    c = e.extra.coeff(-2, 1)
    assert abs(c) < 3 * e.uncertainty(-2, 1)


def test_fit_grid_validation():
    with pytest.raises(ValueError):
        trace.fit_trace_expansion(MODEL, np.geomspace(2, 40, 20))
