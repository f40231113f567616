r"""
Zeta-regularised determinants ``det(H + nu^2)`` on ``[a, inf)``.

Three routes are provided and cross-checked:

* :func:`detz_wronskian`, the closed formula
  ``det(H + nu^2) = sqrt(2/pi) * a^2 W(psi, phi)(a)`` with ``psi``
  normalised at infinity and ``phi`` at the boundary;
* :func:`detz_trace_integral`, ``log det(H + nu^2) = -2 regint_nu^inf
  z Tr(H + z^2)^{-1} dz`` with the partie-finie tail from a fitted
  expansion;
* :func:`friedlander_check`, products of discrete eigenvalues.

All logarithms are carried explicitly, as the determinants overflow for
moderately large shifts.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import bessel
from .operator import (BoundaryCondition, NumericalError, OperatorSpec,
                       model_phi, model_psi, neumann_lambda, solve_phi, solve_psi)
from .potential import Potential
from .quadrature import gk_integrate
from .regfit import ExpansionBasis, fit_expansion, reg_int_semiinf, reg_lim
from .trace import default_z_grid, resolvent_trace, resolvent_traces, weighted_trace

log = logging.getLogger(__name__)

LOG_SQRT_2_OVER_PI = 0.5 * math.log(2.0 / math.pi)
DET_BASIS = ExpansionBasis.of([(0, 1), (0, 0), (-1, 0), (-2, 1), (-2, 0)])
# higher orders fitted alongside so they do not leak into the finite part
DET_REMAINDER = ((-3, 1), (-3, 0), (-4, 0), (-5, 0))
LIM_BASIS = ExpansionBasis.of([(1, 1), (1, 0), (0, 1), (0, 0)])
# O(1/z) corrections of log K_z(mu a) are fitted but not reported
LIM_REMAINDER = ((-1, 0), (-2, 0))
TRACE_SPLIT = 30.0
TRACE_QUAD_TOL = 1e-11
FD_NOISE = 1e-6
ZERO_TOL = 1e-13


@dataclass
class DetResult:
    value: float
    log_value: float
    method: str
    wronskian_at_a: float | None = None
    sign: float = 1.0
    is_zero: bool = False
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {"value": self.value, "log_value": self.log_value, "method": self.method,
                "wronskian_at_a": self.wronskian_at_a, "sign": self.sign,
                "is_zero": self.is_zero, "diagnostics": _jsonable(self.diagnostics)}


def _jsonable(d):
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out[k] = _jsonable(v)
        elif isinstance(v, (np.floating, np.integer)):
            out[k] = v.item()
        elif isinstance(v, np.ndarray):
            out[k] = v.tolist()
        else:
            out[k] = v
    return out


def _exp_or_inf(x):
    return math.exp(x) if x < 709.0 else math.inf


# ---------------------------------------------------------------------------
# Wronskian route


def log_wronskian_at_a(spec: OperatorSpec, z=None, closed_form=False):
    """``(sign, log|a^2 W(psi_z, phi_z)(a)|, psi, phi)``."""
    z = spec.nu if z is None else float(z)
    if closed_form:
        psi, phi = model_psi(z, spec), model_phi(z, spec)
    else:
        psi, phi = solve_psi(spec, z), solve_phi(spec, z)
    a = np.asarray(spec.a)
    h, hp, sh = psi.scaled(a)
    f, fp, sf = phi.scaled(a)
    m = float(spec.a ** 2 * (h * fp - hp * f))
    e = float(sh + sf)
    if m == 0.0:
        return 0.0, -math.inf, psi, phi
    return math.copysign(1.0, m), math.log(abs(m)) + e, psi, phi


def _drift(psi, phi, spec, n=7):
    """Relative spread of ``x^2 W(psi, phi)`` over ``[a, a + 2]``."""
    hi = min(phi.valid_interval[1], spec.a + 2.0)
    xs = np.linspace(spec.a, hi, n)
    h, hp, sh = psi.scaled(xs)
    f, fp, sf = phi.scaled(xs)
    w = xs ** 2 * (h * fp - hp * f) * np.exp(sh + sf - (sh[0] + sf[0]))
    return float(np.max(np.abs(w - w[0])) / abs(w[0])) if w[0] != 0 else math.inf


def detz_wronskian(spec: OperatorSpec, closed_form=False, check_drift=True) -> DetResult:
    """``det(H + nu^2) = sqrt(2/pi) a^2 W(psi, phi)(a)``.

    ``psi`` comes from the Volterra series and ``phi`` from the forward ODE
    (or both from Bessel closed forms with ``closed_form=True`` for the model).
    A vanishing Wronskian means ``-nu^2`` is an eigenvalue; the determinant
    is then 0 and ``is_zero`` is set.
    """
    sgn, lw, psi, phi = log_wronskian_at_a(spec, closed_form=closed_form)
    diag = {"lim_constant": LOG_SQRT_2_OVER_PI, "nu": spec.nu,
            "volterra_terms_used": psi.diagnostics.get("volterra_terms_used", 0),
            "tail_bound": psi.diagnostics.get("tail_bound", 0.0)}
    # relative size of W against the natural scale K_nu(mu a)
    ref = bessel.ik_scaled(spec.nu, spec.mu * spec.a)
    log_ref = math.log(float(ref.mk)) - float(ref.eta)
    if sgn == 0.0 or lw - log_ref < math.log(ZERO_TOL):
        diag["wronskian_relative"] = 0.0 if sgn == 0.0 else math.exp(lw - log_ref)
        return DetResult(0.0, -math.inf, "Wronskian", 0.0, 0.0, True, diag)
    if check_drift and not closed_form:
        diag["wronskian_drift"] = _drift(psi, phi, spec)
    lv = LOG_SQRT_2_OVER_PI + lw
    w = sgn * _exp_or_inf(lw)
    return DetResult(sgn * _exp_or_inf(lv), lv, "Wronskian", w, sgn, False, diag)


# ---------------------------------------------------------------------------
# trace-integral route


def _z_tr(spec):
    return lambda zs: np.asarray(zs) * resolvent_traces(spec, zs)


def _pow2_breaks(lo, hi):
    k0 = math.floor(math.log2(max(lo, 1e-3))) + 1
    out = []
    k = k0
    while 2.0 ** k < hi:
        if 2.0 ** k > lo:
            out.append(2.0 ** k)
        k += 1
    return out


def trace_split(spec):
    return TRACE_SPLIT * max(1.0, spec.mu * spec.a)


def detz_trace_integral(spec: OperatorSpec, split=None, quad_tol=TRACE_QUAD_TOL) -> DetResult:
    """``log det(H + nu^2) = -2 regint_nu^inf z Tr(H + z^2)^{-1} dz``.

    Quadrature runs over ``[nu, X*]`` with breakpoints at powers of two (so
    that traces are reused across shifts); beyond ``X*`` the integrand is
    fitted in the basis ``z^0 log z, z^0, z^-1, z^-2 log z, z^-2`` (plus
    four higher-order columns) and the finite part of the fitted tail is
    added.
    """
    nu = spec.nu
    X = trace_split(spec) if split is None else float(split)
    if X <= nu:
        X = 2.0 * nu
    f = _z_tr(spec.with_nu(0.0))
    basis = DET_BASIS.extended(DET_REMAINDER)
    res = reg_int_semiinf(f, nu, basis, split=X, quad_tol=quad_tol,
                          breakpoints=_pow2_breaks(nu, X), full_output=True)
    lv = -2.0 * res.value
    m = res.model
    diag = {"split": res.split, "quad_part": res.quad_part, "tail_part": res.tail_part,
            "fit_condition": m.condition_number, "fit_residual": m.residual_rms,
            "quad_err": res.quad_err,
            "tail_coefficients": {f"{a:g},{k}": float(c) for (a, k), c in
                                  zip(m.basis.terms, m.coeffs)}}
    return DetResult(_exp_or_inf(lv), lv, "TraceIntegral", None, 1.0, False, diag)


def trace_log_ratio(spec: OperatorSpec, nu0, nu1, quad_tol=1e-12):
    """``log det(H + nu1^2) - log det(H + nu0^2) = 2 int_nu0^nu1 z Tr dz``."""
    f = _z_tr(spec.with_nu(0.0))
    lo, hi = sorted((float(nu0), float(nu1)))
    v = gk_integrate(f, lo, hi, abstol=quad_tol, reltol=quad_tol,
                     breakpoints=_pow2_breaks(lo, hi))
    return 2.0 * v if nu1 >= nu0 else -2.0 * v


# ---------------------------------------------------------------------------
# regularised limit of the Wronskian


def lim_log_wronskian(spec: OperatorSpec, z_grid=None, full_output=False):
    """``LIM_{z -> inf} log(a^2 W(psi_z, phi_z)(a))``; equals ``log sqrt(pi/2)``."""
    zs = default_z_grid(spec) if z_grid is None else np.asarray(z_grid, dtype=float)
    vals = []
    for z in zs:
        sgn, lw, _, _ = log_wronskian_at_a(spec, z)
        if sgn <= 0:
            raise NumericalError(f"Wronskian not positive at z={z:g}")
        vals.append(lw)
    model = fit_expansion(zs, np.array(vals), LIM_BASIS.extended(LIM_REMAINDER))
    c = reg_lim(model)
    return (c, model) if full_output else c


# ---------------------------------------------------------------------------
# Dirichlet / Neumann


def dirichlet_neumann_ratio(spec: OperatorSpec, alpha, nu=None) -> float:
    """``lambda_alpha = -a (alpha + psi'(a)/psi(a))`` with ``psi = psi_nu``.

    Equals ``det(H_Neumann + nu^2) / det(H_Dirichlet + nu^2)`` for the
    boundary condition ``f'(a) + alpha f(a) = 0``.
    """
    nu = spec.nu if nu is None else float(nu)
    s = spec.with_bc(BoundaryCondition.neumann(alpha))
    return neumann_lambda(s, nu, psi=solve_psi(s, nu))


# ---------------------------------------------------------------------------
# variation


class VariationCheck(NamedTuple):
    lhs: float
    rhs: float


def fd_step(noise=FD_NOISE):
    """Central-difference step balancing truncation against ``noise``."""
    return noise ** (1.0 / 3.0)


def variation_check(spec: OperatorSpec, direction: Potential, t_step=None) -> VariationCheck:
    """Central differences in t of log det(H + t V' + nu^2).

    ``lhs`` differentiates the trace-integral determinant, ``rhs`` the log
    Wronskian; both are d/dt at t = 0.
    """
    if direction.is_zero:
        return VariationCheck(0.0, 0.0)
    h = fd_step() if t_step is None else float(t_step)
    sp = spec.with_potential(spec.potential.plus(direction, h))
    sm = spec.with_potential(spec.potential.plus(direction, -h))
    lhs = (detz_trace_integral(sp).log_value - detz_trace_integral(sm).log_value) / (2 * h)
    _, lp, _, _ = log_wronskian_at_a(sp)
    _, lm, _, _ = log_wronskian_at_a(sm)
    return VariationCheck(float(lhs), float((lp - lm) / (2 * h)))


def green_variation(spec: OperatorSpec, direction: Potential) -> float:
    """``Tr(V' (H + nu^2)^{-1}) = int V'(x) G_nu(x, x) dx``."""
    if direction.is_zero:
        return 0.0
    return weighted_trace(spec, spec.nu, direction)


# ---------------------------------------------------------------------------
# Fredholm determinant


def friedlander_check(spec: OperatorSpec, z, eigs, lambda_cut=None, tail=None):
    """``(prod (1 + z/lambda_n) * tail, det(H + z) / det(H))``.

    The right side uses the Wronskian formula at shifts ``sqrt(z)`` and 0.
    ``tail`` overrides the Weyl-law estimate of the omitted factors.
    """
    from .spectral import fredholm_tail
    z = float(z)
    eigs = np.sort(np.asarray(eigs, dtype=float))
    if z == 0.0:
        return 1.0, 1.0
    if z < 0:
        raise ValueError("z must be >= 0")
    logp = float(np.sum(np.log1p(z / eigs)))
    if tail is None:
        cut = float(eigs[-1]) if lambda_cut is None else float(lambda_cut)
        tail = fredholm_tail(eigs, z, cut, mu_a=spec.mu * spec.a).value
    lhs = math.exp(logp + tail)
    d1 = detz_wronskian(spec.with_nu(math.sqrt(z)), check_drift=False)
    d0 = detz_wronskian(spec.with_nu(0.0), check_drift=False)
    if d0.is_zero:
        raise NumericalError("H is not invertible: det(H) = 0")
    return lhs, math.exp(d1.log_value - d0.log_value) * d1.sign * d0.sign


# ---------------------------------------------------------------------------
# consistency matrix


MATRIX_MU = (0.5, 1.0, 2.0)
MATRIX_A = (0.5, 1.0)
MATRIX_BC = ("dirichlet", "neumann0", "neumann1")
MATRIX_V = ("zero", "power_exp")
MATRIX_NU = (1.0, 2.0)
PERTURBATION = Potential.power_exp(0.3, 0.5, 1.0)


def _bc(name):
    return {"dirichlet": BoundaryCondition.dirichlet(),
            "neumann0": BoundaryCondition.neumann(0.0),
            "neumann1": BoundaryCondition.neumann(1.0)}[name]


def matrix_specs(mus=MATRIX_MU, as_=MATRIX_A, bcs=MATRIX_BC, vs=MATRIX_V, nus=MATRIX_NU):
    for mu, a, bc, v, nu in itertools.product(mus, as_, bcs, vs, nus):
        pot = Potential.zero() if v == "zero" else PERTURBATION
        yield (mu, a, bc, v, nu), OperatorSpec(a, mu, _bc(bc), pot, nu)


def compare_matrix(tol=1e-3, **kw):
    """Wronskian vs trace-integral determinant over the consistency matrix."""
    rows = []
    for key, spec in matrix_specs(**kw):
        w = detz_wronskian(spec)
        t = detz_trace_integral(spec)
        # relative error of the determinant = |exp(dlog) - 1|
        rel = abs(math.expm1(t.log_value - w.log_value)) if not w.is_zero else math.inf
        ratio = w.value / w.wronskian_at_a if w.wronskian_at_a else math.nan
        rows.append({"mu": key[0], "a": key[1], "bc": key[2], "potential": key[3],
                     "nu": key[4], "log_det_wronskian": w.log_value,
                     "log_det_trace": t.log_value, "rel_diff": rel,
                     "constant": ratio, "pass": bool(rel < tol)})
        log.info("matrix cell %s rel=%.3g", key, rel)
    return rows
