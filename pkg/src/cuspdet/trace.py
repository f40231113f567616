r"""
Resolvent trace ``Tr (H + z^2)^{-1}`` from the diagonal of the Green function.

With ``psi`` the L2 solution and ``phi`` the solution satisfying the boundary
condition, the kernel is ``G(x, y) = phi(min) psi(max) / (p W(psi, phi))``.
On the diagonal this is evaluated without ever forming the exponentially
growing ``phi``: writing ``psi = h e^{-eta}`` (``eta`` the Debye exponent of
``K_z(mu x)``) and using reduction of order,

.. math::

    G(x, x) = h(x)^2 \Big[ c\, e^{-2(\eta(x) - \eta(a))}
              + \int_a^x e^{-2(\eta(x) - \eta(y))} \frac{dy}{y^2 h(y)^2} \Big]

with ``c = 0`` for Dirichlet and ``c = -1/(a^2 h(a) (h'(a) + alpha h(a)))``
for the Neumann-type condition (``h'`` the scaled derivative).  Beyond the
potential cutoff ``X_W`` the L2 solution is the model one, and

.. math::

    G(x, x) = x^{-1} \big[ \hat I \hat K + \beta\, \hat K^2
              e^{-2(\eta(x) - \eta(X_W))} \big]

in terms of the scaled Bessel mantissas, so the infinite tail of the trace
integral is two one-dimensional integrals of smooth, explicitly decaying
functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import bessel
from .operator import (NumericalError, OperatorSpec, PanelGrid,
                       initial_data, model_phi, solve_phi, solve_psi)
from .quadrature import gk_integrate
from .regfit import ExpansionBasis, ExpansionModel, FitError, fit_expansion

PROXIMITY_GUARD = 1e-10
TAIL_DECAY = 40.0       # integrate the K^2 tail until exp(-2 d eta) < e^-40
TRACE_RTOL = 1e-12
TRACE_BASIS = ExpansionBasis.of([(-1, 1), (-1, 0), (-2, 0), (-3, 1), (-3, 0)])
# fitted but not reported; keeps O(z^-5) terms out of the reported ones
TRACE_REMAINDER = ((-4, 0), (-5, 0))
DEFAULT_Z_RANGE = (20.0, 400.0)
DEFAULT_Z_POINTS = 25


@dataclass
class _Pieces:
    """Everything needed to evaluate ``G(x, x)`` at a given z."""

    spec: OperatorSpec
    z: float
    x_w: float
    c: float                 # boundary coefficient (scaled by e^{2 eta_a})
    eta_a: float
    beta: float              # tail coefficient beyond X_W
    eta_w: float
    grid: PanelGrid | None
    g_nodes: np.ndarray | None
    wronskian_norm: float    # p W(psi, phi) in units of the psi scale e^{-eta_a}
    psi: object


def _pieces(spec: OperatorSpec, z: float) -> _Pieces:
    a, mu = spec.a, spec.mu
    psi = solve_psi(spec, z)
    ha, hpa, _ = psi.scaled(np.array(a))
    ha, hpa = float(ha), float(hpa)
    eta_a = float(bessel.debye_eta(z, mu * a))
    ra = bessel.ik_scaled(z, mu * a)
    # p W(psi, phi)(a) with psi = h e^{-eta_a}; in those units
    f0, fp0 = initial_data(spec)
    wn = a * a * (ha * fp0 - hpa * f0)
    # natural sizes: h(a) ~ a^-1/2 K_a, p W ~ a^1/2 K_a (times lambda ~ z)
    scale = a ** -0.5 * abs(float(ra.mk))
    if spec.bc.is_dirichlet:
        if abs(ha) < PROXIMITY_GUARD * scale:
            raise NumericalError("psi(a) vanishes: -z^2 is a Dirichlet eigenvalue")
        c = 0.0
    else:
        r = hpa + spec.bc.alpha * ha
        if abs(wn) < PROXIMITY_GUARD * a * scale * max(1.0, z):
            raise NumericalError("Wronskian vanishes: -z^2 is (numerically) an eigenvalue")
        c = -1.0 / (a * a * ha * r)
    if psi.diagnostics.get("sup_f1", 0.0) >= 1.0:
        raise NumericalError("perturbed L2 solution may vanish on the cut-off region")
    x_w = float(psi.diagnostics.get("x_cut", a))
    if x_w > a:
        grid = psi.grid
        h = grid.mk * (1.0 + psi.f1) / np.sqrt(grid.x)
        sig = grid.left_weighted(1.0 / (grid.x ** 2 * h ** 2))
        g_nodes = h ** 2 * (c * np.exp(-2.0 * (grid.eta - eta_a)) + sig)
        eta_w = float(grid.eta[-1, -1])
        sig_w = float(sig[-1, -1])
    else:
        grid = None
        g_nodes = None
        eta_w = eta_a
        sig_w = 0.0
    rw = bessel.ik_scaled(z, mu * x_w)
    beta = c * math.exp(-2.0 * (eta_w - eta_a)) + sig_w - float(rw.mi) / float(rw.mk)
    return _Pieces(spec, float(z), x_w, c, eta_a, beta, eta_w, grid, g_nodes, wn, psi)


def _tail_values(p: _Pieces, x):
    d = bessel.ik_scaled(p.z, p.spec.mu * x)
    return (d.mi * d.mk + p.beta * d.mk ** 2 * np.exp(-2.0 * (d.eta - p.eta_w))) / x


class GreenDiag:
    """Diagonal ``G_z(x, x)`` of the resolvent kernel of ``H + z^2``."""

    def __init__(self, spec: OperatorSpec, z):
        self.spec = spec
        self.z = float(z)
        self._p = _pieces(spec, self.z)
        # p W(psi, phi) for psi normalised by psi sqrt(x) / K(mu x) -> 1;
        # kept as a log when it leaves the double range
        m, e = self._p.wronskian_norm, -self._p.eta_a
        self.log_abs_wronskian = math.log(abs(m)) + e if m != 0 else -math.inf
        self.wronskian_norm = (m * math.exp(e) if abs(e) < 700
                               else bessel.ScaledValue(m, e))

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.spec.a * (1 - 1e-13)):
            raise ValueError("x must be >= a")
        flat = np.atleast_1d(x).ravel()
        out = np.empty_like(flat)
        p = self._p
        inner = flat <= p.x_w
        if p.grid is not None and np.any(inner):
            out[inner] = p.grid.interp(p.g_nodes, flat[inner])
        if np.any(~inner) or p.grid is None:
            m = ~inner if p.grid is not None else np.ones_like(flat, dtype=bool)
            out[m] = _tail_values(p, flat[m])
        return out.reshape(x.shape) if x.ndim else float(out[0])

    __call__ = eval


def green_diag(spec: OperatorSpec, z) -> GreenDiag:
    """The diagonal Green function; raises ``NumericalError`` near an eigenvalue."""
    return GreenDiag(spec, z)


def green_kernel(spec: OperatorSpec, z, x, y):
    """Off-diagonal kernel ``phi(min) psi(max) / p W(psi, phi)`` from solutions."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lo = np.minimum(x, y)
    hi = np.maximum(x, y)
    psi = solve_psi(spec, z)
    phi = model_phi(z, spec) if spec.is_model else solve_phi(
        spec, z, x_max=max(float(np.max(hi)) * 1.01, spec.a + 1.0))
    fp, fpp, sp = phi.scaled(np.asarray(spec.a))
    hp, hpp, sh = psi.scaled(np.asarray(spec.a))
    wm = spec.a ** 2 * (hp * fpp - hpp * fp)
    ws = sh + sp
    f_lo, _, s_lo = phi.scaled(lo)
    h_hi, _, s_hi = psi.scaled(hi)
    return f_lo * h_hi / wm * np.exp(s_lo + s_hi - ws)


# ---------------------------------------------------------------------------
# trace


def _tail_integrals(p: _Pieces, rtol=TRACE_RTOL):
    z, mu, X = p.z, p.spec.mu, p.x_w

    # int_X^inf I K / x dx with x = X / u
    def f_ik(u):
        x = X / u
        d = bessel.ik_scaled(z, mu * x)
        return d.mi * d.mk / u

    t_ik = gk_integrate(f_ik, 0.0, 1.0, abstol=0.0, reltol=rtol,
                        breakpoints=_u_breaks(z, mu, X))
    if p.beta == 0.0:
        return t_ik, 0.0
    # K^2 e^{-2(eta - eta_W)} / x decays like exp(-2 sqrt(z^2 + mu^2 x^2) ...)
    x_end = X
    while 2.0 * (float(bessel.debye_eta(z, mu * x_end)) - p.eta_w) < TAIL_DECAY:
        x_end = X + 2.0 * (x_end - X) + X / math.hypot(z, mu * X) * 4.0
    g = PanelGrid(p.spec, z, X, x_end)
    t_k2 = g.integrate(g.mk ** 2 * np.exp(-2.0 * (g.eta - p.eta_w)) / g.x)
    return t_ik, t_k2


def _u_breaks(z, mu, X):
    # the Bessel transition t ~ z sits at u = mu X / z
    u0 = mu * X / max(z, 1e-300)
    return [u for u in (u0 / 4, u0, 4 * u0) if 0 < u < 1]


def _trace_from_pieces(p: _Pieces):
    t_ik, t_k2 = _tail_integrals(p)
    inner = p.grid.integrate(p.g_nodes) if p.grid is not None else 0.0
    return inner + t_ik + p.beta * t_k2


@lru_cache(maxsize=4096)
def _trace_cached(spec: OperatorSpec, z: float) -> float:
    return _trace_from_pieces(_pieces(spec, z))


def resolvent_trace(spec: OperatorSpec, z) -> float:
    """``Tr (H + z^2)^{-1} = int_a^inf G_z(x, x) dx``.

    The shift ``nu`` of ``spec`` plays no role here; values are cached per
    (spec without shift, z).
    """
    z = float(z)
    if not z >= 0 or not math.isfinite(z):
        raise ValueError("z must be finite and >= 0")
    return _trace_cached(spec.with_nu(0.0), z)


def resolvent_traces(spec: OperatorSpec, zs):
    return np.array([resolvent_trace(spec, z) for z in np.atleast_1d(zs)])


def weighted_trace(spec: OperatorSpec, z, weight):
    """``Tr (w (H + z^2)^{-1}) = int w(x) G_z(x, x) dx`` for a potential-like ``w``.

    ``w`` must be a callable on arrays that is negligible beyond its
    ``support_end``.
    """
    p = _pieces(spec, float(z))
    end = max(float(weight.support_end(spec.a)), spec.a)
    bps = [b for b in weight.breakpoints() if spec.a < b < end]
    if p.grid is not None:
        bps = sorted(set(bps) | {p.x_w})
    gd = GreenDiag.__new__(GreenDiag)
    gd.spec, gd.z, gd._p = spec, float(z), p
    return gk_integrate(lambda x: weight(x) * gd.eval(x), spec.a, end,
                        abstol=1e-15, reltol=1e-12, breakpoints=bps)


# ---------------------------------------------------------------------------
# expansion


@dataclass
class TraceExpansion:
    """``Tr ~ b0 log z / z + a0 / z + a1 / z^2 + ...`` fitted on ``fit_window``.

    ``extra`` is the full fitted model; ``check`` the same fit with one more
    remainder order, used to estimate the truncation part of the
    coefficient uncertainty.
    """

    b0: float
    a0: float
    a1: float
    extra: ExpansionModel
    fit_window: tuple
    check: ExpansionModel | None = None

    def uncertainty(self, alpha, k=0):
        """Fit standard error combined with the truncation shift."""
        se = self.extra.coeff_stderr(alpha, k)
        if self.check is None:
            return se
        return math.hypot(se, self.check.coeff(alpha, k) - self.extra.coeff(alpha, k))


def default_z_grid(spec: OperatorSpec, n=DEFAULT_Z_POINTS):
    s = max(1.0, spec.mu * spec.a)
    return np.geomspace(DEFAULT_Z_RANGE[0] * s, DEFAULT_Z_RANGE[1] * s, n)


def fit_trace_expansion(spec: OperatorSpec, z_grid=None, extra_terms=()) -> TraceExpansion:
    """Fit ``Tr = b0 log z / z + a0 / z + a1 / z^2 + ...`` on ``z_grid``.

    The basis is ``z^-1 log z, z^-1, z^-2, z^-3 log z, z^-3`` plus fitted
    remainder orders ``z^-4, z^-5`` and any ``extra_terms``.  For the model
    operator one finds ``b0 = 1/2``, ``a0 = log(2/(mu a))/2`` and
    ``a1 = -1/4`` (Dirichlet) or ``+1/4`` (Neumann-type).
    """
    zs = default_z_grid(spec) if z_grid is None else np.asarray(z_grid, dtype=float)
    if zs.min() < 10.0 * max(spec.mu, 1.0) * (1 - 1e-12):
        raise ValueError("z grid must start at >= 10 max(mu, 1)")
    basis = TRACE_BASIS.extended(list(TRACE_REMAINDER) + list(extra_terms))
    tr = resolvent_traces(spec, zs)
    model = fit_expansion(zs, tr, basis)
    lowest = min(a for a, _ in basis.terms)
    try:
        check = fit_expansion(zs, tr, basis.extended([(lowest - 1, 0)]))
    except FitError:
        check = None
    return TraceExpansion(model.coeff(-1, 1), model.coeff(-1, 0), model.coeff(-2, 0),
                          model, model.fit_window, check)
