r"""
Solutions of :math:`(H + z^2) f = 0` for

.. math::

    H f = -(x^2 f')' + (x^2 \mu^2 - \tfrac14 + V(x)) f \quad\text{on } [a, \infty).

Two normalised solutions are built for each spectral parameter ``z``:

``psi``
    the square-integrable solution with ``psi(x) sqrt(x) / K_z(mu x) -> 1``.
    For ``V = 0`` it is ``x**-1/2 K_z(mu x)``; otherwise
    ``psi = psi_0 (1 + f1)`` where ``f1`` solves a Volterra equation whose
    Neumann series is summed on Chebyshev panels.
``phi``
    the solution satisfying the boundary condition at ``a``:
    ``phi(a) = 0, phi'(a) = a**-3/2`` (Dirichlet) or
    ``phi(a) = a**-1/2, phi'(a) = -alpha a**-1/2`` for ``f'(a) + alpha f(a) = 0``.

All values are carried in exponentially scaled form: a solution returns
``(ft, fpt, s)`` with ``f = ft * exp(s)`` and ``f' = fpt * exp(s)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp

from . import bessel
from .potential import Potential, SpecError
from .quadrature import cheb_panel

__all__ = [
    "BoundaryCondition", "OperatorSpec", "Potential", "SpecError", "Solution",
    "NumericalError", "model_psi", "model_phi", "solve_phi", "solve_psi",
    "wronskian", "wronskian_scaled", "neumann_lambda", "alpha_from_theta",
    "theta_from_alpha",
]

PANEL_N = 16            # Chebyshev degree per panel
PANEL_DETA = 2.0        # max growth of eta(z, mu x) across one panel
PANEL_REL = 0.5         # max panel width relative to x
VOLTERRA_TOL = 1e-12
VOLTERRA_MAXIT = 200
ODE_RTOL = 1e-12


class NumericalError(RuntimeError):
    """A numerical construction failed (stiffness, divergence, bound violated)."""


def alpha_from_theta(theta):
    """Boundary angle to Robin coefficient: ``alpha = cot(theta)``."""
    theta = float(theta)
    if not 0.0 < theta < math.pi:
        raise SpecError("theta must lie in (0, pi) for a Neumann-type condition")
    return math.cos(theta) / math.sin(theta)


def theta_from_alpha(alpha):
    """Inverse of :func:`alpha_from_theta`, in ``(0, pi)``."""
    return 0.5 * math.pi - math.atan(float(alpha))


@dataclass(frozen=True)
class BoundaryCondition:
    """``dirichlet``: f(a) = 0.  ``neumann``: f'(a) + alpha f(a) = 0."""

    kind: str = "dirichlet"
    alpha: float | None = None

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in ("dirichlet", "neumann"):
            raise SpecError(f"unknown boundary condition kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == "neumann":
            if self.alpha is None or not math.isfinite(float(self.alpha)):
                raise SpecError("neumann condition needs a finite alpha")
            object.__setattr__(self, "alpha", float(self.alpha))
        elif self.alpha is not None:
            raise SpecError("dirichlet condition takes no alpha")

    @classmethod
    def dirichlet(cls):
        return cls("dirichlet")

    @classmethod
    def neumann(cls, alpha=0.0):
        return cls("neumann", alpha)

    @classmethod
    def from_theta(cls, theta):
        if float(theta) == 0.0:
            return cls.dirichlet()
        return cls.neumann(alpha_from_theta(theta))

    @property
    def theta(self):
        return 0.0 if self.kind == "dirichlet" else theta_from_alpha(self.alpha)

    @property
    def is_dirichlet(self):
        return self.kind == "dirichlet"

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "neumann":
            d["alpha"] = self.alpha
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "kind" not in d:
            raise SpecError("bc must be an object with a 'kind' field")
        if "theta" in d and "alpha" not in d:
            return cls.from_theta(d["theta"])
        return cls(d["kind"], d.get("alpha"))


@dataclass(frozen=True)
class OperatorSpec:
    """Problem instance: ``H + nu**2`` on ``[a, inf)``."""

    a: float = 1.0
    mu: float = 1.0
    bc: BoundaryCondition = field(default_factory=BoundaryCondition)
    potential: Potential = field(default_factory=Potential)
    nu: float = 0.0

    def __post_init__(self):
        for name in ("a", "mu", "nu"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise SpecError(f"{name} must be a finite number")
            object.__setattr__(self, name, float(v))
        if not self.a > 0:
            raise SpecError("a must be > 0 (left endpoint of the half line)")
        if not self.mu > 0:
            raise SpecError("mu must be > 0 (mu = 0 has continuous spectrum)")
        if not self.nu >= 0:
            raise SpecError("nu must be >= 0")
        if not isinstance(self.bc, BoundaryCondition):
            raise SpecError("bc must be a BoundaryCondition")
        if not isinstance(self.potential, Potential):
            raise SpecError("potential must be a Potential")

    def with_nu(self, nu):
        return replace(self, nu=float(nu))

    def with_bc(self, bc):
        return replace(self, bc=bc)

    def with_potential(self, potential):
        return replace(self, potential=potential)

    @property
    def is_model(self):
        return self.potential.is_zero

    def to_dict(self):
        return {"a": self.a, "mu": self.mu, "bc": self.bc.to_dict(),
                "potential": self.potential.to_dict(), "nu": self.nu}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SpecError("spec must be a JSON object")
        unknown = set(d) - {"a", "mu", "bc", "potential", "nu"}
        if unknown:
            raise SpecError(f"unknown spec fields: {sorted(unknown)}")
        for k in ("a", "mu"):
            if k not in d:
                raise SpecError(f"spec is missing required field {k!r}")
        bc = BoundaryCondition.from_dict(d.get("bc", {"kind": "dirichlet"}))
        pot = Potential.from_dict(d.get("potential", {"form": "zero"}))
        return cls(d["a"], d["mu"], bc, pot, d.get("nu", 0.0))

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError(f"spec is not valid JSON: {e}") from None
        return cls.from_dict(d)

    def check_potential(self):
        """Numerically verify the decay certificate of the potential."""
        w1 = self.potential.w_l1(self.a)
        g1 = self.potential.weighted_l1(self.a, self.potential.gamma)
        if not (math.isfinite(w1) and math.isfinite(g1)):
            raise SpecError("potential is not in the admissible decay class")
        return {"w_l1": w1, "gamma": self.potential.gamma, "weighted_l1": g1}


# ---------------------------------------------------------------------------
# solutions


class Solution:
    """An evaluable solution of ``(H + z^2) f = 0``.

    ``scaled(x)`` returns ``(ft, fpt, s)`` with ``f = ft e^s``,
    ``f' = fpt e^s``; calling the object returns ``(f, f')`` directly.
    """

    def __init__(self, spec, z, normalization, construction, valid_interval,
                 scaled_fn, diagnostics=None):
        self.spec = spec
        self.z = float(z)
        self.normalization = normalization
        self.construction = construction
        self.valid_interval = (float(valid_interval[0]), float(valid_interval[1]))
        self._scaled = scaled_fn
        self.diagnostics = dict(diagnostics or {})

    def _check(self, x):
        lo, hi = self.valid_interval
        if np.any(x < lo * (1 - 1e-13)) or np.any(x > hi * (1 + 1e-13)):
            raise ValueError(f"x outside the valid interval [{lo:g}, {hi:g}]")

    def scaled(self, x):
        x = np.asarray(x, dtype=float)
        self._check(x)
        return self._scaled(x)

    def __call__(self, x):
        ft, fpt, s = self.scaled(x)
        e = np.exp(s)
        return ft * e, fpt * e

    def __repr__(self):
        return (f"Solution(z={self.z:g}, {self.normalization}, {self.construction}, "
                f"valid={self.valid_interval})")


def _eta(z, spec, x):
    return bessel.debye_eta(z, spec.mu * np.asarray(x, dtype=float))


def _psi0_scaled(z, spec, x):
    """Model ``psi_0 = x**-1/2 K_z(mu x)``: returns (ft, fpt, -eta)."""
    x = np.asarray(x, dtype=float)
    d = bessel.ik_derivs(z, spec.mu * x)
    rx = 1.0 / np.sqrt(x)
    ft = rx * d.mk
    fpt = -0.5 * rx / x * d.mk + rx * spec.mu * d.mkp
    return ft, fpt, -d.eta, d


def neumann_lambda(spec, z, psi=None):
    """``lambda_alpha = -a (alpha + psi'(a)/psi(a))``.

    The ratio of the Neumann-type to the Dirichlet determinant.  ``psi``
    defaults to the model solution.
    """
    if spec.bc.is_dirichlet:
        raise ValueError("lambda_alpha needs a Neumann-type condition")
    a = spec.a
    if psi is None:
        ft, fpt, _, _ = _psi0_scaled(z, spec, a)
    else:
        ft, fpt, _ = psi.scaled(a)
    ft = float(ft)
    fpt = float(fpt)
    if ft == 0.0:
        raise NumericalError("psi(a) = 0: lambda_alpha is undefined")
    return -a * (spec.bc.alpha + fpt / ft)


def model_psi(z, spec: OperatorSpec) -> Solution:
    """Closed form ``psi = x**-1/2 K_z(mu x)`` (model operator only)."""
    if not spec.is_model:
        raise ValueError("model_psi needs a zero potential")

    def fn(x):
        ft, fpt, s, _ = _psi0_scaled(z, spec, x)
        return ft, fpt, s

    return Solution(spec, z, "L2AtInfinity", "ClosedFormBessel",
                    (spec.a, math.inf), fn, {"tail_bound": 0.0})


def model_phi(z, spec: OperatorSpec) -> Solution:
    """Closed form of the solution normalised at ``a`` (model operator only).

    Dirichlet: ``x**-1/2 (K_z(mu a) I_z(mu x) - I_z(mu a) K_z(mu x))``.
    Neumann-type: ``psi / K_z(mu a) + lambda_alpha * phi_Dirichlet``, which has
    ``phi(a) = a**-1/2`` and ``phi'(a) = -alpha a**-1/2``.
    """
    if not spec.is_model:
        raise ValueError("model_phi needs a zero potential")
    a, mu = spec.a, spec.mu
    ra = bessel.ik_scaled(z, mu * a)
    ia, ka, eta_a = float(ra.mi), float(ra.mk), float(ra.eta)
    lam = None
    if not spec.bc.is_dirichlet:
        lam = neumann_lambda(spec, z)
        if abs(lam) < 1e-14 * max(1.0, z):
            raise NumericalError(
                "Neumann boundary data degenerate: -z^2 is an eigenvalue of H")

    def fn(x):
        x = np.asarray(x, dtype=float)
        d = bessel.ik_derivs(z, mu * x)
        rx = 1.0 / np.sqrt(x)
        e2 = np.exp(-2.0 * (d.eta - eta_a))
        # Dirichlet part, scaled by exp(eta(x) - eta_a)
        g = ka * d.mi - ia * d.mk * e2
        gp = mu * (ka * d.mip - ia * d.mkp * e2)
        ft = rx * g
        fpt = -0.5 * rx / x * g + rx * gp
        if lam is not None:
            ft = lam * ft + rx * d.mk / ka * e2
            fpt = lam * fpt + (-0.5 * rx / x * d.mk + rx * mu * d.mkp) / ka * e2
        return ft, fpt, d.eta - eta_a

    diag = {} if lam is None else {"lambda_alpha": lam}
    return Solution(spec, z, "AtLeftEndpoint", "ClosedFormBessel",
                    (a, math.inf), fn, diag)


def initial_data(spec):
    """``(phi(a), phi'(a))`` for the boundary condition of ``spec``."""
    a = spec.a
    if spec.bc.is_dirichlet:
        return 0.0, a ** -1.5
    return a ** -0.5, -spec.bc.alpha * a ** -0.5


def default_x_max(spec, z=0.0):
    """Right end of the certified working interval.

    Smallest X with ``exp(-2 mu X)/(mu X) < 1e-16`` (about ``17/mu``), not
    below the potential cutoff, capped at ``1e3/mu``.
    """
    t = 17.0
    x = max(t / spec.mu, spec.a + 5.0, spec.potential.cutoff(spec.a))
    return min(x, 1e3 / spec.mu) if x > spec.a else x


def solve_phi(spec: OperatorSpec, z, x_max=None, rtol=ODE_RTOL) -> Solution:
    """Forward integration of ``(f, x^2 f')`` from ``a`` with the boundary data.

    The state is scaled by ``exp(eta(z, mu x) - eta(z, mu a))`` so that the
    exponentially growing solution stays of moderate size.
    """
    a, mu = spec.a, spec.mu
    z = float(z)
    X = float(x_max) if x_max is not None else default_x_max(spec, z)
    if X <= a:
        raise ValueError("x_max must exceed a")
    V = spec.potential
    zz = z * z

    def rhs(x, y):
        F, G = y
        ep = math.hypot(z, mu * x) / x
        q = x * x * mu * mu - 0.25 + zz + float(V(x))
        return [G / (x * x) - ep * F, q * F - ep * G]

    f0, fp0 = initial_data(spec)
    bps = sorted(b for b in V.breakpoints() if a < b < X)
    edges = [a] + bps + [X]
    segs = []

    def integrate():
        # done on first evaluation away from a
        y0 = [f0, a * a * fp0]
        for lo, hi in zip(edges[:-1], edges[1:]):
            sol = solve_ivp(rhs, (lo, hi), y0, method="DOP853", rtol=rtol,
                            atol=1e-30, dense_output=True)
            if sol.status != 0:
                raise NumericalError(f"solve_phi failed near x={sol.t[-1]:.6g}: {sol.message}")
            segs.append((lo, hi, sol.sol))
            y0 = sol.y[:, -1]

    eta_a = float(_eta(z, spec, a))
    his = np.array(edges[1:])

    def fn(x):
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        F = np.empty_like(flat)
        G = np.empty_like(flat)
        at_a = flat == a
        F[at_a], G[at_a] = f0, a * a * fp0
        rest = ~at_a
        if np.any(rest):
            if not segs:
                integrate()
            j = np.clip(np.searchsorted(his, flat, side="left"), 0, len(segs) - 1)
            for k in np.unique(j[rest]):
                m = rest & (j == k)
                F[m], G[m] = segs[k][2](flat[m])
        D = G / (flat * flat)
        D[at_a] = fp0       # boundary data reproduced bit for bit
        return F.reshape(x.shape), D.reshape(x.shape), _eta(z, spec, x) - eta_a

    return Solution(spec, z, "AtLeftEndpoint", "ODEForward", (a, X), fn,
                    {"rtol": rtol, "segments": len(edges) - 1})


# ---------------------------------------------------------------------------
# Volterra construction of psi


def panel_edges(spec, z, lo, hi, h_max=None):
    """Panel end points on ``[lo, hi]`` resolving the potential, the Bessel
    scale ``x / sqrt(z^2 + mu^2 x^2)`` and the relative scale ``x``."""
    mu = spec.mu
    res = spec.potential.resolution()
    if h_max is None:
        h_max = min(res, 4.0 / mu) if math.isfinite(res) else 4.0 / mu
    fixed = [lo] + sorted(b for b in spec.potential.breakpoints() if lo < b < hi) + [hi]
    out = [lo]
    for s, e in zip(fixed[:-1], fixed[1:]):
        x = s
        while x < e:
            ep = math.hypot(z, mu * x) / x
            h = min(h_max, PANEL_REL * x, PANEL_DETA / ep)
            nxt = x + h
            if nxt > e - 0.25 * h:
                nxt = e
            out.append(nxt)
            x = nxt
    return np.array(out)


class PanelGrid:
    """Chebyshev panels on ``[a, X]`` with Bessel data at every node."""

    def __init__(self, spec, z, lo, hi):
        self.spec = spec
        self.z = float(z)
        edges = panel_edges(spec, z, lo, hi)
        self.lo = edges[:-1]
        self.hi = edges[1:]
        self.ref = cheb_panel(PANEL_N)
        self.x = self.ref.map(self.lo, self.hi)
        self.half = 0.5 * (self.hi - self.lo)
        d = bessel.ik_derivs(z, spec.mu * self.x)
        self.mi, self.mk, self.mip, self.mkp, self.eta = d
        self.eta_lo = self.eta[:, 0]
        self.eta_hi = self.eta[:, -1]

    @property
    def n_panels(self):
        return self.lo.size

    def integrate(self, q):
        """Total integral of node data ``q``."""
        return float(np.sum(self.half * (q @ self.ref.weights)))

    def right_cumulative(self, q):
        """``int_{x_i}^{X} q``."""
        within = self.half[:, None] * (q @ self.ref.right_int.T)
        totals = self.half * (q @ self.ref.weights)
        after = np.concatenate([np.cumsum(totals[::-1])[::-1][1:], [0.0]])
        return within + after[:, None]

    def left_cumulative(self, q):
        """``int_a^{x_i} q``."""
        within = self.half[:, None] * (q @ self.ref.left_int.T)
        totals = self.half * (q @ self.ref.weights)
        before = np.concatenate([[0.0], np.cumsum(totals)[:-1]])
        return within + before[:, None]

    def right_weighted(self, q):
        """``int_{x_i}^{X} exp(-2(eta(y) - eta(x_i))) q(y) dy``, stably."""
        # within-panel part with weight relative to the panel's left end
        wl = np.exp(-2.0 * (self.eta - self.eta_lo[:, None]))
        qw = q * wl
        within = self.half[:, None] * (qw @ self.ref.right_int.T)
        full = self.half * (qw @ self.ref.weights)
        # R_j = int_{hi_j}^{X} exp(-2(eta(y) - eta(hi_j))) q
        n = self.n_panels
        R = np.zeros(n)
        decay = np.exp(-2.0 * (self.eta_hi - self.eta_lo))
        for j in range(n - 2, -1, -1):
            R[j] = full[j + 1] + decay[j + 1] * R[j + 1]
        back = np.exp(2.0 * (self.eta - self.eta_lo[:, None]))
        return back * within + np.exp(-2.0 * (self.eta_hi[:, None] - self.eta)) * R[:, None]

    def left_weighted(self, q):
        """``int_a^{x_i} exp(-2(eta(x_i) - eta(y))) q(y) dy``, stably."""
        wr = np.exp(-2.0 * (self.eta_hi[:, None] - self.eta))
        qw = q * wr
        within = self.half[:, None] * (qw @ self.ref.left_int.T)
        full = self.half * (qw @ self.ref.weights)
        n = self.n_panels
        S = np.zeros(n)   # S_j = int_a^{lo_j} exp(-2(eta(lo_j) - eta(y))) q
        decay = np.exp(-2.0 * (self.eta_hi - self.eta_lo))
        for j in range(1, n):
            S[j] = full[j - 1] + decay[j - 1] * S[j - 1]
        back = np.exp(-2.0 * (self.eta - self.eta_hi[:, None]))
        # back >= 1 is bounded by exp(2 * PANEL_DETA)
        return within * back + np.exp(-2.0 * (self.eta - self.eta_lo[:, None])) * S[:, None]

    def interp(self, values, x):
        return self.ref.interp(self.lo, self.hi, values, x)


def _volterra(grid: PanelGrid, wv, tol=VOLTERRA_TOL, maxit=VOLTERRA_MAXIT,
              check_envelope=True):
    """Neumann iteration for ``f1 = L W (1 + f1)`` on the panel grid."""
    mu = grid.spec.mu
    y = grid.x
    a1 = y * grid.mk * grid.mi          # y K I
    a2 = y * grid.mk ** 2               # y K^2 (scaled)
    rho = grid.mi / grid.mk             # (I/K) exp(-2 eta)
    c_l = float(np.max(a1))             # sup |L| over the grid
    if c_l > 2.0 / mu * 1.05:
        raise NumericalError(f"kernel bound violated: sup yKI = {c_l:.6g} > 2/mu")
    absw = np.abs(wv)
    omega = grid.right_cumulative(absw)  # int_x^X |W|
    om_a = float(omega.max())
    f1 = np.zeros_like(y)
    incs = []
    env = []
    n = 0
    converged = False
    for n in range(1, maxit + 1):
        g = wv * (1.0 + f1)
        t1 = grid.right_cumulative(a1 * g)
        t2 = grid.right_weighted(a2 * g)
        new = t1 - rho * t2
        delta = new - f1
        f1 = new
        inc = float(np.max(np.abs(delta)))
        incs.append(inc)
        # |delta_{n}| <= (C_L Omega(x))^n / n!  (pointwise factorial bound)
        bound = (c_l * omega) ** n / math.factorial(n)
        env.append(float((c_l * om_a) ** n / math.factorial(n)))
        if check_envelope and np.any(np.abs(delta) > bound * (1 + 1e-6) + 1e-14):
            raise NumericalError(f"Volterra increment exceeds factorial envelope at n={n}")
        if inc < tol:
            converged = True
            break
    if not converged:
        raise NumericalError(f"Volterra iteration did not converge in {maxit} steps")
    g = wv * (1.0 + f1)
    t2 = grid.right_weighted(a2 * g)
    f1p = -t2 / (y * grid.mk ** 2)
    diag = {"volterra_terms_used": n, "increments": incs, "envelope": env,
            "kernel_bound": c_l, "w_l1": om_a}
    return f1, f1p, diag


def solve_psi(spec: OperatorSpec, z, x_cut=None, tol=VOLTERRA_TOL,
              check_envelope=True) -> Solution:
    """The L2 solution ``psi = psi_0 (1 + f1)`` by Neumann iteration.

    ``f1(x) = int_x^inf L(x, y) W(y) (1 + f1(y)) dy`` with
    ``L(x, y) = y K^2(mu y) [I/K(mu y) - I/K(mu x)]`` and ``W = V/x^2``.
    Beyond the potential cutoff ``X_W`` (where ``int_X^inf |W| < 1e-15``)
    ``f1`` is set to zero; the neglected part is reported as ``tail_bound``.
    """
    z = float(z)
    a = spec.a
    X = a if spec.is_model else (
        float(x_cut) if x_cut is not None else spec.potential.cutoff(a))
    if X <= a:
        # V is zero, or its mass on [a, inf) is below the tail tolerance
        s = Solution(spec, z, "L2AtInfinity", "VolterraSeries", (a, math.inf),
                     model_psi(z, spec.with_potential(Potential.zero()))._scaled)
        tail = 0.0 if spec.is_model else spec.potential.tail_l1(a, a)
        s.diagnostics.update({"volterra_terms_used": 0, "increments": [],
                              "envelope": [], "tail_bound": 2.0 / spec.mu * tail,
                              "x_cut": a})
        return s
    grid = PanelGrid(spec, z, a, X)
    wv = spec.potential.w(grid.x)
    f1, f1p, diag = _volterra(grid, wv, tol=tol, check_envelope=check_envelope)
    tail = spec.potential.tail_l1(a, X)
    diag.update({"tail_bound": diag["kernel_bound"] * tail, "x_cut": X,
                 "n_panels": grid.n_panels, "sup_f1": float(np.max(np.abs(f1)))})

    def fn(x):
        x = np.asarray(x, dtype=float)
        ft, fpt, s, _ = _psi0_scaled(z, spec, x)
        flat = x.ravel()
        u = np.zeros_like(flat)
        up = np.zeros_like(flat)
        inside = flat <= X
        if np.any(inside):
            u[inside] = grid.interp(f1, flat[inside])
            up[inside] = grid.interp(f1p, flat[inside])
        u = u.reshape(x.shape)
        up = up.reshape(x.shape)
        return ft * (1.0 + u), fpt * (1.0 + u) + ft * up, s

    sol = Solution(spec, z, "L2AtInfinity", "VolterraSeries", (a, math.inf), fn, diag)
    sol.grid = grid
    sol.f1 = f1
    sol.f1p = f1p
    return sol


def wronskian_scaled(s1: Solution, s2: Solution, x):
    """``x^2 (s1 s2' - s1' s2)`` as ``(mantissa, log_scale)``."""
    if abs(s1.z - s2.z) > 1e-14 * max(1.0, abs(s1.z)):
        raise ValueError("solutions belong to different spectral parameters")
    x = np.asarray(x, dtype=float)
    f1, p1, e1 = s1.scaled(x)
    f2, p2, e2 = s2.scaled(x)
    return x * x * (f1 * p2 - p1 * f2), e1 + e2


def wronskian(s1: Solution, s2: Solution, x):
    """``p W(s1, s2)(x) = x^2 (s1 s2' - s1' s2)``."""
    m, e = wronskian_scaled(s1, s2, x)
    v = m * np.exp(e)
    return v.item() if np.ndim(v) == 0 else v
