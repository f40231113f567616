r"""
Quadrature building blocks.

Two tools live here:

* :func:`gk_integrate`, a vectorised globally adaptive Gauss--Kronrod (7/15)
  integrator.  The integrand is called on whole arrays of nodes at once, so
  expensive special-function evaluations are batched.
* :class:`ChebPanel`, the reference data for Chebyshev--Lobatto panels:
  Clenshaw--Curtis weights, spectral indefinite-integration matrices and
  barycentric interpolation.  Panels are the discretisation used by the
  Volterra solver and the Green-function integrals.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C

# Kronrod 15-point nodes (positive half) and weights, Gauss 7-point weights.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node rule on [-1, 1]
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WKF = np.concatenate([_WK[:-1], _WK[::-1]])
_WGF = np.zeros(15)
_WGF[1:7:2] = _WG[:3]
_WGF[7] = _WG[3]
_WGF[9:15:2] = _WG[:3][::-1]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


@dataclass
class QuadResult:
    value: float
    abserr: float
    n_intervals: int
    n_evals: int


def _gk_panels(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise QuadratureError("non-finite integrand value")
    k = half * (fx @ _WKF)
    g = half * (fx @ _WGF)
    err = np.abs(k - g)
    return k, err


def gk_integrate(f, a, b, *, abstol=1e-12, reltol=1e-10, breakpoints=(),
                 max_intervals=20000, full_output=False):
    """Adaptive Gauss--Kronrod integral of ``f`` over a finite interval.

    ``f`` must accept a 1-D array of abscissae and return values of the same
    shape.  Intervals whose error estimate exceeds their share of the global
    tolerance are bisected until the total estimate is below
    ``max(abstol, reltol*|I|)``.
    """
    a = float(a)
    b = float(b)
    if a == b:
        res = QuadResult(0.0, 0.0, 0, 0)
        return res if full_output else 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    pts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    lo = np.array(pts[:-1])
    hi = np.array(pts[1:])
    k, err = _gk_panels(f, lo, hi)
    done_val = 0.0
    done_err = 0.0
    n_evals = 15 * lo.size
    while True:
        total = done_val + k.sum()
        tot_err = done_err + err.sum()
        tol = max(abstol, reltol * abs(total))
        if tot_err <= tol:
            break
        if lo.size + 1 > max_intervals:
            raise QuadratureError(
                f"interval budget exhausted: estimate {total:.6g}, "
                f"error {tot_err:.3g} > {tol:.3g}")
        share = tol * (hi - lo) / (b - a)
        bad = err > share
        if not np.any(bad):
            bad = err >= err.max()
        # intervals that already meet their share are frozen
        done_val += k[~bad].sum()
        done_err += err[~bad].sum()
        lo_b, hi_b = lo[bad], hi[bad]
        mid = 0.5 * (lo_b + hi_b)
        lo = np.concatenate([lo_b, mid])
        hi = np.concatenate([mid, hi_b])
        k, err = _gk_panels(f, lo, hi)
        n_evals += 15 * lo.size
    if full_output:
        return QuadResult(sign * total, tot_err, lo.size, n_evals)
    return sign * total


def gk_integrate_to_inf(f, a, *, scale=None, abstol=1e-12, reltol=1e-10,
                        full_output=False):
    """Integral of ``f`` over ``[a, inf)`` for algebraically decaying ``f``.

    Uses ``x = a + s*(1-u)/u`` on ``u in (0, 1]``; the integrand must decay at
    least like ``x**-2`` so that the transformed integrand stays bounded.
    """
    s = float(scale) if scale is not None else max(abs(a), 1.0)

    def g(u):
        x = a + s * (1.0 - u) / u
        return f(x) * s / (u * u)

    return gk_integrate(g, 0.0, 1.0, abstol=abstol, reltol=reltol,
                        full_output=full_output)


# ---------------------------------------------------------------------------
# Chebyshev--Lobatto panels


@dataclass(frozen=True)
class ChebPanel:
    """Reference Chebyshev--Lobatto data on [-1, 1] (nodes ascending)."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray        # Clenshaw--Curtis weights
    left_int: np.ndarray       # (L q)_i = int_{-1}^{t_i} q
    right_int: np.ndarray      # (R q)_i = int_{t_i}^{1} q
    bary: np.ndarray           # barycentric weights

    def map(self, lo, hi):
        """Nodes of the panels ``[lo_j, hi_j]``, shape (n_panels, n+1)."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        return 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * self.nodes

    def interp(self, lo, hi, values, x):
        """Barycentric interpolation of panel data at points ``x``.

        ``values`` has shape (n_panels, n+1); ``x`` must lie inside the union
        of panels, which must be contiguous and sorted.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        lo = np.asarray(lo)
        hi = np.asarray(hi)
        j = np.clip(np.searchsorted(hi, x, side="left"), 0, lo.size - 1)
        t = (2.0 * x - lo[j] - hi[j]) / (hi[j] - lo[j])
        d = t[:, None] - self.nodes[None, :]
        exact = d == 0.0
        d = np.where(exact, 1.0, d)
        w = self.bary[None, :] / d
        v = values[j]
        out = (w * v).sum(axis=1) / w.sum(axis=1)
        hit = exact.any(axis=1)
        if np.any(hit):
            out[hit] = v[hit][exact[hit]]
        return out


@lru_cache(maxsize=8)
def cheb_panel(n: int = 16) -> ChebPanel:
    """Build the reference panel with ``n+1`` Lobatto nodes."""
    k = np.arange(n + 1)
    t = -np.cos(np.pi * k / n)
    V = C.chebvander(t, n)
    Vinv = np.linalg.inv(V)
    # antiderivative with value 0 at -1, evaluated at the nodes
    eye = np.eye(n + 1)
    anti = np.array([C.chebint(eye[j], lbnd=-1.0) for j in range(n + 1)]).T
    Vp = C.chebvander(t, n + 1)
    left = Vp @ anti @ Vinv
    total = left[-1]
    right = total[None, :] - left
    w = total.copy()
    bary = (-1.0) ** k
    bary[0] *= 0.5
    bary[-1] *= 0.5
    return ChebPanel(n, t, w, left, right, bary)
