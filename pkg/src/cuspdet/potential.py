"""Perturbing potentials ``V(x)`` on ``[a, inf)`` and their decay data."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .quadrature import gk_integrate

PRESETS = ("power_exp", "gaussian")
TAIL_TOL = 1e-15


class SpecError(ValueError):
    """An operator description violates an admissibility condition."""


@dataclass(frozen=True)
class Potential:
    """A potential V with a decay certificate.

    ``form`` is ``"zero"``, ``"analytic"`` (``preset`` plus ``params``),
    ``"tabulated"`` (``grid``/``values``, cubic or linear interpolation,
    zero outside the grid) or ``"sum"`` (weighted ``terms``).

    Analytic presets:

    ``power_exp``  ``c * x**p * exp(-beta x)``
    ``gaussian``   ``c * exp(-(x - x0)**2 / (2 w**2))``
    """

    form: str = "zero"
    preset: str | None = None
    params: tuple = ()
    grid: tuple = ()
    values: tuple = ()
    order: int = 3
    terms: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.form not in ("zero", "analytic", "tabulated", "sum"):
            raise SpecError(f"unknown potential form {self.form!r}")
        if self.form == "analytic":
            if self.preset not in PRESETS:
                raise SpecError(f"unknown analytic preset {self.preset!r}")
            p = dict(self.params)
            need = {"power_exp": ("c", "p", "beta"), "gaussian": ("c", "x0", "w")}[self.preset]
            for k in need:
                if k not in p or not math.isfinite(float(p[k])):
                    raise SpecError(f"preset {self.preset} needs finite parameter {k!r}")
            if self.preset == "power_exp" and not float(p["beta"]) > 0:
                raise SpecError("power_exp needs beta > 0 (exponential decay)")
            if self.preset == "gaussian" and not float(p["w"]) > 0:
                raise SpecError("gaussian needs w > 0")
            object.__setattr__(self, "params", tuple(sorted((k, float(v)) for k, v in p.items())))
        if self.form == "tabulated":
            g = np.asarray(self.grid, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if g.ndim != 1 or g.size != v.size or g.size < 4:
                raise SpecError("tabulated potential needs >= 4 matching grid/values")
            if np.any(np.diff(g) <= 0):
                raise SpecError("tabulated grid must be strictly increasing")
            if not np.all(np.isfinite(v)):
                raise SpecError("tabulated values must be finite")
            if self.order not in (1, 3):
                raise SpecError("interpolation order must be 1 or 3")
            object.__setattr__(self, "grid", tuple(g.tolist()))
            object.__setattr__(self, "values", tuple(v.tolist()))
        if self.form == "sum":
            ts = tuple((float(w), p) for w, p in self.terms)
            if not all(isinstance(p, Potential) for _, p in ts):
                raise SpecError("sum terms must be (weight, Potential)")
            object.__setattr__(self, "terms", ts)

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def power_exp(cls, c, p=0.5, beta=1.0):
        return cls("analytic", "power_exp", (("c", c), ("p", p), ("beta", beta)))

    @classmethod
    def gaussian(cls, c, x0, w):
        return cls("analytic", "gaussian", (("c", c), ("x0", x0), ("w", w)))

    @classmethod
    def tabulated(cls, grid, values, order=3):
        return cls("tabulated", grid=tuple(grid), values=tuple(values), order=order)

    def plus(self, other: "Potential", t: float = 1.0) -> "Potential":
        """``self + t * other``."""
        if other.is_zero or t == 0:
            return self
        if self.is_zero:
            return Potential("sum", terms=((t, other),))
        return Potential("sum", terms=((1.0, self), (t, other)))

    # -- evaluation ----------------------------------------------------------
    @property
    def is_zero(self):
        if self.form == "analytic":
            return self._p()["c"] == 0.0
        if self.form == "tabulated":
            return not any(self.values)
        return self.form == "zero" or (self.form == "sum" and all(
            w == 0 or p.is_zero for w, p in self.terms))

    def _p(self):
        return dict(self.params)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.form == "zero":
            return np.zeros_like(x)
        if self.form == "analytic":
            p = self._p()
            if self.preset == "power_exp":
                return p["c"] * x ** p["p"] * np.exp(-p["beta"] * x)
            return p["c"] * np.exp(-0.5 * ((x - p["x0"]) / p["w"]) ** 2)
        if self.form == "tabulated":
            g = np.asarray(self.grid)
            v = np.asarray(self.values)
            if self.order == 3:
                sp = self._cache.get("spline")
                if sp is None:
                    sp = CubicSpline(g, v)
                    self._cache["spline"] = sp
                out = sp(x)
            else:
                out = np.interp(x, g, v)
            return np.where((x >= g[0]) & (x <= g[-1]), out, 0.0)
        return sum(w * p(x) for w, p in self.terms)

    def w(self, x):
        """``W = V / x**2``."""
        x = np.asarray(x, dtype=float)
        return self(x) / (x * x)

    # -- geometry ------------------------------------------------------------
    def breakpoints(self):
        """Abscissae where V is not smooth or changes scale."""
        if self.form == "analytic" and self.preset == "gaussian":
            return (self._p()["x0"],)
        if self.form == "tabulated":
            return self.grid
        if self.form == "sum":
            return tuple(sorted({b for w, p in self.terms for b in p.breakpoints()}))
        return ()

    def resolution(self):
        """Length scale on which V varies (upper bound for panel widths)."""
        if self.form == "analytic":
            p = self._p()
            return 2.0 / p["beta"] if self.preset == "power_exp" else p["w"]
        if self.form == "tabulated":
            return float(np.min(np.diff(self.grid)))
        if self.form == "sum":
            rs = [p.resolution() for w, p in self.terms if not p.is_zero]
            return min(rs) if rs else math.inf
        return math.inf

    def support_end(self, a):
        """A point beyond which |W| is negligible (below 1e-300 or exactly 0)."""
        if self.form == "zero":
            return float(a)
        if self.form == "analytic":
            p = self._p()
            if self.preset == "power_exp":
                beta = p["beta"]
                x = max(a, 1.0)
                while abs(p["c"]) * x ** (p["p"] - 2) * math.exp(-beta * x) > 1e-300:
                    x *= 1.5
                return x
            return max(a, p["x0"] + 40.0 * p["w"])
        if self.form == "tabulated":
            return max(a, self.grid[-1])
        return max([a] + [p.support_end(a) for w, p in self.terms])

    def _w_l1(self, lo, hi):
        if hi <= lo:
            return 0.0
        bps = [b for b in self.breakpoints() if lo < b < hi]
        return gk_integrate(lambda x: np.abs(self.w(x)), lo, hi, abstol=1e-18,
                            reltol=1e-12, breakpoints=bps)

    def w_l1(self, a):
        """``int_a^inf |V(x)| / x**2 dx``."""
        key = ("l1", float(a))
        if key not in self._cache:
            self._cache[key] = self._w_l1(float(a), self.support_end(a))
        return self._cache[key]

    def tail_l1(self, a, x):
        return self._w_l1(max(float(a), float(x)), self.support_end(a))

    def weighted_l1(self, a, gamma):
        """``int_a^inf x**-gamma |V(x)| dx`` (the decay certificate)."""
        end = self.support_end(a)
        bps = [b for b in self.breakpoints() if a < b < end]
        return gk_integrate(lambda x: x ** -gamma * np.abs(self(x)), a, end,
                            abstol=1e-18, reltol=1e-10, breakpoints=bps)

    @property
    def gamma(self):
        """Decay certificate exponent: V lies in x**gamma L1 with this gamma."""
        # all supported forms decay exponentially or have compact support
        return 0.0

    def cutoff(self, a, tol=TAIL_TOL):
        """Smallest X (to a few percent) with ``int_X^inf |W| < tol * max(1, |W|_1)``."""
        key = ("cut", float(a), tol)
        if key in self._cache:
            return self._cache[key]
        a = float(a)
        if self.is_zero:
            self._cache[key] = a
            return a
        total = self.w_l1(a)
        thr = tol * max(1.0, total)
        end = self.support_end(a)
        if self.tail_l1(a, a) <= thr:
            out = a
        else:
            lo, hi = a, end
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if self.tail_l1(a, mid) <= thr:
                    hi = mid
                else:
                    lo = mid
                if hi - lo < 1e-3 * hi:
                    break
            out = hi
        self._cache[key] = out
        return out

    # -- serialisation -------------------------------------------------------
    def to_dict(self):
        if self.form == "zero":
            return {"form": "zero"}
        if self.form == "analytic":
            return {"form": "analytic", "preset": self.preset, "params": dict(self.params)}
        if self.form == "tabulated":
            return {"form": "tabulated", "grid": list(self.grid),
                    "values": list(self.values), "order": self.order}
        return {"form": "sum", "terms": [{"weight": w, "potential": p.to_dict()}
                                         for w, p in self.terms]}

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "form" not in d:
            raise SpecError("potential must be an object with a 'form' field")
        form = d["form"]
        if form == "zero":
            return cls.zero()
        if form == "analytic":
            params = d.get("params", {})
            if not isinstance(params, dict):
                raise SpecError("analytic potential 'params' must be an object")
            return cls("analytic", d.get("preset"), tuple(params.items()))
        if form == "tabulated":
            if "csv" in d:
                arr = np.loadtxt(d["csv"], delimiter=",", ndmin=2)
                return cls.tabulated(arr[:, 0], arr[:, 1], d.get("order", 3))
            return cls.tabulated(d.get("grid", ()), d.get("values", ()), d.get("order", 3))
        if form == "sum":
            return cls("sum", terms=tuple((t["weight"], cls.from_dict(t["potential"]))
                                          for t in d.get("terms", ())))
        raise SpecError(f"unknown potential form {form!r}")
