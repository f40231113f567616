r"""
Regularised limits and regularised (finite-part) integrals at infinity.

A function with an asymptotic expansion

.. math::

    f(x) \sim \sum_{j,k} a_{jk}\, x^{\alpha_j} \log^k x, \qquad x \to \infty,

has regularised limit ``LIM f = a_00``, the coefficient of ``x^0 log^0 x``.
The regularised integral over ``[c, inf)`` is ``LIM_{R->inf}`` of the
ordinary integral over ``[c, R]``.  Numerically the expansion is recovered by
a least-squares fit of sampled values on a geometric window, and the finite
part of the integral is quadrature up to a split point ``X*`` plus the
closed-form antiderivatives of the fitted terms, of which only the constant
contributed at ``X*`` survives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .quadrature import gk_integrate

COND_CEILING = 1e10
PER_DECADE = 40
WINDOW_DECADES = 1.5
RESIDUAL_CEILING = 1e-6
QUAD_TOL = 1e-10
SPLIT_CAP = 1e3


class FitError(RuntimeError):
    """Least-squares expansion fit failed; carries the condition number."""

    def __init__(self, msg, condition_number=None):
        super().__init__(msg)
        self.condition_number = condition_number


@dataclass(frozen=True)
class ExpansionBasis:
    """Ordered terms ``(alpha, k)`` meaning ``x**alpha * log(x)**k``."""

    terms: tuple
    remainder_alpha: float | None = None

    def __post_init__(self):
        terms = tuple((float(a), int(k)) for a, k in self.terms)
        if not terms:
            raise ValueError("empty basis")
        if len(set(terms)) != len(terms):
            raise ValueError("duplicate basis terms")
        for a, k in terms:
            if k < 0:
                raise ValueError("log powers must be >= 0")
        keys = [(-a, -k) for a, k in terms]
        if keys != sorted(keys):
            raise ValueError("terms must be ordered by decreasing alpha, then decreasing k")
        object.__setattr__(self, "terms", terms)
        rem = self.remainder_alpha
        if rem is None:
            rem = min(a for a, _ in terms) - 1.0
        elif rem >= min(a for a, _ in terms):
            raise ValueError("remainder_alpha must lie below every basis exponent")
        object.__setattr__(self, "remainder_alpha", float(rem))

    @classmethod
    def of(cls, terms, remainder_alpha=None):
        """Build from unordered terms."""
        t = sorted({(float(a), int(k)) for a, k in terms}, key=lambda p: (-p[0], -p[1]))
        return cls(tuple(t), remainder_alpha)

    def __len__(self):
        return len(self.terms)

    def index(self, alpha, k):
        return self.terms.index((float(alpha), int(k)))

    def columns(self, x):
        x = np.asarray(x, dtype=float)
        lx = np.log(x)
        return np.stack([x ** a * lx ** k for a, k in self.terms], axis=-1)

    def extended(self, extra):
        return ExpansionBasis.of(list(self.terms) + list(extra))


@dataclass
class ExpansionModel:
    basis: ExpansionBasis
    coeffs: np.ndarray
    fit_window: tuple
    condition_number: float
    residual_rms: float
    stderr: np.ndarray = field(default=None)

    def __call__(self, x):
        return self.basis.columns(x) @ self.coeffs

    def coeff(self, alpha, k=0):
        return float(self.coeffs[self.basis.index(alpha, k)])

    def coeff_stderr(self, alpha, k=0):
        return float(self.stderr[self.basis.index(alpha, k)])


def fit_expansion(x, f, basis: ExpansionBasis, *, cond_ceiling=COND_CEILING,
                  weights=None) -> ExpansionModel:
    """Least-squares fit of samples ``(x, f)`` in the span of ``basis``.

    Each design column is scaled to unit 2-norm before solving; the reported
    condition number is that of the scaled design matrix.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.shape != f.shape or x.ndim != 1:
        raise FitError("samples must be two 1-D arrays of equal length")
    p = len(basis)
    if x.size < 2 * p:
        raise FitError(f"need at least {2 * p} samples for {p} terms, got {x.size}")
    if np.unique(x).size != x.size:
        raise FitError("sample abscissae must be distinct")
    if np.any(x <= 0):
        raise FitError("sample abscissae must be positive")
    if x.max() / x.min() < 10.0 * (1 - 1e-12):
        raise FitError("samples must span at least one decade")
    if not np.all(np.isfinite(f)):
        raise FitError("non-finite sample values")
    A = basis.columns(x)
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float)
    A = A * w[:, None]
    b = f * w
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0):
        raise FitError("zero design column")
    As = A / norms
    sv = np.linalg.svd(As, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if not cond < cond_ceiling:
        raise FitError(f"design matrix condition number {cond:.3g} exceeds "
                       f"ceiling {cond_ceiling:.3g}", cond)
    cs, *_ = np.linalg.lstsq(As, b, rcond=None)
    coeffs = cs / norms
    res = b - As @ cs
    rms = float(np.sqrt(np.mean(res ** 2)))
    dof = max(x.size - p, 1)
    sigma2 = float(res @ res) / dof
    cov = np.linalg.pinv(As.T @ As) * sigma2
    stderr = np.sqrt(np.abs(np.diag(cov))) / norms
    return ExpansionModel(basis, coeffs, (float(x.min()), float(x.max())),
                          cond, rms, stderr)


def reg_lim(model: ExpansionModel) -> float:
    """Regularised limit at infinity: the fitted constant ``a_00``."""
    try:
        return model.coeff(0.0, 0)
    except ValueError:
        raise ValueError("basis has no (0, 0) term; its regularised limit is "
                         "not represented") from None


def antiderivative_term(alpha, k, x):
    """Antiderivative of ``x**alpha * log(x)**k`` without additive constant.

    For ``alpha = -1`` it is ``log(x)**(k+1)/(k+1)``; otherwise
    ``x**(alpha+1) * sum_j (-1)^j k!/(k-j)! log(x)**(k-j) / (alpha+1)**(j+1)``.
    Neither form has a constant term, so its regularised limit at infinity
    is zero.
    """
    x = np.asarray(x, dtype=float)
    lx = np.log(x)
    if alpha == -1.0:
        return lx ** (k + 1) / (k + 1)
    b = alpha + 1.0
    s = np.zeros_like(x)
    for j in range(k + 1):
        s = s + (-1) ** j * math.factorial(k) / math.factorial(k - j) * lx ** (k - j) / b ** (j + 1)
    return x ** b * s


def finite_part_tail(model: ExpansionModel, split) -> float:
    """Finite part of ``int_split^inf`` of the fitted expansion."""
    return -float(sum(c * antiderivative_term(a, k, split)
                      for (a, k), c in zip(model.basis.terms, model.coeffs)))


def fit_window(split, decades=WINDOW_DECADES, per_decade=PER_DECADE):
    n = max(int(round(decades * per_decade)) + 1, 2)
    return np.geomspace(split, split * 10.0 ** decades, n)


@dataclass
class RegIntResult:
    value: float
    quad_part: float
    tail_part: float
    split: float
    model: ExpansionModel
    quad_err: float


def _relative_residual(model, fx):
    scale = max(float(np.max(np.abs(fx))), 1e-300)
    return model.residual_rms / scale


def reg_int_semiinf(f: Callable, c: float, basis: ExpansionBasis, split=None, *,
                    decades=WINDOW_DECADES, per_decade=PER_DECADE,
                    quad_tol=QUAD_TOL, residual_tol=RESIDUAL_CEILING,
                    cond_ceiling=COND_CEILING, breakpoints=(),
                    full_output=False):
    """Regularised integral of ``f`` over ``[c, inf)``.

    ``f`` is called on 1-D arrays.  The integral over ``[c, X*]`` is done by
    adaptive Gauss--Kronrod quadrature, ``f`` is fitted in ``basis`` on
    ``[X*, X* 10**decades]`` and the analytic finite part of the fitted tail
    is added.  With ``split=None`` the smallest ``X*`` in a doubling sequence
    whose fit residual is below ``residual_tol`` (relative) is used, up to
    a cap of 1e3.
    """
    c = float(c)
    if split is None:
        cand = max(2.0 * abs(c), 1.0)
        chosen = None
        while True:
            xs = fit_window(cand, decades, per_decade)
            fx = np.asarray(f(xs), dtype=float)
            try:
                model = fit_expansion(xs, fx, basis, cond_ceiling=cond_ceiling)
            except FitError:
                model = None
            if model is not None and _relative_residual(model, fx) < residual_tol:
                chosen = cand
                break
            if cand >= SPLIT_CAP:
                break
            cand = min(2.0 * cand, SPLIT_CAP)
        if chosen is None:
            raise FitError(f"no split point up to {SPLIT_CAP:g} gives a fit "
                           f"residual below {residual_tol:g}")
        split = chosen
    else:
        split = float(split)
        if split <= c:
            raise ValueError("split must exceed the lower limit")
        xs = fit_window(split, decades, per_decade)
        fx = np.asarray(f(xs), dtype=float)
        model = fit_expansion(xs, fx, basis, cond_ceiling=cond_ceiling)
        rel = _relative_residual(model, fx)
        if rel > residual_tol:
            raise FitError(f"fit residual {rel:.3g} above tolerance "
                           f"{residual_tol:.3g} beyond X*={split:g}",
                           model.condition_number)
    q = gk_integrate(f, c, split, abstol=quad_tol, reltol=quad_tol,
                     breakpoints=breakpoints, full_output=True)
    tail = finite_part_tail(model, split)
    val = q.value + tail
    if full_output:
        return RegIntResult(val, q.value, tail, split, model, q.abserr)
    return val


def _breaks_translation(basis):
    # int_R^{R+x} t^n dt has the constant x^{n+1}/(n+1) for integer n >= 0
    # without logs; a pure constant term therefore breaks the identity too
    return any((a > 0 and float(a).is_integer()) or (a == 0 and k == 0)
               for a, k in basis.terms)


def translation_invariance_check(f: Callable, basis: ExpansionBasis, x: float,
                                 split=None, **kw):
    """Both sides of ``regint_0^inf f(x+t) dt = regint_x^inf f(t) dt``.

    The identity requires that no exponent is a positive integer and that
    there is no constant term (its shift contributes ``x * a_00``); such
    bases are refused.  The left side is fitted in ``t`` with the basis widened by
    the lower-order terms produced when ``(x+t)**alpha log^k(x+t)`` is
    re-expanded in ``t``.
    """
    if _breaks_translation(basis):
        raise ValueError("translation identity does not hold for positive "
                         "integer exponents or a constant term")
    x = float(x)
    # re-expansion in t generates lower orders in powers of x/t; keep as many
    # of them as the fit conditioning allows and start where x/t is small
    g = lambda t: f(x + np.asarray(t, dtype=float))
    base = 10.0 if split is None else float(split)
    err = None
    for orders in (5, 4, 3):
        extra = [(a - m, j) for a, k in basis.terms for m in range(1, orders + 1)
                 for j in range(k + 1)]
        try:
            lhs = reg_int_semiinf(g, 0.0, basis.extended(extra),
                                  split=max(base, 40.0 * x), **kw)
            break
        except FitError as e:
            err = e
    else:
        raise err
    rhs = reg_int_semiinf(f, x, basis, split=x + base, **kw)
    return lhs, rhs
