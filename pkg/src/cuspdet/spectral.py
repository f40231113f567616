r"""
Finite-difference eigenvalues of ``H`` on a truncated interval ``[a, R]``.

With ``y = log x`` and ``f = x^{-1/2} u`` the operator becomes

.. math::

    -u'' + (\mu^2 e^{2y} + V(e^y)) u,

unitarily (``f^2 dx = u^2 dy``).  It is discretised by the three-point
Laplacian on a uniform ``y`` grid with a Dirichlet wall at ``log R``.  At
``y = log a`` the Dirichlet condition removes the boundary node, while
``f' + alpha f = 0`` becomes ``u' + (alpha a - 1/2) u = 0`` and is imposed
with a ghost node.  After symmetric rescaling of the boundary row the
Dirichlet matrix is the principal submatrix of the Neumann-type one, so the
two discrete spectra interlace exactly.  Eigenvalues are improved by one
Richardson step over the grid pair ``(n, 2n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .operator import NumericalError, OperatorSpec
from .quadrature import gk_integrate

SCHEME = "ThreePointLiouville"
DEFAULT_N = 8000
GUARD_FACTOR = 4.0       # mu^2 R^2 >= GUARD_FACTOR * lambda_count
R_MIN = 40.0             # in units of 1/mu


class GuardError(ValueError):
    """The truncation radius is too small for the requested eigenvalues."""

    def __init__(self, msg, suggested_R):
        super().__init__(msg)
        self.suggested_R = suggested_R


@dataclass
class Discretization:
    R: float
    n: int
    scheme: str
    right_bc: str
    eigs: np.ndarray
    tol: np.ndarray
    raw: dict = field(default_factory=dict, repr=False)


def _assemble(spec: OperatorSpec, R, n):
    """Diagonal and off-diagonal of the symmetric matrix on ``n`` intervals."""
    y0, y1 = math.log(spec.a), math.log(R)
    h = (y1 - y0) / n
    y = y0 + h * np.arange(n)            # nodes 0..n-1 (node n is the wall)
    x = np.exp(y)
    q = spec.mu ** 2 * x * x + spec.potential(x)
    d = 2.0 / h ** 2 + q
    e = np.full(n - 1, -1.0 / h ** 2)
    if spec.bc.is_dirichlet:
        return d[1:], e[1:], h
    gam = spec.bc.alpha * spec.a - 0.5
    d = d.copy()
    d[0] = (2.0 + 2.0 * h * gam) / h ** 2 + q[0]
    # the ghost row reads -2/h^2; scaling the boundary unknown by sqrt(2)
    # makes the matrix symmetric
    e[0] = -math.sqrt(2.0) / h ** 2
    return d, e, h


def fd_matrix(spec: OperatorSpec, R, n):
    """Dense symmetric matrix (for small n and for tests)."""
    d, e, _ = _assemble(spec, R, n)
    m = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    if not np.array_equal(m, m.T):
        raise NumericalError("assembled matrix is not symmetric")
    return m


def _lowest(spec, R, n, count, vectors=False):
    d, e, _ = _assemble(spec, R, n)
    if count > d.size:
        raise ValueError("count exceeds the number of grid unknowns")
    out = eigh_tridiagonal(d, e, select="i", select_range=(0, count - 1),
                           eigvals_only=not vectors, lapack_driver="stemr" if vectors else "stebz")
    return out


def guard_radius(spec: OperatorSpec, lam):
    """Smallest ``R`` with ``mu^2 R^2 >= GUARD_FACTOR * lam``."""
    return math.sqrt(GUARD_FACTOR * max(lam, 0.0)) / spec.mu


def auto_radius(spec: OperatorSpec, count, n=2000):
    """Truncation radius satisfying the guard for the ``count``-th eigenvalue."""
    R = max(R_MIN / spec.mu, 2.0 * spec.a)
    for _ in range(20):
        lam = float(_lowest(spec, R, n, count)[-1])
        need = 1.1 * guard_radius(spec, lam)
        if need <= R:
            return R
        R = need
    raise NumericalError("could not find a truncation radius satisfying the guard")


def fd_eigenvalues(spec: OperatorSpec, R=None, n=DEFAULT_N, count=10,
                   full_output=False):
    """Lowest ``count`` eigenvalues, Richardson-extrapolated over ``(n, 2n)``.

    ``R=None`` picks the radius by the guard ``mu^2 R^2 >= 4 lambda_count``;
    an explicit ``R`` violating it raises :class:`GuardError`.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if R is None:
        R = auto_radius(spec, count)
    R = float(R)
    if R <= spec.a:
        raise ValueError("R must exceed a")
    l1 = np.asarray(_lowest(spec, R, n, count))
    l2 = np.asarray(_lowest(spec, R, 2 * n, count))
    if spec.mu ** 2 * R * R < GUARD_FACTOR * l2[-1]:
        raise GuardError(
            f"R={R:g} too small: mu^2 R^2 = {spec.mu ** 2 * R * R:.4g} < "
            f"{GUARD_FACTOR:g} * lambda_{count} = {GUARD_FACTOR * l2[-1]:.4g}; "
            f"use R >= {1.1 * guard_radius(spec, l2[-1]):.4g}",
            1.1 * guard_radius(spec, l2[-1]))
    lr = (4.0 * l2 - l1) / 3.0
    tol = np.abs(lr - l2)
    if not full_output:
        return lr
    return Discretization(R, n, SCHEME, "Dirichlet", lr, tol, {"n": l1, "2n": l2})


def fd_eigenpairs(spec: OperatorSpec, R, n, count):
    """Eigenvalues and orthonormal eigenvectors of the unrefined matrix."""
    return _lowest(spec, R, n, count, vectors=True)


# ---------------------------------------------------------------------------
# Weyl law


def weyl_leading(lam):
    """``sqrt(lam) log(lam) / (2 pi)``."""
    lam = np.asarray(lam, dtype=float)
    return np.sqrt(lam) * np.log(lam) / (2.0 * math.pi)


def weyl_refined(lam, mu_a=1.0):
    """Semiclassical count ``sqrt(lam)/(2 pi) (log(4 lam/(mu a)^2) - 2)``."""
    lam = np.asarray(lam, dtype=float)
    return np.sqrt(lam) / (2.0 * math.pi) * (np.log(4.0 * lam / mu_a ** 2) - 2.0)


def weyl_density(lam, mu_a=1.0):
    """Derivative of :func:`weyl_refined`: ``log(4 lam/(mu a)^2) / (4 pi sqrt(lam))``."""
    lam = np.asarray(lam, dtype=float)
    return np.log(4.0 * lam / mu_a ** 2) / (4.0 * math.pi * np.sqrt(lam))


def counting_function(eigs, lam):
    """``N(lam) = #{n : lambda_n <= lam}`` (right-continuous)."""
    return np.searchsorted(np.sort(np.asarray(eigs)), np.asarray(lam, dtype=float),
                           side="right")


class WeylCheck(NamedTuple):
    lam: np.ndarray
    counts: np.ndarray
    leading: np.ndarray
    refined: np.ndarray
    eigs: np.ndarray


def weyl_check(spec: OperatorSpec, lambda_max, n=DEFAULT_N, samples=200):
    """Counting function on a grid up to ``lambda_max`` and the Weyl curves."""
    mu_a = spec.mu * spec.a
    guess = int(math.ceil(1.2 * float(weyl_refined(lambda_max, mu_a)))) + 10
    count = max(guess, 10)
    while True:
        d = fd_eigenvalues(spec, None, n, count, full_output=True)
        if d.eigs[-1] > lambda_max:
            break
        count = int(count * 1.5)
    eigs = d.eigs[d.eigs <= lambda_max]
    lam = np.geomspace(max(eigs[0], 1.0), lambda_max, samples)
    return WeylCheck(lam, counting_function(eigs, lam), weyl_leading(lam),
                     weyl_refined(lam, mu_a), eigs)


# ---------------------------------------------------------------------------
# Fredholm tail


class TailEstimate(NamedTuple):
    value: float
    error: float


def fredholm_tail(eigs, z, lambda_cut, mu_a=1.0):
    """``sum_{lambda_n > cut} log(1 + z/lambda_n)`` from the Weyl density.

    The sum is replaced by ``int log(1 + z/lam) dN`` with the semiclassical
    density; the integral starts half a level spacing above ``lambda_cut``
    (the midpoint rule for the step function ``N``).  The error estimate
    is the contribution of one level at the cut.
    """
    z = float(z)
    if z <= 0:
        raise ValueError("z must be > 0")
    eigs = np.asarray(eigs, dtype=float)
    cut = float(lambda_cut)
    if eigs.size and cut < eigs.max() * (1 - 1e-12):
        raise ValueError("lambda_cut must be >= the largest supplied eigenvalue")
    start = cut + 0.5 / float(weyl_density(cut, mu_a))

    # lam = start / u^2 maps [start, inf) to (0, 1] with a bounded integrand
    def f(u):
        lam = start / (u * u)
        return np.log1p(z / lam) * weyl_density(lam, mu_a) * 2.0 * start / u ** 3

    val = gk_integrate(f, 0.0, 1.0, abstol=1e-15, reltol=1e-12)
    return TailEstimate(float(val), math.log1p(z / cut))
