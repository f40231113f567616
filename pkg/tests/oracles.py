"""High-precision reference values, independent of the library code paths.

``series_i`` sums the defining power series of I at high precision;
``series_k`` forms K from I_{-nu} and I_{nu}.  At integer order that formula
is a 0/0 limit, which is taken by averaging the symmetric neighbours
``n +- delta`` (error O(delta^2)) with enough guard digits to absorb the
cancellation.
"""
from __future__ import annotations

import mpmath as mp


def _dps_for(x):
    # I_{-nu} - I_{nu} cancels down to exp(-2x) of its size
    return int(40 + 0.87 * float(x) + 10)


def _series_i_mp(nu, x):
    x2 = (x / 2) ** 2
    term = (x / 2) ** nu * mp.rgamma(nu + 1)
    s = term
    k = 0
    tiny = mp.mpf(10) ** (-mp.mp.dps - 5)
    while True:
        k += 1
        term = term * x2 / (k * (nu + k))
        s += term
        if k > x and abs(term) < tiny * abs(s):
            break
    return s


def _series_i_signed(nu, x):
    # valid for negative non-integer nu as well: uses 1/Gamma
    x2 = (x / 2) ** 2
    s = mp.mpf(0)
    tiny = mp.mpf(10) ** (-mp.mp.dps - 5)
    k = 0
    base = (x / 2) ** nu
    while True:
        term = base * x2 ** k * mp.rgamma(k + 1) * mp.rgamma(nu + k + 1)
        s += term
        if k > x + abs(nu) and abs(term) < tiny * abs(s) + tiny:
            break
        k += 1
    return s


def series_i(nu, x, dps=None):
    """I_nu(x) as an mpf."""
    with mp.workdps(dps or _dps_for(x)):
        return +_series_i_mp(mp.mpf(nu), mp.mpf(x))


def series_k(nu, x, dps=None):
    """K_nu(x) as an mpf, from (pi/2)(I_{-nu} - I_nu)/sin(nu pi)."""
    delta_digits = 30
    extra = delta_digits + 10
    with mp.workdps((dps or _dps_for(x)) + extra):
        nu = mp.mpf(nu)
        x = mp.mpf(x)

        def k_nonint(v):
            return mp.pi / 2 * (_series_i_signed(-v, x) - _series_i_signed(v, x)) / mp.sin(v * mp.pi)

        if abs(nu - mp.nint(nu)) < mp.mpf(10) ** -12:
            d = mp.mpf(10) ** (-delta_digits)
            n = mp.nint(nu)
            val = (k_nonint(n + d) + k_nonint(n - d)) / 2
        else:
            val = k_nonint(nu)
        return +val


def fd_derivative(f, x, h=1e-5):
    """Central difference with one Richardson step."""
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3
