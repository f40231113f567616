"""One table of every numerical default, printed by ``cuspdet --show-defaults``."""
from __future__ import annotations

from . import bessel, detz, operator, potential, regfit, spectral, trace

DEFAULTS_VERSION = "1"


def defaults_table():
    return {
        "version": DEFAULTS_VERSION,
        "bessel": {
            "uniform_min_order": bessel.Z_MIN,
            "series_x_max": bessel.SERIES_X_MAX,
            "large_arg_x_min": bessel.LARGE_ARG_X_MIN,
            "uniform_terms_auto": bessel.UNIFORM_TERMS,
            "uniform_terms_public": bessel.UNIFORM_KMAX_DEFAULT,
        },
        "regfit": {
            "cond_ceiling": regfit.COND_CEILING,
            "samples_per_decade": regfit.PER_DECADE,
            "window_decades": regfit.WINDOW_DECADES,
            "residual_ceiling": regfit.RESIDUAL_CEILING,
            "quad_tol": regfit.QUAD_TOL,
            "split_cap": regfit.SPLIT_CAP,
        },
        "operator": {
            "panel_degree": operator.PANEL_N,
            "panel_max_eta_growth": operator.PANEL_DETA,
            "panel_max_relative_width": operator.PANEL_REL,
            "volterra_tol": operator.VOLTERRA_TOL,
            "volterra_max_iterations": operator.VOLTERRA_MAXIT,
            "ode_rtol": operator.ODE_RTOL,
            "potential_tail_tol": potential.TAIL_TOL,
            "x_max_rule": "max(17/mu, a+5, potential cutoff), capped at 1e3/mu",
        },
        "trace": {
            "z_grid": list(trace.DEFAULT_Z_RANGE) + ["* max(1, mu a)"],
            "z_points": trace.DEFAULT_Z_POINTS,
            "basis": [list(t) for t in trace.TRACE_BASIS.terms],
            "basis_remainder": [list(t) for t in trace.TRACE_REMAINDER],
            "proximity_guard": trace.PROXIMITY_GUARD,
            "rtol": trace.TRACE_RTOL,
            "k2_tail_decay": trace.TAIL_DECAY,
        },
        "detz": {
            "basis": [list(t) for t in detz.DET_BASIS.terms],
            "basis_remainder": [list(t) for t in detz.DET_REMAINDER],
            "split": f"{detz.TRACE_SPLIT:g} * max(1, mu a)",
            "quad_tol": detz.TRACE_QUAD_TOL,
            "lim_basis": [list(t) for t in detz.LIM_BASIS.terms],
            "lim_remainder": [list(t) for t in detz.LIM_REMAINDER],
            "fd_noise": detz.FD_NOISE,
            "fd_step": detz.fd_step(),
            "zero_tol": detz.ZERO_TOL,
            "matrix": {"mu": detz.MATRIX_MU, "a": detz.MATRIX_A, "bc": detz.MATRIX_BC,
                       "potential": detz.MATRIX_V, "nu": detz.MATRIX_NU},
        },
        "spectral": {
            "scheme": spectral.SCHEME,
            "n": spectral.DEFAULT_N,
            "guard_factor": spectral.GUARD_FACTOR,
            "R_min_times_mu": spectral.R_MIN,
        },
        "tolerances": dict(TOLERANCES),
    }


# overridable from the command line with --tol NAME=VALUE
TOLERANCES = {
    "compare_tol": 1e-3,
    "det_quad_tol": detz.TRACE_QUAD_TOL,
    "volterra_tol": operator.VOLTERRA_TOL,
}
