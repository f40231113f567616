# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Large-shift expansion of the resolvent trace
#
# `Tr(H + z^2)^{-1} ~ b0 z^{-1} log z + a0 z^{-1} + a1 z^{-2} + ...`.
# The logarithm is the footprint of the infinite-volume cusp end.

# %%
import math

import numpy as np

from cuspdet import detz, trace
from cuspdet.operator import BoundaryCondition, OperatorSpec, Potential

V = Potential.power_exp(0.3, 0.5, 1.0)
specs = {
    "Dirichlet": OperatorSpec(),
    "Neumann(0)": OperatorSpec(bc=BoundaryCondition.neumann(0.0)),
    "Neumann(1)": OperatorSpec(bc=BoundaryCondition.neumann(1.0)),
    "Dirichlet + V": OperatorSpec(potential=V),
}

# %% [markdown]
# ## Trace values
#
# The trace is the integral of the Green diagonal, built from `psi` alone.

# %%
zs = np.array([0.5, 3.0, 50.0, 400.0])
for name, spec in specs.items():
    print(f"{name:14s}", np.array2string(trace.resolvent_traces(spec, zs), precision=10))

# %% [markdown]
# ## Fitted coefficients
#
# The fit uses samples on `[20, 400]` plus two remainder columns.
# `b0 = 1/2` and `a0 = log(2/(mu a))/2` do not depend on the boundary
# condition or on `V`.  The `z^{-2}` coefficient does depend on the
# boundary: it comes out as `-1/4` for Dirichlet and `+1/4` for
# Neumann-type data.

# %%
for name, spec in specs.items():
    e = trace.fit_trace_expansion(spec)
    print(f"{name:14s} b0={e.b0:.8f} a0={e.a0:.8f} a1={e.a1:+.6f} "
          f"(+/- {e.uncertainty(-2, 0):.1e})")
print("log(2)/2 =", 0.5 * math.log(2))

# %% [markdown]
# ## Cross-check of the sign of a1
#
# Since `d/dnu log det(H + nu^2) = 2 nu Tr(H + nu^2)^{-1}`, a term
# `c log nu` in `log det` gives `a1 = c/2`.  The Wronskian formula gives
# `c = -1/2` for Dirichlet (from `K_nu ~ nu^{-1/2}...`) and `c = +1/2` for
# Neumann (one more power of `nu` from `lambda_alpha`).

# %%
from cuspdet.regfit import ExpansionBasis, fit_expansion

nus = np.geomspace(20, 400, 25)
basis = ExpansionBasis.of([(1, 1), (1, 0), (0, 1), (0, 0), (-1, 0), (-2, 0), (-3, 0)])
for name in ("Dirichlet", "Neumann(1)"):
    spec = specs[name]
    logdet = [detz.detz_wronskian(spec.with_nu(n), check_drift=False).log_value for n in nus]
    c = fit_expansion(nus, np.array(logdet), basis).coeff(0, 1)
    print(f"{name:10s} log nu coefficient {c:+.6f} -> a1 = {c / 2:+.6f}")

# %% [markdown]
# Domain monotonicity says the same thing: the Dirichlet resolvent is
# dominated by any Neumann-type resolvent, so the difference of traces is
# negative, decaying like `-1/(2 z^2)`.

# %%
z = np.geomspace(20, 400, 6)
diff = trace.resolvent_traces(specs["Dirichlet"], z) - trace.resolvent_traces(specs["Neumann(1)"], z)
print(np.array2string(diff * z ** 2, precision=5))

# %% [markdown]
# ## Effect of the potential
#
# A potential decaying like `e^{-x}` changes the trace only at order
# `z^{-3}`.

# %%
d = trace.resolvent_traces(specs["Dirichlet + V"], z) - trace.resolvent_traces(specs["Dirichlet"], z)
print("slope:", np.polyfit(np.log(z), np.log(np.abs(d)), 1)[0])
