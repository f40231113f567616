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
# # Discrete spectrum, Weyl law and the Fredholm determinant
#
# In the variable `y = log x` the operator is a Schroedinger operator with
# potential `mu^2 e^{2y}`.  A three-point scheme on a truncated interval
# with one Richardson step gives the low eigenvalues.

# %%
import numpy as np

from cuspdet import detz, spectral
from cuspdet.operator import OperatorSpec

spec = OperatorSpec()
d = spectral.fd_eigenvalues(spec, count=200, full_output=True)
print(f"R = {d.R:.1f}, n = {d.n}")
print("lowest:", np.array2string(d.eigs[:5], precision=8))
print("largest tolerance:", d.tol.max())

# %% [markdown]
# ## Truncation guard
#
# The truncation point must be far beyond the classical turning point of
# the largest requested eigenvalue.

# %%
try:
    spectral.fd_eigenvalues(spec, R=40.0, count=200)
except spectral.GuardError as e:
    print(e)

# %% [markdown]
# ## Counting function
#
# `N(lambda) ~ sqrt(lambda) log(lambda) / (2 pi)`; the approach to the
# leading term is logarithmically slow.

# %%
w = spectral.weyl_check(spec, 1e5)
for lam in (1e3, 1e4, 1e5):
    i = np.searchsorted(w.lam, lam, side="right") - 1
    print(f"lambda={w.lam[i]:.0f}: N={w.counts[i]}, N/leading={w.counts[i] / w.leading[i]:.4f}, "
          f"N/refined={w.counts[i] / w.refined[i]:.4f}")

# %% [markdown]
# ## Eigenvalue product
#
# `prod (1 + z/lambda_n)` over the computed eigenvalues, times a Weyl-law
# estimate of the omitted factors, against `det(H + z)/det(H)`.

# %%
for z in (1.0, 4.0, 9.0):
    lhs, rhs = detz.friedlander_check(spec, z, d.eigs)
    print(f"z={z}: product {lhs:.10f}  determinant ratio {rhs:.10f}  rel {lhs / rhs - 1:.1e}")
