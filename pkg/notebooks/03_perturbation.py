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
# # Perturbed solutions and the variation formula
#
# With `W = V / x^2` the decaying solution is `psi (1 + f1)` where
# `f1 = L W (1 + f1)` is a Volterra equation.  Its Neumann series converges
# factorially.

# %%
import math

import numpy as np

from cuspdet import detz
from cuspdet.operator import BoundaryCondition, OperatorSpec, Potential, solve_phi, solve_psi, wronskian

base = Potential.power_exp(1.0, 0.5, 1.0)

# %% [markdown]
# ## Iteration increments against the factorial envelope

# %%
for target in (0.05, 0.2, 0.5):
    pot = Potential.power_exp(target / base.w_l1(1.0), 0.5, 1.0)
    d = solve_psi(OperatorSpec(potential=pot), 1.0).diagnostics
    env = [d["w_l1"] ** n / math.factorial(n) for n in range(1, len(d["increments"]) + 1)]
    print(f"|W|_1={target}: iterations={d['volterra_terms_used']}")
    for n, (inc, e) in enumerate(zip(d["increments"], env), start=1):
        print(f"   n={n}  increment {inc:.3e}  envelope {e:.3e}")

# %% [markdown]
# ## Constancy of the weighted Wronskian
#
# `psi` from the Volterra series and `phi` from a forward ODE solve are
# independent constructions; `x^2 W(psi, phi)` must be constant.

# %%
spec = OperatorSpec(bc=BoundaryCondition.neumann(1.0), potential=Potential.power_exp(0.3, 0.5, 1.0))
psi, phi = solve_psi(spec, 2.0), solve_phi(spec, 2.0)
xs = np.linspace(1.0, 10.0, 7)
w = wronskian(psi, phi, xs)
print(w / w[0] - 1)

# %% [markdown]
# ## Derivative of log det in the potential
#
# Three numbers that must agree: central differences of the trace-integral
# determinant, central differences of the log Wronskian, and the weighted
# trace `int V'(x) G(x, x) dx`.

# %%
direction = Potential.power_exp(0.3, 0.5, 1.0)
for bc in (BoundaryCondition.dirichlet(), BoundaryCondition.neumann(1.0)):
    s = OperatorSpec(bc=bc, nu=1.0)
    lhs, rhs = detz.variation_check(s, direction)
    g = detz.green_variation(s, direction)
    print(f"{bc.kind:9s} trace FD {lhs:.9f}  Wronskian FD {rhs:.9f}  Green {g:.9f}")
