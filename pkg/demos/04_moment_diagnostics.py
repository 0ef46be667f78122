# The correction terms mu and nu are Gaussian expectations with closed
# forms (Wick's theorem).  Here we verify them by direct sampling and
# look at how sharp the separable covariance approximation is.

import math

import numpy as np

from tablecount import solve_typical, validate_margins
from tablecount.edgeworth import mc_expectations, mu_term, nu_term
from tablecount.gaussian import (
    build_quadratic,
    covariance_diagnostics,
    pair_sum_covariance,
)

mg = validate_margins([9, 5, 6, 4, 7], [7, 6, 5, 8, 5])
sol = solve_typical(mg)
model = build_quadratic(sol, mg)

mu = mu_term(sol, model)
nu = nu_term(sol, model)
mc = mc_expectations(model, sol, samples=200_000, seed=1)

print("mu  closed form", round(mu, 6), "  sampled", round(mc.mu_hat, 6),
      "  se", round(mc.std_errors["mu"], 6))
print("nu  closed form", round(nu, 6), "  sampled", round(mc.nu_hat, 6),
      "  se", round(mc.std_errors["nu"], 6))
print("characteristic fn", mc.char_fn_hat, " vs e^{-mu/2} =",
      round(math.exp(-mu / 2), 6))
print()

# covariances of pair sums s_j + t_k are nearly separable: close to
# 1/a_j + 1/b_k on the diagonal and close to 0 for disjoint pairs
diag = covariance_diagnostics(sol, mg)
print("a =", np.round(diag.a, 3))
print("b =", np.round(diag.b, 3))
print("uniform error bound", diag.delta_bound)

worst = 0.0
for j in range(mg.m):
    for k in range(mg.n):
        got = pair_sum_covariance(model, j, k, j, k)
        predicted = 1.0 / diag.a[j] + 1.0 / diag.b[k]
        worst = max(worst, abs(got - predicted))
print("worst diagonal deviation", worst, " (bound", diag.delta_bound, ")")
