"""The typical matrix: what a random contingency table looks like on average.

Fix row sums R and column sums C.  Among all real non-negative matrices
with those margins there is a unique one maximizing the entropy-like
functional g(X) = sum (x+1)ln(x+1) - x ln x.  Its entries are the means
of the maximum-entropy geometric model consistent with the margins.
"""

import numpy as np

from tablecount import solve_typical, validate_margins
from tablecount.margins import smoothness_report

np.set_printoptions(precision=4, suppress=True)

# symmetric margins force the flat table
mg = validate_margins([2, 2], [2, 2])
sol = solve_typical(mg)
print("margins", mg.row_sums, mg.col_sums)
print(sol.zeta)
print()

# structured columns: each row repeats the same profile
mg = validate_margins([6, 6, 6], [3, 6, 9])
sol = solve_typical(mg)
print("margins", mg.row_sums, mg.col_sums)
print(sol.zeta)
print("iterations:", sol.iterations, " residuals:",
      sol.row_residual, sol.col_residual)
print()

# a skewed instance; the solver still matches the margins to 1e-10
mg = validate_margins([220, 215, 93, 64], [108, 286, 71, 127])
sol = solve_typical(mg)
print("margins", mg.row_sums, mg.col_sums)
print(sol.zeta)
print("row sums of Z:", sol.zeta.sum(axis=1))
print("col sums of Z:", sol.zeta.sum(axis=0))

# the dual potentials certify optimality: ln((z+1)/z) = phi_j + psi_k
phi, psi = sol.potentials.phi, sol.potentials.psi
lhs = np.log1p(1.0 / sol.zeta)
print("stationarity defect:", np.abs(lhs - phi[:, None] - psi[None, :]).max())
print()

# the smoothness report feeds the error heuristics for the estimate
rep = smoothness_report(mg, sol.zeta)
print("tau:", rep.tau, " entry ratio:", round(rep.zeta_ratio, 4),
      " golden-ratio guarantee:", rep.golden_ratio_guarantee)
