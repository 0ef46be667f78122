"""Scaling the margins: the count grows like alpha^{(m-1)(n-1)}.

For large smooth margins the number of tables behaves like the volume of
the transportation polytope, which is homogeneous of degree (m-1)(n-1).
Scaling R and C by alpha should therefore shift the log-estimate by
(m-1)(n-1) ln alpha.  The estimate reproduces this without ever seeing
the polytope.
"""

import math

from tablecount import validate_margins
from tablecount.edgeworth import estimate_count
from tablecount.margins import scale_and_round

rows = [91000 + 2000 * j for j in range(10)]
cols = [95500 + 1000 * k for k in range(10)]
mg = validate_margins(rows, cols)
base = estimate_count(mg)
degree = (mg.m - 1) * (mg.n - 1)

print("10x10 margins, N =", mg.total)
print("log estimate", round(base.log_count, 3))
print()
print("alpha    observed shift    predicted 81*ln(alpha)   rel err")
for alpha in (0.5, 0.25, 0.125):
    scaled = scale_and_round(mg, alpha)
    shift = estimate_count(scaled).log_count - base.log_count
    predicted = degree * math.log(alpha)
    print(f"{alpha:5.3f}   {shift:14.4f}    {predicted:20.4f}"
          f"   {abs(shift / predicted - 1):.2e}")

# scale_and_round keeps totals consistent after rounding, so the scaled
# margins stay feasible even when alpha*N is not an integer multiple
odd = scale_and_round(validate_margins([3, 5], [4, 4]), 0.5)
print()
print("rounded small case:", odd.row_sums, odd.col_sums)
