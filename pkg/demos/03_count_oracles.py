"""Four independent ways to count tables, cross-checking each other."""

from tablecount import solve_typical, validate_margins
from tablecount.oracle import (
    brute_enumerate,
    exact_count,
    geometric_mc_count,
    integral_count,
)

mg = validate_margins([6, 2], [3, 3, 2])
sol = solve_typical(mg)

# brute enumeration walks every matrix; only viable for tiny margins
brute = brute_enumerate(mg)
print("brute enumeration :", brute.value, f"({brute.states_explored} nodes)")

# the dynamic program counts in arbitrary precision without enumerating
dp = exact_count(mg)
print("dynamic program   :", dp.value, f"({dp.states_explored} states)")

# trapezoid quadrature of the exact torus integral; the periodic grid
# converges geometrically, so modest grids already give many digits
quad = integral_count(sol, mg, grid=80)
print("torus quadrature  :", f"{quad.estimate:.10f}",
      f"(grid {quad.grid_points_per_axis}, imag {quad.imag_part:.2e})")

# geometric Monte Carlo: sample the max-entropy model, count margin hits
mc = geometric_mc_count(sol, mg, samples=500_000, seed=42)
print("geometric MC      :", f"{mc.estimate:.4f} +- {mc.std_error:.4f}",
      f"({mc.hits} hits)")

print()
print("all four agree on the integer", dp.value)

# the quadrature grid must be fine enough; below about 2N points per
# axis the aliased copies of the lattice contaminate the sum
for grid in (10, 20, 40, 80):
    q = integral_count(sol, mg, grid=grid)
    print(f"grid {grid:3d}  estimate {q.estimate:.8f}")
