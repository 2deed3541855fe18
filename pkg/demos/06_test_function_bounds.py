"""Upper bounds from disjointly supported test functions.

Radial plateau functions (1 on an annulus, linear ramps onto the doubled
annulus) with pairwise disjoint supports span a subspace on which the
Rayleigh quotient is at most the largest individual quotient; by min-max
this caps lambda_k.  The same quotients feed the two-step Hoelder bound
used in the subcritical regime.
"""

import densilab as dl

disk = dl.RevolutionManifold.ball(2, 1.0)
grid = dl.RadialGrid.uniform(disk, 1024)
rho = dl.GaussianRadial(2.0)
alpha = 0.5

# the doubled supports [r/2, 2R] tile the unit radius: three disjoint functions
functions = [
    dl.build_plateau_function(disk, 0.0, 1.0 / 32.0),
    dl.build_plateau_function(disk, 1.0 / 8.0, 1.0 / 8.0),
    dl.build_plateau_function(disk, 0.5, 0.5),
]
for i, u in enumerate(functions):
    q = dl.rayleigh_quotient(disk, rho, alpha, u, grid)
    print(f"test function {i}: support radii {u.knots[0]:.4f}..{u.knots[-1]:.4f}, "
          f"Rayleigh quotient {q:10.3f}")

bound = dl.minmax_bound(disk, rho, alpha, functions, grid)
lam2 = dl.full_spectrum(disk, rho, alpha, 2, grid=grid).lambdas[2]
print(f"\nmin-max bound max_j R(u_j) = {bound:.3f} >= lambda_2 = {lam2:.3f}")

ball = dl.RevolutionManifold.ball(3, 1.0)
u = dl.build_plateau_function(ball, 0.0, 0.25)
rep = dl.holder_chain_check(ball, dl.GaussianRadial(10.0), 0.2, u,
                            dl.RadialGrid.uniform(ball, 512))
print("\nHoelder chain on the 3-ball (gaussian m=10, a=0.2):")
print(f"  energy            {rep.energy:.6e}")
print(f"  after one Hoelder {rep.after_first:.6e}  (slack {rep.first_slack:.2e})")
print(f"  after two Hoelder {rep.after_second:.6e}  (slack {rep.second_slack:.2e})")
print("  chain holds:", rep.holds)
