"""Closed-form check: the Neumann spectrum of (-1, 1).

With a flat density the weighted problem reduces to -u'' = lambda u with
Neumann ends, whose eigenvalues are (k pi / 2)^2.  The discrete values
converge from above at second order; halving the mesh width divides the
error by four.
"""

import math

import densilab as dl

interval = dl.Interval(-1.0, 1.0)
flat = dl.Constant(1.0)

print("k     computed      exact        rel err")
grid = dl.RadialGrid.uniform(interval, 1024)
result = dl.full_spectrum(interval, flat, alpha=0.5, k_max=8, grid=grid)
for k, lam in enumerate(result.lambdas):
    exact = (k * math.pi / 2.0) ** 2
    rel = abs(lam - exact) / exact if exact else abs(lam)
    print(f"{k}  {lam:12.6f}  {exact:12.6f}  {rel:9.2e}")

print("\nRichardson ratios for lambda_1 (expect ~4):")
lams = []
for n_el in (256, 512, 1024, 2048):
    g = dl.RadialGrid.uniform(interval, n_el)
    lams.append(dl.full_spectrum(interval, flat, 0.5, 1, grid=g).lambdas[1])
for i in range(2, len(lams)):
    ratio = (lams[i - 2] - lams[i - 1]) / (lams[i - 1] - lams[i])
    print(f"  N={2 ** (8 + i)}: ratio = {ratio:.3f}")
