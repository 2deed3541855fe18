"""Picking sets that are small for three measures at once.

Out of K = 4k + 1 disjoint sets, at most k can hog more than a 1/(k+1)
share of any single measure, so discarding the hogs of the first two
measures and keeping the smallest survivors of the third leaves at least
k + 1 sets below the 1/(k+1) share for all three simultaneously.
"""

import numpy as np

import densilab as dl

rng = np.random.default_rng(5)
k = 2
triple = dl.MeasureTriple.random(k, rng)
bounds = triple.totals / (k + 1)

print(f"K = {triple.k_sets} disjoint sets, k = {k}; "
      f"per-measure share bound = totals / {k + 1}")
print("set   nu_1      nu_2      nu_3    small for all three?")
selected = dl.select_small_sets(triple, k)
for i, row in enumerate(triple.values):
    ok = np.all(row <= bounds)
    mark = "*" if i in selected else " "
    print(f"{mark}{i:3d}  {row[0]:7.3f}  {row[1]:7.3f}  {row[2]:7.3f}    {bool(ok)}")
print(f"\nselected (marked *): {selected}")
print("verified:", dl.brute_force_verify(triple, k, selected))

trials = 2000
bad = sum(
    not dl.brute_force_verify(t, kk, dl.select_small_sets(t, kk))
    for kk in range(1, 11)
    for t in (dl.MeasureTriple.random(kk, rng) for _ in range(trials // 10))
)
print(f"{trials} random instances across k = 1..10: {bad} failures")
