"""Pigeonhole selection of sets that are small for three measures at once.

Given K disjoint sets and three measures, at most k sets can exceed a
1/(k+1) share of any one measure's total (k+1 of them would overshoot
the total).  Discarding the violators of the first two measures and then
keeping the smallest survivors for the third leaves K - 3k sets that are
small for all three; with K >= 4k + 1 that is at least k + 1 sets.
"""

import numpy as np
from dataclasses import dataclass


@dataclass(frozen=True)
class MeasureTriple:
    """Three measure values for each of K disjoint sets, plus totals.

    ``values`` has shape (K, 3); per-measure column sums must not exceed
    the corresponding total.
    """

    values: np.ndarray
    totals: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        t = np.asarray(self.totals, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or t.shape != (3,):
            raise ValueError("need a (K, 3) value array and 3 totals")
        if np.any(v < 0) or np.any(t < 0):
            raise ValueError("measure values must be nonnegative")
        if np.any(v.sum(axis=0) > t * (1 + 1e-12) + 1e-300):
            raise ValueError("per-measure sums exceed the stated totals")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "totals", t)

    @property
    def k_sets(self):
        return self.values.shape[0]

    @classmethod
    def from_csv(cls, path, totals=None):
        """K rows, 3 columns; totals default to the column sums."""
        v = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        if totals is None:
            totals = v.sum(axis=0)
        return cls(values=v, totals=np.asarray(totals, dtype=float))

    @classmethod
    def random(cls, k, rng):
        """A random instance with K = 4k + 1 sets and sums <= totals."""
        kk = 4 * k + 1
        v = rng.uniform(size=(kk, 3))
        slack = rng.uniform(0.0, 1.0, size=3)
        totals = v.sum(axis=0) / np.maximum(slack, 1e-3)
        return cls(values=v, totals=totals)


def select_small_sets(triple, k):
    """Indices of >= k + 1 sets with nu_j(U_i) <= nu_j(total)/(k + 1) for all j.

    Three passes, one per measure: drop the (at most k) sets exceeding
    the bound for measures 1 and 2, then keep the K - 3k smallest
    survivors for measure 3.  Ties at exactly the bound count as
    satisfying it, and sorting breaks ties by index so the output is
    deterministic.  Requires K >= 4k + 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    kk = triple.k_sets
    if kk < 4 * k + 1:
        raise ValueError(f"need K >= 4k + 1 = {4 * k + 1} sets, got {kk}")
    bounds = triple.totals / (k + 1)
    survivors = np.arange(kk)
    for j in (0, 1):
        keep = triple.values[survivors, j] <= bounds[j]
        survivors = survivors[keep]
    third = triple.values[survivors, 2]
    order = np.lexsort((survivors, third))
    chosen = survivors[order][: kk - 3 * k]
    return sorted(int(i) for i in chosen)


def brute_force_verify(triple, k, selection):
    """True iff the selection has >= k + 1 sets all meeting the bounds."""
    selection = list(selection)
    if len(selection) < k + 1:
        return False
    bounds = triple.totals / (k + 1)
    return bool(np.all(triple.values[selection] <= bounds))
