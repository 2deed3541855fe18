"""Full spectra of the weighted problem, Rayleigh quotients, test functions.

``full_spectrum`` merges the angular-mode Sturm-Liouville problems with
their spherical-harmonic multiplicities into the ordered sequence
lambda_0 <= lambda_1 <= ...  The smallest eigenvalue of mode j is
nondecreasing in j (the extra stiffness term is mu_j times a fixed
positive form), so the mode sweep stops safely once a whole mode lies
above the current lambda_{k_max} candidate.

Radial plateau ("annulus") test functions give min-max upper bounds:
any k+1 of them with pairwise disjoint supports span a (k+1)-dimensional
subspace on which the Rayleigh quotient is at most the largest individual
quotient.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from . import density as density_mod
from .assembly import ModeProblem, assemble, quadrature_weights
from .eigensolver import solve_generalized
from .geometry import (Interval, RevolutionManifold, sphere_multiplicity,
                       unit_sphere_area, _default_grid)

_HARD_MODE_CAP = 256


@dataclass(frozen=True)
class SpectrumEntry:
    value: float
    mode_j: int
    radial_index: int
    multiplicity: int
    vector: np.ndarray = field(repr=False, compare=False)


class SpectrumResult:
    """Merged spectrum with mode provenance; counts multiplicities."""

    def __init__(self, entries, k_max):
        entries = sorted(entries, key=lambda t: t.value)
        slots = []
        kept = []
        for ent in entries:
            if len(slots) > k_max:
                break
            kept.append(ent)
            slots.extend([ent.value] * ent.multiplicity)
        self.entries = kept
        self.k_max = k_max
        self._slots = np.array(slots[:k_max + 1])
        if len(self._slots) < k_max + 1:
            raise ValueError("not enough eigenvalues computed to fill k_max + 1 slots")
        lam1 = self._slots[1] if k_max >= 1 else None
        if lam1 is not None and abs(self._slots[0]) > 1e-9 * max(lam1, 1e-300):
            raise ValueError(f"zero mode came out as {self._slots[0]}, expected ~0")

    @property
    def lambdas(self):
        """Eigenvalues by slot, multiplicity expanded, length k_max + 1."""
        return self._slots

    def slot_entries(self):
        """One (k, lambda, mode_j, multiplicity) row per slot."""
        rows = []
        k = 0
        for ent in self.entries:
            for _ in range(ent.multiplicity):
                if k > self.k_max:
                    return rows
                rows.append((k, ent.value, ent.mode_j, ent.multiplicity))
                k += 1
        return rows

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "lambda", "mode_j", "multiplicity"])
            w.writerows(self.slot_entries())

    def to_json(self, path=None):
        payload = {
            "k_max": self.k_max,
            "entries": [
                {"k": k, "lambda": lam, "mode_j": j, "multiplicity": mult}
                for k, lam, j, mult in self.slot_entries()
            ],
        }
        if path is not None:
            with open(path, "w") as fh:
                json.dump(payload, fh, indent=2)
        return payload


def _solve_mode(domain, rho, alpha, grid, j, k_need, sigma=None):
    problem = ModeProblem(domain=domain, rho=rho, alpha=float(alpha),
                          grid=grid, j=j, sigma=sigma)
    pencil = assemble(problem)
    pairs = solve_generalized(pencil, min(k_need, pencil.size) - 1)
    vectors = pairs.vectors
    if problem.pole_constrained:
        vectors = np.vstack([np.zeros(vectors.shape[1]), vectors])
    return pairs.values, vectors


def full_spectrum(domain, rho, alpha, k_max, grid=None, j_max=None, sigma=None):
    """First k_max + 1 eigenvalues of the full problem, multiplicity-correct."""
    grid = _default_grid(domain, grid)
    k_need = k_max + 1

    if isinstance(domain, Interval):
        values, vectors = _solve_mode(domain, rho, alpha, grid, 0, k_need, sigma)
        entries = [SpectrumEntry(v, 0, i, 1, vectors[:, i])
                   for i, v in enumerate(values)]
        return SpectrumResult(entries, k_max)

    n = domain.n
    entries = []
    slots_filled = 0
    cutoff = np.inf
    hard_cap = _HARD_MODE_CAP if j_max is None else j_max
    j = 0
    mode_min = np.inf
    while True:
        values, vectors = _solve_mode(domain, rho, alpha, grid, j, k_need, sigma)
        mult = sphere_multiplicity(j, n)
        mode_min = values[0]
        if mode_min <= cutoff:
            for i, v in enumerate(values):
                entries.append(SpectrumEntry(v, j, i, mult, vectors[:, i]))
            slots_filled += mult * len(values)
            expanded = np.sort(np.concatenate(
                [np.full(e.multiplicity, e.value) for e in entries]))
            if len(expanded) >= k_need:
                cutoff = expanded[k_max]
        if slots_filled >= k_need and mode_min > cutoff:
            break
        if j >= hard_cap:
            if j_max is not None:
                raise ValueError(
                    f"j_max={j_max} insufficient: mode {j} still reaches "
                    f"{mode_min:.6g} <= lambda_k_max={cutoff:.6g}; raise j_max "
                    f"until a whole mode clears that value")
            raise RuntimeError(f"mode sweep did not terminate below j={j}")
        j += 1
    return SpectrumResult(entries, k_max)


@dataclass(frozen=True)
class TestFunction:
    """Piecewise-linear function of the radial distance d(x, center).

    ``knots``/``knot_values`` describe the profile; outside the last knot
    the function vanishes, below the first knot it takes ``left_value``.
    Values must lie in [0, 1].
    """

    knots: tuple
    knot_values: tuple
    left_value: float = 0.0
    center: float = None  # interval only; manifolds are centered at the pole

    __test__ = False  # keep pytest from collecting this as a test class

    def __post_init__(self):
        vals = np.asarray(self.knot_values, dtype=float)
        if np.any(vals < 0) or np.any(vals > 1) or not 0 <= self.left_value <= 1:
            raise ValueError("test function values must lie in [0, 1]")
        if np.any(np.diff(self.knots) < 0):
            raise ValueError("knots must be nondecreasing")

    @classmethod
    def constant(cls):
        return cls(knots=(np.inf,), knot_values=(1.0,), left_value=1.0)

    def distances(self, domain, grid):
        if isinstance(domain, Interval):
            c = domain.center if self.center is None else self.center
            return np.abs(grid.nodes - c)
        return grid.nodes.copy()

    def sample(self, domain, grid):
        """Nodal values of the profile on the grid."""
        d = self.distances(domain, grid)
        if np.isinf(self.knots[0]):
            return np.full_like(d, self.left_value)
        return np.interp(d, self.knots, self.knot_values,
                         left=self.left_value, right=0.0)

    def support_elements(self, domain, grid):
        """Mask of grid elements where the sampled function is not zero."""
        v = self.sample(domain, grid)
        return (v[:-1] != 0.0) | (v[1:] != 0.0)


def build_plateau_function(domain, r, R, center=None):
    """The annulus profile: 1 on {r <= d <= R}, supported in {r/2 <= d <= 2R}.

    Ramps linearly from 0 at d = r/2 up to 1 at d = r (slope 2/r) and back
    down from 1 at d = R to 0 at d = 2R (slope 1/R).  With r = 0 the inner
    ramp is dropped and the function is a cap equal to 1 on [0, R].
    """
    if R < r:
        raise ValueError(f"need r <= R, got r={r}, R={R}")
    if not R > 0:
        raise ValueError("outer plateau radius R must be positive")
    if 2 * R > domain.extent * (1 + 1e-12):
        raise ValueError(f"support radius 2R={2 * R} exceeds the domain extent")
    if r == 0:
        return TestFunction(knots=(0.0, R, 2 * R), knot_values=(1.0, 1.0, 0.0),
                            left_value=1.0, center=center)
    return TestFunction(knots=(r / 2, r, R, 2 * R), knot_values=(0.0, 1.0, 1.0, 0.0),
                        left_value=0.0, center=center)


def build_collar_function(domain, a, r0, center=None):
    """1 on {d <= a}, decaying linearly to 0 across a collar of width r0."""
    if not (a >= 0 and r0 > 0):
        raise ValueError("need a >= 0 and r0 > 0")
    if a + r0 > domain.extent * (1 + 1e-12):
        raise ValueError("collar support exceeds the domain extent")
    return TestFunction(knots=(a, a + r0), knot_values=(1.0, 0.0),
                        left_value=1.0, center=center)


def rayleigh_quotient(domain, rho, alpha, u, grid=None):
    """Rayleigh quotient int sigma |grad u|^2 dV / int rho u^2 dV.

    ``u`` may be a TestFunction (sampled onto the grid) or an array of
    nodal values; radial functions live in the j = 0 sector, whose pencil
    supplies both quadratic forms.
    """
    grid = _default_grid(domain, grid)
    pencil = assemble(ModeProblem(domain=domain, rho=rho, alpha=float(alpha),
                                  grid=grid, j=0))
    return _pencil_quotient(pencil, _nodal(u, domain, grid))


def _nodal(u, domain, grid):
    if isinstance(u, TestFunction):
        return u.sample(domain, grid)
    v = np.asarray(u, dtype=float)
    if len(v) != len(grid.nodes):
        raise ValueError("nodal vector length does not match the grid")
    return v


def _pencil_quotient(pencil, v):
    kd, ke, md, me = pencil.k_diag, pencil.k_off, pencil.m_diag, pencil.m_off
    num = float(v @ (kd * v) + 2.0 * v[:-1] @ (ke * v[1:]))
    den = float(v @ (md * v) + 2.0 * v[:-1] @ (me * v[1:]))
    if den <= 0:
        raise ValueError("test function vanishes in the mass inner product")
    # K is PSD; a negative numerator is pure rounding in the row sums
    return max(num, 0.0) / den


def minmax_bound(domain, rho, alpha, test_functions, grid=None):
    """max_j R(u_j) over disjointly supported functions: an upper bound
    for lambda_k of the full problem (k + 1 functions supplied)."""
    grid = _default_grid(domain, grid)
    masks = [u.support_elements(domain, grid) for u in test_functions]
    for i in range(len(masks)):
        for k in range(i + 1, len(masks)):
            if np.any(masks[i] & masks[k]):
                raise ValueError(f"supports of test functions {i} and {k} overlap")
    pencil = assemble(ModeProblem(domain=domain, rho=rho, alpha=float(alpha),
                                  grid=grid, j=0))
    return max(_pencil_quotient(pencil, _nodal(u, domain, grid))
               for u in test_functions)


@dataclass(frozen=True)
class HolderChainReport:
    energy: float          # int_S |grad u|^2 rho^alpha dV
    after_first: float     # (int_S |grad u|^n)^{2/n} (int_S rho^{n a/(n-2)})^{(n-2)/n}
    after_second: float    # (int_S |grad u|^n)^{2/n} (int_S rho)^a |S|^{(n-2)/n - a}
    first_slack: float
    second_slack: float

    @property
    def holds(self):
        scale = max(abs(self.energy), abs(self.after_second), 1e-300)
        return (self.first_slack >= -1e-12 * scale
                and self.second_slack >= -1e-12 * scale)


def holder_chain_check(domain, rho, alpha, u, grid=None):
    """Numerical check of the two-step Hoelder bound on the energy.

    All five integrals run over the region S where the test function
    varies (the flat plateau contributes nothing to the energy, only
    weakening the bound), with the shared element quadrature, so for
    rho == 1 and constant |grad u| both inequalities are equalities up
    to rounding.  Needs n >= 3 and alpha in (0, (n-2)/n).
    """
    if not isinstance(domain, RevolutionManifold) or domain.n < 3:
        raise ValueError("the chain needs a manifold of dimension n >= 3")
    n = domain.n
    alpha = float(alpha)
    if not 0.0 < alpha < (n - 2) / n:
        raise ValueError(f"alpha must lie in (0, {(n - 2) / n:.6g}), got {alpha}")
    grid = _default_grid(domain, grid)
    v = _nodal(u, domain, grid)
    h = np.diff(grid.nodes)
    slopes = np.diff(v) / h
    mask = slopes != 0.0
    if not np.any(mask):
        raise ValueError("test function has empty gradient support")

    omega = unit_sphere_area(n)
    theta = domain.profile
    w_vol = omega * quadrature_weights(grid, lambda r: theta(r) ** (n - 1))
    w_rho = omega * quadrature_weights(grid, lambda r: rho(r) * theta(r) ** (n - 1))
    sig = density_mod.power(rho, alpha)
    w_sig = omega * quadrature_weights(grid, lambda r: sig(r) * theta(r) ** (n - 1))
    rex = density_mod.power(rho, n * alpha / (n - 2))
    w_rex = omega * quadrature_weights(grid, lambda r: rex(r) * theta(r) ** (n - 1))

    g = np.abs(slopes[mask])
    energy = float(np.sum(g ** 2 * w_sig[mask]))
    grad_n = float(np.sum(g ** n * w_vol[mask]))
    vol_s = float(np.sum(w_vol[mask]))
    mass_s = float(np.sum(w_rho[mask]))
    mass_ex = float(np.sum(w_rex[mask]))

    after_first = grad_n ** (2.0 / n) * mass_ex ** ((n - 2.0) / n)
    after_second = (grad_n ** (2.0 / n) * mass_s ** alpha
                    * vol_s ** ((n - 2.0) / n - alpha))
    return HolderChainReport(
        energy=energy,
        after_first=after_first,
        after_second=after_second,
        first_slack=after_first - energy,
        second_slack=after_second - after_first,
    )
