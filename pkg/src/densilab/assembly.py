"""P1 finite element assembly of one angular-mode reduction.

The weighted eigenproblem -div(sigma grad u) = lambda rho u with natural
(Neumann) boundary conditions separates on a manifold of revolution into
radial problems indexed by the spherical-harmonic mode j.  For
u = f(r) Y_j the weak form reduces to the 1D pencil

    K[f, g] = int sigma theta^{n-1} f' g' dr
            + mu_j int sigma theta^{n-3} f g dr
    M[f, g] = int rho theta^{n-1} f g dr

with mu_j = j(j + n - 2).  On an interval theta == 1 and only j = 0
exists.  Piecewise-linear conforming elements with a consistent mass
matrix keep the Rayleigh-quotient structure, so discrete eigenvalues are
upper bounds of the continuous ones.

Boundary conditions: the outer boundary carries no terms (natural); at
the pole, modes j >= 1 get an essential condition f(0) = 0 (regularity
of f Y_j), which also keeps the theta^{n-3} weight integrable.
"""

import numpy as np
from dataclasses import dataclass, field

from . import density as density_mod
from .geometry import Interval, RadialGrid, RevolutionManifold, sphere_eigenvalue
from .quadrature import _GAUSS_OFFSET, element_integrals, gauss_points

# P1 basis values at the two Gauss points of the reference element
_P = 0.5 + _GAUSS_OFFSET
_Q = 0.5 - _GAUSS_OFFSET


@dataclass(frozen=True)
class ModeProblem:
    """One weighted Sturm-Liouville problem (mode j, exponent alpha)."""

    domain: object
    rho: object
    alpha: float
    grid: RadialGrid
    j: int = 0
    sigma: object = None  # defaults to rho**alpha

    def __post_init__(self):
        if isinstance(self.domain, Interval):
            if self.j != 0:
                raise ValueError("interval problems have a single mode j = 0")
        elif isinstance(self.domain, RevolutionManifold):
            if self.j < 0:
                raise ValueError("mode index must be >= 0")
        else:
            raise TypeError(f"unsupported domain type {type(self.domain).__name__}")
        lo, hi = self.domain.bounds
        nodes = self.grid.nodes
        if abs(nodes[0] - lo) > 1e-12 * max(1.0, abs(lo)) or \
           abs(nodes[-1] - hi) > 1e-12 * max(1.0, abs(hi)):
            raise ValueError("grid does not cover the domain")

    @property
    def stiffness_density(self):
        if self.sigma is not None:
            return self.sigma
        return density_mod.power(self.rho, float(self.alpha))

    @property
    def pole_constrained(self):
        """True when the r = 0 node is eliminated (Dirichlet at the pole)."""
        return isinstance(self.domain, RevolutionManifold) and self.j >= 1


@dataclass
class TridiagonalPencil:
    """Symmetric tridiagonal stiffness/mass pair (K, M)."""

    k_diag: np.ndarray
    k_off: np.ndarray
    m_diag: np.ndarray
    m_off: np.ndarray
    problem: ModeProblem = field(default=None, repr=False)

    @property
    def size(self):
        return len(self.k_diag)

    def dense_k(self):
        return np.diag(self.k_diag) + np.diag(self.k_off, 1) + np.diag(self.k_off, -1)

    def dense_m(self):
        return np.diag(self.m_diag) + np.diag(self.m_off, 1) + np.diag(self.m_off, -1)

    def k_norm1(self):
        return _tri_norm1(self.k_diag, self.k_off)

    def m_norm1(self):
        return _tri_norm1(self.m_diag, self.m_off)

    def to_csv(self, path):
        """Debug dump: one row per node with the four band entries."""
        n = self.size
        off_k = np.append(self.k_off, np.nan)
        off_m = np.append(self.m_off, np.nan)
        rows = np.column_stack([np.arange(n), self.k_diag, off_k, self.m_diag, off_m])
        np.savetxt(path, rows, delimiter=",",
                   header="i,k_diag,k_off_up,m_diag,m_off_up", comments="")


def _tri_norm1(d, e):
    row = np.abs(d).astype(float)
    row[:-1] += np.abs(e)
    row[1:] += np.abs(e)
    return float(row.max(initial=0.0))


def quadrature_weights(grid, weightfn):
    """Per-element integrals of ``weightfn`` with the assembly rule."""
    return element_integrals(grid.nodes, weightfn)


def _check_finite(name, vals):
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"non-finite {name} value at a quadrature node")


def assemble(problem):
    """Assemble the tridiagonal pencil of a ModeProblem.

    Only the diagonal and one off-diagonal band are built, so K and M are
    exactly symmetric.  For j = 0 the element stiffness has exact zero
    row sums (constants are in the kernel); for j >= 1 the pole node is
    removed.
    """
    nodes = problem.grid.nodes
    pts, hw = gauss_points(nodes)
    h = 2.0 * hw
    rho = problem.rho
    sig = problem.stiffness_density

    wm = rho(pts)
    wk = sig(pts)
    if isinstance(problem.domain, RevolutionManifold):
        n = problem.domain.n
        th = problem.domain.profile(pts)
        wm = wm * th ** (n - 1)
        wj = None
        if problem.j >= 1:
            mu = sphere_eigenvalue(problem.j, n)
            wj = mu * wk * th ** float(n - 3)
        wk = wk * th ** (n - 1)
    else:
        wj = None
    _check_finite("stiffness weight", wk)
    _check_finite("mass weight", wm)
    if wj is not None:
        _check_finite("angular weight", wj)

    npts = len(nodes)
    k_diag = np.zeros(npts)
    k_off = np.zeros(npts - 1)
    m_diag = np.zeros(npts)
    m_off = np.zeros(npts - 1)

    # gradient part: (int_e wk) / h^2 * [[1, -1], [-1, 1]]
    g = hw * (wk[:, 0] + wk[:, 1]) / h ** 2
    k_diag[:-1] += g
    k_diag[1:] += g
    k_off -= g

    def accumulate(w, diag, off):
        b11 = hw * (w[:, 0] * _P ** 2 + w[:, 1] * _Q ** 2)
        b22 = hw * (w[:, 0] * _Q ** 2 + w[:, 1] * _P ** 2)
        b12 = hw * (w[:, 0] + w[:, 1]) * (_P * _Q)
        diag[:-1] += b11
        diag[1:] += b22
        off += b12

    accumulate(wm, m_diag, m_off)
    if wj is not None:
        accumulate(wj, k_diag, k_off)

    if problem.pole_constrained:
        k_diag, k_off = k_diag[1:], k_off[1:]
        m_diag, m_off = m_diag[1:], m_off[1:]

    if np.any(m_diag <= 0):
        raise ValueError("mass matrix not positive definite: "
                         "non-positive density or degenerate grid")
    return TridiagonalPencil(k_diag, k_off, m_diag, m_off, problem=problem)
