"""Positive radial densities, their powers, masses and normalization.

A density is a strictly positive function of the radial coordinate: the
signed coordinate x on an interval, the geodesic distance r to the pole
on a manifold of revolution.  Closed-form families stay closed under the
algebra used everywhere else (power, scaling, coordinate stretching), so
identities like (c*rho)^a = c^a * rho^a hold entry-by-entry in the
assembled matrices.

Evaluation is floored to preserve positivity: Gaussian values underflow
to zero once m*r^2 exceeds about 700.  The floor must commute with the
algebra -- rho^a is floored at floor(rho)^a, c*rho at c*floor(rho) --
otherwise the stiffness/mass ratio collapses to 1 wherever both weights
hit a common floor, and the discrete problem grows spurious low
eigenvalues that the continuum problem does not have.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import geometry
from .quadrature import integrate

log = logging.getLogger(__name__)

DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class Exponent:
    """The weight exponent: stiffness weight is density**alpha.

    The supported regimes live in [0, 1]; anything outside is allowed but
    logged as exploratory.
    """

    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            log.warning("exponent alpha=%s outside [0, 1]; exploratory regime", self.alpha)

    def __float__(self):
        return float(self.alpha)


class DensityField:
    """Base class; subclasses implement ``_raw`` (vectorized, unclamped)."""

    is_radial = True
    domain = None
    floor = DENSITY_FLOOR

    def _raw(self, r):
        raise NotImplementedError

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        if self.domain is not None:
            lo, hi = self.domain.bounds
            pad = 1e-12 * max(1.0, abs(lo), abs(hi))
            if np.any(r < lo - pad) or np.any(r > hi + pad):
                raise ValueError("evaluation point outside the density's domain")
        return np.maximum(self._raw(r), self.floor)

    def __call__(self, r):
        return self.evaluate(r)

    def to_config(self):
        raise NotImplementedError


class Constant(DensityField):
    def __init__(self, c=1.0, domain=None):
        if not c > 0:
            raise ValueError("density must be positive")
        self.c = float(c)
        self.domain = domain

    kind = "constant"

    def _raw(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.c)

    def __repr__(self):
        return f"Constant({self.c})"

    def to_config(self):
        return {"kind": "constant", "c": self.c}


class GaussianRadial(DensityField):
    """exp(-m r^2) with r the radial coordinate (geodesic distance)."""

    kind = "gaussian"

    def __init__(self, m, domain=None, floor=DENSITY_FLOOR):
        if not m > 0:
            raise ValueError("gaussian width parameter m must be positive")
        self.m = float(m)
        self.domain = domain
        self.floor = floor

    def _raw(self, r):
        return np.exp(-self.m * np.asarray(r, dtype=float) ** 2)

    def __repr__(self):
        return f"GaussianRadial(m={self.m})"

    def to_config(self):
        return {"kind": "gaussian", "m": self.m}


class CauchyPower(DensityField):
    """The rational bump (2a/(1-a))^{1/(1-a)} * (1 + m x^2)^{-1/(1-a)}.

    Built so that a/(1-a) * (rho^{a-1})'' = m identically; on (-1, 1) this
    forces the first nonzero eigenvalue of the (rho, rho^a) problem to be
    at least m, for every a in (0, 1).
    """

    kind = "cauchy_power"

    def __init__(self, m, alpha, domain=None):
        alpha = float(alpha)
        if not 0.0 < alpha < 1.0:
            raise ValueError("CauchyPower needs alpha strictly inside (0, 1)")
        if not m > 0:
            raise ValueError("width parameter m must be positive")
        self.m = float(m)
        self.alpha = alpha
        self.amplitude = (2.0 * alpha / (1.0 - alpha)) ** (1.0 / (1.0 - alpha))
        self.domain = domain

    def _raw(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * (1.0 + self.m * r ** 2) ** (-1.0 / (1.0 - self.alpha))

    def __repr__(self):
        return f"CauchyPower(m={self.m}, alpha={self.alpha})"

    def to_config(self):
        return {"kind": "cauchy_power", "m": self.m, "alpha": self.alpha}


class Tabulated(DensityField):
    """Samples (r_i, rho_i) interpolated monotone-cubically."""

    kind = "tabulated"

    def __init__(self, r_nodes, values, domain=None):
        r_nodes = np.asarray(r_nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if np.any(values <= 0):
            raise ValueError("tabulated density values must be positive")
        self._spline = PchipInterpolator(r_nodes, values)
        self.r_nodes = r_nodes
        self.values = values
        self.domain = domain

    @classmethod
    def from_csv(cls, path, domain=None):
        data = np.loadtxt(path, delimiter=",", comments="#")
        return cls(data[:, 0], data[:, 1], domain=domain)

    def _raw(self, r):
        return self._spline(np.asarray(r, dtype=float))

    def __repr__(self):
        return f"Tabulated({len(self.r_nodes)} nodes)"

    def to_config(self):
        return {"kind": "tabulated", "r": self.r_nodes.tolist(), "values": self.values.tolist()}


class Scaled(DensityField):
    """c * base, kept as a wrapper so c^alpha factors out exactly.

    The floor scales along: max(c*raw, c*floor) = c*max(raw, floor).
    """

    kind = "scaled"

    def __init__(self, base, c):
        if not c > 0:
            raise ValueError("scale factor must be positive")
        self.base = base
        self.c = float(c)
        self.domain = base.domain
        self.floor = c * base.floor

    def _raw(self, r):
        return self.c * self.base._raw(r)

    def __repr__(self):
        return f"Scaled({self.base!r}, c={self.c})"

    def to_config(self):
        return {"kind": "scaled", "c": self.c, "base": self.base.to_config()}


class PowerDensity(DensityField):
    """base**alpha for families without a closed-form power.

    The power is applied to the floored base, so the ratio base**alpha /
    base stays at floor(base)^(alpha-1) in the underflow region instead
    of collapsing to 1.
    """

    kind = "power"

    def __init__(self, base, alpha):
        self.base = base
        self.alpha = float(alpha)
        self.domain = base.domain
        self.floor = base.floor ** self.alpha if self.alpha != 0 else 1.0

    def _raw(self, r):
        return self.base.evaluate(r) ** self.alpha

    def __repr__(self):
        return f"{self.base!r}**{self.alpha}"

    def to_config(self):
        return {"kind": "power", "alpha": self.alpha, "base": self.base.to_config()}


def evaluate(rho, r):
    """Pointwise value(s) of the density at radial coordinate(s) r."""
    return rho.evaluate(r)


def power(rho, alpha):
    """The density rho**alpha, using closed forms where they exist."""
    alpha = float(alpha)
    if alpha == 0.0:
        return Constant(1.0, domain=rho.domain)
    if alpha == 1.0:
        return rho
    if isinstance(rho, Constant):
        return Constant(rho.c ** alpha, domain=rho.domain)
    if isinstance(rho, GaussianRadial):
        return GaussianRadial(alpha * rho.m, domain=rho.domain,
                              floor=rho.floor ** alpha)
    if isinstance(rho, Scaled):
        return Scaled(power(rho.base, alpha), rho.c ** alpha)
    if isinstance(rho, PowerDensity):
        return PowerDensity(rho.base, rho.alpha * alpha)
    return PowerDensity(rho, alpha)


def scale(rho, c):
    """The density c * rho."""
    if isinstance(rho, Constant):
        return Constant(c * rho.c, domain=rho.domain)
    if isinstance(rho, Scaled):
        return Scaled(rho.base, c * rho.c)
    return Scaled(rho, c)


def stretched(rho, s):
    """The density r -> rho(r / s); transports rho under a homothety."""
    if not s > 0:
        raise ValueError("stretch factor must be positive")
    if isinstance(rho, Constant):
        return rho
    if isinstance(rho, GaussianRadial):
        return GaussianRadial(rho.m / s ** 2, floor=rho.floor)
    if isinstance(rho, CauchyPower):
        return CauchyPower(rho.m / s ** 2, rho.alpha)
    if isinstance(rho, Scaled):
        return Scaled(stretched(rho.base, s), rho.c)
    if isinstance(rho, PowerDensity):
        return PowerDensity(stretched(rho.base, s), rho.alpha)
    if isinstance(rho, Tabulated):
        return Tabulated(s * rho.r_nodes, rho.values)
    raise TypeError(f"cannot stretch density of type {type(rho).__name__}")


def total_mass(rho, domain, grid=None):
    """int_M rho dV with the package quadrature rule."""
    grid = geometry._default_grid(domain, grid)
    if isinstance(domain, geometry.Interval):
        return integrate(grid.nodes, rho)
    theta = domain.profile
    w = integrate(grid.nodes, lambda r: rho(r) * theta(r) ** (domain.n - 1))
    return geometry.unit_sphere_area(domain.n) * w


def normalize(rho, domain, grid=None):
    """Rescale so the total mass equals the volume of the domain.

    Idempotent: normalizing twice gives the same scale factor, because
    mass and volume are computed with the same quadrature rule.
    """
    grid = geometry._default_grid(domain, grid)
    c = geometry.volume(domain, grid) / total_mass(rho, domain, grid)
    return scale(rho, c)


def from_config(cfg):
    """Inverse of ``to_config`` for every density kind."""
    kind = cfg["kind"]
    if kind == "constant":
        return Constant(cfg.get("c", 1.0))
    if kind == "gaussian":
        return GaussianRadial(cfg["m"])
    if kind == "cauchy_power":
        return CauchyPower(cfg["m"], cfg["alpha"])
    if kind == "tabulated":
        if "path" in cfg:
            return Tabulated.from_csv(cfg["path"])
        return Tabulated(cfg["r"], cfg["values"])
    if kind == "scaled":
        return Scaled(from_config(cfg["base"]), cfg["c"])
    if kind == "power":
        return PowerDensity(from_config(cfg["base"]), cfg["alpha"])
    raise ValueError(f"unknown density kind {kind!r}")
