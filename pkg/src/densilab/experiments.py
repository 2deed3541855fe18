"""Desk-scale experiment harness: scans, fits, convergence studies.

Every scan row carries a Richardson error estimate from three nested
grids, and assertions are made on extrapolated values.  Normalized
eigenvalues are obtained from raw ones through the exact discrete scaling
identity lambda_1(c rho, (c rho)^a) = c^(a-1) lambda_1(rho, rho^a) with
c = |M| / int rho, which ``exp_scaling_identity`` verifies separately.
"""

import csv
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import density as density_mod
from .density import CauchyPower, Constant, GaussianRadial
from .geometry import (EuclideanBox, Interval, RadialGrid, RevolutionManifold,
                       conformal_reparametrize, volume)
from .quadrature import integrate
from .spectrum import full_spectrum

log = logging.getLogger(__name__)

DEFAULT_M_GRID = tuple(10.0 ** e for e in (1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0))
RICHARDSON_WINDOW = (3.5, 4.5)


def domain_from_config(cfg):
    kind = cfg.get("kind", "interval")
    if kind == "interval":
        return Interval(cfg.get("a", -1.0), cfg.get("b", 1.0))
    if kind == "ball":
        return RevolutionManifold.ball(cfg.get("n", 2), cfg.get("R", 1.0))
    if kind == "cap":
        return RevolutionManifold.spherical_cap(cfg.get("n", 2), cfg.get("R", math.pi / 2))
    if kind == "box":
        return EuclideanBox(cfg.get("n", 2), cfg.get("L", 1.0))
    raise ValueError(f"unknown domain kind {kind!r}")


@dataclass
class ExperimentConfig:
    """Everything a scan needs, loadable from a JSON file."""

    experiment: str = "solve"
    domain: dict = field(default_factory=lambda: {"kind": "interval"})
    density: dict = field(default_factory=lambda: {"kind": "gaussian", "m": 1.0})
    alpha_values: tuple = (0.5,)
    m_values: tuple = DEFAULT_M_GRID
    grid_n: int = 2048
    k_max: int = 5
    j_max: int = None
    c_values: tuple = (1e-3, 1.0, 1e3)
    dims: tuple = (1, 2, 3)
    box_half_side: float = 1.0
    out_dir: str = "."
    fmt: str = "csv"
    seed: int = 7
    exploratory: bool = False
    workers: int = 1

    def __post_init__(self):
        if len(self.alpha_values) == 0 or len(self.m_values) == 0:
            raise ValueError("parameter ranges must be nonempty")
        n = self.grid_n
        if n < 64 or n > 4096 or (n & (n - 1)):
            raise ValueError("grid_n must be a power of two in [64, 4096]")
        if not self.exploratory:
            for a in self.alpha_values:
                if not 0.0 <= a <= 1.0:
                    raise ValueError(
                        f"alpha={a} outside [0, 1]; pass exploratory=True to scan it "
                        "(no assertions are made there)")

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            raw = json.load(fh)
        return cls(**raw)

    def to_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in self.__dict__.items()}


@dataclass
class ScanReport:
    """Rows plus per-alpha slope fits and run metadata."""

    experiment: str
    columns: list
    rows: list
    fits: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.get("passed", True) for r in self.rows) and \
            all(f.get("passed", True) for f in self.fits.values())

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=self.columns, extrasaction="ignore")
            w.writeheader()
            w.writerows(self.rows)

    def to_json(self, path=None):
        payload = {
            "experiment": self.experiment,
            "rows": self.rows,
            "fits": self.fits,
            "metadata": self.metadata,
            "passed": self.passed,
        }
        if path is not None:
            with open(path, "w") as fh:
                json.dump(payload, fh, indent=2, default=float)
        return payload


def _metadata(config=None, t0=None):
    meta = {"tool_version": __version__}
    if config is not None:
        meta["config"] = config if isinstance(config, dict) else config.to_dict()
    if t0 is not None:
        meta["elapsed_seconds"] = round(time.perf_counter() - t0, 3)
    return meta


def _grid_for(domain, n_elements, m=None):
    return RadialGrid.for_density(domain, n_elements, m=m)


def lambda1_richardson(domain, rho, alpha, grid_n, j_max=None):
    """lambda_1 on three nested grids with a Richardson error estimate.

    Returns a dict with the raw value at the finest grid, the
    extrapolated value, the ratio (about 4 for a resolved second-order
    discretization) and the error estimate.
    """
    m = getattr(rho, "m", None)
    if isinstance(rho, density_mod.Scaled):
        m = getattr(rho.base, "m", None)
    lams = []
    for n_el in (grid_n // 4, grid_n // 2, grid_n):
        grid = _grid_for(domain, n_el, m=m)
        lams.append(full_spectrum(domain, rho, alpha, k_max=1,
                                  grid=grid, j_max=j_max).lambdas[1])
    d1, d2 = lams[0] - lams[1], lams[1] - lams[2]
    ratio = d1 / d2 if d2 != 0 else np.inf
    extrapolated = lams[2] + d2 / 3.0
    err = abs(d2) / 3.0
    at_rounding = abs(d2) <= 1e-10 * abs(lams[2])  # converged past the ratio test
    return {
        "lambda1_raw": lams[2],
        "lambda1_extrapolated": extrapolated,
        "richardson_ratio": ratio,
        "richardson_error": err,
        "resolved": bool(RICHARDSON_WINDOW[0] <= ratio <= RICHARDSON_WINDOW[1]
                         or at_rounding),
    }


def _mass_factor(domain, rho, alpha, grid_n, m=None):
    """(int rho / |M|)^(1 - alpha): the exact normalization factor."""
    grid = _grid_for(domain, grid_n, m=m)
    mass = density_mod.total_mass(rho, domain, grid)
    vol = volume(domain, grid)
    return (mass / vol) ** (1.0 - float(alpha)), mass, vol


def _weighted_slope(log_m, log_lam):
    """Weighted least-squares slope with the two largest-m points doubled.

    Returns (slope, half_width) with the half-width twice the standard
    error of the fitted slope.
    """
    w = np.ones_like(log_m)
    w[np.argsort(log_m)[-2:]] = 2.0
    wx = np.sum(w * log_m) / np.sum(w)
    wy = np.sum(w * log_lam) / np.sum(w)
    sxx = np.sum(w * (log_m - wx) ** 2)
    slope = np.sum(w * (log_m - wx) * (log_lam - wy)) / sxx
    resid = log_lam - wy - slope * (log_m - wx)
    dof = max(len(log_m) - 2, 1)
    se = math.sqrt(np.sum(w * resid ** 2) / dof / sxx)
    return float(slope), 2.0 * se


def _scan_rows(jobs, worker, workers=1):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(worker, jobs))
    return [worker(job) for job in jobs]


_SCAN_COLUMNS = ["alpha", "m", "grid_n", "lambda1_raw", "lambda1_extrapolated",
                 "lambda1_normalized", "mass", "richardson_ratio",
                 "richardson_error", "resolved", "passed", "note"]


def _scan_row(domain, alpha, m, rho, grid_n, j_max=None):
    rich = lambda1_richardson(domain, rho, alpha, grid_n, j_max=j_max)
    factor, mass, _vol = _mass_factor(domain, rho, alpha, grid_n, m=m)
    row = {"alpha": alpha, "m": m, "grid_n": grid_n, "mass": mass, "note": ""}
    row.update(rich)
    row["lambda1_normalized"] = rich["lambda1_extrapolated"] * factor
    return row


def exp_one_d_construction(m_values=(1.0, 10.0, 100.0, 1e3, 1e4),
                           alpha_values=(0.3, 0.5, 0.7),
                           grid_n=2048, interval=None, workers=1,
                           slack=0.01):
    """Interval scan with the rational-bump family: lambda_1 >= m.

    Asserts the extrapolated lambda_1(rho_m, rho_m^alpha) >= (1 - slack) m
    for every (m, alpha), and fits the slope of the normalized eigenvalue
    against m per alpha.
    """
    t0 = time.perf_counter()
    interval = interval or Interval(-1.0, 1.0)
    jobs = [(a, m) for a in sorted(alpha_values) for m in sorted(m_values)]

    def run(job):
        a, m = job
        row = _scan_row(interval, a, m, CauchyPower(m, a), grid_n)
        row["passed"] = bool(row["lambda1_extrapolated"] >= (1.0 - slack) * m)
        if not row["passed"]:
            row["note"] = f"lambda1 {row['lambda1_extrapolated']:.6g} < {(1 - slack) * m:.6g}"
        return row

    rows = _scan_rows(jobs, run, workers)
    fits = _slope_fits(rows, alpha_values)
    return ScanReport("verify-1d", _SCAN_COLUMNS, rows, fits,
                      _metadata(t0=t0))


def _slope_fits(rows, alpha_values, floor=None):
    fits = {}
    for a in alpha_values:
        sub = [r for r in rows if r["alpha"] == a]
        lam = np.array([r["lambda1_normalized"] for r in sub])
        mm = np.array([r["m"] for r in sub])
        if len(sub) < 4:
            fits[str(a)] = {"note": "slope fit needs >= 4 points"}
            continue
        slope, hw = _weighted_slope(np.log(mm), np.log(lam))
        entry = {"slope": slope, "half_width": hw, "points": len(sub)}
        if floor is not None:
            entry["slope_floor"] = floor(a)
            entry["passed"] = bool(slope >= floor(a))
        fits[str(a)] = entry
    return fits


def exp_blowup_scan(domain, alpha_values, m_values=DEFAULT_M_GRID,
                    grid_n=2048, workers=1, assert_slopes=True):
    """Gaussian-density scan in the supercritical regime alpha > (n-2)/n.

    The fitted log-log slope of the normalized lambda_1 against m must
    reach the growth exponent 1 - (n/2)(1 - alpha) minus a 0.1 slack.
    Also flags the smallest m from which the normalized value increases
    monotonically (the empirical onset of the divergence).
    """
    t0 = time.perf_counter()
    n = domain.dim
    critical = (n - 2) / n
    if assert_slopes:
        for a in alpha_values:
            if not a > critical:
                raise ValueError(f"alpha={a} is not above the critical exponent {critical}")
    jobs = [(a, m) for a in sorted(alpha_values) for m in sorted(m_values)]

    def run(job):
        a, m = job
        row = _scan_row(domain, a, m, GaussianRadial(m), grid_n)
        row["passed"] = True
        return row

    rows = _scan_rows(jobs, run, workers)
    floor = (lambda a: 1.0 - (n / 2.0) * (1.0 - a) - 0.1) if assert_slopes else None
    fits = _slope_fits(rows, alpha_values, floor=floor)
    for a in alpha_values:
        sub = [r for r in rows if r["alpha"] == a]
        lam = np.array([r["lambda1_normalized"] for r in sub])
        mm = np.array([r["m"] for r in sub])
        increasing = np.diff(lam) > 0
        m0 = None
        for i in range(len(lam) - 1):
            if np.all(increasing[i:]):
                m0 = mm[i]
                break
        fits[str(a)]["m0_empirical"] = m0
        fits[str(a)]["monotone_divergence"] = m0 is not None
    return ScanReport("scan-blowup", _SCAN_COLUMNS, rows, fits,
                      _metadata(t0=t0))


def exp_bounded_scan(domain, alpha_values, m_values=DEFAULT_M_GRID,
                     companion_alpha=0.5, grid_n=2048, workers=1,
                     plateau_rtol=0.05, companion_growth=3.0):
    """Subcritical scan: normalized lambda_1 |M|^{2/n} stays bounded.

    Boundedness is operationalized as saturation: the running maximum
    changes by less than ``plateau_rtol`` over the last decade of the m
    grid.  A companion supercritical column on the same m grid must grow
    by ``companion_growth`` over its last two decades, so the contrast is
    controlled.
    """
    t0 = time.perf_counter()
    n = domain.dim
    critical = (n - 2) / n
    if n < 3:
        raise ValueError("bounded regime needs dimension n >= 3")
    for a in alpha_values:
        if not 0.0 <= a < critical:
            raise ValueError(f"alpha={a} is not below the critical exponent {critical}")
    if companion_alpha is not None and companion_alpha <= critical:
        raise ValueError("companion alpha must be supercritical")

    vol_pow = volume(domain) ** (2.0 / n)
    all_alphas = list(alpha_values) + ([companion_alpha] if companion_alpha else [])
    jobs = [(a, m) for a in all_alphas for m in sorted(m_values)]

    def run(job):
        a, m = job
        row = _scan_row(domain, a, m, GaussianRadial(m), grid_n)
        row["lambda1_normalized"] *= vol_pow
        row["note"] = "companion" if a == companion_alpha else ""
        row["passed"] = True
        return row

    rows = _scan_rows(jobs, run, workers)
    fits = {}
    for a in alpha_values:
        sub = sorted((r for r in rows if r["alpha"] == a), key=lambda r: r["m"])
        mm = np.array([r["m"] for r in sub])
        runmax = np.maximum.accumulate([r["lambda1_normalized"] for r in sub])
        before = runmax[mm <= mm[-1] / 10.0]
        if len(before) == 0:
            raise ValueError("m grid must span at least one decade")
        change = (runmax[-1] - before[-1]) / runmax[-1]
        fits[str(a)] = {
            "running_max": float(runmax[-1]),
            "plateau_change": float(change),
            "passed": bool(change < plateau_rtol),
        }
    if companion_alpha:
        sub = sorted((r for r in rows if r["alpha"] == companion_alpha),
                     key=lambda r: r["m"])
        mm = np.array([r["m"] for r in sub])
        runmax = np.maximum.accumulate([r["lambda1_normalized"] for r in sub])
        start = runmax[mm <= mm[-1] / 100.0]
        growth = runmax[-1] / start[-1] if len(start) else np.inf
        fits["companion"] = {
            "alpha": companion_alpha,
            "growth": float(growth),
            "passed": bool(growth >= companion_growth),
        }
    return ScanReport("scan-bounded", _SCAN_COLUMNS, rows, fits,
                      _metadata(t0=t0))


def exp_conformal_identity(manifold, rho, k_max=5, grid_n=2048, rtol=1e-3):
    """Same spectrum through two pipelines: conformal metric vs weights.

    Left side: reparametrize (M, rho^{2/n} g) as a manifold of revolution
    and solve the unweighted problem on it.  Right side: solve the
    (rho, rho^{(n-2)/n}) problem on the original manifold.  Checks the
    relative eigenvalue differences at ``grid_n`` and at half resolution.
    """
    t0 = time.perf_counter()
    n = manifold.n

    def diffs(n_el):
        grid = RadialGrid.uniform(manifold, n_el)
        tilde = conformal_reparametrize(manifold, rho, grid)
        left = full_spectrum(tilde, Constant(1.0), 0.0, k_max,
                             grid=RadialGrid.uniform(tilde, n_el)).lambdas
        right = full_spectrum(manifold, rho, (n - 2) / n, k_max, grid=grid).lambdas
        out = np.zeros(k_max + 1)
        for k in range(1, k_max + 1):
            out[k] = abs(left[k] - right[k]) / abs(right[k])
        return out, left, right

    coarse, _, _ = diffs(grid_n // 2)
    fine, left, right = diffs(grid_n)
    rows = [{"k": k, "lambda_conformal": left[k], "lambda_weighted": right[k],
             "rel_diff": fine[k], "rel_diff_coarse": coarse[k]}
            for k in range(k_max + 1)]
    passed = bool(np.max(fine) <= rtol and np.max(fine) <= np.max(coarse))
    return ScanReport("conformal-check",
                      ["k", "lambda_conformal", "lambda_weighted",
                       "rel_diff", "rel_diff_coarse"],
                      rows,
                      {"summary": {"max_rel_diff": float(np.max(fine)),
                                   "max_rel_diff_coarse": float(np.max(coarse)),
                                   "passed": passed}},
                      _metadata(t0=t0))


def exp_gaussian_integral_lemma(dims=(1, 2, 3), m_values=(10.0, 100.0, 1e3),
                                half_side=1.0, grid_n=2048):
    """(int_{-L}^{L} e^{-m t^2} dt)^n is strictly above e^{-n} m^{-n/2}."""
    t0 = time.perf_counter()
    rows = []
    for m in sorted(m_values):
        if m ** -0.5 > half_side:
            raise ValueError(f"need m^(-1/2) <= L: m={m}, L={half_side}")
        seg = Interval(-half_side, half_side)
        grid = RadialGrid.for_density(seg, grid_n, m=m)
        line = integrate(grid.nodes, GaussianRadial(m))
        for n in dims:
            box = EuclideanBox(n, half_side)
            value = line ** n
            bound = math.exp(-n) * m ** (-n / 2.0)
            rows.append({"n": n, "m": m, "L": half_side,
                         "integral": value, "lower_bound": bound,
                         "volume_box": volume(box),
                         "passed": bool(value > bound)})
    return ScanReport("gaussian-lemma",
                      ["n", "m", "L", "integral", "lower_bound",
                       "volume_box", "passed"],
                      rows, {}, _metadata(t0=t0))


def exp_weyl_fit(domain, rho, alpha, k_max=30, grid_n=2048, j_max=None):
    """Least-squares fit of lambda_k against k^{2/n}.

    Diagnostic: reports slope, intercept and R^2 of the growth law.
    """
    t0 = time.perf_counter()
    if k_max < 20:
        raise ValueError("the fit needs k_max >= 20")
    n = domain.dim
    grid = RadialGrid.for_density(domain, grid_n, m=getattr(rho, "m", None))
    lams = full_spectrum(domain, rho, alpha, k_max, grid=grid, j_max=j_max).lambdas
    k = np.arange(1, k_max + 1)
    x = k ** (2.0 / n)
    y = lams[1:]
    a = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    fitted = a @ coef
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot
    rows = [{"k": int(kk), "lambda": float(lam), "k_pow": float(xx),
             "fitted": float(ff)}
            for kk, lam, xx, ff in zip(k, y, x, fitted)]
    return ScanReport("weyl-fit", ["k", "lambda", "k_pow", "fitted"], rows,
                      {"fit": {"slope": float(coef[0]), "intercept": float(coef[1]),
                               "r_squared": r2, "n": n}},
                      _metadata(t0=t0))


def exp_scaling_identity(domain, rho, alpha, c_values=(1e-3, 1.0, 1e3),
                         grid_n=1024, rtol=1e-12):
    """lambda_1(c rho, (c rho)^alpha) = c^(alpha-1) lambda_1(rho, rho^alpha).

    An exact discrete identity (the pencils scale entry-by-entry), so the
    tolerance is machine-level and independent of the grid.
    """
    t0 = time.perf_counter()
    grid = RadialGrid.uniform(domain, grid_n)
    base = full_spectrum(domain, rho, alpha, 1, grid=grid).lambdas[1]
    rows = []
    for c in sorted(c_values):
        lam = full_spectrum(domain, density_mod.scale(rho, c), alpha, 1,
                            grid=grid).lambdas[1]
        expected = c ** (float(alpha) - 1.0) * base
        err = abs(lam - expected) / abs(expected)
        rows.append({"c": c, "alpha": float(alpha), "lambda1": lam,
                     "expected": expected, "rel_err": err,
                     "passed": bool(err <= rtol)})
    return ScanReport("scaling-check",
                      ["c", "alpha", "lambda1", "expected", "rel_err", "passed"],
                      rows, {}, _metadata(t0=t0))


def exp_convergence(domain, rho, alpha, n_values=(512, 1024, 2048), j_max=None,
                    grading="auto"):
    """Richardson study of lambda_1 over nested grids.

    Ratios outside [3.5, 4.5] flag under-resolution (density too sharp
    for the grid).  ``grading`` overrides the automatic grid policy with
    "uniform" or "graded".
    """
    t0 = time.perf_counter()
    if len(n_values) < 3:
        raise ValueError("need at least 3 nested grids")
    n_values = sorted(n_values)
    for a, b in zip(n_values, n_values[1:]):
        if b != 2 * a:
            raise ValueError("grids must be nested by doubling")
    m = getattr(rho, "m", None)

    def grid_of(n_el):
        if grading == "uniform":
            return RadialGrid.uniform(domain, n_el)
        if grading == "graded":
            return RadialGrid.graded(domain, n_el)
        return _grid_for(domain, n_el, m=m)

    lams = [full_spectrum(domain, rho, alpha, 1, grid=grid_of(n_el),
                          j_max=j_max).lambdas[1]
            for n_el in n_values]
    rows = []
    for i in range(2, len(lams)):
        d1, d2 = lams[i - 2] - lams[i - 1], lams[i - 1] - lams[i]
        ratio = d1 / d2 if d2 != 0 else np.inf
        rows.append({
            "grid_n": n_values[i],
            "lambda1": lams[i],
            "lambda1_extrapolated": lams[i] + d2 / 3.0,
            "richardson_ratio": float(ratio),
            "richardson_error": abs(d2) / 3.0,
            "resolved": bool(RICHARDSON_WINDOW[0] <= ratio <= RICHARDSON_WINDOW[1]),
        })
    return ScanReport("converge",
                      ["grid_n", "lambda1", "lambda1_extrapolated",
                       "richardson_ratio", "richardson_error", "resolved"],
                      rows, {}, _metadata(t0=t0))
