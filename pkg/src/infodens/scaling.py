"""N-scans of the information measures and the scaling-law fits.

A scan runs the full pipeline (mean field -> spectrum -> filling ->
densities -> measures) for each particle number; the fits cover the three
forms compared across systems: ``y = c N``, ``y = a N^b`` and
``y = a + b ln N``.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bosons import TrapSpec, boson_ground_state
from .config import RunConfig
from .density import DensityPair, density_pair, fill_shells
from .errors import CapacityError, FitError, InputError, TruncationError
from .mean_field import (PotentialSpec, cluster_defaults, harmonic_defaults,
                         nucleus_defaults)
from .measures import MeasureSet, measure_set
from .numerics import RadialGrid
from .spectrum import find_spectrum

log = logging.getLogger(__name__)

DEFAULT_N = {
    "cluster": (2, 8, 18, 20, 34, 40, 58, 92, 138, 198),
    "nucleus": (2, 8, 16, 20, 28, 40, 50, 82, 126),
    "bosons": (10, 50, 100, 500, 1000, 5000, 10000),
    "harmonic": (2, 8, 20, 40),
}

# Values quoted for comparison only; never used as fit targets.
REFERENCE_SLOPES = {"cluster": 143.420, "nucleus": 73.883}
REFERENCE_POWER = {"cluster": (431.576, 1.719), "nucleus": (260.275, 1.554)}

CONVENTIONS = (
    "densities normalized to unity",
    "nuclear field: static Woods-Saxon stand-in (no Coulomb, no spin-orbit), "
    "matter density, protons and neutrons share one ladder",
    "bosons: mean-field condensate stand-in for the correlated many-body state",
)

MAX_GRID_EXTENSIONS = 8


@dataclass(frozen=True)
class SystemSetup:
    """Resolved physical parameters and grids for one system."""
    system: str
    spec: PotentialSpec | None
    r_max: float
    n_points: int
    k_max: float
    k_points: int
    g: int = 2
    l_max: int = 12
    max_states_per_l: int = 8
    a_s_over_b: float = 0.0043
    omega: float = 1.0
    auto_extend: bool = True

    @property
    def h(self) -> float:
        return self.r_max / self.n_points

    def k_grid(self) -> RadialGrid:
        return RadialGrid(self.k_max, self.k_points)

    def trap(self, N: float) -> TrapSpec:
        b = self.omega ** -0.5
        return TrapSpec(self.omega, self.a_s_over_b * b, N)


def setup_from_config(cfg: RunConfig) -> SystemSetup:
    system = cfg.system
    if system == "bosons":
        b = cfg.omega ** -0.5
        return SystemSetup("bosons", None, cfg.r_max or 12 * b, cfg.n_points or 2000,
                           cfg.k_max or 10 / b, cfg.k_points or 2000, g=1,
                           a_s_over_b=cfg.a_s_over_b, omega=cfg.omega)
    base = {"cluster": cluster_defaults, "nucleus": nucleus_defaults,
            "harmonic": harmonic_defaults}[system]()
    overrides = {k: getattr(cfg, k) for k in ("V0", "r0", "a", "hbar2_over_2m", "hbar_omega")
                 if getattr(cfg, k) is not None}
    spec = base.with_overrides(**overrides)
    if system == "harmonic":
        b = spec.oscillator_length()
        r_max, k_max = 12 * b, 10 / b
    else:
        r_max = 40.0 if system == "cluster" else 20.0
        k_max = 10 / spec.r0
    return SystemSetup(system, spec, cfg.r_max or r_max, cfg.n_points or 2000,
                       cfg.k_max or k_max, cfg.k_points or 2000,
                       g=4 if system == "nucleus" else 2,
                       l_max=cfg.l_max, max_states_per_l=cfg.max_states_per_l,
                       auto_extend=cfg.auto_extend)


def default_setup(system: str) -> SystemSetup:
    return setup_from_config(RunConfig(system=system))


def system_density(setup: SystemSetup, N: float) -> tuple[DensityPair, dict]:
    """Density pair for ``N`` particles plus run information.

    Fermion boxes are extended (step size kept) until every occupied orbital
    has decayed at ``r_max`` and no cut-off level sits below the Fermi level.
    """
    k_grid = setup.k_grid()
    if setup.system == "bosons":
        trap = setup.trap(N)
        grid = RadialGrid(setup.r_max, setup.n_points)
        res = boson_ground_state(trap, grid, k_grid)
        return res.pair, {"r_max": grid.r_max, "mu": res.mu, "iterations": res.iterations}

    r_max = setup.r_max
    for _ in range(MAX_GRID_EXTENSIONS):
        n_points = int(round(r_max / setup.h))
        grid = RadialGrid(n_points * setup.h, n_points)
        spec_result = find_spectrum(setup.spec, N, grid, setup.l_max, setup.max_states_per_l)
        orbitals = spec_result.orbitals
        capacity = sum(setup.g * (2 * o.l + 1) for o in orbitals)
        capacity += sum(setup.g * (2 * l + 1) for l, _, _ in spec_result.unresolved)
        if capacity < N:
            raise CapacityError("scaling.scan",
                                f"N={N:g} exceeds the bound-state capacity {capacity} of the "
                                f"{setup.system} well")
        try:
            occ = fill_shells(orbitals, N, setup.g)
            e_top = occ.entries[-1][0].energy
            if any(E <= e_top for _, _, E in spec_result.unresolved):
                raise TruncationError("scaling.scan", "a level below the Fermi level is cut off")
            pair = density_pair(occ, k_grid)
        except (TruncationError, CapacityError):
            if not setup.auto_extend:
                raise
            r_max *= 1.25
            continue
        info = {"r_max": grid.r_max, "fermi_energy": e_top,
                "occupancies": {o.label: x for o, x in occ.entries}}
        return pair, info
    raise TruncationError("scaling.scan", f"N={N:g}: box still too small at r_max={r_max:g}")


@dataclass
class ScanResult:
    system: str
    rows: list[tuple[float, MeasureSet]]
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> tuple[np.ndarray, np.ndarray]:
        N = np.array([n for n, _ in self.rows], dtype=float)
        y = np.array([getattr(m, name) for _, m in self.rows])
        return N, y


def _scan_row(args):
    setup, N = args
    pair, _ = system_density(setup, N)
    return N, measure_set(pair)


def scan(setup: SystemSetup, n_values, jobs: int = 1) -> ScanResult:
    """One MeasureSet per N, rows sorted by N.  ``jobs > 1`` computes rows in
    worker processes; results do not depend on the schedule."""
    n_values = list(n_values)
    if not n_values:
        raise InputError("scaling.scan", "empty N list")
    if len(set(n_values)) != len(n_values):
        raise InputError("scaling.scan", f"duplicate N values in {n_values}")
    if any(n < 1 for n in n_values):
        raise InputError("scaling.scan", "N values must be >= 1")
    ordered = sorted(n_values)
    tasks = [(setup, N) for N in ordered]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_row, tasks))
    else:
        rows = [_scan_row(t) for t in tasks]
    return ScanResult(setup.system, rows, scan_metadata(setup))


def scan_metadata(setup: SystemSetup) -> dict:
    meta = {"version": __version__, "system": setup.system,
            "r_max": setup.r_max, "n_points": setup.n_points,
            "k_max": setup.k_max, "k_points": setup.k_points,
            "degeneracy_per_m": setup.g, "conventions": list(CONVENTIONS)}
    if setup.spec is not None:
        meta["potential"] = setup.spec.to_dict()
    else:
        meta["a_s_over_b"] = setup.a_s_over_b
        meta["omega"] = setup.omega
    return meta


# --- fitting ---------------------------------------------------------------

MODELS = ("linear", "power", "log")


@dataclass(frozen=True)
class FitResult:
    model: str
    coefficients: dict
    r_squared: float
    residuals: tuple[float, ...]

    def predict(self, N):
        N = np.asarray(N, dtype=float)
        c = self.coefficients
        if self.model == "linear":
            return c["c"] * N
        if self.model == "power":
            return c["a"] * N ** c["b"]
        return c["a"] + c["b"] * np.log(N)


def _r_squared(y, resid) -> float:
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return min(1.0, max(0.0, 1.0 - ss_res / ss_tot))


def fit(model: str, points) -> FitResult:
    """Least-squares fit in the model's natural space.

    ``linear``: y = c N through the origin.  ``power``: ordinary least
    squares of ln y on ln N.  ``log``: y = a + b ln N.  r^2 is measured in
    the same space the fit minimizes (log-log for ``power``) and clipped to
    [0, 1], since the through-origin fit can do worse than the mean.
    """
    if model not in MODELS:
        raise FitError("scaling.fit", f"unknown model {model!r}")
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise FitError("scaling.fit", "need at least 3 (N, y) points")
    N, y = pts[:, 0], pts[:, 1]
    if np.any(N <= 0):
        raise FitError("scaling.fit", "N must be positive")
    if np.ptp(N) == 0:
        raise FitError("scaling.fit", "degenerate design: all N equal")
    if model in ("power", "log") and np.any(y <= 0):
        raise FitError("scaling.fit", f"{model} model needs y > 0")

    if model == "linear":
        c = float(N @ y / (N @ N))
        resid = y - c * N
        return FitResult(model, {"c": c}, _r_squared(y, resid), tuple(resid.tolist()))
    x = np.log(N)
    yy = np.log(y) if model == "power" else y
    A = np.column_stack([np.ones_like(x), x])
    (a0, b), *_ = np.linalg.lstsq(A, yy, rcond=None)
    resid = yy - (a0 + b * x)
    a = math.exp(a0) if model == "power" else float(a0)
    return FitResult(model, {"a": a, "b": float(b)}, _r_squared(yy, resid), tuple(resid.tolist()))


def fit_column(result: ScanResult, column: str, model: str) -> FitResult:
    N, y = result.column(column)
    return fit(model, zip(N, y))


def boson_discrimination(boson: ScanResult, fermion: ScanResult,
                         r2_gap: float = 0.05) -> dict:
    """Does S_E(N) of the boson scan break the fermionic linear law?

    True when the boson linear-fit r^2 is lower by at least ``r2_gap``, or
    its power-law exponent is further from 1 than twice the fermion one.
    """
    lin_b, lin_f = fit_column(boson, "S_E", "linear"), fit_column(fermion, "S_E", "linear")
    pow_b, pow_f = fit_column(boson, "S_E", "power"), fit_column(fermion, "S_E", "power")
    dev_b = abs(pow_b.coefficients["b"] - 1)
    dev_f = abs(pow_f.coefficients["b"] - 1)
    return {
        "boson_linear_r2": lin_b.r_squared, "fermion_linear_r2": lin_f.r_squared,
        "boson_exponent": pow_b.coefficients["b"], "fermion_exponent": pow_f.coefficients["b"],
        "r2_gap_ok": lin_f.r_squared - lin_b.r_squared >= r2_gap,
        "exponent_ok": dev_b > 2 * dev_f,
        "distinct": (lin_f.r_squared - lin_b.r_squared >= r2_gap) or dev_b > 2 * dev_f,
    }


def figure_series(result: ScanResult) -> dict[str, list[tuple[float, float]]]:
    """Two-column (N, value) series; fermion scans feed fig1/fig2, bosons fig3/fig4."""
    first, second = ("fig3", "fig4") if result.system == "bosons" else ("fig1", "fig2")
    return {first: [(N, m.S_E) for N, m in result.rows],
            second: [(N, m.S_I) for N, m in result.rows]}
