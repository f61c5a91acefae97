"""Uniform radial grids, Simpson quadrature and the spherical Bessel transform.

Grids exclude the origin: node ``i`` sits at ``r_i = i*h`` for ``i = 1..n``.
Integrals over ``[0, r_max]`` add the origin back through an extrapolated
sample, so every quadrature works on ``n + 1`` equally spaced points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numba
import numpy as np

from .errors import InputError, TruncationError

MIN_PRODUCTION_POINTS = 200
SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    n_points: int

    def __post_init__(self):
        if not self.r_max > 0 or not np.isfinite(self.r_max):
            raise InputError("numerics.RadialGrid", f"r_max must be positive, got {self.r_max}")
        if self.n_points < 3:
            raise InputError("numerics.RadialGrid", f"need at least 3 points, got {self.n_points}")

    @property
    def h(self) -> float:
        return self.r_max / self.n_points

    @cached_property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.n_points + 1, dtype=float)

    def scaled(self, lam: float) -> "RadialGrid":
        return RadialGrid(self.r_max * lam, self.n_points)

    def check_production(self, floor: int = MIN_PRODUCTION_POINTS) -> None:
        if self.n_points < floor:
            raise InputError("numerics.RadialGrid",
                             f"{self.n_points} points is below the production floor {floor}")


@dataclass(frozen=True)
class RadialFunction:
    grid: RadialGrid
    values: np.ndarray = field(repr=False)
    kind: str | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise InputError("numerics.RadialFunction",
                             f"expected {self.grid.n_points} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InputError("numerics.RadialFunction", "non-finite sample")
        object.__setattr__(self, "values", values)

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    def check_density(self, tol: float = 1e-6) -> None:
        if np.any(self.values < 0):
            raise InputError("numerics.RadialFunction", "density has negative samples")
        norm = 4 * np.pi * integrate_radial(self, "r2")
        if abs(norm - 1) > tol:
            raise InputError("numerics.RadialFunction", f"density norm {norm:.12g} differs from 1")


def simpson_weights(n_intervals: int, h: float) -> np.ndarray:
    """Composite Simpson weights on ``n_intervals + 1`` equispaced points.

    An odd interval count is closed with the 3/8 rule on the last three
    intervals, which keeps exactness for cubics.
    """
    if n_intervals < 2:
        raise InputError("numerics.simpson_weights", "need at least 2 intervals")
    w = np.zeros(n_intervals + 1)
    m = n_intervals if n_intervals % 2 == 0 else n_intervals - 3
    if m > 0:
        w[0:m + 1:2] += 2.0
        w[1:m:2] += 4.0
        w[0] -= 1.0
        w[m] -= 1.0
        w[:m + 1] *= h / 3.0
    if m != n_intervals:
        w[m:m + 4] += 3.0 * h / 8.0 * np.array([1.0, 3.0, 3.0, 1.0])
    return w


def _origin_stencil(n_nodes: int) -> np.ndarray:
    # polynomial extrapolation to r = 0 from the first nodes (cubic when possible)
    if n_nodes >= 4:
        return np.array([4.0, -6.0, 4.0, -1.0])
    return np.array([3.0, -3.0, 1.0])


def radial_weights(grid: RadialGrid, weight: str = "r2") -> np.ndarray:
    """Quadrature weights ``w_i`` such that ``sum(w_i f(r_i))`` approximates
    the integral of ``f(r) * weight(r)`` over ``[0, r_max]``."""
    if weight not in ("r2", "1"):
        raise InputError("numerics.integrate_radial", f"unknown weight {weight!r}")
    w = simpson_weights(grid.n_points, grid.h)
    w0, w = w[0], w[1:].copy()
    if weight == "r2":
        return w * grid.nodes**2
    stencil = _origin_stencil(grid.n_points)
    w[:len(stencil)] += w0 * stencil
    return w


def integrate_radial(f: RadialFunction, weight: str = "r2") -> float:
    """Integral of ``f(r) * w(r)`` over ``[0, r_max]`` with ``w`` in ``{r2, 1}``."""
    return float(radial_weights(f.grid, weight) @ f.values)


def integrate_uniform(values: np.ndarray, dx: float) -> float:
    """Simpson integral of samples on a closed uniform 1-D grid."""
    values = np.asarray(values, dtype=float)
    return float(simpson_weights(len(values) - 1, dx) @ values)


# --- spherical Bessel functions --------------------------------------------

@numba.njit(cache=True)
def _sph_jn_scalar(l, x):
    if x == 0.0:
        return 1.0 if l == 0 else 0.0
    if x < 1e-3 * (l + 1):
        # leading two series terms; relative error below 1e-12 here
        term = 1.0
        for j in range(1, l + 1):
            term *= x / (2 * j + 1)
        return term * (1.0 - x * x / (2.0 * (2 * l + 3)))
    j0 = np.sin(x) / x
    if l == 0:
        return j0
    j1 = np.sin(x) / (x * x) - np.cos(x) / x
    if l == 1:
        return j1
    if x > l:
        a, b = j0, j1
        for n in range(1, l):
            a, b = b, (2 * n + 1) / x * b - a
        return b
    # Miller: downward from well above max(l, x), normalized against j0 or j1
    start = l + 30 + int(np.sqrt(40.0 * (l + 1)))
    above = 0.0
    cur = 1e-200
    want = 0.0
    for n in range(start, 0, -1):
        prev = (2 * n + 1) / x * cur - above
        above, cur = cur, prev
        if n - 1 == l:
            want = cur
        if abs(cur) > 1e200:
            cur *= 1e-200
            above *= 1e-200
            want *= 1e-200
    # now cur ~ j0, above ~ j1 (unnormalized)
    if abs(j0) >= abs(j1):
        return want * (j0 / cur)
    return want * (j1 / above)


@numba.njit(cache=True)
def _sph_jn_matrix(l, k, r):
    out = np.empty((k.shape[0], r.shape[0]))
    for a in range(k.shape[0]):
        for b in range(r.shape[0]):
            out[a, b] = _sph_jn_scalar(l, k[a] * r[b])
    return out


def spherical_jn(l: int, x) -> np.ndarray:
    """Spherical Bessel function ``j_l`` on an array of non-negative arguments."""
    if l < 0:
        raise InputError("numerics.spherical_jn", f"order must be >= 0, got {l}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise InputError("numerics.spherical_jn", "negative argument")
    return _sph_jn_matrix(int(l), x, np.ones(1))[:, 0]


def bessel_matrix(l: int, k_grid: RadialGrid, grid: RadialGrid) -> np.ndarray:
    """``sqrt(2/pi) * j_l(k_j r_i) * w_i`` with ``w_i`` the r^2 Simpson weights."""
    J = _sph_jn_matrix(int(l), k_grid.nodes, grid.nodes)
    return SQRT_2_OVER_PI * J * radial_weights(grid, "r2")[None, :]


def tail_amplitude(f: RadialFunction, fraction: float = 0.02) -> float:
    """Largest |f| over the outermost ``fraction`` of the grid."""
    m = max(3, int(np.ceil(fraction * f.grid.n_points)))
    return float(np.max(np.abs(f.values[-m:])))


def sbt_many(l: int, Rs: list[RadialFunction], k_grid: RadialGrid,
             tail_tol: float = 1e-8) -> list[RadialFunction]:
    """:func:`sbt` for several functions of the same order on one grid."""
    if not Rs:
        return []
    grid = Rs[0].grid
    if any(R.grid != grid for R in Rs):
        raise InputError("numerics.sbt", "functions live on different grids")
    for R in Rs:
        tail = tail_amplitude(R) / max(float(np.max(np.abs(R.values))), 1e-300)
        if tail > tail_tol:
            raise TruncationError("numerics.sbt",
                                  f"function not decayed at r_max={grid.r_max:g} (tail {tail:.2e})")
    M = bessel_matrix(l, k_grid, grid)
    out = M @ np.column_stack([R.values for R in Rs])
    return [RadialFunction(k_grid, out[:, j]) for j in range(len(Rs))]


def sbt(l: int, R: RadialFunction, k_grid: RadialGrid,
        tail_tol: float = 1e-8) -> RadialFunction:
    """Order-``l`` spherical Bessel transform
    ``sqrt(2/pi) * int j_l(k r) R(r) r^2 dr`` sampled on ``k_grid``.

    The transform is its own inverse with r and k exchanged.  Raises
    TruncationError when ``|R|`` near ``r_max`` exceeds ``tail_tol`` times
    its maximum.
    """
    return sbt_many(l, [R], k_grid, tail_tol)[0]
