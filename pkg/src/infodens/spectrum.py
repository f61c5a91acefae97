"""Bound states of the radial Schroedinger equation by Numerov shooting.

The radial equation ``u'' = F(r) u`` with
``F = l(l+1)/r^2 + (V(r) - E) / (hbar^2/2m)`` is discretized on the uniform
grid with ``u(0) = u(r_max) = 0``.  The number of sign changes of the
outward solution equals the number of discrete eigenvalues below ``E``
(Sturm sequence), so each level is first bracketed by bisection on that
count and then polished by Brent's method on the Numerov Casoratian of the
outward and inward solutions at the outer turning point.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.optimize import brentq

from .errors import SolverError
from .mean_field import PotentialSpec, potential_at
from .numerics import RadialFunction, RadialGrid, integrate_radial, tail_amplitude

log = logging.getLogger(__name__)

L_LETTERS = "spdfghiklmnoqrtuv"
MAX_BISECTIONS = 200
TAIL_TOL = 1e-6


@dataclass(frozen=True)
class Orbital:
    n_r: int
    l: int
    energy: float
    u: RadialFunction

    @property
    def degeneracy(self) -> int:
        return 2 * (2 * self.l + 1)

    @property
    def label(self) -> str:
        return f"{self.n_r + 1}{L_LETTERS[self.l]}"

    @property
    def grid(self) -> RadialGrid:
        return self.u.grid

    def radial_R(self) -> RadialFunction:
        """R(r) = u(r)/r."""
        return RadialFunction(self.grid, self.u.values / self.grid.nodes)


def count_sign_changes(values: np.ndarray, floor: float = 0.0) -> int:
    v = values[np.abs(values) > floor]
    return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))


def _start_index(l: int) -> int:
    # keep h^2 * l(l+1)/r^2 / 12 small where the recurrence starts
    return max(1, int(np.ceil(np.sqrt(l * (l + 1) / 0.6))))


@numba.njit(cache=True)
def _outward(F, h, l, s, alpha):
    """Outward Numerov sweep; returns (u, number of sign changes)."""
    n = F.shape[0]
    u = np.empty(n)
    h12 = h * h / 12.0
    for i in range(s + 2):
        r = (i + 1) * h
        u[i] = r ** (l + 1) * (1.0 + alpha * r * r)
    nodes = 0
    for i in range(s + 1, n - 1):
        t_prev = 1.0 - h12 * F[i - 1]
        t_cur = 1.0 - h12 * F[i]
        t_next = 1.0 - h12 * F[i + 1]
        u[i + 1] = ((12.0 - 10.0 * t_cur) * u[i] - t_prev * u[i - 1]) / t_next
        if abs(u[i + 1]) > 1e150:
            for j in range(i + 2):
                u[j] *= 1e-150
    last = 0.0
    for i in range(n):
        if u[i] != 0.0:
            if last != 0.0 and (u[i] > 0.0) != (last > 0.0):
                nodes += 1
            last = u[i]
    return u, nodes


@numba.njit(cache=True)
def _inward(F, h, m):
    n = F.shape[0]
    u = np.zeros(n)
    h12 = h * h / 12.0
    u[n - 1] = 0.0
    u[n - 2] = 1e-20
    for i in range(n - 2, m, -1):
        t_prev = 1.0 - h12 * F[i - 1]
        t_cur = 1.0 - h12 * F[i]
        t_next = 1.0 - h12 * F[i + 1]
        u[i - 1] = ((12.0 - 10.0 * t_cur) * u[i] - t_next * u[i + 1]) / t_prev
        if abs(u[i - 1]) > 1e150:
            for j in range(i - 1, n):
                u[j] *= 1e-150
    return u


class _Channel:
    """Numerov problem for one (potential, N, l) on one grid."""

    def __init__(self, spec: PotentialSpec, N: float, l: int, grid: RadialGrid):
        self.spec, self.l, self.grid = spec, l, grid
        r = grid.nodes
        self.V = potential_at(spec, N, r)
        self.V0 = float(potential_at(spec, N, 0.0))
        self.c = spec.hbar2_over_2m
        self.centrifugal = l * (l + 1) / r**2
        self.s = _start_index(l)
        self.evaluations: list[tuple[float, int]] = []

    def F(self, E: float) -> np.ndarray:
        return self.centrifugal + (self.V - E) / self.c

    def outward(self, E: float):
        alpha = (self.V0 - E) / (self.c * (4 * self.l + 6))
        return _outward(self.F(E), self.grid.h, self.l, self.s, alpha)

    def count(self, E: float) -> int:
        nodes = self.outward(E)[1]
        self.evaluations.append((E, nodes))
        return nodes

    def matching_index(self, E: float) -> int:
        allowed = np.nonzero(self.F(E) < 0)[0]
        n = self.grid.n_points
        m = int(allowed[-1]) if allowed.size else n // 2
        return min(max(m, self.s + 2), n - 4)

    def casoratian(self, E: float) -> float:
        F = self.F(E)
        m = self.matching_index(E)
        uo = self.outward(E)[0]
        ui = _inward(F, self.grid.h, m)
        t = 1.0 - self.grid.h**2 * F[m:m + 2] / 12.0
        yo, yi = t * uo[m:m + 2], t * ui[m:m + 2]
        w = yo[0] * yi[1] - yo[1] * yi[0]
        return w / (np.hypot(*yo) * np.hypot(*yi))

    def wavefunction(self, E: float) -> np.ndarray:
        F = self.F(E)
        m = self.matching_index(E)
        uo = self.outward(E)[0]
        ui = _inward(F, self.grid.h, m)
        sl = slice(m, m + 2)
        scale = (uo[sl] @ ui[sl]) / (ui[sl] @ ui[sl])
        u = np.concatenate([uo[:m + 1], scale * ui[m + 1:]])
        u /= np.sqrt(integrate_radial(RadialFunction(self.grid, u * u), "1"))
        if u[0] < 0:
            u = -u
        return u


def _bracket(ch: _Channel, n_r: int, lo: float, hi: float) -> tuple[float, float]:
    # tightest bracket from earlier evaluations, then bisect on the node count
    for E, c in ch.evaluations:
        if c <= n_r and E > lo:
            lo = E
        if c >= n_r + 1 and E < hi:
            hi = E
    c_lo = ch.count(lo)
    c_hi = ch.count(hi)
    for _ in range(MAX_BISECTIONS):
        if c_lo == n_r and c_hi == n_r + 1:
            return lo, hi
        mid = 0.5 * (lo + hi)
        c = ch.count(mid)
        if c <= n_r:
            lo, c_lo = mid, c
        else:
            hi, c_hi = mid, c
    raise SolverError("spectrum.solve_bound_states",
                      f"no convergence for l={ch.l}, node target {n_r} after {MAX_BISECTIONS} bisections")


def _energy_window(ch: _Channel) -> tuple[float, float]:
    spec = ch.spec
    veff = ch.V + ch.c * ch.centrifugal
    lo = float(np.min(veff)) - 1e-3 * spec.energy_scale
    if spec.is_woods_saxon:
        hi = 0.0
    else:
        hi = float(ch.V[-1])
    return lo, hi


@dataclass
class Spectrum:
    """Resolved orbitals plus levels whose tails the box cuts off."""
    orbitals: list[Orbital]
    unresolved: list[tuple[int, int, float]] = field(default_factory=list)


def find_spectrum(spec: PotentialSpec, N: float, grid: RadialGrid,
                  l_max: int = 12, max_states_per_l: int = 8) -> Spectrum:
    tol = 1e-10 * spec.energy_scale
    found: list[Orbital] = []
    unresolved = []
    for l in range(l_max + 1):
        ch = _Channel(spec, N, l, grid)
        lo, hi = _energy_window(ch)
        if ch.count(lo) != 0:
            raise SolverError("spectrum.solve_bound_states", f"lower energy bound not below spectrum for l={l}")
        n_bound = min(ch.count(hi), max_states_per_l)
        for n_r in range(n_bound):
            a, b = _bracket(ch, n_r, lo, hi)
            try:
                E = float(brentq(ch.casoratian, a, b, xtol=tol, rtol=1e-15, maxiter=MAX_BISECTIONS))
            except RuntimeError:
                raise SolverError("spectrum.solve_bound_states",
                                  f"root refinement failed for l={l}, node target {n_r}") from None
            u = RadialFunction(grid, ch.wavefunction(E))
            nodes = count_sign_changes(u.values[:-1], floor=1e-12)
            if nodes != n_r:
                raise SolverError("spectrum.solve_bound_states",
                                  f"wavefunction for l={l}, node target {n_r} has {nodes} nodes")
            if tail_amplitude(u) > TAIL_TOL:
                unresolved.append((l, n_r, E))
                continue
            found.append(Orbital(n_r, l, E, u))
    found.sort(key=lambda o: (o.energy, o.l, o.n_r))
    unresolved.sort(key=lambda t: (t[2], t[0], t[1]))
    return Spectrum(found, unresolved)


def solve_bound_states(spec: PotentialSpec, N: float, grid: RadialGrid,
                       l_max: int = 12, max_states_per_l: int = 8) -> list[Orbital]:
    """All bound states with ``l <= l_max`` (at most ``max_states_per_l`` per l),
    sorted by energy, ties broken by ``(l, n_r)``.

    Levels whose tail has not decayed below ``1e-6`` at ``r_max`` are left out
    (with a warning); use :func:`find_spectrum` to see them.
    """
    result = find_spectrum(spec, N, grid, l_max, max_states_per_l)
    for l, n_r, E in result.unresolved:
        log.warning("dropping l=%d n_r=%d (E=%.6g): tail not decayed at r_max=%g",
                    l, n_r, E, grid.r_max)
    return result.orbitals


def level_table(orbitals: list[Orbital]) -> list[tuple[int, int, float, int]]:
    """(l, n_r, energy, degeneracy) rows in energy order."""
    return [(o.l, o.n_r, o.energy, o.degeneracy) for o in orbitals]
