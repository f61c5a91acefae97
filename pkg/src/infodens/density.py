"""Shell filling and unit-normalized position/momentum densities."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InputError, TransformAccuracyError
from .numerics import RadialFunction, RadialGrid, integrate_radial, sbt_many
from .spectrum import Orbital

PARSEVAL_TOL = 1e-3


@dataclass(frozen=True)
class OccupiedSet:
    """Orbitals with occupancies; ``g`` is the degeneracy per magnetic substate
    (2 for spin-1/2 fermions, 4 when protons and neutrons share a ladder)."""
    entries: tuple[tuple[Orbital, float], ...]
    N: float
    g: int = 2

    def capacity(self, orb: Orbital) -> int:
        return self.g * (2 * orb.l + 1)

    @property
    def grid(self) -> RadialGrid:
        grids = {orb.grid for orb, _ in self.entries}
        if len(grids) != 1:
            raise InputError("density.position_density", "orbitals live on different grids")
        return grids.pop()

    def occupancies(self) -> dict[str, float]:
        return {orb.label: occ for orb, occ in self.entries}


@dataclass(frozen=True)
class DensityPair:
    rho: RadialFunction
    nk: RadialFunction
    r2_moment: float
    k2_moment: float

    @classmethod
    def from_densities(cls, rho: RadialFunction, nk: RadialFunction) -> "DensityPair":
        return cls(rho, nk, second_moment(rho), second_moment(nk))

    def check(self) -> None:
        self.rho.check_density(1e-6)
        self.nk.check_density(1e-4)


def second_moment(rho: RadialFunction) -> float:
    """<r^2> = 4 pi int rho r^4 dr."""
    return 4 * np.pi * integrate_radial(RadialFunction(rho.grid, rho.values * rho.r**2), "r2")


def fill_shells(orbitals: list[Orbital], N: float, g: int = 2) -> OccupiedSet:
    """Fill levels in ascending energy, ``g(2l+1)`` particles each; the last
    level may be fractionally occupied."""
    if N <= 0:
        raise InputError("density.fill_shells", f"N must be positive, got {N}")
    ordered = sorted(orbitals, key=lambda o: (o.energy, o.l, o.n_r))
    total = sum(g * (2 * o.l + 1) for o in ordered)
    if total < N:
        raise CapacityError("density.fill_shells",
                            f"N={N:g} exceeds the capacity {total} of the available bound states")
    entries = []
    left = float(N)
    for orb in ordered:
        if left <= 0:
            break
        occ = min(float(g * (2 * orb.l + 1)), left)
        entries.append((orb, occ))
        left -= occ
    return OccupiedSet(tuple(entries), float(N), g)


def position_density(occ: OccupiedSet) -> RadialFunction:
    """rho(r) = sum_i occ_i u_i(r)^2 / (4 pi N r^2)."""
    grid = occ.grid
    total = sum(o for _, o in occ.entries)
    acc = np.zeros(grid.n_points)
    for orb, o in occ.entries:
        acc += o * orb.u.values**2
    return RadialFunction(grid, acc / (4 * np.pi * total * grid.nodes**2), "density")


def momentum_density(occ: OccupiedSet, k_grid: RadialGrid) -> RadialFunction:
    """n(k) from the order-l Bessel transforms of the occupied orbitals.

    Each transformed orbital must keep its norm to ``PARSEVAL_TOL``; the sum
    is then renormalized to unity.
    """
    occ.grid  # grid consistency check
    by_l: dict[int, list[tuple[Orbital, float]]] = defaultdict(list)
    for orb, o in occ.entries:
        by_l[orb.l].append((orb, o))
    total = sum(o for _, o in occ.entries)
    acc = np.zeros(k_grid.n_points)
    for l in sorted(by_l):
        group = by_l[l]
        transformed = sbt_many(l, [orb.radial_R() for orb, _ in group], k_grid)
        for (orb, o), Rk in zip(group, transformed):
            norm = integrate_radial(RadialFunction(k_grid, Rk.values**2), "r2")
            if abs(norm - 1) > PARSEVAL_TOL:
                raise TransformAccuracyError(
                    "density.momentum_density",
                    f"{orb.label}: transformed norm {norm:.6g} (k_max={k_grid.r_max:g} too small?)")
            acc += o * Rk.values**2
    acc /= 4 * np.pi * total
    acc /= 4 * np.pi * integrate_radial(RadialFunction(k_grid, acc), "r2")
    return RadialFunction(k_grid, acc, "density")


def density_pair(occ: OccupiedSet, k_grid: RadialGrid) -> DensityPair:
    return DensityPair.from_densities(position_density(occ), momentum_density(occ, k_grid))


def rescale_occupied(occ: OccupiedSet, lam: float) -> OccupiedSet:
    """Stretch every orbital r -> lam*r keeping its norm (energies untouched)."""
    entries = []
    for orb, o in occ.entries:
        grid = orb.grid.scaled(lam)
        u = RadialFunction(grid, orb.u.values / np.sqrt(lam))
        entries.append((Orbital(orb.n_r, orb.l, orb.energy, u), o))
    return OccupiedSet(tuple(entries), occ.N, occ.g)
