"""Mean-field ground state of N bosons in an isotropic harmonic trap.

Units: hbar = m = 1, so the oscillator length is ``b = omega**-0.5``.  The
condensate orbital is carried as ``u(r) = sqrt(4 pi) r phi(r)`` with
``int u^2 dr = 1`` and obeys

    -u''/2 + (omega^2 r^2 / 2 + g u^2 / (4 pi r^2)) u = mu u,   g = 4 pi N a_s.

The ground state is reached by backward-Euler imaginary-time steps with a
fourth-order (five-point) Laplacian, renormalizing after every step.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solveh_banded

from .density import DensityPair, OccupiedSet, density_pair
from .errors import InputError, SolverError
from .numerics import RadialFunction, RadialGrid, integrate_radial
from .spectrum import Orbital

log = logging.getLogger(__name__)

DEFAULT_A_S_OVER_B = 0.0043


@dataclass(frozen=True)
class TrapSpec:
    omega: float = 1.0
    scattering_length: float = DEFAULT_A_S_OVER_B
    N: float = 1.0

    def __post_init__(self):
        if not self.omega > 0:
            raise InputError("bosons.TrapSpec", "omega must be positive")
        if self.scattering_length < 0:
            raise InputError("bosons.TrapSpec", "scattering length must be >= 0")
        if self.N < 1:
            raise InputError("bosons.TrapSpec", "N must be >= 1")

    @property
    def b(self) -> float:
        return self.omega ** -0.5

    @property
    def coupling(self) -> float:
        return 4 * np.pi * self.N * self.scattering_length

    def thomas_fermi_mu(self) -> float:
        """Chemical potential of the Thomas-Fermi limit, 0.5 hw (15 N a/b)^(2/5)."""
        return 0.5 * self.omega * (15 * self.N * self.scattering_length / self.b) ** 0.4


@dataclass
class BosonResult:
    pair: DensityPair
    orbital: Orbital
    mu: float
    energy: float
    iterations: int
    residual: float
    energy_history: list[float] = field(default_factory=list, repr=False)


class _Hamiltonian:
    """Banded pieces of the discretized radial operator on nodes 1..n-1."""

    def __init__(self, trap: TrapSpec, grid: RadialGrid):
        self.h = grid.h
        self.r = grid.nodes[:-1]  # u(r_max) = 0
        self.V = 0.5 * trap.omega**2 * self.r**2
        self.g = trap.coupling
        m = self.r.size
        c = 1.0 / (24.0 * self.h**2)  # -1/2 * five-point stencil / (12 h^2)
        self.k_diag = np.full(m, 30.0 * c)
        self.k_diag[0] = 29.0 * c  # odd reflection u(-h) = -u(h)
        self.k_off1 = np.full(m - 1, -16.0 * c)
        self.k_off2 = np.full(m - 2, 1.0 * c)

    def kinetic(self, u):
        t = self.k_diag * u
        t[:-1] += self.k_off1 * u[1:]
        t[1:] += self.k_off1 * u[:-1]
        t[:-2] += self.k_off2 * u[2:]
        t[2:] += self.k_off2 * u[:-2]
        return t

    def nonlinear(self, u):
        return self.g * u * u / (4 * np.pi * self.r**2)

    def norm2(self, u) -> float:
        return self.h * float(u @ u)

    def energy(self, u) -> float:
        """Mean-field energy per particle."""
        return self.h * float(u @ self.kinetic(u) + self.V @ (u * u)
                              + 0.5 * self.nonlinear(u) @ (u * u))

    def apply(self, u):
        return self.kinetic(u) + (self.V + self.nonlinear(u)) * u

    def step(self, u, dtau: float):
        """Solve (1 + dtau H[u]) v = u for v (upper banded storage)."""
        m = u.size
        ab = np.zeros((3, m))
        ab[2] = 1.0 + dtau * (self.k_diag + self.V + self.nonlinear(u))
        ab[1, 1:] = dtau * self.k_off1
        ab[0, 2:] = dtau * self.k_off2
        return solveh_banded(ab, u, check_finite=False)


def default_grid(trap: TrapSpec, n_points: int = 2000, lengths: float = 12.0) -> RadialGrid:
    return RadialGrid(lengths * trap.b, n_points)


def default_k_grid(trap: TrapSpec, n_points: int = 2000) -> RadialGrid:
    return RadialGrid(10.0 / trap.b, n_points)


def boson_ground_state(trap: TrapSpec, grid: RadialGrid | None = None,
                       k_grid: RadialGrid | None = None, dtau: float | None = None,
                       tol: float = 1e-12, max_iter: int = 200_000,
                       keep_history: bool = False) -> BosonResult:
    """Unit-normalized condensate density pair by imaginary-time relaxation.

    The step defaults to ``1e-3 / omega``; iteration stops once the energy
    per particle changes by less than ``tol`` (in units of hbar*omega).
    """
    grid = grid or default_grid(trap)
    k_grid = k_grid or default_k_grid(trap)
    if grid.r_max < 12 * trap.b * (1 - 1e-12):
        raise InputError("bosons.boson_ground_state",
                         f"grid spans {grid.r_max / trap.b:.3g} oscillator lengths, need >= 12")
    dtau = 1e-3 / trap.omega if dtau is None else dtau
    H = _Hamiltonian(trap, grid)

    # Gaussian start with roughly the Thomas-Fermi size when that is larger
    width = trap.b * max(1.0, 0.5 * (15 * trap.N * trap.scattering_length / trap.b) ** 0.2)
    u = H.r * np.exp(-0.5 * (H.r / width) ** 2)
    u /= np.sqrt(H.norm2(u))
    E = H.energy(u)
    history = [E] if keep_history else []
    for it in range(1, max_iter + 1):
        u = H.step(u, dtau)
        u /= np.sqrt(H.norm2(u))
        E_new = H.energy(u)
        if keep_history:
            history.append(E_new)
        converged = abs(E_new - E) < tol * trap.omega
        E = E_new
        if converged:
            break
    else:
        Hu = H.apply(u)
        residual = float(np.sqrt(H.norm2(Hu - (u @ Hu) * H.h * u)))
        raise SolverError("bosons.boson_ground_state",
                          f"imaginary-time relaxation not converged in {max_iter} steps "
                          f"(residual {residual:.3e})")

    Hu = H.apply(u)
    mu = H.h * float(u @ Hu)
    residual = float(np.sqrt(H.norm2(Hu - mu * u)))
    values = np.append(u, 0.0)
    values /= np.sqrt(integrate_radial(RadialFunction(grid, values**2), "1"))
    orbital = Orbital(0, 0, mu, RadialFunction(grid, values))
    occ = OccupiedSet(((orbital, 1.0),), 1.0, g=1)
    pair = density_pair(occ, k_grid)
    log.debug("bosons N=%g: %d steps, mu=%.9g, residual=%.2e", trap.N, it, mu, residual)
    return BosonResult(pair, orbital, mu, E, it, residual, history)
