"""Independent reference computations used only by the tests."""
import numpy as np
from scipy.linalg import eigh_tridiagonal

from infodens.mean_field import potential_at


def fd_levels(spec, N, l, r_max, n_points, e_max=0.0):
    """Three-point finite-difference eigenvalues below ``e_max`` (Dirichlet box)."""
    h = r_max / n_points
    r = h * np.arange(1, n_points)
    c = spec.hbar2_over_2m
    veff = potential_at(spec, N, r) + c * l * (l + 1) / r**2
    diag = 2 * c / h**2 + veff
    if veff.min() >= e_max:
        return np.empty(0)
    off = np.full(n_points - 2, -c / h**2)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="v",
                            select_range=(veff.min() - 1.0, e_max))


def fd_levels_richardson(spec, N, l, r_max, n_points, e_max=0.0):
    """h^2-extrapolated finite-difference eigenvalues."""
    coarse = fd_levels(spec, N, l, r_max, n_points, e_max)
    fine = fd_levels(spec, N, l, r_max, 2 * n_points, e_max)
    m = min(len(coarse), len(fine))
    return (4 * fine[:m] - coarse[:m]) / 3
