"""Information measures of position/momentum density pairs.

Onicescu information energy ``E = int rho^2``, the Uffink-type distance
from the equivalent uniform sphere ``I = int (rho - rho_uniform)^2``, the
discrete Brukner-Zeilinger sum, and Shannon entropies.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .density import DensityPair, second_moment
from .errors import DegenerateMeasureError, InputError
from .numerics import RadialFunction, integrate_radial, integrate_uniform

SHANNON_FLOOR = 1e-30
DEGENERATE_I = 1e-14


@dataclass(frozen=True)
class GaussianSpec:
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise InputError("measures.GaussianSpec", f"sigma must be positive, got {self.sigma}")

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (np.sqrt(2 * np.pi) * self.sigma)

    def sample(self, half_width: float = 12.0, n_intervals: int = 4000):
        """(x, rho(x), dx) on ``mu +- half_width*sigma``."""
        x = np.linspace(self.mu - half_width * self.sigma, self.mu + half_width * self.sigma,
                        n_intervals + 1)
        return x, self.pdf(x), x[1] - x[0]

    def information_energy(self) -> float:
        """Closed form 1/(2 sigma sqrt(pi))."""
        return 1.0 / (2 * self.sigma * np.sqrt(np.pi))


@dataclass(frozen=True)
class EquivalentUniform:
    R_U: float
    rho_0: float

    def sample(self, like: RadialFunction) -> RadialFunction:
        """Step profile on ``like``'s grid; a node exactly at R_U gets rho_0/2."""
        r = like.r
        vals = np.where(r < self.R_U, self.rho_0, 0.0)
        vals[np.isclose(r, self.R_U, rtol=0, atol=1e-12 * self.R_U)] = 0.5 * self.rho_0
        return RadialFunction(like.grid, vals)

    def volume(self) -> float:
        return 4.0 / 3.0 * np.pi * self.R_U**3


@dataclass(frozen=True)
class MeasureSet:
    E_r: float
    E_k: float
    S_E: float
    I_r: float
    I_k: float
    S_I: float
    S_r: float
    S_k: float
    S: float
    R_U_r: float
    R_U_k: float

    FIELDS = ("E_r", "E_k", "S_E", "I_r", "I_k", "S_I", "S_r", "S_k", "S", "R_U_r", "R_U_k")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DiscreteDistribution:
    p: tuple[float, ...]
    norm_const: float = 1.0

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InputError("measures.DiscreteDistribution", "need a non-empty probability vector")
        if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
            raise InputError("measures.DiscreteDistribution", "probabilities must be >= 0 and sum to 1")
        object.__setattr__(self, "p", tuple(p.tolist()))

    @property
    def n(self) -> int:
        return len(self.p)


def onicescu_1d(rho, dx: float, norm_tol: float = 1e-6) -> float:
    """Information energy ``int rho(x)^2 dx`` of a density sampled on a closed
    uniform grid with spacing ``dx``."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise InputError("measures.onicescu_1d", "negative density samples")
    norm = integrate_uniform(rho, dx)
    if abs(norm - 1) > norm_tol:
        raise InputError("measures.onicescu_1d", f"density norm {norm:.10g} is not 1")
    return integrate_uniform(rho * rho, dx)


def equivalent_uniform(rho: RadialFunction, norm_tol: float = 1e-4) -> EquivalentUniform:
    """Uniform sphere with the same norm and <r^2> as ``rho``:
    ``R_U = sqrt(5/3 <r^2>)``, ``rho_0 = 3 / (4 pi R_U^3)``."""
    norm = 4 * np.pi * integrate_radial(rho, "r2")
    if abs(norm - 1) > norm_tol:
        raise InputError("measures.equivalent_uniform", f"density norm {norm:.10g} is not 1")
    R_U = float(np.sqrt(5.0 / 3.0 * second_moment(rho)))
    return EquivalentUniform(R_U, 3.0 / (4 * np.pi * R_U**3))


def information_energy(rho: RadialFunction) -> float:
    """E = 4 pi int rho^2 r^2 dr."""
    return 4 * np.pi * integrate_radial(RadialFunction(rho.grid, rho.values**2), "r2")


def enclosed_probability(rho: RadialFunction, radius: float) -> float:
    """4 pi int_0^radius rho r^2 dr from a cubic spline through the samples."""
    r = np.concatenate([[0.0], rho.r])
    f = np.concatenate([[0.0], rho.values * rho.r**2])
    return 4 * np.pi * float(CubicSpline(r, f).integrate(0.0, min(radius, rho.grid.r_max)))


def uffink(rho: RadialFunction, uniform: EquivalentUniform | None) -> float:
    """I = 4 pi int (rho - rho_uniform)^2 r^2 dr; ``None`` means a zero surrogate.

    The square is expanded so the jump at R_U is integrated exactly:
    ``I = E - 2 rho_0 P(R_U) + rho_0^2 V_U`` with ``P`` the probability
    inside R_U.
    """
    E = information_energy(rho)
    if uniform is None:
        return E
    P = enclosed_probability(rho, uniform.R_U)
    return E - 2 * uniform.rho_0 * P + uniform.rho_0**2 * uniform.volume()


def uffink_sampled(rho: RadialFunction, surrogate: RadialFunction) -> float:
    """Grid-sampled variant: Simpson of (rho - surrogate)^2 r^2 (first order
    across a jump; kept for comparisons)."""
    diff = rho.values - surrogate.values
    return 4 * np.pi * integrate_radial(RadialFunction(rho.grid, diff**2), "r2")


def inverse_product(a: float, b: float, what: str = "S_I") -> float:
    """1/(a b), refusing products of vanishing measures."""
    if a < DEGENERATE_I or b < DEGENERATE_I:
        raise DegenerateMeasureError("measures.measure_set",
                                     f"density indistinguishable from its uniform surrogate "
                                     f"({a:.3g}, {b:.3g}); {what} undefined")
    return 1.0 / (a * b)


def shannon(rho: RadialFunction) -> float:
    """S = -4 pi int rho ln(rho) r^2 dr, with rho ln rho -> 0 below 1e-30."""
    v = rho.values
    safe = np.where(v > SHANNON_FLOOR, v, 1.0)
    integrand = np.where(v > SHANNON_FLOOR, -v * np.log(safe), 0.0)
    return 4 * np.pi * integrate_radial(RadialFunction(rho.grid, integrand), "r2")


def measure_set(d: DensityPair, zero_surrogates: bool = False) -> MeasureSet:
    """All measures of one density pair.

    ``zero_surrogates=True`` replaces both uniform surrogates by zero, in
    which case I_r, I_k collapse onto E_r, E_k.
    """
    E_r, E_k = information_energy(d.rho), information_energy(d.nk)
    U_r, U_k = equivalent_uniform(d.rho), equivalent_uniform(d.nk)
    I_r = uffink(d.rho, None if zero_surrogates else U_r)
    I_k = uffink(d.nk, None if zero_surrogates else U_k)
    S_I = inverse_product(I_r, I_k)
    S_r, S_k = shannon(d.rho), shannon(d.nk)
    return MeasureSet(E_r=E_r, E_k=E_k, S_E=1.0 / (E_r * E_k),
                      I_r=I_r, I_k=I_k, S_I=S_I,
                      S_r=S_r, S_k=S_k, S=S_r + S_k,
                      R_U_r=U_r.R_U, R_U_k=U_k.R_U)


def uffink_discrete(d: DiscreteDistribution) -> float:
    """N * sum_i (p_i - 1/n)^2."""
    p = np.asarray(d.p)
    return float(d.norm_const * np.sum((p - 1.0 / d.n) ** 2))
