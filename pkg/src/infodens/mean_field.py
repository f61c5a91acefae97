"""Single-particle mean fields: Woods-Saxon wells and the isotropic oscillator.

Units follow the system: clusters use eV and bohr, nuclei MeV and fm, the
oscillator whatever units ``hbar_omega`` and ``hbar2_over_2m`` are given in.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from .errors import InputError

HARTREE_EV = 27.211386245988
# hbar^2 / 2m_e = 0.5 Ha a0^2
HBAR2_2M_ELECTRON = 0.5 * HARTREE_EV
HBAR2_2M_NUCLEON = 20.736

KINDS = ("ws_cluster", "ws_nucleus", "harmonic")


@dataclass(frozen=True)
class PotentialSpec:
    kind: str
    V0: float = 0.0
    r0: float = 1.0
    a: float = 1.0
    hbar2_over_2m: float = 0.5
    hbar_omega: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError("mean_field.PotentialSpec", f"unknown kind {self.kind!r}")
        if self.hbar2_over_2m <= 0:
            raise InputError("mean_field.PotentialSpec", "hbar2_over_2m must be positive")
        if self.is_woods_saxon:
            for name in ("V0", "r0", "a"):
                if not getattr(self, name) > 0:
                    raise InputError("mean_field.PotentialSpec", f"{name} must be positive")
        elif not self.hbar_omega > 0:
            raise InputError("mean_field.PotentialSpec", "hbar_omega must be positive")

    @property
    def is_woods_saxon(self) -> bool:
        return self.kind != "harmonic"

    @property
    def energy_scale(self) -> float:
        """Reference energy for convergence tolerances (|V0| or hbar*omega)."""
        return self.V0 if self.is_woods_saxon else self.hbar_omega

    def radius(self, N: float) -> float:
        return self.r0 * float(N) ** (1.0 / 3.0)

    def oscillator_length(self) -> float:
        # hbar*omega = 2 (hbar^2/2m) / b^2
        return float(np.sqrt(2.0 * self.hbar2_over_2m / self.hbar_omega))

    def to_dict(self) -> dict:
        return asdict(self)

    def with_overrides(self, **kw) -> "PotentialSpec":
        return replace(self, **kw)


def cluster_defaults() -> PotentialSpec:
    """Sodium-like jellium Woods-Saxon: depth in eV, lengths in bohr."""
    return PotentialSpec("ws_cluster", V0=6.0, r0=4.0, a=1.0, hbar2_over_2m=HBAR2_2M_ELECTRON)


def nucleus_defaults() -> PotentialSpec:
    """Static Woods-Saxon nuclear well in MeV and fm (no Coulomb, no spin-orbit)."""
    return PotentialSpec("ws_nucleus", V0=44.0, r0=1.27, a=0.67, hbar2_over_2m=HBAR2_2M_NUCLEON)


def harmonic_defaults() -> PotentialSpec:
    return PotentialSpec("harmonic", hbar2_over_2m=0.5, hbar_omega=1.0)


def potential_at(spec: PotentialSpec, N: float, r):
    """V(r) for ``N`` particles. Scalar in, scalar out; arrays broadcast."""
    if N < 1:
        raise InputError("mean_field.potential_at", f"N must be >= 1, got {N}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InputError("mean_field.potential_at", "negative radius")
    if spec.is_woods_saxon:
        x = (r - spec.radius(N)) / spec.a
        # exp overflow far outside the well just means V -> 0
        with np.errstate(over="ignore"):
            v = -spec.V0 / (1.0 + np.exp(x))
    else:
        b = spec.oscillator_length()
        v = 0.5 * spec.hbar_omega * (r / b) ** 2
    return v if v.ndim else float(v)
