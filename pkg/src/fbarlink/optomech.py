"""Optomechanical loading of the acoustic mode for one- and two-ring devices."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .circuit import DeviceParams, MotionalBranch
from .errors import DegenerateLoadingError, DomainError


class Topology(str, Enum):
    ONE_RING = "one_ring"
    TWO_RING = "two_ring"


@dataclass(frozen=True)
class SidebandAmplitudes:
    upper: float
    lower: float

    @property
    def difference(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class OptomechLoading:
    """Equivalent resistances the optical side presents to the acoustic mode.

    Two-ring-only fields are ``None`` for the one-ring topology and the
    one-ring sideband resistances are ``None`` for the two-ring topology.
    """

    topology: Topology
    sidebands: SidebandAmplitudes
    r_m: float
    c_om: float
    r_om: float
    r_em_opt: float
    r_om_plus: Optional[float] = None
    r_om_minus: Optional[float] = None
    c_oo: Optional[float] = None
    r_oo_plus: Optional[float] = None
    r_oo_minus: Optional[float] = None
    r_om_eq: Optional[float] = None
    c_om_eq: Optional[float] = None

    @property
    def c_om_effective(self) -> float:
        """Cooperativity that enters the figures of merit for this topology."""
        return self.c_om if self.topology is Topology.ONE_RING else self.c_om_eq


def sideband_amplitudes(kappa_o, f_m, detuning) -> SidebandAmplitudes:
    """Lorentzian weights of the anti-Stokes (upper) and Stokes (lower) outputs.

    The ratio is dimensionless, so Hz inputs give the same result as angular
    ones.
    """
    if not kappa_o > 0:
        raise DomainError("kappa_o", kappa_o, "must be strictly positive")
    half = (kappa_o / 2.0) ** 2
    upper = half / (half + (f_m + detuning) ** 2)
    lower = half / (half + (f_m - detuning) ** 2)
    return SidebandAmplitudes(upper=upper, lower=lower)


def one_ring_loading(branch: MotionalBranch, g_om, gamma_m, kappa_o,
                     sidebands: SidebandAmplitudes) -> OptomechLoading:
    c_om = 4.0 * g_om**2 / (gamma_m * kappa_o)
    r_om = branch.r_m * c_om
    r_plus = r_om * sidebands.upper
    r_minus = r_om * sidebands.lower
    return OptomechLoading(
        topology=Topology.ONE_RING,
        sidebands=sidebands,
        r_m=branch.r_m,
        c_om=c_om,
        r_om=r_om,
        r_om_plus=r_plus,
        r_om_minus=r_minus,
        r_em_opt=branch.r_m + r_plus - r_minus,
    )


def two_ring_loading(branch: MotionalBranch, g_om, gamma_m, kappa_o, j_coupling,
                     sidebands: SidebandAmplitudes) -> OptomechLoading:
    """Photonic-molecule loading: the ring-ring legs sit in parallel with R_OM.

    Both rings are taken to share the total linewidth ``kappa_o``.
    """
    c_om = 4.0 * g_om**2 / (gamma_m * kappa_o)
    c_oo = 4.0 * j_coupling**2 / kappa_o**2
    r_om = branch.r_m * c_om
    r_oo_plus = branch.r_m * c_oo * sidebands.upper
    r_oo_minus = branch.r_m * c_oo * sidebands.lower
    leg = r_oo_plus - r_oo_minus
    total = r_om + leg
    if total <= 0:
        raise DegenerateLoadingError(
            f"R_OM + R_OO+ - R_OO- = {total!r} ohm is not positive"
        )
    r_om_eq = r_om * leg / total
    denom = c_om + c_oo * sidebands.difference
    c_om_eq = c_om * c_oo / denom if denom != 0 else 0.0
    return OptomechLoading(
        topology=Topology.TWO_RING,
        sidebands=sidebands,
        r_m=branch.r_m,
        c_om=c_om,
        r_om=r_om,
        c_oo=c_oo,
        r_oo_plus=r_oo_plus,
        r_oo_minus=r_oo_minus,
        r_om_eq=r_om_eq,
        c_om_eq=c_om_eq,
        r_em_opt=branch.r_m + r_om_eq,
    )


def device_loading(device: DeviceParams, topology=Topology.ONE_RING,
                   f_m=None, branch: Optional[MotionalBranch] = None) -> OptomechLoading:
    """Loading for ``device`` with its own g_OM, linewidths and detuning.

    ``f_m`` overrides the acoustic frequency used in the sideband weights (the
    pump detuning stays fixed), which is how a shifted acoustic resonance
    feeds back into the loading.
    """
    topology = Topology(topology)
    branch = branch or device.branch
    sb = sideband_amplitudes(device.kappa_o, device.f_m if f_m is None else f_m,
                             device.detuning)
    if topology is Topology.ONE_RING:
        return one_ring_loading(branch, device.g_om, device.gamma_i, device.kappa_o, sb)
    return two_ring_loading(branch, device.g_om, device.gamma_i, device.kappa_o,
                            device.j_coupling, sb)
