"""Transducer figures of merit: efficiency, bandwidth and added noise."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import DeviceParams, thermal_occupancy
from .errors import DomainError
from .matching import MatchingNetwork
from .optomech import OptomechLoading, Topology


@dataclass(frozen=True)
class FiguresOfMerit:
    eta_standard: float
    eta_alt: float
    bandwidth: float  # Hz
    n_raman: float  # quanta per transduced photon
    n_thermal: float
    eta_o: float


def optical_coupling_efficiency(kappa_ext, kappa_i):
    if kappa_ext < 0 or kappa_i < 0 or not kappa_ext + kappa_i > 0:
        raise DomainError("kappa_ext + kappa_i", kappa_ext + kappa_i,
                          "rates must be non-negative with positive sum")
    return kappa_ext / (kappa_ext + kappa_i)


def _om_terms(loading: OptomechLoading):
    """(C_OM-like cooperativity, its upper-sideband weight, its net damping term)."""
    sb = loading.sidebands
    c = loading.c_om_effective
    return c, c * sb.upper, c * sb.difference


def efficiency_standard(eta_e, eta_o, loading: OptomechLoading, c_em):
    """Peak conversion efficiency with the electromechanical side loaded by ``c_em``."""
    _, c_up, c_net = _om_terms(loading)
    return eta_e * eta_o * 4.0 * c_em * c_up / (1.0 + c_em + c_net) ** 2


def efficiency_alternative(eta_e, eta_o, loading: OptomechLoading):
    """Efficiency bound that does not depend on the matching network."""
    if loading.topology is Topology.TWO_RING:
        c = loading.c_om_eq
        return eta_e * eta_o * c / (math.sqrt(c + 1.0) + 1.0) ** 2
    _, c_up, c_net = _om_terms(loading)
    return eta_e * eta_o * c_up / (c_net + 1.0)


def bandwidth(gamma_m, c_em, loading: OptomechLoading):
    """Dynamically broadened mechanical linewidth in Hz."""
    _, _, c_net = _om_terms(loading)
    return gamma_m * (1.0 + c_em + c_net)


def raman_noise(eta_e, loading: OptomechLoading, c_em):
    """Optical amplification noise, quanta per transduced photon."""
    if not c_em > 0:
        raise DomainError("c_em", c_em, "must be strictly positive")
    c = loading.c_om_effective
    return c * loading.sidebands.lower / (eta_e * c_em)


def thermal_noise(eta_e, n_m, c_em):
    """Thermo-mechanical noise, quanta per transduced photon."""
    if not c_em > 0:
        raise DomainError("c_em", c_em, "must be strictly positive")
    if n_m < 0:
        raise DomainError("n_m", n_m, "must be non-negative")
    return n_m / (eta_e * c_em)


def figures_of_merit(device: DeviceParams, loading: OptomechLoading,
                     network: MatchingNetwork) -> FiguresOfMerit:
    """All figures of merit for one device, loading and matching network.

    The bath occupancy is evaluated at the device's bare acoustic frequency.
    """
    eta_o = optical_coupling_efficiency(device.kappa_ext, device.kappa_i)
    c_em = network.c_em
    n_m = thermal_occupancy(device.f_m, device.temperature)
    return FiguresOfMerit(
        eta_standard=efficiency_standard(network.eta_e, eta_o, loading, c_em),
        eta_alt=efficiency_alternative(network.eta_e, eta_o, loading),
        bandwidth=bandwidth(device.gamma_i, c_em, loading),
        n_raman=raman_noise(network.eta_e, loading, c_em),
        n_thermal=thermal_noise(network.eta_e, n_m, c_em),
        eta_o=eta_o,
    )
