"""Analytic entanglement-heralding model for two transducer-equipped nodes.

Both nodes are assumed identical: same emission probabilities, transduction
time and reset time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import DomainError, ProbabilityConsistencyError
from .optomech import Topology

_CLAMP_TOL = 1e-12


class Protocol(str, Enum):
    TYPE_I = "type_i"
    TYPE_II = "type_ii"
    BLUE_DETUNED = "blue_detuned"

    @classmethod
    def parse(cls, value):
        aliases = {"type1": cls.TYPE_I, "type2": cls.TYPE_II, "blue": cls.BLUE_DETUNED}
        key = value.value if isinstance(value, cls) else str(value).lower().replace("-", "_")
        return aliases.get(key) or cls(key)


def _prob(name, p):
    """Clamp rounding excursions out of [0, 1]; reject anything larger."""
    if math.isnan(p):
        raise ProbabilityConsistencyError(f"{name} is NaN")
    if p < 0.0:
        if p < -_CLAMP_TOL:
            raise ProbabilityConsistencyError(f"{name}={p!r} is below 0")
        return 0.0
    if p > 1.0:
        if p > 1.0 + _CLAMP_TOL:
            raise ProbabilityConsistencyError(f"{name}={p!r} exceeds 1")
        return 1.0
    return p


def _check_input(name, p):
    if not 0.0 <= p <= 1.0:
        raise DomainError(name, p, "must lie in [0, 1]")


@dataclass(frozen=True)
class ProtocolConfig:
    """Link and timing parameters for one heralding protocol.

    ``t_sep`` is the Type-II time-bin separation; ``None`` means the shortest
    allowed value, Δt + t_reset.
    """

    protocol: Protocol = Protocol.TYPE_I
    eta_link: float = 0.5
    eta_det: float = 0.9
    t_reset: float = 1e-6
    t_sep: Optional[float] = None
    topology: Topology = Topology.ONE_RING

    def __post_init__(self):
        object.__setattr__(self, "protocol", Protocol.parse(self.protocol))
        object.__setattr__(self, "topology", Topology(self.topology))
        _check_input("eta_link", self.eta_link)
        _check_input("eta_det", self.eta_det)
        if self.t_reset < 0:
            raise DomainError("t_reset", self.t_reset, "must be non-negative")
        if self.t_sep is not None and self.t_sep < 0:
            raise DomainError("t_sep", self.t_sep, "must be non-negative")


@dataclass(frozen=True)
class ProtocolOutcome:
    protocol: Protocol
    dt: float  # s
    r_o: float  # Hz
    p1: float
    p_single: float
    p_th: float
    p01: float
    p_succ: float
    n_rate: float  # Hz
    tau_ent: float  # Hz
    fidelity: float


def transduction_time(g_em, g_om, kappa_ext, j_coupling=None, topology=Topology.ONE_RING):
    """Sum of the lifetimes along the conversion chain, in seconds."""
    topology = Topology(topology)
    rates = [("g_em", g_em), ("g_om", g_om), ("kappa_ext", kappa_ext)]
    if topology is Topology.TWO_RING:
        if j_coupling is None:
            raise DomainError("j_coupling", j_coupling, "required for the two-ring topology")
        rates.append(("j_coupling", j_coupling))
    for name, r in rates:
        if not r > 0:
            raise DomainError(name, r, "must be strictly positive")
    return sum(1.0 / r for _, r in rates)


def photon_rate(g_om, kappa_ext, kappa_i):
    """Optical photon emission rate r_o in Hz."""
    if g_om < 0 or kappa_ext < 0 or kappa_i < 0:
        raise DomainError("rates", (g_om, kappa_ext, kappa_i), "must be non-negative")
    kappa_o = kappa_ext + kappa_i
    if kappa_o == 0:
        raise DomainError("kappa_ext + kappa_i", kappa_o, "must be positive")
    return 4.0 * g_om**2 * kappa_ext / kappa_o**2


def emission_probabilities(r_o, dt, n_th):
    """Poissonian (at-least-one, exactly-one, thermal) emission probabilities."""
    if r_o < 0:
        raise DomainError("r_o", r_o, "must be non-negative")
    if not dt > 0:
        raise DomainError("dt", dt, "must be strictly positive")
    if n_th < 0:
        raise DomainError("n_th", n_th, "must be non-negative")
    x = r_o * dt
    p1 = -math.expm1(-x)
    p_single = x * math.exp(-x)
    p_th = -math.expm1(-x * n_th)
    return _prob("p1", p1), _prob("p_single", p_single), _prob("p_th", p_th)


def type1_fidelity_noiseless(p1, p01, eta_link):
    """Type-I fidelity with link loss only."""
    for name, v in (("p1", p1), ("p01", p01), ("eta_link", eta_link)):
        _check_input(name, v)
    denom = p1**2 * (1.0 - eta_link) + 2.0 * p01
    if denom == 0:
        return 1.0
    return _prob("fidelity", 2.0 * p01 / denom)


def type1_fidelity_noisy(p1, p_th, eta_link):
    """Type-I fidelity with link loss and thermal false heralds."""
    for name, v in (("p1", p1), ("p_th", p_th), ("eta_link", eta_link)):
        _check_input(name, v)
    p0 = 1.0 - p1
    p01 = p1 * p0
    p00 = p0 * p0
    q = 1.0 - p_th
    good = 2.0 * p01 * q**2
    lossy = (p1**2 * q**2 + 2.0 * p01 * p_th * q + p00 * p_th**2) * (1.0 - eta_link)
    dark = 2.0 * p00 * p_th * q
    denom = lossy + dark + good
    if denom == 0:
        return 1.0
    return _prob("fidelity", good / denom)


def type2_fidelity_noisy(p1, p_th):
    """Type-II fidelity; independent of link loss."""
    _check_input("p1", p1)
    _check_input("p_th", p_th)
    p0 = 1.0 - p1
    p01 = p1 * p0
    p00 = p0 * p0
    q = 1.0 - p_th
    good = 2.0 * p1**2 * q**2
    denom = 8.0 * p01 * p_th * q + 4.0 * p00 * p_th**2 + good
    if denom == 0:
        return 1.0
    return _prob("fidelity", good / denom)


def rates(r_o, dt, t_reset, protocol, eta_link, eta_det, t_sep=None):
    """(n_rate, tau_ent, p_succ) for one protocol.

    For Type-II, ``t_sep`` defaults to dt + t_reset, which halves the
    single-photon attempt rate.
    """
    protocol = Protocol.parse(protocol)
    if not dt > 0:
        raise DomainError("dt", dt, "must be strictly positive")
    if t_reset < 0:
        raise DomainError("t_reset", t_reset, "must be non-negative")
    _check_input("eta_link", eta_link)
    _check_input("eta_det", eta_det)
    x = r_o * dt
    n_r = 2.0 * r_o * math.exp(-x) * dt / (dt + t_reset)
    p_succ = _prob("p_succ", -math.expm1(-x) * eta_link * eta_det)
    if protocol is Protocol.TYPE_II:
        period = dt + t_reset
        if t_sep is None:
            t_sep = period
        elif t_sep < dt:
            raise DomainError("t_sep", t_sep, f"must be at least the transduction time {dt!r}")
        if n_r == 0:
            return 0.0, 0.0, p_succ
        n_r2 = 1.0 / (2.0 / n_r + t_sep - period)
        return n_r2, n_r2 * (eta_link * eta_det) ** 2, p_succ
    return n_r, n_r * eta_link * eta_det, p_succ


def asymptotic_fidelities(p_th, eta_link):
    """Simplified fidelity curves in the small-emission-probability regime."""
    _check_input("p_th", p_th)
    _check_input("eta_link", eta_link)
    q = 1.0 - p_th
    denom = (q**2 * (3.0 - eta_link) + p_th * q * (3.0 - eta_link)
             + p_th**2 * (1.0 - eta_link))
    # p_th = 1 with a lossless link: every herald is thermal
    f1 = 2.0 * q**2 / denom if denom > 0 else 0.0
    f2 = -(q**2) / (p_th**2 - 2.0 * p_th - 1.0)
    return _prob("f_type1", f1), _prob("f_type2", f2)


def blue_detuned_infidelity(p0, p1, eta_link):
    """False-herald probability for blue-detuned (entangled-pair) emission."""
    _check_input("p0", p0)
    _check_input("p1", p1)
    _check_input("eta_link", eta_link)
    if p0 + p1 > 1.0 + _CLAMP_TOL:
        raise DomainError("p0 + p1", p0 + p1, "must not exceed 1")
    pm = max(1.0 - p0 - p1, 0.0)
    e = eta_link
    p_in = (p1**2 * e * (1.0 - e) + 2.0 * p1 * pm * e + 2.0 * p1 * pm * e * (1.0 - e)
            + pm**2 * e * (1.0 - e))
    return _prob("p_in", p_in)


def poisson_emission(mean):
    """(P0, P1) for a Poissonian source with the given mean photon number."""
    if mean < 0:
        raise DomainError("mean", mean, "must be non-negative")
    p0 = math.exp(-mean)
    return p0, mean * p0


def evaluate(config: ProtocolConfig, g_em, g_om, kappa_ext, kappa_i, n_th,
             j_coupling=None) -> ProtocolOutcome:
    """Full analytic outcome for a Type-I or Type-II link."""
    if config.protocol is Protocol.BLUE_DETUNED:
        raise DomainError("protocol", config.protocol.value,
                          "blue-detuned links only expose blue_detuned_infidelity")
    dt = transduction_time(g_em, g_om, kappa_ext, j_coupling, config.topology)
    r_o = photon_rate(g_om, kappa_ext, kappa_i)
    p1, p_single, p_th = emission_probabilities(r_o, dt, n_th)
    n_rate, tau, p_succ = rates(r_o, dt, config.t_reset, config.protocol,
                                config.eta_link, config.eta_det, config.t_sep)
    if config.protocol is Protocol.TYPE_I:
        fid = type1_fidelity_noisy(p1, p_th, config.eta_link)
    else:
        fid = type2_fidelity_noisy(p1, p_th)
    return ProtocolOutcome(
        protocol=config.protocol,
        dt=dt,
        r_o=r_o,
        p1=p1,
        p_single=p_single,
        p_th=p_th,
        p01=p1 * (1.0 - p1),
        p_succ=p_succ,
        n_rate=n_rate,
        tau_ent=tau,
        fidelity=fid,
    )
