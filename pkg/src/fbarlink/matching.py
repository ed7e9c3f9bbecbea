"""L-C_T matching network synthesis and observables.

The static resistance R0 of the mBVD model appears in parallel with the
source branch Z_tx + R_L. Every formula here uses that parallel combination,
``r_source``. With R0 at the open-circuit sentinel the results coincide with
the plain BVD model to better than 1e-9 relative.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional, Union

from .circuit import (
    R0_OPEN,
    TWO_PI,
    DeviceParams,
    MotionalBranch,
    StaticBranch,
    loaded_acoustic_frequency,
)
from .errors import ConvergenceError, DomainError, UnphysicalCapacitanceError
from .optomech import Topology, device_loading


class MatchingObjective(str, Enum):
    MAXIMIZE_EFFICIENCY = "maximize_efficiency"
    MINIMIZE_NOISE = "minimize_noise"


class ApproximationWarning(UserWarning):
    """The closed-form synthesis is outside its accuracy regime."""


@dataclass(frozen=True)
class MatchingNetwork:
    """A matching network and the quantities it induces on the transducer.

    ``l`` and ``c_t`` are the equivalent values the circuit sees. When
    parasitics have been accounted for, ``c_parasitic`` and ``l_parasitic``
    hold them and the components to fabricate are ``c_t_physical`` and
    ``l_physical``.

    ``f_lc`` is the bare LC resonance; ``f_loaded`` is the acoustic resonance
    pulled by the LC circuit. The two coincide for an efficiency-maximizing
    network and differ strongly for a noise-minimizing one.

    ``c_em`` is R_EM / R_m. ``c_em_coupling`` is the same cooperativity from
    4 g^2 / (gamma_m kappa_e) with the coupling evaluated at ``f_loaded``.
    ``g_em`` itself is reported at the bare acoustic frequency.
    """

    l: float
    c_t: float
    r_l: float
    r_source: float
    f_lc: float
    f_loaded: float
    q_lc: float
    kappa_e: float
    eta_e: float
    g_em: float
    k_t_sq: float
    c_em: float
    c_em_coupling: float
    r_em: float
    objective: Optional[MatchingObjective] = None
    c_parasitic: float = 0.0
    l_parasitic: float = 0.0

    @property
    def c_t_physical(self) -> float:
        return self.c_t - self.c_parasitic

    @property
    def l_physical(self) -> float:
        return self.l - self.l_parasitic


@dataclass(frozen=True)
class ParasiticSpec:
    c_self: float = 0.0  # F, inductor self-capacitance
    c_ground: float = 0.0  # F, inductor capacitance to ground
    l_ct: float = 0.0  # H, series inductance of the matching capacitor

    def __post_init__(self):
        for name in ("c_self", "c_ground", "l_ct"):
            if getattr(self, name) < 0:
                raise DomainError(name, getattr(self, name), "must be non-negative")

    @property
    def c_p(self) -> float:
        return self.c_self + self.c_ground


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    ratio: float  # kappa_o / f_s
    k_eff_sq: float

    @property
    def margin(self) -> float:
        """How many times smaller k_eff^2 is than kappa_o / f_s."""
        return self.ratio / self.k_eff_sq


def validity_check(k_eff_sq, kappa_o, f_s) -> ValidityReport:
    """Check k_eff^2 << kappa_o / f_s with a factor-of-ten margin."""
    for name, v in (("k_eff_sq", k_eff_sq), ("kappa_o", kappa_o), ("f_s", f_s)):
        if not v > 0:
            raise DomainError(name, v, "must be strictly positive")
    ratio = kappa_o / f_s
    return ValidityReport(ok=not k_eff_sq > 0.1 * ratio, ratio=ratio, k_eff_sq=k_eff_sq)


def source_resistance(z_tx, r_l, r0=R0_OPEN):
    """(Z_tx + R_L) in parallel with the static resistance R0."""
    series = z_tx + r_l
    return 1.0 / (1.0 / series + 1.0 / r0)


def network_observables(l, c_t, r_l, device: DeviceParams, branch: MotionalBranch,
                        static: Optional[StaticBranch] = None,
                        objective: Optional[MatchingObjective] = None) -> MatchingNetwork:
    if not l > 0:
        raise DomainError("l", l, "must be strictly positive")
    if c_t < 0:
        raise DomainError("c_t", c_t, "must be non-negative")
    if r_l < 0:
        raise DomainError("r_l", r_l, "must be non-negative")
    static = static or device.static
    r_s = source_resistance(device.z_tx, r_l, static.r0)
    c_tot = static.c0 + c_t
    q_lc = math.sqrt(l / c_tot) / r_s
    kappa_e = r_s / (TWO_PI * l)
    k_t_sq = branch.c_m / (branch.c_m + c_tot)
    f_loaded = loaded_acoustic_frequency(branch, c_tot)
    r_em = q_lc**2 * r_s
    g_loaded = math.sqrt(k_t_sq) * f_loaded / 2.0
    return MatchingNetwork(
        l=l,
        c_t=c_t,
        r_l=r_l,
        r_source=r_s,
        f_lc=1.0 / (TWO_PI * math.sqrt(l * c_tot)),
        f_loaded=f_loaded,
        q_lc=q_lc,
        kappa_e=kappa_e,
        eta_e=device.z_tx / (device.z_tx + r_l),
        g_em=math.sqrt(k_t_sq) * device.f_m / 2.0,
        k_t_sq=k_t_sq,
        c_em=r_em / branch.r_m,
        c_em_coupling=4.0 * g_loaded**2 / (branch.gamma * kappa_e),
        r_em=r_em,
        objective=objective,
    )


def _warn_validity(device: DeviceParams, branch: MotionalBranch):
    report = validity_check(device.k_eff_sq, device.kappa_o, branch.f_s)
    if not report.ok:
        warnings.warn(
            f"k_eff^2 = {report.k_eff_sq:.4g} is not << kappa_o/f_s = {report.ratio:.4g}; "
            "closed-form matching neglects the frequency dependence of the loading",
            ApproximationWarning,
            stacklevel=3,
        )
    return report


def _inductance_at_resonance(r_em_opt, r_s, branch, c_total):
    f_loaded = loaded_acoustic_frequency(branch, c_total)
    return math.sqrt(r_em_opt * r_s) / (TWO_PI * f_loaded)


def synthesize(objective, r_em_opt, branch: MotionalBranch, static: StaticBranch,
               device: DeviceParams, r_l=0.0) -> MatchingNetwork:
    """Closed-form matching network for a fixed optomechanical loading.

    Maximizing efficiency sets R_EM = ``r_em_opt`` with the LC circuit on
    the (pulled) acoustic resonance. Minimizing noise drops C_T to zero and
    keeps the inductance rule of the resonant design, evaluated at the
    acoustic resonance pulled by C0 alone.

    Raises
    ------
    UnphysicalCapacitanceError
        If the required C_T is negative (loading too large for C0).
    """
    objective = MatchingObjective(objective)
    if not r_em_opt > 0:
        raise DomainError("r_em_opt", r_em_opt, "must be strictly positive")
    _warn_validity(device, branch)
    r_s = source_resistance(device.z_tx, r_l, static.r0)
    if objective is MatchingObjective.MAXIMIZE_EFFICIENCY:
        w_s = branch.omega_s
        c_m = branch.c_m
        c_total = 0.5 * c_m * (math.sqrt(1.0 + 4.0 / (r_em_opt * w_s**2 * c_m**2 * r_s)) - 1.0)
        c_t = c_total - static.c0
        if c_t < 0:
            raise UnphysicalCapacitanceError(c_t, device.g_om,
                                             "optomechanical loading exceeds what C0 can match")
        l = 1.0 / (w_s**2 * (c_m + c_total))
    else:
        c_t = 0.0
        l = _inductance_at_resonance(r_em_opt, r_s, branch, static.c0)
    return network_observables(l, c_t, r_l, device, branch, static, objective)


def synthesize_for(device: DeviceParams, objective, topology=Topology.ONE_RING,
                   r_l=0.0) -> MatchingNetwork:
    """Shortcut: closed-form synthesis using the device's own loading."""
    loading = device_loading(device, topology)
    return synthesize(objective, loading.r_em_opt, device.branch, device.static, device, r_l)


def static_resistance_variant(objective, branch: MotionalBranch, static: StaticBranch,
                              device: DeviceParams, r_l=0.0,
                              topology=Topology.ONE_RING) -> MatchingNetwork:
    """Synthesis with a finite static resistance R0 shunting the source."""
    if not (0 < static.r0 < math.inf):
        raise DomainError("r0", static.r0, "must be finite and strictly positive")
    loading = device_loading(device, topology, branch=branch)
    return synthesize(objective, loading.r_em_opt, branch, static, device, r_l)


def synthesize_selfconsistent(objective, branch: MotionalBranch, static: StaticBranch,
                              device: DeviceParams, r_l=0.0, topology=Topology.ONE_RING,
                              c_t0=0.0, damping=0.5, rtol=1e-6, max_iter=100) -> MatchingNetwork:
    """Solve the matching conditions with the loading re-evaluated at the
    LC-pulled acoustic frequency.

    Damped fixed-point iteration on C_T, started from ``c_t0``; converged when
    the matching condition moves C_T by less than ``rtol`` relative.
    """
    objective = MatchingObjective(objective)
    r_s = source_resistance(device.z_tx, r_l, static.r0)

    def loading_at(c_total):
        f_loaded = loaded_acoustic_frequency(branch, c_total)
        return device_loading(device, topology, f_m=f_loaded, branch=branch).r_em_opt, f_loaded

    if objective is MatchingObjective.MINIMIZE_NOISE:
        r_opt, f_loaded = loading_at(static.c0)
        l = math.sqrt(r_opt * r_s) / (TWO_PI * f_loaded)
        return network_observables(l, 0.0, r_l, device, branch, static, objective)

    c_t = c_t0
    change = math.inf
    for _ in range(max_iter):
        c_total = static.c0 + c_t
        if c_total <= 0:
            raise UnphysicalCapacitanceError(c_t, device.g_om, "iterate left the physical region")
        r_opt, f_loaded = loading_at(c_total)
        target = 1.0 / (TWO_PI * f_loaded * math.sqrt(r_opt * r_s)) - static.c0
        # residual of the undamped map, not the damped step, so the stopping
        # test bounds the distance to the fixed point
        change = abs(target - c_t) / max(abs(target), 1e-18)
        if change < rtol:
            # the map is strongly contracting, so its undamped image is the
            # best estimate of the fixed point
            c_t = target
            break
        c_t = (1.0 - damping) * c_t + damping * target
    else:
        raise ConvergenceError(max_iter, change)

    if c_t < 0:
        raise UnphysicalCapacitanceError(c_t, device.g_om, "self-consistent solution")
    r_opt, f_loaded = loading_at(static.c0 + c_t)
    l = math.sqrt(r_opt * r_s) / (TWO_PI * f_loaded)
    return network_observables(l, c_t, r_l, device, branch, static, objective)


def dielectric_loss(tan_delta, f_lc, l, c_t):
    """Equivalent series resistance of a lossy L and C_T at ``f_lc`` Hz.

    A zero ``c_t`` (no capacitor fitted) contributes nothing.
    """
    if tan_delta < 0:
        raise DomainError("tan_delta", tan_delta, "must be non-negative")
    w = TWO_PI * f_lc
    r_cap = tan_delta / (w * c_t) if c_t > 0 else 0.0
    return r_cap + tan_delta * w * l


ParasiticEstimator = Callable[[float, float], ParasiticSpec]


def parasitic_correction(target: MatchingNetwork,
                         parasitics: Union[ParasiticSpec, ParasiticEstimator],
                         iterations=1) -> MatchingNetwork:
    """Physical L and C_T that, together with their parasitics, realize ``target``.

    ``parasitics`` is either a fixed :class:`ParasiticSpec` or a callable
    ``(c_t_physical, l_physical) -> ParasiticSpec`` that re-estimates them
    from the current component values; each iteration calls it once.
    """
    if iterations < 1:
        raise DomainError("iterations", iterations, "must be at least 1")
    estimate = parasitics if callable(parasitics) else (lambda c, l: parasitics)
    c_phys, l_phys = target.c_t, target.l
    net = target
    for _ in range(iterations):
        spec = estimate(c_phys, l_phys)
        net = replace(target, c_parasitic=spec.c_p, l_parasitic=spec.l_ct)
        c_phys, l_phys = net.c_t_physical, net.l_physical
        if c_phys < 0:
            raise UnphysicalCapacitanceError(
                c_phys, None, f"parasitic capacitance {spec.c_p * 1e15:.6g} fF exceeds "
                f"the required {target.c_t * 1e15:.6g} fF")
        if l_phys <= 0:
            raise DomainError("l_ct", spec.l_ct, "parasitic inductance exceeds the required L")
    return net


def assemble(network: MatchingNetwork) -> MatchingNetwork:
    """Fold the parasitics back into the equivalent components."""
    return replace(network, c_parasitic=0.0, l_parasitic=0.0)


def unphysical_onset_g_om(device: DeviceParams, topology=Topology.ONE_RING, r_l=0.0):
    """Smallest g_OM (Hz) at which the efficiency-maximizing network needs C_T < 0.

    Returns 0.0 if even the bare mechanical resistance cannot be matched and
    ``math.inf`` if no finite coupling drives C_T negative.
    """
    topology = Topology(topology)
    branch = device.branch
    r_s = source_resistance(device.z_tx, r_l, device.r0)
    ratio = 2.0 * device.c0 / branch.c_m + 1.0
    # R_opt at which the matched total capacitance equals C0 exactly
    r_star = 4.0 / (branch.omega_s**2 * branch.c_m**2 * r_s * (ratio**2 - 1.0))
    excess = r_star - branch.r_m
    if excess <= 0:
        return 0.0
    loading = device_loading(device, topology)
    diff = loading.sidebands.difference
    if topology is Topology.ONE_RING:
        if diff <= 0:
            return math.inf
        r_om = excess / diff
    else:
        leg = loading.r_oo_plus - loading.r_oo_minus
        if excess >= leg:
            return math.inf
        r_om = leg * excess / (leg - excess)
    c_om = r_om / branch.r_m
    return math.sqrt(c_om * device.gamma_i * device.kappa_o / 4.0)
