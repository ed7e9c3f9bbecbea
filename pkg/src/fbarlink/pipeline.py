"""End-to-end evaluation behind the command-line tools.

Each evaluation runs a configuration through loading, matching, figures of
merit and heralding, and flattens the results into rows of display-unit
values. Column names carry their units.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import herald, mcsim
from .circuit import thermal_occupancy
from .config import RunConfig, echo
from .errors import DomainError, UnphysicalCapacitanceError
from .fom import FiguresOfMerit, figures_of_merit
from .matching import (
    ApproximationWarning,
    MatchingNetwork,
    MatchingObjective,
    dielectric_loss,
    network_observables,
    parasitic_correction,
    synthesize,
    synthesize_selfconsistent,
    unphysical_onset_g_om,
)
from .optomech import OptomechLoading, Topology, device_loading

OBJECTIVE_LABELS = {
    MatchingObjective.MAXIMIZE_EFFICIENCY: "max-eff",
    MatchingObjective.MINIMIZE_NOISE: "min-noise",
}
TOPOLOGY_LABELS = {Topology.ONE_RING: "one-ring", Topology.TWO_RING: "two-ring"}
PROTOCOL_LABELS = {
    herald.Protocol.TYPE_I: "type1",
    herald.Protocol.TYPE_II: "type2",
    herald.Protocol.BLUE_DETUNED: "blue",
}

# below this, P1 is a poor stand-in for the exactly-one-photon probability
P_SINGLE_RATIO_FLOOR = 0.85


@dataclass(frozen=True)
class Notice:
    code: str
    message: str


@dataclass
class Design:
    topology: Topology
    objective: MatchingObjective
    loading: OptomechLoading
    network: MatchingNetwork
    fom: FiguresOfMerit
    n_m: float


@dataclass
class RunReport:
    config_echo: str
    rows: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def warn(self, code, message):
        if not any(w.code == code and w.message == message for w in self.warnings):
            self.warnings.append(Notice(code, message))


def unphysical_message(exc: UnphysicalCapacitanceError, cfg: RunConfig, topology) -> str:
    onset = unphysical_onset_g_om(cfg.device(), topology, cfg.r_l)
    msg = (f"{exc}; the efficiency-maximizing network is in the unphysical "
           f"negative-capacitance region")
    if 0 < onset < math.inf:
        msg += f", which starts at g_OM = {onset / 1e6:.6g} MHz for this device"
    return msg


def design(cfg: RunConfig, topology, objective, report: Optional[RunReport] = None) -> Design:
    """Loading, matching network and figures of merit for one column."""
    topology = Topology(topology)
    objective = MatchingObjective(objective)
    device = cfg.device()
    branch, static = device.branch, device.static
    loading = device_loading(device, topology)

    def build(r_l):
        if cfg.observables_only:
            return network_observables(cfg.l, cfg.c_t, r_l, device, branch, static, objective)
        if cfg.self_consistent:
            return synthesize_selfconsistent(objective, branch, static, device, r_l,
                                             topology=topology)
        return synthesize(objective, loading.r_em_opt, branch, static, device, r_l)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ApproximationWarning)
        net = build(cfg.r_l)
        if cfg.tan_delta > 0:
            r_l = cfg.r_l + dielectric_loss(cfg.tan_delta, net.f_lc, net.l, net.c_t)
            net = build(r_l)
    if report is not None:
        for w in caught:
            if issubclass(w.category, ApproximationWarning):
                report.warn("validity_guard", str(w.message))
    spec = cfg.parasitics()
    if spec is not None:
        net = parasitic_correction(net, spec)
    n_m = thermal_occupancy(device.f_m, device.temperature)
    return Design(topology, objective, loading, net, figures_of_merit(device, loading, net), n_m)


def _num(x):
    return None if x is None else float(x)


def synth_row(d: Design, cfg: RunConfig) -> dict:
    n, ld = d.network, d.loading
    br = cfg.device().branch
    return {
        "topology": TOPOLOGY_LABELS[d.topology],
        "objective": OBJECTIVE_LABELS[d.objective],
        "c_m_ff": br.c_m * 1e15,
        "l_m_uh": br.l_m * 1e6,
        "r_m_ohm": br.r_m,
        "c_om": ld.c_om,
        "r_om_ohm": ld.r_om,
        "c_oo": _num(ld.c_oo),
        "r_oo_plus_ohm": _num(ld.r_oo_plus),
        "r_oo_minus_ohm": _num(ld.r_oo_minus),
        "r_om_eq_ohm": _num(ld.r_om_eq),
        "c_om_eq": _num(ld.c_om_eq),
        "r_em_opt_ohm": ld.r_em_opt,
        "c_t_ff": n.c_t * 1e15,
        "l_nh": n.l * 1e9,
        "c_t_physical_ff": n.c_t_physical * 1e15,
        "l_physical_nh": n.l_physical * 1e9,
        "r_l_ohm": n.r_l,
        "f_lc_ghz": n.f_lc / 1e9,
        "f_loaded_ghz": n.f_loaded / 1e9,
        "q_lc": n.q_lc,
        "kappa_e_mhz": n.kappa_e / 1e6,
        "eta_e": n.eta_e,
        "g_em_mhz": n.g_em / 1e6,
        "k_t_sq": n.k_t_sq,
        "c_em": n.c_em,
        "r_em_ohm": n.r_em,
    }


def fom_row(d: Design) -> dict:
    f = d.fom
    return {
        "topology": TOPOLOGY_LABELS[d.topology],
        "objective": OBJECTIVE_LABELS[d.objective],
        "eta_o": f.eta_o,
        "eta_std": f.eta_standard,
        "eta_alt": f.eta_alt,
        "bandwidth_mhz": f.bandwidth / 1e6,
        "n_m": d.n_m,
        "n_raman": f.n_raman,
        "n_thermal": f.n_thermal,
    }


def protocol_outcome(cfg: RunConfig, d: Design, protocol) -> herald.ProtocolOutcome:
    device = cfg.device()
    pc = cfg.protocol(protocol)
    pc = herald.ProtocolConfig(pc.protocol, pc.eta_link, pc.eta_det, pc.t_reset, pc.t_sep,
                               d.topology)
    return herald.evaluate(pc, d.network.g_em, device.g_om, device.kappa_ext, device.kappa_i,
                           d.fom.n_thermal, device.j_coupling)


def blue_probabilities(cfg: RunConfig, d: Design):
    """(P0, P1): from the config, else Poissonian with mean r_o * Δt."""
    if cfg.p0 is not None:
        return cfg.p0, cfg.p1
    device = cfg.device()
    dt = herald.transduction_time(d.network.g_em, device.g_om, device.kappa_ext,
                                  device.j_coupling, d.topology)
    r_o = herald.photon_rate(device.g_om, device.kappa_ext, device.kappa_i)
    return herald.poisson_emission(r_o * dt)


def herald_row(cfg: RunConfig, d: Design, protocol, report: Optional[RunReport] = None) -> dict:
    protocol = herald.Protocol.parse(protocol)
    head = {
        "topology": TOPOLOGY_LABELS[d.topology],
        "objective": OBJECTIVE_LABELS[d.objective],
        "protocol": PROTOCOL_LABELS[protocol],
    }
    if protocol is herald.Protocol.BLUE_DETUNED:
        p0, p1 = blue_probabilities(cfg, d)
        return {**head, "p0": p0, "p1": p1,
                "p_in": herald.blue_detuned_infidelity(p0, p1, cfg.eta_link)}
    o = protocol_outcome(cfg, d, protocol)
    if report is not None and o.p1 > 0 and o.p_single / o.p1 < P_SINGLE_RATIO_FLOOR:
        report.warn("p1_approximation",
                    f"P_single/P1 = {o.p_single / o.p1:.4g} < {P_SINGLE_RATIO_FLOOR}: "
                    "at-least-one and exactly-one emission differ noticeably")
    return {
        **head,
        "dt_ns": o.dt * 1e9,
        "r_o_mhz": o.r_o / 1e6,
        "p1": o.p1,
        "p_single": o.p_single,
        "p_th": o.p_th,
        "p01": o.p01,
        "p_succ": o.p_succ,
        "n_rate_khz": o.n_rate / 1e3,
        "tau_ent_khz": o.tau_ent / 1e3,
        "fidelity": o.fidelity,
    }


def _columns(topologies, objectives):
    return [(Topology(t), MatchingObjective(o)) for t in topologies for o in objectives]


def run_synth(cfg, topologies, objectives) -> RunReport:
    report = RunReport(echo(cfg))
    for t, o in _columns(topologies, objectives):
        report.rows.append(synth_row(design(cfg, t, o, report), cfg))
    return report


def run_fom(cfg, topologies, objectives) -> RunReport:
    report = RunReport(echo(cfg))
    for t, o in _columns(topologies, objectives):
        report.rows.append(fom_row(design(cfg, t, o, report)))
    return report


def run_herald(cfg, topologies, objectives, protocols) -> RunReport:
    report = RunReport(echo(cfg))
    for t, o in _columns(topologies, objectives):
        d = design(cfg, t, o, report)
        for p in protocols:
            report.rows.append(herald_row(cfg, d, p, report))
    return report


# ---------------------------------------------------------------- sweeps

SWEEP_UNITS = {
    "temperature": ("temperature_mk", 1e-3),
    "n_cav": ("n_cav", 1.0),
    "g_om": ("g_om_mhz", 1e6),
    "eta_link": ("eta_link", 1.0),
    "p_th": ("p_th", 1.0),
}

SWEEP_OUTPUTS = [
    "topology", "objective", "c_t_ff", "l_nh", "f_loaded_ghz", "g_em_mhz", "c_em",
    "eta_std", "eta_alt", "bandwidth_mhz", "n_raman", "n_thermal", "dt_ns", "p1",
    "p_th", "fidelity_type1", "fidelity_type2", "tau_ent_type1_khz", "tau_ent_type2_khz",
    "error",
]


@dataclass(frozen=True)
class SweepSpec:
    """A 1-D grid. Endpoints use the display unit of the variable:
    temperature in mK, g_om in MHz, the rest dimensionless."""

    variable: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.variable not in SWEEP_UNITS:
            raise DomainError("variable", self.variable,
                              f"must be one of {', '.join(SWEEP_UNITS)}")
        if self.points < 2:
            raise DomainError("points", self.points, "must be at least 2")
        if not self.start < self.stop:
            raise DomainError("start", self.start, f"must be below stop={self.stop!r}")
        if self.scale not in ("linear", "log"):
            raise DomainError("scale", self.scale, "must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0:
            raise DomainError("start", self.start, "log scale needs positive endpoints")

    def grid(self):
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    @property
    def header(self):
        return [SWEEP_UNITS[self.variable][0]] + SWEEP_OUTPUTS


def _point_config(cfg: RunConfig, variable, value_si):
    if variable == "temperature":
        return cfg.with_values(temperature=value_si)
    if variable == "n_cav":
        return cfg.with_values(n_cav=value_si, g_om=None)
    if variable == "g_om":
        return cfg.with_values(g_om=value_si)
    if variable == "eta_link":
        return cfg.with_values(eta_link=value_si)
    return cfg


def sweep_rows(cfg: RunConfig, spec: SweepSpec, topologies, objectives,
               report: Optional[RunReport] = None):
    """One row per (grid point, topology, objective), in grid order.

    A point whose synthesis is unphysical keeps its row: outputs are left
    empty and the ``error`` column names the failure.
    """
    col, factor = SWEEP_UNITS[spec.variable]
    rows = []
    for value in spec.grid():
        value = float(value)
        point = _point_config(cfg, spec.variable, value * factor)
        for t, o in _columns(topologies, objectives):
            row = dict.fromkeys(spec.header)
            row[col] = value
            row["topology"] = TOPOLOGY_LABELS[t]
            row["objective"] = OBJECTIVE_LABELS[o]
            try:
                d = design(point, t, o, report)
            except UnphysicalCapacitanceError:
                row["error"] = "unphysical_capacitance"
                rows.append(row)
                continue
            o1 = protocol_outcome(point, d, herald.Protocol.TYPE_I)
            o2 = protocol_outcome(point, d, herald.Protocol.TYPE_II)
            p_th, f1, f2 = o1.p_th, o1.fidelity, o2.fidelity
            if spec.variable == "p_th":
                p_th = value
                f1 = herald.type1_fidelity_noisy(o1.p1, p_th, point.eta_link)
                f2 = herald.type2_fidelity_noisy(o1.p1, p_th)
            n, f = d.network, d.fom
            row.update({
                "c_t_ff": n.c_t * 1e15,
                "l_nh": n.l * 1e9,
                "f_loaded_ghz": n.f_loaded / 1e9,
                "g_em_mhz": n.g_em / 1e6,
                "c_em": n.c_em,
                "eta_std": f.eta_standard,
                "eta_alt": f.eta_alt,
                "bandwidth_mhz": f.bandwidth / 1e6,
                "n_raman": f.n_raman,
                "n_thermal": f.n_thermal,
                "dt_ns": o1.dt * 1e9,
                "p1": o1.p1,
                "p_th": p_th,
                "fidelity_type1": f1,
                "fidelity_type2": f2,
                "tau_ent_type1_khz": o1.tau_ent / 1e3,
                "tau_ent_type2_khz": o2.tau_ent / 1e3,
                "error": "",
            })
            rows.append(row)
    return rows


# ----------------------------------------------------------- Monte Carlo

def mc_rows(cfg: RunConfig, topologies, objectives, protocol, trials, seed,
            workers=1, log_path=None, report: Optional[RunReport] = None):
    """Analytic value against a Monte Carlo estimate, detection efficiency
    folded to one so that both describe the same link."""
    protocol = herald.Protocol.parse(protocol)
    rows = []
    for t, o in _columns(topologies, objectives):
        d = design(cfg, t, o, report)
        head = {"topology": TOPOLOGY_LABELS[t], "objective": OBJECTIVE_LABELS[o],
                "protocol": PROTOCOL_LABELS[protocol]}
        if protocol is herald.Protocol.BLUE_DETUNED:
            p0, p1 = blue_probabilities(cfg, d)
            analytic = herald.blue_detuned_infidelity(p0, p1, cfg.eta_link)
            est = mcsim.run_blue(p0, p1, cfg.eta_link, trials, seed, workers=workers,
                                 log_path=log_path)
            value, err, quantity = est.p_in_estimate, est.p_in_std_error, "p_in"
        else:
            out = protocol_outcome(cfg, d, protocol)
            if protocol is herald.Protocol.TYPE_I:
                analytic = herald.type1_fidelity_noisy(out.p1, out.p_th, cfg.eta_link)
                run = mcsim.run_type1
            else:
                analytic = herald.type2_fidelity_noisy(out.p1, out.p_th)
                run = mcsim.run_type2
            est = run(out.p1, out.p_th, cfg.eta_link, 1.0, trials, seed, workers=workers,
                      log_path=log_path)
            value, err, quantity = est.fidelity_estimate, est.fidelity_std_error, "fidelity"
        sigma = abs(value - analytic) / err if err > 0 else (0.0 if value == analytic else math.inf)
        rows.append({
            **head,
            "quantity": quantity,
            "analytic": analytic,
            "mc_estimate": value,
            "std_error": err,
            "sigma": sigma,
            "pass_3sigma": sigma <= 3.0,
            "trials": est.trials,
            "heralds": est.heralds,
            "seed": est.seed,
        })
    return rows
