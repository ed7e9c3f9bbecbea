"""Run configuration: flat ``key = value`` files with units in the key names.

Every dimensional key carries a unit suffix (``f_m_ghz``, ``c0_ff``,
``temperature_mk``). A JSON object with the same keys is accepted as well.
Values are stored in SI units; :func:`echo` writes them back with SI
suffixes so that ``parse(echo(cfg)) == cfg``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Optional

from .circuit import DeviceParams
from .errors import ConfigError, DomainError
from .herald import ProtocolConfig
from .matching import ParasiticSpec
from .optomech import Topology

UNITS = {
    "freq": {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9, "thz": 1e12},
    "cap": {"f": 1.0, "pf": 1e-12, "ff": 1e-15, "af": 1e-18},
    "ind": {"h": 1.0, "uh": 1e-6, "nh": 1e-9, "ph": 1e-12},
    "res": {"ohm": 1.0, "mohm": 1e-3, "kohm": 1e3, "megohm": 1e6},
    "temp": {"k": 1.0, "mk": 1e-3},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9},
}
SI_SUFFIX = {"freq": "hz", "cap": "f", "ind": "h", "res": "ohm", "temp": "k", "time": "s"}

_DEV = DeviceParams()

# field -> unit kind; None = dimensionless, "str" = text, "bool" = flag
SCHEMA = {
    "g_om0": "freq",
    "f_opt": "freq",
    "kappa_i": "freq",
    "kappa_ext": "freq",
    "f_m": "freq",
    "gamma_i": "freq",
    "k_eff_sq": None,
    "n_cav": None,
    "g_om": "freq",
    "c0": "cap",
    "r0": "res",
    "temperature": "temp",
    "j_coupling": "freq",
    "z_tx": "res",
    "detuning": "freq",
    "topology": "str",
    "eta_link": None,
    "eta_det": None,
    "t_reset": "time",
    "t_sep": "time",
    "r_l": "res",
    "tan_delta": None,
    "c_t": "cap",
    "l": "ind",
    "c_self": "cap",
    "c_ground": "cap",
    "l_ct": "ind",
    "self_consistent": "bool",
    "p0": None,
    "p1": None,
}


@dataclass(frozen=True)
class RunConfig:
    """A parsed configuration, all values in SI units.

    ``g_om``, when set, fixes the pump-enhanced coupling and overrides
    ``n_cav``. Setting both ``c_t`` and ``l`` skips synthesis and evaluates
    that network as given. ``p0``/``p1`` are the blue-detuned emission
    probabilities; unset, a Poissonian source with mean r_o * Δt is assumed.
    """

    g_om0: float = _DEV.g_om0
    f_opt: float = _DEV.f_opt
    kappa_i: float = _DEV.kappa_i
    kappa_ext: float = _DEV.kappa_ext
    f_m: float = _DEV.f_m
    gamma_i: float = _DEV.gamma_i
    k_eff_sq: float = _DEV.k_eff_sq
    n_cav: float = _DEV.n_cav
    g_om: Optional[float] = None
    c0: float = _DEV.c0
    r0: float = _DEV.r0
    temperature: float = _DEV.temperature
    j_coupling: float = _DEV.j_coupling
    z_tx: float = _DEV.z_tx
    detuning: Optional[float] = None
    topology: str = Topology.ONE_RING.value
    eta_link: float = 0.5
    eta_det: float = 0.9
    t_reset: float = 1e-6
    t_sep: Optional[float] = None
    r_l: float = 0.0
    tan_delta: float = 0.0
    c_t: Optional[float] = None
    l: Optional[float] = None
    c_self: float = 0.0
    c_ground: float = 0.0
    l_ct: float = 0.0
    self_consistent: bool = False
    p0: Optional[float] = None
    p1: Optional[float] = None

    def device(self) -> DeviceParams:
        n_cav = self.n_cav if self.g_om is None else (self.g_om / self.g_om0) ** 2
        return DeviceParams(
            g_om0=self.g_om0, f_opt=self.f_opt, kappa_i=self.kappa_i,
            kappa_ext=self.kappa_ext, f_m=self.f_m, gamma_i=self.gamma_i,
            k_eff_sq=self.k_eff_sq, n_cav=n_cav, c0=self.c0, r0=self.r0,
            temperature=self.temperature, j_coupling=self.j_coupling,
            z_tx=self.z_tx, detuning=self.detuning,
        )

    def protocol(self, protocol) -> ProtocolConfig:
        return ProtocolConfig(protocol=protocol, eta_link=self.eta_link, eta_det=self.eta_det,
                              t_reset=self.t_reset, t_sep=self.t_sep, topology=self.topology)

    def parasitics(self) -> Optional[ParasiticSpec]:
        if self.c_self == 0 and self.c_ground == 0 and self.l_ct == 0:
            return None
        return ParasiticSpec(self.c_self, self.c_ground, self.l_ct)

    @property
    def observables_only(self) -> bool:
        return self.c_t is not None and self.l is not None

    def validate(self):
        """Raise ConfigError for values no computation could accept."""
        try:
            self.device()
            self.protocol("type_i")
            self.parasitics()
        except DomainError as exc:
            raise ConfigError(str(exc), field=exc.field) from exc
        except ValueError as exc:
            raise ConfigError(str(exc), field="topology") from exc
        for name in ("r_l", "tan_delta"):
            if getattr(self, name) < 0:
                raise ConfigError("must be non-negative", field=name)
        if (self.c_t is None) != (self.l is None):
            raise ConfigError("c_t and l must be given together", field="c_t" if self.l is None else "l")
        if self.c_t is not None and (self.c_t < 0 or not self.l > 0):
            raise ConfigError("need c_t >= 0 and l > 0", field="c_t")
        for name in ("p0", "p1"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 1:
                raise ConfigError("must lie in [0, 1]", field=name)
        if (self.p0 is None) != (self.p1 is None):
            raise ConfigError("p0 and p1 must be given together", field="p0")
        if self.p0 is not None and self.p0 + self.p1 > 1:
            raise ConfigError("p0 + p1 must not exceed 1", field="p1")
        return self

    def with_values(self, **kw) -> "RunConfig":
        return replace(self, **kw).validate()


def _split_key(key, line=None):
    """Map a suffixed key to (field, SI factor)."""
    k = key.strip().lower()
    if k in SCHEMA:
        kind = SCHEMA[k]
        if kind in UNITS:
            raise ConfigError(f"unit suffix required (e.g. {k}_{SI_SUFFIX[kind]})", line, key)
        return k, 1.0
    # longest matching field name wins, so "l_ct_nh" is l_ct and not l
    for name in sorted(SCHEMA, key=len, reverse=True):
        kind = SCHEMA[name]
        if kind in UNITS and k.startswith(name + "_"):
            unit = k[len(name) + 1:]
            if unit in UNITS[kind]:
                return name, UNITS[kind][unit]
            raise ConfigError(f"unknown unit '{unit}' for {name}; use one of "
                              f"{', '.join(UNITS[kind])}", line, key)
    raise ConfigError("unknown key", line, key)


def _convert(name, raw, factor, line=None):
    kind = SCHEMA[name]
    if kind == "str":
        return str(raw).strip().lower().replace("-", "_")
    if kind == "bool":
        if isinstance(raw, bool):
            return raw
        s = str(raw).strip().lower()
        if s in ("true", "yes", "1", "on"):
            return True
        if s in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"expected a boolean, got {raw!r}", line, name)
    if isinstance(raw, bool):
        raise ConfigError(f"expected a number, got {raw!r}", line, name)
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"expected a number, got {raw!r}", line, name) from None
    if not math.isfinite(value):
        raise ConfigError(f"value must be finite, got {raw!r}", line, name)
    return value * factor


def _build(items):
    """items: iterable of (key, raw value, line or None)."""
    values = {}
    seen = {}
    for key, raw, line in items:
        name, factor = _split_key(key, line)
        if name in seen:
            raise ConfigError(f"duplicate field (first set on line {seen[name]})"
                              if seen[name] else "duplicate field", line, key)
        seen[name] = line
        values[name] = _convert(name, raw, factor, line)
    try:
        return RunConfig(**values).validate()
    except ConfigError as exc:
        if exc.line is None and seen.get(exc.field) is not None:
            raise ConfigError(str(exc).split(": ", 1)[-1], seen[exc.field], exc.field) from exc
        raise


def parse_text(text) -> RunConfig:
    items = []
    for n, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", n)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", n)
        if not value:
            raise ConfigError("empty value", n, key)
        items.append((key, value, n))
    return _build(items)


def parse_json(text) -> RunConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict):
        raise ConfigError("top-level JSON value must be an object")
    return _build((k, v, None) for k, v in obj.items() if v is not None)


def parse(text) -> RunConfig:
    """Parse either format; JSON is recognised by a leading '{'."""
    return parse_json(text) if text.lstrip().startswith("{") else parse_text(text)


BUNDLED = {"table1": "table1.cfg", "table1_two_ring": "table1_two_ring.cfg"}


def load(path) -> RunConfig:
    """Load a config file, or a bundled one by name (``table1``, ``table1_two_ring``)."""
    if str(path) in BUNDLED:
        text = resources.files("fbarlink").joinpath("data").joinpath(BUNDLED[str(path)]).read_text()
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse(text)


def _si_key(name):
    kind = SCHEMA[name]
    return f"{name}_{SI_SUFFIX[kind]}" if kind in SI_SUFFIX else name


def echo(cfg: RunConfig) -> str:
    """Canonical text form with SI suffixes; unset optional fields are omitted."""
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, bool):
            text = "true" if v else "false"
        elif isinstance(v, float):
            text = repr(v)
        else:
            text = str(v)
        lines.append(f"{_si_key(f.name)} = {text}")
    return "\n".join(lines) + "\n"


def as_dict(cfg: RunConfig) -> dict:
    """Structured echo with the same SI-suffixed keys."""
    return {_si_key(f.name): getattr(cfg, f.name) for f in fields(cfg)
            if getattr(cfg, f.name) is not None}
