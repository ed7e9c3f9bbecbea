"""Modified Butterworth-van Dyke (mBVD) model of the piezo-mechanical element.

All frequencies and rates at the API boundary are ordinary frequencies in Hz.
Conversion to angular frequency happens inside each formula that needs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi

# Stands in for an infinite static resistance (plain BVD model).
R0_OPEN = 1e12


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values (exact in the 2019 SI)."""

    planck_reduced: float = 1.054571817e-34  # J s
    boltzmann: float = 1.380649e-23  # J/K

    @property
    def planck(self) -> float:
        return TWO_PI * self.planck_reduced


CONSTANTS = PhysicalConstants()


def _positive(name, value):
    if not (value > 0) or not math.isfinite(value):
        raise DomainError(name, value, "must be strictly positive and finite")


@dataclass(frozen=True)
class MotionalBranch:
    c_m: float  # F
    l_m: float  # H
    r_m: float  # ohm

    def __post_init__(self):
        for name in ("c_m", "l_m", "r_m"):
            _positive(name, getattr(self, name))

    @property
    def f_s(self) -> float:
        """Series resonance in Hz."""
        return 1.0 / (TWO_PI * math.sqrt(self.l_m * self.c_m))

    @property
    def omega_s(self) -> float:
        return 1.0 / math.sqrt(self.l_m * self.c_m)

    @property
    def gamma(self) -> float:
        """Intrinsic mechanical linewidth in Hz, r_m / (2 pi l_m)."""
        return self.r_m / (TWO_PI * self.l_m)


@dataclass(frozen=True)
class StaticBranch:
    c0: float  # F
    r0: float = R0_OPEN  # ohm

    def __post_init__(self):
        _positive("c0", self.c0)
        _positive("r0", self.r0)


@dataclass(frozen=True)
class DeviceParams:
    """Physical inputs of one transducer.

    ``detuning`` is the signed pump-cavity detuning in Hz. ``None`` selects the
    red-detuned operating point, ``-f_m``, for which the upper sideband weight
    is exactly one.
    """

    g_om0: float = 400.0
    f_opt: float = 193e12
    kappa_i: float = 25e6
    kappa_ext: float = 125e6
    f_m: float = 3.285e9
    gamma_i: float = 2.6e6
    k_eff_sq: float = 4.3e-3
    n_cav: float = 6.25e8
    c0: float = 200e-15
    r0: float = 10e3
    temperature: float = 50e-3
    j_coupling: float = 1.7e9
    z_tx: float = 50.0
    detuning: Optional[float] = field(default=None)

    def __post_init__(self):
        for name in ("g_om0", "f_opt", "kappa_i", "kappa_ext", "f_m", "gamma_i",
                     "c0", "r0", "temperature", "j_coupling", "z_tx"):
            _positive(name, getattr(self, name))
        if not 0.0 < self.k_eff_sq < 1.0:
            raise DomainError("k_eff_sq", self.k_eff_sq, "must lie in (0, 1)")
        if not (self.n_cav >= 0) or not math.isfinite(self.n_cav):
            raise DomainError("n_cav", self.n_cav, "must be non-negative")
        if self.detuning is None:
            object.__setattr__(self, "detuning", -self.f_m)
        elif not math.isfinite(self.detuning):
            raise DomainError("detuning", self.detuning, "must be finite")

    @property
    def kappa_o(self) -> float:
        """Total optical linewidth (Hz)."""
        return self.kappa_i + self.kappa_ext

    @property
    def g_om(self) -> float:
        return cavity_enhanced_coupling(self.g_om0, self.n_cav)

    @property
    def branch(self) -> MotionalBranch:
        return motional_elements(self.k_eff_sq, self.c0, self.f_m, self.gamma_i)

    @property
    def static(self) -> StaticBranch:
        return StaticBranch(self.c0, self.r0)


def motional_elements(k_eff_sq, c0, f_m, gamma_m) -> MotionalBranch:
    """Motional R-L-C arm from the coupling factor and static capacitance.

    ``gamma_m`` is the intrinsic mechanical linewidth in Hz.
    """
    _positive("k_eff_sq", k_eff_sq)
    _positive("c0", c0)
    _positive("f_m", f_m)
    _positive("gamma_m", gamma_m)
    c_m = k_eff_sq * c0
    omega_m = TWO_PI * f_m
    l_m = 1.0 / (omega_m**2 * c_m)
    r_m = TWO_PI * gamma_m * l_m
    return MotionalBranch(c_m=c_m, l_m=l_m, r_m=r_m)


def admittance(branch: MotionalBranch, static: StaticBranch, f):
    """Complex admittance Y(f) in siemens; ``f`` may be a scalar or array.

    The static arm is C0 in parallel with R0, so the R0 shunt contributes a
    frequency-independent conductance 1/R0.
    """
    f_arr = np.asarray(f, dtype=float)
    if np.any(f_arr <= 0):
        raise DomainError("f", f, "must be strictly positive")
    w = TWO_PI * f_arr
    gamma_w = branch.r_m / branch.l_m
    motional = (1.0 / branch.l_m) * 1j * w / (-(w**2) + 1j * w * gamma_w + branch.omega_s**2)
    y = 1j * w * static.c0 + 1.0 / static.r0 + motional
    return y if y.ndim else complex(y)


def resonances(branch: MotionalBranch, static: StaticBranch):
    """Series and parallel resonance frequencies (Hz)."""
    f_s = branch.f_s
    f_p = f_s * math.sqrt(1.0 + branch.c_m / static.c0)
    return f_s, f_p


def keff_from_resonances(f_s, f_p):
    """Coupling factor from the series/parallel split, (f_p^2 - f_s^2) / f_p^2."""
    _positive("f_s", f_s)
    if f_p < f_s:
        raise DomainError("f_p", f_p, f"must not be below f_s={f_s!r}")
    return (f_p**2 - f_s**2) / f_p**2


def thermal_occupancy(f, temperature, constants: PhysicalConstants = CONSTANTS):
    """Bose-Einstein occupancy of a mode at ``f`` Hz and ``temperature`` K."""
    _positive("f", f)
    if not temperature > 0:
        raise DomainError("temperature", temperature, "must be strictly positive")
    x = constants.planck * f / (constants.boltzmann * temperature)
    # expm1 keeps precision at high temperature; large x underflows cleanly to 0
    return 1.0 / math.expm1(x) if x < 700 else 0.0


def cavity_enhanced_coupling(g_om0, n_cav):
    """Pump-enhanced optomechanical rate g_om0 * sqrt(n_cav), in Hz."""
    if n_cav < 0:
        raise DomainError("n_cav", n_cav, "must be non-negative")
    return g_om0 * math.sqrt(n_cav)


def loaded_acoustic_frequency(branch: MotionalBranch, c_total) -> float:
    """Acoustic resonance (Hz) pulled by an LC circuit of total capacitance
    ``c_total`` = C0 + C_T in series with the motional arm."""
    _positive("c_total", c_total)
    w2 = (1.0 / branch.l_m) * (1.0 / branch.c_m + 1.0 / c_total)
    return math.sqrt(w2) / TWO_PI
