"""Equivalent-circuit design and heralding analysis for FBAR
piezo-optomechanical microwave-optical transducers."""

from .circuit import (
    CONSTANTS,
    DeviceParams,
    MotionalBranch,
    PhysicalConstants,
    StaticBranch,
    admittance,
    keff_from_resonances,
    motional_elements,
    resonances,
    thermal_occupancy,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateLoadingError,
    DomainError,
    FbarLinkError,
    InsufficientStatisticsError,
    ProbabilityConsistencyError,
    UnphysicalCapacitanceError,
)
from .fom import FiguresOfMerit, figures_of_merit
from .herald import Protocol, ProtocolConfig, ProtocolOutcome
from .matching import MatchingNetwork, MatchingObjective, synthesize, synthesize_selfconsistent
from .optomech import OptomechLoading, Topology, device_loading

__version__ = "0.1.0"
