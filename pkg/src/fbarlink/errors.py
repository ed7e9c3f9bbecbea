"""Exception hierarchy shared by every fbarlink module."""


class FbarLinkError(Exception):
    """Base class for all package errors."""


class DomainError(FbarLinkError, ValueError):
    """An input lies outside the domain of a formula."""

    def __init__(self, field, value, requirement):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r}: {requirement}")


class UnphysicalCapacitanceError(FbarLinkError):
    """Matching synthesis produced a negative capacitance.

    ``g_om`` is the cavity-enhanced optomechanical rate (Hz) of the offending
    operating point, when known.
    """

    def __init__(self, c_t, g_om=None, detail=""):
        self.c_t = c_t
        self.g_om = g_om
        msg = f"negative matching capacitance C_T = {c_t * 1e15:.6g} fF"
        if g_om is not None:
            msg += f" at g_OM = {g_om / 1e6:.6g} MHz"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DegenerateLoadingError(FbarLinkError):
    """Parallel optomechanical legs sum to a non-positive resistance."""


class ConvergenceError(FbarLinkError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, iterations, last_change):
        self.iterations = iterations
        self.last_change = last_change
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(last relative change {last_change:.3e})"
        )


class ProbabilityConsistencyError(FbarLinkError):
    """A computed probability left [0, 1] by more than rounding noise."""


class InsufficientStatisticsError(FbarLinkError):
    """A Monte Carlo run produced no heralds."""


class ConfigError(FbarLinkError):
    """Malformed configuration file or value."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
