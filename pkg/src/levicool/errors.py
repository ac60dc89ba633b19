"""Exception hierarchy shared by every stage of the pipeline."""


class LevicoolError(Exception):
    """Base class for all errors raised by levicool."""

    #: short machine-readable code used in sweep tables
    code = "ERROR"


class ParameterError(LevicoolError, ValueError):
    code = "BAD_PARAMETERS"


class CalibrationError(LevicoolError, ValueError):
    code = "CALIBRATION"


class TrapDestabilizedError(LevicoolError):
    """An effective trap frequency became imaginary."""

    code = "TRAP_DESTABILIZED"


class ConvergenceError(LevicoolError):
    """The steady-state solver did not converge."""

    code = "NO_CONVERGENCE"

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class InstabilityError(LevicoolError):
    """The linearized dynamics has no stationary state."""

    code = "UNSTABLE"

    def __init__(self, message, abscissa=float("nan")):
        super().__init__(message)
        self.abscissa = abscissa


class NumericalError(LevicoolError):
    code = "NUMERICAL"


class ConfigError(LevicoolError, ValueError):
    """Configuration text could not be parsed or validated."""

    code = "CONFIG"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SweepError(LevicoolError):
    """More than half of the points of a sweep failed."""

    code = "SWEEP"

    def __init__(self, message, rows=()):
        super().__init__(message)
        self.rows = list(rows)
