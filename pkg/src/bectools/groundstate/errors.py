"""
Exception types raised by the solver stack.
"""


class GroundStateError(Exception):
    """
    Base class for errors raised by bectools.groundstate
    """


class ConfigError(GroundStateError, ValueError):
    def __init__(self, message, field=None):
        """
        Invalid domain, grid, problem or run configuration.

        :param message: description of the problem
        :type message: str
        :param field: dotted configuration key the error refers to
        :type field: str | None
        """
        super().__init__(message)
        self.field = field

    def __str__(self):
        message = super().__str__()
        if self.field:
            return f"{self.field}: {message}"
        return message


class FlavorMismatchError(GroundStateError, ValueError):
    """
    A flavor specific evaluator was called on a problem of another flavor.
    """


class NumericalOverflowError(GroundStateError, FloatingPointError):
    def __init__(self, message, iterate=None):
        """
        Energy or gradient evaluation produced a non finite value.

        :param message: description
        :type message: str
        :param iterate: the state that was being evaluated
        :type iterate: numpy.ndarray | None
        """
        super().__init__(message)
        self.iterate = iterate


class StepFailureError(GroundStateError, RuntimeError):
    def __init__(self, message, residual=None):
        """
        The curvilinear line search ran out of backtracking steps.

        :param message: description
        :type message: str
        :param residual: norm of the projected gradient at the failing iterate
        :type residual: float | None
        """
        super().__init__(message)
        self.residual = residual


class GridDataError(GroundStateError, OSError):
    """
    A grid-data file is malformed or does not match the problem.
    """
