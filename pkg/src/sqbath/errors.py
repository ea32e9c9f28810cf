"""Exception hierarchy shared by every module."""


class SqbathError(Exception):
    """Base class for all library errors."""


class InvariantError(SqbathError, ValueError):
    """A value violates a documented invariant or precondition."""


class UnknownLabelError(InvariantError, KeyError):
    """A level label is not part of the Hilbert space."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class NumericalError(SqbathError, RuntimeError):
    """A numerical routine produced a result that fails its post-conditions."""


class StepSizeError(NumericalError):
    """A stochastic integrator step is too coarse for the requested model."""
