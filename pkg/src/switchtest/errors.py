"""Exception types shared across the package.

Everything derives from SwitchTestError so callers can catch the whole
family, and from ValueError (or RuntimeError for internal checks) so the
functions still behave like ordinary numpy-flavoured Python.
"""


class SwitchTestError(Exception):
    """Base class for all errors raised by this package."""


class NonSquareMatrix(SwitchTestError, ValueError):
    """A matrix operation required a square matrix."""


class DimensionMismatch(SwitchTestError, ValueError):
    """Operands act on different Hilbert space dimensions."""


class BadDimension(SwitchTestError, ValueError):
    """A dimension is out of the supported range for the requested object."""


class InvalidState(SwitchTestError, ValueError):
    """A vector or density matrix failed state validation."""


class NotPure(SwitchTestError, ValueError):
    """A mixed state was supplied where a pure state is required."""


class OutOfRange(SwitchTestError, ValueError):
    """A numeric argument lies outside its documented range."""


class EmptyInput(SwitchTestError, ValueError):
    """A probe set or value list that must be nonempty was empty."""


class UnknownGate(SwitchTestError, ValueError):
    """A gate token could not be resolved to a known operator."""


class BadParameter(SwitchTestError, ValueError):
    """A gate or protocol parameter is malformed."""


class NotSamplable(SwitchTestError, ValueError):
    """A probe specification has no physical sampling interpretation."""


class ConfigError(SwitchTestError, ValueError):
    """An experiment configuration failed validation."""


class InternalConsistency(SwitchTestError, RuntimeError):
    """A quantity violated an invariant that should hold up to roundoff."""
