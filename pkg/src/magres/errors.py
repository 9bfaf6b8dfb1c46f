"""Exception hierarchy.

ValidationError marks bad user input (configs, parameters); NumericalError
marks a computation that ran but cannot be trusted (truncation unsafe,
ambiguous pairing, flat band, solver failure). The CLI maps the former to
exit code 2 and the latter to exit code 3.
"""


class MagresError(Exception):
    pass


class ValidationError(MagresError, ValueError):
    """Malformed parameters or configuration."""


class NumericalError(MagresError, RuntimeError):
    """A numerical result failed an internal consistency requirement."""


class TruncationError(NumericalError):
    """Domain truncation too aggressive for the requested spectral window."""


class FlatBandError(NumericalError):
    """Band function is flat within tolerance; minimizer ill-posed."""


class MultipleMinimaError(NumericalError):
    """Coarse scan found several local minima where one was asserted."""


class AmbiguousPairingError(NumericalError):
    """Two or more candidates within pairing tolerance of one eigenvalue."""


class DecayCheckError(NumericalError):
    """A weighted decay integral failed its stability check."""
