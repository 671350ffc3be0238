"""Exception hierarchy for sftpressure

Input problems subclass ValueError, numerical failures subclass
ArithmeticError, so callers can catch either family without importing
every concrete class. The CLI maps the two families to distinct exit codes.
"""


class SftPressureError(Exception):
    """Root of all errors raised by sftpressure"""


class InputError(SftPressureError, ValueError):
    """Invalid input: malformed system, potential, word or request"""


class NumericalError(SftPressureError, ArithmeticError):
    """A numerical procedure failed to produce a trustworthy answer"""


# Systems


class InvalidSystemError(InputError):
    """Adjacency data does not describe a valid subshift of finite type"""


class NonSquareError(InvalidSystemError):
    pass


class BadEntryError(InvalidSystemError):
    pass


class StrandedSymbolError(InvalidSystemError):
    """A symbol has no successor or no predecessor"""


class NotPrimitiveError(InputError):
    """The operation needs an irreducible, aperiodic system"""


class PeriodicComponentError(InputError):
    """A recurrent component is irreducible but periodic"""


# Potentials


class InvalidPotentialError(InputError):
    pass


class MissingEntryError(InvalidPotentialError):
    pass


class ExtraEntryError(InvalidPotentialError):
    pass


class NonFiniteError(InvalidPotentialError):
    pass


class DepthTooLargeError(InvalidPotentialError):
    pass


class DepthMismatchError(InvalidPotentialError):
    pass


# Words


class WordError(InputError):
    pass


class TooShortError(WordError):
    pass


class InadmissibleWordError(WordError):
    pass


# Measures, curves, phases


class UnsupportedTransitionError(InputError):
    """A Markov measure charges a transition the adjacency forbids"""


class DegenerateRangeError(InputError):
    """All chord slopes of a curve coincide"""


class OutOfRangeError(InputError):
    pass


class TooCloseToBoundaryError(InputError):
    pass


class NoCoexistenceError(InputError):
    """No two components share the maximal pressure"""


class InputFormatError(InputError):
    """A JSON document does not follow the documented schema"""


# Numerics


class NoConvergenceError(NumericalError):
    pass


class NoDecayError(NumericalError):
    pass


class DegenerateEigenvectorError(NumericalError):
    pass


class WordCountOverflowError(NumericalError, OverflowError):
    pass
