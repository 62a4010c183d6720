"""Exception hierarchy for the package."""


class PadicCFError(Exception):
    """Base class for all library errors."""


class InvalidPrime(PadicCFError):
    """A modulus that is not a prime number."""


class InvalidInput(PadicCFError):
    """An argument outside an operation's domain."""


class InvalidState(PadicCFError):
    """An integer pair that is not a valid quadratic Hensel state."""


class InvalidAlgorithm(PadicCFError):
    """An algorithm id not accepted by the requested operation."""


class ReduciblePolynomial(PadicCFError):
    """A quadratic polynomial that factors over the rationals."""


class NoRootInQp(PadicCFError):
    """A quadratic polynomial whose roots do not lie in Q_p."""


class AmbiguousSelector(PadicCFError):
    """A root selector that fails to pick exactly one root."""


class ZeroInput(PadicCFError):
    """Zero fed to a step that expects a nonzero element."""


class MalformedExpansion(PadicCFError):
    """A continued fraction object violating its own invariants."""


class CapExceeded(PadicCFError):
    """An iteration that did not settle within its step budget."""

    def __init__(self, message, cap=None, last=None):
        super().__init__(message)
        self.cap = cap
        self.last = last


class VerificationFailed(PadicCFError):
    """An exact identity that failed to hold."""

    def __init__(self, message, index=None, predicted=None, computed=None):
        super().__init__(message)
        self.index = index
        self.predicted = predicted
        self.computed = computed
