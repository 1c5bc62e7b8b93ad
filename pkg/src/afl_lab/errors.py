"""Exception hierarchy shared by all afl_lab modules."""


class VerifierError(Exception):
    """Base class for all errors raised by this package."""


class InputError(VerifierError):
    """Bad arguments or violated preconditions."""


class InvariantError(VerifierError):
    """A certification check failed; the message names the broken axiom."""


class ForgeError(VerifierError):
    """Instance construction exhausted its retry budget."""


class CrossCheckError(VerifierError):
    """Two independent computations of the same quantity disagreed.

    This never indicates bad input: it flags a bug in the code or in the
    formulas it implements, so callers must not swallow it.
    """
