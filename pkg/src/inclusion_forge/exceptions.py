"""Exception hierarchy shared by all modules."""


class InclusionForgeError(Exception):
    """Base class for every error raised by the package."""


class ConfigurationError(InclusionForgeError, ValueError):
    """Invalid user input: a malformed file, an inconsistent parameter, a non-univalent map."""


class NumericalError(InclusionForgeError, ArithmeticError):
    """A numerical operation could not be carried out reliably."""


class DegenerateMapError(NumericalError):
    pass


class NearSingularError(NumericalError):
    """A matrix that must be inverted has condition number above the hard threshold.

    ``which`` names the offending matrix so that callers can report it.
    """

    def __init__(self, which, cond, threshold):
        self.which = which
        self.cond = cond
        self.threshold = threshold
        super().__init__(f"{which} is near-singular (cond ~ {cond:.3e} > {threshold:.1e})")


class RecursionInconsistencyError(NumericalError):
    pass


class NonRealInterfaceError(NumericalError):
    pass


class InversionError(NumericalError):
    """Newton inversion of the conformal map failed for some points."""


class ConvergenceError(InclusionForgeError):
    pass
