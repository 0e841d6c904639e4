"""Exception types shared across the package."""


class NonUnit(ArithmeticError):
    """Division by a dual scalar whose value part is zero (a non-unit)."""


class Unsupported(ValueError):
    """Operation needs data outside the supported exact domain.

    Typical trigger: (-1)^d for a semisimple eigenvalue d that is not a
    rational integer.
    """


class MissingSpectrum(ValueError):
    """Jordan-Chevalley decomposition requested without a declared spectrum."""


class SpectrumMismatch(ValueError):
    """Declared spectrum fails its annihilator check on a test vector."""


class TranslationMismatch(AssertionError):
    """a_{(-2+S)}|0> disagrees with the instance's declared translation."""


class RecursionBudgetExceeded(RuntimeError):
    """Straightening guard tripped; carries the offending (letter, mode, word)."""

    def __init__(self, witness):
        super().__init__(f"straightening budget exceeded at {witness!r}")
        self.witness = witness


class NonTermination(RecursionBudgetExceeded):
    """Mode-recursion bound exceeded; carries the offending indices."""


class TruncationUnderflow(ArithmeticError):
    """A lambda-series window shrank below the requested order."""

    def __init__(self, requested, achieved):
        super().__init__(f"series reliable only to order {achieved}, need {requested}")
        self.requested = requested
        self.achieved = achieved


class NotCommutativeModEps(ValueError):
    """Poisson-limit precondition failed; carries a witness tuple."""

    def __init__(self, witness):
        super().__init__(f"value part survives mod eps at {witness!r}")
        self.witness = witness


class NonSymmetric(ValueError):
    """A matrix that must be symmetric is not."""


class OracleDefect(AssertionError):
    """Row reduction could not certify the candidate normal basis."""
