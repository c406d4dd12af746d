"""Exceptions raised by skewprod."""


class SkewProductError(Exception):
    """Root of every error raised by the library."""


class IncompatibleBasisError(SkewProductError, ValueError):
    def __init__(self, msg="incompatible symbol bases"):
        super().__init__(msg)


class ContextMismatchError(SkewProductError, ValueError):
    """Elements, automorphisms or crossed elements from different algebra contexts were combined."""


class UnsupportedCocycleError(SkewProductError):
    """No closed form exists for this cocycle shape. Use the numerical oracle instead."""

    def __init__(self, msg):
        super().__init__(f"{msg}; run the nullspace oracle (solve --oracle) for this system")


class HypothesisViolation(SkewProductError):
    """The base system does not satisfy the (unique) ergodicity hypotheses the theorems rely on."""


class InvalidSystemError(SkewProductError):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class ConfigError(SkewProductError, ValueError):
    pass


class DomainError(SkewProductError, ValueError):
    """A numeric argument is outside its admissible range."""
