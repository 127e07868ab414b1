# errors.py

from typing import Optional


class PrincipalizationError(Exception):
    """Root of every error raised by the engine, the oracle and the file layer."""


# Input errors

class InputError(PrincipalizationError, ValueError):
    pass


class LengthMismatch(InputError):
    pass


class NegativeCoefficient(InputError):
    pass


class EmptyNerveSingleton(InputError):
    pass


class TooFewDivisors(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class EqualIndices(InputError):
    pass


class EmptyCenter(InputError):
    pass


class InstanceFormatError(InputError):
    """Malformed instance or trace file. `line` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# Engine errors

class EngineError(PrincipalizationError):
    pass


class AlreadyPrincipal(EngineError):
    pass


class InvariantViolation(EngineError):
    pass


class StepLimitExceeded(EngineError):
    pass


# Oracle errors

class OracleError(PrincipalizationError):
    pass


class CenterAbsent(OracleError):
    pass


class NonSimpleEquation(OracleError):
    pass


class EmptyIdeal(OracleError):
    pass


class ReplayMismatch(OracleError):
    pass


class NotPrincipalAtLeaf(OracleError):
    pass


class LeafLimitExceeded(OracleError):
    pass


class OracleScopeError(OracleError, ValueError):
    pass
