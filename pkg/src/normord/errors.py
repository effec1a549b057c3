"""Exception hierarchy.

Three families map onto the CLI exit-code contract:

* :class:`ParseError` and its subclasses are usage errors (exit 1);
* :class:`PreconditionError` and its subclasses are violated mathematical
  preconditions (exit 2);
* :class:`VerificationFailure` means an identity did not hold (exit 3).
"""


class NormordError(Exception):
    """Base class for every error raised by this package."""


class ParseError(NormordError, ValueError):
    pass


class ExprSyntaxError(ParseError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class MultipleVariables(ParseError):
    pass


class PreconditionError(NormordError, ValueError):
    pass


class DivisionByZeroConstantTerm(PreconditionError, ZeroDivisionError):
    pass


class PoleAtExpansionPoint(DivisionByZeroConstantTerm):
    pass


class VariableMismatch(PreconditionError):
    pass


class NonzeroInnerConstantTerm(PreconditionError):
    pass


class NotReversible(PreconditionError):
    pass


class ConstantTermConstraintViolated(PreconditionError):
    pass


class LogArgumentNotOne(ConstantTermConstraintViolated):
    pass


class SqrtArgumentNotOne(ConstantTermConstraintViolated):
    pass


class PowArgumentNotOne(ConstantTermConstraintViolated):
    pass


class ExpArgumentNotZero(ConstantTermConstraintViolated):
    pass


class NotAPolynomial(PreconditionError):
    pass


class InsufficientInputOrder(PreconditionError):
    pass


class UnsupportedParameters(PreconditionError):
    pass


class DegenerateB(PreconditionError):
    pass


class TruncationBudgetExceeded(PreconditionError):
    pass


class VerificationFailure(NormordError):
    pass
