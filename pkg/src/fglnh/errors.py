"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class FGLNHError(Exception):
    """Base class for all errors raised by fglnh."""


class InputError(FGLNHError):
    """Bad user input: malformed specs, unknown names, rejected laws."""


class InternalInconsistency(FGLNHError):
    """A computation produced something the mathematics forbids."""


class MismatchedRings(FGLNHError, ValueError):
    pass


class MismatchedArity(FGLNHError, ValueError):
    pass


class NotInvertible(FGLNHError, ArithmeticError):
    pass


class NotDegreeZero(FGLNHError, ArithmeticError):
    pass


class NotAUnit(FGLNHError, ArithmeticError):
    pass


class BadConstantTerm(FGLNHError, ArithmeticError):
    pass


class BeyondValidOrder(FGLNHError, ValueError):
    pass


class NonzeroConstantTerm(FGLNHError, ValueError):
    pass


class IndexOutOfRange(FGLNHError, IndexError):
    pass


class NotDivisible(InternalInconsistency, ArithmeticError):
    pass


class TruncationExhausted(InternalInconsistency):
    pass


class NoDependency(InternalInconsistency):
    pass


class ParseError(InputError, ValueError):
    pass


class UnknownName(InputError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class NotSymmetric(InputError, ValueError):
    pass


class GradingViolation(InputError):
    pass


class AxiomViolation(InputError):
    """An FGL axiom fails; carries the axiom name and lowest failing degree."""

    def __init__(self, axiom: str, degree: int | None, detail: str = ""):
        self.axiom = axiom
        self.degree = degree
        msg = f"axiom '{axiom}' fails"
        if degree is not None:
            msg += f" at degree {degree}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
