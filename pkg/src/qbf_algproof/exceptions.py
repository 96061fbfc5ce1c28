from typing import Any


class QalgError(Exception):
    """Base class of every clean rejection raised by `qbf_algproof`."""


## Parsing and data model
class ParseError(QalgError, ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.line = line
        self.column = column
        _where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{_where}{message}")


class TautologyError(QalgError):
    def __init__(self, clause: Any) -> None:
        self.clause = clause
        super().__init__(f"Clause {clause} contains a variable in both polarities!")


class UndeclaredVariableError(QalgError):
    def __init__(self, var: int) -> None:
        self.var = var
        super().__init__(f"Variable {var} is not declared in the quantifier prefix!")


class UnassignedVariableError(QalgError):
    def __init__(self, var: int) -> None:
        self.var = var
        super().__init__(f"Variable {var} has no value in the assignment!")


class InvalidAxiomIdError(QalgError):
    def __init__(self, axiom_id: Any) -> None:
        self.axiom_id = axiom_id
        super().__init__(f"Axiom '{axiom_id}' is not valid for this formula!")


class NotExistentialError(QalgError):
    def __init__(self, var: int) -> None:
        self.var = var
        super().__init__(f"Variable {var} is not existentially quantified!")


class InvalidSizeError(QalgError, ValueError):
    def __init__(self, n: int) -> None:
        self.n = n
        super().__init__(f"Instance size {n} is invalid, must be >= 1!")


class TooLargeError(QalgError):
    def __init__(self, what: str, size: int, cap: int) -> None:
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"Too large: {what} is {size}, cap is {cap}!")


class NotInIdealError(QalgError):
    def __init__(self, assignment: dict[int, int]) -> None:
        self.assignment = dict(assignment)
        super().__init__(
            f"Polynomial does not vanish on satisfying assignment {self.assignment}!"
        )


## Certificates
class CertificateError(QalgError):
    pass


class IdentityViolatedError(CertificateError):
    def __init__(self, residual: Any) -> None:
        self.residual = residual
        super().__init__(f"Certificate identity violated, residual: {residual}")


class SideConditionViolatedError(CertificateError):
    def __init__(self, universal: int, offending: int) -> None:
        self.universal = universal
        self.offending = offending
        super().__init__(
            f"Multiplier of universal {universal} mentions variable {offending}, "
            "which is not strictly left of it!"
        )


class RemainderShapeViolatedError(CertificateError):
    pass


class NotQSAError(CertificateError):
    pass


class NotQSOSError(CertificateError):
    pass


class NotVerifiedError(CertificateError):
    pass


## Score game
class GameError(QalgError):
    pass


class NotWinningError(GameError):
    def __init__(self, counterexample: dict[int, int] | None, message: str = "") -> None:
        self.counterexample = None if counterexample is None else dict(counterexample)
        super().__init__(
            message or f"Strategy is not winning, counterexample: {self.counterexample}"
        )


class NotWinningEvalError(GameError):
    def __init__(self, assignment: dict[int, int]) -> None:
        self.assignment = dict(assignment)
        super().__init__(
            f"Universal strategy is not winning, play {self.assignment} satisfies the matrix!"
        )


class HypothesisViolatedError(GameError):
    def __init__(self, count: int, bound: Any) -> None:
        self.count = count
        self.bound = bound
        super().__init__(
            f"{count} high-degree monomials, the reduction needs fewer than {bound}!"
        )


class NoSatisfyingAssignmentError(GameError):
    pass


## Proof traces
class ProofError(QalgError):
    pass


class InvalidStepError(ProofError):
    def __init__(self, index: int, reason: str) -> None:
        self.index = index
        self.reason = reason
        super().__init__(f"Step {index} is invalid: {reason}")


class FinalConfigViolationError(ProofError):
    pass


class NotRefutedError(ProofError):
    def __init__(self, derived: Any) -> None:
        self.derived = derived
        super().__init__(f"Proof does not end in a refutation, last line: {derived}")


## Search and pseudo-expectations
class SearchError(QalgError):
    pass


class NoneFoundError(SearchError):
    pass


class PexpError(QalgError):
    pass


class QdegTooHighError(PexpError):
    def __init__(self, qdeg: int, n: int) -> None:
        self.qdeg = qdeg
        self.n = n
        super().__init__(f"Candidate has qdeg {qdeg}, the construction needs qdeg < {n}!")


__all__ = [
    "QalgError",
    "ParseError",
    "TautologyError",
    "UndeclaredVariableError",
    "UnassignedVariableError",
    "InvalidAxiomIdError",
    "NotExistentialError",
    "InvalidSizeError",
    "TooLargeError",
    "NotInIdealError",
    "CertificateError",
    "IdentityViolatedError",
    "SideConditionViolatedError",
    "RemainderShapeViolatedError",
    "NotQSAError",
    "NotQSOSError",
    "NotVerifiedError",
    "GameError",
    "NotWinningError",
    "NotWinningEvalError",
    "HypothesisViolatedError",
    "NoSatisfyingAssignmentError",
    "ProofError",
    "InvalidStepError",
    "FinalConfigViolationError",
    "NotRefutedError",
    "SearchError",
    "NoneFoundError",
    "PexpError",
    "QdegTooHighError",
]
