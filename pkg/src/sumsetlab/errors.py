"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SumsetLabError(Exception):
    """Base class for all library errors."""


class CapExceeded(SumsetLabError):
    def __init__(self, size: int, cap: int, what: str = "set") -> None:
        super().__init__(f"{what} size {size} exceeds element cap {cap}")
        self.size = size
        self.cap = cap


class DivisionByZero(SumsetLabError, ZeroDivisionError):
    pass


class ParseError(SumsetLabError, ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None) -> None:
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.source = source


class DegenerateInput(SumsetLabError, ValueError):
    pass


class BudgetExceeded(SumsetLabError):
    pass


class ZeroPolynomial(SumsetLabError, ValueError):
    pass


class UnsupportedDegree(SumsetLabError):
    pass


class TableVerificationError(SumsetLabError):
    pass


class EmptyGraph(SumsetLabError, ValueError):
    pass


class EmptyInput(SumsetLabError, ValueError):
    pass


class EmptySetError(SumsetLabError, ValueError):
    pass


class RetriesExhausted(SumsetLabError):
    pass


class TooSmall(SumsetLabError, ValueError):
    pass


class ZeroElement(SumsetLabError, ValueError):
    pass


class BlockMismatch(SumsetLabError, ValueError):
    pass


class Infeasible(SumsetLabError):
    pass


class HypothesisViolated(SumsetLabError):
    """The trivial-intersection hypothesis fails; ``beta`` is a nonzero common element."""

    def __init__(self, beta) -> None:
        super().__init__(f"fold difference sets intersect nontrivially (beta = {beta})")
        self.beta = beta


class StageFailed(SumsetLabError):
    def __init__(self, stage: str, reason: str, diagnostics: dict | None = None) -> None:
        super().__init__(f"stage {stage!r} failed: {reason}")
        self.stage = stage
        self.reason = reason
        self.diagnostics = dict(diagnostics or {})


class StepBudgetExhausted(SumsetLabError):
    def __init__(self, message: str, transcript=None) -> None:
        super().__init__(message)
        self.transcript = transcript
