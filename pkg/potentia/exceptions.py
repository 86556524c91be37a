"""
Error hierarchy

Every error raised on purpose carries the exit code the CLI reports for it.
"""
from typing import Any, Dict


class PotentiaError(Exception):
    """Base error; `detail` is the human-readable message, `context` extra data."""

    exit_code: int = 1
    kind: str = "error"

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "detail": self.detail, **self.context}


class InvalidInputError(PotentiaError, ValueError):
    exit_code = 2
    kind = "invalid_input"


class ComputationRefusedError(PotentiaError):
    exit_code = 3
    kind = "refused"


class PreconditionError(ComputationRefusedError):
    kind = "precondition"


class ConvergenceError(ComputationRefusedError):
    """Iteration gave up; keeps the best iterate seen and its residual."""

    kind = "no_convergence"

    def __init__(self, detail: str, best: Any = None, residual: float = float("nan"), **context: Any):
        super().__init__(detail, **context)
        self.best = best
        self.residual = residual

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["residual"] = self.residual
        return data


class ConsistencyError(ComputationRefusedError):
    kind = "inconsistent"


class BudgetExceededError(PotentiaError):
    exit_code = 4
    kind = "budget_exceeded"
