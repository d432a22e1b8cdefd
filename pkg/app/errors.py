"""Exceptions raised by the simulation services and the pipeline language."""
from typing import Optional, Tuple


class LabError(Exception):
    """Base class for every error raised by unruh-filter-lab."""


class DimensionMismatchError(LabError, ValueError):
    """Matrix shape and tensor-factor dimensions disagree."""


class NotHermitianError(LabError, ValueError):
    """A matrix expected to be Hermitian deviates beyond tolerance."""


class ConvergenceError(LabError, RuntimeError):
    """The Jacobi eigensolver exhausted its sweep budget."""


class ParameterRangeError(LabError, ValueError):
    """A physical parameter (mu, r, kappa, Q, ...) is outside its domain."""


class InvalidKrausSetError(LabError, ValueError):
    """Kraus operators break the completeness or contraction rule of their mode."""


class FilteredToZeroError(LabError, ValueError):
    """Post-selection success probability is numerically zero."""

    def __init__(self, probability: float):
        super().__init__(f"filter success probability {probability:.3g} is numerically zero")
        self.probability = probability


class PipelineError(LabError, ValueError):
    """Error located in pipeline source text."""

    def __init__(
        self,
        message: str,
        offset: int,
        expected: Tuple[str, ...] = (),
        lexeme: Optional[str] = None,
    ):
        self.message = message
        self.offset = offset
        self.expected = tuple(expected)
        self.lexeme = lexeme
        super().__init__(self._render())

    def _render(self) -> str:
        text = f"{self.message} at byte {self.offset}"
        if self.lexeme is not None:
            text += f" (found {self.lexeme!r})"
        if self.expected:
            text += f"; expected one of: {', '.join(self.expected)}"
        return text

    def to_dict(self) -> dict:
        return {
            "error": self.message,
            "offset": self.offset,
            "expected": list(self.expected),
            "lexeme": self.lexeme,
        }


class PipelineSyntaxError(PipelineError):
    """Malformed pipeline text."""


class PipelineSemanticError(PipelineError):
    """Well-formed pipeline with an unknown stage, bad argument or bad ordering."""


class PipelineEvalError(PipelineError):
    """A stage failed while the pipeline was being evaluated."""


class OutputError(LabError, OSError):
    """Writing or reading a result file failed."""

    def __init__(self, path, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
