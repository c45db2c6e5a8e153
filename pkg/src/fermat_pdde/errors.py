"""Exception hierarchy shared by all modules."""
from __future__ import annotations

from dataclasses import dataclass


class FermatError(Exception):
    """Base class for every error raised by this package."""


@dataclass(frozen=True)
class SourceSpan:
    """Character offsets ``[start, end)`` into the parsed text."""

    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ValueError(f"invalid span {self.start}..{self.end}")

    def excerpt(self, text: str) -> str:
        return text[self.start:self.end]


class SpannedError(FermatError):
    def __init__(self, message: str, span: SourceSpan | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def render(self, text: str) -> str:
        """Message plus the offending line with a caret underline."""
        if self.span is None:
            return self.message
        line_start = text.rfind("\n", 0, self.span.start) + 1
        line_end = text.find("\n", self.span.start)
        if line_end < 0:
            line_end = len(text)
        col = self.span.start - line_start
        width = max(1, min(self.span.end, line_end) - self.span.start)
        return f"{self.message}\n  {text[line_start:line_end]}\n  {' ' * col}{'^' * width}"


class ParseError(SpannedError):
    def __init__(self, message: str, span: SourceSpan | None = None, expected=()):
        super().__init__(message, span)
        self.expected = frozenset(expected)


class OutOfRangeVariable(SpannedError):
    pass


class InadmissibleArgument(SpannedError):
    """A transcendental node got an argument outside the admissible class."""


class MissingSymbol(FermatError):
    def __init__(self, name: str):
        super().__init__(f"no value supplied for opaque symbol {name!r}")
        self.name = name


class OpaqueDerivative(FermatError):
    def __init__(self, name: str, index: int):
        super().__init__(f"opaque symbol {name!r} cannot be differentiated in z{index}")
        self.name = name
        self.index = index


class UnknownSymbolShift(FermatError):
    def __init__(self, name: str, shift):
        super().__init__(f"shift {shift} of opaque symbol {name!r} is not derivable from its rules")
        self.name = name
        self.shift = shift


class InconsistentShiftRule(FermatError):
    pass


class ExactModeUnsupported(FermatError):
    """The expression leaves the exactly decidable exponential-polynomial class."""


class InvalidFamily(FermatError):
    def __init__(self, failures):
        names = ", ".join(f.name for f in failures)
        super().__init__(f"family constraints violated: {names}")
        self.failures = list(failures)


class ParamShape(FermatError):
    pass


class ClassifierMismatch(FermatError):
    pass
