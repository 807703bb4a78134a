"""Source positions and diagnostics shared by the parser and downstream stages."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open region of the original source, 1-based lines and columns."""

    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self):
        return f"{self.line}:{self.col}"

    def merge(self, other: "Span") -> "Span":
        lo = min((self.line, self.col), (other.line, other.col))
        hi = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return Span(lo[0], lo[1], hi[0], hi[1])


@dataclass(frozen=True)
class Diagnostic:
    """A problem a human can act on: what went wrong and where."""

    message: str
    span: Span
    kind: str = "error"

    def __str__(self):
        return f"{self.span}: {self.message}"


class SourceError(Exception):
    """Base for errors that carry a source location."""

    def __init__(self, message: str, span: Span):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span

    def diagnostic(self) -> Diagnostic:
        return Diagnostic(self.message, self.span)


class CSyntaxError(SourceError):
    """Token stream did not match the grammar."""

    def __init__(self, span: Span, expected: str, found: str = ""):
        detail = f"expected {expected}"
        if found:
            detail += f", found {found}"
        super().__init__(detail, span)
        self.expected = expected
        self.found = found


class UnsupportedConstruct(SourceError):
    """Syntactically valid C that this subset deliberately rejects."""

    def __init__(self, span: Span, construct: str):
        super().__init__(f"unsupported construct: {construct}", span)
        self.construct = construct


class PreprocessError(SourceError):
    """Raised for comment/preprocessor problems, e.g. an unterminated comment."""
