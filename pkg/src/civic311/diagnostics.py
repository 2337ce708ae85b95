"""Positioned diagnostics shared by the Turtle reader and the query parser."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True, slots=True)
class ParseDiagnostic:
    """One problem found in an input document.

    line and column are 1-based and point at the first offending
    character, not at the start of the statement containing it.
    """

    line: int
    column: int
    message: str
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class ParseError(Exception):
    """Input rejected; carries every diagnostic collected before giving up."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        if not diagnostics:
            raise ValueError("ParseError requires at least one diagnostic")
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))
