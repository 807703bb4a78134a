"""Directive and comment removal ahead of lexing.

Directives and comments are blanked out in place (newlines kept), so every
surviving character sits at its original line and column. That keeps all
span bookkeeping downstream trivially correct.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..spans import PreprocessError, Span


@dataclass
class SourceUnit:
    """A named piece of C source text."""

    name: str
    text: str


def strip_preprocessor(unit: SourceUnit) -> SourceUnit:
    """Blank out #-directives and comments, preserving offsets.

    Returns a new SourceUnit whose text has identical length and line
    structure; removed regions become spaces. Raises PreprocessError for an
    unterminated block comment.
    """
    src = unit.text
    out = list(src)
    i = 0
    n = len(src)
    line = 1
    col = 1
    at_line_start = True

    def blank(j):
        if out[j] not in "\n":
            out[j] = " "

    while i < n:
        c = src[i]
        if c == "\n":
            line += 1
            col = 1
            at_line_start = True
            i += 1
            continue

        if c == "/" and i + 1 < n and src[i + 1] == "*":
            open_span = Span(line, col, line, col + 2)
            j = i
            while j + 1 < n and not (src[j] == "*" and src[j + 1] == "/"):
                if src[j] == "\n":
                    line += 1
                    col = 0
                blank(j)
                j += 1
                col += 1
            if j + 1 >= n:
                raise PreprocessError("unterminated block comment", open_span)
            blank(j)
            blank(j + 1)
            i = j + 2
            col += 2
            at_line_start = False
            continue

        if c == "/" and i + 1 < n and src[i + 1] == "/":
            while i < n and src[i] != "\n":
                blank(i)
                i += 1
                col += 1
            continue

        if at_line_start and c == "#":
            # Directive runs to end of line; backslash continuations joined.
            while i < n:
                if src[i] == "\n":
                    if src[i - 1] == "\\":
                        line += 1
                        col = 1
                        i += 1
                        continue
                    break
                blank(i)
                i += 1
                col += 1
            continue

        if c == '"' or c == "'":
            quote = c
            i += 1
            col += 1
            while i < n and src[i] != quote:
                if src[i] == "\\" and i + 1 < n:
                    i += 2
                    col += 2
                else:
                    if src[i] == "\n":
                        line += 1
                        col = 0
                    i += 1
                    col += 1
            i += 1
            col += 1
            at_line_start = False
            continue

        if not c.isspace():
            at_line_start = False
        i += 1
        col += 1

    return SourceUnit(unit.name, "".join(out))
