"""Turning edit scripts into student-safe hints.

A hint describes what kind of change would move the submission toward a
correct neighbor, rendered only from normalized material: construct names,
operator symbols, base types. Neighbor identifiers, literals, and source
lines never appear, and nothing at all is shown when the gap is too large
to reveal without handing over the solution.
"""

from __future__ import annotations

from dataclasses import dataclass

from .distance import Delete, DistanceResult, Insert, Replace, Weights, DEFAULT_WEIGHTS
from .linear import (
    CLOSE, CallRef, DECL, ELSE, EXPR, HDR, IF, LOOP, LinearProgram,
    LinearToken, OPEN, Operator, RET,
)

MISSING = "missing-construct"
EXTRA = "extra-construct"
CHANGED_CONDITION = "changed-condition"
CHANGED_EXPRESSION = "changed-expression"


@dataclass(frozen=True)
class Hint:
    kind: str
    function_ordinal: int
    token_index: int
    line: int
    message: str
    severity: float


@dataclass(frozen=True)
class HintSet:
    hints: tuple[Hint, ...]
    neighbor_distance: float
    suppressed: bool


@dataclass(frozen=True)
class HintConfig:
    reveal_ratio: float = 0.25  # of student token count, in add/delete units
    max_ops: int = 5
    max_hints: int = 3


DEFAULT_HINT_CONFIG = HintConfig()


def _operator_phrase(atoms) -> str:
    ops = []
    has_call = False
    for a in atoms or ():
        if isinstance(a, Operator) and a.symbol not in ops:
            ops.append(a.symbol)
        elif isinstance(a, CallRef):
            has_call = True
    parts = []
    if ops:
        parts.append("using " + ", ".join(ops))
    if has_call:
        parts.append("with a function call")
    return " ".join(parts)


def _token_phrase(t: LinearToken) -> str:
    """Describe a normalized token without leaking neighbor content."""
    if t.kind == IF:
        body = _operator_phrase(t.expr)
        return ("a conditional check " + body).strip()
    if t.kind == LOOP:
        body = _operator_phrase(t.expr)
        return ("a loop " + body).strip()
    if t.kind == EXPR:
        body = _operator_phrase(t.expr)
        return ("a statement " + body).strip() if body else "a statement"
    if t.kind == RET:
        body = _operator_phrase(t.expr)
        return ("a return " + body).strip()
    if t.kind == DECL:
        return f"a declaration of type {t.base_type}"
    if t.kind in (OPEN, CLOSE):
        return "a block boundary"
    if t.kind == ELSE:
        return "an else branch"
    if t.kind == HDR:
        return "a function header"
    return "a construct"


def _anchor(student_tokens, index: int) -> int:
    """Line in the student's source nearest to a token position."""
    if not student_tokens:
        return 1
    tok = student_tokens[min(index, len(student_tokens) - 1)]
    return max(tok.span.line, 1)


def script_to_hints(result: DistanceResult, student: LinearProgram,
                    w: Weights = DEFAULT_WEIGHTS) -> list[Hint]:
    """Map the program edit script onto hint records anchored in the
    student's own source."""
    hints: list[Hint] = []
    for fe in result.per_function:
        tokens = student.functions[fe.source_index].tokens
        for op in fe.script:
            line = _anchor(tokens, op.pos)
            if isinstance(op, Insert):
                hints.append(Hint(
                    MISSING, fe.source_index, op.pos, line,
                    f"{_token_phrase(op.token)} is expected near line {line}",
                    w.indel(op.token),
                ))
            elif isinstance(op, Delete):
                hints.append(Hint(
                    EXTRA, fe.source_index, op.pos, line,
                    f"{_token_phrase(op.token)} near line {line} looks unnecessary",
                    w.indel(op.token),
                ))
            else:
                assert isinstance(op, Replace)
                if op.old.kind in (IF, LOOP):
                    kind = CHANGED_CONDITION
                    what = "the condition" if op.old.kind == IF else "the loop condition"
                    expect = _operator_phrase(op.new.expr)
                    msg = f"{what} near line {line} should differ"
                    if expect:
                        msg += f": expected one {expect}"
                else:
                    kind = CHANGED_EXPRESSION
                    msg = f"{_token_phrase(op.new)} is expected near line {line}"
                hints.append(Hint(kind, fe.source_index, op.pos, line, msg, op.cost))
    hints.sort(key=lambda h: (-h.severity, h.function_ordinal, h.token_index))
    return hints


def filter_hints(hints: list[Hint], neighbor_distance: float, student_size: int,
                 config: HintConfig = DEFAULT_HINT_CONFIG,
                 w: Weights = DEFAULT_WEIGHTS) -> HintSet:
    """Suppress everything when the gap is too wide, else keep the top few.

    Suppression is monotone in the neighbor distance under a fixed config:
    once a distance is too large, any larger one is too.
    """
    budget = config.reveal_ratio * student_size * w.add_delete
    if neighbor_distance > budget or len(hints) > config.max_ops:
        return HintSet((), neighbor_distance, suppressed=True)
    return HintSet(tuple(hints[: config.max_hints]), neighbor_distance, suppressed=False)


def hintset_to_dict(hs: HintSet) -> dict:
    return {
        "suppressed": hs.suppressed,
        "neighbor_distance": hs.neighbor_distance,
        "hints": [
            {
                "kind": h.kind,
                "line": h.line,
                "message": h.message,
                "severity": h.severity,
                "function_ordinal": h.function_ordinal,
                "token_index": h.token_index,
            }
            for h in hs.hints
        ],
    }
