"""AST node definitions.

Spans are carried for diagnostics and hint anchoring but excluded from
structural equality, so two parses of differently laid out sources compare
equal when their shapes match.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..spans import Span

_NOSPAN = Span(0, 0, 0, 0)


def _span_field():
    return field(default=_NOSPAN, compare=False, repr=False)


# --- expressions ----------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    text: str
    span: Span = _span_field()


@dataclass(frozen=True)
class FloatLit:
    text: str
    span: Span = _span_field()


@dataclass(frozen=True)
class CharLit:
    text: str  # verbatim, quotes included
    span: Span = _span_field()


@dataclass(frozen=True)
class StringLit:
    text: str  # verbatim, quotes included
    span: Span = _span_field()


@dataclass(frozen=True)
class Ident:
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class Unary:
    op: str  # "-", "+", "!", "~", "*", "&"
    operand: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class Assign:
    op: str  # "=", "+=", ...
    target: "Expr"
    value: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class Index:
    base: "Expr"
    index: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class PreIncDec:
    op: str  # "++" or "--"
    operand: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class PostIncDec:
    op: str
    operand: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class Ternary:
    cond: "Expr"
    then: "Expr"
    other: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class InitList:
    items: tuple["Expr", ...]
    span: Span = _span_field()


Expr = Union[
    IntLit, FloatLit, CharLit, StringLit, Ident, Unary, Binary, Assign,
    Call, Index, PreIncDec, PostIncDec, Ternary, InitList,
]


# --- statements -----------------------------------------------------------

@dataclass(frozen=True)
class Declarator:
    name: str
    pointer: int = 0
    dims: tuple[Optional[Expr], ...] = ()
    init: Optional[Expr] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Declaration:
    base_type: str
    declarators: tuple[Declarator, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Stmt"
    other: Optional["Stmt"] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: "Stmt"
    span: Span = _span_field()


@dataclass(frozen=True)
class DoWhile:
    body: "Stmt"
    cond: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class For:
    init: Optional["Stmt"]  # Declaration or ExprStmt
    cond: Optional[Expr]
    step: Optional[Expr]
    body: "Stmt"
    span: Span = _span_field()


@dataclass(frozen=True)
class Return:
    value: Optional[Expr] = None
    span: Span = _span_field()


@dataclass(frozen=True)
class Block:
    stmts: tuple["Stmt", ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class Break:
    span: Span = _span_field()


@dataclass(frozen=True)
class Continue:
    span: Span = _span_field()


@dataclass(frozen=True)
class Seq:
    """Statement splice produced by construct normalization.

    Linearizes to its children back to back with no block markers, unlike
    Block. Never produced by the parser.
    """

    stmts: tuple["Stmt", ...]
    span: Span = _span_field()


Stmt = Union[
    Declaration, ExprStmt, If, While, DoWhile, For, Return, Block,
    Break, Continue, Seq,
]


# --- top level ------------------------------------------------------------

@dataclass(frozen=True)
class Param:
    base_type: str
    name: str
    pointer: int = 0
    dims: tuple[Optional[Expr], ...] = ()
    span: Span = _span_field()


@dataclass(frozen=True)
class FunctionDef:
    name: str
    return_type: str
    params: tuple[Param, ...]
    body: tuple[Stmt, ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class Ast:
    functions: tuple[FunctionDef, ...]
    globals: tuple[Declaration, ...]
    no_main: bool = False
