"""C subset front end: preprocessing strip, lexer, parser, debug printers."""

from .nodes import (  # noqa: F401
    Assign, Ast, Binary, Block, Break, Call, CharLit, Continue, Declaration,
    Declarator, DoWhile, Expr, ExprStmt, FloatLit, For, FunctionDef, Ident,
    If, Index, InitList, IntLit, Param, PostIncDec, PreIncDec, Return, Seq,
    Stmt, StringLit, Ternary, Unary, While,
)
from .parser import parse  # noqa: F401
from .preprocess import SourceUnit, strip_preprocessor  # noqa: F401
from .printing import dump, pretty  # noqa: F401
