"""Recursive descent parser for the C subset used in introductory courses.

Covered: scalar and array declarations of int/float/double/char (pointers
parsed but not interpreted), function definitions and calls, the usual
arithmetic/logical/relational/bitwise operators, assignment (plain and
compound), if/else, while, do-while, for, break/continue, return.

switch, goto, struct/union/enum, typedef and varargs are rejected with an
UnsupportedConstruct diagnostic rather than silently mangled.
"""

from __future__ import annotations

from ..spans import CSyntaxError, Span, UnsupportedConstruct
from .lexer import Token, tokenize
from .nodes import (
    Assign, Ast, Binary, Block, Break, Call, CharLit, Continue, Declaration,
    Declarator, DoWhile, Expr, ExprStmt, FloatLit, For, FunctionDef, Ident,
    If, Index, InitList, IntLit, Param, PostIncDec, PreIncDec, Return,
    StringLit, Ternary, Unary, While,
)
from .preprocess import SourceUnit, strip_preprocessor

TYPE_NAMES = {"int", "float", "double", "char", "void"}

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}

# Binary precedence, higher binds tighter. Comma handled separately.
BINARY_PREC = {
    "||": 1,
    "&&": 2,
    "|": 3,
    "^": 4,
    "&": 5,
    "==": 6, "!=": 6,
    "<": 7, "<=": 7, ">": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}

UNARY_OPS = {"-", "+", "!", "~", "*", "&"}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # -- token helpers ------------------------------------------------

    def peek(self, ahead=0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("punct", "keyword")

    def accept(self, text: str):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not self.at(text):
            raise CSyntaxError(tok.span, repr(text), repr(tok.text) if tok.text else "end of input")
        return self.next()

    def reject_if_unsupported(self):
        tok = self.peek()
        if tok.kind == "rejected":
            raise UnsupportedConstruct(tok.span, tok.text)

    # -- top level ----------------------------------------------------

    def parse_unit(self) -> Ast:
        functions = []
        globals_ = []
        while self.peek().kind != "eof":
            self.reject_if_unsupported()
            item = self.parse_top_item()
            if isinstance(item, FunctionDef):
                functions.append(item)
            elif item is not None:
                globals_.append(item)
        has_main = any(f.name == "main" for f in functions)
        return Ast(tuple(functions), tuple(globals_), no_main=not has_main)

    def parse_top_item(self):
        start = self.peek()
        base = self.parse_type_name()
        pointer = 0
        while self.accept("*"):
            pointer += 1
        name_tok = self.expect_ident()
        if self.at("("):
            return self.parse_function_tail(base, pointer, name_tok, start)
        # Global declaration (or prototype already excluded by '(' check).
        decl = self.parse_declaration_tail(base, pointer, name_tok, start)
        return decl

    def parse_type_name(self) -> str:
        self.reject_if_unsupported()
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in TYPE_NAMES:
            self.next()
            return tok.text
        raise CSyntaxError(tok.span, "a type name", repr(tok.text) if tok.text else "end of input")

    def expect_ident(self) -> Token:
        self.reject_if_unsupported()
        tok = self.peek()
        if tok.kind != "ident":
            raise CSyntaxError(tok.span, "an identifier", repr(tok.text) if tok.text else "end of input")
        return self.next()

    def parse_function_tail(self, base, pointer, name_tok, start):
        self.expect("(")
        params = []
        if not self.at(")"):
            if self.at("void") and self.peek(1).text == ")":
                self.next()
            else:
                while True:
                    self.reject_if_unsupported()
                    if self.at("..."):
                        raise UnsupportedConstruct(self.peek().span, "varargs")
                    pbase = self.parse_type_name()
                    pptr = 0
                    while self.accept("*"):
                        pptr += 1
                    ptok = self.expect_ident()
                    dims = []
                    while self.at("["):
                        self.next()
                        if self.at("]"):
                            dims.append(None)
                        else:
                            dims.append(self.parse_expr(allow_comma=False))
                        self.expect("]")
                    params.append(Param(pbase, ptok.text, pptr, tuple(dims), ptok.span))
                    if not self.accept(","):
                        break
        close = self.expect(")")
        if self.accept(";"):
            return None  # prototype, carries no body; definitions are what we compare
        seen = set()
        for p in params:
            if p.name in seen:
                raise CSyntaxError(p.span, "distinct parameter names", repr(p.name))
            seen.add(p.name)
        body_block = self.parse_block()
        span = start.span.merge(close.span)
        return FunctionDef(name_tok.text, base + "*" * pointer, tuple(params), body_block.stmts, span)

    # -- statements ---------------------------------------------------

    def parse_block(self) -> Block:
        open_tok = self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise CSyntaxError(self.peek().span, "'}'", "end of input")
            stmts.append(self.parse_stmt())
        close = self.expect("}")
        return Block(tuple(stmts), open_tok.span.merge(close.span))

    def parse_stmt(self):
        self.reject_if_unsupported()
        tok = self.peek()

        if self.at("{"):
            return self.parse_block()
        if tok.kind == "keyword" and tok.text in TYPE_NAMES:
            base = self.parse_type_name()
            pointer = 0
            while self.accept("*"):
                pointer += 1
            name_tok = self.expect_ident()
            return self.parse_declaration_tail(base, pointer, name_tok, tok)
        if self.accept("if"):
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.parse_stmt()
            other = None
            if self.accept("else"):
                other = self.parse_stmt()
            return If(cond, then, other, tok.span)
        if self.accept("while"):
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            body = self.parse_stmt()
            return While(cond, body, tok.span)
        if self.accept("do"):
            body = self.parse_stmt()
            self.expect("while")
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            self.expect(";")
            return DoWhile(body, cond, tok.span)
        if self.accept("for"):
            self.expect("(")
            init = None
            if not self.at(";"):
                if self.peek().kind == "keyword" and self.peek().text in TYPE_NAMES:
                    base = self.parse_type_name()
                    pointer = 0
                    while self.accept("*"):
                        pointer += 1
                    name_tok = self.expect_ident()
                    init = self.parse_declaration_tail(base, pointer, name_tok, tok, terminated=False)
                else:
                    init = ExprStmt(self.parse_expr(), self.peek().span)
            self.expect(";")
            cond = None if self.at(";") else self.parse_expr()
            self.expect(";")
            step = None if self.at(")") else self.parse_expr()
            self.expect(")")
            body = self.parse_stmt()
            return For(init, cond, step, body, tok.span)
        if self.accept("return"):
            value = None if self.at(";") else self.parse_expr()
            semi = self.expect(";")
            return Return(value, tok.span.merge(semi.span))
        if self.accept("break"):
            self.expect(";")
            return Break(tok.span)
        if self.accept("continue"):
            self.expect(";")
            return Continue(tok.span)
        if self.accept(";"):
            return Block((), tok.span)  # stray semicolon, an empty statement

        expr = self.parse_expr()
        semi = self.expect(";")
        return ExprStmt(expr, tok.span.merge(semi.span))

    def parse_declaration_tail(self, base, pointer, name_tok, start, terminated=True):
        declarators = []
        tok = name_tok
        ptr = pointer
        while True:
            dims = []
            while self.at("["):
                self.next()
                if self.at("]"):
                    dims.append(None)
                else:
                    dims.append(self.parse_expr(allow_comma=False))
                self.expect("]")
            init = None
            if self.accept("="):
                if self.at("{"):
                    init = self.parse_init_list()
                else:
                    init = self.parse_expr(allow_comma=False)
            declarators.append(Declarator(tok.text, ptr, tuple(dims), init, tok.span))
            if not self.accept(","):
                break
            ptr = 0
            while self.accept("*"):
                ptr += 1
            tok = self.expect_ident()
        end = self.peek().span
        if terminated:
            self.expect(";")
        return Declaration(base, tuple(declarators), start.span.merge(end))

    def parse_init_list(self) -> InitList:
        open_tok = self.expect("{")
        items = []
        if not self.at("}"):
            while True:
                if self.at("{"):
                    items.append(self.parse_init_list())
                else:
                    items.append(self.parse_expr(allow_comma=False))
                if not self.accept(","):
                    break
        close = self.expect("}")
        return InitList(tuple(items), open_tok.span.merge(close.span))

    # -- expressions ----------------------------------------------------

    def parse_expr(self, allow_comma=True) -> Expr:
        expr = self.parse_assignment()
        while allow_comma and self.at(","):
            op_tok = self.next()
            right = self.parse_assignment()
            expr = Binary(",", expr, right, op_tok.span)
        return expr

    def parse_assignment(self) -> Expr:
        left = self.parse_ternary()
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ASSIGN_OPS:
            self.next()
            value = self.parse_assignment()
            return Assign(tok.text, left, value, tok.span)
        return left

    def parse_ternary(self) -> Expr:
        cond = self.parse_binary(1)
        if self.at("?"):
            q = self.next()
            then = self.parse_expr(allow_comma=False)
            self.expect(":")
            other = self.parse_assignment()
            return Ternary(cond, then, other, q.span)
        return cond

    def parse_binary(self, min_prec: int) -> Expr:
        left = self.parse_unary()
        while True:
            tok = self.peek()
            prec = BINARY_PREC.get(tok.text) if tok.kind == "punct" else None
            if prec is None or prec < min_prec:
                return left
            self.next()
            right = self.parse_binary(prec + 1)
            left = Binary(tok.text, left, right, tok.span)

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "punct" and tok.text in UNARY_OPS:
            self.next()
            return Unary(tok.text, self.parse_unary(), tok.span)
        if tok.kind == "punct" and tok.text in ("++", "--"):
            self.next()
            return PreIncDec(tok.text, self.parse_unary(), tok.span)
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if self.at("(") and isinstance(expr, Ident):
                self.next()
                args = []
                if not self.at(")"):
                    while True:
                        args.append(self.parse_expr(allow_comma=False))
                        if not self.accept(","):
                            break
                close = self.expect(")")
                expr = Call(expr.name, tuple(args), expr.span.merge(close.span))
            elif self.at("["):
                self.next()
                idx = self.parse_expr()
                close = self.expect("]")
                expr = Index(expr, idx, expr.span.merge(close.span))
            elif tok.kind == "punct" and tok.text in ("++", "--"):
                self.next()
                expr = PostIncDec(tok.text, expr, expr.span.merge(tok.span))
            elif self.at(".") or self.at("->"):
                raise UnsupportedConstruct(tok.span, "member access")
            else:
                return expr

    def parse_primary(self) -> Expr:
        self.reject_if_unsupported()
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return IntLit(tok.text, tok.span)
        if tok.kind == "float":
            self.next()
            return FloatLit(tok.text, tok.span)
        if tok.kind == "char":
            self.next()
            return CharLit(tok.text, tok.span)
        if tok.kind == "string":
            self.next()
            return StringLit(tok.text, tok.span)
        if tok.kind == "ident":
            self.next()
            return Ident(tok.text, tok.span)
        if self.at("("):
            self.next()
            expr = self.parse_expr()
            self.expect(")")
            return expr
        raise CSyntaxError(tok.span, "an expression", repr(tok.text) if tok.text else "end of input")


def parse(source: str | SourceUnit, name: str = "<input>") -> Ast:
    """Parse C source text into an Ast, stripping directives and comments first."""
    unit = source if isinstance(source, SourceUnit) else SourceUnit(name, source)
    stripped = strip_preprocessor(unit)
    if not stripped.text.strip():
        raise CSyntaxError(Span(1, 1, 1, 1), "a translation unit", "empty input")
    tokens = tokenize(stripped.text)
    return _Parser(tokens).parse_unit()
