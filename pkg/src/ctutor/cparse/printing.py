"""Debug renderers: C source emission and an S-expression AST dump.

pretty() emits compilable source whose re-parse is structurally identical
to the original tree; expressions come out fully parenthesized so operator
precedence never changes shape on the way back in.
"""

from __future__ import annotations

from .nodes import (
    Assign, Ast, Binary, Block, Break, Call, CharLit, Continue, Declaration,
    Declarator, DoWhile, ExprStmt, FloatLit, For, FunctionDef, Ident, If,
    Index, InitList, IntLit, PostIncDec, PreIncDec, Return, Seq, StringLit,
    Ternary, Unary, While,
)


def expr_text(e) -> str:
    if isinstance(e, (IntLit, FloatLit, CharLit, StringLit)):
        return e.text
    if isinstance(e, Ident):
        return e.name
    if isinstance(e, Unary):
        return f"({e.op}{expr_text(e.operand)})"
    if isinstance(e, Binary):
        return f"({expr_text(e.left)} {e.op} {expr_text(e.right)})"
    if isinstance(e, Assign):
        return f"({expr_text(e.target)} {e.op} {expr_text(e.value)})"
    if isinstance(e, Call):
        return f"{e.name}({', '.join(expr_text(a) for a in e.args)})"
    if isinstance(e, Index):
        return f"{expr_text(e.base)}[{expr_text(e.index)}]"
    if isinstance(e, PreIncDec):
        return f"({e.op}{expr_text(e.operand)})"
    if isinstance(e, PostIncDec):
        return f"({expr_text(e.operand)}{e.op})"
    if isinstance(e, Ternary):
        return f"({expr_text(e.cond)} ? {expr_text(e.then)} : {expr_text(e.other)})"
    if isinstance(e, InitList):
        return "{" + ", ".join(expr_text(i) for i in e.items) + "}"
    raise TypeError(f"unknown expression node {e!r}")


def _declarator_text(d: Declarator) -> str:
    out = "*" * d.pointer + d.name
    for dim in d.dims:
        out += "[" + (expr_text(dim) if dim is not None else "") + "]"
    if d.init is not None:
        out += " = " + expr_text(d.init)
    return out


def _decl_text(d: Declaration) -> str:
    return d.base_type + " " + ", ".join(_declarator_text(x) for x in d.declarators)


def _stmt_lines(s, indent: int) -> list[str]:
    pad = "    " * indent
    if isinstance(s, Declaration):
        return [pad + _decl_text(s) + ";"]
    if isinstance(s, ExprStmt):
        return [pad + expr_text(s.expr) + ";"]
    if isinstance(s, Return):
        return [pad + ("return " + expr_text(s.value) if s.value is not None else "return") + ";"]
    if isinstance(s, Break):
        return [pad + "break;"]
    if isinstance(s, Continue):
        return [pad + "continue;"]
    if isinstance(s, Block):
        lines = [pad + "{"]
        for inner in s.stmts:
            lines.extend(_stmt_lines(inner, indent + 1))
        lines.append(pad + "}")
        return lines
    if isinstance(s, If):
        lines = [pad + f"if ({expr_text(s.cond)})"]
        lines.extend(_stmt_lines(s.then, indent + (0 if isinstance(s.then, Block) else 1)))
        if s.other is not None:
            lines.append(pad + "else")
            lines.extend(_stmt_lines(s.other, indent + (0 if isinstance(s.other, Block) else 1)))
        return lines
    if isinstance(s, While):
        lines = [pad + f"while ({expr_text(s.cond)})"]
        lines.extend(_stmt_lines(s.body, indent + (0 if isinstance(s.body, Block) else 1)))
        return lines
    if isinstance(s, DoWhile):
        lines = [pad + "do"]
        lines.extend(_stmt_lines(s.body, indent + (0 if isinstance(s.body, Block) else 1)))
        lines.append(pad + f"while ({expr_text(s.cond)});")
        return lines
    if isinstance(s, For):
        if s.init is None:
            init = ""
        elif isinstance(s.init, Declaration):
            init = _decl_text(s.init)
        else:
            init = expr_text(s.init.expr)
        cond = expr_text(s.cond) if s.cond is not None else ""
        step = expr_text(s.step) if s.step is not None else ""
        lines = [pad + f"for ({init}; {cond}; {step})"]
        lines.extend(_stmt_lines(s.body, indent + (0 if isinstance(s.body, Block) else 1)))
        return lines
    if isinstance(s, Seq):
        lines = []
        for inner in s.stmts:
            lines.extend(_stmt_lines(inner, indent))
        return lines
    raise TypeError(f"unknown statement node {s!r}")


def pretty(ast: Ast) -> str:
    """Render an Ast back to C source."""
    lines = []
    for g in ast.globals:
        lines.append(_decl_text(g) + ";")
    for f in ast.functions:
        params = ", ".join(
            p.base_type + " " + "*" * p.pointer + p.name
            + "".join("[" + (expr_text(d) if d is not None else "") + "]" for d in p.dims)
            for p in f.params
        )
        lines.append(f"{f.return_type} {f.name}({params})")
        lines.extend(_stmt_lines(Block(f.body), 0))
        lines.append("")
    return "\n".join(lines)


# --- S-expression dump ------------------------------------------------------


def _atom(text: str) -> str:
    return text


def _dump_expr(e) -> str:
    if isinstance(e, IntLit):
        return f"(int {e.text})"
    if isinstance(e, FloatLit):
        return f"(float {e.text})"
    if isinstance(e, CharLit):
        return f"(char {e.text})"
    if isinstance(e, StringLit):
        return f"(string {e.text})"
    if isinstance(e, Ident):
        return f"(id {e.name})"
    if isinstance(e, Unary):
        return f"(unary {e.op} {_dump_expr(e.operand)})"
    if isinstance(e, Binary):
        return f"(binary {e.op} {_dump_expr(e.left)} {_dump_expr(e.right)})"
    if isinstance(e, Assign):
        return f"(assign {e.op} {_dump_expr(e.target)} {_dump_expr(e.value)})"
    if isinstance(e, Call):
        inner = " ".join(_dump_expr(a) for a in e.args)
        return f"(call {e.name}{(' ' + inner) if inner else ''})"
    if isinstance(e, Index):
        return f"(index {_dump_expr(e.base)} {_dump_expr(e.index)})"
    if isinstance(e, PreIncDec):
        return f"(pre {e.op} {_dump_expr(e.operand)})"
    if isinstance(e, PostIncDec):
        return f"(post {e.op} {_dump_expr(e.operand)})"
    if isinstance(e, Ternary):
        return f"(ternary {_dump_expr(e.cond)} {_dump_expr(e.then)} {_dump_expr(e.other)})"
    if isinstance(e, InitList):
        return "(init-list " + " ".join(_dump_expr(i) for i in e.items) + ")"
    raise TypeError(f"unknown expression node {e!r}")


def _dump_stmt(s, indent: int, out: list[str]):
    pad = "  " * indent
    loc = f" @{s.span.line}:{s.span.col}"
    if isinstance(s, Declaration):
        for d in s.declarators:
            dims = "".join(f"[{_dump_expr(x) if x is not None else ''}]" for x in d.dims)
            init = f" {_dump_expr(d.init)}" if d.init is not None else ""
            out.append(f"{pad}(decl {s.base_type} {'*' * d.pointer}{d.name}{dims}{init}{loc})")
        return
    if isinstance(s, ExprStmt):
        out.append(f"{pad}(expr {_dump_expr(s.expr)}{loc})")
        return
    if isinstance(s, Return):
        val = f" {_dump_expr(s.value)}" if s.value is not None else ""
        out.append(f"{pad}(return{val}{loc})")
        return
    if isinstance(s, Break):
        out.append(f"{pad}(break{loc})")
        return
    if isinstance(s, Continue):
        out.append(f"{pad}(continue{loc})")
        return
    if isinstance(s, Block):
        out.append(f"{pad}(block{loc}")
        for inner in s.stmts:
            _dump_stmt(inner, indent + 1, out)
        out.append(f"{pad})")
        return
    if isinstance(s, If):
        out.append(f"{pad}(if {_dump_expr(s.cond)}{loc}")
        _dump_stmt(s.then, indent + 1, out)
        if s.other is not None:
            out.append(f"{pad} else")
            _dump_stmt(s.other, indent + 1, out)
        out.append(f"{pad})")
        return
    if isinstance(s, While):
        out.append(f"{pad}(while {_dump_expr(s.cond)}{loc}")
        _dump_stmt(s.body, indent + 1, out)
        out.append(f"{pad})")
        return
    if isinstance(s, DoWhile):
        out.append(f"{pad}(do-while {_dump_expr(s.cond)}{loc}")
        _dump_stmt(s.body, indent + 1, out)
        out.append(f"{pad})")
        return
    if isinstance(s, For):
        out.append(f"{pad}(for{loc}")
        if s.init is not None:
            _dump_stmt(s.init, indent + 1, out)
        out.append(f"{pad}  (cond {_dump_expr(s.cond) if s.cond is not None else 'none'})")
        out.append(f"{pad}  (step {_dump_expr(s.step) if s.step is not None else 'none'})")
        _dump_stmt(s.body, indent + 1, out)
        out.append(f"{pad})")
        return
    if isinstance(s, Seq):
        for inner in s.stmts:
            _dump_stmt(inner, indent, out)
        return
    raise TypeError(f"unknown statement node {s!r}")


def dump(ast: Ast) -> str:
    """S-expression dump of an Ast, one node per line, used by golden tests."""
    out = []
    for g in ast.globals:
        _dump_stmt(g, 0, out)
    for f in ast.functions:
        params = " ".join(
            f"({p.base_type} {'*' * p.pointer}{p.name})" for p in f.params
        )
        out.append(f"(function {f.return_type} {f.name} ({params}) @{f.span.line}:{f.span.col}")
        for s in f.body:
            _dump_stmt(s, 1, out)
        out.append(")")
    return "\n".join(out) + "\n"
