"""AST to linear form: construct normalization, linearization, postfix
expressions, per-expression variable renaming, and call-order reordering.

Equivalent surface forms are funneled into one shape before comparison:
for-loops become init + while + trailing step, do-while becomes body +
while, statement-level v++/v-- and compound assignments become plain
assignments, and identifiers are renamed to ordinals per expression.
"""

from __future__ import annotations

from . import linear
from .cparse.nodes import (
    Assign, Ast, Binary, Block, Break, Call, CharLit, Continue, Declaration,
    Declarator, DoWhile, Expr, ExprStmt, FloatLit, For, FunctionDef, Ident,
    If, Index, InitList, IntLit, PostIncDec, PreIncDec, Return, Seq, Stmt,
    StringLit, Ternary, Unary, While,
)
from .linear import (
    Atom, CallRef, LinearFunction, LinearProgram, LinearToken, Literal, Name,
    Operator, VarRef,
)

_UNARY_SYMBOL = {"-": "neg", "+": "pos", "*": "deref", "&": "addr", "!": "!", "~": "~"}


# --- construct normalization ------------------------------------------------

def _norm_expr(e: Expr) -> Expr:
    """Rewrite compound assignments to plain ones, recursively."""
    if isinstance(e, (IntLit, FloatLit, CharLit, StringLit, Ident)):
        return e
    if isinstance(e, Unary):
        return Unary(e.op, _norm_expr(e.operand), e.span)
    if isinstance(e, Binary):
        return Binary(e.op, _norm_expr(e.left), _norm_expr(e.right), e.span)
    if isinstance(e, Assign):
        target = _norm_expr(e.target)
        value = _norm_expr(e.value)
        if e.op != "=":
            return Assign("=", target, Binary(e.op[:-1], target, value, e.span), e.span)
        return Assign("=", target, value, e.span)
    if isinstance(e, Call):
        return Call(e.name, tuple(_norm_expr(a) for a in e.args), e.span)
    if isinstance(e, Index):
        return Index(_norm_expr(e.base), _norm_expr(e.index), e.span)
    if isinstance(e, PreIncDec):
        return PreIncDec(e.op, _norm_expr(e.operand), e.span)
    if isinstance(e, PostIncDec):
        return PostIncDec(e.op, _norm_expr(e.operand), e.span)
    if isinstance(e, Ternary):
        return Ternary(_norm_expr(e.cond), _norm_expr(e.then), _norm_expr(e.other), e.span)
    if isinstance(e, InitList):
        return InitList(tuple(_norm_expr(i) for i in e.items), e.span)
    raise TypeError(f"unknown expression node {e!r}")


def _incdec_to_assign(e: Expr, span) -> Expr:
    op = "+" if e.op == "++" else "-"
    target = _norm_expr(e.operand)
    return Assign("=", target, Binary(op, target, IntLit("1", span), span), span)


def _as_stmt_list(s: Stmt) -> list[Stmt]:
    if isinstance(s, Block):
        return list(s.stmts)
    if isinstance(s, Seq):
        return list(s.stmts)
    return [s]


def normalize_constructs(s: Stmt) -> Stmt:
    """Canonicalize loop and increment forms; idempotent at the Stmt level."""
    if isinstance(s, Declaration):
        decls = tuple(
            d if d.init is None
            else Declarator(d.name, d.pointer, d.dims, _norm_expr(d.init), d.span)
            for d in s.declarators
        )
        return Declaration(s.base_type, decls, s.span)
    if isinstance(s, ExprStmt):
        if isinstance(s.expr, (PreIncDec, PostIncDec)):
            return ExprStmt(_incdec_to_assign(s.expr, s.span), s.span)
        return ExprStmt(_norm_expr(s.expr), s.span)
    if isinstance(s, If):
        other = normalize_constructs(s.other) if s.other is not None else None
        return If(_norm_expr(s.cond), normalize_constructs(s.then), other, s.span)
    if isinstance(s, While):
        return While(_norm_expr(s.cond), normalize_constructs(s.body), s.span)
    if isinstance(s, DoWhile):
        body = normalize_constructs(s.body)
        contents = _as_stmt_list(body)
        loop = While(_norm_expr(s.cond), Block(tuple(contents), s.span), s.span)
        return Seq(tuple(contents + [loop]), s.span)
    if isinstance(s, For):
        pieces: list[Stmt] = []
        if s.init is not None:
            pieces.append(normalize_constructs(s.init))
        cond = _norm_expr(s.cond) if s.cond is not None else IntLit("1", s.span)
        body = normalize_constructs(s.body)
        contents = _as_stmt_list(body)
        if s.step is not None:
            contents.append(normalize_constructs(ExprStmt(s.step, s.span)))
        pieces.append(While(cond, Block(tuple(contents), s.span), s.span))
        return Seq(tuple(pieces), s.span)
    if isinstance(s, Return):
        value = _norm_expr(s.value) if s.value is not None else None
        return Return(value, s.span)
    if isinstance(s, Block):
        return Block(tuple(normalize_constructs(x) for x in s.stmts), s.span)
    if isinstance(s, Seq):
        return Seq(tuple(normalize_constructs(x) for x in s.stmts), s.span)
    if isinstance(s, (Break, Continue)):
        return s
    raise TypeError(f"unknown statement node {s!r}")


# --- postfix conversion -----------------------------------------------------

def to_postfix(e: Expr) -> tuple[Atom, ...]:
    """Postorder emission; identifiers stay as Name atoms until rename_vars.

    Assignments emit value before target, so `x = a + b` and `y = a + b`
    rename identically.
    """
    out: list[Atom] = []

    def walk(node):
        if isinstance(node, (IntLit, FloatLit, CharLit, StringLit)):
            out.append(Literal(node.text))
        elif isinstance(node, Ident):
            out.append(Name(node.name))
        elif isinstance(node, Unary):
            walk(node.operand)
            out.append(Operator(_UNARY_SYMBOL[node.op], 1))
        elif isinstance(node, Binary):
            walk(node.left)
            walk(node.right)
            out.append(Operator(node.op, 2))
        elif isinstance(node, Assign):
            walk(node.value)
            walk(node.target)
            out.append(Operator(node.op, 2))
        elif isinstance(node, Call):
            for a in node.args:
                walk(a)
            out.append(CallRef(node.name, len(node.args)))
        elif isinstance(node, Index):
            walk(node.base)
            walk(node.index)
            out.append(Operator("[]", 2))
        elif isinstance(node, PreIncDec):
            walk(node.operand)
            out.append(Operator(node.op + "pre", 1))
        elif isinstance(node, PostIncDec):
            walk(node.operand)
            out.append(Operator(node.op + "post", 1))
        elif isinstance(node, Ternary):
            walk(node.cond)
            walk(node.then)
            walk(node.other)
            out.append(Operator("?:", 3))
        elif isinstance(node, InitList):
            for i in node.items:
                walk(i)
            out.append(Operator("{}", len(node.items)))
        else:
            raise TypeError(f"unknown expression node {node!r}")

    walk(e)
    return tuple(out)


def rename_vars(atoms: tuple[Atom, ...]) -> tuple[Atom, ...]:
    """Replace identifiers with ordinals by first use within this expression."""
    seen: dict[str, int] = {}
    out = []
    for a in atoms:
        if isinstance(a, Name):
            if a.name not in seen:
                seen[a.name] = len(seen) + 1
            out.append(VarRef(seen[a.name]))
        else:
            out.append(a)
    return tuple(out)


def _expr_atoms(e: Expr) -> tuple[Atom, ...]:
    return rename_vars(to_postfix(e))


# --- linearization ----------------------------------------------------------

def _branch_tokens(s: Stmt) -> list[LinearToken]:
    """Token run for a construct body, without the enclosing block markers."""
    out: list[LinearToken] = []
    for stmt in _as_stmt_list(s):
        out.extend(_linearize(stmt))
    return out


def _linearize(s: Stmt) -> list[LinearToken]:
    if isinstance(s, Declaration):
        out = []
        for d in s.declarators:
            out.append(linear.decl(s.base_type, d.span))
            if d.init is not None:
                assign = Assign("=", Ident(d.name, d.span), d.init, d.span)
                out.append(linear.expr_token(linear.EXPR, _expr_atoms(assign), d.span))
        return out
    if isinstance(s, ExprStmt):
        return [linear.expr_token(linear.EXPR, _expr_atoms(s.expr), s.span)]
    if isinstance(s, If):
        out = [linear.expr_token(linear.IF, _expr_atoms(s.cond), s.span),
               linear.block_open(s.span)]
        out.extend(_branch_tokens(s.then))
        out.append(linear.block_close(s.span))
        if s.other is not None:
            out.append(linear.else_marker(s.other.span))
            out.append(linear.block_open(s.other.span))
            out.extend(_branch_tokens(s.other))
            out.append(linear.block_close(s.other.span))
        return out
    if isinstance(s, While):
        out = [linear.expr_token(linear.LOOP, _expr_atoms(s.cond), s.span),
               linear.block_open(s.span)]
        out.extend(_branch_tokens(s.body))
        out.append(linear.block_close(s.span))
        return out
    if isinstance(s, Return):
        atoms = _expr_atoms(s.value) if s.value is not None else None
        return [linear.expr_token(linear.RET, atoms, s.span)]
    if isinstance(s, Block):
        out = [linear.block_open(s.span)]
        for stmt in s.stmts:
            out.extend(_linearize(stmt))
        out.append(linear.block_close(s.span))
        return out
    if isinstance(s, Seq):
        out = []
        for stmt in s.stmts:
            out.extend(_linearize(stmt))
        return out
    if isinstance(s, Break):
        return [linear.expr_token(linear.EXPR, (Literal("break"),), s.span)]
    if isinstance(s, Continue):
        return [linear.expr_token(linear.EXPR, (Literal("continue"),), s.span)]
    raise TypeError(f"statement {s!r} should have been normalized away")


def linearize_stmt(s: Stmt) -> list[LinearToken]:
    """Flatten one parsed statement into linear tokens."""
    return _linearize(normalize_constructs(s))


def linearize_function(f: FunctionDef) -> LinearFunction:
    tokens: list[LinearToken] = [linear.header(len(f.params), f.span), linear.block_open(f.span)]
    for s in f.body:
        tokens.extend(linearize_stmt(s))
    tokens.append(linear.block_close(f.span))
    return LinearFunction(f.name, tuple(tokens))


# --- call-order function reordering ----------------------------------------

def _calls_in_expr(e: Expr, out: list[str]):
    if isinstance(e, (IntLit, FloatLit, CharLit, StringLit, Ident)) or e is None:
        return
    if isinstance(e, Unary):
        _calls_in_expr(e.operand, out)
    elif isinstance(e, Binary):
        _calls_in_expr(e.left, out)
        _calls_in_expr(e.right, out)
    elif isinstance(e, Assign):
        _calls_in_expr(e.target, out)
        _calls_in_expr(e.value, out)
    elif isinstance(e, Call):
        out.append(e.name)
        for a in e.args:
            _calls_in_expr(a, out)
    elif isinstance(e, Index):
        _calls_in_expr(e.base, out)
        _calls_in_expr(e.index, out)
    elif isinstance(e, (PreIncDec, PostIncDec)):
        _calls_in_expr(e.operand, out)
    elif isinstance(e, Ternary):
        _calls_in_expr(e.cond, out)
        _calls_in_expr(e.then, out)
        _calls_in_expr(e.other, out)
    elif isinstance(e, InitList):
        for i in e.items:
            _calls_in_expr(i, out)


def _calls_in_stmt(s: Stmt, out: list[str]):
    if isinstance(s, Declaration):
        for d in s.declarators:
            if d.init is not None:
                _calls_in_expr(d.init, out)
            for dim in d.dims:
                if dim is not None:
                    _calls_in_expr(dim, out)
    elif isinstance(s, ExprStmt):
        _calls_in_expr(s.expr, out)
    elif isinstance(s, If):
        _calls_in_expr(s.cond, out)
        _calls_in_stmt(s.then, out)
        if s.other is not None:
            _calls_in_stmt(s.other, out)
    elif isinstance(s, While):
        _calls_in_expr(s.cond, out)
        _calls_in_stmt(s.body, out)
    elif isinstance(s, DoWhile):
        _calls_in_stmt(s.body, out)
        _calls_in_expr(s.cond, out)
    elif isinstance(s, For):
        if s.init is not None:
            _calls_in_stmt(s.init, out)
        if s.cond is not None:
            _calls_in_expr(s.cond, out)
        if s.step is not None:
            _calls_in_expr(s.step, out)
        _calls_in_stmt(s.body, out)
    elif isinstance(s, Return):
        if s.value is not None:
            _calls_in_expr(s.value, out)
    elif isinstance(s, (Block, Seq)):
        for x in s.stmts:
            _calls_in_stmt(x, out)


def first_called_order(f: FunctionDef) -> list[str]:
    """Callee names in source order of first occurrence within f's body."""
    raw: list[str] = []
    for s in f.body:
        _calls_in_stmt(s, raw)
    seen = set()
    order = []
    for name in raw:
        if name not in seen:
            seen.add(name)
            order.append(name)
    return order


def reorder_functions(ast: Ast) -> LinearProgram:
    """Depth-first call-order traversal from main; unreached functions drop."""
    by_name = {f.name: f for f in ast.functions}
    root = "main" if "main" in by_name else ast.functions[0].name
    visited: list[str] = []
    seen = set()

    def visit(name: str):
        seen.add(name)
        visited.append(name)
        for callee in first_called_order(by_name[name]):
            if callee in by_name and callee not in seen:
                visit(callee)

    visit(root)
    dropped = tuple(f.name for f in ast.functions if f.name not in seen)
    functions = tuple(linearize_function(by_name[n]) for n in visited)
    return LinearProgram(functions, dropped, no_main=ast.no_main)


def normalize(ast: Ast) -> LinearProgram:
    """Full pipeline from parsed Ast to comparable LinearProgram."""
    if not ast.functions:
        return LinearProgram((), (), no_main=True)
    return reorder_functions(ast)
