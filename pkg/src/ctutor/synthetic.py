"""Random C program corpora for tests, benchmarks, and dev seeding.

Programs are built as ASTs and rendered through the pretty printer, so
everything generated is guaranteed to parse. Each template can be emitted
under several surface styles (renamed variables, for vs while loops,
spelled-out increments, shuffled definition order) that must normalize to
the same linear form, and under small semantic mutations that should not.
"""

from __future__ import annotations

import dataclasses
import random

from .cparse.nodes import (
    Assign, Ast, Binary, Block, Call, Declaration, Declarator, ExprStmt, For,
    FunctionDef, Ident, If, IntLit, Param, PostIncDec, Return, Stmt, While,
)
from .cparse.printing import pretty

_VAR_NAMES = ["a", "b", "c", "n", "k", "t", "m", "p", "q", "r", "s", "u"]
_FN_NAMES = ["calc", "compute", "solve", "step", "combine", "scale", "tally"]


# --- generic AST rewriting --------------------------------------------------

def transform(node, fn):
    """Rebuild a node tree bottom-up, applying fn to every dataclass node."""
    if dataclasses.is_dataclass(node):
        changes = {}
        for f in dataclasses.fields(node):
            if f.name == "span":
                continue
            value = getattr(node, f.name)
            new = transform(value, fn)
            if new is not value:
                changes[f.name] = new
        if changes:
            node = dataclasses.replace(node, **changes)
        return fn(node)
    if isinstance(node, tuple):
        items = tuple(transform(x, fn) for x in node)
        return items if items != node else node
    return node


def collect(node, pred, out=None):
    if out is None:
        out = []
    if dataclasses.is_dataclass(node):
        if pred(node):
            out.append(node)
        for f in dataclasses.fields(node):
            if f.name != "span":
                collect(getattr(node, f.name), pred, out)
    elif isinstance(node, tuple):
        for x in node:
            collect(x, pred, out)
    return out


# --- template generation ----------------------------------------------------

def _int(v) -> IntLit:
    return IntLit(str(v))


def _expr(rng: random.Random, vars_: list[str], depth: int):
    if depth <= 0 or rng.random() < 0.45:
        if vars_ and rng.random() < 0.65:
            return Ident(rng.choice(vars_))
        return _int(rng.randrange(0, 10))
    op = rng.choice(["+", "-", "*", "+"])
    return Binary(op, _expr(rng, vars_, depth - 1), _expr(rng, vars_, depth - 1))


def _cond(rng: random.Random, vars_: list[str]):
    op = rng.choice(["<", ">", "<=", "==", "!="])
    left = Ident(rng.choice(vars_)) if vars_ else _int(rng.randrange(5))
    return Binary(op, left, _int(rng.randrange(1, 12)))


def _assign(rng, vars_):
    return ExprStmt(Assign("=", Ident(rng.choice(vars_)), _expr(rng, vars_, 2)))


def _count_loop(rng: random.Random, vars_: list[str], body_stmts: list[Stmt]) -> For:
    i = rng.choice(vars_)
    init = ExprStmt(Assign("=", Ident(i), _int(0)))
    cond = Binary("<", Ident(i), _int(rng.randrange(3, 12)))
    step = PostIncDec("++", Ident(i))
    return For(init, cond, step, Block(tuple(body_stmts)))


def _body(rng: random.Random, vars_: list[str], budget: int, callees: list[str],
          depth: int = 0) -> list[Stmt]:
    stmts: list[Stmt] = []
    while budget > 0:
        if callees and rng.random() < 0.5:
            name = callees.pop(0)
            args = tuple(Ident(rng.choice(vars_)) for _ in range(rng.randrange(0, 2)))
            stmts.append(ExprStmt(Assign("=", Ident(rng.choice(vars_)), Call(name, args))))
            budget -= 2
            continue
        kind = rng.choice(["assign", "assign", "if", "loop", "assign"])
        if kind == "assign" or depth >= 2:
            stmts.append(_assign(rng, vars_))
            budget -= 1
        elif kind == "if":
            then = _body(rng, vars_, min(2, budget), [], depth + 1)
            other = _body(rng, vars_, 1, [], depth + 1) if rng.random() < 0.5 else None
            stmts.append(If(_cond(rng, vars_), Block(tuple(then)),
                            Block(tuple(other)) if other is not None else None))
            budget -= 3 + len(then)
        else:
            inner = _body(rng, vars_, min(2, budget), [], depth + 1)
            inner = inner or [_assign(rng, vars_)]
            stmts.append(_count_loop(rng, vars_, inner))
            budget -= 4 + len(inner)
    return stmts


def make_template(rng: random.Random, helpers: int = 0, size: int = 8) -> Ast:
    """One random program: a main, optionally calling helper functions."""
    helper_names = [f"{rng.choice(_FN_NAMES)}{i}" for i in range(helpers)]
    functions = []

    for name in helper_names:
        params = tuple(
            Param("int", v) for v in rng.sample(_VAR_NAMES, rng.randrange(0, 3))
        )
        vars_ = [p.name for p in params] or ["x"]
        body: list[Stmt] = []
        if not params:
            body.append(Declaration("int", (Declarator("x", init=_int(rng.randrange(1, 9))),)))
        body.extend(_body(rng, vars_, max(2, size // 2), []))
        body.append(Return(_expr(rng, vars_, 1)))
        functions.append(FunctionDef(name, "int", params, tuple(body)))

    vars_ = rng.sample(_VAR_NAMES, rng.randrange(2, 4))
    main_body: list[Stmt] = [
        Declaration("int", tuple(Declarator(v, init=_int(rng.randrange(0, 5))) for v in vars_))
    ]
    pending = list(helper_names)
    main_body.extend(_body(rng, vars_, size, pending))
    for name in pending:  # every helper stays reachable
        main_body.append(ExprStmt(Assign("=", Ident(rng.choice(vars_)), Call(name, ()))))
    main_body.append(Return(_int(0)))
    functions.append(FunctionDef("main", "int", (), tuple(main_body)))
    return Ast(tuple(functions), ())


# --- surface-equivalent variants --------------------------------------------

def alpha_renamed(ast: Ast, rng: random.Random) -> Ast:
    """Consistently rename every variable; function names stay put."""
    fn_names = {f.name for f in ast.functions}
    names = sorted({x.name for x in collect(ast, lambda n: isinstance(n, (Declarator, Param)))}
                   | {x.name for x in collect(ast, lambda n: isinstance(n, Ident))})
    names = [n for n in names if n not in fn_names]
    fresh = [f"w{k}_{rng.randrange(100)}" for k in range(len(names))]
    mapping = dict(zip(names, fresh))

    def rewrite(node):
        if isinstance(node, Ident) and node.name in mapping:
            return Ident(mapping[node.name], node.span)
        if isinstance(node, Declarator) and node.name in mapping:
            return dataclasses.replace(node, name=mapping[node.name])
        if isinstance(node, Param) and node.name in mapping:
            return dataclasses.replace(node, name=mapping[node.name])
        return node

    return transform(ast, rewrite)


def with_while_loops(ast: Ast) -> Ast:
    """Spell every for-loop as init; while (cond) { body; step; }."""

    def rewrite(node):
        if isinstance(node, For):
            body = list(node.body.stmts) if isinstance(node.body, Block) else [node.body]
            if node.step is not None:
                body.append(ExprStmt(node.step))
            loop = While(node.cond if node.cond is not None else _int(1), Block(tuple(body)))
            pieces = ([node.init] if node.init is not None else []) + [loop]
            return Block_free_seq(pieces)
        return node

    def Block_free_seq(pieces):
        # Splice into the surrounding statement list via a flattening pass.
        return _Splice(tuple(pieces))

    @dataclasses.dataclass(frozen=True)
    class _Splice:
        stmts: tuple

    rewritten = transform(ast, rewrite)

    def flatten_body(stmts):
        out = []
        for s in stmts:
            if isinstance(s, _Splice):
                out.extend(flatten_body(s.stmts))
            elif isinstance(s, Block):
                out.append(Block(tuple(flatten_body(s.stmts)), s.span))
            else:
                out.append(s)
        return out

    def fix(node):
        if isinstance(node, FunctionDef):
            return dataclasses.replace(node, body=tuple(flatten_body(node.body)))
        if isinstance(node, Block):
            return Block(tuple(flatten_body(node.stmts)), node.span)
        return node

    return transform(rewritten, fix)


def with_spelled_increments(ast: Ast) -> Ast:
    """Replace statement-position v++ / v-- with v = v + 1 / v = v - 1."""

    def rewrite(node):
        if isinstance(node, ExprStmt) and isinstance(node.expr, PostIncDec):
            op = "+" if node.expr.op == "++" else "-"
            tgt = node.expr.operand
            return ExprStmt(Assign("=", tgt, Binary(op, tgt, _int(1))), node.span)
        if isinstance(node, For) and isinstance(node.step, PostIncDec):
            op = "+" if node.step.op == "++" else "-"
            tgt = node.step.operand
            return dataclasses.replace(node, step=Assign("=", tgt, Binary(op, tgt, _int(1))))
        return node

    return transform(ast, rewrite)


def with_shuffled_definitions(ast: Ast, rng: random.Random) -> Ast:
    order = list(ast.functions)
    rng.shuffle(order)
    return dataclasses.replace(ast, functions=tuple(order))


def surface_variant(ast: Ast, rng: random.Random) -> Ast:
    """All surface rewrites at once; must normalize identically to ast."""
    out = alpha_renamed(ast, rng)
    out = with_while_loops(out)
    out = with_spelled_increments(out)
    return with_shuffled_definitions(out, rng)


# --- semantic mutations -----------------------------------------------------

def mutated(ast: Ast, rng: random.Random, edits: int = 1) -> Ast:
    """A few meaning-changing edits: literal tweaks, operator swaps, an
    extra or dropped statement."""
    out = ast
    for _ in range(edits):
        choice = rng.random()
        if choice < 0.5:
            lits = collect(out, lambda n: isinstance(n, IntLit))
            if lits:
                victim = rng.choice(lits)
                new_text = str(int(victim.text) + rng.choice([1, 2, 3, -1]))
                done = [False]

                def tweak(node):
                    if node is victim and not done[0]:
                        done[0] = True
                        return IntLit(new_text, node.span)
                    return node

                out = transform(out, tweak)
        elif choice < 0.75:
            bins = collect(out, lambda n: isinstance(n, Binary) and n.op in "+-*")
            if bins:
                victim = rng.choice(bins)
                new_op = rng.choice([o for o in "+-*" if o != victim.op])
                done = [False]

                def swap(node):
                    if node is victim and not done[0]:
                        done[0] = True
                        return dataclasses.replace(node, op=new_op)
                    return node

                out = transform(out, swap)
        else:
            fns = list(out.functions)
            k = rng.randrange(len(fns))
            body = list(fns[k].body)
            if rng.random() < 0.5 or len(body) < 3:
                vars_ = [d.name for s in body if isinstance(s, Declaration)
                         for d in s.declarators] or ["z"]
                pos = rng.randrange(1, len(body)) if len(body) > 1 else 0
                body.insert(pos, _assign(rng, vars_))
            else:
                victims = [i for i, s in enumerate(body)
                           if not isinstance(s, (Declaration, Return))]
                if victims:
                    body.pop(rng.choice(victims))
            fns[k] = dataclasses.replace(fns[k], body=tuple(body))
            out = dataclasses.replace(out, functions=tuple(fns))
    return out


# --- corpora ----------------------------------------------------------------

def render(ast: Ast) -> str:
    return pretty(ast)


def make_corpus(seed: int, n: int, templates: int, helpers_max: int = 2,
                size: int = 8, variants_per_template: int = 8,
                mutation_edits: int = 2):
    """n submissions drawn from a limited pool of mutants per template.

    Returns a list of (submission_id, source_text, template_index). Students
    converge on a handful of solution shapes, so the pool per template is
    kept small; repeats get fresh surface styles, not fresh logic.
    """
    rng = random.Random(seed)
    base = [
        make_template(rng, helpers=rng.randrange(0, helpers_max + 1), size=size)
        for _ in range(templates)
    ]
    pools = []
    for t in base:
        pool = [t]
        for _ in range(variants_per_template - 1):
            pool.append(mutated(t, rng, edits=rng.randrange(1, mutation_edits + 1)))
        pools.append(pool)

    out = []
    for i in range(n):
        t_idx = i % templates
        ast = rng.choice(pools[t_idx])
        if rng.random() < 0.5:
            ast = surface_variant(ast, rng)
        out.append((f"s{i:04d}", render(ast), t_idx))
    return out
