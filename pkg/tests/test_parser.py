import dataclasses

import pytest

from ctutor.cparse import (
    Assign, Binary, Block, Call, Declaration, DoWhile, ExprStmt, If, Index,
    IntLit, Return, Ternary, While, dump, parse, pretty,
)
from ctutor.spans import CSyntaxError, UnsupportedConstruct
from conftest import WITHDRAW_CORRECT, CALL_CHAIN, BRANCH_SWAP_A


def body_of(src, fn="main"):
    ast = parse(src)
    return next(f for f in ast.functions if f.name == fn).body


def test_minimal_main():
    ast = parse("int main(){return 0;}")
    assert [f.name for f in ast.functions] == ["main"]
    assert ast.functions[0].body == (Return(IntLit("0")),)
    assert not ast.no_main


def test_withdraw_correct_shape(withdraw_correct):
    ast = parse(withdraw_correct)
    assert len(ast.functions) == 1
    body = ast.functions[0].body
    decls = [s for s in body if isinstance(s, Declaration)]
    assert len(decls) == 2
    calls = [s for s in body
             if isinstance(s, ExprStmt) and isinstance(s.expr, Call)
             and s.expr.name == "scanf"]
    assert len(calls) == 1
    conds = [s for s in body if isinstance(s, If)]
    assert len(conds) == 1 and conds[0].other is not None


@pytest.mark.parametrize("src,construct", [
    ("int main(){switch(x){}}", "switch"),
    ("int main(){goto end;}", "goto"),
    ("struct point { int x; };", "struct"),
    ("typedef int myint;", "typedef"),
    ("int f(int a, ...) { return 0; }", "varargs"),
    ("int main(){int x; x = y.z;}", "member access"),
])
def test_unsupported_constructs(src, construct):
    with pytest.raises(UnsupportedConstruct) as err:
        parse(src)
    assert err.value.construct == construct
    assert err.value.span.line >= 1


def test_switch_span_points_at_keyword():
    with pytest.raises(UnsupportedConstruct) as err:
        parse("int main(){\n  switch(x){}\n}")
    assert (err.value.span.line, err.value.span.col) == (2, 3)


def test_syntax_error_reports_expected():
    with pytest.raises(CSyntaxError) as err:
        parse("int main(){int x = ;}")
    assert "expected" in str(err.value)


def test_missing_semicolon():
    with pytest.raises(CSyntaxError):
        parse("int main(){int x = 1 return x;}")


def test_parse_is_deterministic(withdraw_correct):
    assert parse(withdraw_correct) == parse(withdraw_correct)
    assert dump(parse(withdraw_correct)) == dump(parse(withdraw_correct))


def test_prototypes_are_skipped():
    ast = parse("int helper(int a);\nint main(){return helper(1);}\nint helper(int a){return a;}")
    assert [f.name for f in ast.functions] == ["main", "helper"]
    assert ast.globals == ()


def test_globals_and_arrays():
    ast = parse("int table[10];\nint grid[2][3];\nint main(){ grid[1][2] = table[0]; return 0; }")
    assert len(ast.globals) == 2
    assert len(ast.globals[1].declarators[0].dims) == 2
    stmt = body_of("int main(){ int g[2][2]; g[1][0] = 5; return 0; }")[1]
    assert isinstance(stmt.expr, Assign)
    assert isinstance(stmt.expr.target, Index)
    assert isinstance(stmt.expr.target.base, Index)


def test_declaration_forms():
    (decl,) = [s for s in body_of("int main(){ int a = 1, b, *p; return 0; }")
               if isinstance(s, Declaration)]
    names = [d.name for d in decl.declarators]
    assert names == ["a", "b", "p"]
    assert decl.declarators[2].pointer == 1
    assert decl.declarators[0].init == IntLit("1")


def test_init_list():
    decl = body_of("int main(){ int a[3] = {1, 2, 3}; return 0; }")[0]
    init = decl.declarators[0].init
    assert len(init.items) == 3


def test_do_while_and_ternary():
    body = body_of("int main(){ int a; a = 0; do a = a + 1; while (a < 3); a = a > 1 ? 1 : 0; return a; }")
    assert any(isinstance(s, DoWhile) for s in body)
    assert any(isinstance(s, ExprStmt) and isinstance(s.expr, Assign)
               and isinstance(s.expr.value, Ternary) for s in body)


def test_else_if_chain():
    body = body_of("int main(){ int a; a=1; if (a<1) a=0; else if (a<2) a=1; else a=2; return a; }")
    chain = next(s for s in body if isinstance(s, If))
    assert isinstance(chain.other, If)


def test_comma_operator_in_for():
    body = body_of("int main(){ int i; int j; for (i = 0, j = 9; i < j; i = i + 1) j = j - 1; return j; }")
    loop = next(s for s in body if not isinstance(s, (Declaration, Return)))
    assert isinstance(loop.init.expr, Binary) and loop.init.expr.op == ","


def test_precedence_shapes():
    stmt = body_of("int main(){ int a; a = 1 + 2 * 3; return a; }")[1]
    assert stmt.expr.value == Binary("+", IntLit("1"), Binary("*", IntLit("2"), IntLit("3")))
    stmt = body_of("int main(){ int a; a = (1 + 2) * 3; return a; }")[1]
    assert stmt.expr.value == Binary("*", Binary("+", IntLit("1"), IntLit("2")), IntLit("3"))


def test_assignment_right_associative():
    stmt = body_of("int main(){ int a; int b; a = b = 2; return a; }")[2]
    assert isinstance(stmt.expr.value, Assign)


def test_char_and_string_literals_verbatim():
    body = body_of(r"""int main(){ char c; c = '\n'; printf("a b\t"); return 0; }""")
    assert body[1].expr.value.text == r"'\n'"
    assert body[2].expr.args[0].text == '"a b\\t"'


def test_void_function_and_empty_params():
    ast = parse("void report(void) { return; }\nint main(){ report(); return 0; }")
    report = ast.functions[0]
    assert report.return_type == "void" and report.params == ()


def test_duplicate_parameter_names_rejected():
    with pytest.raises(CSyntaxError):
        parse("int f(int a, int a) { return a; }")


def test_no_main_flag():
    ast = parse("int helper() { return 1; }")
    assert ast.no_main


def test_empty_input_rejected():
    with pytest.raises(CSyntaxError):
        parse("   \n  ")
    with pytest.raises(CSyntaxError):
        parse("#include <stdio.h>\n")


def _walk_spans(node, out):
    if dataclasses.is_dataclass(node):
        if hasattr(node, "span"):
            out.append(node.span)
        for f in dataclasses.fields(node):
            _walk_spans(getattr(node, f.name), out)
    elif isinstance(node, tuple):
        for x in node:
            _walk_spans(x, out)


@pytest.mark.parametrize("src", [WITHDRAW_CORRECT, CALL_CHAIN, BRANCH_SWAP_A])
def test_spans_inside_source_bounds(src):
    ast = parse(src)
    lines = src.splitlines()
    spans = []
    _walk_spans(ast, spans)
    assert spans
    for span in spans:
        assert 1 <= span.line <= len(lines)
        assert span.col >= 1


@pytest.mark.parametrize("src", [
    "int main(){return 0;}",
    WITHDRAW_CORRECT,
    CALL_CHAIN,
    BRANCH_SWAP_A,
    "int main(){ int a[2][2] = {{1, 2}, {3, 4}}; a[0][1] += 2; a[1][1]++; return -a[0][1]; }",
    "int main(){ int i; int s; s = 0; for (i = 0; i < 5; i++) if (i % 2 == 0) s += i; return s; }",
])
def test_pretty_round_trip(src):
    ast = parse(src)
    assert parse(pretty(ast)) == ast


def test_pretty_round_trip_over_generated_corpus(rng):
    from ctutor import synthetic

    for _ in range(40):
        ast = synthetic.make_template(rng, helpers=rng.randrange(0, 3), size=9)
        printed = pretty(ast)
        reparsed = parse(printed)
        assert parse(pretty(reparsed)) == reparsed
