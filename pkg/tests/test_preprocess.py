import pytest

from ctutor.cparse import parse
from ctutor.cparse.preprocess import SourceUnit, strip_preprocessor
from ctutor.spans import PreprocessError


def strip(text):
    return strip_preprocessor(SourceUnit("t.c", text)).text


def test_directive_removed_offsets_kept():
    out = strip("#include <stdio.h>\nint main(){}")
    assert "#" not in out and "include" not in out
    assert len(out) == len("#include <stdio.h>\nint main(){}")
    assert out.splitlines()[1] == "int main(){}"


def test_directive_line_numbering_survives_to_spans():
    ast = parse("#include <stdio.h>\nint main(){}")
    assert ast.functions[0].span.line == 2


def test_line_comment_erased():
    out = strip("int x; // note\nint y;")
    assert "note" not in out
    assert out.startswith("int x; ")
    assert out.splitlines()[1] == "int y;"


def test_block_comment_single_space_semantics():
    out = strip("int/* gap */x;")
    assert "gap" not in out
    # masked region keeps offsets, so the tokens stay separated
    assert out.index("x") == "int/* gap */x;".index("x")


def test_block_comment_keeps_line_structure():
    src = "int a;\n/* one\ntwo\nthree */\nint b;"
    out = strip(src)
    assert out.count("\n") == src.count("\n")
    ast = parse(src)
    assert ast.globals[1].span.line == 5


def test_unterminated_comment_reports_opening_span():
    with pytest.raises(PreprocessError) as err:
        strip("/* a")
    assert err.value.span.line == 1
    assert err.value.span.col == 1


def test_comment_markers_inside_strings_kept():
    out = strip('char *s = "/* not a comment // ";')
    assert "/* not a comment // " in out


def test_directive_continuation_blanked():
    out = strip("#define X \\\n  1\nint y;")
    assert "define" not in out and " 1" not in out.splitlines()[1]
    assert out.splitlines()[2] == "int y;"


def test_leading_whitespace_directive():
    out = strip("  #include <x.h>\nint z;")
    assert "include" not in out
