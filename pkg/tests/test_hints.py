import random
import re

from ctutor import synthetic
from ctutor.cparse import parse
from ctutor.distance import Weights, program_distance
from ctutor.hints import (
    CHANGED_CONDITION, CHANGED_EXPRESSION, EXTRA, MISSING, HintConfig,
    filter_hints, hintset_to_dict, script_to_hints,
)
from ctutor.normalize import normalize
from conftest import WITHDRAW_CORRECT, WITHDRAW_MISSING_CHECK

W = Weights()
CFG = HintConfig()


def hints_between(student_src, neighbor_src):
    student = normalize(parse(student_src))
    neighbor = normalize(parse(neighbor_src))
    result = program_distance(student, neighbor, W)
    return result, script_to_hints(result, student, W), student


def test_withdraw_changed_condition_hint():
    result, hints, student = hints_between(WITHDRAW_MISSING_CHECK, WITHDRAW_CORRECT)
    assert len(hints) == 1
    hint = hints[0]
    assert hint.kind == CHANGED_CONDITION
    # the if sits on line 4 of the student's source
    assert hint.line == 4
    assert "condition" in hint.message


def test_withdraw_hint_does_not_leak_neighbor_content():
    result, hints, _ = hints_between(WITHDRAW_MISSING_CHECK, WITHDRAW_CORRECT)
    neighbor_idents = {"n", "f"}
    neighbor_literals = {'"%d %f"', '"%.2f"', "0.50", "5"}
    for h in hints:
        words = set(re.findall(r"[\w.\"%]+", h.message))
        assert not (words & neighbor_literals)
        # bare one-letter identifiers from the neighbor never show up
        assert not (words & neighbor_idents)


def test_empty_script_no_hints():
    result, hints, _ = hints_between(WITHDRAW_CORRECT, WITHDRAW_CORRECT)
    assert result.total == 0
    assert hints == []


def test_two_inserts_two_missing_hints_ranked():
    student = "int main(){ int a; a = 1; return a; }"
    neighbor = "int main(){ int a; a = 1; while (a < 9) { a = a + 2; } return a; }"
    result, hints, _ = hints_between(student, neighbor)
    missing = [h for h in hints if h.kind == MISSING]
    assert len(missing) >= 2
    assert [h.severity for h in hints] == sorted((h.severity for h in hints), reverse=True)


def test_delete_becomes_extra_construct():
    student = "int main(){ int a; a = 1; a = 2; a = 3; return a; }"
    neighbor = "int main(){ int a; a = 1; return a; }"
    _, hints, _ = hints_between(student, neighbor)
    assert any(h.kind == EXTRA for h in hints)


def test_changed_expression_kind():
    student = "int main(){ int a; a = 1 + 2; return a; }"
    neighbor = "int main(){ int a; a = 1 * 2 * 3; return a; }"
    _, hints, _ = hints_between(student, neighbor)
    assert any(h.kind == CHANGED_EXPRESSION for h in hints)


def test_hint_lines_anchor_to_student_source():
    student = "int main() {\n  int a;\n  a = 1;\n  return a;\n}\n"
    neighbor = "int main() {\n  int a;\n  a = 2;\n  return a;\n}\n"
    _, hints, _ = hints_between(student, neighbor)
    assert hints and hints[0].line == 3


# --- filtering ----------------------------------------------------------------

def test_zero_distance_empty_but_not_suppressed():
    hs = filter_hints([], neighbor_distance=0.0, student_size=30)
    assert hs.hints == () and not hs.suppressed


def test_too_many_operations_suppressed():
    result, hints, student = hints_between(
        "int main(){ int a; a = 1; return a; }",
        "int main(){ int a; int b; int c; a = 9; b = a * 2; c = b - a; "
        "while (a < 9) { a = a + 1; b = b + a; } if (b > c) { c = b; } return c; }",
    )
    assert len(hints) > CFG.max_ops
    hs = filter_hints(hints, result.total, student.token_count())
    assert hs.suppressed and hs.hints == ()


def test_small_fixes_returned():
    result, hints, student = hints_between(WITHDRAW_MISSING_CHECK, WITHDRAW_CORRECT)
    hs = filter_hints(hints, result.total, student.token_count())
    assert not hs.suppressed
    assert len(hs.hints) == 1


def test_top_hints_capped():
    hints = hints_between(
        "int main(){ int a; a = 1; a = 2; a = 3; a = 4; return a; }",
        "int main(){ int a; a = 9; a = 8; a = 7; a = 5; return a; }",
    )[1]
    assert len(hints) == 4
    hs = filter_hints(hints, 12.0, 40)
    assert len(hs.hints) == CFG.max_hints


def test_monotone_suppression():
    _, hints, student = hints_between(WITHDRAW_MISSING_CHECK, WITHDRAW_CORRECT)
    size = student.token_count()
    suppressed_seen = False
    for dist in range(0, 400, 10):
        hs = filter_hints(hints, float(dist), size)
        if suppressed_seen:
            assert hs.suppressed
        suppressed_seen = hs.suppressed


def test_distance_beyond_budget_suppressed():
    hs = filter_hints([], neighbor_distance=1e6, student_size=10)
    assert hs.suppressed


def test_no_leak_over_random_pairs():
    rng = random.Random(77)
    ident_re = re.compile(r"[A-Za-z_]\w*")
    for _ in range(25):
        a = synthetic.make_template(rng, helpers=rng.randrange(0, 2), size=6)
        b = synthetic.mutated(a, rng, edits=2)
        b = synthetic.alpha_renamed(b, rng)
        src_a, src_b = synthetic.render(a), synthetic.render(b)
        result, hints, _ = hints_between(src_a, src_b)
        neighbor_idents = set(ident_re.findall(src_b)) - set(ident_re.findall(src_a))
        neighbor_strings = set(re.findall(r'"[^"]*"', src_b))
        for h in hints:
            for ident in neighbor_idents:
                assert ident not in h.message.split()
            for s in neighbor_strings:
                assert s not in h.message


def test_full_script_reproduces_neighbor():
    from ctutor.distance import apply_script

    student = normalize(parse(WITHDRAW_MISSING_CHECK))
    neighbor = normalize(parse(WITHDRAW_CORRECT))
    result = program_distance(student, neighbor, W)
    for fe in result.per_function:
        source = student.functions[fe.source_index].tokens
        target = neighbor.functions[fe.target_index].tokens
        assert apply_script(source, list(fe.script)) == target


def test_payload_shape():
    result, hints, student = hints_between(WITHDRAW_MISSING_CHECK, WITHDRAW_CORRECT)
    payload = hintset_to_dict(filter_hints(hints, result.total, student.token_count()))
    assert set(payload) == {"suppressed", "neighbor_distance", "hints"}
    assert set(payload["hints"][0]) >= {"kind", "line", "message", "severity"}
