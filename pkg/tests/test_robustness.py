"""Adversarial inputs: corrupted sources must fail with diagnostics, never
hang or crash, and tricky literals must survive the text round trip."""

import random

import pytest

from ctutor import synthetic
from ctutor.cparse import parse
from ctutor.linear import (
    Literal, atom_from_text, atom_to_text, program_from_text, program_to_text,
)
from ctutor.normalize import normalize
from ctutor.spans import SourceError
from conftest import WITHDRAW_CORRECT, CALL_CHAIN


@pytest.mark.parametrize("seed", range(6))
def test_parser_survives_random_corruption(seed):
    rng = random.Random(seed)
    base = [WITHDRAW_CORRECT, CALL_CHAIN] + [
        synthetic.render(synthetic.make_template(rng, helpers=1, size=6))
        for _ in range(3)
    ]
    for src in base:
        for _ in range(40):
            text = list(src)
            for _ in range(rng.randrange(1, 4)):
                op = rng.random()
                pos = rng.randrange(len(text))
                if op < 0.4 and len(text) > 1:
                    del text[pos]
                elif op < 0.8:
                    text.insert(pos, rng.choice(";){}(=+*#\"'x1"))
                else:
                    text[pos] = rng.choice(";){}(=+*\"'x1")
            mutated = "".join(text)
            try:
                ast = parse(mutated)
                normalize(ast)  # parseable mutants must still normalize
            except SourceError:
                pass  # rejected with a located diagnostic: fine


@pytest.mark.parametrize("text", [
    '"%20"', '"% 25"', '"v1"', '"f@2"', '"a:b=c"', "'v'", '" "',
    '"++pre"', '"{}"', '"break"',
])
def test_tricky_literals_round_trip(text):
    atom = Literal(text)
    assert atom_from_text(atom_to_text(atom)) == atom


def test_percent_and_space_heavy_program_round_trips():
    src = r'''
    int main() {
        printf("%d %% done, tab:\t end");
        printf("%20s", "v1 f@2 {}3");
        return 0;
    }
    '''
    program = normalize(parse(src))
    text = program_to_text(program)
    assert program_from_text(text) == program
    assert program_to_text(program_from_text(text)) == text


def test_deeply_nested_blocks_parse_and_balance():
    depth = 60
    src = "int main(){" + "{" * depth + "int x;" + "}" * depth + "}"
    program = normalize(parse(src))
    tokens = program.functions[0].tokens
    level = 0
    for t in tokens:
        level += {"OPEN": 1, "CLOSE": -1}.get(t.kind, 0)
        assert level >= 0
    assert level == 0


def test_long_expression_chain():
    chain = " + ".join(str(k) for k in range(200))
    program = normalize(parse(f"int main(){{ int s; s = {chain}; return s; }}"))
    expr = program.functions[0].tokens[3].expr
    assert len(expr) == 200 + 199 + 2  # literals, plus operators, target, '='
