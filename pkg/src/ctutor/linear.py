"""Linear program representation: flat token lists plus postfix expressions.

The serialized text form defined here (one token per line, `FUNC <name>`
section headers, `E:`-prefixed postfix atom lists) is the canonical persisted
representation. It is what golden tests pin down and what the store keeps,
so it must stay byte-stable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .spans import Span

_NOSPAN = Span(0, 0, 0, 0)

# Token kinds
HDR = "HDR"        # function header, payload = arity
OPEN = "OPEN"      # block open
CLOSE = "CLOSE"    # block close
ELSE = "ELSE"
DECL = "DECL"      # payload = base type
EXPR = "EXPR"      # payload = postfix atoms
IF = "IF"          # payload = condition atoms
LOOP = "LOOP"      # payload = condition atoms
RET = "RET"        # payload = atoms or None

EXPR_KINDS = frozenset({EXPR, IF, LOOP, RET})


# --- postfix atoms ----------------------------------------------------------

@dataclass(frozen=True)
class VarRef:
    ordinal: int  # 1-based first-use rank within the enclosing expression


@dataclass(frozen=True)
class Name:
    """Raw identifier, only present before variable renaming."""

    name: str


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class CallRef:
    callee: str
    argc: int


@dataclass(frozen=True)
class Operator:
    symbol: str
    arity: int


Atom = VarRef | Name | Literal | CallRef | Operator

# Closed operator vocabulary; arity is implied by the symbol on the wire.
OP_ARITY = {
    "+": 2, "-": 2, "*": 2, "/": 2, "%": 2,
    "<": 2, "<=": 2, ">": 2, ">=": 2, "==": 2, "!=": 2,
    "&&": 2, "||": 2, "&": 2, "|": 2, "^": 2, "<<": 2, ">>": 2,
    "=": 2, ",": 2, "[]": 2,
    "!": 1, "~": 1, "neg": 1, "pos": 1, "deref": 1, "addr": 1,
    "++pre": 1, "++post": 1, "--pre": 1, "--post": 1,
    "?:": 3,
}


def postfix_valid(atoms: tuple[Atom, ...]) -> bool:
    """Stack simulation: no underflow, exactly one value left."""
    depth = 0
    for a in atoms:
        if isinstance(a, (VarRef, Name, Literal)):
            depth += 1
        elif isinstance(a, CallRef):
            if depth < a.argc:
                return False
            depth -= a.argc - 1
        elif isinstance(a, Operator):
            if depth < a.arity:
                return False
            depth -= a.arity - 1
        else:
            return False
    return depth == 1


# --- tokens -----------------------------------------------------------------

@dataclass(frozen=True)
class LinearToken:
    """One normalized statement-level token.

    Payload drives equality; the span is bookkeeping for hint anchoring.
    """

    kind: str
    arity: Optional[int] = None                 # HDR
    base_type: Optional[str] = None             # DECL
    expr: Optional[tuple[Atom, ...]] = None     # EXPR / IF / LOOP / RET
    span: Span = field(default=_NOSPAN, compare=False, repr=False)


def header(arity: int, span: Span = _NOSPAN) -> LinearToken:
    return LinearToken(HDR, arity=arity, span=span)


def block_open(span: Span = _NOSPAN) -> LinearToken:
    return LinearToken(OPEN, span=span)


def block_close(span: Span = _NOSPAN) -> LinearToken:
    return LinearToken(CLOSE, span=span)


def else_marker(span: Span = _NOSPAN) -> LinearToken:
    return LinearToken(ELSE, span=span)


def decl(base_type: str, span: Span = _NOSPAN) -> LinearToken:
    return LinearToken(DECL, base_type=base_type, span=span)


def expr_token(kind: str, atoms: Optional[tuple[Atom, ...]], span: Span = _NOSPAN) -> LinearToken:
    assert kind in EXPR_KINDS
    return LinearToken(kind, expr=atoms, span=span)


@dataclass(frozen=True)
class LinearFunction:
    name: str
    tokens: tuple[LinearToken, ...]


@dataclass(frozen=True)
class LinearProgram:
    functions: tuple[LinearFunction, ...]
    dropped: tuple[str, ...] = ()
    no_main: bool = False

    def token_count(self) -> int:
        return sum(len(f.tokens) for f in self.functions)


# --- canonical text form ----------------------------------------------------

def _encode_text(text: str) -> str:
    return (
        text.replace("%", "%25").replace(" ", "%20")
        .replace("\t", "%09").replace("\n", "%0A").replace("\r", "%0D")
    )


def _decode_text(text: str) -> str:
    return re.sub(r"%(20|25|09|0A|0D)", lambda m: {
        "20": " ", "25": "%", "09": "\t", "0A": "\n", "0D": "\r",
    }[m.group(1)], text)


_VARREF_RE = re.compile(r"^v(\d+)$")
_CALLREF_RE = re.compile(r"^([A-Za-z_]\w*)@(\d+)$")
_INITLIST_RE = re.compile(r"^\{\}(\d+)$")


def atom_to_text(a: Atom) -> str:
    if isinstance(a, VarRef):
        return f"v{a.ordinal}"
    if isinstance(a, Operator):
        if a.symbol == "{}":
            return f"{{}}{a.arity}"
        return a.symbol
    if isinstance(a, CallRef):
        return f"{a.callee}@{a.argc}"
    if isinstance(a, Literal):
        return _encode_text(a.text)
    raise ValueError(f"cannot serialize pre-renaming atom {a!r}")


def atom_from_text(text: str) -> Atom:
    m = _VARREF_RE.match(text)
    if m:
        return VarRef(int(m.group(1)))
    if text in OP_ARITY:
        return Operator(text, OP_ARITY[text])
    m = _INITLIST_RE.match(text)
    if m:
        return Operator("{}", int(m.group(1)))
    m = _CALLREF_RE.match(text)
    if m:
        return CallRef(m.group(1), int(m.group(2)))
    return Literal(_decode_text(text))


def _atoms_text(atoms: tuple[Atom, ...]) -> str:
    return " ".join(atom_to_text(a) for a in atoms)


def token_to_text(t: LinearToken) -> str:
    if t.kind == HDR:
        return f"HDR {t.arity}"
    if t.kind == OPEN:
        return "OPEN"
    if t.kind == CLOSE:
        return "CLOSE"
    if t.kind == ELSE:
        return "ELSE"
    if t.kind == DECL:
        return f"DECL {t.base_type}"
    if t.kind == EXPR:
        return f"E: {_atoms_text(t.expr)}"
    if t.kind == IF:
        return f"IF: {_atoms_text(t.expr)}"
    if t.kind == LOOP:
        return f"LOOP: {_atoms_text(t.expr)}"
    if t.kind == RET:
        return "RET" if t.expr is None else f"RET: {_atoms_text(t.expr)}"
    raise ValueError(f"unknown token kind {t.kind!r}")


def token_from_text(line: str) -> LinearToken:
    if line == "OPEN":
        return block_open()
    if line == "CLOSE":
        return block_close()
    if line == "ELSE":
        return else_marker()
    if line == "RET":
        return expr_token(RET, None)
    tag, _, rest = line.partition(" ")
    if tag == "HDR":
        return header(int(rest))
    if tag == "DECL":
        return decl(rest)
    atoms = tuple(atom_from_text(a) for a in rest.split(" ") if a)
    if tag == "E:":
        return expr_token(EXPR, atoms)
    if tag == "IF:":
        return expr_token(IF, atoms)
    if tag == "LOOP:":
        return expr_token(LOOP, atoms)
    if tag == "RET:":
        return expr_token(RET, atoms)
    raise ValueError(f"unknown token line {line!r}")


def program_to_text(p: LinearProgram) -> str:
    lines = []
    if p.no_main:
        lines.append("NOMAIN")
    for f in p.functions:
        lines.append(f"FUNC {f.name}")
        lines.extend(token_to_text(t) for t in f.tokens)
    if p.dropped:
        lines.append("DROPPED " + " ".join(p.dropped))
    return "\n".join(lines) + "\n"


def program_from_text(text: str) -> LinearProgram:
    functions = []
    dropped: tuple[str, ...] = ()
    no_main = False
    name = None
    tokens: list[LinearToken] = []

    def flush():
        if name is not None:
            functions.append(LinearFunction(name, tuple(tokens)))

    for line in text.splitlines():
        if not line.strip():
            continue
        if line == "NOMAIN":
            no_main = True
        elif line.startswith("FUNC "):
            flush()
            name = line[5:]
            tokens = []
        elif line.startswith("DROPPED "):
            dropped = tuple(line[8:].split())
        else:
            tokens.append(token_from_text(line))
    flush()
    return LinearProgram(tuple(functions), dropped, no_main)
