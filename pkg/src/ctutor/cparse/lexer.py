"""Hand-rolled lexer for the supported C subset."""

from __future__ import annotations

from dataclasses import dataclass

from ..spans import CSyntaxError, Span

KEYWORDS = {
    "int", "float", "double", "char", "void",
    "if", "else", "while", "do", "for", "return", "break", "continue",
}

# Recognized so the parser can reject them with a precise message.
REJECTED_KEYWORDS = {
    "switch", "case", "default", "goto", "struct", "union", "enum",
    "typedef", "sizeof", "static", "extern", "unsigned", "signed",
    "long", "short", "const",
}

PUNCT = [
    "<<=", ">>=",
    "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "->", "...",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "~", "&", "|", "^",
    "?", ":", ",", ";", "(", ")", "[", "]", "{", "}", ".",
]


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | rejected | int | float | char | string | punct | eof
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    toks = []
    i = 0
    n = len(text)
    line = 1
    col = 1

    def span(length, l=None, c=None):
        sl = line if l is None else l
        sc = col if c is None else c
        return Span(sl, sc, sl, sc + length)

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue

        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in KEYWORDS:
                kind = "keyword"
            elif word in REJECTED_KEYWORDS:
                kind = "rejected"
            else:
                kind = "ident"
            toks.append(Token(kind, word, span(j - i)))
            col += j - i
            i = j
            continue

        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            is_float = False
            if text[j] == "0" and j + 1 < n and text[j + 1] in "xX":
                j += 2
                while j < n and text[j] in "0123456789abcdefABCDEF":
                    j += 1
            else:
                while j < n and text[j].isdigit():
                    j += 1
                if j < n and text[j] == ".":
                    is_float = True
                    j += 1
                    while j < n and text[j].isdigit():
                        j += 1
                if j < n and text[j] in "eE":
                    k = j + 1
                    if k < n and text[k] in "+-":
                        k += 1
                    if k < n and text[k].isdigit():
                        is_float = True
                        j = k
                        while j < n and text[j].isdigit():
                            j += 1
            while j < n and text[j] in "fFlLuU":
                if text[j] in "fF":
                    is_float = True
                j += 1
            toks.append(Token("float" if is_float else "int", text[i:j], span(j - i)))
            col += j - i
            i = j
            continue

        if c == '"' or c == "'":
            quote = c
            j = i + 1
            start_line, start_col = line, col
            while j < n and text[j] != quote:
                if text[j] == "\\" and j + 1 < n:
                    j += 2
                elif text[j] == "\n":
                    raise CSyntaxError(span(1), "closing quote", "end of line")
                else:
                    j += 1
            if j >= n:
                raise CSyntaxError(span(1), "closing quote", "end of input")
            j += 1
            kind = "string" if quote == '"' else "char"
            toks.append(Token(kind, text[i:j], Span(start_line, start_col, line, start_col + (j - i))))
            col += j - i
            i = j
            continue

        for p in PUNCT:
            if text.startswith(p, i):
                toks.append(Token("punct", p, span(len(p))))
                col += len(p)
                i += len(p)
                break
        else:
            raise CSyntaxError(span(1), "a token", repr(c))

    toks.append(Token("eof", "", Span(line, col, line, col)))
    return toks
