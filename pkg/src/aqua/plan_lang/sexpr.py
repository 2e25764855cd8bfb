"""Minimal s-expression reader with line/column tracking.

Produces nested lists of Symbol leaves; enough for the STRIPS-with-typing
domain files this package consumes.
"""

from __future__ import annotations

from .errors import DomainSyntaxError


class Symbol(str):
    """An atomic token. Carries the source position it was read from."""

    line: int
    col: int

    def __new__(cls, text, line=0, col=0):
        obj = super().__new__(cls, text)
        obj.line = line
        obj.col = col
        return obj


def tokenize(text):
    """Yield (token, line, col) triples. ';' starts a comment to end of line."""
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
                col += 1
            yield text[start:i], line, start_col


def parse_sexpr(text):
    """Parse one top-level s-expression; anything after it is an error."""
    forms = parse_all(text)
    if len(forms) != 1:
        raise DomainSyntaxError(f"expected exactly one top-level form, got {len(forms)}")
    return forms[0]


def parse_all(text):
    stack = [[]]
    last_pos = (1, 1)
    for tok, ln, co in tokenize(text):
        last_pos = (ln, co)
        if tok == "(":
            new = []
            stack[-1].append(new)
            stack.append(new)
        elif tok == ")":
            if len(stack) == 1:
                raise DomainSyntaxError("unbalanced ')'", ln, co)
            stack.pop()
        else:
            stack[-1].append(Symbol(tok, ln, co))
    if len(stack) != 1:
        raise DomainSyntaxError("unbalanced '(': input ended inside a form", *last_pos)
    return stack[0]
