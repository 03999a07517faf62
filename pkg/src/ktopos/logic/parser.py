"""Text syntax for formulas.

Grammar, loosest first::

    imp  := or ('->' imp)?          right associative
    or   := and ('|' and)*
    and  := un ('&' un)*
    un   := '~' un | atom
    atom := 'true' | 'false' | IDENT | '(' imp ')'

Unicode ``¬ ∧ ∨ → ⊤ ⊥`` and ``!`` for negation are accepted as well.  The
printer emits the ASCII forms with the fewest parentheses that re-parse to the
same tree.
"""

from __future__ import annotations

import re

from ..errors import FormulaSyntaxError
from .formula import AND, BOT, IMP, OR, TOP, VAR, BOTTOM, TRUE, And, Formula, Imp, Not, Or, Var

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<imp>->|→)
  | (?P<not>~|¬|!)
  | (?P<and>&|∧)
  | (?P<or>\||∨)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<top>⊤)
  | (?P<bot>⊥)
  | (?P<ident>[a-zA-Z][a-zA-Z0-9_]*)
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "ident" and value in ("true", "false"):
                kind = "top" if value == "true" else "bot"
            out.append((kind, value, pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self, kind):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {kind}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def imp(self):
        left = self.disj()
        if self.peek() == "imp":
            self.i += 1
            return Imp(left, self.imp())
        return left

    def disj(self):
        f = self.conj()
        while self.peek() == "or":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "and":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.peek() == "not":
            self.i += 1
            return Not(self.unary())
        return self.atom()

    def atom(self):
        kind, value, pos = self.tokens[self.i]
        if kind == "ident":
            self.i += 1
            return Var(value)
        if kind == "top":
            self.i += 1
            return TRUE
        if kind == "bot":
            self.i += 1
            return BOTTOM
        if kind == "lp":
            self.i += 1
            f = self.imp()
            self.take("rp")
            return f
        what = "end of input" if kind == "end" else repr(value)
        raise FormulaSyntaxError(f"expected a formula, found {what}", self.text, pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.imp()
    kind, value, pos = p.tokens[p.i]
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {value!r}", text, pos)
    return f


# binding strength for printing; negation binds tightest
_PREC = {IMP: 1, OR: 2, AND: 3}
_NEG_PREC = 4
_ATOM_PREC = 5


def _prec(f: Formula) -> int:
    if f.kind in (VAR, BOT, TOP):
        return _ATOM_PREC
    if f.is_neg:
        return _NEG_PREC
    return _PREC[f.kind]


def to_text(f: Formula) -> str:
    k = f.kind
    if k == VAR:
        return f.name
    if k == BOT:
        return "false"
    if k == TOP:
        return "true"
    if f.is_neg:
        inner = to_text(f.left)
        return "~" + (inner if _prec(f.left) >= _NEG_PREC else f"({inner})")
    p = _PREC[k]
    left, right = to_text(f.left), to_text(f.right)
    if k == IMP:
        # right associative: parenthesise an implication on the left
        if _prec(f.left) <= p:
            left = f"({left})"
        if _prec(f.right) < p:
            right = f"({right})"
        return f"{left} -> {right}"
    # & and | associate to the left
    if _prec(f.left) < p:
        left = f"({left})"
    if _prec(f.right) <= p:
        right = f"({right})"
    op = " & " if k == AND else " | "
    return left + op + right
