# -*- coding: utf-8 -*-
"""
Recursive-descent parser for formula text.

Grammar (whitespace-insensitive)::

    formula := quant | impl
    quant   := ("forall" | "exists") varlist formula | "min" var "{" formula "}"
    impl    := disj [ "->" formula ]
    disj    := conj { "or" conj }
    conj    := neg { "and" neg }
    neg     := "not" neg | "(" formula ")" | atom
    atom    := term ("=" | "!=" | "<=" | "<" | ">=" | ">") term
    term    := factor { "|" factor }
    factor  := prim { "&" prim }
    prim    := var | "(" term ")"

``&`` and ``|`` are lattice meet and join; the connectives are words.
"""

import logging
import re
from typing import List, NamedTuple, Optional

from .exceptions import FormulaSyntaxError
from .logic import (
    KEYWORDS,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Join,
    Leq,
    Lt,
    Meet,
    Min,
    Not,
    Or,
    Term,
    Var,
)

logger = logging.getLogger(__name__)

_TOKENS = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>->|!=|<=|>=|[=<>(){},&|]))")


class Token(NamedTuple):
    kind: str  # "name", "op" or "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while True:
        match = _TOKENS.match(text, pos)
        if match is None:
            rest = text[pos:]
            if rest.strip() == "":
                # a trailing line break is not part of the last line
                tokens.append(Token("end", "", len(text.rstrip("\r\n"))))
                return tokens
            start = pos + len(rest) - len(rest.lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start, text)
        kind = "name" if match.group("name") else "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()


class Parser:
    """One parse of one text; ``save``/``restore`` give backtracking."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self._stack: List[int] = []

    @property
    def next(self) -> Token:
        return self.tokens[self.pos]

    def save(self):
        self._stack.append(self.pos)

    def restore(self):
        self.pos = self._stack.pop()

    def discard(self):
        self._stack.pop()

    def error(self, message: str, token: Optional[Token] = None) -> FormulaSyntaxError:
        token = token or self.next
        found = "end of input" if token.kind == "end" else repr(token.text)
        return FormulaSyntaxError(f"{message}, found {found}", token.position, self.text)

    def at(self, text: str) -> bool:
        return self.next.text == text and self.next.kind != "end"

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        token = self.next
        self.pos += 1
        return token

    def variable(self) -> str:
        token = self.next
        if token.kind != "name" or token.text in KEYWORDS:
            raise self.error("expected a variable")
        self.pos += 1
        return token.text

    # formulas

    def parse(self) -> Formula:
        formula = self.formula()
        if self.next.kind != "end":
            raise self.error("unexpected trailing input")
        return formula

    def formula(self) -> Formula:
        if self.at("forall") or self.at("exists"):
            kind = Forall if self.next.text == "forall" else Exists
            self.pos += 1
            names = [self.variable()]
            while self.at(","):
                self.pos += 1
                names.append(self.variable())
            body = self.formula()
            for name in reversed(names):
                body = kind(name, body)
            return body
        if self.at("min"):
            self.pos += 1
            name = self.variable()
            self.expect("{")
            body = self.formula()
            self.expect("}")
            return Min(name, body)
        return self.implication()

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.pos += 1
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.at("or"):
            self.pos += 1
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.negation()
        while self.at("and"):
            self.pos += 1
            out = And(out, self.negation())
        return out

    def negation(self) -> Formula:
        if self.at("not"):
            self.pos += 1
            return Not(self.negation())
        if self.at("("):
            # "(" opens either a term of an atom or a parenthesized formula
            self.save()
            try:
                atom = self.atom()
            except FormulaSyntaxError as atom_error:
                self.restore()
                self.expect("(")
                try:
                    inner = self.formula()
                    self.expect(")")
                except FormulaSyntaxError as formula_error:
                    raise max(atom_error, formula_error, key=lambda e: e.position) from None
                return inner
            self.discard()
            return atom
        return self.atom()

    def atom(self) -> Formula:
        left = self.term()
        token = self.next
        relation = token.text if token.kind == "op" else None
        if relation not in ("=", "!=", "<=", "<", ">=", ">"):
            raise self.error("expected a comparison")
        self.pos += 1
        right = self.term()
        if relation == "=":
            return Eq(left, right)
        if relation == "!=":
            return Not(Eq(left, right))
        if relation == "<=":
            return Leq(left, right)
        if relation == "<":
            return Lt(left, right)
        if relation == ">=":
            return Leq(right, left)
        return Lt(right, left)

    # terms

    def term(self) -> Term:
        out = self.factor()
        while self.at("|"):
            self.pos += 1
            out = Join(out, self.factor())
        return out

    def factor(self) -> Term:
        out = self.primary()
        while self.at("&"):
            self.pos += 1
            out = Meet(out, self.primary())
        return out

    def primary(self) -> Term:
        if self.at("("):
            self.pos += 1
            inner = self.term()
            self.expect(")")
            return inner
        return Var(self.variable())


def parse(text: str) -> Formula:
    """
    Read a formula.

    Raises
    ------
    FormulaSyntaxError
        With the character position of the offending token
    """
    formula = Parser(text).parse()
    logger.debug(f"parsed {formula}")
    return formula


def parse_term(text: str) -> Term:
    parser = Parser(text)
    term = parser.term()
    if parser.next.kind != "end":
        raise parser.error("unexpected trailing input")
    return term
