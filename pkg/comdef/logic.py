# -*- coding: utf-8 -*-
"""
Abstract syntax of the first-order language of lattices.

Terms are built from variables with meet ``&`` and join ``|``. Formulas are
term (in)equalities under the usual connectives and quantifiers, plus the
``min`` macro: ``min x { F }`` holds at the minimal elements satisfying ``F``.
Every node is an immutable dataclass; ``str(node)`` is the canonical text that
:func:`comdef.parser.parse` reads back.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Set, Union

logger = logging.getLogger(__name__)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"forall", "exists", "min", "and", "or", "not"})


def _check_name(name: str):
    if not isinstance(name, str) or not _IDENT.match(name) or name in KEYWORDS:
        raise ValueError(f"invalid variable name {name!r}")


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        _check_name(self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"

    def __str__(self):
        return format_term(self)


Term = Union[Var, Meet, Join]


class Formula:
    """Base class of formula nodes."""

    def __str__(self):
        return format_formula(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return Implies(self, other)


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Leq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Lt(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        _check_name(self.var)


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def __post_init__(self):
        _check_name(self.var)


@dataclass(frozen=True, repr=False)
class Min(Formula):
    """Minimal elements of the set ``body`` defines in ``var``."""

    var: str
    body: Formula

    def __post_init__(self):
        _check_name(self.var)


ATOMS = (Eq, Leq, Lt)
BINARY = (And, Or, Implies)
QUANTIFIERS = (Forall, Exists)

for _cls in (Eq, Leq, Lt, Not, And, Or, Implies, Forall, Exists, Min):
    _cls.__repr__ = lambda self: f"<{type(self).__name__} {format_formula(self)}>"


def forall(names: Iterable[str], body: Formula) -> Formula:
    """``forall y, z (body)`` as nested single quantifiers."""
    for name in reversed(list(names)):
        body = Forall(name, body)
    return body


def exists(names: Iterable[str], body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = Exists(name, body)
    return body


def conjunction(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    out = parts[0]
    for part in parts[1:]:
        out = And(out, part)
    return out


# variables


def term_vars(term: Term) -> List[str]:
    """Variables of ``term`` in order of first occurrence."""
    out: List[str] = []
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t.name not in out:
                out.append(t.name)
        else:
            stack.append(t.right)
            stack.append(t.left)
    return out


def free_vars(formula: Formula) -> List[str]:
    """
    Free variables in order of first occurrence.

    ``min x { F }`` is a formula in ``x``, so ``x`` stays free and counts as
    occurring first.
    """
    out: List[str] = []

    def add(name):
        if name not in out:
            out.append(name)

    def walk(f, bound: frozenset):
        if isinstance(f, ATOMS):
            for name in term_vars(f.left) + term_vars(f.right):
                if name not in bound:
                    add(name)
        elif isinstance(f, Not):
            walk(f.body, bound)
        elif isinstance(f, BINARY):
            walk(f.left, bound)
            walk(f.right, bound)
        elif isinstance(f, QUANTIFIERS):
            walk(f.body, bound | {f.var})
        elif isinstance(f, Min):
            if f.var not in bound:
                add(f.var)
            walk(f.body, bound)
        else:
            raise TypeError(f"not a formula node: {f!r}")

    walk(formula, frozenset())
    return out


def all_vars(formula: Formula) -> Set[str]:
    """Every variable name used anywhere, bound or free."""
    out: Set[str] = set()
    for node in walk(formula):
        if isinstance(node, ATOMS):
            out.update(term_vars(node.left))
            out.update(term_vars(node.right))
        elif isinstance(node, (Forall, Exists, Min)):
            out.add(node.var)
    return out


def walk(formula: Formula) -> Iterator[Formula]:
    """All formula nodes, parents before children."""
    stack = [formula]
    while stack:
        f = stack.pop()
        yield f
        if isinstance(f, BINARY):
            stack.append(f.right)
            stack.append(f.left)
        elif isinstance(f, (Not, Forall, Exists, Min)):
            stack.append(f.body)


def size(formula: Formula) -> int:
    """Number of formula nodes."""
    return sum(1 for _ in walk(formula))


def fresh_name(avoid: Iterable[str], base: str = "v") -> str:
    avoid = set(avoid)
    for i in itertools.count(1):
        name = f"{base}_{i}"
        if name not in avoid:
            return name


# substitution and expansion


def substitute_term(term: Term, name: str, value: Term) -> Term:
    if isinstance(term, Var):
        return value if term.name == name else term
    return type(term)(substitute_term(term.left, name, value), substitute_term(term.right, name, value))


def substitute(formula: Formula, name: str, value: Term) -> Formula:
    """
    Replace free occurrences of variable ``name`` by ``value``.

    Bound variables that would capture a variable of ``value`` are renamed.
    A ``min`` node selecting ``name`` keeps its shape when ``value`` is a
    variable and is expanded otherwise.
    """
    value_vars = set(term_vars(value))

    def rec(f):
        if isinstance(f, ATOMS):
            return type(f)(substitute_term(f.left, name, value), substitute_term(f.right, name, value))
        if isinstance(f, Not):
            return Not(rec(f.body))
        if isinstance(f, BINARY):
            return type(f)(rec(f.left), rec(f.right))
        if isinstance(f, QUANTIFIERS):
            if f.var == name or name not in free_vars(f.body):
                return f
            if f.var in value_vars:
                renamed = fresh_name(all_vars(f) | value_vars | {name}, f.var.split("_")[0])
                f = type(f)(renamed, substitute(f.body, f.var, Var(renamed)))
            return type(f)(f.var, rec(f.body))
        if isinstance(f, Min):
            if f.var == name:
                if isinstance(value, Var) and value.name not in set(free_vars(f.body)) - {name}:
                    return Min(value.name, substitute(f.body, name, value))
                return substitute(expand_min(f), name, value)
            if name not in free_vars(f.body):
                return f
            if f.var in value_vars:
                # x is free in min x { F }: a value mentioning x needs the expansion
                return substitute(expand_min(f), name, value)
            return Min(f.var, rec(f.body))
        raise TypeError(f"not a formula node: {f!r}")

    return rec(formula)


def expand_min(formula: Min) -> Formula:
    """``min x { F }`` as ``F(x) and forall y (y < x -> not F(y))`` with ``y`` fresh."""
    y = fresh_name(all_vars(formula), "y")
    smaller = Not(substitute(formula.body, formula.var, Var(y)))
    return And(formula.body, Forall(y, Implies(Lt(Var(y), Var(formula.var)), smaller)))


def expand(formula: Formula) -> Formula:
    """
    Eliminate ``<=``, ``<`` and ``min``.

    ``a <= b`` becomes ``a & b = a``; ``a < b`` becomes ``a <= b and a != b``.
    Free variables are preserved.
    """
    if isinstance(formula, Eq):
        return formula
    if isinstance(formula, Leq):
        return Eq(Meet(formula.left, formula.right), formula.left)
    if isinstance(formula, Lt):
        return And(expand(Leq(formula.left, formula.right)), Not(Eq(formula.left, formula.right)))
    if isinstance(formula, Not):
        return Not(expand(formula.body))
    if isinstance(formula, BINARY):
        return type(formula)(expand(formula.left), expand(formula.right))
    if isinstance(formula, QUANTIFIERS):
        return type(formula)(formula.var, expand(formula.body))
    if isinstance(formula, Min):
        return expand(expand_min(formula))
    raise TypeError(f"not a formula node: {formula!r}")


def rename_bound(formula: Formula, prefix: str = "b") -> Formula:
    """Alpha-rename every bound variable to ``prefix_<n>``."""
    counter = itertools.count(1)
    taken = all_vars(formula)

    def next_name():
        while True:
            name = f"{prefix}_{next(counter)}"
            if name not in taken:
                return name

    def rec(f):
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(rec(f.body))
        if isinstance(f, BINARY):
            return type(f)(rec(f.left), rec(f.right))
        if isinstance(f, QUANTIFIERS):
            name = next_name()
            return type(f)(name, rec(substitute(f.body, f.var, Var(name))))
        if isinstance(f, Min):
            return Min(f.var, rec(f.body))
        raise TypeError(f"not a formula node: {f!r}")

    return rec(formula)


def alpha_normal(formula: Formula) -> Formula:
    """
    Rename free variables to ``f_1, f_2, ...`` by first occurrence and bound
    variables to ``b_<depth>``. Two formulas have equal normal forms iff they
    differ only in variable names.
    """
    free = {name: f"f_{i}" for i, name in enumerate(free_vars(formula), 1)}

    def term(t, names):
        if isinstance(t, Var):
            return Var(names[t.name])
        return type(t)(term(t.left, names), term(t.right, names))

    def rec(f, names, depth):
        if isinstance(f, ATOMS):
            return type(f)(term(f.left, names), term(f.right, names))
        if isinstance(f, Not):
            return Not(rec(f.body, names, depth))
        if isinstance(f, BINARY):
            return type(f)(rec(f.left, names, depth), rec(f.right, names, depth))
        if isinstance(f, QUANTIFIERS):
            name = f"b_{depth + 1}"
            return type(f)(name, rec(f.body, {**names, f.var: name}, depth + 1))
        if isinstance(f, Min):
            return Min(names[f.var], rec(f.body, names, depth))
        raise TypeError(f"not a formula node: {f!r}")

    return rec(formula, free, 0)


# printing


def _term_operand(term: Term, parent: type, right: bool) -> str:
    if isinstance(term, Var):
        return term.name
    if type(term) is parent and not right:
        return format_term(term)
    return f"({format_term(term)})"


def format_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    op = " & " if isinstance(term, Meet) else " | "
    return _term_operand(term.left, type(term), False) + op + _term_operand(term.right, type(term), True)


_CONNECTIVE = {And: "and", Or: "or", Implies: "->"}
_RELATION = {Eq: "=", Leq: "<=", Lt: "<"}


def format_formula(formula: Formula, operand: bool = False) -> str:
    """
    Canonical text.

    Binary connectives are always parenthesized; quantifiers and ``min`` are
    parenthesized when they are an operand of another connective.
    """
    f = formula
    if isinstance(f, ATOMS):
        return f"{format_term(f.left)} {_RELATION[type(f)]} {format_term(f.right)}"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{format_term(f.body.left)} != {format_term(f.body.right)}"
        return "not " + format_formula(f.body, operand=True)
    if isinstance(f, BINARY):
        left = format_formula(f.left, operand=True)
        right = format_formula(f.right, operand=True)
        return f"({left} {_CONNECTIVE[type(f)]} {right})"
    if isinstance(f, QUANTIFIERS):
        names = [f.var]
        body = f.body
        while type(body) is type(f):
            names.append(body.var)
            body = body.body
        if isinstance(body, BINARY):
            inner = format_formula(body)
        else:
            inner = f"({format_formula(body)})"
        text = f"{'forall' if isinstance(f, Forall) else 'exists'} {', '.join(names)} {inner}"
        return f"({text})" if operand else text
    if isinstance(f, Min):
        text = f"min {f.var} {{ {format_formula(f.body)} }}"
        return f"({text})" if operand else text
    raise TypeError(f"not a formula node: {f!r}")
