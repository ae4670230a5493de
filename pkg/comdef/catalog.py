# -*- coding: utf-8 -*-
"""
Named formulas defining sets of varieties in the lattice of commutative
semigroup varieties.

Every named subformula is inlined where it is used, with bound variables
drawn from a counter that is private to one :func:`build` call, so a built
formula never captures the caller's variables and two builds of the same
entry print identically.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from .evaluate import Evaluator, evaluator_for
from .exceptions import ArityError, ParamOutOfRange, UnknownName
from .lattice import ElementSubset, FiniteLattice
from .logic import (
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
    conjunction,
    exists,
    forall,
    free_vars,
)
from .parser import parse
from .utils import read_text, write_text

logger = logging.getLogger(__name__)

_REFERENCE = re.compile(r"builtin:(?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\[(?P<params>[^\]]*)\])?\Z")


class _Names:
    """Bound-variable names ``y1, y2, z1, ...`` for one build."""

    def __init__(self):
        self._counts: Dict[str, int] = {}

    def take(self, base: str) -> str:
        self._counts[base] = self._counts.get(base, 0) + 1
        return f"{base}{self._counts[base]}"


def _variable(term: Term) -> str:
    if not isinstance(term, Var):
        raise TypeError(f"this formula selects minimal elements and needs a variable, got {term}")
    return term.name


# atoms, neutral elements and chains


def atom(names: _Names, x: Term) -> Formula:
    y, z = names.take("y"), names.take("z")
    bottom = Forall(z, Leq(Var(y), Var(z)))
    return Exists(y, And(bottom, Min(_variable(x), Not(Eq(x, Var(y))))))


def neutral(names: _Names, x: Term) -> Formula:
    y, z = names.take("y"), names.take("z")
    Y, Z = Var(y), Var(z)
    left = Meet(Meet(Join(x, Y), Join(Y, Z)), Join(Z, x))
    right = Join(Join(Meet(x, Y), Meet(Y, Z)), Meet(Z, x))
    return forall([y, z], Eq(left, right))


def chain(names: _Names, x: Term) -> Formula:
    """The down-set of ``x`` is a chain."""
    y, z = names.take("y"), names.take("z")
    Y, Z = Var(y), Var(z)
    return forall([y, z], Implies(And(Leq(Y, x), Leq(Z, x)), Or(Leq(Y, Z), Leq(Z, Y))))


def semilattices(names: _Names, x: Term) -> Formula:
    y = names.take("y")
    Y = Var(y)
    maximal = Forall(y, Implies(And(chain(names, Y), Leq(x, Y)), Eq(x, Y)))
    return conjunction([atom(names, x), neutral(names, x), maximal])


def _atom_below_chain(names: _Names, x: Term, neutral_atom: bool) -> Formula:
    y = names.take("y")
    Y = Var(y)
    is_neutral = neutral(names, x) if neutral_atom else Not(neutral(names, x))
    above = Exists(y, And(chain(names, Y), Lt(x, Y)))
    return conjunction([atom(names, x), is_neutral, above])


def zero_multiplication(names: _Names, x: Term) -> Formula:
    return _atom_below_chain(names, x, True)


def group_atom(names: _Names, x: Term) -> Formula:
    return _atom_below_chain(names, x, False)


def _atoms_below(names: _Names, x: Term, condition: Callable[[_Names, Term], Formula]) -> Formula:
    y = names.take("y")
    Y = Var(y)
    return Forall(y, Implies(And(atom(names, Y), Leq(Y, x)), condition(names, Y)))


def groups(names: _Names, x: Term) -> Formula:
    return _atoms_below(names, x, group_atom)


def combinatorial(names: _Names, x: Term) -> Formula:
    return _atoms_below(names, x, lambda names, y: Not(group_atom(names, y)))


def nil(names: _Names, x: Term) -> Formula:
    return _atoms_below(names, x, zero_multiplication)


def lower_modular(names: _Names, x: Term) -> Formula:
    y, z = names.take("y"), names.take("z")
    Y, Z = Var(y), Var(z)
    return forall([y, z], Implies(Leq(x, Y), Eq(Join(x, Meet(Y, Z)), Meet(Y, Join(x, Z)))))


def zero_reduced(names: _Names, x: Term) -> Formula:
    return And(nil(names, x), lower_modular(names, x))


def periodic(names: _Names, x: Term) -> Formula:
    y = names.take("y")
    return Exists(y, Lt(x, Var(y)))


def nil_part(names: _Names, x: Term, y: Term) -> Formula:
    """``y`` is the greatest nil element below ``x``, and ``x`` is not the top."""
    z = names.take("z")
    Z = Var(z)
    greatest = Forall(z, Implies(And(Leq(Z, x), nil(names, Z)), Leq(Z, y)))
    return conjunction([periodic(names, x), Leq(y, x), nil(names, y), greatest])


def zero_reduced_hull(names: _Names, x: Term, y: Term) -> Formula:
    """``y`` is the least 0-reduced element above ``x``."""
    z = names.take("z")
    Z = Var(z)
    least = Forall(z, Implies(And(zero_reduced(names, Z), Leq(x, Z)), Leq(y, Z)))
    return conjunction([zero_reduced(names, y), Leq(x, y), least])


def all_monoids(names: _Names, x: Term) -> Formula:
    y, z = names.take("y"), names.take("z")
    Y, Z = Var(y), Var(z)
    split = forall([y, z], Implies(And(nil(names, Y), Eq(x, Join(Y, Z))), Eq(x, Z)))
    return And(combinatorial(names, x), split)


def cyclic_monoid(names: _Names, x: Term, m: int) -> Formula:
    """The ``m``-th element of the chain of monoid varieties, by induction on ``m``."""
    if m == 0:
        return Min(_variable(x), all_monoids(names, x))
    y = names.take("y")
    Y = Var(y)
    previous = Exists(y, And(cyclic_monoid(names, Y, m - 1), Lt(Y, x)))
    return Min(_variable(x), And(all_monoids(names, x), previous))


def nil_degree(names: _Names, x: Term, m: int) -> Formula:
    y = names.take("y")
    Y = Var(y)
    return Exists(y, And(cyclic_monoid(names, Y, m), nil_part(names, Y, x)))


def groups_at_least(names: _Names, x: Term, t: int) -> Formula:
    """Abelian group varieties ``A_n`` with ``n >= t``."""
    m = t + 1
    y, z, s = names.take("y"), names.take("z"), names.take("t")
    Y, Z, S = Var(y), Var(z), Var(s)
    premise = conjunction([nil_degree(names, Y, m), Leq(Z, Y), nil_part(names, Join(x, Z), S)])
    body = Implies(premise, zero_reduced_hull(names, Z, S))
    return And(groups(names, x), forall([y, z, s], body))


def abelian_groups(names: _Names, x: Term, n: int) -> Formula:
    if n == 1:
        y = names.take("y")
        return Forall(y, Leq(x, Var(y)))
    return And(groups_at_least(names, x, n), Not(groups_at_least(names, x, n + 1)))


def monoid_variety(names: _Names, x: Term, n: int, m: int) -> Formula:
    y, z = names.take("y"), names.take("z")
    Y, Z = Var(y), Var(z)
    body = conjunction([abelian_groups(names, Y, n), cyclic_monoid(names, Z, m), Eq(x, Join(Y, Z))])
    return exists([y, z], body)


# catalog


@dataclass(frozen=True)
class CatalogEntry:
    """
    One named formula.

    ``params`` lists ``(name, minimum)`` of the integer parameters; ``example``
    holds small parameter values for quick builds and ``sweep`` the parameter
    sets whose printed texts are kept as golden files.
    """

    name: str
    arity: int
    builder: Callable
    reference: str
    params: Tuple[Tuple[str, int], ...] = ()
    example: Tuple[int, ...] = ()
    sweep: Tuple[Tuple[int, ...], ...] = ()

    def check(self, params: Tuple[int, ...]):
        if len(params) != len(self.params):
            raise ParamOutOfRange(f"{self.name} takes {len(self.params)} parameter(s), got {len(params)}")
        for (pname, minimum), value in zip(self.params, params):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParamOutOfRange(f"{self.name}: parameter {pname} must be an integer, got {value!r}")
            if value < minimum:
                raise ParamOutOfRange(f"{self.name}: parameter {pname} must be at least {minimum}, got {value}")

    def parameter_sets(self) -> List[Tuple[int, ...]]:
        return list(self.sweep) or [self.example]

    def signature(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}[{','.join(f'{p}>={lo}' for p, lo in self.params)}]"


def _sweep(*ranges) -> Tuple[Tuple[int, ...], ...]:
    return tuple(itertools.product(*ranges))


_ENTRIES = (
    CatalogEntry("A", 1, atom, "atoms of the lattice"),
    CatalogEntry("Neut", 1, neutral, "neutral elements"),
    CatalogEntry("Ch", 1, chain, "elements whose down-set is a chain"),
    CatalogEntry("SL", 1, semilattices, "the variety of semilattices"),
    CatalogEntry("ZM", 1, zero_multiplication, "the variety of null semigroups"),
    CatalogEntry("GrA", 1, group_atom, "abelian group varieties of prime exponent"),
    CatalogEntry("Gr", 1, groups, "varieties of abelian groups"),
    CatalogEntry("Comb", 1, combinatorial, "combinatorial varieties"),
    CatalogEntry("Nil", 1, nil, "nil-varieties"),
    CatalogEntry("LMod", 1, lower_modular, "lower-modular elements"),
    CatalogEntry("ZeroRed", 1, zero_reduced, "0-reduced nil-varieties"),
    CatalogEntry("Per", 1, periodic, "periodic varieties (everything but the top)"),
    CatalogEntry("NilPart", 2, nil_part, "y is the nil part of x"),
    CatalogEntry("ZR", 2, zero_reduced_hull, "y is the least 0-reduced variety above x"),
    CatalogEntry("AllCm", 1, all_monoids, "monoid varieties C_m, m >= 0"),
    CatalogEntry("Cm", 1, cyclic_monoid, "the variety C_m", (("m", 0),), (1,), _sweep(range(5))),
    CatalogEntry("Dm", 1, nil_degree, "the nil part D_m of C_m", (("m", 1),), (1,), _sweep(range(1, 5))),
    CatalogEntry(
        "AGe", 1, groups_at_least, "abelian group varieties A_n with n >= t", (("t", 2),), (2,), _sweep(range(2, 5))
    ),
    CatalogEntry(
        "An",
        1,
        abelian_groups,
        "the variety A_n of abelian groups of exponent n",
        (("n", 1),),
        (1,),
        _sweep(range(1, 5)),
    ),
    CatalogEntry(
        "MonoidVar",
        1,
        monoid_variety,
        "the monoid variety A_n join C_m",
        (("n", 1), ("m", 0)),
        (2, 1),
        _sweep(range(1, 5), range(4)),
    ),
)

_BY_NAME = {entry.name: entry for entry in _ENTRIES}
_FREE = ("x", "y")


def catalog() -> List[CatalogEntry]:
    return list(_ENTRIES)


def entry(name: str) -> CatalogEntry:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownName(f"no catalog formula named {name!r}; known: {', '.join(_BY_NAME)}") from None


def build(name: str, *params: int) -> Formula:
    """
    Build the named formula with free variables ``x`` (and ``y`` for arity 2).

    Raises
    ------
    UnknownName
    ParamOutOfRange
    """
    found = entry(name)
    found.check(params)
    names = _Names()
    free = [Var(v) for v in _FREE[: found.arity]]
    formula = found.builder(names, *free, *params)
    logger.debug(f"built {found.name}{list(params) or ''}")
    return formula


def reference(name: str, params: Tuple[int, ...] = ()) -> str:
    return f"builtin:{name}[{','.join(str(p) for p in params)}]" if params else f"builtin:{name}"


def parse_reference(text: str) -> Tuple[str, Tuple[int, ...]]:
    """``builtin:Cm[3]`` -> ``("Cm", (3,))``."""
    match = _REFERENCE.match(text.strip())
    if match is None:
        raise UnknownName(f"not a catalog reference: {text!r}")
    raw = match.group("params")
    if raw is None or not raw.strip():
        return match.group("name"), ()
    try:
        params = tuple(int(p) for p in raw.split(","))
    except ValueError as exc:
        raise ParamOutOfRange(f"parameters of {text!r} must be integers") from exc
    return match.group("name"), params


def load_formula(source: str) -> Formula:
    """A catalog reference, or a path/URL of a file holding formula text."""
    if source.startswith("builtin:"):
        name, params = parse_reference(source)
        return build(name, *params)
    return parse(read_text(source))


def defined_set_by_name(
    lattice: FiniteLattice, name: str, *params: int, evaluator: Optional[Evaluator] = None
) -> ElementSubset:
    formula = build(name, *params)
    if entry(name).arity != 1:
        raise ArityError(1, free_vars(formula))
    return (evaluator or evaluator_for(lattice)).defined_set(formula)


def golden_name(found: CatalogEntry, params: Tuple[int, ...] = None) -> str:
    params = found.example if params is None else params
    return f"{found.name}[{','.join(map(str, params))}].txt" if params else f"{found.name}.txt"


def dump(directory: str) -> List[str]:
    """Write the printed text of every entry, over its whole parameter sweep, under ``directory``."""
    written = []
    for found in _ENTRIES:
        for params in found.parameter_sets():
            path = f"{directory.rstrip('/')}/{golden_name(found, params)}"
            write_text(path, str(build(found.name, *params)) + "\n")
            written.append(path)
    logger.info(f"wrote {len(written)} catalog texts to {directory}")
    return written
