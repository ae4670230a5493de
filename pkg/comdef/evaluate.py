# -*- coding: utf-8 -*-
"""
Satisfaction of formulas in finite lattices.

Two evaluators share one semantics:

- :func:`naive_evaluate` recurses over the formula and loops over elements at
  every quantifier. It is slow and serves as the reference.
- :class:`Evaluator` computes each subformula bottom-up as a boolean table
  with one axis per free variable. Quantifiers reduce an axis, connectives
  broadcast, ``min`` is one matrix product with the strict order. Tables are
  cached across calls under the alpha-normal shape of the subformula, so
  renamed copies of an inlined formula are computed once.
"""

import logging
import threading
import weakref
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Set, Tuple, Union

import numpy as np

from .exceptions import ArityError, ElementError, MissingAssignment
from .lattice import ElementSubset, FiniteLattice
from .logic import (
    ATOMS,
    BINARY,
    QUANTIFIERS,
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
    all_vars,
    free_vars,
    fresh_name,
    term_vars,
)
from .utils import env_int

logger = logging.getLogger(__name__)

Assignment = Mapping[str, Union[int, str]]


def _as_formula(formula) -> Formula:
    if isinstance(formula, str):
        from .parser import parse

        return parse(formula)
    return formula


def _resolve(lattice: FiniteLattice, value) -> int:
    if isinstance(value, str):
        return lattice.element(value)
    element = int(value)
    if not 0 <= element < len(lattice):
        raise ElementError(f"element id {element} outside 0..{len(lattice) - 1}")
    return element


def _environment(lattice: FiniteLattice, formula: Formula, assignment: Assignment) -> Dict[str, int]:
    free = free_vars(formula)
    missing = [name for name in free if name not in assignment]
    if missing:
        raise MissingAssignment(missing)
    return {name: _resolve(lattice, assignment[name]) for name in free}


# reference semantics


def naive_evaluate(lattice: FiniteLattice, formula, assignment: Assignment) -> bool:
    """Evaluate by direct recursion; exponential in quantifier depth."""
    formula = _as_formula(formula)
    env = _environment(lattice, formula, assignment)
    meet, join, order = lattice.meet_table, lattice.join_table, lattice.order
    elements = range(len(lattice))

    def value(t, env):
        if isinstance(t, Var):
            return env[t.name]
        table = meet if isinstance(t, Meet) else join
        return int(table[value(t.left, env), value(t.right, env)])

    def holds(f, env):
        if isinstance(f, Eq):
            return value(f.left, env) == value(f.right, env)
        if isinstance(f, Leq):
            return bool(order[value(f.left, env), value(f.right, env)])
        if isinstance(f, Lt):
            a, b = value(f.left, env), value(f.right, env)
            return a != b and bool(order[a, b])
        if isinstance(f, Not):
            return not holds(f.body, env)
        if isinstance(f, And):
            return holds(f.left, env) and holds(f.right, env)
        if isinstance(f, Or):
            return holds(f.left, env) or holds(f.right, env)
        if isinstance(f, Implies):
            return not holds(f.left, env) or holds(f.right, env)
        if isinstance(f, Forall):
            return all(holds(f.body, {**env, f.var: a}) for a in elements)
        if isinstance(f, Exists):
            return any(holds(f.body, {**env, f.var: a}) for a in elements)
        if isinstance(f, Min):
            x = env[f.var]
            if not holds(f.body, env):
                return False
            return not any(holds(f.body, {**env, f.var: y}) for y in elements if y != x and order[y, x])
        raise TypeError(f"not a formula node: {f!r}")

    return holds(formula, env)


def naive_defined_set(lattice: FiniteLattice, formula) -> ElementSubset:
    formula = _as_formula(formula)
    free = free_vars(formula)
    if len(free) != 1:
        raise ArityError(1, free)
    return lattice.subset(a for a in lattice.elements if naive_evaluate(lattice, formula, {free[0]: a}))


# quantifier miniscoping


class _Scoper:
    """
    Push quantifiers inward as far as the connectives allow.

    Only equivalences valid over non-empty domains are used, so the result
    defines the same relation over the same free variables.
    """

    def __init__(self):
        self._fv: Dict[int, Tuple[Formula, frozenset]] = {}
        self._done: Dict[int, Tuple[Formula, Formula]] = {}

    def fv(self, f: Formula) -> frozenset:
        got = self._fv.get(id(f))
        if got is not None:
            return got[1]
        if isinstance(f, ATOMS):
            out = frozenset(term_vars(f.left)) | frozenset(term_vars(f.right))
        elif isinstance(f, Not):
            out = self.fv(f.body)
        elif isinstance(f, BINARY):
            out = self.fv(f.left) | self.fv(f.right)
        elif isinstance(f, QUANTIFIERS):
            out = self.fv(f.body) - {f.var}
        else:
            out = self.fv(f.body) | {f.var}
        self._fv[id(f)] = (f, out)
        return out

    def _split(self, f: Formula, v: str, kind: type) -> List[Formula]:
        # subtrees without v stay whole
        if isinstance(f, kind) and v in self.fv(f):
            return self._split(f.left, v, kind) + self._split(f.right, v, kind)
        return [f]

    @staticmethod
    def _combine(kind: type, parts: List[Formula]) -> Formula:
        out = parts[0]
        for part in parts[1:]:
            out = kind(out, part)
        return out

    def scope(self, f: Formula) -> Formula:
        got = self._done.get(id(f))
        if got is not None:
            return got[1]
        if isinstance(f, ATOMS):
            out = f
        elif isinstance(f, Not):
            body = self.scope(f.body)
            out = f if body is f.body else Not(body)
        elif isinstance(f, BINARY):
            left, right = self.scope(f.left), self.scope(f.right)
            out = f if left is f.left and right is f.right else type(f)(left, right)
        elif isinstance(f, QUANTIFIERS):
            out = self.push(type(f), f.var, self.scope(f.body))
        elif isinstance(f, Min):
            body = self.scope(f.body)
            out = f if body is f.body else Min(f.var, body)
        else:
            raise TypeError(f"not a formula node: {f!r}")
        self._done[id(f)] = (f, out)
        return out

    def push(self, kind: type, v: str, body: Formula) -> Formula:
        if v not in self.fv(body):
            return body
        dual = Exists if kind is Forall else Forall
        if isinstance(body, Not):
            return Not(self.push(dual, v, body.body))
        spread, gather = (And, Or) if kind is Forall else (Or, And)
        if isinstance(body, spread):
            return spread(self.push(kind, v, body.left), self.push(kind, v, body.right))
        if isinstance(body, gather):
            parts = self._split(body, v, gather)
            outside = [p for p in parts if v not in self.fv(p)]
            inside = [p for p in parts if v in self.fv(p)]
            if not outside:
                return kind(v, body)
            if len(inside) == 1:
                inner = self.push(kind, v, inside[0])
            else:
                inner = kind(v, self._combine(gather, inside))
            return self._combine(gather, outside + [inner])
        if kind is Forall and isinstance(body, Implies):
            premise, conclusion = body.left, body.right
            if v not in self.fv(conclusion):
                return Implies(self.push(Exists, v, premise), conclusion)
            if v not in self.fv(premise):
                return Implies(premise, self.push(Forall, v, conclusion))
            parts = self._split(premise, v, And)
            outside = [p for p in parts if v not in self.fv(p)]
            if outside:
                inside = self._combine(And, [p for p in parts if v in self.fv(p)])
                return Implies(self._combine(And, outside), self.push(Forall, v, Implies(inside, conclusion)))
            return kind(v, body)
        if isinstance(body, kind) and body.var != v:
            inner = self.push(kind, v, body.body)
            if isinstance(inner, kind) and inner.var == v and inner.body is body.body:
                return kind(v, body)
            return self.push(kind, body.var, inner)
        return kind(v, body)


def miniscope(formula: Formula) -> Formula:
    """An equivalent formula with every quantifier scope made as small as possible."""
    return _Scoper().scope(formula)


# term abstraction


def _free_compound_terms(formula: Formula) -> List[Term]:
    """Compound subterms whose variables are all free where they occur."""
    out: List[Term] = []

    def terms(t, bound):
        if isinstance(t, Var):
            return
        if not set(term_vars(t)) & bound and t not in out:
            out.append(t)
        terms(t.left, bound)
        terms(t.right, bound)

    def rec(f, bound):
        if isinstance(f, ATOMS):
            terms(f.left, bound)
            terms(f.right, bound)
        elif isinstance(f, BINARY):
            rec(f.left, bound)
            rec(f.right, bound)
        elif isinstance(f, QUANTIFIERS):
            rec(f.body, bound | {f.var})
        else:
            rec(f.body, bound)

    rec(formula, frozenset())
    return out


def _abstract(formula: Formula, term: Term, name: str) -> Formula:
    """Replace the free occurrences of ``term`` by the variable ``name``."""
    names = set(term_vars(term))
    replacement = Var(name)

    def in_term(t):
        if t == term:
            return replacement
        if isinstance(t, Var):
            return t
        return type(t)(in_term(t.left), in_term(t.right))

    def rec(f):
        if isinstance(f, ATOMS):
            return type(f)(in_term(f.left), in_term(f.right))
        if isinstance(f, Not):
            return Not(rec(f.body))
        if isinstance(f, BINARY):
            return type(f)(rec(f.left), rec(f.right))
        if isinstance(f, QUANTIFIERS):
            if f.var in names:
                return f
            return type(f)(f.var, rec(f.body))
        return Min(f.var, rec(f.body))

    return rec(formula)


class _Abstraction(NamedTuple):
    term: Term
    name: str
    formula: Formula


def _find_abstraction(formula: Formula, unbound: Iterable[str]) -> Optional[_Abstraction]:
    """
    A compound term ``t`` covering every free occurrence of its variables.

    The formula then only depends on those variables through the value of
    ``t``, so it can be evaluated with ``t`` as a single fresh variable.
    """
    unbound = set(unbound)
    candidates = [t for t in _free_compound_terms(formula) if set(term_vars(t)) <= unbound]
    if not candidates:
        return None
    candidates.sort(key=lambda t: -len(term_vars(t)))
    taken = all_vars(formula)
    for term in candidates:
        name = fresh_name(taken, "s")
        reduced = _abstract(formula, term, name)
        if not set(term_vars(term)) & set(free_vars(reduced)):
            return _Abstraction(term, name, reduced)
    return None


# relational evaluation


@dataclass(frozen=True)
class RelationTable:
    """
    The tuples satisfying a formula, as a boolean array with one axis per
    variable in ``variables``.
    """

    variables: Tuple[str, ...]
    table: np.ndarray

    @property
    def arity(self) -> int:
        return len(self.variables)

    def tuples(self) -> Set[Tuple[int, ...]]:
        return {tuple(int(i) for i in row) for row in np.argwhere(self.table)}

    def __contains__(self, row) -> bool:
        return bool(self.table[tuple(row)])

    def __len__(self):
        return int(np.count_nonzero(self.table))

    def __repr__(self):
        return f"<RelationTable over {list(self.variables)}: {len(self)} tuples>"


class _Shape(NamedTuple):
    fv: Tuple[str, ...]
    sid: int


def _term_key(term: Term, position: Dict[str, int]):
    if isinstance(term, Var):
        return position[term.name]
    return ("&" if isinstance(term, Meet) else "|", _term_key(term.left, position), _term_key(term.right, position))


class _Run:
    """State of one public call: shapes and abstractions of its formula nodes."""

    def __init__(self, evaluator: "Evaluator"):
        self.evaluator = evaluator
        self.shapes: Dict[int, Tuple[Formula, _Shape]] = {}
        self.abstractions: Dict[Tuple[int, Tuple[str, ...]], Tuple[Formula, Optional[_Abstraction]]] = {}

    def shape(self, f: Formula) -> _Shape:
        got = self.shapes.get(id(f))
        if got is not None:
            return got[1]
        if isinstance(f, ATOMS):
            fv = tuple(dict.fromkeys(term_vars(f.left) + term_vars(f.right)))
            position = {w: i for i, w in enumerate(fv)}
            key = (type(f).__name__, _term_key(f.left, position), _term_key(f.right, position))
        elif isinstance(f, Not):
            body = self.shape(f.body)
            fv = body.fv
            key = ("Not", body.sid)
        elif isinstance(f, BINARY):
            left, right = self.shape(f.left), self.shape(f.right)
            fv = left.fv + tuple(w for w in right.fv if w not in left.fv)
            position = {w: i for i, w in enumerate(fv)}
            key = (type(f).__name__, left.sid, right.sid, tuple(position[w] for w in right.fv))
        elif isinstance(f, QUANTIFIERS):
            body = self.shape(f.body)
            fv = tuple(w for w in body.fv if w != f.var)
            position = {w: i for i, w in enumerate(fv)}
            key = (type(f).__name__, body.sid, tuple(position.get(w, -1) for w in body.fv))
        elif isinstance(f, Min):
            body = self.shape(f.body)
            fv = (f.var,) + tuple(w for w in body.fv if w != f.var)
            position = {w: i for i, w in enumerate(fv)}
            key = ("Min", body.sid, tuple(position[w] for w in body.fv))
        else:
            raise TypeError(f"not a formula node: {f!r}")
        shape = _Shape(fv, self.evaluator._intern(key))
        self.shapes[id(f)] = (f, shape)
        return shape

    def abstraction(self, f: Formula, unbound: Tuple[str, ...]) -> Optional[_Abstraction]:
        key = (id(f), unbound)
        got = self.abstractions.get(key)
        if got is None:
            got = (f, _find_abstraction(f, unbound))
            self.abstractions[key] = got
        return got[1]


class Evaluator:
    """
    Bottom-up relational evaluation in one lattice.

    Tables are cached across calls and shared by threads; a race can only
    cause a table to be computed twice. Tables over all free variables are
    bounded by the number of subformula shapes; tables with some variables
    fixed are kept in a least-recently-used cache of ``max_fixed`` entries.

    Parameters
    ----------
    lattice: FiniteLattice
    max_dense: int, optional
        Largest number of unbound variables a quantifier body may have before
        the quantified variable is iterated instead of materialised. Falls
        back to ``COMDEF_MAX_DENSE_VARS``, then 3.
    scope: bool
        Push quantifiers inward before evaluation
    max_fixed: int, optional
        Most cached tables with fixed variables. Falls back to
        ``COMDEF_MAX_FIXED_TABLES``, then 4096.
    """

    def __init__(
        self,
        lattice: FiniteLattice,
        max_dense: Optional[int] = None,
        scope: bool = True,
        max_fixed: Optional[int] = None,
    ):
        self.lattice = lattice
        self.max_dense = max(1, env_int("COMDEF_MAX_DENSE_VARS", max_dense, 3))
        self.max_fixed = max(0, env_int("COMDEF_MAX_FIXED_TABLES", max_fixed, 4096))
        self.scope = scope
        n = len(lattice)
        self.n = n
        self._dtype = np.int16 if n < 2**15 else np.int32
        self._meet = lattice.meet_table.astype(self._dtype)
        self._join = lattice.join_table.astype(self._dtype)
        self._leq = lattice.order
        self._lt = lattice.strict_order
        self._below = np.ascontiguousarray(self._lt.T.astype(np.float32))
        self._index = np.arange(n, dtype=self._dtype)
        self._shapes: Dict[tuple, int] = {}
        self._tables: Dict[Tuple[int, Tuple[int, ...]], np.ndarray] = {}
        self._fixed: "OrderedDict[Tuple[int, Tuple[int, ...]], np.ndarray]" = OrderedDict()
        self._lock = threading.Lock()

    def __repr__(self):
        return f"<Evaluator on {self.lattice!r}, {self.cached_tables} cached tables>"

    @property
    def cached_tables(self) -> int:
        return len(self._tables) + len(self._fixed)

    def clear(self):
        with self._lock:
            self._tables.clear()
            self._fixed.clear()

    def _lookup(self, key, partial: bool) -> Optional[np.ndarray]:
        if not partial:
            return self._tables.get(key)
        with self._lock:
            table = self._fixed.get(key)
            if table is not None:
                self._fixed.move_to_end(key)
            return table

    def _remember(self, key, table: np.ndarray):
        with self._lock:
            self._fixed[key] = table
            self._fixed.move_to_end(key)
            while len(self._fixed) > self.max_fixed:
                self._fixed.popitem(last=False)

    def _intern(self, key) -> int:
        with self._lock:
            return self._shapes.setdefault(key, len(self._shapes))

    def _prepare(self, formula) -> Formula:
        formula = _as_formula(formula)
        return miniscope(formula) if self.scope else formula

    # public

    def relation(self, formula) -> RelationTable:
        """Table of ``formula`` over its free variables in order of first occurrence."""
        formula = _as_formula(formula)
        variables = tuple(free_vars(formula))
        prepared = self._prepare(formula)
        run = _Run(self)
        table = np.asarray(self._table(run, prepared, {}))
        computed = run.shape(prepared).fv
        table = np.transpose(table, [computed.index(w) for w in variables])
        return RelationTable(variables, table)

    def evaluate(self, formula, assignment: Assignment) -> bool:
        formula = _as_formula(formula)
        env = _environment(self.lattice, formula, assignment)
        return bool(np.asarray(self._table(_Run(self), self._prepare(formula), env)))

    def defined_set(self, formula) -> ElementSubset:
        formula = _as_formula(formula)
        free = free_vars(formula)
        if len(free) != 1:
            raise ArityError(1, free)
        table = self.relation(formula).table
        return self.lattice.subset(np.flatnonzero(table))

    # tables

    def _axis(self, i: int, k: int) -> np.ndarray:
        shape = [1] * k
        shape[i] = self.n
        return self._index.reshape(shape)

    def _values(self, term: Term, env: Dict[str, int], unbound: List[str]) -> np.ndarray:
        if isinstance(term, Var):
            if term.name in env:
                return np.asarray(env[term.name], dtype=self._dtype)
            return self._axis(unbound.index(term.name), len(unbound))
        table = self._meet if isinstance(term, Meet) else self._join
        return table[self._values(term.left, env, unbound), self._values(term.right, env, unbound)]

    def _align(self, table: np.ndarray, variables: List[str], unbound: List[str]) -> np.ndarray:
        positions = [unbound.index(w) for w in variables]
        table = np.transpose(np.asarray(table), np.argsort(positions))
        shape = [1] * len(unbound)
        for p in positions:
            shape[p] = self.n
        return table.reshape(shape)

    def _full(self, table, k: int) -> np.ndarray:
        return np.broadcast_to(table, (self.n,) * k)

    def _table(self, run: _Run, f: Formula, env: Dict[str, int]) -> np.ndarray:
        shape = run.shape(f)
        fixed = tuple(env.get(w, -1) for w in shape.fv)
        if fixed and max(fixed) >= 0 and len(fixed) <= 2:
            full = self._table(run, f, {})
            return np.asarray(full[tuple(a if a >= 0 else slice(None) for a in fixed)])
        key = (shape.sid, fixed)
        unbound = fixed.count(-1)
        partial = unbound < len(fixed)
        table = self._lookup(key, partial)
        if table is not None:
            return table
        table = self._compute(run, f, shape, env)
        if not partial:
            self._tables[key] = table
        elif unbound <= 2:
            self._remember(key, table)
        return table

    def _compute(self, run: _Run, f: Formula, shape: _Shape, env: Dict[str, int]) -> np.ndarray:
        unbound = [w for w in shape.fv if w not in env]
        k = len(unbound)
        if k >= 3 and not isinstance(f, ATOMS):
            plan = run.abstraction(f, tuple(unbound))
            if plan is not None:
                logger.debug(f"abstracting {plan.term} as {plan.name} in a {k}-variable subformula")
                local = {w: env[w] for w in shape.fv if w in env}
                reduced = self._table(run, plan.formula, local)
                variables = [w for w in run.shape(plan.formula).fv if w not in local]
                value = self._values(plan.term, env, unbound)
                index = tuple(value if w == plan.name else self._axis(unbound.index(w), k) for w in variables)
                return self._full(np.asarray(reduced)[index], k)

        if isinstance(f, ATOMS):
            left, right = self._values(f.left, env, unbound), self._values(f.right, env, unbound)
            if isinstance(f, Eq):
                out = left == right
            elif isinstance(f, Leq):
                out = self._leq[left, right]
            else:
                out = self._lt[left, right]
            return self._full(out, k)

        if isinstance(f, Not):
            return ~np.asarray(self._table(run, f.body, env))

        if isinstance(f, BINARY):
            left = self._align(self._table(run, f.left, env), self._unbound(run, f.left, env), unbound)
            right = self._align(self._table(run, f.right, env), self._unbound(run, f.right, env), unbound)
            if isinstance(f, And):
                out = left & right
            elif isinstance(f, Or):
                out = left | right
            else:
                out = ~left | right
            return self._full(out, k)

        if isinstance(f, QUANTIFIERS):
            return self._quantify(run, f, env, unbound)

        if isinstance(f, Min):
            return self._minimal(run, f, env)

        raise TypeError(f"not a formula node: {f!r}")

    @staticmethod
    def _unbound(run: _Run, f: Formula, env: Dict[str, int]) -> List[str]:
        return [w for w in run.shape(f).fv if w not in env]

    def _quantify(self, run: _Run, f: Formula, env: Dict[str, int], unbound: List[str]) -> np.ndarray:
        v = f.var
        inner = {w: a for w, a in env.items() if w != v}
        body_vars = self._unbound(run, f.body, inner)
        universal = isinstance(f, Forall)
        if v not in body_vars:
            return self._table(run, f.body, inner)
        if len(body_vars) <= self.max_dense:
            body = np.asarray(self._table(run, f.body, inner))
            axis = body_vars.index(v)
            return body.all(axis=axis) if universal else body.any(axis=axis)
        logger.debug(f"iterating {v} over {self.n} elements, body has {len(body_vars)} unbound variables")
        acc = np.full((self.n,) * len(unbound), universal)
        for a in range(self.n):
            inner[v] = a
            part = np.asarray(self._table(run, f.body, inner))
            if universal:
                acc &= part
                if not acc.any():
                    break
            else:
                acc |= part
                if acc.all():
                    break
        return acc

    def _minimal(self, run: _Run, f: Min, env: Dict[str, int]) -> np.ndarray:
        v = f.var
        inner = {w: a for w, a in env.items() if w != v}
        body = np.asarray(self._table(run, f.body, inner))
        body_vars = self._unbound(run, f.body, inner)
        n = self.n
        if v in body_vars:
            body = np.moveaxis(body, body_vars.index(v), 0)
            flat = body.reshape(n, -1)
            # smaller[x, r]: some y < x satisfies the body at r
            smaller = (self._below @ flat.astype(np.float32)) > 0
            out = (flat & ~smaller).reshape(body.shape)
        else:
            bottom = np.zeros(n, dtype=bool)
            bottom[self.lattice.bottom] = True
            out = bottom.reshape((n,) + (1,) * body.ndim) & body[None, ...]
        if v in env:
            out = out[env[v]]
        return out


_evaluators: "weakref.WeakKeyDictionary[FiniteLattice, Evaluator]" = weakref.WeakKeyDictionary()
_evaluators_lock = threading.Lock()


def evaluator_for(lattice: FiniteLattice) -> Evaluator:
    """The shared evaluator of ``lattice``, created on first use."""
    with _evaluators_lock:
        evaluator = _evaluators.get(lattice)
        if evaluator is None:
            evaluator = _evaluators[lattice] = Evaluator(lattice)
        return evaluator


def evaluate(lattice: FiniteLattice, formula, assignment: Assignment) -> bool:
    """
    Whether ``formula`` holds in ``lattice`` under ``assignment``.

    Parameters
    ----------
    lattice: FiniteLattice
    formula: Formula or str
    assignment: mapping
        Element id (or label) of every free variable

    Raises
    ------
    MissingAssignment
        If a free variable has no value
    """
    return evaluator_for(lattice).evaluate(formula, assignment)


def defined_set(lattice: FiniteLattice, formula) -> ElementSubset:
    """
    The elements satisfying a formula with exactly one free variable.

    Raises
    ------
    ArityError
        If the formula does not have exactly one free variable
    """
    return evaluator_for(lattice).defined_set(formula)


def relation(lattice: FiniteLattice, formula) -> RelationTable:
    return evaluator_for(lattice).relation(formula)
