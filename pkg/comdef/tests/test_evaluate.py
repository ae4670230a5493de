import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from comdef.evaluate import (
    Evaluator,
    RelationTable,
    defined_set,
    evaluate,
    evaluator_for,
    miniscope,
    naive_defined_set,
    naive_evaluate,
    relation,
)
from comdef.exceptions import ArityError, ElementError, MissingAssignment
from comdef.lattice import named_lattice, semantic_atoms
from comdef.logic import Exists, Forall, free_vars, walk
from comdef.parser import parse
from comdef.suites import random_formula

FORMULAS = [
    "x <= y",
    "exists z (x < z and z < y)",
    "forall y (x & y = x -> x = y)",
    "min x { exists y (x < y) }",
    "forall y, z ((x | y) & (x | z) = x | (y & z))",
    "exists y (y != x and (forall z (z <= y or z <= x)))",
    "min x { x != y }",
    "forall y (y <= x | z -> (exists t (t <= y and t != y)))",
    "exists t (t = x | z and (forall s (s <= t -> s <= y)))",
    "forall x exists y (x < y or x = y)",
    "not (exists y (min y { y != x }))",
]

LATTICES = [("chain", 4), ("M3", None), ("N5", None)]


def assert_matches_naive(evaluator, lattice, text):
    formula = parse(text)
    table = evaluator.relation(formula)
    variables = free_vars(formula)
    assert table.variables == tuple(variables)
    for row in np.ndindex(*(len(lattice),) * len(variables)):
        expected = naive_evaluate(lattice, formula, dict(zip(variables, row)))
        assert bool(table.table[row]) == expected, (text, row)


@pytest.mark.parametrize("name, size", LATTICES)
@pytest.mark.parametrize("options", [{}, {"max_dense": 1}, {"max_dense": 2}, {"scope": False}])
def test_relation_matches_naive(name, size, options):
    lattice = named_lattice(name, size)
    evaluator = Evaluator(lattice, **options)
    for text in FORMULAS:
        assert_matches_naive(evaluator, lattice, text)


def test_tables_are_reused_across_calls(n5):
    evaluator = Evaluator(n5)
    first = evaluator.relation("forall y (x <= y)").table.copy()
    renamed = evaluator.relation("forall z (w <= z)").table
    assert np.array_equal(first, renamed)
    assert "cached tables" in repr(evaluator)
    evaluator.clear()
    assert np.array_equal(evaluator.relation("forall y (x <= y)").table, first)


def test_fixed_variable_tables_are_bounded(n5):
    evaluator = Evaluator(n5, max_fixed=3)
    formula = parse("x & y <= z | w")
    elements = list(n5.elements)
    for i, a in enumerate(elements):
        assignment = {"x": a, "y": elements[(i + 1) % len(elements)], "z": 0, "w": a}
        assert evaluator.evaluate(formula, assignment) == naive_evaluate(n5, formula, assignment)
        assert len(evaluator._fixed) <= 3
    assert len(evaluator._fixed) == 3
    assert evaluator.cached_tables >= 3
    evaluator.clear()
    assert evaluator.cached_tables == 0


def test_max_fixed_from_environment(monkeypatch, n5):
    monkeypatch.setenv("COMDEF_MAX_FIXED_TABLES", "5")
    assert Evaluator(n5).max_fixed == 5
    assert Evaluator(n5, max_fixed=0).max_fixed == 0


def test_evaluate_accepts_labels(n5):
    assert evaluate(n5, "x <= y", {"x": "a", "y": "c"})
    assert not evaluate(n5, "x <= y", {"x": "b", "y": "c"})
    assert evaluate(n5, "x <= y", {"x": 0, "y": 4, "unused": 3})


def test_missing_assignment(n5):
    with pytest.raises(MissingAssignment) as info:
        evaluate(n5, "x <= y", {"x": 0})
    assert info.value.missing == ("y",)
    with pytest.raises(MissingAssignment):
        naive_evaluate(n5, "x <= y", {})


def test_unknown_element(n5):
    with pytest.raises(ElementError):
        evaluate(n5, "x = x", {"x": 9})
    with pytest.raises(ElementError):
        evaluate(n5, "x = x", {"x": "nowhere"})


def test_defined_set_needs_one_free_variable(n5):
    with pytest.raises(ArityError) as info:
        defined_set(n5, "x <= y")
    assert info.value.free == ("x", "y")
    with pytest.raises(ArityError):
        defined_set(n5, "exists x (x = x)")
    with pytest.raises(ArityError):
        naive_defined_set(n5, "x <= y")


def test_defined_set_of_atoms(n5):
    atoms = defined_set(n5, "exists y ((forall z (y <= z)) and (min x { x != y }))")
    assert atoms.labels() == ["a", "b"]
    assert atoms == semantic_atoms(n5)


def test_relation_variable_order(n5):
    forward = relation(n5, "x <= y")
    backward = relation(n5, "y <= x")
    assert backward.variables == ("y", "x")
    assert np.array_equal(forward.table, n5.order)
    assert np.array_equal(backward.table, n5.order)


def test_relation_table_helpers(chain3):
    table = relation(chain3, "x < y")
    assert isinstance(table, RelationTable)
    assert table.arity == 2
    assert len(table) == 3
    assert table.tuples() == {(0, 1), (0, 2), (1, 2)}
    assert (0, 2) in table
    assert (2, 0) not in table


def test_closed_formulas(m3):
    closed = relation(m3, "forall x exists y (x <= y)")
    assert closed.arity == 0
    assert closed.table.item() is True
    assert not evaluate(m3, "forall x exists y (x < y)", {})
    assert evaluate(m3, "exists x, y, z (x & y = z and x != y and y != z and x != z)", {})


def test_shared_evaluator(n5):
    assert evaluator_for(n5) is evaluator_for(n5)
    assert evaluator_for(n5) is not evaluator_for(named_lattice("N5"))


def test_miniscope_pushes_quantifiers_inward():
    formula = parse("forall y (x <= x and y <= z)")
    scoped = miniscope(formula)
    assert free_vars(scoped) == free_vars(formula)
    top = next(walk(scoped))
    assert not isinstance(top, Forall)
    quantified = [node for node in walk(scoped) if isinstance(node, (Forall, Exists))]
    assert len(quantified) == 1
    assert str(quantified[0].body) == "y <= z"


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_miniscoping_preserves_relations(seed):
    lattice = named_lattice("N5")
    formula = random_formula(np.random.default_rng(seed), ["x", "y"], 3)
    scoped = Evaluator(lattice).relation(formula)
    plain = Evaluator(lattice, scope=False).relation(formula)
    assert scoped.variables == plain.variables
    assert np.array_equal(scoped.table, plain.table)


def test_max_dense_from_environment(monkeypatch, n5):
    monkeypatch.setenv("COMDEF_MAX_DENSE_VARS", "2")
    assert Evaluator(n5).max_dense == 2
    assert Evaluator(n5, max_dense=4).max_dense == 4
    monkeypatch.setenv("COMDEF_MAX_DENSE_VARS", "many")
    with pytest.raises(ValueError):
        Evaluator(n5)
