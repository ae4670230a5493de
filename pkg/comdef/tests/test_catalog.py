import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from comdef.catalog import (
    build,
    catalog,
    defined_set_by_name,
    dump,
    entry,
    golden_name,
    load_formula,
    parse_reference,
    reference,
)
from comdef.evaluate import Evaluator, naive_defined_set, naive_evaluate
from comdef.exceptions import ArityError, CatalogError, ParamOutOfRange, UnknownName
from comdef.lattice import (
    named_lattice,
    semantic_atoms,
    semantic_chain_downset,
    semantic_lower_modular,
    semantic_neutral,
)
from comdef.logic import alpha_normal, free_vars, size, walk
from comdef.parser import parse

from .conftest import GOLDEN

GOLDEN_CASES = [(found.name, params) for found in catalog() for params in found.parameter_sets()]


def test_catalog_entries():
    entries = catalog()
    names = [e.name for e in entries]
    assert len(entries) == 20
    assert len(set(names)) == len(names)
    assert entry("MonoidVar").signature() == "MonoidVar[n>=1,m>=0]"
    assert entry("Nil").signature() == "Nil"
    assert {e.name for e in entries if e.arity == 2} == {"NilPart", "ZR"}


@pytest.mark.parametrize("name, params", GOLDEN_CASES)
def test_golden_texts(name, params):
    path = os.path.join(GOLDEN, golden_name(entry(name), params))
    with open(path, encoding="utf-8") as f:
        expected = f.read().rstrip()
    assert str(build(name, *params)) == expected


def test_golden_sweeps():
    assert len(GOLDEN_CASES) == 47
    assert [params for name, params in GOLDEN_CASES if name == "Cm"] == [(m,) for m in range(5)]
    assert [params for name, params in GOLDEN_CASES if name == "AGe"] == [(2,), (3,), (4,)]
    assert [params for name, params in GOLDEN_CASES if name == "An"] == [(1,), (2,), (3,), (4,)]
    assert len([params for name, params in GOLDEN_CASES if name == "MonoidVar"]) == 16
    assert entry("Per").parameter_sets() == [()]
    expected = {golden_name(entry(name), params) for name, params in GOLDEN_CASES}
    assert set(os.listdir(GOLDEN)) == expected


@pytest.mark.parametrize("found", catalog(), ids=lambda e: e.name)
def test_built_formulas(found):
    formula = build(found.name, *found.example)
    expected = {"x", "y"} if found.arity == 2 else {"x"}
    assert set(free_vars(formula)) == expected
    assert str(build(found.name, *found.example)) == str(formula)
    assert parse(str(formula)) == formula


def test_unknown_and_bad_parameters():
    with pytest.raises(UnknownName):
        build("Bogus")
    with pytest.raises(KeyError):
        build("Bogus")
    with pytest.raises(ParamOutOfRange):
        build("Cm")
    with pytest.raises(ParamOutOfRange):
        build("Cm", -1)
    with pytest.raises(ParamOutOfRange):
        build("Cm", True)
    with pytest.raises(ParamOutOfRange):
        build("AGe", 1)
    with pytest.raises(ParamOutOfRange):
        build("A", 3)


def test_error_text_is_not_quoted():
    with pytest.raises(CatalogError) as info:
        entry("Bogus")
    assert str(info.value).startswith("no catalog formula named 'Bogus'")


def test_larger_parameters_reuse_smaller_formulas():
    smaller = alpha_normal(build("Cm", 1))
    assert any(alpha_normal(node) == smaller for node in walk(build("Cm", 2)))


@settings(max_examples=10, deadline=None)
@given(m=st.integers(1, 7))
def test_cyclic_monoid_formula_grows_linearly(m):
    step = size(build("Cm", 2)) - size(build("Cm", 1))
    assert step > 0
    assert size(build("Cm", m + 1)) - size(build("Cm", m)) == step
    assert size(build("Cm", m)) == size(build("Cm", 1)) + (m - 1) * step


def test_references():
    assert parse_reference("builtin:Cm[3]") == ("Cm", (3,))
    assert parse_reference("builtin:A") == ("A", ())
    assert parse_reference("builtin:MonoidVar[2, 1]") == ("MonoidVar", (2, 1))
    assert parse_reference("builtin:Per[]") == ("Per", ())
    assert reference("Cm", (3,)) == "builtin:Cm[3]"
    assert reference("A") == "builtin:A"
    with pytest.raises(UnknownName):
        parse_reference("Cm[3]")
    with pytest.raises(ParamOutOfRange):
        parse_reference("builtin:Cm[x]")


def test_load_formula(tmp_path):
    assert load_formula("builtin:Per") == build("Per")
    path = tmp_path / "f.txt"
    path.write_text("forall y1 (x <= y1)\n")
    assert load_formula(str(path)) == build("An", 1)


def test_dump(tmp_path):
    written = dump(str(tmp_path / "golden"))
    assert len(written) == len(GOLDEN_CASES)
    files = sorted(os.listdir(tmp_path / "golden"))
    assert files == sorted(os.listdir(GOLDEN))
    assert "Cm[0].txt" in files and "MonoidVar[4,3].txt" in files
    for name in files:
        with open(os.path.join(GOLDEN, name), encoding="utf-8") as f:
            assert (tmp_path / "golden" / name).read_text(encoding="utf-8") == f.read()
    with open(tmp_path / "golden" / "Per.txt", encoding="utf-8") as f:
        assert f.read() == str(build("Per")) + "\n"


@pytest.mark.parametrize("name", ["chain", "M3", "N5"])
def test_lattice_formulas_match_oracles(name):
    lattice = named_lattice(name, 4)
    evaluator = Evaluator(lattice)
    expected = {
        "A": set(semantic_atoms(lattice)),
        "Neut": {x for x in lattice.elements if semantic_neutral(lattice, x)},
        "Ch": {x for x in lattice.elements if semantic_chain_downset(lattice, x)},
        "LMod": {x for x in lattice.elements if semantic_lower_modular(lattice, x)},
        "Per": set(lattice.elements) - {lattice.top},
    }
    for formula_name, members in expected.items():
        assert set(defined_set_by_name(lattice, formula_name, evaluator=evaluator)) == members, formula_name


@pytest.mark.parametrize("name", ["A", "Ch", "SL", "ZM", "Nil"])
def test_unary_formulas_match_naive(name, n5):
    formula = build(name)
    assert set(Evaluator(n5).defined_set(formula)) == set(naive_defined_set(n5, formula))


@pytest.mark.parametrize("name", ["NilPart", "ZR"])
def test_binary_formulas_match_naive(name, chain3):
    formula = build(name)
    table = Evaluator(chain3).relation(formula)
    for a in chain3.elements:
        for b in chain3.elements:
            assignment = dict(zip(table.variables, (a, b)))
            assert bool(table.table[a, b]) == naive_evaluate(chain3, formula, assignment)


def test_defined_set_by_name_needs_unary_entry(n5):
    with pytest.raises(ArityError):
        defined_set_by_name(n5, "NilPart")
