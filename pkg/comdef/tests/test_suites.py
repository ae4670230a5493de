import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from comdef import suites
from comdef.logic import Var, free_vars
from comdef.suites import (
    NIL_ZR_PAIRS,
    SUITE_ALIASES,
    SUITES,
    agreement_check,
    definability_check,
    format_reports,
    oracle_check,
    random_formula,
    random_term,
    run_suite,
    sized_lattice,
    soundness_check,
)
from comdef.universe import CheckReport


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), depth=st.integers(0, 4))
def test_random_formula_uses_given_names(seed, depth):
    formula = random_formula(np.random.default_rng(seed), ["x", "y"], depth)
    assert set(free_vars(formula)) <= {"x", "y"}


def test_random_term_depth_zero_is_a_variable():
    rng = np.random.default_rng(0)
    assert all(isinstance(random_term(rng, ["x"], 0), Var) for _ in range(10))


def test_oracle_check():
    report = oracle_check(lattices=8, formulas=5, seed=2)
    assert report.passed, report.failures
    (row,) = report.rows
    assert row["lattices"] == 8 and row["formulas_per_lattice"] == 5
    assert len(row["sizes"]) == 8
    assert all(5 <= size <= 40 for size in row["sizes"])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), ground=st.integers(1, 8))
def test_sized_lattice_stays_in_range(seed, ground):
    lattice = sized_lattice(seed, ground)
    assert 5 <= len(lattice) <= 40
    assert sized_lattice(seed, ground).labels == lattice.labels


def test_sized_lattice_rejects_empty_range():
    with pytest.raises(ValueError, match="no lattice size"):
        sized_lattice(0, 3, low=9, high=4)


def test_agreement_check():
    report = agreement_check(instances=30, seed=5)
    assert report.passed, report.failures


def test_definability_rows(small_universe):
    report = definability_check(small_universe, light=True)
    formulas = [row["formula"] for row in report.rows]
    assert formulas[:3] == ["builtin:A", "builtin:Neut", "builtin:Ch"]
    assert "builtin:Cm[2]" in formulas
    assert "builtin:Dm[2]" in formulas
    assert "builtin:Dm[3]" not in formulas
    atoms = report.rows[0]
    assert atoms["expected"] == atoms["defined"] == ["A_2", "SL", "ZM"]
    threaded = definability_check(small_universe, light=True, workers=2)
    assert [row["defined"] for row in threaded.rows] == [row["defined"] for row in report.rows]


def test_format_reports():
    text = format_reports([CheckReport("a"), CheckReport("bb", failures=["boom"])])
    assert text.splitlines() == ["check  result", "a      pass", "bb     FAIL", "         boom"]


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("nope")


def test_run_all_suites(mocker):
    fragment = mocker.patch("comdef.suites._fragment", return_value="fragment")
    patched = {}
    for name in (
        "oracle_check",
        "agreement_check",
        "definability_check",
        "lemma8_check",
        "model_facts",
        "soundness_check",
        "decomposition_check",
        "stability_check",
    ):
        patched[name] = mocker.patch(f"comdef.suites.{name}", return_value=CheckReport(name))
    reports = run_suite("all", workers=2, seed=4)
    assert len(reports) == len(SUITES) - 1 + 1 + len(NIL_ZR_PAIRS)
    patched["oracle_check"].assert_called_once_with(seed=4)
    assert patched["lemma8_check"].call_count == len(NIL_ZR_PAIRS)
    patched["definability_check"].assert_any_call("fragment", light=True, workers=2)
    assert {call.args[0] for call in fragment.call_args_list} == {"F2", "F1", "NZ"}


def test_fragments_are_cached(mocker):
    build = mocker.patch("comdef.suites.build_universe", return_value="built")
    cache = {}
    assert suites._fragment("F2", None, cache) == "built"
    assert suites._fragment("F2", None, cache) == "built"
    assert build.call_count == 1
    assert cache == {"F2": "built"}


@pytest.mark.slow
def test_soundness():
    report = soundness_check()
    assert report.passed, report.failures


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["paper-F2", "paper-F1", "lemma8", "stability"])
def test_packaged_suites(suite):
    reports = run_suite(suite)
    assert all(r.passed for r in reports), [f for r in reports for f in r.failures]


@pytest.mark.parametrize("alias, suite", sorted(SUITE_ALIASES.items()))
def test_suite_aliases(mocker, alias, suite):
    fragment = mocker.patch("comdef.suites._fragment", return_value="fragment")
    mocker.patch("comdef.suites.definability_check", return_value=CheckReport("definability"))
    mocker.patch("comdef.suites.lemma8_check", return_value=CheckReport("lemma8"))
    assert run_suite(alias) == run_suite(suite)
    assert {call.args[0] for call in fragment.call_args_list} <= {"F1", "F2", "NZ"}


def test_suite_names():
    assert {"oracles", "paper-F2", "paper-F1", "lemma8", "stability"} <= set(SUITES)
    assert not set(SUITE_ALIASES) & set(SUITES)
