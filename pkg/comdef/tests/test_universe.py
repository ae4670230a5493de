import json

import pytest

from comdef.exceptions import (
    ModelError,
    NotInUniverse,
    NotJoinClosed,
    NotNil,
    ParamOutOfRange,
    TopHasNoNilPart,
)
from comdef.lattice import FiniteLattice, semantic_atoms
from comdef.space import subset_of
from comdef.universe import (
    FLAGS,
    UniverseSpec,
    build_universe,
    decomposition_check,
    lemma8_check,
    model_facts,
    nil_zr_check,
    stability_check,
)
from comdef.varieties import CustomNil, NilD, Trivial
from comdef.words import parse_identity

from .conftest import SMALL_RECIPE


def test_spec_closes_group_exponents():
    spec = UniverseSpec(group_exponents=(4, 2))
    assert spec.group_exponents == (1, 2, 4)
    with pytest.raises(ModelError, match="missing"):
        UniverseSpec(group_exponents=(2, 3))
    with pytest.raises(ModelError):
        UniverseSpec(group_exponents=(4,))
    with pytest.raises(ModelError):
        UniverseSpec(max_m=-1)


def test_spec_from_json(small_spec):
    assert small_spec.name == "small"
    assert small_spec.group_exponents == (1, 2)
    assert small_spec.dims == (8, 4, 6, 8)
    assert [label for label, _ in small_spec.nil] == ["N_ω", "D_3", "ZM", "N_3"]
    assert small_spec.with_increment(2).dims == (10, 6, 8, 10)
    generators = small_spec.generators()
    assert generators[0] == ("T", "trivial", Trivial())
    assert [kind for _, kind, _ in generators].count("monoid") == 3


def test_spec_nil_entries():
    spec = UniverseSpec.from_json(
        {
            "nil": [
                {"family": "X", "n": 2, "m": 4},
                {"family": "zr", "of": "X_{2,4}"},
                {"family": "custom", "name": "V", "basis": ["x^3 = 0"], "bounds": {"letters": 3, "degree": 6}},
            ]
        }
    )
    labels = [label for label, _ in spec.nil]
    assert labels == ["X_{2,4}", "ZR(X_{2,4})", "V"]
    assert isinstance(spec.nil[2][1], CustomNil)
    assert spec.nil[2][1].bounds.degree == 6


@pytest.mark.parametrize(
    "entry",
    [
        {"family": "Q"},
        {"family": "D"},
        {"family": "zr", "of": "later"},
        {"family": "custom", "basis": ["x^2 = x^3"]},
    ],
)
def test_spec_rejects_bad_nil_entries(entry):
    with pytest.raises(ModelError):
        UniverseSpec.from_json({"nil": [entry]})


def test_packaged_recipes():
    spec = UniverseSpec.load("builtin:F2")
    assert spec.name == "F2"
    assert spec.group_exponents == (1, 2, 4, 8)
    assert spec.max_m == 6
    labels = [label for label, _ in spec.nil]
    assert "X_{2,4}" in labels
    assert "ZR(X_{2,4})" in labels
    assert {"Y_5", "ZR(Y_5)"} <= set(labels)
    assert spec.dims == (14, 6, 10, 8)
    f1 = UniverseSpec.load("builtin:F1")
    assert f1.group_exponents == (1, 2, 3, 4, 6, 9, 12, 18, 36)
    assert f1.dims[3] >= max(f1.group_exponents)
    nz = UniverseSpec.load("builtin:NZ")
    assert nz.group_exponents == (1, 2, 3, 4, 6, 12)
    assert {"X_{2,4}", "X_{2,5}", "X_{3,5}"} <= {label for label, _ in nz.nil}
    with pytest.raises(FileNotFoundError):
        UniverseSpec.load("builtin:nope")


def test_size_cap():
    recipe = dict(SMALL_RECIPE, size_cap=9)
    with pytest.raises(NotJoinClosed):
        build_universe(UniverseSpec.from_json(recipe))


def test_collapsed_join_is_named():
    recipe = {"group_exponents": [1, 2], "max_m": 2, "space": {"dA": 3, "dB": 2, "dC": 2, "dS": 0}}
    with pytest.raises(ModelError, match="has the profile of COM") as info:
        build_universe(UniverseSpec.from_json(recipe))
    message = str(info.value)
    assert "A_2" in message and "C_2" in message
    assert "(3, 2, 2, 0)" in message


def test_generators_and_labels(small_universe):
    u = small_universe
    assert u.label(u.top) == "COM"
    assert u.label(u.bottom) == "T"
    assert u.label(u.group(2)) == "A_2"
    assert u.label(u.monoid(1)) == "SL"
    assert u.label(u.monoid(2)) == "C_2"
    assert u.label(u.generator("N_ω")) == "N_ω"
    assert u.label(u.generator("D_3")) == "D_3"
    assert u.group(1) == u.monoid(0) == u.bottom
    assert u.label(u.monoid_var(2, 1)) == "A_2∨SL"
    assert u.element("A_2∨SL") == u.monoid_var(2, 1)
    with pytest.raises(NotInUniverse):
        u.generator("X_{1,3}")


def test_atoms_are_lattice_atoms(small_universe):
    u = small_universe
    assert u.flagged("is_atom").labels() == ["A_2", "SL", "ZM"]
    assert set(u.flagged("is_atom")) == set(semantic_atoms(u.lattice))
    with pytest.raises(KeyError):
        u.flagged("is_bogus")


def test_ground_truth_flags(small_universe):
    u = small_universe
    a2, c2, d3 = u.group(2), u.monoid(2), u.generator("D_3")
    assert u.info[a2].is_group and not u.info[a2].is_comb
    assert u.info[d3].is_nil and u.info[d3].is_zero_reduced and not u.info[d3].is_chain
    assert u.info[u.generator("N_ω")].is_chain
    assert u.info[c2].is_monoid and u.info[c2].is_comb and not u.info[c2].is_nil
    assert (u.info[c2].n, u.info[c2].m) == (1, 2)
    assert u.info[u.top].is_neutral and not u.info[u.top].is_periodic
    assert u.info[u.bottom].is_neutral
    assert set(u.info[u.top].to_json()) == {"label", "descriptor", "n", "m"} | set(FLAGS)


def test_nil_part_and_zero_reduced_hull(small_universe):
    u = small_universe
    assert u.nil_part(u.monoid(2)) == u.generator("N_ω")
    assert u.nil_part(u.monoid(1)) == u.bottom
    assert u.nil_part(u.generator("D_3")) == u.generator("D_3")
    assert u.zr(u.generator("N_3")) == u.generator("N_3")
    with pytest.raises(TopHasNoNilPart):
        u.nil_part(u.top)
    with pytest.raises(NotNil):
        u.zr(u.monoid(1))


def test_satisfies(small_universe):
    u = small_universe
    assert u.satisfies(u.monoid(1), parse_identity("x^2 = x"))
    assert not u.satisfies(u.monoid(2), parse_identity("x^2 = x"))
    assert u.satisfies(u.generator("D_3"), parse_identity("x^3 = 0"))


def test_save(tmp_path, small_universe):
    path = str(tmp_path / "small.json")
    small_universe.save(path)
    with open(path, encoding="utf-8") as f:
        document = json.load(f)
    assert len(document["labels"]) == len(small_universe)
    assert document["labels"][small_universe.top]["descriptor"] == "COM"
    assert FiniteLattice.load(path).labels == small_universe.lattice.labels


def test_model_checks(small_universe):
    assert decomposition_check(small_universe).passed
    facts = model_facts(small_universe)
    assert facts.passed, facts.failures
    report = nil_zr_check(small_universe, 2, 3)
    assert report.passed, report.failures
    assert len(report.rows) == 5
    assert all(row["equal"] for row in report.rows)
    with pytest.raises(ParamOutOfRange):
        nil_zr_check(small_universe, 1, 3)


def test_report_json(small_universe):
    document = decomposition_check(small_universe).to_json()
    assert document["name"] == "decomposition"
    assert document["passed"] is True
    assert document["failures"] == []


@pytest.mark.slow
def test_stability(small_spec):
    report = stability_check(small_spec, step=1)
    assert report.passed, report.failures


@pytest.mark.slow
@pytest.mark.parametrize("n, m", [(2, 4), (3, 4), (2, 5), (3, 5), (4, 5)])
def test_group_joins_against_zero_reduced_hulls(fragment_nz, n, m):
    report = nil_zr_check(fragment_nz, n, m)
    assert report.passed, report.failures


@pytest.mark.slow
def test_packaged_fragment_facts(fragment_f2):
    assert model_facts(fragment_f2).passed
    assert decomposition_check(fragment_f2).passed
    assert fragment_f2.nil_part(fragment_f2.monoid(3)) == fragment_f2.generator(NilD(3).name)


def test_order_is_reverse_profile_inclusion(small_universe):
    u = small_universe
    for i in u.lattice.elements:
        for j in u.lattice.elements:
            assert u.lattice.leq(i, j) == subset_of(u.profiles[j], u.profiles[i])


def test_periodic_top(small_universe):
    u = small_universe
    top = u.periodic_top
    assert top != u.top
    assert u.label(top) == "A_2∨C_2∨D_3"
    assert all(u.lattice.leq(i, top) for i in u.lattice.elements if i != u.top)
    assert u.info[top].is_periodic


def test_lemma8_check_is_nil_zr_check(small_universe):
    assert lemma8_check is nil_zr_check
    assert lemma8_check(small_universe, 2, 3).passed
