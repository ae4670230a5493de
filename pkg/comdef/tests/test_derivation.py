import pytest

from comdef.derivation import Bounds, DerivationClosure, bfs_consequence, default_bounds
from comdef.exceptions import BoundsTooSmall
from comdef.words import CommutativeWord, parse_identity


def consequence(basis, identity, bounds=None):
    return bfs_consequence([parse_identity(b) for b in basis], parse_identity(identity), bounds)


def test_idempotent_powers():
    assert consequence(["x^2 = x"], "x^3 = x")
    assert consequence(["x^2 = x"], "x^2 y = x y^3")
    assert not consequence(["x^2 = x"], "x y = x")


def test_group_identities():
    assert consequence(["x^2 y = y"], "x^3 y = x y")
    assert consequence(["x^2 y = y"], "x^2 = y^2")
    assert not consequence(["x^2 y = y"], "x^3 = x^2")


def test_zero_identities():
    assert consequence(["x^2 = 0"], "x^2 y = 0")
    assert consequence(["x^2 = 0"], "x^3 = x^2 y")
    assert not consequence(["x^2 = 0"], "x y = 0")
    assert not consequence(["x^3 = 0"], "x^2 = 0")
    assert consequence(["x y = 0"], "x^2 = 0")


def test_trivial_basis_collapses_everything():
    assert consequence(["x = 0"], "x y = y^2")
    assert consequence(["x = 0"], "x^3 = 0")


def test_identity_consequence_is_reflexive():
    assert consequence([], "x^2 y = y x^2")
    assert not consequence([], "x^2 = x")


def test_bounds_validation():
    with pytest.raises(BoundsTooSmall):
        Bounds(0, 3)
    with pytest.raises(BoundsTooSmall):
        Bounds(11, 3)
    with pytest.raises(BoundsTooSmall):
        Bounds(2, 0)


def test_identity_outside_bounds():
    with pytest.raises(BoundsTooSmall):
        consequence(["x^2 = x"], "x^9 = x", Bounds(2, 4))


def test_basis_too_wide_for_bounds():
    with pytest.raises(BoundsTooSmall):
        DerivationClosure([parse_identity("x y z = 0")], Bounds(2, 5))


def test_zero_pattern_reaches_past_degree_bound():
    closure = DerivationClosure([parse_identity("x^2 = 0")], Bounds(3, 4))
    assert closure.covers_zero_pattern((5, 1))
    assert closure.holds(parse_identity("x^5 y = x^2"))
    assert closure.is_zero(CommutativeWord.of(1, 2))
    assert not closure.is_zero(CommutativeWord.of(1, 1))


def test_default_bounds_leave_a_fresh_letter():
    bounds = default_bounds([parse_identity("x^3 = 0")], parse_identity("x^2 y z = 0"))
    assert bounds.letters >= 4
    assert bounds.degree >= 7
