import pytest

from comdef.exceptions import AlphabetOverflow
from comdef.words import Balanced, CommutativeWord, Zero, parse_identity, words_within

W = CommutativeWord.of


def test_word_normalizes_trailing_zeros():
    assert W(1, 0, 0) == W(1)
    assert W(0, 2).width == 2
    assert W(3, 1).degree == 4
    assert W(0, 2, 1).support == frozenset({1, 2})
    assert W(2).exponent(5) == 0


def test_word_rejects_bad_exponents():
    with pytest.raises(ValueError):
        W(1, -1)
    with pytest.raises(ValueError):
        W(0, 0)
    with pytest.raises(AlphabetOverflow):
        W(*([1] * 11))
    with pytest.raises(AlphabetOverflow):
        W(1, 1, 1).padded(2)


def test_word_arithmetic():
    assert W(1) * W(0, 2) == W(1, 2)
    assert W(0, 1, 3).canonical() == W(3, 1)
    assert W(2, 1).rename([1, 0]) == W(1, 2)
    assert CommutativeWord.letter(2, 3) == W(0, 0, 3)


def test_word_text():
    assert str(W(3, 1)) == "x^3 y"
    assert str(W(0, 0, 1)) == "z"


def test_parse_balanced():
    identity = parse_identity("x^3 y = x y^3")
    assert identity == Balanced(W(3, 1), W(1, 3))
    assert str(identity) == "x^3 y = x y^3"


def test_parse_zero():
    assert parse_identity("x^4 = 0") == Zero(W(4))
    assert parse_identity("0 = x y") == Zero(W(1, 1))
    assert str(Zero(W(2))) == "x^2 = 0"


def test_parse_names_by_first_appearance():
    assert parse_identity("b a^2 = a") == Balanced(W(1, 2), W(0, 1))
    assert parse_identity("x_1 x_2 = x_2 x_1") == Balanced(W(1, 1), W(1, 1))
    assert parse_identity("x x = x^2") == Balanced(W(2), W(2))


@pytest.mark.parametrize("text", ["x = y = z", "x^2 =", "x^2 = y !", "x y"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_identity(text)


def test_zero_expands_with_fresh_letter():
    assert Zero(W(3)).expand() == Balanced(W(3, 1), W(3))
    assert Zero(W(1, 1)).expand() == Balanced(W(1, 1, 1), W(1, 1))


def test_words_within():
    assert set(words_within(2, 2)) == {(0, 1), (0, 2), (1, 0), (1, 1), (2, 0)}
    assert all(1 <= sum(w) <= 3 for w in words_within(3, 3))
    assert len(list(words_within(1, 4))) == 4
