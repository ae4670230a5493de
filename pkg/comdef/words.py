# -*- coding: utf-8 -*-
"""
Commutative words and identities.

A commutative word is its exponent vector: ``x^3 y`` is ``(3, 1)``. Letters
are positions in the vector; ``x, y, z, t, ...`` are only display names.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterator, Tuple, Union

from .exceptions import AlphabetOverflow

logger = logging.getLogger(__name__)

LETTERS = ("x", "y", "z", "t", "u", "v", "w", "s", "r", "q")
MAX_LETTERS = len(LETTERS)

_TOKEN = re.compile(r"\s*([a-zA-Z](?:_?\d+)?)(?:\s*\^\s*(\d+))?\s*")


def _check_alphabet(size: int):
    if size > MAX_LETTERS:
        raise AlphabetOverflow(f"words over {size} letters exceed the alphabet of {MAX_LETTERS}")


@dataclass(frozen=True)
class CommutativeWord:
    """
    A nonempty word of a free commutative semigroup.

    ``exponents[i]`` is the number of occurrences of letter ``i``; trailing
    zero entries are dropped so equal words compare equal.
    """

    exponents: Tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        if not exps:
            raise ValueError("words are nonempty")
        _check_alphabet(len(exps))
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def of(cls, *exponents: int) -> "CommutativeWord":
        return cls(tuple(exponents))

    @classmethod
    def letter(cls, index: int, power: int = 1) -> "CommutativeWord":
        return cls((0,) * index + (power,))

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def width(self) -> int:
        """Number of alphabet positions the vector spans."""
        return len(self.exponents)

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, e in enumerate(self.exponents) if e)

    def exponent(self, letter: int) -> int:
        return self.exponents[letter] if letter < len(self.exponents) else 0

    def padded(self, width: int) -> Tuple[int, ...]:
        if width < len(self.exponents):
            raise AlphabetOverflow(f"{self} does not fit in {width} letters")
        return self.exponents + (0,) * (width - len(self.exponents))

    def __mul__(self, other: "CommutativeWord") -> "CommutativeWord":
        width = max(self.width, other.width)
        return CommutativeWord(tuple(a + b for a, b in zip(self.padded(width), other.padded(width))))

    def canonical(self) -> "CommutativeWord":
        """Representative of the word up to renaming letters."""
        return CommutativeWord(tuple(sorted((e for e in self.exponents if e), reverse=True)))

    def rename(self, permutation) -> "CommutativeWord":
        """Send letter ``i`` to letter ``permutation[i]``."""
        out = [0] * max(len(permutation), self.width)
        for i, e in enumerate(self.exponents):
            out[permutation[i]] += e
        return CommutativeWord(tuple(out))

    def __str__(self):
        parts = []
        for i, e in enumerate(self.exponents):
            if e:
                parts.append(LETTERS[i] if e == 1 else f"{LETTERS[i]}^{e}")
        return " ".join(parts)


@dataclass(frozen=True)
class Balanced:
    """The identity ``u = v``."""

    u: CommutativeWord
    v: CommutativeWord

    @property
    def width(self) -> int:
        return max(self.u.width, self.v.width)

    def __str__(self):
        return f"{self.u} = {self.v}"


@dataclass(frozen=True)
class Zero:
    """
    The 0-reduced identity ``w = 0``.

    It abbreviates ``w x = x w = w`` for a letter ``x`` not in ``w``; with
    commutativity this is the single balanced identity ``w x = w``.
    """

    w: CommutativeWord

    @property
    def width(self) -> int:
        return self.w.width

    def expand(self) -> Balanced:
        return Balanced(self.w * CommutativeWord.letter(self.w.width), self.w)

    def __str__(self):
        return f"{self.w} = 0"


Identity = Union[Balanced, Zero]


def _parse_word(text: str, names: Dict[str, int], source: str) -> CommutativeWord:
    pos = 0
    counts: Dict[int, int] = {}
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise ValueError(f"cannot read a word at {text[pos:]!r} in identity {source!r}")
        name, power = match.group(1), int(match.group(2) or 1)
        if name not in names:
            names[name] = len(names)
            _check_alphabet(len(names))
        counts[names[name]] = counts.get(names[name], 0) + power
        pos = match.end()
    if not counts or not any(counts.values()):
        raise ValueError(f"empty word in identity {source!r}")
    return CommutativeWord(tuple(counts.get(i, 0) for i in range(max(counts) + 1)))


def parse_identity(text: str) -> Identity:
    """
    Read ``"x^3 y = x y^3"`` or ``"x^4 = 0"``.

    Letter names are assigned positions in order of first appearance.
    """
    if text.count("=") != 1:
        raise ValueError(f"identity {text!r} must contain exactly one '='")
    left, right = (side.strip() for side in text.split("="))
    names: Dict[str, int] = {}
    if right == "0":
        return Zero(_parse_word(left, names, text))
    if left == "0":
        return Zero(_parse_word(right, names, text))
    u = _parse_word(left, names, text)
    return Balanced(u, _parse_word(right, names, text))


def words_within(letters: int, degree: int) -> Iterator[Tuple[int, ...]]:
    """All exponent vectors of length ``letters`` with total degree 1..``degree``."""

    def rec(prefix, remaining, slots):
        if slots == 0:
            if sum(prefix):
                yield tuple(prefix)
            return
        for e in range(remaining + 1):
            prefix.append(e)
            yield from rec(prefix, remaining - e, slots - 1)
            prefix.pop()

    yield from rec([], degree, letters)
