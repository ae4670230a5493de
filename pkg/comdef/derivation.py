# -*- coding: utf-8 -*-
"""
Bounded equational consequence for commutative semigroups.

The fully invariant congruence generated by a basis on the free commutative
semigroup is the equivalence closure of the translates ``c u' = c v'`` of
substitution instances ``u' = v'`` of basis identities. Restricting every
word to at most ``letters`` letters and ``degree`` total degree gives a finite
union-find problem. Words equal to ``0`` live in one extra class that is
closed upward under multiplication.

A positive answer is a genuine derivation. A negative answer only means no
derivation stays inside the bounds.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .exceptions import BoundsTooSmall
from .words import MAX_LETTERS, Balanced, Identity, Zero, words_within

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]

_ZERO = "0"


@dataclass(frozen=True)
class Bounds:
    """Largest alphabet and total degree of intermediate words."""

    letters: int
    degree: int

    def __post_init__(self):
        if not 1 <= self.letters <= MAX_LETTERS:
            raise BoundsTooSmall(f"letters must lie in 1..{MAX_LETTERS}, got {self.letters}")
        if self.degree < 1:
            raise BoundsTooSmall(f"degree bound must be positive, got {self.degree}")


def _identity_degree(identity: Identity) -> int:
    if isinstance(identity, Zero):
        return identity.w.degree
    return max(identity.u.degree, identity.v.degree)


def default_bounds(basis: Sequence[Identity], identity: Identity) -> Bounds:
    """Bounds large enough for ``identity`` with room for a few rewriting steps."""
    letters = max([3, identity.width + 1] + [b.width for b in basis])
    degree = max([_identity_degree(identity) + 1] + [_identity_degree(b) + 4 for b in basis])
    return Bounds(min(letters, MAX_LETTERS), degree)


class DerivationClosure:
    """
    The congruence generated by ``basis`` restricted to ``bounds``.

    Parameters
    ----------
    basis: sequence of Balanced or Zero
        Defining identities; commutativity is built into the word model
    bounds: Bounds
        Alphabet size and degree limit for every word used in derivations
    """

    def __init__(self, basis: Sequence[Identity], bounds: Bounds):
        self.basis = tuple(basis)
        self.bounds = bounds
        for identity in self.basis:
            if identity.width > bounds.letters:
                raise BoundsTooSmall(f"basis identity {identity} needs more than {bounds.letters} letters")
        self._parent: Dict[object, object] = {}
        self._members: Dict[object, List[object]] = {}
        self._patterns = [tuple(e for e in i.w.exponents if e) for i in self.basis if isinstance(i, Zero)]
        self._by_degree: List[List[Vector]] = [[] for _ in range(bounds.degree + 1)]
        for word in words_within(bounds.letters, bounds.degree):
            self._by_degree[sum(word)].append(word)
        unions = 0
        for identity in self.basis:
            if isinstance(identity, Zero):
                unions += self._add_zero(identity)
            else:
                unions += self._add_balanced(identity)
        self._close_zero()
        logger.debug(
            f"derivation closure for {len(self.basis)} identities within {bounds}: "
            f"{unions} instance pairs, {len(self._members.get(_ZERO, [_ZERO])) - 1} zero words"
        )

    # union-find

    def _find(self, key):
        parent = self._parent
        root = key
        while parent.get(root, root) != root:
            root = parent[root]
        while key != root:
            following = parent.get(key, key)
            parent[key] = root
            key = following
        return root

    def _union(self, a, b) -> bool:
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return False
        members = self._members
        if ra == _ZERO or (rb != _ZERO and len(members.get(ra, ())) >= len(members.get(rb, ()))):
            keep, gone = ra, rb
        else:
            keep, gone = rb, ra
        # the zero sentinel always stays a root
        self._parent[gone] = keep
        members.setdefault(keep, [keep]).extend(members.pop(gone, [gone]))
        return True

    # instances

    def _images(self, max_degree: int, single: bool) -> List[Vector]:
        if single:
            return self._by_degree[1] if max_degree >= 1 else []
        return [w for d in range(1, max_degree + 1) for w in self._by_degree[d]]

    def _substitutions(self, exponents: Sequence[Tuple[int, int]]):
        """
        Yield the images ``(sigma(u), sigma(v))`` of a balanced identity.

        ``exponents`` lists ``(u_i, v_i)`` per letter. A letter occurring once on
        each side only needs single-letter images: a longer image is a
        single letter plus a context, and contexts are added afterwards.
        """
        width = self.bounds.letters
        limit = self.bounds.degree
        choices = []
        for a, b in exponents:
            if a == 0 and b == 0:
                continue
            top = limit // max(a, b)
            choices.append((a, b, self._images(top, a == 1 and b == 1)))

        def rec(i, left, right):
            if i == len(choices):
                yield left, right
                return
            a, b, images = choices[i]
            for image in images:
                d = sum(image)
                if sum(left) + a * d > limit or sum(right) + b * d > limit:
                    continue
                yield from rec(
                    i + 1,
                    tuple(x + a * y for x, y in zip(left, image)),
                    tuple(x + b * y for x, y in zip(right, image)),
                )

        yield from rec(0, (0,) * width, (0,) * width)

    def _contexts(self, room: int):
        yield (0,) * self.bounds.letters
        for d in range(1, room + 1):
            yield from self._by_degree[d]

    def _add_balanced(self, identity: Balanced) -> int:
        width = self.bounds.letters
        pairs = list(zip(identity.u.padded(width), identity.v.padded(width)))
        count = 0
        for left, right in self._substitutions(pairs):
            if left == right:
                continue
            room = self.bounds.degree - max(sum(left), sum(right))
            for context in self._contexts(room):
                self._union(
                    tuple(x + c for x, c in zip(left, context)),
                    tuple(x + c for x, c in zip(right, context)),
                )
                count += 1
        return count

    def _add_zero(self, identity: Zero) -> int:
        # images of longer words lie above single-letter images, which the
        # upward closure reaches anyway
        width = self.bounds.letters
        exps = [e for e in identity.w.exponents if e]
        count = 0
        for target in itertools.product(range(width), repeat=len(exps)):
            image = [0] * width
            for e, t in zip(exps, target):
                image[t] += e
            if sum(image) <= self.bounds.degree:
                self._union(tuple(image), _ZERO)
                count += 1
        return count

    def _close_zero(self):
        queue = list(self._members.get(_ZERO, []))
        width = self.bounds.letters
        while queue:
            word = queue.pop()
            if word == _ZERO or sum(word) >= self.bounds.degree:
                continue
            for i in range(width):
                up = word[:i] + (word[i] + 1,) + word[i + 1 :]
                r = self._find(up)
                if r != _ZERO:
                    queue.extend(self._members.get(r, [r]))
                    self._union(up, _ZERO)

    # queries

    def covers_zero_pattern(self, exponents: Sequence[int]) -> bool:
        """
        Whether the word lies above a letter-to-letter image of some ``w = 0``
        in the basis; such words are zero whatever their degree.
        """
        for pattern in self._patterns:
            for target in itertools.product(range(len(exponents)), repeat=len(pattern)):
                need = [0] * len(exponents)
                for e, t in zip(pattern, target):
                    need[t] += e
                if all(n <= e for n, e in zip(need, exponents)):
                    return True
        return False

    def _key(self, exponents: Sequence[int]):
        if len(exponents) > self.bounds.letters:
            raise BoundsTooSmall(f"word {exponents} has more than {self.bounds.letters} letters")
        if sum(exponents) <= self.bounds.degree:
            return tuple(exponents) + (0,) * (self.bounds.letters - len(exponents))
        if self.covers_zero_pattern(exponents):
            return _ZERO
        raise BoundsTooSmall(f"word {exponents} does not fit in {self.bounds}")

    def is_zero(self, word) -> bool:
        """Whether ``word = 0`` is derivable."""
        if word.width + 1 > self.bounds.letters:
            raise BoundsTooSmall(f"word {word} leaves no fresh letter in {self.bounds}")
        w = word.padded(word.width + 1)
        up = w[:-1] + (1,)
        return self._find(self._key(w)) == self._find(self._key(up))

    def holds(self, identity: Identity) -> bool:
        if isinstance(identity, Zero):
            return self.is_zero(identity.w)
        if identity.u == identity.v:
            return True
        return self._find(self._key(identity.u.exponents)) == self._find(self._key(identity.v.exponents))


@lru_cache(maxsize=64)
def derivation_closure(basis: Tuple[Identity, ...], bounds: Bounds) -> DerivationClosure:
    """Shared closures; concurrent first calls may build the same closure twice."""
    return DerivationClosure(basis, bounds)


def bfs_consequence(basis: Sequence[Identity], identity: Identity, bounds: Optional[Bounds] = None) -> bool:
    """
    Whether ``identity`` follows from ``basis`` and commutativity within ``bounds``.

    Parameters
    ----------
    basis: sequence of identities
    identity: Balanced or Zero
    bounds: Bounds, optional
        Defaults to :func:`default_bounds`

    Raises
    ------
    BoundsTooSmall
        If ``identity`` itself does not fit inside ``bounds``
    """
    basis = tuple(basis)
    if bounds is None:
        bounds = default_bounds(basis, identity)
    return derivation_closure(basis, bounds).holds(identity)
