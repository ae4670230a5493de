# -*- coding: utf-8 -*-
"""
The finite identity space profiles are taken over.

Identities are stored once per renaming class: a balanced identity is the
sorted list of its letter columns ``(u_i, v_i)``, read in whichever side
order gives the larger key. Three layers cover what the named families need:
many high powers of two letters, low degree over five letters, and middle
degree over three letters. A fourth layer holds the shifts ``u = u x^s`` of
every zero word ``u`` of the first three, for a letter ``x`` of ``u`` or a
fresh one; it separates high group exponents without raising the
two-letter degree.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .derivation import Bounds
from .exceptions import BoundsTooSmall
from .varieties import JoinOf, Presented, Variety, ZeroReducedHull
from .words import MAX_LETTERS, Balanced, CommutativeWord, Identity, Zero

logger = logging.getLogger(__name__)

Profile = int


@dataclass(frozen=True)
class Layer:
    letters: int
    degree: int


def _balanced_key(u: Sequence[int], v: Sequence[int]) -> Tuple:
    width = max(len(u), len(v))
    u = tuple(u) + (0,) * (width - len(u))
    v = tuple(v) + (0,) * (width - len(v))
    columns = [c for c in zip(u, v) if c != (0, 0)]
    forward = tuple(sorted(columns, reverse=True))
    backward = tuple(sorted(((b, a) for a, b in columns), reverse=True))
    return ("=", max(forward, backward))


def _zero_key(w: Sequence[int]) -> Tuple:
    return ("0", tuple(sorted((e for e in w if e), reverse=True)))


def identity_key(identity: Identity) -> Tuple:
    """Key shared by all renamings and side swaps of ``identity``."""
    if isinstance(identity, Zero):
        return _zero_key(identity.w.exponents)
    return _balanced_key(identity.u.exponents, identity.v.exponents)


def _canonical_identities(layer: Layer) -> Iterable[Tuple[Tuple, Identity]]:
    d = layer.degree
    columns = sorted(((a, b) for a in range(d + 1) for b in range(d + 1) if a or b), reverse=True)

    def rec(prefix, start, sum_a, sum_b):
        if sum_a and sum_b:
            forward = tuple(prefix)
            backward = tuple(sorted(((b, a) for a, b in prefix), reverse=True))
            if forward >= backward:
                u = CommutativeWord(tuple(a for a, _ in prefix))
                v = CommutativeWord(tuple(b for _, b in prefix))
                yield ("=", forward), Balanced(u, v)
        if len(prefix) == layer.letters:
            return
        for i in range(start, len(columns)):
            a, b = columns[i]
            if sum_a + a > d or sum_b + b > d:
                continue
            prefix.append((a, b))
            yield from rec(prefix, i, sum_a + a, sum_b + b)
            prefix.pop()

    yield from rec([], 0, 0, 0)

    def partitions(remaining, largest, parts):
        if parts and sum(parts) > 0:
            yield tuple(parts)
        if len(parts) == layer.letters:
            return
        for e in range(min(remaining, largest), 0, -1):
            parts.append(e)
            yield from partitions(remaining - e, e, parts)
            parts.pop()

    for w in partitions(d, d, []):
        yield ("0", w), Zero(CommutativeWord(w))


def canonical_identities(letters: int, degree: int) -> List[Identity]:
    """One identity per renaming class over ``letters`` letters with sides of degree <= ``degree``."""
    return [identity for _, identity in _canonical_identities(Layer(letters, degree))]


SHIFT_WIDTH = 5
SHIFT_LAYER = 3


def _shifts(word: Tuple[int, ...], top: int) -> Iterator[Tuple[Tuple, Balanced]]:
    """``u = u x^s`` for ``s`` in ``1..top``, ``x`` a letter of ``u`` or a fresh one."""
    u = CommutativeWord(word)
    positions = range(len(word) + 1 if len(word) < SHIFT_WIDTH else len(word))
    for i in positions:
        for s in range(1, top + 1):
            v = list(word) + [0] * (i + 1 - len(word))
            v[i] += s
            yield _balanced_key(word, v), Balanced(u, CommutativeWord(tuple(v)))


class IdentitySpace:
    """
    Canonical identities of all four layers, deduplicated.

    Parameters
    ----------
    dA, dB, dC: int
        Degree bounds of the two-letter, five-letter and three-letter layers
    dS: int
        Largest shift ``s`` of the shift layer; 0 leaves the layer out
    """

    def __init__(self, dA: int = 14, dB: int = 6, dC: int = 10, dS: int = 8):
        for name, value in (("dA", dA), ("dB", dB), ("dC", dC)):
            if value < 2:
                raise BoundsTooSmall(f"identity space bound {name} must be at least 2, got {value}")
        if dS < 0:
            raise BoundsTooSmall(f"identity space bound dS must be non-negative, got {dS}")
        self.dims = (dA, dB, dC, dS)
        self.layers = (Layer(2, dA), Layer(5, dB), Layer(3, dC))
        self.identities: List[Identity] = []
        self.layer_of: List[int] = []
        self._index: Dict[Tuple, int] = {}
        for number, layer in enumerate(self.layers):
            for key, identity in _canonical_identities(layer):
                self._add(key, identity, number)
        zero_words = [i.w.exponents for i in self.identities if isinstance(i, Zero)]
        for word in zero_words:
            for key, identity in _shifts(word, dS):
                self._add(key, identity, SHIFT_LAYER)
        size = len(self.identities)
        self.is_zero = np.array([isinstance(i, Zero) for i in self.identities], dtype=bool)
        self.is_trivial = np.array(
            [isinstance(i, Balanced) and i.u == i.v for i in self.identities], dtype=bool
        )
        self.is_shift = np.array(self.layer_of, dtype=np.intp) == SHIFT_LAYER
        # for u = v: positions of u = 0 and v = 0; a shift whose v = 0 is
        # outside the space points both at u = 0
        self._zero_u = np.zeros(size, dtype=np.intp)
        self._zero_v = np.zeros(size, dtype=np.intp)
        for i, identity in enumerate(self.identities):
            if isinstance(identity, Balanced):
                self._zero_u[i] = self._index[_zero_key(identity.u.exponents)]
                self._zero_v[i] = self._index.get(_zero_key(identity.v.exponents), self._zero_u[i])
            else:
                self._zero_u[i] = self._zero_v[i] = i
        logger.info(
            f"identity space {self.dims}: {size} identities, {int(self.is_zero.sum())} of the form w = 0, "
            f"{int(self.is_shift.sum())} shifts"
        )

    def _add(self, key: Tuple, identity: Identity, layer: int):
        if key not in self._index:
            self._index[key] = len(self.identities)
            self.identities.append(identity)
            self.layer_of.append(layer)

    def __len__(self):
        return len(self.identities)

    def __repr__(self):
        dA, dB, dC, dS = self.dims
        return f"<IdentitySpace dA={dA} dB={dB} dC={dC} dS={dS}, {len(self)} identities>"

    def index(self, identity: Identity) -> int:
        try:
            return self._index[identity_key(identity)]
        except KeyError:
            raise BoundsTooSmall(f"identity {identity} is outside the identity space {self.dims}") from None

    def __contains__(self, identity: Identity) -> bool:
        return identity_key(identity) in self._index

    # profile <-> array

    def to_array(self, profile: Profile) -> np.ndarray:
        size = len(self.identities)
        raw = profile.to_bytes((size + 7) // 8, "little")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size].astype(bool)

    @staticmethod
    def from_array(bits: np.ndarray) -> Profile:
        return int.from_bytes(np.packbits(bits.astype(bool), bitorder="little").tobytes(), "little")

    def holds(self, profile: Profile, identity: Identity) -> bool:
        return bool(profile >> self.index(identity) & 1)

    @property
    def trivial_profile(self) -> Profile:
        """Identities every variety satisfies, i.e. the profile of COM."""
        return self.from_array(self.is_trivial)

    def zr_profile(self, profile: Profile) -> Profile:
        """
        Profile of the least 0-reduced variety above the nil-variety with ``profile``.

        ``u = v`` holds there iff ``u`` and ``v`` are equal or both are zero.
        """
        bits = self.to_array(profile)
        zero = bits & self.is_zero
        out = self.is_trivial | zero | (~self.is_zero & zero[self._zero_u] & zero[self._zero_v])
        return self.from_array(out)

    def both_zero(self, bits: np.ndarray) -> np.ndarray:
        """``bits`` plus every ``u = v`` whose sides are both zero in ``bits``."""
        return bits | (~self.is_zero & bits[self._zero_u] & bits[self._zero_v])

    def layer_bounds(self, layer: int, basis: Sequence[Identity] = ()) -> Bounds:
        """
        Derivation bounds for deciding every identity of ``layer``.

        With ``x^k = 0`` in the basis, words with an exponent of ``k`` are zero
        at any degree, so the degree only has to reach the longest word
        without one.
        """
        spec = self.layers[layer]
        letters = min(spec.letters + 1, MAX_LETTERS)
        reach = spec.degree + 1
        powers = [b.w.degree for b in basis if isinstance(b, Zero) and len(b.w.support) == 1]
        if powers:
            reach = min(reach, letters * (min(powers) - 1) + 1)
        return Bounds(letters, max(reach, _basis_degree(basis) + 4))

    def shift_bounds(self, width: int, basis: Sequence[Identity] = ()) -> Bounds:
        """Derivation bounds for the shifts over ``width`` letters."""
        rows = [
            i
            for i in np.flatnonzero(self.is_shift)
            if self.identities[i].width == width
        ]
        degree = max([self.identities[i].v.degree for i in rows] or [1])
        return Bounds(min(width, MAX_LETTERS), max(degree + 1, _basis_degree(basis) + 4))

    def with_increment(self, step: int) -> "IdentitySpace":
        return IdentitySpace(*(d + step for d in self.dims))


def _basis_degree(basis: Sequence[Identity]) -> int:
    return max([b.w.degree if isinstance(b, Zero) else max(b.u.degree, b.v.degree) for b in basis] or [0])


def _decide(closure, space: IdentitySpace, rows: Iterable[int], bits: np.ndarray):
    for i in rows:
        if bits[i]:
            continue
        try:
            bits[i] = closure.holds(space.identities[i])
        except BoundsTooSmall:
            pass


def _presented_bits(variety: Presented, space: IdentitySpace) -> np.ndarray:
    """
    Every layer's closure may settle any row; a row none of them reaches
    stays unsatisfied. Shifts of a nil-variety hold exactly when their word
    is zero, since ``u = u x^s`` gives ``u = u x^(ks)`` for all ``k``.
    """
    bits = np.zeros(len(space), dtype=bool)
    base = np.flatnonzero(~space.is_shift)
    for layer in range(len(space.layers)):
        bounds = variety.bounds or space.layer_bounds(layer, variety.identities)
        _decide(variety.closure(bounds), space, base, bits)
    shifts = np.flatnonzero(space.is_shift)
    if variety.is_nil:
        bits[shifts] = bits[space._zero_u[shifts]]
    else:
        for width in sorted({space.identities[i].width for i in shifts}):
            rows = [i for i in shifts if space.identities[i].width == width]
            bounds = variety.bounds or space.shift_bounds(width, variety.identities)
            try:
                closure = variety.closure(bounds)
            except BoundsTooSmall:
                continue
            _decide(closure, space, rows, bits)
    return space.both_zero(bits)


def identity_profile(variety: Variety, space: IdentitySpace) -> Profile:
    """Bitset of the identities of ``space`` that ``variety`` satisfies."""
    if isinstance(variety, JoinOf):
        profile = -1
        for component in variety.components:
            profile &= identity_profile(component, space)
        return profile if variety.components else space.from_array(np.ones(len(space), dtype=bool))
    if isinstance(variety, ZeroReducedHull):
        return space.zr_profile(identity_profile(variety.base, space))
    if isinstance(variety, Presented):
        return space.from_array(_presented_bits(variety, space))
    bits = np.fromiter((variety.satisfies(i) for i in space.identities), dtype=bool, count=len(space))
    return space.from_array(bits)


def profiles(varieties: Sequence[Variety], space: IdentitySpace, workers: Optional[int] = None) -> List[Profile]:
    """Profiles of several varieties, optionally on a thread pool."""
    if not workers or workers <= 1 or len(varieties) <= 1:
        return [identity_profile(v, space) for v in varieties]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: identity_profile(v, space), varieties))


def subset_of(small: Profile, large: Profile) -> bool:
    """Whether every identity in ``small`` is in ``large``."""
    return small & ~large == 0
