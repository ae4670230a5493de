# -*- coding: utf-8 -*-
"""
Named varieties of commutative semigroups and their satisfaction rules.

Every descriptor answers ``satisfies(identity)``. The named families use
closed-form rules on exponent vectors; varieties given only by a basis fall
back to bounded derivation.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .derivation import Bounds, default_bounds, derivation_closure
from .exceptions import NotNil
from .words import Balanced, CommutativeWord, Identity, Zero, parse_identity

logger = logging.getLogger(__name__)


def _vectors(identity: Balanced):
    width = identity.width
    return identity.u.padded(width), identity.v.padded(width)


class Variety:
    """Base class of variety descriptors."""

    name = "?"
    is_nil = False

    def satisfies(self, identity: Identity) -> bool:
        if isinstance(identity, Zero):
            return self._balanced(identity.expand())
        return self._balanced(identity)

    def _balanced(self, identity: Balanced) -> bool:
        raise NotImplementedError

    def basis(self) -> Tuple[Identity, ...]:
        """Defining identities within the class of commutative semigroups."""
        raise NotImplementedError

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Trivial(Variety):
    name = "T"
    is_nil = True

    def _balanced(self, identity):
        return True

    def basis(self):
        return (parse_identity("x = 0"),)


@dataclass(frozen=True)
class ComTop(Variety):
    """All commutative semigroups."""

    name = "COM"

    def _balanced(self, identity):
        u, v = _vectors(identity)
        return u == v

    def basis(self):
        return ()


@dataclass(frozen=True)
class AbelianGroup(Variety):
    """A_n: Abelian groups whose exponent divides ``n``."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"group exponent must be positive, got {self.n}")

    @property
    def name(self):
        return "T" if self.n == 1 else f"A_{self.n}"

    def _balanced(self, identity):
        u, v = _vectors(identity)
        return all((a - b) % self.n == 0 for a, b in zip(u, v))

    def basis(self):
        return (parse_identity(f"x^{self.n} y = y"),)


@dataclass(frozen=True)
class CyclicMonoid(Variety):
    """C_m = var{x^m = x^(m+1)}; C_0 is trivial and C_1 is the semilattices."""

    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"C_m needs m >= 0, got {self.m}")

    @property
    def name(self):
        return {0: "T", 1: "SL"}.get(self.m, f"C_{self.m}")

    def _balanced(self, identity):
        if self.m == 0:
            return True
        u, v = _vectors(identity)
        return all(min(a, self.m) == min(b, self.m) for a, b in zip(u, v))

    def basis(self):
        if self.m == 0:
            return Trivial().basis()
        return (parse_identity(f"x^{self.m} = x^{self.m + 1}"),)


class _ZeroWordVariety(Variety):
    """Nil-varieties given by 0-reduced identities: ``u = v`` iff equal or both zero."""

    is_nil = True

    def is_zero_word(self, exponents) -> bool:
        raise NotImplementedError

    def _balanced(self, identity):
        u, v = _vectors(identity)
        return u == v or (self.is_zero_word(u) and self.is_zero_word(v))


@dataclass(frozen=True)
class NilD(_ZeroWordVariety):
    """D_k = var{x^k = 0}; D_2 is N_omega."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"D_k needs k >= 1, got {self.k}")

    @property
    def name(self):
        return {1: "T", 2: "N_ω"}.get(self.k, f"D_{self.k}")

    def is_zero_word(self, exponents):
        return max(exponents) >= self.k

    def basis(self):
        return (parse_identity(f"x^{self.k} = 0"),)


@dataclass(frozen=True)
class NilN(_ZeroWordVariety):
    """N_k = var{x^2 = x_1 x_2 ... x_k = 0}; N_2 is ZM."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"N_k needs k >= 1, got {self.k}")

    @property
    def name(self):
        return {1: "T", 2: "ZM"}.get(self.k, f"N_{self.k}")

    def is_zero_word(self, exponents):
        return max(exponents) >= 2 or sum(exponents) >= self.k

    def basis(self):
        product = CommutativeWord((1,) * self.k)
        return (parse_identity("x^2 = 0"), Zero(product))


@dataclass(frozen=True)
class NilN3c(_ZeroWordVariety):
    """N_3^c = var{xyz = 0}."""

    name = "N_3^c"

    def is_zero_word(self, exponents):
        return sum(exponents) >= 3

    def basis(self):
        return (parse_identity("x y z = 0"),)


@dataclass(frozen=True)
class Presented(Variety):
    """
    A variety given by a finite basis, decided by bounded derivation.

    Parameters
    ----------
    identities: tuple of identities
    label: str
        Display name
    bounds: Bounds, optional
        Fixed derivation bounds; by default they are chosen per query
    """

    identities: Tuple[Identity, ...]
    label: str = "V"
    bounds: Optional[Bounds] = None

    @property
    def name(self):
        return self.label

    def basis(self):
        return self.identities

    def closure(self, bounds: Bounds):
        return derivation_closure(self.identities, bounds)

    def satisfies(self, identity: Identity, bounds: Optional[Bounds] = None) -> bool:
        bounds = bounds or self.bounds or default_bounds(self.identities, identity)
        return self.closure(bounds).holds(identity)


@dataclass(frozen=True)
class CustomNil(Presented):
    """A nil-variety given by a finite basis containing at least one ``w = 0``."""

    is_nil = True

    def __post_init__(self):
        if not any(isinstance(i, Zero) for i in self.identities):
            raise NotNil(f"basis of {self.label} has no identity of the form w = 0")


def counterexample_variety(n: int, m: int) -> CustomNil:
    """X_{n,m} = var{x^m = 0, x^(n+1) y = x y^(n+1)}, a subvariety of D_m."""
    if n < 1 or m < 1:
        raise ValueError(f"X_(n,m) needs n, m >= 1, got ({n}, {m})")
    basis = (parse_identity(f"x^{m} = 0"), parse_identity(f"x^{n + 1} y = x y^{n + 1}"))
    return CustomNil(basis, label=f"X_{{{n},{m}}}")


@dataclass(frozen=True)
class ZeroReducedHull(Variety):
    """
    ZR(base): the least variety containing ``base`` given by identities ``w = 0``.

    Its identities are ``u = v`` with ``u`` and ``v`` equal, or both zero in
    ``base``.
    """

    base: Variety

    is_nil = True

    def __post_init__(self):
        if not self.base.is_nil:
            raise NotNil(f"ZR is defined for nil-varieties only, got {self.base.name}")

    @property
    def name(self):
        return f"ZR({self.base.name})"

    def satisfies(self, identity: Identity) -> bool:
        if isinstance(identity, Zero):
            return self.base.satisfies(identity)
        if identity.u == identity.v:
            return True
        return self.base.satisfies(Zero(identity.u)) and self.base.satisfies(Zero(identity.v))

    def basis(self):
        raise NotImplementedError("ZR hulls are described by their identities, not a finite basis")


@dataclass(frozen=True)
class JoinOf(Variety):
    """The join of varieties: the identities common to all components."""

    components: Tuple[Variety, ...] = field(default_factory=tuple)

    @property
    def name(self):
        return "∨".join(c.name for c in self.components) or "T"

    @property
    def is_nil(self):
        return all(c.is_nil for c in self.components)

    def satisfies(self, identity: Identity) -> bool:
        return all(c.satisfies(identity) for c in self.components)

    def basis(self):
        raise NotImplementedError("joins are described by their identities, not a finite basis")


def satisfies(variety: Variety, identity: Identity) -> bool:
    """Whether ``variety`` satisfies ``identity``."""
    return variety.satisfies(identity)


def defining_bases() -> Sequence[Tuple[Variety, Tuple[Identity, ...]]]:
    """Named families with small parameters paired with their defining bases."""
    families = [AbelianGroup(n) for n in range(1, 7)]
    families += [CyclicMonoid(m) for m in range(0, 5)]
    families += [NilD(k) for k in range(1, 6)]
    families += [NilN(k) for k in range(1, 5)]
    families.append(NilN3c())
    return [(v, v.basis()) for v in families]
