# -*- coding: utf-8 -*-
"""
Finite lattices with dense order/meet/join tables, plus brute-force oracles.

The oracles (``semantic_*``) never touch the formula machinery; they are the
independent ground truth the evaluator is checked against.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .exceptions import ElementError, LatticeError, NotALattice, NotAPoset
from .utils import read_json, write_json, write_text

logger = logging.getLogger(__name__)


def _bound_table(order: np.ndarray, operation: str, labels: Sequence[str]) -> np.ndarray:
    """
    Least upper bounds of every pair under ``order`` (``order[a, c]`` is a <= c).

    Among the common upper bounds the least one, if it exists, is the unique
    bound with the smallest down-set; it is then checked against all others.
    """
    n = order.shape[0]
    downsize = order.sum(axis=0)
    table = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        upper = order[a][None, :] & order
        missing = ~upper.any(axis=1)
        if missing.any():
            b = int(np.flatnonzero(missing)[0])
            raise NotALattice((a, b), operation, (labels[a], labels[b]))
        candidate = np.where(upper, downsize[None, :], n + 1).argmin(axis=1)
        bad = (upper & ~order[candidate]).any(axis=1)
        if bad.any():
            b = int(np.flatnonzero(bad)[0])
            raise NotALattice((a, b), operation, (labels[a], labels[b]))
        table[a] = candidate
    return table


class FiniteLattice:
    """
    A finite lattice given by its order relation.

    Elements are the ids ``0 .. n-1``; labels are display metadata and must be
    unique. Instances are immutable once built and safe to share between
    threads.

    Parameters
    ----------
    labels: sequence of str
        Display label of every element, indexed by id
    order: numpy.ndarray
        Square boolean matrix, ``order[a, b]`` is true iff a <= b

    Raises
    ------
    LatticeError
        If ``order`` is not a partial order
    NotALattice
        If some pair lacks a unique meet or join
    """

    def __init__(self, labels: Sequence[str], order: np.ndarray):
        labels = [str(label) for label in labels]
        if not labels:
            raise LatticeError("a lattice needs at least one element")
        if len(set(labels)) != len(labels):
            dupes = sorted({label for label in labels if labels.count(label) > 1})
            raise LatticeError(f"element labels must be unique, repeated: {dupes}")
        order = np.array(order, dtype=bool)
        n = len(labels)
        if order.shape != (n, n):
            raise LatticeError(f"order matrix has shape {order.shape}, expected {(n, n)}")
        if not order.diagonal().all():
            raise LatticeError("order relation is not reflexive")
        both = order & order.T
        np.fill_diagonal(both, False)
        if both.any():
            a, b = map(int, np.argwhere(both)[0])
            raise NotAPoset([labels[a], labels[b], labels[a]])
        as_int = order.astype(np.int64)
        if ((as_int @ as_int > 0) & ~order).any():
            raise LatticeError("order relation is not transitive")

        self.labels: Tuple[str, ...] = tuple(labels)
        self._index = {label: i for i, label in enumerate(labels)}
        self.order = order
        self.join_table = _bound_table(order, "join", labels)
        self.meet_table = _bound_table(order.T, "meet", labels)
        for table in (self.order, self.join_table, self.meet_table):
            table.setflags(write=False)
        self.bottom = int(np.flatnonzero(order.all(axis=1))[0])
        self.top = int(np.flatnonzero(order.all(axis=0))[0])
        logger.debug(f"built lattice with {n} elements")

    @classmethod
    def from_covers(cls, labels: Sequence[str], covers: Iterable[Tuple[int, int]]):
        """
        Build a lattice from its cover relation (Hasse diagram).

        ``covers`` holds pairs ``(a, b)`` of element ids meaning a < b; the
        order is their reflexive-transitive closure.
        """
        n = len(labels)
        graph = nx.DiGraph()
        graph.add_nodes_from(range(n))
        for a, b in covers:
            if not (0 <= a < n and 0 <= b < n):
                raise ElementError(f"cover ({a}, {b}) names an element outside 0..{n - 1}")
            graph.add_edge(int(a), int(b))
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise NotAPoset([labels[u] for u, _ in cycle] + [labels[cycle[0][0]]])
        closure = nx.transitive_closure(graph, reflexive=True)
        order = np.zeros((n, n), dtype=bool)
        for a, b in closure.edges:
            order[a, b] = True
        np.fill_diagonal(order, True)
        return cls(labels, order)

    @classmethod
    def from_json(cls, document):
        """Build from ``{"elements": [{"id", "label"}], "covers": [[id, id]]}``."""
        try:
            elements = document["elements"]
            ids = [int(e["id"]) for e in elements]
            labels = [str(e.get("label", e["id"])) for e in elements]
            position = {element_id: i for i, element_id in enumerate(ids)}
            if len(position) != len(ids):
                raise LatticeError("element ids must be unique")
            covers = [(position[a], position[b]) for a, b in document.get("covers", [])]
        except KeyError as exc:
            raise LatticeError(f"lattice document is missing or references unknown key {exc}") from exc
        except (TypeError, ValueError) as exc:
            if isinstance(exc, LatticeError):
                raise
            raise LatticeError(f"malformed lattice document: {exc}") from exc
        return cls.from_covers(labels, covers)

    @classmethod
    def load(cls, urlpath: str):
        return cls.from_json(read_json(urlpath))

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"<FiniteLattice {len(self)} elements>"

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    def element(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ElementError(f"no element labeled {label!r}") from None

    def _check(self, *ids):
        for i in ids:
            if not 0 <= i < len(self.labels):
                raise ElementError(f"element id {i} outside 0..{len(self.labels) - 1}")

    def meet(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.join_table[a, b])

    def leq(self, a: int, b: int) -> bool:
        self._check(a, b)
        return bool(self.order[a, b])

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    @property
    def strict_order(self) -> np.ndarray:
        strict = self.order.copy()
        np.fill_diagonal(strict, False)
        return strict

    def covers(self) -> List[Tuple[int, int]]:
        """Pairs (a, b) with a < b and nothing strictly between them."""
        strict = self.strict_order.astype(np.int64)
        between = (strict @ strict) > 0
        hasse = self.strict_order & ~between
        return [(int(a), int(b)) for a, b in np.argwhere(hasse)]

    def subset(self, members: Iterable[int]) -> "ElementSubset":
        return ElementSubset(self, frozenset(int(m) for m in members))

    def to_json(self):
        return {
            "elements": [{"id": i, "label": label} for i, label in enumerate(self.labels)],
            "covers": [list(pair) for pair in self.covers()],
        }

    def save(self, urlpath: str):
        write_json(urlpath, self.to_json())

    def to_dot(self, name: str = "lattice") -> str:
        """Graphviz source: one node per element, one edge per cover, bottom row first."""
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
        for i, label in enumerate(self.labels):
            escaped = label.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  n{i} [label="{escaped}"];')
        for a, b in self.covers():
            lines.append(f"  n{a} -> n{b} [arrowhead=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def save_dot(self, urlpath: str):
        write_text(urlpath, self.to_dot())


@dataclass(frozen=True)
class ElementSubset:
    """A set of elements of one lattice, e.g. the set a formula defines."""

    lattice: FiniteLattice
    members: FrozenSet[int]

    def __post_init__(self):
        n = len(self.lattice)
        bad = sorted(m for m in self.members if not 0 <= m < n)
        if bad:
            raise ElementError(f"subset members {bad} are not elements of the lattice")

    def __contains__(self, element):
        return element in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        if isinstance(other, ElementSubset):
            return self.lattice is other.lattice and self.members == other.members
        return NotImplemented

    def __hash__(self):
        return hash((id(self.lattice), self.members))

    def __le__(self, other):
        return self.members <= other.members

    def __ge__(self, other):
        return self.members >= other.members

    def labels(self) -> List[str]:
        return sorted(self.lattice.labels[m] for m in self.members)

    def __repr__(self):
        return f"ElementSubset({self.labels()})"


def random_lattice(seed: int, ground_size: int) -> FiniteLattice:
    """
    A random closure system on ``ground_size`` points, ordered by inclusion.

    Random subsets plus the full set are closed under intersection; an
    intersection-closed family with a top element is a lattice. The result is
    a deterministic function of ``seed``.
    """
    if ground_size < 1:
        raise ValueError(f"ground_size must be at least 1, got {ground_size}")
    rng = np.random.default_rng(seed)
    full = (1 << ground_size) - 1
    count = int(rng.integers(1, 2 * ground_size + 1))
    bits = rng.integers(0, 2, size=(count, ground_size))
    family = {full}
    family.update(sum(int(bit) << i for i, bit in enumerate(row)) for row in bits)
    frontier = set(family)
    while frontier:
        new = {a & b for a in frontier for b in family} - family
        family |= new
        frontier = new
    members = sorted(family, key=lambda s: (bin(s).count("1"), s))
    labels = ["{" + ",".join(str(i) for i in range(ground_size) if s >> i & 1) + "}" for s in members]
    order = np.array([[a & b == a for b in members] for a in members], dtype=bool)
    return FiniteLattice(labels, order)


def semantic_atoms(lattice: FiniteLattice) -> ElementSubset:
    """All covers of the bottom element."""
    above = lattice.strict_order[lattice.bottom]
    return lattice.subset(b for b in lattice.elements if above[b] and not _has_between(lattice, lattice.bottom, b))


def _has_between(lattice: FiniteLattice, a: int, b: int) -> bool:
    strict = lattice.strict_order
    return bool((strict[a] & strict[:, b]).any())


def semantic_neutral(lattice: FiniteLattice, x: int) -> bool:
    """(x|y)&(y|z)&(z|x) = (x&y)|(y&z)|(z&x) for every pair y, z."""
    lattice._check(x)
    J, M = lattice.join_table, lattice.meet_table
    y = np.arange(len(lattice))[:, None]
    z = np.arange(len(lattice))[None, :]
    lhs = M[M[J[x, y], J[y, z]], J[z, x]]
    rhs = J[J[M[x, y], M[y, z]], M[z, x]]
    return bool((lhs == rhs).all())


def semantic_lower_modular(lattice: FiniteLattice, x: int) -> bool:
    """x <= y implies x|(y&z) = y&(x|z), for all y above x and all z."""
    lattice._check(x)
    J, M = lattice.join_table, lattice.meet_table
    ys = np.flatnonzero(lattice.order[x])[:, None]
    z = np.arange(len(lattice))[None, :]
    return bool((J[x, M[ys, z]] == M[ys, J[x, z]]).all())


def semantic_chain_downset(lattice: FiniteLattice, x: int) -> bool:
    """Every two elements below x are comparable."""
    lattice._check(x)
    below = np.flatnonzero(lattice.order[:, x])
    for a, b in combinations(below, 2):
        if not (lattice.order[a, b] or lattice.order[b, a]):
            return False
    return True


def semantic_minimal(lattice: FiniteLattice, subset: Iterable[int]) -> ElementSubset:
    """Members of ``subset`` with no strictly smaller member."""
    members = set(subset)
    lattice._check(*members)
    return lattice.subset(
        a for a in members if not any(b != a and lattice.order[b, a] for b in members)
    )


def named_lattice(name: str, size: Optional[int] = None) -> FiniteLattice:
    """
    Small textbook lattices: ``chain`` (``size`` elements), ``M3``, ``N5``.

    In N5 the elements are ``0 < a < c < 1`` and ``0 < b < 1`` with b
    incomparable to a and c.
    """
    if name == "chain":
        size = size or 3
        labels = [f"c{i}" for i in range(size)]
        return FiniteLattice.from_covers(labels, [(i, i + 1) for i in range(size - 1)])
    if name == "M3":
        return FiniteLattice.from_covers(
            ["0", "a", "b", "c", "1"], [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]
        )
    if name == "N5":
        return FiniteLattice.from_covers(
            ["0", "a", "b", "c", "1"], [(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]
        )
    raise KeyError(f"unknown named lattice {name!r}")
