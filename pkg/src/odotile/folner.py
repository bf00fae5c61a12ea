"""Finite-set calculus over group elements.

Translations, products, symmetric differences, S-boundaries, and exact
left/right Folner defects, all over immutable sets of group elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from . import _kernels
from .errors import KindMismatchError, SizeCapExceededError
from .groups import Coords, GroupDescriptor, GroupElement, inv_coords, mul_coords

DEFAULT_SIZE_CAP = 1 << 24
_size_cap = DEFAULT_SIZE_CAP


def set_size_cap(cap: int) -> int:
    """Set the construction/product size cap; returns the previous value."""
    global _size_cap
    if cap < 1:
        raise ValueError("size cap must be positive")
    old = _size_cap
    _size_cap = cap
    return old


def get_size_cap() -> int:
    return _size_cap


@dataclass(frozen=True)
class FiniteElementSet:
    """An immutable finite set of elements of one group.

    Stored as raw coordinate tuples plus a kind tag; iteration order is
    always the lexicographic coordinate order, so every downstream
    computation is independent of hash randomization.
    """

    kind: str
    rank: int
    coords: frozenset

    def __post_init__(self):
        if len(self.coords) > _size_cap:
            raise SizeCapExceededError(
                f"set of {len(self.coords)} elements exceeds cap {_size_cap}"
            )

    @staticmethod
    def from_elements(elements: Iterable[GroupElement]) -> "FiniteElementSet":
        elems = list(elements)
        if not elems:
            raise ValueError("cannot infer the group of an empty collection")
        kind = elems[0].kind
        rank = len(elems[0].coords)
        for e in elems:
            if e.kind != kind or len(e.coords) != rank:
                raise KindMismatchError(f"mixed groups in one set: {elems[0]!r} vs {e!r}")
        return FiniteElementSet(kind, rank, frozenset(e.coords for e in elems))

    @staticmethod
    def from_coords(kind: str, rank: int, coords: Iterable[Coords]) -> "FiniteElementSet":
        cs = frozenset(tuple(int(c) for c in row) for row in coords)
        for row in cs:
            if len(row) != rank:
                raise KindMismatchError(f"coordinate row {row!r} has wrong rank {rank}")
        return FiniteElementSet(kind, rank, cs)

    def _like(self, coords: Iterable[Coords]) -> "FiniteElementSet":
        return FiniteElementSet(self.kind, self.rank, frozenset(coords))

    def _check(self, other: "FiniteElementSet") -> None:
        if self.kind != other.kind or self.rank != other.rank:
            raise KindMismatchError(
                f"sets over different groups: {self.kind}/{self.rank} "
                f"vs {other.kind}/{other.rank}"
            )

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[GroupElement]:
        for row in sorted(self.coords):
            yield GroupElement(self.kind, row)

    def __contains__(self, g: GroupElement) -> bool:
        return g.kind == self.kind and g.coords in self.coords

    @property
    def sorted_coords(self) -> list:
        return sorted(self.coords)

    def union(self, other: "FiniteElementSet") -> "FiniteElementSet":
        self._check(other)
        return self._like(self.coords | other.coords)

    def intersection(self, other: "FiniteElementSet") -> "FiniteElementSet":
        self._check(other)
        return self._like(self.coords & other.coords)

    def difference(self, other: "FiniteElementSet") -> "FiniteElementSet":
        self._check(other)
        return self._like(self.coords - other.coords)

    def symmetric_difference(self, other: "FiniteElementSet") -> "FiniteElementSet":
        self._check(other)
        return self._like(self.coords ^ other.coords)

    def is_subset(self, other: "FiniteElementSet") -> bool:
        self._check(other)
        return self.coords <= other.coords

    def translate(self, g: GroupElement, side: str = "left") -> "FiniteElementSet":
        """gK (side="left") or Kg (side="right")."""
        if g.kind != self.kind:
            raise KindMismatchError(f"element {g!r} not in {self.kind}/{self.rank}")
        if side == "left":
            return self._like(mul_coords(self.kind, g.coords, x) for x in self.coords)
        if side == "right":
            return self._like(mul_coords(self.kind, x, g.coords) for x in self.coords)
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def inverse(self) -> "FiniteElementSet":
        return self._like(inv_coords(self.kind, x) for x in self.coords)

    def product(self, other: "FiniteElementSet") -> "FiniteElementSet":
        """Pointwise product set {a*b}."""
        self._check(other)
        if len(self) * len(other) > _size_cap:
            raise SizeCapExceededError(
                f"product of {len(self)} x {len(other)} elements exceeds the size cap"
            )
        return self._like(_kernels.product(self.kind, self.coords, other.coords))

    def elements(self) -> list:
        return [GroupElement(self.kind, row) for row in sorted(self.coords)]


def box(group: GroupDescriptor, m: int) -> FiniteElementSet:
    """The box transversal {0,...,m-1}^rank (a cube for Heisenberg)."""
    if m < 1:
        raise ValueError("box side must be >= 1")
    coords: list[Coords] = [()]
    for _ in range(group.rank):
        coords = [row + (i,) for row in coords for i in range(m)]
    return FiniteElementSet(group.kind, group.rank, frozenset(coords))


def interval(q: int) -> FiniteElementSet:
    """The rank-1 lattice interval {0,...,q-1}."""
    return box(GroupDescriptor.lattice(1), q)


def s_boundary(S: FiniteElementSet, K: FiniteElementSet) -> FiniteElementSet:
    """The S-boundary of K: elements of SK seen from both K and K^c.

    Equals SK intersect S(K^c) extensionally.
    """
    S._check(K)
    return K._like(_kernels.boundary(K.kind, S.coords, K.coords))


def folner_defect(K: FiniteElementSet, s: GroupElement, side: str = "right") -> Fraction:
    """|K symdiff sK|/|K| (left) or |K symdiff Ks|/|K| (right), exact."""
    if len(K) == 0:
        raise ValueError("Folner defect of the empty set is undefined")
    if s.kind != K.kind:
        raise KindMismatchError(f"element {s!r} not in {K.kind}/{K.rank}")
    count = _kernels.symdiff_count(K.kind, K.coords, s.coords, side)
    return Fraction(count, len(K))


def max_folner_defect(
    K: FiniteElementSet, S: Iterable[GroupElement], side: str = "right"
) -> Fraction:
    """Worst defect of K over a finite set of translating elements."""
    worst: Optional[Fraction] = None
    for s in S:
        d = folner_defect(K, s, side)
        if worst is None or d > worst:
            worst = d
    if worst is None:
        raise ValueError("need at least one translating element")
    return worst
