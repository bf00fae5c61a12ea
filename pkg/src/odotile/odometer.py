"""Truncated profinite completion and the odometer action.

Points are coherent label sequences up to a finite depth; cylinders and
their finite unions form the clopen algebra; the group acts by left
multiplication, level by level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import KindMismatchError, LevelRangeError
from .folner import FiniteElementSet
from .groups import GroupElement, SubgroupChain
from .tiling import Tile


@dataclass(frozen=True)
class CoherentPoint:
    """A point of the truncated completion: one label per level.

    Coherence (each label projects to the previous one) is enforced at
    construction.
    """

    chain: SubgroupChain
    labels: tuple

    def __post_init__(self):
        if not 1 <= len(self.labels) <= self.chain.depth:
            raise LevelRangeError(
                f"point depth {len(self.labels)} outside 1..{self.chain.depth}"
            )
        for n in range(1, len(self.labels) + 1):
            if not 0 <= self.labels[n - 1] < self.chain.index(n):
                raise LevelRangeError(f"label {self.labels[n - 1]} invalid at level {n}")
        for n in range(1, len(self.labels)):
            if self.chain.phi(n, n + 1, self.labels[n]) != self.labels[n - 1]:
                raise ValueError(
                    f"incoherent labels at levels {n},{n + 1}: "
                    f"{self.labels[n - 1]} vs {self.labels[n]}"
                )

    @property
    def depth(self) -> int:
        return len(self.labels)

    def label(self, n: int) -> int:
        if not 1 <= n <= self.depth:
            raise LevelRangeError(f"level {n} outside 1..{self.depth}")
        return self.labels[n - 1]


def embed_point(g: GroupElement, depth: int, chain: SubgroupChain) -> CoherentPoint:
    """The image of a group element in the depth-truncated completion."""
    if not 1 <= depth <= chain.depth:
        raise LevelRangeError(f"depth {depth} outside 1..{chain.depth}")
    return CoherentPoint(chain, tuple(chain.label(g, n) for n in range(1, depth + 1)))


def identity_point(chain: SubgroupChain, depth: int) -> CoherentPoint:
    return CoherentPoint(chain, (0,) * depth)


@dataclass(frozen=True)
class Cylinder:
    """A basic compact open set: all points with one fixed level-n label."""

    chain: SubgroupChain
    level: int
    label: int

    def __post_init__(self):
        if not 1 <= self.level <= self.chain.depth:
            raise LevelRangeError(f"level {self.level} outside 1..{self.chain.depth}")
        if not 0 <= self.label < self.chain.index(self.level):
            raise LevelRangeError(
                f"label {self.label} outside 0..{self.chain.index(self.level) - 1}"
            )

    @property
    def haar_mass(self) -> Fraction:
        return Fraction(1, self.chain.index(self.level))

    def contains_point(self, x: CoherentPoint) -> bool:
        if x.depth < self.level:
            raise LevelRangeError("point too shallow to resolve this cylinder")
        return x.label(self.level) == self.label


@dataclass(frozen=True)
class ClopenSet:
    """A finite union of cylinders in normal form (one level, sorted labels)."""

    chain: SubgroupChain
    level: int
    labels: tuple

    def __post_init__(self):
        if not 1 <= self.level <= self.chain.depth:
            raise LevelRangeError(f"level {self.level} outside 1..{self.chain.depth}")
        if list(self.labels) != sorted(set(self.labels)):
            raise ValueError("clopen labels must be sorted and distinct")
        for lab in self.labels:
            if not 0 <= lab < self.chain.index(self.level):
                raise LevelRangeError(f"label {lab} invalid at level {self.level}")

    @property
    def haar_mass(self) -> Fraction:
        return Fraction(len(self.labels), self.chain.index(self.level))

    @property
    def is_empty(self) -> bool:
        return not self.labels

    def cylinders(self) -> list:
        return [Cylinder(self.chain, self.level, lab) for lab in self.labels]

    def at_level(self, level: int) -> "ClopenSet":
        """Re-express at a deeper (or equal) level."""
        if level == self.level:
            return self
        if level < self.level:
            raise LevelRangeError("clopen sets only refine downward in the chain")
        out = set()
        for lab in self.labels:
            out.update(self.chain.fiber(self.level, level, lab))
        return ClopenSet(self.chain, level, tuple(sorted(out)))

    def union(self, other: "ClopenSet") -> "ClopenSet":
        a, b = _common_level(self, other)
        return ClopenSet(a.chain, a.level, tuple(sorted(set(a.labels) | set(b.labels))))

    def intersection(self, other: "ClopenSet") -> "ClopenSet":
        a, b = _common_level(self, other)
        return ClopenSet(a.chain, a.level, tuple(sorted(set(a.labels) & set(b.labels))))

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        a, b = _common_level(self, other)
        return ClopenSet(a.chain, a.level, tuple(sorted(set(a.labels) - set(b.labels))))

    def equals(self, other: "ClopenSet") -> bool:
        a, b = _common_level(self, other)
        return a.labels == b.labels


def _common_level(a: ClopenSet, b: ClopenSet) -> tuple:
    if a.chain != b.chain:
        raise KindMismatchError("clopen sets over different chains")
    lvl = max(a.level, b.level)
    return a.at_level(lvl), b.at_level(lvl)


def decompose_clopen(cylinders: Sequence[Cylinder]) -> ClopenSet:
    """Normal form of a union of cylinders: deepest level present, merged."""
    if not cylinders:
        raise ValueError("need at least one cylinder")
    chain = cylinders[0].chain
    for c in cylinders:
        if c.chain != chain:
            raise KindMismatchError("cylinders over different chains")
    level = max(c.level for c in cylinders)
    labels = set()
    for c in cylinders:
        labels.update(chain.fiber(c.level, level, c.label))
    return ClopenSet(chain, level, tuple(sorted(labels)))


ActTarget = Union[CoherentPoint, Cylinder, ClopenSet]


def act(g: GroupElement, target: ActTarget) -> ActTarget:
    """Left multiplication by g, level by level."""
    if isinstance(target, CoherentPoint):
        chain = target.chain
        labs = tuple(
            chain.q_mul(n, chain.label(g, n), target.labels[n - 1])
            for n in range(1, target.depth + 1)
        )
        return CoherentPoint(chain, labs)
    if isinstance(target, Cylinder):
        chain = target.chain
        return Cylinder(
            chain, target.level, chain.act_label(target.level, g, target.label)
        )
    if isinstance(target, ClopenSet):
        chain = target.chain
        glab = chain.label(g, target.level)
        labs = tuple(
            sorted(chain.q_mul(target.level, glab, lab) for lab in target.labels)
        )
        return ClopenSet(chain, target.level, labs)
    raise TypeError(f"cannot act on {type(target).__name__}")


@dataclass(frozen=True)
class LevelVector:
    """A locally constant function: one exact rational value per level-n label."""

    chain: SubgroupChain
    level: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.chain.index(self.level):
            raise ValueError(
                f"need {self.chain.index(self.level)} values, got {len(self.values)}"
            )
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @staticmethod
    def indicator(chain: SubgroupChain, level: int, labels: Iterable[int]) -> "LevelVector":
        want = set(labels)
        vals = tuple(
            Fraction(1) if lab in want else Fraction(0)
            for lab in range(chain.index(level))
        )
        return LevelVector(chain, level, vals)

    @staticmethod
    def constant(chain: SubgroupChain, level: int, value) -> "LevelVector":
        return LevelVector(chain, level, (Fraction(value),) * chain.index(level))

    def __getitem__(self, label: int) -> Fraction:
        return self.values[label]


def almost_periodicity_defect(f: LevelVector, l: GroupElement) -> Fraction:
    """sup-norm distance between f and its translate by l.

    Exactly zero whenever l lies in the level's subgroup, which is the
    almost-periodicity identity for cylinder indicators.
    """
    chain = f.chain
    n = f.level
    linv_lab = chain.q_inv(n, chain.label(l, n))
    worst = Fraction(0)
    for lab in range(chain.index(n)):
        moved = chain.q_mul(n, linv_lab, lab)
        d = abs(f.values[moved] - f.values[lab])
        if d > worst:
            worst = d
    return worst


def periodicity_window(n: int, K: Tile, F: FiniteElementSet) -> FiniteElementSet:
    """The finite set L_n intersect K.K^-1.F controlling almost periodicity."""
    if not F.is_subset(K.elements):
        raise ValueError("F must be contained in the tile")
    chain = K.chain
    prod = K.elements.product(K.elements.inverse()).product(F)
    id_lab = chain.identity_label(n)
    kind = prod.kind
    coords = frozenset(
        row
        for row in prod.coords
        if chain.label(GroupElement(kind, row), n) == id_lab
    )
    return FiniteElementSet(kind, prod.rank, coords)


def orbit(g: GroupElement, x0: CoherentPoint, steps: int) -> list:
    """The first ``steps`` points of x0's forward orbit under act(g, .)."""
    out = [x0]
    x = x0
    for _ in range(steps):
        x = act(g, x)
        out.append(x)
    return out
