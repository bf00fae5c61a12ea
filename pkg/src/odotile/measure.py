"""Level measures, invariance checking, uniqueness, Birkhoff averages.

Everything is exact rational arithmetic; the invariant-measure solver is
an orbit-closure computation over the level's label set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .errors import KindMismatchError, LevelRangeError
from .folner import FiniteElementSet
from .groupoid import ArrowPatch, CompactGroupoidSet
from .groups import GroupElement, SubgroupChain
from .odometer import CoherentPoint, LevelVector


@dataclass(frozen=True)
class LevelMeasure:
    """A probability vector over level-n labels, all masses exact."""

    chain: SubgroupChain
    level: int
    masses: tuple

    def __post_init__(self):
        masses = tuple(Fraction(v) for v in self.masses)
        if len(masses) != self.chain.index(self.level):
            raise ValueError(
                f"need {self.chain.index(self.level)} masses, got {len(masses)}"
            )
        if any(v < 0 for v in masses):
            raise ValueError("masses must be nonnegative")
        if sum(masses) != 1:
            raise ValueError("total mass must be exactly 1")
        object.__setattr__(self, "masses", masses)

    @staticmethod
    def haar(chain: SubgroupChain, level: int) -> "LevelMeasure":
        idx = chain.index(level)
        return LevelMeasure(chain, level, (Fraction(1, idx),) * idx)

    def mass_of_labels(self, labels: Iterable[int]) -> Fraction:
        return sum((self.masses[lab] for lab in labels), Fraction(0))

    @property
    def is_uniform(self) -> bool:
        idx = self.chain.index(self.level)
        return all(v == Fraction(1, idx) for v in self.masses)


WeightedPatches = Union[CompactGroupoidSet, Sequence[Tuple[ArrowPatch, Fraction]]]


def _iter_weighted(f: WeightedPatches):
    if isinstance(f, CompactGroupoidSet):
        for p in f.patches:
            yield p, Fraction(1)
    else:
        for p, w in f:
            yield p, Fraction(w)


def invariance_defect(f: WeightedPatches, mu: LevelMeasure) -> Fraction:
    """|source integral - range integral| of a weighted compact arrow set."""
    chain = mu.chain
    src_total = Fraction(0)
    rng_total = Fraction(0)
    for patch, w in _iter_weighted(f):
        if patch.base.chain != chain:
            raise KindMismatchError("patch and measure over different chains")
        if patch.base.level > mu.level:
            raise LevelRangeError(
                f"patch base at level {patch.base.level} is finer than the "
                f"measure's level {mu.level}"
            )
        base = patch.base.at_level(mu.level)
        glab = chain.label(patch.mover, mu.level)
        src_total += w * mu.mass_of_labels(base.labels)
        rng_total += w * mu.mass_of_labels(
            chain.q_mul(mu.level, glab, lab) for lab in base.labels
        )
    return abs(src_total - rng_total)


@dataclass(frozen=True)
class MeasureSolution:
    """Solver output: the measure, uniqueness verdict, and the orbit trace."""

    measure: LevelMeasure
    unique: bool
    classes: tuple
    trace: tuple

    @property
    def generators_insufficient(self) -> bool:
        return not self.unique


def solve_invariant_measure(
    n: int, generators: FiniteElementSet, chain: SubgroupChain
) -> MeasureSolution:
    """Close the invariance constraints mu(g.c) = mu(c) over the generators.

    With a full generating set the classes collapse to one and the unique
    invariant measure is the uniform vector.  With fewer generators the
    equality classes are the orbits of the generated subgroup; the result
    is flagged non-unique and the uniform vector (still invariant) is
    returned.
    """
    if generators.kind != chain.kind or generators.rank != chain.rank:
        raise KindMismatchError("generators and chain disagree on the group")
    if len(generators) == 0:
        raise ValueError("need at least one generator")
    idx = chain.index(n)
    gen_labels = [
        (row, chain.label(GroupElement(chain.kind, row), n))
        for row in generators.sorted_coords
    ]

    parent = list(range(idx))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    trace = []
    for lab in range(idx):
        for row, glab in gen_labels:
            moved = chain.q_mul(n, glab, lab)
            ra, rb = find(lab), find(moved)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
                trace.append((lab, row, moved))

    buckets: dict = {}
    for lab in range(idx):
        buckets.setdefault(find(lab), []).append(lab)
    classes = tuple(tuple(v) for _, v in sorted(buckets.items()))
    unique = len(classes) == 1
    return MeasureSolution(
        measure=LevelMeasure.haar(chain, n),
        unique=unique,
        classes=classes,
        trace=tuple(trace),
    )


def birkhoff_average(f: LevelVector, F: FiniteElementSet, x0: CoherentPoint) -> Fraction:
    """(1/|F|) sum over g in F of f at the level-n label of act(g, x0)."""
    chain = f.chain
    if x0.chain != chain:
        raise KindMismatchError("point and function over different chains")
    if F.kind != chain.kind or F.rank != chain.rank:
        raise KindMismatchError("window and chain disagree on the group")
    if len(F) == 0:
        raise ValueError("window must be nonempty")
    n = f.level
    if x0.depth < n:
        raise LevelRangeError("point too shallow for the function's level")
    x_lab = x0.label(n)
    total = Fraction(0)
    for row in F.sorted_coords:
        g_lab = chain.label(GroupElement(chain.kind, row), n)
        total += f.values[chain.q_mul(n, g_lab, x_lab)]
    return total / len(F)
