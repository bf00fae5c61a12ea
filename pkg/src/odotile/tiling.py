"""Exact group tilings G = K_n L_n.

Verification, transversal construction around a prescribed core,
refinement of a coarse tile inside a finer one, and nested-chain
selection against Folner-defect targets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

from . import _kernels
from .errors import (
    ChainExhaustedError,
    FNotSeparatedError,
    KindMismatchError,
    LevelOrderError,
    OdotileError,
)
from .folner import FiniteElementSet, box, folner_defect, s_boundary
from .groups import GroupDescriptor, GroupElement, SubgroupChain


class TileInvariantError(OdotileError):
    """Raised by the Tile constructor when the set is not a transversal."""

    def __init__(self, reason, expected=None, got=None, pair=None):
        self.reason = reason
        self.expected = expected
        self.got = got
        self.pair = pair
        if reason == "cardinality":
            msg = f"tile needs {expected} elements, got {got}"
        else:
            msg = f"coset collision between {pair[0]!r} and {pair[1]!r}"
        super().__init__(msg)


@dataclass(frozen=True)
class Tile:
    """An exact transversal at one chain level.

    The label map restricted to ``elements`` must be a bijection onto the
    level's labels; the constructor enforces this.  ``core`` holds the
    prescribed subset the tile was grown around, when there was one.
    """

    chain: SubgroupChain
    level: int
    elements: FiniteElementSet
    core: Optional[FiniteElementSet] = None
    _by_label: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.elements.kind != self.chain.kind or self.elements.rank != self.chain.rank:
            raise KindMismatchError("tile elements and chain disagree on the group")
        expected = self.chain.index(self.level)
        if len(self.elements) != expected:
            raise TileInvariantError("cardinality", expected=expected, got=len(self.elements))
        by_label: dict = {}
        for row in self.elements.sorted_coords:
            lab = self.chain.label(GroupElement(self.elements.kind, row), self.level)
            if lab in by_label:
                raise TileInvariantError("collision", pair=(by_label[lab], row))
            by_label[lab] = row
        if self.core is not None and not self.core.is_subset(self.elements):
            raise OdotileError("core is not contained in the tile")
        object.__setattr__(self, "_by_label", by_label)

    @property
    def index(self) -> int:
        return self.chain.index(self.level)

    def label_of(self, g: GroupElement) -> int:
        return self.chain.label(g, self.level)

    def rep_of_label(self, label: int) -> GroupElement:
        """The unique tile element in the coset with this label."""
        return GroupElement(self.elements.kind, self._by_label[label])

    def __contains__(self, g: GroupElement) -> bool:
        return g in self.elements


@dataclass(frozen=True)
class TilingFailure:
    """Evidence that a set is not a transversal at the requested level."""

    reason: str
    expected: Optional[int] = None
    got: Optional[int] = None
    pair: Optional[tuple] = None

    def __str__(self):
        if self.reason == "cardinality":
            return f"not a tiling: {self.got} elements for {self.expected} cosets"
        return f"not a tiling: {self.pair[0]!r} and {self.pair[1]!r} share a coset"


def verify_tiling(
    K: FiniteElementSet,
    n: int,
    chain: SubgroupChain,
    core: Optional[FiniteElementSet] = None,
) -> Union[Tile, TilingFailure]:
    """Check that K is an exact transversal at level n; failure is a value."""
    try:
        return Tile(chain, n, K, core=core)
    except TileInvariantError as e:
        return TilingFailure(e.reason, expected=e.expected, got=e.got, pair=e.pair)


def _default_group(chain: SubgroupChain) -> GroupDescriptor:
    if chain.kind == "heisenberg":
        return GroupDescriptor.heisenberg()
    return GroupDescriptor.lattice(chain.rank)


def build_transversal(
    F: FiniteElementSet,
    n: int,
    chain: SubgroupChain,
    group: Optional[GroupDescriptor] = None,
    max_passes: int = 3,
) -> Tile:
    """Grow a transversal containing F at level n.

    Missing cosets are filled by their canonical representatives, then a
    bounded number of passes tries single-element swaps toward a smaller
    generator boundary.  F members are never moved.  Deterministic: labels
    ascend, candidates are tried in coordinate order, and only strictly
    improving swaps are taken.
    """
    if F.kind != chain.kind or F.rank != chain.rank:
        raise KindMismatchError("core set and chain disagree on the group")
    if group is None:
        group = _default_group(chain)
    kind = chain.kind

    holder: dict = {}
    for g in F:
        lab = chain.label(g, n)
        if lab in holder:
            raise FNotSeparatedError((holder[lab], g.coords), n)
        holder[lab] = g.coords
    pinned = set(holder.values())
    for lab in range(chain.index(n)):
        if lab not in holder:
            holder[lab] = chain.rep_coords(lab, n)

    K = frozenset(holder.values())
    S = [g.coords for g in group.generators]
    best = len(_kernels.boundary(kind, S, K))
    for _ in range(max_passes):
        changed = False
        for lab in sorted(holder):
            x = holder[lab]
            if x in pinned:
                continue
            neighbors = _kernels.product(kind, S, K)
            g_of = lambda row: GroupElement(kind, row)
            cands = sorted(
                y for y in neighbors if y != x and chain.label(g_of(y), n) == lab
            )
            for y in cands:
                K2 = (K - {x}) | {y}
                b2 = len(_kernels.boundary(kind, S, K2))
                if b2 < best:
                    K, best, changed = K2, b2, True
                    holder[lab] = y
                    break
        if not changed:
            break

    return Tile(chain, n, FiniteElementSet(kind, chain.rank, K), core=F)


def refinement_centers(small: Tile, big: Tile) -> FiniteElementSet:
    """The translate offsets big picks inside small's subgroup."""
    id_lab = small.chain.identity_label(small.level)
    kind = big.elements.kind
    coords = frozenset(
        row
        for row in big.elements.coords
        if small.chain.label(GroupElement(kind, row), small.level) == id_lab
    )
    return FiniteElementSet(kind, big.elements.rank, coords)


def refine_tile(small: Tile, big: Tile, check_inclusion: bool = False) -> Tile:
    """Replace big with small.(big within small's subgroup).

    The output is an exact transversal at big's level, partitioned by the
    right translates of small over the construction centers.  With
    check_inclusion it also verifies that the output differs from big only
    inside the (small.small^-1)-boundary of big.
    """
    if small.chain != big.chain:
        raise KindMismatchError("tiles from different chains")
    if small.level > big.level:
        raise LevelOrderError(
            f"refinement needs small.level <= big.level, got {small.level} > {big.level}"
        )
    centers = refinement_centers(small, big)
    kprime = small.elements.product(centers)
    core = small.core if small.core is not None and small.core.is_subset(kprime) else None
    tile = Tile(big.chain, big.level, kprime, core=core)
    if check_inclusion:
        ssinv = small.elements.product(small.elements.inverse())
        delta = kprime.symmetric_difference(big.elements)
        bnd = s_boundary(ssinv, big.elements)
        if not delta.is_subset(bnd):
            raise OdotileError(
                "refinement output differs from the input outside the expected boundary"
            )
    return tile


@dataclass(frozen=True)
class NestedTileChain:
    """Selected levels with their tiles and per-pair translate offsets.

    centers[k] holds the offsets used to build tiles[k+1] from tiles[k];
    the right translates tiles[k].l over those offsets partition
    tiles[k+1] exactly.
    """

    chain: SubgroupChain
    levels: tuple
    tiles: tuple
    centers: tuple
    epsilons: tuple = ()
    mode: str = "direct"

    def __post_init__(self):
        if len(self.levels) != len(self.tiles):
            raise ValueError("one tile per selected level")
        if len(self.centers) != max(len(self.levels) - 1, 0):
            raise ValueError("one center set per consecutive pair")
        if list(self.levels) != sorted(set(self.levels)):
            raise LevelOrderError("selected levels must strictly increase")

    def decomposition(self, k: int) -> list:
        """The right translates tiles[k].l over centers[k], in offset order."""
        small = self.tiles[k].elements
        return [
            small.translate(GroupElement(small.kind, l), side="right")
            for l in self.centers[k].sorted_coords
        ]

    def validate(self) -> None:
        """Assert the partition and cardinality invariants; raise on violation."""
        for k in range(len(self.levels) - 1):
            small, big = self.tiles[k], self.tiles[k + 1]
            ratio = big.index // small.index
            if big.index != small.index * ratio or len(big.elements) != len(small.elements) * ratio:
                raise OdotileError(f"cardinality mismatch between stages {k} and {k + 1}")
            seen: set = set()
            total = 0
            for part in self.decomposition(k):
                if seen & part.coords:
                    raise OdotileError(f"translates overlap between stages {k} and {k + 1}")
                seen |= part.coords
                total += len(part)
            if seen != big.elements.coords or total != len(big.elements):
                raise OdotileError(f"translates do not cover stage {k + 1}")


def two_sided_max_defect(K: FiniteElementSet, S: Iterable[GroupElement]) -> Fraction:
    worst = Fraction(0)
    saw = False
    for s in S:
        saw = True
        for side in ("left", "right"):
            d = folner_defect(K, s, side)
            if d > worst:
                worst = d
    if not saw:
        raise ValueError("need at least one translating element")
    return worst


def box_tile_source(chain: SubgroupChain) -> Callable[[int], Tile]:
    """Per-level provider of box transversals {0..m_n-1}^rank."""
    group = _default_group(chain)

    def source(n: int) -> Tile:
        return Tile(chain, n, box(group, chain.modulus(n)))

    return source


def full_nested_chain(
    chain: SubgroupChain,
    tile_source: Optional[Callable[[int], Tile]] = None,
) -> NestedTileChain:
    """Every chain level selected, each tile refined through the previous."""
    if tile_source is None:
        tile_source = box_tile_source(chain)
    tiles: list = []
    centers: list = []
    prev: Optional[Tile] = None
    for n in range(1, chain.depth + 1):
        raw = tile_source(n)
        cand = raw if prev is None else refine_tile(prev, raw)
        if prev is not None:
            centers.append(refinement_centers(prev, raw))
        tiles.append(cand)
        prev = cand
    out = NestedTileChain(
        chain,
        tuple(range(1, chain.depth + 1)),
        tuple(tiles),
        tuple(centers),
        (),
        "direct",
    )
    out.validate()
    return out


def select_nested_chain(
    chain: SubgroupChain,
    S: FiniteElementSet,
    epsilons: Iterable[Fraction],
    tile_source: Optional[Callable[[int], Tile]] = None,
    mode: str = "direct",
) -> NestedTileChain:
    """Pick levels n_1 < n_2 < ... whose (refined) tiles meet the targets.

    mode="direct" accepts a level when the refined tile's measured
    two-sided defect over S is below epsilon_k.  mode="prescreen" instead
    applies the sufficient epsilon/3 screen to the raw level tile before
    refining.  Raises ChainExhaustedError, carrying the best defect seen,
    when the chain runs out of levels for some stage.
    """
    if mode not in ("direct", "prescreen"):
        raise ValueError(f"mode must be 'direct' or 'prescreen', got {mode!r}")
    eps_list = [Fraction(e) for e in epsilons]
    if not eps_list:
        raise ValueError("need at least one epsilon")
    for e in eps_list:
        if e <= 0:
            raise ValueError("epsilons must be positive")
    for a, b in zip(eps_list, eps_list[1:]):
        if b > a:
            raise ValueError("epsilons must be non-increasing")
    if tile_source is None:
        tile_source = box_tile_source(chain)
    movers = list(S)
    if not movers:
        raise ValueError("S must be nonempty")

    levels: list = []
    tiles: list = []
    centers: list = []
    prev: Optional[Tile] = None
    start = 1
    for stage, eps in enumerate(eps_list, start=1):
        best: Optional[Fraction] = None
        chosen = None
        for n in range(start, chain.depth + 1):
            raw = tile_source(n)
            cand = raw if prev is None else refine_tile(prev, raw)
            if mode == "prescreen":
                measured = two_sided_max_defect(raw.elements, movers)
                ok = measured < eps / 3
            else:
                measured = two_sided_max_defect(cand.elements, movers)
                ok = measured < eps
            if best is None or measured < best:
                best = measured
            if ok:
                chosen = (n, raw, cand)
                break
        if chosen is None:
            raise ChainExhaustedError(best_defect=best, stage=stage, target=eps)
        n, raw, cand = chosen
        if prev is not None:
            centers.append(refinement_centers(prev, raw))
        levels.append(n)
        tiles.append(cand)
        prev = cand
        start = n + 1

    out = NestedTileChain(
        chain, tuple(levels), tuple(tiles), tuple(centers), tuple(eps_list), mode
    )
    out.validate()
    return out
