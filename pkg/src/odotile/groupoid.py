"""Truncated transformation groupoid and almost-AF certificates.

Arrows (x, g) run from x to gx.  The compact open subgroupoids G_n consist
of arrows that stay inside a single tile fiber; a certificate exhibits,
for a compact set C disjoint from G_n and a multiplicity m, the m compact
graphs with common source and pairwise disjoint ranges.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import _kernels
from .errors import (
    KindMismatchError,
    LevelExhaustedError,
    LevelRangeError,
    NonComposableError,
    OdotileError,
    PreconditionViolatedError,
)
from .folner import FiniteElementSet
from .groups import GroupElement, SubgroupChain, mul_coords
from .odometer import ClopenSet, CoherentPoint, act
from .tiling import NestedTileChain, Tile


@dataclass(frozen=True)
class Arrow:
    """A single arrow: source point and the group element moving it."""

    point: CoherentPoint
    mover: GroupElement

    @property
    def source(self) -> CoherentPoint:
        return self.point

    @property
    def target(self) -> CoherentPoint:
        return act(self.mover, self.point)

    def compose(self, other: "Arrow") -> "Arrow":
        """(x, g)(gx, h) = (x, hg); other must start where self lands."""
        if other.point != self.target:
            raise NonComposableError(
                f"second arrow starts at {other.point.labels}, "
                f"first lands at {self.target.labels}"
            )
        return Arrow(self.point, other.mover * self.mover)

    def invert(self) -> "Arrow":
        return Arrow(self.target, self.mover.inverse())


def groupoid_algebra(a: Arrow, b: Optional[Arrow] = None, op: str = "compose"):
    """Arrow algebra dispatch: compose, invert, source, range."""
    if op == "compose":
        if b is None:
            raise ValueError("compose needs a second arrow")
        return a.compose(b)
    if op == "invert":
        return a.invert()
    if op == "source":
        return a.source
    if op == "range":
        return a.target
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class ArrowPatch:
    """A basic compact arrow set: one clopen base, one mover."""

    base: ClopenSet
    mover: GroupElement

    def __post_init__(self):
        if self.base.is_empty:
            raise ValueError("patch base must be nonempty")
        if self.mover.kind != self.base.chain.kind:
            raise KindMismatchError("mover and base disagree on the group")

    @property
    def source_set(self) -> ClopenSet:
        return self.base

    @property
    def range_set(self) -> ClopenSet:
        return act(self.mover, self.base)

    def at_level(self, level: int) -> "ArrowPatch":
        return ArrowPatch(self.base.at_level(level), self.mover)


@dataclass(frozen=True)
class CompactGroupoidSet:
    """A finite union of patches, normalized to one base level.

    Patches sharing a mover are merged and the list is sorted by mover
    coordinates, so equal sets have equal normal forms.
    """

    chain: SubgroupChain
    level: int
    patches: tuple

    @staticmethod
    def build(patches: Sequence[ArrowPatch]) -> "CompactGroupoidSet":
        if not patches:
            raise ValueError("need at least one patch")
        chain = patches[0].base.chain
        for p in patches:
            if p.base.chain != chain:
                raise KindMismatchError("patches over different chains")
        level = max(p.base.level for p in patches)
        merged: dict = {}
        for p in patches:
            key = p.mover.coords
            labs = set(p.base.at_level(level).labels)
            merged[key] = merged.get(key, set()) | labs
        out = []
        for key in sorted(merged):
            out.append(
                ArrowPatch(
                    ClopenSet(chain, level, tuple(sorted(merged[key]))),
                    GroupElement(chain.kind, key),
                )
            )
        return CompactGroupoidSet(chain, level, tuple(out))

    @property
    def movers(self) -> list:
        return [p.mover for p in self.patches]

    def source_set(self) -> ClopenSet:
        labels = set()
        for p in self.patches:
            labels.update(p.base.labels)
        return ClopenSet(self.chain, self.level, tuple(sorted(labels)))

    def at_level(self, level: int) -> "CompactGroupoidSet":
        if level < self.level:
            raise LevelRangeError("compact sets only refine downward")
        if level == self.level:
            return self
        return CompactGroupoidSet(
            self.chain, level, tuple(p.at_level(level) for p in self.patches)
        )


def _arrow_in_gn(label_n: int, mover: GroupElement, K: Tile) -> bool:
    rep = K.rep_of_label(label_n)
    return (mover * rep) in K


def gn_pieces(patch: ArrowPatch, n: int, K: Tile) -> list:
    """Resolve the patch per level-n cylinder; one membership verdict each.

    Returns (resolution level, label, in_Gn) triples.
    """
    chain = patch.base.chain
    if K.chain != chain:
        raise KindMismatchError("tile and patch over different chains")
    res = max(n, patch.base.level)
    base = patch.base.at_level(res)
    out = []
    for lab in base.labels:
        lab_n = chain.phi(n, res, lab)
        out.append((res, lab, _arrow_in_gn(lab_n, patch.mover, K)))
    return out


def membership_Gn(item: Union[Arrow, ArrowPatch], n: int, K: Tile) -> bool:
    """Whether an arrow, or every arrow of a patch, lies in G_n."""
    if isinstance(item, Arrow):
        if item.point.depth < n:
            raise LevelRangeError("point too shallow to resolve the membership level")
        return _arrow_in_gn(item.point.label(n), item.mover, K)
    if isinstance(item, ArrowPatch):
        return all(ok for _, _, ok in gn_pieces(item, n, K))
    raise TypeError(f"cannot test {type(item).__name__}")


@dataclass(frozen=True)
class NestingResult:
    passed: bool
    arrows_checked: int
    witness: Optional[tuple] = None


def verify_nesting_pair(small: Tile, big: Tile) -> NestingResult:
    """Exhaustively check G_{small.level} inside G_{big.level}.

    Enumerates arrows (g.c, g1.g^-1) for g, g1 in the small tile and c
    over the big-level cylinders inside the small-level identity cylinder,
    then tests each for membership at the big level.
    """
    chain = small.chain
    if big.chain != chain:
        raise KindMismatchError("tiles over different chains")
    if small.level > big.level:
        raise LevelRangeError("nesting runs from the coarser level to the finer")
    nb = big.level
    fiber = chain.fiber(small.level, nb, chain.identity_label(small.level))
    checked = 0
    for g in small.elements.elements():
        g_lab = chain.label(g, nb)
        ginv = g.inverse()
        for g1 in small.elements.elements():
            mover = g1 * ginv
            for c in fiber:
                checked += 1
                src_lab = chain.q_mul(nb, g_lab, c)
                if not _arrow_in_gn(src_lab, mover, big):
                    return NestingResult(
                        False,
                        checked,
                        witness=(c, g.coords, g1.coords, mover.coords),
                    )
    return NestingResult(True, checked)


def verify_nesting(ntc: NestedTileChain, k: int) -> NestingResult:
    """Check consecutive pair k of the nested chain."""
    if not 0 <= k < len(ntc.levels) - 1:
        raise LevelRangeError(f"pair index {k} outside the chain")
    return verify_nesting_pair(ntc.tiles[k], ntc.tiles[k + 1])


def validate_graph(C: CompactGroupoidSet) -> bool:
    """True iff distinct arrows have distinct sources and distinct ranges."""
    chain = C.chain
    seen_src: set = set()
    seen_rng: set = set()
    for p in C.patches:
        glab = chain.label(p.mover, C.level)
        for lab in p.base.labels:
            if lab in seen_src:
                return False
            seen_src.add(lab)
            rng = chain.q_mul(C.level, glab, lab)
            if rng in seen_rng:
                return False
            seen_rng.add(rng)
    return True


@dataclass(frozen=True)
class CertificateValidation:
    """The four graph clauses plus the counting chain, all checked exactly."""

    source_equality: bool
    ranges_disjoint: bool
    graphs_valid: bool
    inside_subgroupoid: bool
    k_size: int
    piece_sum: int
    defect_bound: int
    tile_size: int
    m: int

    @property
    def all_passed(self) -> bool:
        return (
            self.source_equality
            and self.ranges_disjoint
            and self.graphs_valid
            and self.inside_subgroupoid
            and self.k_size <= self.piece_sum <= self.defect_bound
            and self.defect_bound * self.m < self.tile_size
        )


@dataclass(frozen=True)
class GraphCertificate:
    """Output of the almost-AF procedure, replayable and serializable."""

    chain: SubgroupChain
    level: int
    k_set: FiniteElementSet
    sigmas: tuple
    graphs: tuple
    validation: CertificateValidation

    def sigma(self, i: int) -> dict:
        return {g: t for g, t in self.sigmas[i]}


def almost_af_certificate(
    C: CompactGroupoidSet, m: int, ntc: NestedTileChain
) -> GraphCertificate:
    """Run the certificate procedure for a compact set avoiding the movers' identity.

    Scans the nested chain for the least stage whose tile K_n satisfies
    max_s |K_n symdiff sK_n| < |K_n|/(|S| m), verifies C misses G_n there,
    builds K = union_s (K_n minus s^-1 K_n), assigns the m|K| smallest
    targets to the injections, and emits the m graphs with their
    validation record.
    """
    if m < 1:
        raise ValueError("multiplicity m must be >= 1")
    chain = ntc.chain
    if C.chain != chain:
        raise KindMismatchError("compact set and chain disagree")
    movers = C.movers
    if any(g.is_identity for g in movers):
        raise ValueError("compact set must avoid the identity mover")
    kind = chain.kind
    s_count = len(movers)

    # stage scan: least selected level meeting the strict integer bound
    best: Optional[Fraction] = None
    selected: Optional[tuple] = None
    for level, tile in zip(ntc.levels, ntc.tiles):
        kn = tile.elements
        worst = max(
            _kernels.symdiff_count(kind, kn.coords, s.coords, "left") for s in movers
        )
        defect = Fraction(worst, len(kn))
        if best is None or defect < best:
            best = defect
        if worst * s_count * m < len(kn):
            selected = (level, tile, worst)
            break
    if selected is None:
        raise LevelExhaustedError(
            best_defect=best,
            bound_description=f"max_s |K_n symdiff sK_n| < |K_n|/({s_count}*{m})",
        )
    level, tile, worst = selected
    kn_coords = tile.elements.coords

    # the compact set must miss G_n at the selected level
    for p in C.patches:
        for res, lab, member in gn_pieces(p, level, tile):
            if member:
                raise PreconditionViolatedError(
                    arrow=(res, lab, p.mover.coords), level=level
                )

    # K = union over movers of K_n minus s^-1 K_n
    k_coords: set = set()
    piece_sum = 0
    for s in movers:
        piece = {
            k for k in kn_coords if mul_coords(kind, s.coords, k) not in kn_coords
        }
        piece_sum += len(piece)
        k_coords |= piece
    k_set = FiniteElementSet(kind, chain.rank, frozenset(k_coords))
    if m * len(k_set) >= len(kn_coords):
        raise OdotileError("counting bound failed; the level scan is inconsistent")

    # injections: blocks of the lexicographically smallest targets
    k_sorted = sorted(k_coords)
    targets = sorted(kn_coords)[: m * len(k_sorted)]
    sigmas = tuple(
        tuple(zip(k_sorted, targets[i * len(k_sorted) : (i + 1) * len(k_sorted)]))
        for i in range(m)
    )

    # graphs at the common resolution of C and the selected level
    res = max(C.level, level)
    src = C.source_set().at_level(res)
    src_labels = set(src.labels)
    graphs = []
    covered: set = set()
    for i in range(m):
        patches = []
        for g_coords, t_coords in sigmas[i]:
            g = GroupElement(kind, g_coords)
            cyl_labels = set(chain.fiber(level, res, chain.label(g, level)))
            piece = sorted(src_labels & cyl_labels)
            if i == 0:
                covered.update(piece)
            if not piece:
                continue
            mover = GroupElement(kind, t_coords) * g.inverse()
            patches.append(ArrowPatch(ClopenSet(chain, res, tuple(piece)), mover))
        if not patches:
            raise OdotileError("empty graph; compact set does not meet the K cylinders")
        graphs.append(CompactGroupoidSet.build(patches))

    source_equality = covered == src_labels and all(
        gi.source_set().equals(src) for gi in graphs
    )
    range_sets = []
    for gi in graphs:
        labels: set = set()
        for p in gi.patches:
            glab = chain.label(p.mover, gi.level)
            labels.update(chain.q_mul(gi.level, glab, lab) for lab in p.base.labels)
        range_sets.append(labels)
    ranges_disjoint = all(
        not (range_sets[i] & range_sets[j])
        for i in range(m)
        for j in range(i + 1, m)
    )
    graphs_valid = all(validate_graph(gi) for gi in graphs)
    inside = all(
        ok
        for gi in graphs
        for p in gi.patches
        for _, _, ok in gn_pieces(p, level, tile)
    )
    validation = CertificateValidation(
        source_equality=source_equality,
        ranges_disjoint=ranges_disjoint,
        graphs_valid=graphs_valid,
        inside_subgroupoid=inside,
        k_size=len(k_set),
        piece_sum=piece_sum,
        defect_bound=s_count * worst,
        tile_size=len(kn_coords),
        m=m,
    )
    if not validation.all_passed:
        raise OdotileError(f"certificate validation failed: {validation!r}")
    return GraphCertificate(
        chain=chain,
        level=level,
        k_set=k_set,
        sigmas=sigmas,
        graphs=tuple(graphs),
        validation=validation,
    )
