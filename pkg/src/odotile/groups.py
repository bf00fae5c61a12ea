"""Exact group arithmetic for integer lattices and the discrete Heisenberg
group, with nested congruence subgroup chains and coset labeling.

Two families are supported: ``lattice`` (free abelian of rank d, written
additively on coordinate tuples) and ``heisenberg`` (upper unitriangular
3x3 integer matrices, stored as coordinate triples (a, b, c)).  All
arithmetic is exact over unbounded Python integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .errors import ChainDepthInsufficientError, KindMismatchError, LevelRangeError

LATTICE = "lattice"
HEISENBERG = "heisenberg"
_KINDS = (LATTICE, HEISENBERG)

Coords = tuple


def mul_coords(kind: str, a: Coords, b: Coords) -> Coords:
    """Group law on raw coordinate tuples."""
    if kind == HEISENBERG:
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])
    return tuple(x + y for x, y in zip(a, b))


def inv_coords(kind: str, a: Coords) -> Coords:
    """Inverse on raw coordinate tuples."""
    if kind == HEISENBERG:
        return (-a[0], -a[1], -a[2] + a[0] * a[1])
    return tuple(-x for x in a)


@dataclass(frozen=True)
class GroupElement:
    """One group element: a kind tag plus exact integer coordinates."""

    kind: str
    coords: Coords

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise KindMismatchError(f"unknown group kind {self.kind!r}")
        if self.kind == HEISENBERG and len(self.coords) != 3:
            raise KindMismatchError("heisenberg elements need exactly 3 coordinates")
        if not all(isinstance(c, int) for c in self.coords):
            raise KindMismatchError("coordinates must be exact integers")

    def _check_compatible(self, other: "GroupElement") -> None:
        if self.kind != other.kind or len(self.coords) != len(other.coords):
            raise KindMismatchError(
                f"cannot combine {self.kind}/{len(self.coords)} "
                f"with {other.kind}/{len(other.coords)}"
            )

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check_compatible(other)
        return GroupElement(self.kind, mul_coords(self.kind, self.coords, other.coords))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.kind, inv_coords(self.kind, self.coords))

    @property
    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __repr__(self):
        return f"{self.kind[0]}{self.coords!r}"


def group_op(a: GroupElement, b: GroupElement, mode: str = "multiply") -> GroupElement:
    """Return a*b (``multiply``) or inverse(a)*b (``invert-first``)."""
    if mode == "multiply":
        return a * b
    if mode == "invert-first":
        return a.inverse() * b
    raise ValueError(f"unknown mode {mode!r}")


def _lattice_span_index(vectors: list[Coords], rank: int) -> Optional[int]:
    """Index in Z^rank of the sublattice spanned by ``vectors``.

    Returns None when the span has rank below ``rank``.  Uses exact
    integer row reduction: the basis is kept in echelon form with one
    pivot per column, so the index is the product of pivot magnitudes.
    """
    basis: dict[int, list[int]] = {}
    for vec in vectors:
        row = list(vec)
        col = 0
        while col < rank:
            if row[col] == 0:
                col += 1
                continue
            if col not in basis:
                basis[col] = row
                break
            piv = basis[col]
            # extended gcd step aligning both rows on this column
            a, b = piv[col], row[col]
            g, x, y = _xgcd(a, b)
            new_piv = [x * p + y * r for p, r in zip(piv, row)]
            new_row = [(a // g) * r - (b // g) * p for p, r in zip(piv, row)]
            basis[col] = new_piv
            row = new_row
            col += 1
    if len(basis) < rank:
        return None
    index = 1
    for col, row in basis.items():
        index *= abs(row[col])
    return index


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


_HEISENBERG_WITNESSES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@dataclass(frozen=True)
class GroupDescriptor:
    """A concrete group: kind, rank, and a finite symmetric generating set."""

    kind: str
    rank: int
    generators: tuple[GroupElement, ...]

    @staticmethod
    def lattice(rank: int, generators: Optional[Iterable[Coords]] = None) -> "GroupDescriptor":
        if rank < 1:
            raise ValueError("lattice rank must be >= 1")
        if generators is None:
            gens = []
            for i in range(rank):
                e = tuple(1 if j == i else 0 for j in range(rank))
                gens.append(e)
        else:
            gens = [tuple(g) for g in generators]
        return GroupDescriptor._build(LATTICE, rank, gens)

    @staticmethod
    def heisenberg(generators: Optional[Iterable[Coords]] = None) -> "GroupDescriptor":
        gens = [(1, 0, 0), (0, 1, 0)] if generators is None else [tuple(g) for g in generators]
        return GroupDescriptor._build(HEISENBERG, 3, gens)

    @staticmethod
    def _build(kind: str, rank: int, gens: list[Coords]) -> "GroupDescriptor":
        elems = {GroupElement(kind, tuple(int(c) for c in g)) for g in gens}
        # store the symmetric closure; word balls and swap moves assume it
        elems |= {g.inverse() for g in elems}
        ordered = tuple(sorted(elems, key=lambda g: g.coords))
        for g in ordered:
            if len(g.coords) != rank:
                raise KindMismatchError(f"generator {g!r} has wrong rank for {kind}/{rank}")
        return GroupDescriptor(kind, rank, ordered)

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self.kind, (0,) * self.rank)

    def element(self, coords: Iterable[int]) -> GroupElement:
        return GroupElement(self.kind, tuple(int(c) for c in coords))

    def word_ball(self, radius: int) -> list[GroupElement]:
        """All products of at most ``radius`` generators, identity included."""
        seen = {self.identity}
        frontier = [self.identity]
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for s in self.generators:
                    y = x * s
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen, key=lambda g: g.coords)

    def check_generates(self, word_radius: int = 6) -> bool:
        """Whether the generating set generates the whole group.

        Exact for lattices (integer span index must be 1).  For the
        Heisenberg group the check is a sufficient one: the word ball of
        the given radius must contain the three standard generators.
        """
        if self.kind == LATTICE:
            idx = _lattice_span_index([g.coords for g in self.generators], self.rank)
            return idx == 1
        ball = {g.coords for g in self.word_ball(word_radius)}
        return all(w in ball for w in _HEISENBERG_WITNESSES)


@dataclass(frozen=True)
class SubgroupChain:
    """Nested congruence chain: level n reduces every coordinate mod m_n.

    Lattice quotients are (Z/m)^d; Heisenberg quotients are the mod-m
    Heisenberg groups of order m^3 (single modulus on all coordinates,
    which is what keeps the kernel normal).  Levels are 1-based.
    """

    kind: str
    rank: int
    moduli: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise KindMismatchError(f"unknown group kind {self.kind!r}")
        if self.kind == HEISENBERG and self.rank != 3:
            raise KindMismatchError("heisenberg chains have rank 3")
        if not self.moduli:
            raise ValueError("chain needs at least one level")
        for m in self.moduli:
            if not isinstance(m, int) or m < 1:
                raise ValueError(f"modulus {m!r} must be a positive integer")

    @staticmethod
    def for_group(group: GroupDescriptor, moduli: Iterable[int]) -> "SubgroupChain":
        return SubgroupChain(group.kind, group.rank, tuple(int(m) for m in moduli))

    @property
    def depth(self) -> int:
        return len(self.moduli)

    def _check_level(self, n: int) -> None:
        if not 1 <= n <= self.depth:
            raise LevelRangeError(f"level {n} outside 1..{self.depth}")

    def modulus(self, n: int) -> int:
        self._check_level(n)
        return self.moduli[n - 1]

    def index(self, n: int) -> int:
        return self.modulus(n) ** self.rank

    def is_nested(self) -> bool:
        return all(b % a == 0 for a, b in zip(self.moduli, self.moduli[1:]))

    # -- label arithmetic ------------------------------------------------

    def _decode(self, label: int, m: int) -> Coords:
        digits = []
        for _ in range(self.rank):
            digits.append(label % m)
            label //= m
        return tuple(digits)

    def _encode(self, digits: Coords, m: int) -> int:
        label = 0
        for d in reversed(digits):
            label = label * m + d
        return label

    def label(self, x: GroupElement, n: int) -> int:
        """Coset label of x at level n, from the canonical representative."""
        if x.kind != self.kind or len(x.coords) != self.rank:
            raise KindMismatchError(f"element {x!r} does not belong to {self.kind}/{self.rank}")
        m = self.modulus(n)
        return self._encode(tuple(c % m for c in x.coords), m)

    def rep_coords(self, label: int, n: int) -> Coords:
        m = self.modulus(n)
        if not 0 <= label < self.index(n):
            raise LevelRangeError(f"label {label} outside quotient of size {self.index(n)}")
        return self._decode(label, m)

    def rep(self, label: int, n: int) -> GroupElement:
        """Canonical representative (componentwise nonnegative remainder)."""
        return GroupElement(self.kind, self.rep_coords(label, n))

    def identity_label(self, n: int) -> int:
        self._check_level(n)
        return 0

    def q_mul(self, n: int, la: int, lb: int) -> int:
        m = self.modulus(n)
        a = self._decode(la, m)
        b = self._decode(lb, m)
        prod = mul_coords(self.kind, a, b)
        return self._encode(tuple(c % m for c in prod), m)

    def q_inv(self, n: int, la: int) -> int:
        m = self.modulus(n)
        a = self._decode(la, m)
        inv = inv_coords(self.kind, a)
        return self._encode(tuple(c % m for c in inv), m)

    def act_label(self, n: int, g: GroupElement, label: int) -> int:
        """Left translation of a level-n label by the image of g."""
        return self.q_mul(n, self.label(g, n), label)

    def phi(self, n: int, m_level: int, label: int) -> int:
        """Project a level-``m_level`` label down to level n (n <= m_level)."""
        self._check_level(n)
        self._check_level(m_level)
        if n > m_level:
            raise LevelRangeError(f"phi needs n <= m, got {n} > {m_level}")
        mm = self.modulus(m_level)
        mn = self.modulus(n)
        if mm % mn != 0:
            raise ValueError(f"chain not nested between levels {n} and {m_level}")
        digits = self._decode(label, mm)
        return self._encode(tuple(c % mn for c in digits), mn)

    def fiber(self, n: int, m_level: int, label: int) -> list[int]:
        """All level-``m_level`` labels projecting to a level-n label."""
        self._check_level(n)
        self._check_level(m_level)
        if n > m_level:
            raise LevelRangeError(f"fiber needs n <= m, got {n} > {m_level}")
        mm = self.modulus(m_level)
        mn = self.modulus(n)
        if mm % mn != 0:
            raise ValueError(f"chain not nested between levels {n} and {m_level}")
        base = self._decode(label, mn)
        steps = mm // mn
        out = []
        for offsets in itertools.product(range(steps), repeat=self.rank):
            digits = tuple(b + t * mn for b, t in zip(base, offsets))
            out.append(self._encode(digits, mm))
        return sorted(out)


def coset_label(x: GroupElement, n: int, chain: SubgroupChain) -> int:
    """Deterministic coset label of x at chain level n."""
    return chain.label(x, n)


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    probes: int
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class ChainDiagnostics:
    nestedness: CheckResult
    normality: CheckResult
    homomorphism: CheckResult

    @property
    def all_passed(self) -> bool:
        return self.nestedness.passed and self.normality.passed and self.homomorphism.passed


def check_chain(
    chain: SubgroupChain,
    probe_ball_radius: int = 3,
    group: Optional[GroupDescriptor] = None,
) -> ChainDiagnostics:
    """Probe-based chain diagnostics: nestedness, normality, homomorphism.

    Normality and the homomorphism property are verified on all elements
    (respectively pairs) of the word ball of the given radius; failures
    carry a witness rather than raising.
    """
    if group is None:
        group = (
            GroupDescriptor.heisenberg()
            if chain.kind == HEISENBERG
            else GroupDescriptor.lattice(chain.rank)
        )

    nest_witness = None
    for i, (a, b) in enumerate(zip(chain.moduli, chain.moduli[1:]), start=1):
        if b % a != 0:
            nest_witness = (i, a, b)
            break
    nestedness = CheckResult(nest_witness is None, len(chain.moduli) - 1, nest_witness)

    ball = group.word_ball(probe_ball_radius)
    norm_witness = None
    norm_probes = 0
    for n in range(1, chain.depth + 1):
        id_label = chain.identity_label(n)
        kernel_probes = [x for x in ball if chain.label(x, n) == id_label]
        for g in ball:
            gi = g.inverse()
            for x in kernel_probes:
                norm_probes += 1
                if chain.label(g * x * gi, n) != id_label:
                    norm_witness = (n, g, x)
                    break
            if norm_witness:
                break
        if norm_witness:
            break
    normality = CheckResult(norm_witness is None, norm_probes, norm_witness)

    hom_witness = None
    hom_probes = 0
    for n in range(1, chain.depth + 1):
        for x in ball:
            lx = chain.label(x, n)
            for y in ball:
                hom_probes += 1
                if chain.label(x * y, n) != chain.q_mul(n, lx, chain.label(y, n)):
                    hom_witness = (n, x, y)
                    break
            if hom_witness:
                break
        if hom_witness:
            break
    homomorphism = CheckResult(hom_witness is None, hom_probes, hom_witness)

    return ChainDiagnostics(nestedness, normality, homomorphism)


def check_separation(F: Iterable[GroupElement], chain: SubgroupChain) -> int:
    """Least level whose labeling is injective on F.

    Raises ChainDepthInsufficientError (carrying a colliding pair) when
    even the deepest level identifies two elements of F.
    """
    elems = sorted(set(F), key=lambda g: g.coords)
    if not elems:
        raise ValueError("F must be nonempty")
    collision = None
    for n in range(1, chain.depth + 1):
        seen: dict[int, GroupElement] = {}
        collision_here = None
        for x in elems:
            lab = chain.label(x, n)
            if lab in seen:
                collision_here = (seen[lab], x)
                break
            seen[lab] = x
        if collision_here is None:
            return n
        collision = collision_here
    raise ChainDepthInsufficientError((collision[0].coords, collision[1].coords))
