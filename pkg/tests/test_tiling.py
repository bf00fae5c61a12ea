"""Transversal verification, construction, refinement, chain selection."""

from __future__ import annotations

from fractions import Fraction

import pytest

from odotile.errors import (
    ChainExhaustedError,
    FNotSeparatedError,
    LevelOrderError,
)
from odotile.folner import FiniteElementSet, box, interval, s_boundary
from odotile.groups import GroupDescriptor, GroupElement, SubgroupChain
from odotile.tiling import (
    NestedTileChain,
    Tile,
    TilingFailure,
    box_tile_source,
    build_transversal,
    full_nested_chain,
    refine_tile,
    refinement_centers,
    select_nested_chain,
    two_sided_max_defect,
    verify_tiling,
)


def fes(kind, rank, coords):
    return FiniteElementSet.from_coords(kind, rank, coords)


Z = lambda *m: SubgroupChain("lattice", 1, m)
Z2 = lambda *m: SubgroupChain("lattice", 2, m)
H = lambda *m: SubgroupChain("heisenberg", 3, m)


def test_verify_box_transversal_z2():
    chain = Z2(3)
    K = box(GroupDescriptor.lattice(2), 3)
    out = verify_tiling(K, 1, chain)
    assert isinstance(out, Tile)
    assert out.index == 9


def test_verify_shifted_representative():
    # 31 = 15 mod 16, still a transversal
    chain = Z(16)
    K = fes("lattice", 1, [(i,) for i in range(15)] + [(31,)])
    out = verify_tiling(K, 1, chain)
    assert isinstance(out, Tile)
    assert out.rep_of_label(15).coords == (31,)


def test_verify_rejects_overfull_interval():
    chain = Z(16)
    K = fes("lattice", 1, [(i,) for i in range(17)])
    out = verify_tiling(K, 1, chain)
    assert isinstance(out, TilingFailure)
    assert out.reason == "cardinality"
    assert (out.expected, out.got) == (16, 17)


def test_verify_reports_colliding_pair():
    chain = Z(4)
    K = fes("lattice", 1, [(0,), (1,), (2,), (4,)])
    out = verify_tiling(K, 1, chain)
    assert isinstance(out, TilingFailure)
    assert out.reason == "collision"
    assert set(out.pair) == {(0,), (4,)}


def test_tile_label_bijection():
    chain = H(2)
    t = Tile(chain, 1, box(GroupDescriptor.heisenberg(), 2))
    labs = {t.label_of(g) for g in t.elements}
    assert labs == set(range(8))
    for lab in labs:
        assert t.label_of(t.rep_of_label(lab)) == lab


def test_build_transversal_greedy_fill():
    chain = Z(2, 4)
    F = fes("lattice", 1, [(-1,), (0,), (1,)])
    t = build_transversal(F, 2, chain)
    assert t.elements.sorted_coords == [(-1,), (0,), (1,), (2,)]
    assert t.core is F or t.core.coords == F.coords


def test_build_transversal_pins_core():
    chain = Z(2, 4)
    F = fes("lattice", 1, [(0,), (5,)])
    t = build_transversal(F, 2, chain)
    assert set(t.elements.coords) == {(0,), (5,), (2,), (3,)}
    assert GroupElement("lattice", (5,)) in t


def test_build_transversal_separation_error():
    chain = Z(2, 4)
    F = fes("lattice", 1, [(0,), (4,)])
    with pytest.raises(FNotSeparatedError):
        build_transversal(F, 2, chain)


def test_build_transversal_improves_boundary():
    # without a core nothing is pinned; swaps should reach a box-like tile
    chain = Z(2, 4)
    F = fes("lattice", 1, [(0,)])
    t = build_transversal(F, 2, chain)
    S = fes("lattice", 1, [(1,), (-1,)])
    got = len(s_boundary(S, t.elements))
    best = len(s_boundary(S, interval(4)))
    assert got == best


def test_refine_boxes_fixed_point():
    chain = Z(4, 16)
    small = Tile(chain, 1, interval(4))
    big = Tile(chain, 2, interval(16))
    out = refine_tile(small, big, check_inclusion=True)
    assert out.elements.coords == big.elements.coords


def test_refine_pulls_stray_representative_back():
    chain = Z(4, 16)
    small = Tile(chain, 1, interval(4))
    big = Tile(chain, 2, fes("lattice", 1, [(i,) for i in range(15)] + [(31,)]))
    centers = refinement_centers(small, big)
    assert centers.sorted_coords == [(0,), (4,), (8,), (12,)]
    out = refine_tile(small, big, check_inclusion=True)
    assert out.elements.coords == interval(16).coords


def test_refine_boxes_z2():
    chain = Z2(2, 4)
    small = Tile(chain, 1, box(GroupDescriptor.lattice(2), 2))
    big = Tile(chain, 2, box(GroupDescriptor.lattice(2), 4))
    out = refine_tile(small, big, check_inclusion=True)
    assert out.elements.coords == big.elements.coords


def test_refine_level_order_error():
    chain = Z(4, 16)
    small = Tile(chain, 1, interval(4))
    big = Tile(chain, 2, interval(16))
    with pytest.raises(LevelOrderError):
        refine_tile(big, small)


def test_refine_without_identity_in_small():
    # translate decomposition must follow the construction centers even
    # when the coarse tile misses the identity coset representative 0
    chain = Z(4, 16)
    small = Tile(chain, 1, fes("lattice", 1, [(1,), (2,), (3,), (4,)]))
    big = Tile(chain, 2, interval(16))
    out = refine_tile(small, big)
    ntc = NestedTileChain(
        chain, (1, 2), (small, out), (refinement_centers(small, big),)
    )
    ntc.validate()


def test_full_nested_chain_validates():
    ntc = full_nested_chain(Z(2, 4, 8))
    assert ntc.levels == (1, 2, 3)
    ntc.validate()
    parts = ntc.decomposition(1)
    union = set()
    for p in parts:
        assert not (union & p.coords)
        union |= p.coords
    assert union == ntc.tiles[2].elements.coords


def test_select_prescreen_worked_example():
    chain = Z(2, 4, 8, 16, 32)
    S = fes("lattice", 1, [(1,)])
    ntc = select_nested_chain(chain, S, [Fraction(1, 2)], mode="prescreen")
    assert ntc.levels == (4,)
    assert chain.modulus(4) == 16


def test_select_direct_worked_example():
    chain = Z(2, 4, 8, 16, 32)
    S = fes("lattice", 1, [(1,)])
    ntc = select_nested_chain(chain, S, [Fraction(1, 2)], mode="direct")
    assert ntc.levels == (3,)
    assert chain.modulus(3) == 8


def test_select_two_stage_chain():
    chain = Z(2, 4, 8, 16, 32, 64)
    S = fes("lattice", 1, [(1,)])
    ntc = select_nested_chain(chain, S, [Fraction(1, 2), Fraction(1, 8)], mode="direct")
    assert len(ntc.levels) == 2
    assert ntc.levels[0] < ntc.levels[1]
    for k, eps in enumerate(ntc.epsilons):
        assert two_sided_max_defect(ntc.tiles[k].elements, list(S)) < eps


def test_select_exhausts_on_heisenberg_y_mover():
    chain = H(2, 4, 8)
    S = fes("heisenberg", 3, [(0, 1, 0)])
    with pytest.raises(ChainExhaustedError) as ei:
        select_nested_chain(chain, S, [Fraction(1, 2)], mode="direct")
    assert ei.value.best_defect == Fraction(65, 64)
    assert ei.value.stage == 1


def test_select_rejects_bad_epsilons():
    chain = Z(2, 4)
    S = fes("lattice", 1, [(1,)])
    with pytest.raises(ValueError):
        select_nested_chain(chain, S, [])
    with pytest.raises(ValueError):
        select_nested_chain(chain, S, [Fraction(1, 4), Fraction(1, 2)])
    with pytest.raises(ValueError):
        select_nested_chain(chain, S, [Fraction(0)])


def test_box_tile_source_levels():
    src = box_tile_source(Z2(2, 4))
    assert len(src(1).elements) == 4
    assert len(src(2).elements) == 16
