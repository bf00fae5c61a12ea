"""Arrow algebra, subgroupoid membership, nesting, certificates."""

from __future__ import annotations

from fractions import Fraction

import pytest

from odotile.errors import (
    LevelExhaustedError,
    NonComposableError,
    PreconditionViolatedError,
)
from odotile.folner import FiniteElementSet, box, interval
from odotile.groups import GroupDescriptor, GroupElement, SubgroupChain
from odotile.groupoid import (
    Arrow,
    ArrowPatch,
    CompactGroupoidSet,
    GraphCertificate,
    NestingResult,
    almost_af_certificate,
    gn_pieces,
    groupoid_algebra,
    membership_Gn,
    validate_graph,
    verify_nesting,
    verify_nesting_pair,
)
from odotile.odometer import ClopenSet, embed_point
from odotile.tiling import NestedTileChain, Tile, full_nested_chain, refinement_centers


Z = lambda *m: SubgroupChain("lattice", 1, m)


def zpoint(chain, value, depth=None):
    d = chain.depth if depth is None else depth
    return embed_point(GroupElement("lattice", (value,)), d, chain)


def test_arrow_compose_formula():
    chain = Z(2, 4, 8)
    a = Arrow(zpoint(chain, 0), GroupElement("lattice", (1,)))
    b = Arrow(zpoint(chain, 1), GroupElement("lattice", (2,)))
    c = a.compose(b)
    assert c.point == zpoint(chain, 0)
    assert c.mover.coords == (3,)
    assert c.target == zpoint(chain, 3)


def test_arrow_invert_formula():
    chain = Z(2, 4, 8)
    a = Arrow(zpoint(chain, 0), GroupElement("lattice", (1,)))
    inv = a.invert()
    assert inv.point == zpoint(chain, 1)
    assert inv.mover.coords == (-1,)
    assert inv.compose(a) is not None  # lands back at the source


def test_arrow_compose_mismatch():
    chain = Z(2, 4, 8)
    a = Arrow(zpoint(chain, 0), GroupElement("lattice", (1,)))
    b = Arrow(zpoint(chain, 2), GroupElement("lattice", (1,)))
    with pytest.raises(NonComposableError):
        a.compose(b)


def test_groupoid_algebra_dispatch():
    chain = Z(2, 4, 8)
    a = Arrow(zpoint(chain, 5), GroupElement("lattice", (2,)))
    assert groupoid_algebra(a, op="source") == zpoint(chain, 5)
    assert groupoid_algebra(a, op="range") == zpoint(chain, 7)
    assert groupoid_algebra(a, op="invert").mover.coords == (-2,)
    with pytest.raises(ValueError):
        groupoid_algebra(a, op="compose")


def test_membership_examples():
    chain = Z(2, 4)
    K = Tile(chain, 2, interval(4))
    x = zpoint(chain, 1)
    assert membership_Gn(Arrow(x, GroupElement("lattice", (2,))), 2, K)
    assert not membership_Gn(Arrow(x, GroupElement("lattice", (3,))), 2, K)
    # units belong to every subgroupoid
    assert membership_Gn(Arrow(x, GroupElement("lattice", (0,))), 2, K)


def test_membership_patch_splits_per_cylinder():
    chain = Z(2, 4)
    K = Tile(chain, 2, interval(4))
    patch = ArrowPatch(ClopenSet(chain, 1, (1,)), GroupElement("lattice", (2,)))
    pieces = gn_pieces(patch, 2, K)
    verdicts = {lab: ok for _, lab, ok in pieces}
    # labels 1 and 3 at level 2; 2+1=3 in K, 2+3=5 not
    assert verdicts == {1: True, 3: False}
    assert not membership_Gn(patch, 2, K)


def test_membership_invariant_under_refinement():
    chain = Z(2, 4, 8)
    K = Tile(chain, 2, interval(4))
    coarse = ArrowPatch(ClopenSet(chain, 2, (1,)), GroupElement("lattice", (2,)))
    fine = coarse.at_level(3)
    assert membership_Gn(coarse, 2, K) == membership_Gn(fine, 2, K)


def test_compact_set_normal_form():
    chain = Z(2, 4)
    p1 = ArrowPatch(ClopenSet(chain, 1, (0,)), GroupElement("lattice", (1,)))
    p2 = ArrowPatch(ClopenSet(chain, 2, (1,)), GroupElement("lattice", (1,)))
    C = CompactGroupoidSet.build([p1, p2])
    assert C.level == 2
    assert len(C.patches) == 1
    assert C.patches[0].base.labels == (0, 1, 2)
    assert C.source_set().haar_mass == Fraction(3, 4)


def test_nesting_pass_z_4_16():
    chain = Z(2, 4, 8, 16)
    small = Tile(chain, 2, interval(4))
    big = Tile(chain, 4, interval(16))
    out = verify_nesting_pair(small, big)
    assert out.passed
    assert out.arrows_checked == 4 * 4 * 4
    assert out.witness is None


def test_nesting_trivial_pair():
    chain = Z(2, 4)
    t = Tile(chain, 2, interval(4))
    out = verify_nesting_pair(t, t)
    assert out.passed


def test_nesting_fails_on_corrupted_big_tile():
    chain = Z(2, 4, 8, 16)
    small = Tile(chain, 2, interval(4))
    big = Tile(
        chain,
        4,
        FiniteElementSet.from_coords("lattice", 1, [(i,) for i in range(15)] + [(31,)]),
    )
    out = verify_nesting_pair(small, big)
    assert not out.passed
    assert out.witness is not None


def test_nesting_over_nested_chain():
    ntc = full_nested_chain(Z(2, 4, 8))
    for k in range(len(ntc.levels) - 1):
        assert verify_nesting(ntc, k).passed


def test_validate_graph_cases():
    chain = Z(2, 4)
    one = GroupElement("lattice", (1,))
    two = GroupElement("lattice", (2,))
    single = CompactGroupoidSet.build([ArrowPatch(ClopenSet(chain, 2, (0, 1)), one)])
    assert validate_graph(single)
    dup_sources = CompactGroupoidSet.build(
        [
            ArrowPatch(ClopenSet(chain, 2, (0,)), one),
            ArrowPatch(ClopenSet(chain, 2, (0,)), two),
        ]
    )
    assert not validate_graph(dup_sources)
    disjoint = CompactGroupoidSet.build(
        [
            ArrowPatch(ClopenSet(chain, 2, (0,)), one),  # range 1
            ArrowPatch(ClopenSet(chain, 2, (2,)), two),  # range 0
        ]
    )
    assert validate_graph(disjoint)
    collide = CompactGroupoidSet.build(
        [
            ArrowPatch(ClopenSet(chain, 2, (0,)), one),  # range 1
            ArrowPatch(ClopenSet(chain, 2, (3,)), two),  # range 1
        ]
    )
    assert not validate_graph(collide)


def cert_fixture(m):
    chain = Z(2, 4, 8)
    ntc = full_nested_chain(chain)
    C = CompactGroupoidSet.build(
        [ArrowPatch(ClopenSet(chain, 3, (7,)), GroupElement("lattice", (1,)))]
    )
    return chain, ntc, C, almost_af_certificate(C, m, ntc)


def test_certificate_worked_instance():
    chain, ntc, C, cert = cert_fixture(3)
    assert chain.modulus(cert.level) == 8
    assert cert.k_set.sorted_coords == [(7,)]
    assert len(cert.graphs) == 3
    movers = [g.patches[0].mover.coords for g in cert.graphs]
    assert movers == [(-7,), (-6,), (-5,)]
    ranges = [g.patches[0].range_set.labels for g in cert.graphs]
    assert ranges == [(0,), (1,), (2,)]
    assert cert.validation.all_passed
    assert cert.sigma(0) == {(7,): (0,)}
    assert cert.sigma(2) == {(7,): (2,)}


def test_certificate_m1_uses_coarser_level():
    chain, ntc, C, cert = cert_fixture(1)
    assert chain.modulus(cert.level) == 4
    assert cert.k_set.sorted_coords == [(3,)]
    assert len(cert.graphs) == 1


def test_certificate_counting_chain():
    _, _, _, cert = cert_fixture(3)
    v = cert.validation
    assert v.k_size <= v.piece_sum <= v.defect_bound
    assert v.defect_bound * v.m < v.tile_size


def test_certificate_precondition_violation():
    chain = Z(2, 4, 8)
    ntc = full_nested_chain(chain)
    inside = CompactGroupoidSet.build(
        [ArrowPatch(ClopenSet(chain, 3, (0,)), GroupElement("lattice", (1,)))]
    )
    with pytest.raises(PreconditionViolatedError) as ei:
        almost_af_certificate(inside, 1, ntc)
    assert ei.value.arrow == (3, 0, (1,))
    assert ei.value.level == 2


def test_certificate_level_exhausted():
    chain = Z(2, 4)
    ntc = full_nested_chain(chain)
    C = CompactGroupoidSet.build(
        [ArrowPatch(ClopenSet(chain, 2, (3,)), GroupElement("lattice", (1,)))]
    )
    # needs 2*1*m < q; m=4 would need q > 8, chain stops at 4
    with pytest.raises(LevelExhaustedError) as ei:
        almost_af_certificate(C, 4, ntc)
    assert ei.value.best_defect == Fraction(2, 4)


def test_certificate_rejects_identity_mover():
    chain = Z(2, 4)
    ntc = full_nested_chain(chain)
    C = CompactGroupoidSet.build(
        [ArrowPatch(ClopenSet(chain, 2, (3,)), GroupElement("lattice", (0,)))]
    )
    with pytest.raises(ValueError):
        almost_af_certificate(C, 1, ntc)


def test_certificate_multi_mover_sources_rejoin():
    chain = Z(2, 4, 8, 16, 32)
    ntc = full_nested_chain(chain)
    C = CompactGroupoidSet.build(
        [
            ArrowPatch(ClopenSet(chain, 5, (31,)), GroupElement("lattice", (1,))),
            ArrowPatch(ClopenSet(chain, 5, (30,)), GroupElement("lattice", (2,))),
        ]
    )
    cert = almost_af_certificate(C, 2, ntc)
    assert cert.validation.all_passed
    src = C.source_set().at_level(max(C.level, cert.level))
    for g in cert.graphs:
        assert g.source_set().equals(src)


def test_heisenberg_certificate():
    chain = SubgroupChain("heisenberg", 3, (2, 4, 8))
    ntc = full_nested_chain(chain)
    # base label: the cylinder of (0,3,0) at m=4, which (0,1,0) pushes out
    lab = chain.label(GroupElement("heisenberg", (0, 3, 0)), 2)
    C = CompactGroupoidSet.build(
        [ArrowPatch(ClopenSet(chain, 2, (lab,)), GroupElement("heisenberg", (0, 1, 0)))]
    )
    cert = almost_af_certificate(C, 1, ntc)
    assert isinstance(cert, GraphCertificate)
    assert cert.validation.all_passed
    assert chain.modulus(cert.level) == 4
