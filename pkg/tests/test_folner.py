"""Finite set calculus: products, boundaries, defects."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from odotile.errors import KindMismatchError, SizeCapExceededError
from odotile.folner import (
    FiniteElementSet,
    box,
    folner_defect,
    get_size_cap,
    interval,
    max_folner_defect,
    s_boundary,
    set_size_cap,
)
from odotile.groups import GroupDescriptor, GroupElement

from conftest import boundary_oracle, product_oracle, rand_fes, symdiff_oracle


def fes(kind, rank, coords):
    return FiniteElementSet.from_coords(kind, rank, coords)


def test_interval_boundary_worked_line():
    # S = {+-1}, K = {0..9}: boundary is {-1, 0, 9, 10}
    S = fes("lattice", 1, [(-1,), (1,)])
    K = interval(10)
    got = s_boundary(S, K)
    assert got.sorted_coords == [(-1,), (0,), (9,), (10,)]


def test_square_boundary_cross_pattern():
    S = fes("lattice", 2, [(1, 0), (-1, 0), (0, 1), (0, -1)])
    K = box(GroupDescriptor.lattice(2), 3)
    got = s_boundary(S, K)
    oracle = boundary_oracle("lattice", S.coords, K.coords)
    assert set(got.coords) == oracle
    # every edge cell of the 3x3 box is boundary, plus the four spikes... no:
    # the inner cell (1,1) is the only element of K with all neighbors in K
    inner = {c for c in K.coords if c not in got.coords}
    assert inner == {(1, 1)}


def test_interval_defect_exact():
    for q in (2, 4, 8, 16, 64):
        K = interval(q)
        s = GroupElement("lattice", (1,))
        assert folner_defect(K, s, side="right") == Fraction(2, q)
        assert folner_defect(K, s, side="left") == Fraction(2, q)


def test_heisenberg_cube_defects():
    K = box(GroupDescriptor.heisenberg(), 4)
    x = GroupElement("heisenberg", (1, 0, 0))
    y = GroupElement("heisenberg", (0, 1, 0))
    assert folner_defect(K, x, side="right") == Fraction(1, 2)
    assert folner_defect(K, y, side="right") == Fraction(17, 16)
    # brute-force confirmation
    assert folner_defect(K, x, side="right") == Fraction(
        symdiff_oracle("heisenberg", K.coords, x.coords, "right"), len(K)
    )
    assert folner_defect(K, y, side="right") == Fraction(
        symdiff_oracle("heisenberg", K.coords, y.coords, "right"), len(K)
    )


def test_max_defect_over_generators():
    K = interval(8)
    S = fes("lattice", 1, [(1,), (-1,)])
    assert max_folner_defect(K, S, side="right") == Fraction(2, 8)


@given(st.integers(min_value=1, max_value=30), st.integers(min_value=-6, max_value=6))
def test_interval_symdiff_formula(q, shift):
    K = interval(q)
    s = GroupElement("lattice", (shift,))
    expect = Fraction(2 * min(abs(shift), q), q)
    assert folner_defect(K, s, side="right") == expect


sets = st.sampled_from(["lattice", "heisenberg"])


@given(
    sets,
    st.integers(min_value=1, max_value=9999),
    st.integers(min_value=2, max_value=10),
    st.integers(min_value=1, max_value=4),
)
@settings(max_examples=80, deadline=None)
def test_boundary_matches_complement_identity(kind, seed, ksize, ssize):
    import random

    rank = 3 if kind == "heisenberg" else 2
    rng = random.Random(seed)
    K = rand_fes(rng, kind, rank, ksize)
    S = rand_fes(rng, kind, rank, ssize, lo=-2, hi=2)
    got = s_boundary(S, K)
    assert set(got.coords) == boundary_oracle(kind, S.coords, K.coords)


@given(
    sets,
    st.integers(min_value=1, max_value=9999),
    st.integers(min_value=1, max_value=12),
)
@settings(max_examples=80, deadline=None)
def test_product_matches_oracle(kind, seed, size):
    import random

    rank = 3 if kind == "heisenberg" else 1
    rng = random.Random(seed)
    A = rand_fes(rng, kind, rank, size)
    B = rand_fes(rng, kind, rank, max(1, size // 2))
    got = A.product(B)
    assert set(got.coords) == product_oracle(kind, A.coords, B.coords)


def test_boundary_monotone_in_s():
    K = fes("lattice", 1, [(i,) for i in range(6)])
    S1 = fes("lattice", 1, [(1,)])
    S2 = fes("lattice", 1, [(1,), (2,)])
    assert s_boundary(S1, K).is_subset(s_boundary(S2, K))


def test_set_algebra_and_translate():
    A = fes("lattice", 1, [(0,), (1,)])
    B = fes("lattice", 1, [(1,), (2,)])
    assert A.union(B).sorted_coords == [(0,), (1,), (2,)]
    assert A.intersection(B).sorted_coords == [(1,)]
    assert A.difference(B).sorted_coords == [(0,)]
    assert A.symmetric_difference(B).sorted_coords == [(0,), (2,)]
    g = GroupElement("lattice", (5,))
    assert A.translate(g, side="left").sorted_coords == [(5,), (6,)]


def test_translate_sides_differ_on_heisenberg():
    A = fes("heisenberg", 3, [(1, 2, 0)])
    g = GroupElement("heisenberg", (0, 1, 0))
    left = A.translate(g, side="left")
    right = A.translate(g, side="right")
    assert left.sorted_coords == [(1, 3, 0)]
    assert right.sorted_coords == [(1, 3, 1)]


def test_inverse_set():
    A = fes("heisenberg", 3, [(1, 1, 0)])
    assert A.inverse().sorted_coords == [(-1, -1, 1)]


def test_kind_mismatch():
    A = fes("lattice", 1, [(0,)])
    B = fes("lattice", 2, [(0, 0)])
    with pytest.raises(KindMismatchError):
        A.union(B)


def test_size_cap_guards_product():
    old = set_size_cap(10)
    try:
        A = fes("lattice", 1, [(i,) for i in range(5)])
        with pytest.raises(SizeCapExceededError):
            A.product(A)  # 5 * 5 = 25 candidate rows > 10
        assert get_size_cap() == 10
    finally:
        set_size_cap(old)


def test_box_shapes():
    b = box(GroupDescriptor.lattice(2), 3)
    assert len(b) == 9
    h = box(GroupDescriptor.heisenberg(), 2)
    assert len(h) == 8
    assert (0, 0, 0) in h.coords and (1, 1, 1) in h.coords
