"""Shared oracles and instance generators.

The oracles here are deliberately independent of the package internals:
the Heisenberg law is recomputed through literal 3x3 matrix products, and
boundaries through the complement identity rather than the neighbor test.
"""

from __future__ import annotations

import random

import pytest

from odotile.folner import FiniteElementSet


def heis_matrix(t):
    a, b, c = t
    return ((1, a, c), (0, 1, b), (0, 0, 1))


def mat_mul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def heis_mul_oracle(x, y):
    M = mat_mul(heis_matrix(x), heis_matrix(y))
    return (M[0][1], M[1][2], M[0][2])


def heis_inv_oracle(x):
    # solve M * N = I over the unitriangular matrices
    a, b, c = x
    return (-a, -b, a * b - c)


def mul_oracle(kind, x, y):
    if kind == "heisenberg":
        return heis_mul_oracle(x, y)
    return tuple(p + q for p, q in zip(x, y))


def inv_oracle(kind, x):
    if kind == "heisenberg":
        return heis_inv_oracle(x)
    return tuple(-p for p in x)


def product_oracle(kind, A, B):
    return {mul_oracle(kind, a, b) for a in A for b in B}


def boundary_oracle(kind, S, K):
    """SK minus the intersection of the left translates sK."""
    SK = product_oracle(kind, S, K)
    common = None
    for s in S:
        sK = {mul_oracle(kind, s, k) for k in K}
        common = sK if common is None else (common & sK)
    return SK - (common or set())


def symdiff_oracle(kind, K, s, side):
    K = set(K)
    if side == "left":
        moved = {mul_oracle(kind, s, k) for k in K}
    else:
        moved = {mul_oracle(kind, k, s) for k in K}
    return len(K ^ moved)


def rand_coords(rng: random.Random, rank: int, lo=-4, hi=4):
    return tuple(rng.randint(lo, hi) for _ in range(rank))


def rand_fes(rng: random.Random, kind: str, rank: int, size: int, lo=-4, hi=4):
    coords = {rand_coords(rng, rank, lo, hi) for _ in range(size * 3)}
    picked = sorted(coords)[:size]
    if not picked:
        picked = [(0,) * rank]
    return FiniteElementSet(kind, rank, frozenset(picked))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
