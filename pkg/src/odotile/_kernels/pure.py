"""Pure-Python set kernels.

These operate on raw coordinate tuples so that the compiled backend can
mirror them exactly.  Correctness reference for the whole kernel layer.
"""

from __future__ import annotations

from typing import Iterable

BACKEND_NAME = "pure"


def _mul(kind: str, a: tuple, b: tuple) -> tuple:
    if kind == "heisenberg":
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])
    return tuple(x + y for x, y in zip(a, b))


def _inv(kind: str, a: tuple) -> tuple:
    if kind == "heisenberg":
        return (-a[0], -a[1], -a[2] + a[0] * a[1])
    return tuple(-x for x in a)


def product(kind: str, A: Iterable[tuple], B: Iterable[tuple]) -> frozenset:
    """Pointwise product set {a*b : a in A, b in B}."""
    B = list(B)
    out = set()
    for a in A:
        for b in B:
            out.add(_mul(kind, a, b))
    return frozenset(out)


def boundary(kind: str, S: Iterable[tuple], K: Iterable[tuple]) -> frozenset:
    """S-boundary: points of SK whose S^-1-shifts meet both K and its complement."""
    Kset = set(K)
    S = list(S)
    SK = set()
    for s in S:
        for k in Kset:
            SK.add(_mul(kind, s, k))
    Sinv = [_inv(kind, s) for s in S]
    out = set()
    for x in SK:
        hit_in = False
        hit_out = False
        for si in Sinv:
            y = _mul(kind, si, x)
            if y in Kset:
                hit_in = True
            else:
                hit_out = True
            if hit_in and hit_out:
                out.add(x)
                break
    return frozenset(out)


def symdiff_count(kind: str, K: Iterable[tuple], s: tuple, side: str) -> int:
    """|K symdiff sK| (side="left") or |K symdiff Ks| (side="right")."""
    Kset = set(K)
    if side == "left":
        shifted = {_mul(kind, s, k) for k in Kset}
    elif side == "right":
        shifted = {_mul(kind, k, s) for k in Kset}
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return len(Kset ^ shifted)
