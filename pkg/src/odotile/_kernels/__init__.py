"""Set-kernel backend selection.

The compiled extension handles the hot paths when it imported cleanly and
the inputs fit its guards (small rank, coordinates within the int64 comfort
zone, bounded row counts); everything else runs on the pure-Python
reference implementation.  Set ODOTILE_BACKEND=pure or =cython to force a
backend; forcing cython raises at import when the extension is missing.
"""

from __future__ import annotations

import os
from typing import Iterable

from . import pure

INT64_COORD_LIMIT = 1 << 20
_PRODUCT_ROW_CAP = 1 << 22
_KIND_CODES = {"lattice": 0, "heisenberg": 1}

try:
    from . import _setkernels as _compiled
except ImportError:
    _compiled = None

_forced = os.environ.get("ODOTILE_BACKEND", "").strip().lower()
if _forced == "pure":
    _compiled = None
elif _forced == "cython" and _compiled is None:
    raise ImportError(
        "ODOTILE_BACKEND=cython but the compiled kernels are not importable; "
        "rebuild the package or unset the variable"
    )
elif _forced not in ("", "pure", "cython"):
    raise ImportError(f"ODOTILE_BACKEND must be 'pure' or 'cython', got {_forced!r}")

ACTIVE_BACKEND = "cython" if _compiled is not None else "pure"


def _eligible(rows: list, cap_mate: int = 1) -> bool:
    if not rows:
        return False
    rank = len(rows[0])
    if rank > 8:
        return False
    return len(rows) * cap_mate <= _PRODUCT_ROW_CAP


def product(kind: str, A: Iterable[tuple], B: Iterable[tuple]) -> frozenset:
    A = list(A)
    B = list(B)
    if not A or not B:
        return frozenset()
    if _compiled is not None and _eligible(A, len(B)):
        try:
            return _compiled.product(_KIND_CODES[kind], A, B)
        except _compiled.CoordLimitExceeded:
            pass
    return pure.product(kind, A, B)


def boundary(kind: str, S: Iterable[tuple], K: Iterable[tuple]) -> frozenset:
    S = list(S)
    K = list(K)
    if not S or not K:
        return frozenset()
    if _compiled is not None and _eligible(S, len(K)):
        try:
            return _compiled.boundary(_KIND_CODES[kind], S, K)
        except _compiled.CoordLimitExceeded:
            pass
    return pure.boundary(kind, S, K)


def symdiff_count(kind: str, K: Iterable[tuple], s: tuple, side: str) -> int:
    K = list(K)
    if not K:
        return 0
    if _compiled is not None and _eligible(K):
        try:
            return _compiled.symdiff_count(_KIND_CODES[kind], K, tuple(s), side)
        except _compiled.CoordLimitExceeded:
            pass
    return pure.symdiff_count(kind, K, tuple(s), side)
