"""Backend agreement: compiled kernels against the pure reference."""

from __future__ import annotations

import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from odotile import _kernels
from odotile._kernels import pure

compiled = pytest.mark.skipif(
    _kernels._compiled is None, reason="compiled kernels not built"
)

kinds = st.sampled_from(["lattice", "heisenberg"])


def rows(rng, kind, n, lo=-5, hi=5):
    rank = 3 if kind == "heisenberg" else 2
    return list({tuple(rng.randint(lo, hi) for _ in range(rank)) for _ in range(n)})


@compiled
@given(kinds, st.integers(min_value=1, max_value=99999))
@settings(max_examples=120, deadline=None)
def test_product_backends_agree(kind, seed):
    rng = random.Random(seed)
    A = rows(rng, kind, rng.randint(1, 15))
    B = rows(rng, kind, rng.randint(1, 15))
    code = _kernels._KIND_CODES[kind]
    assert _kernels._compiled.product(code, A, B) == pure.product(kind, A, B)


@compiled
@given(kinds, st.integers(min_value=1, max_value=99999))
@settings(max_examples=120, deadline=None)
def test_boundary_backends_agree(kind, seed):
    rng = random.Random(seed)
    S = rows(rng, kind, rng.randint(1, 5), lo=-2, hi=2)
    K = rows(rng, kind, rng.randint(1, 20))
    code = _kernels._KIND_CODES[kind]
    assert _kernels._compiled.boundary(code, S, K) == pure.boundary(kind, S, K)


@compiled
@given(kinds, st.integers(min_value=1, max_value=99999), st.sampled_from(["left", "right"]))
@settings(max_examples=120, deadline=None)
def test_symdiff_backends_agree(kind, seed, side):
    rng = random.Random(seed)
    K = rows(rng, kind, rng.randint(1, 25))
    s = rows(rng, kind, 1, lo=-3, hi=3)[0]
    code = _kernels._KIND_CODES[kind]
    got = _kernels._compiled.symdiff_count(code, K, s, side)
    assert got == pure.symdiff_count(kind, K, s, side)


def test_dispatcher_empty_inputs():
    assert _kernels.product("lattice", [], [(1,)]) == frozenset()
    assert _kernels.boundary("lattice", [(1,)], []) == frozenset()
    assert _kernels.symdiff_count("lattice", [], (1,), "left") == 0


@compiled
def test_dispatcher_falls_back_on_huge_coordinates():
    big = 1 << 40  # beyond the compiled guard, fine for python ints
    K = [(0,), (big,)]
    out = _kernels.product("lattice", K, [(1,)])
    assert out == frozenset({(1,), (big + 1,)})
    assert _kernels.symdiff_count("lattice", K, (1,), "right") == 4


@compiled
def test_compiled_guard_raises_directly():
    big = 1 << 40
    with pytest.raises(_kernels._compiled.CoordLimitExceeded):
        _kernels._compiled.product(0, [(big,)], [(1,)])


def test_high_rank_goes_pure():
    # rank 9 exceeds the compiled guard; dispatcher must still answer
    a = tuple(range(9))
    out = _kernels.product("lattice", [a], [a])
    assert out == frozenset({tuple(2 * x for x in a)})


def test_env_override_pure(tmp_path):
    script = (
        "import odotile; "
        "assert odotile.ACTIVE_BACKEND == 'pure', odotile.ACTIVE_BACKEND; "
        "from odotile.folner import interval, s_boundary, FiniteElementSet; "
        "S = FiniteElementSet.from_coords('lattice', 1, [(1,), (-1,)]); "
        "out = s_boundary(S, interval(10)); "
        "assert out.sorted_coords == [(-1,), (0,), (9,), (10,)]"
    )
    proc = subprocess.run(
        [sys.executable, "-c", script],
        env={"ODOTILE_BACKEND": "pure", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr


def test_env_override_rejects_unknown():
    proc = subprocess.run(
        [sys.executable, "-c", "import odotile"],
        env={"ODOTILE_BACKEND": "fortran", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
    )
    assert proc.returncode != 0
    assert "ODOTILE_BACKEND" in proc.stderr


def test_heisenberg_law_in_both_backends():
    # c-coordinate twist: (1,2,0).(0,3,0) = (1,5,3)
    want = frozenset({(1, 5, 3)})
    assert _kernels.product("heisenberg", [(1, 2, 0)], [(0, 3, 0)]) == want
    assert pure.product("heisenberg", [(1, 2, 0)], [(0, 3, 0)]) == want
