"""Run configuration.

A single JSON document describes the group, the congruence chain, and the
knobs; it is validated in full before any computation starts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import ConfigError
from .groups import GroupDescriptor, SubgroupChain

DEFAULT_CONFIG = {
    "group": {"kind": "lattice", "rank": 1},
    "chain": [2, 4, 8, 16],
}


@dataclass(frozen=True)
class RunConfig:
    group: GroupDescriptor
    chain: SubgroupChain
    depth: int
    epsilons: tuple
    mode: str
    size_cap: Optional[int]


def _build(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    unknown = set(doc) - {
        "group",
        "chain",
        "depth",
        "epsilons",
        "mode",
        "generators",
        "size_cap",
    }
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")

    gdoc = doc.get("group", DEFAULT_CONFIG["group"])
    kind = gdoc.get("kind")
    if kind not in ("lattice", "heisenberg"):
        raise ConfigError(f"group.kind must be 'lattice' or 'heisenberg', got {kind!r}")
    rank = gdoc.get("rank", 3 if kind == "heisenberg" else 1)
    if not isinstance(rank, int) or rank < 1:
        raise ConfigError(f"group.rank must be a positive integer, got {rank!r}")
    if kind == "heisenberg" and rank != 3:
        raise ConfigError("heisenberg groups have rank 3")

    generators = doc.get("generators")
    try:
        if kind == "heisenberg":
            group = GroupDescriptor.heisenberg(generators)
        else:
            group = GroupDescriptor.lattice(rank, generators)
    except Exception as e:
        raise ConfigError(f"bad generators: {e}") from e
    if not group.check_generates():
        raise ConfigError("the configured generators do not generate the group")

    moduli = doc.get("chain", DEFAULT_CONFIG["chain"])
    if not isinstance(moduli, list) or not moduli:
        raise ConfigError("chain must be a nonempty list of moduli")
    for m in moduli:
        if not isinstance(m, int) or m < 1:
            raise ConfigError(f"chain modulus {m!r} must be a positive integer")
    for a, b in zip(moduli, moduli[1:]):
        if b % a != 0:
            raise ConfigError(f"chain not nested: {a} does not divide {b}")
    chain = SubgroupChain(kind, rank, tuple(moduli))

    depth = doc.get("depth", chain.depth)
    if not isinstance(depth, int) or not 1 <= depth <= chain.depth:
        raise ConfigError(f"depth must lie in 1..{chain.depth}, got {depth!r}")

    raw_eps = doc.get("epsilons", [])
    if not isinstance(raw_eps, list):
        raise ConfigError("epsilons must be a list")
    epsilons = []
    for e in raw_eps:
        try:
            f = Fraction(e)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad epsilon {e!r}") from exc
        if f <= 0:
            raise ConfigError(f"epsilon {e!r} must be positive")
        epsilons.append(f)
    for a, b in zip(epsilons, epsilons[1:]):
        if b > a:
            raise ConfigError("epsilons must be non-increasing")

    mode = doc.get("mode", "direct")
    if mode not in ("direct", "prescreen"):
        raise ConfigError(f"mode must be 'direct' or 'prescreen', got {mode!r}")

    size_cap = doc.get("size_cap")
    if size_cap is not None and (not isinstance(size_cap, int) or size_cap < 1):
        raise ConfigError(f"size_cap must be a positive integer, got {size_cap!r}")

    return RunConfig(
        group=group,
        chain=chain,
        depth=depth,
        epsilons=tuple(epsilons),
        mode=mode,
        size_cap=size_cap,
    )


def load_config(path: Optional[str] = None) -> RunConfig:
    """Load and validate a config file; None gives the built-in default."""
    if path is None:
        return _build(dict(DEFAULT_CONFIG))
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    return _build(doc)
