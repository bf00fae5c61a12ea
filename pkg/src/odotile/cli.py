"""Command-line front door.

Subcommands: tile, refine, odometer, cert, measure, report.  Global flags:
--config PATH (JSON run configuration), --format json|text, --seed INT
(reserved for randomized instance generation; core algorithms never
consume randomness).  Exit codes: 0 success, 2 validation failure,
3 chain/level exhausted, 4 size cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import folner
from .config import RunConfig, load_config
from .errors import (
    EXIT_EXHAUSTED,
    EXIT_OK,
    EXIT_SIZE_CAP,
    EXIT_VALIDATION,
    ChainExhaustedError,
    ConfigError,
    LevelExhaustedError,
    OdotileError,
    SizeCapExceededError,
)
from .folner import FiniteElementSet, folner_defect
from .groupoid import ArrowPatch, CompactGroupoidSet, almost_af_certificate
from .groups import GroupElement
from .measure import birkhoff_average, solve_invariant_measure
from .odometer import ClopenSet, LevelVector, identity_point, orbit
from .reporting import af_chain_report, emit_report, _measure_to_dict
from .tiling import (
    box_tile_source,
    full_nested_chain,
    refine_tile,
    refinement_centers,
    select_nested_chain,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="odotile",
        description="Exact Folner tilings, odometers, and groupoid certificates.",
    )
    parser.add_argument("--config", metavar="PATH", help="JSON run configuration")
    parser.add_argument(
        "--format", choices=("json", "text"), default="text", help="output format"
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for randomized instance generation (core algorithms are deterministic)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("tile", help="per-level tile sizes and defect tables")

    p_refine = sub.add_parser("refine", help="refine a coarse tile inside a finer one")
    p_refine.add_argument("--small-level", type=int, required=True)
    p_refine.add_argument("--big-level", type=int, required=True)

    p_odo = sub.add_parser("odometer", help="orbit of the identity point")
    p_odo.add_argument("--steps", type=int, default=8)
    p_odo.add_argument("--depth", type=int, default=None)
    p_odo.add_argument(
        "--generator",
        default=None,
        help="comma-separated coordinates, e.g. 1 or 1,0,0",
    )

    p_cert = sub.add_parser("cert", help="almost-AF certificate for a compact set")
    p_cert.add_argument("--m", type=int, required=True, help="graph multiplicity")
    p_cert.add_argument(
        "--compact-set",
        required=True,
        metavar="FILE",
        help="one patch per line: level label mover-coordinates",
    )

    p_measure = sub.add_parser("measure", help="solve the invariant measure")
    p_measure.add_argument("--level", type=int, required=True)

    sub.add_parser("report", help="AF-chain report for the configured chain")
    return parser


def _nested_chain(cfg: RunConfig):
    if cfg.epsilons:
        S = FiniteElementSet.from_elements(cfg.group.generators)
        return select_nested_chain(cfg.chain, S, cfg.epsilons, mode=cfg.mode)
    return full_nested_chain(cfg.chain)


def _emit(obj, fmt: str) -> None:
    sys.stdout.write(emit_report(obj, fmt).decode())


def cmd_tile(cfg: RunConfig, args) -> dict:
    source = box_tile_source(cfg.chain)
    levels, indices, sizes, defects = [], [], [], []
    for n in range(1, cfg.chain.depth + 1):
        t = source(n)
        levels.append(n)
        indices.append(cfg.chain.index(n))
        sizes.append(len(t.elements))
        defects.append(
            [
                {
                    "generator": list(g.coords),
                    "left": str(folner_defect(t.elements, g, "left")),
                    "right": str(folner_defect(t.elements, g, "right")),
                }
                for g in cfg.group.generators
            ]
        )
    return {
        "type": "tile_report",
        "group": {"kind": cfg.group.kind, "rank": cfg.group.rank},
        "levels": levels,
        "indices": indices,
        "tile_sizes": sizes,
        "defects": defects,
    }


def cmd_refine(cfg: RunConfig, args) -> dict:
    source = box_tile_source(cfg.chain)
    small = source(args.small_level)
    big = source(args.big_level)
    refined = refine_tile(small, big, check_inclusion=True)
    centers = refinement_centers(small, big)
    translates = [
        sorted(small.elements.translate(GroupElement(cfg.chain.kind, l), "right").coords)
        for l in centers.sorted_coords
    ]
    return {
        "type": "refinement",
        "small_level": args.small_level,
        "big_level": args.big_level,
        "centers": [list(c) for c in centers.sorted_coords],
        "translates": [[list(row) for row in t] for t in translates],
        "refined_tile": [list(row) for row in refined.elements.sorted_coords],
        "inclusion_check": "pass",
    }


def _parse_generator(cfg: RunConfig, text) -> GroupElement:
    if text is None:
        coords = tuple(1 if i == 0 else 0 for i in range(cfg.group.rank))
        return GroupElement(cfg.group.kind, coords)
    try:
        coords = tuple(int(c) for c in str(text).split(","))
    except ValueError as e:
        raise ConfigError(f"bad generator {text!r}") from e
    if len(coords) != cfg.group.rank:
        raise ConfigError(
            f"generator needs {cfg.group.rank} coordinates, got {len(coords)}"
        )
    return GroupElement(cfg.group.kind, coords)


def cmd_odometer(cfg: RunConfig, args) -> dict:
    depth = args.depth if args.depth is not None else cfg.depth
    g = _parse_generator(cfg, args.generator)
    x0 = identity_point(cfg.chain, depth)
    points = orbit(g, x0, args.steps)
    return {
        "type": "orbit",
        "generator": list(g.coords),
        "depth": depth,
        "steps": args.steps,
        "points": [list(p.labels) for p in points],
    }


def _parse_compact_set(cfg: RunConfig, path: str) -> CompactGroupoidSet:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read compact set {path}: {e}") from e
    patches = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            numbers = [int(p) for p in parts]
        except ValueError as e:
            raise ConfigError(f"line {lineno}: non-integer field") from e
        if len(numbers) != 2 + cfg.chain.rank:
            raise ConfigError(
                f"line {lineno}: need level, label, and {cfg.chain.rank} "
                f"mover coordinates"
            )
        level, label = numbers[0], numbers[1]
        mover = GroupElement(cfg.chain.kind, tuple(numbers[2:]))
        patches.append(
            ArrowPatch(ClopenSet(cfg.chain, level, (label,)), mover)
        )
    if not patches:
        raise ConfigError(f"compact set {path} holds no patches")
    return CompactGroupoidSet.build(patches)


def cmd_cert(cfg: RunConfig, args):
    C = _parse_compact_set(cfg, args.compact_set)
    ntc = _nested_chain(cfg)
    return almost_af_certificate(C, args.m, ntc)


def cmd_measure(cfg: RunConfig, args) -> dict:
    generators = FiniteElementSet.from_elements(cfg.group.generators)
    solution = solve_invariant_measure(args.level, generators, cfg.chain)
    f = LevelVector.indicator(cfg.chain, args.level, [0])
    haar = Fraction(1, cfg.chain.index(args.level))
    x0 = identity_point(cfg.chain, max(args.level, cfg.depth))
    source = box_tile_source(cfg.chain)
    rows = []
    for n in range(1, cfg.chain.depth + 1):
        window = source(n).elements
        avg = birkhoff_average(f, window, x0)
        rows.append(
            {
                "window_level": n,
                "window_size": len(window),
                "average": str(avg),
                "haar": str(haar),
                "deviation": str(abs(avg - haar)),
            }
        )
    return {
        "type": "measure_run",
        "solution": _measure_to_dict(solution),
        "birkhoff": rows,
    }


def cmd_report(cfg: RunConfig, args):
    return af_chain_report(_nested_chain(cfg), cfg.group)


_COMMANDS = {
    "tile": cmd_tile,
    "refine": cmd_refine,
    "odometer": cmd_odometer,
    "cert": cmd_cert,
    "measure": cmd_measure,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if cfg.size_cap is not None:
            folner.set_size_cap(cfg.size_cap)
        result = _COMMANDS[args.command](cfg, args)
        _emit(result, args.format)
        return EXIT_OK
    except SizeCapExceededError as e:
        print(f"size cap exceeded: {e}", file=sys.stderr)
        return EXIT_SIZE_CAP
    except (ChainExhaustedError, LevelExhaustedError) as e:
        print(f"exhausted: {e}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (OdotileError, ValueError) as e:
        print(f"validation failure: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
