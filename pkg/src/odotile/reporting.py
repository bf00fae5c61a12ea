"""Report extraction and canonical emission.

AF-chain data (levels, sizes, multiplicities, supernatural bookkeeping for
the rank-1 lattice), plus byte-stable JSON and aligned-text rendering for
the report, certificate, and measure types.  parse_report inverts the JSON
emission exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .folner import FiniteElementSet, folner_defect
from .groupoid import (
    ArrowPatch,
    CertificateValidation,
    CompactGroupoidSet,
    GraphCertificate,
)
from .groups import GroupDescriptor, GroupElement, SubgroupChain
from .measure import LevelMeasure, MeasureSolution
from .odometer import ClopenSet
from .tiling import NestedTileChain


@dataclass(frozen=True)
class AFChainReport:
    """Bratteli-style data for a nested tile chain."""

    group_kind: str
    group_rank: int
    moduli: tuple
    levels: tuple
    indices: tuple
    tile_sizes: tuple
    defects: tuple
    multiplicities: tuple
    supernatural: Optional[tuple]
    epsilons: tuple = ()
    mode: str = "direct"


def _factorize(n: int) -> dict:
    out: dict = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def supernatural_factorization(indices: Sequence[int]) -> tuple:
    """Prime bookkeeping for the limit of an index sequence.

    A prime dividing the final multiplicity keeps growing under the
    evident continuation of the chain and is marked "inf"; any other prime
    gets its exponent in the last index.
    """
    last = indices[-1]
    mult = indices[-1] // indices[-2] if len(indices) >= 2 else 1
    out = []
    for p, e in sorted(_factorize(last).items()):
        out.append((p, "inf" if mult % p == 0 else e))
    return tuple(out)


def af_chain_report(
    ntc: NestedTileChain, group: Optional[GroupDescriptor] = None
) -> AFChainReport:
    chain = ntc.chain
    if group is None:
        group = (
            GroupDescriptor.heisenberg()
            if chain.kind == "heisenberg"
            else GroupDescriptor.lattice(chain.rank)
        )
    indices = tuple(chain.index(n) for n in ntc.levels)
    tile_sizes = tuple(len(t.elements) for t in ntc.tiles)
    defects = []
    for t in ntc.tiles:
        per_gen = []
        for g in group.generators:
            per_gen.append(
                (
                    g.coords,
                    folner_defect(t.elements, g, "left"),
                    folner_defect(t.elements, g, "right"),
                )
            )
        defects.append(tuple(per_gen))
    multiplicities = tuple(
        tile_sizes[i + 1] // tile_sizes[i] for i in range(len(tile_sizes) - 1)
    )
    supernatural = (
        supernatural_factorization(indices)
        if chain.kind == "lattice" and chain.rank == 1
        else None
    )
    return AFChainReport(
        group_kind=chain.kind,
        group_rank=chain.rank,
        moduli=chain.moduli,
        levels=tuple(ntc.levels),
        indices=indices,
        tile_sizes=tile_sizes,
        defects=tuple(defects),
        multiplicities=multiplicities,
        supernatural=supernatural,
        epsilons=tuple(ntc.epsilons),
        mode=ntc.mode,
    )


# -- canonical JSON ------------------------------------------------------


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _chain_dict(chain: SubgroupChain) -> dict:
    return {"kind": chain.kind, "rank": chain.rank, "moduli": list(chain.moduli)}


def _chain_from(d: dict) -> SubgroupChain:
    return SubgroupChain(d["kind"], int(d["rank"]), tuple(int(m) for m in d["moduli"]))


def _report_to_dict(r: AFChainReport) -> dict:
    return {
        "type": "af_chain_report",
        "group": {"kind": r.group_kind, "rank": r.group_rank},
        "chain_moduli": list(r.moduli),
        "levels": list(r.levels),
        "indices": list(r.indices),
        "tile_sizes": list(r.tile_sizes),
        "defects": [
            [
                {"generator": list(g), "left": _frac(lf), "right": _frac(rt)}
                for g, lf, rt in level
            ]
            for level in r.defects
        ],
        "multiplicities": list(r.multiplicities),
        "supernatural": (
            None
            if r.supernatural is None
            else {str(p): ("inf" if e == "inf" else int(e)) for p, e in r.supernatural}
        ),
        "epsilons": [_frac(e) for e in r.epsilons],
        "mode": r.mode,
    }


def _report_from_dict(d: dict) -> AFChainReport:
    supernatural = d["supernatural"]
    if supernatural is not None:
        supernatural = tuple(
            sorted(
                (int(p), "inf" if e == "inf" else int(e))
                for p, e in supernatural.items()
            )
        )
    return AFChainReport(
        group_kind=d["group"]["kind"],
        group_rank=int(d["group"]["rank"]),
        moduli=tuple(int(m) for m in d["chain_moduli"]),
        levels=tuple(int(n) for n in d["levels"]),
        indices=tuple(int(n) for n in d["indices"]),
        tile_sizes=tuple(int(n) for n in d["tile_sizes"]),
        defects=tuple(
            tuple(
                (
                    tuple(int(c) for c in entry["generator"]),
                    Fraction(entry["left"]),
                    Fraction(entry["right"]),
                )
                for entry in level
            )
            for level in d["defects"]
        ),
        multiplicities=tuple(int(n) for n in d["multiplicities"]),
        supernatural=supernatural,
        epsilons=tuple(Fraction(e) for e in d["epsilons"]),
        mode=d["mode"],
    )


def _cert_to_dict(c: GraphCertificate) -> dict:
    return {
        "type": "graph_certificate",
        "chain": _chain_dict(c.chain),
        "level": c.level,
        "k_set": [list(row) for row in c.k_set.sorted_coords],
        "sigmas": [
            [[list(g), list(t)] for g, t in sigma] for sigma in c.sigmas
        ],
        "graphs": [
            {
                "level": gi.level,
                "patches": [
                    {
                        "mover": list(p.mover.coords),
                        "base_labels": list(p.base.labels),
                    }
                    for p in gi.patches
                ],
            }
            for gi in c.graphs
        ],
        "validation": {
            "source_equality": c.validation.source_equality,
            "ranges_disjoint": c.validation.ranges_disjoint,
            "graphs_valid": c.validation.graphs_valid,
            "inside_subgroupoid": c.validation.inside_subgroupoid,
            "k_size": c.validation.k_size,
            "piece_sum": c.validation.piece_sum,
            "defect_bound": c.validation.defect_bound,
            "tile_size": c.validation.tile_size,
            "m": c.validation.m,
        },
    }


def _cert_from_dict(d: dict) -> GraphCertificate:
    chain = _chain_from(d["chain"])
    k_set = FiniteElementSet(
        chain.kind, chain.rank, frozenset(tuple(int(c) for c in row) for row in d["k_set"])
    )
    sigmas = tuple(
        tuple(
            (tuple(int(c) for c in g), tuple(int(c) for c in t)) for g, t in sigma
        )
        for sigma in d["sigmas"]
    )
    graphs = []
    for gd in d["graphs"]:
        patches = [
            ArrowPatch(
                ClopenSet(
                    chain, int(gd["level"]), tuple(int(x) for x in p["base_labels"])
                ),
                GroupElement(chain.kind, tuple(int(c) for c in p["mover"])),
            )
            for p in gd["patches"]
        ]
        graphs.append(CompactGroupoidSet.build(patches))
    v = d["validation"]
    validation = CertificateValidation(
        source_equality=bool(v["source_equality"]),
        ranges_disjoint=bool(v["ranges_disjoint"]),
        graphs_valid=bool(v["graphs_valid"]),
        inside_subgroupoid=bool(v["inside_subgroupoid"]),
        k_size=int(v["k_size"]),
        piece_sum=int(v["piece_sum"]),
        defect_bound=int(v["defect_bound"]),
        tile_size=int(v["tile_size"]),
        m=int(v["m"]),
    )
    return GraphCertificate(
        chain=chain,
        level=int(d["level"]),
        k_set=k_set,
        sigmas=sigmas,
        graphs=tuple(graphs),
        validation=validation,
    )


def _measure_to_dict(s: MeasureSolution) -> dict:
    mu = s.measure
    return {
        "type": "measure_solution",
        "chain": _chain_dict(mu.chain),
        "level": mu.level,
        "masses": [_frac(v) for v in mu.masses],
        "unique": s.unique,
        "classes": [list(c) for c in s.classes],
        "trace": [[lab, list(row), moved] for lab, row, moved in s.trace],
    }


def _measure_from_dict(d: dict) -> MeasureSolution:
    chain = _chain_from(d["chain"])
    mu = LevelMeasure(chain, int(d["level"]), tuple(Fraction(v) for v in d["masses"]))
    return MeasureSolution(
        measure=mu,
        unique=bool(d["unique"]),
        classes=tuple(tuple(int(x) for x in c) for c in d["classes"]),
        trace=tuple(
            (int(lab), tuple(int(c) for c in row), int(moved))
            for lab, row, moved in d["trace"]
        ),
    )


Reportable = Union[AFChainReport, GraphCertificate, MeasureSolution, dict]


def _to_dict(report: Reportable) -> dict:
    if isinstance(report, AFChainReport):
        return _report_to_dict(report)
    if isinstance(report, GraphCertificate):
        return _cert_to_dict(report)
    if isinstance(report, MeasureSolution):
        return _measure_to_dict(report)
    if isinstance(report, dict):
        return report
    raise TypeError(f"cannot emit {type(report).__name__}")


def emit_report(report: Reportable, format: str = "json") -> bytes:
    """Canonical bytes: sorted keys, p/q rationals, coordinate arrays."""
    d = _to_dict(report)
    if format == "json":
        return (json.dumps(d, sort_keys=True, indent=2) + "\n").encode()
    if format == "text":
        return render_text(d).encode()
    raise ValueError(f"format must be 'json' or 'text', got {format!r}")


def parse_report(data) -> Reportable:
    """Inverse of the JSON emission."""
    if isinstance(data, bytes):
        data = data.decode()
    d = json.loads(data)
    kind = d.get("type")
    if kind == "af_chain_report":
        return _report_from_dict(d)
    if kind == "graph_certificate":
        return _cert_from_dict(d)
    if kind == "measure_solution":
        return _measure_from_dict(d)
    return d


# -- text rendering ------------------------------------------------------


def _table(rows: list) -> list:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    return [
        "  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    ]


def render_text(d: dict) -> str:
    kind = d.get("type")
    lines: list = []
    if kind == "af_chain_report":
        g = d["group"]
        lines.append(f"group: {g['kind']} rank {g['rank']}")
        lines.append(f"chain moduli: {d['chain_moduli']}")
        rows = [["level", "index", "tile", "defects (gen: left,right)"]]
        for lvl, idx, size, defs in zip(
            d["levels"], d["indices"], d["tile_sizes"], d["defects"]
        ):
            cell = "; ".join(
                f"{tuple(e['generator'])}: {e['left']},{e['right']}" for e in defs
            )
            rows.append([lvl, idx, size, cell])
        lines.extend(_table(rows))
        lines.append(f"multiplicities: {d['multiplicities']}")
        if d["supernatural"] is not None:
            parts = [f"{p}^{e}" for p, e in sorted(d["supernatural"].items())]
            lines.append("supernatural: " + " * ".join(parts))
        if d["epsilons"]:
            lines.append(f"epsilons: {d['epsilons']} mode: {d['mode']}")
    elif kind == "graph_certificate":
        lines.append(f"certificate level: {d['level']}")
        lines.append(f"K: {[tuple(r) for r in d['k_set']]}")
        for i, sigma in enumerate(d["sigmas"], start=1):
            pairs = ", ".join(f"{tuple(g)}->{tuple(t)}" for g, t in sigma)
            lines.append(f"sigma_{i}: {pairs}")
        for i, gi in enumerate(d["graphs"], start=1):
            for p in gi["patches"]:
                lines.append(
                    f"graph_{i}: mover {tuple(p['mover'])} on labels "
                    f"{p['base_labels']} at level {gi['level']}"
                )
        v = d["validation"]
        lines.append(
            "validation: source_equality={source_equality} "
            "ranges_disjoint={ranges_disjoint} graphs_valid={graphs_valid} "
            "inside_subgroupoid={inside_subgroupoid}".format(**v)
        )
        lines.append(
            f"counts: |K|={v['k_size']} piece_sum={v['piece_sum']} "
            f"bound={v['defect_bound']} |K_n|={v['tile_size']} m={v['m']}"
        )
    elif kind == "measure_solution":
        lines.append(f"measure level: {d['level']}")
        rows = [["label", "mass"]] + [
            [i, mass] for i, mass in enumerate(d["masses"])
        ]
        lines.extend(_table(rows))
        lines.append(f"unique: {d['unique']}")
        lines.append(f"classes: {d['classes']}")
        for lab, row, moved in d["trace"]:
            lines.append(f"trace: {lab} -{tuple(row)}-> {moved}")
    elif kind == "orbit":
        lines.append(
            f"orbit of the identity under {tuple(d['generator'])}, depth {d['depth']}"
        )
        rows = [["step"] + [f"level {n}" for n in range(1, d["depth"] + 1)]]
        for t, labels in enumerate(d["points"]):
            rows.append([t] + list(labels))
        lines.extend(_table(rows))
    elif kind == "tile_report":
        g = d["group"]
        lines.append(f"group: {g['kind']} rank {g['rank']}")
        rows = [["level", "index", "tile", "defects (gen: left,right)"]]
        for lvl, idx, size, defs in zip(
            d["levels"], d["indices"], d["tile_sizes"], d["defects"]
        ):
            cell = "; ".join(
                f"{tuple(e['generator'])}: {e['left']},{e['right']}" for e in defs
            )
            rows.append([lvl, idx, size, cell])
        lines.extend(_table(rows))
    elif kind == "refinement":
        lines.append(
            f"refine level {d['small_level']} tile inside level {d['big_level']}"
        )
        lines.append(f"centers: {[tuple(c) for c in d['centers']]}")
        for c, t in zip(d["centers"], d["translates"]):
            lines.append(f"translate by {tuple(c)}: {[tuple(r) for r in t]}")
        lines.append(f"refined tile: {[tuple(r) for r in d['refined_tile']]}")
        lines.append(f"inclusion check: {d['inclusion_check']}")
    elif kind == "measure_run":
        lines.append(render_text(d["solution"]).rstrip())
        rows = [["window level", "size", "average", "haar", "deviation"]]
        for r in d["birkhoff"]:
            rows.append(
                [r["window_level"], r["window_size"], r["average"], r["haar"], r["deviation"]]
            )
        lines.extend(_table(rows))
    else:
        lines.append(json.dumps(d, sort_keys=True, indent=2))
    return "\n".join(lines) + "\n"
