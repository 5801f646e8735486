"""Rendering of classification records, graphs, Selmer groups and sweeps.

Square classes are written as their signed square-free representatives.
Integers outside the IEEE double range (|k| > 2^53) become decimal strings
so that every JSON consumer reads them back exactly.

CSV columns for ``scan`` are frozen, in this order::

    n, n_mod_24, s_rank_pi_3, s_rank_2pi_3, non_pi3_cn, non_2pi3_cn, non_tn, fired

``fired`` joins the criterion ids whose graph condition holds with ``;``.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Optional

from .arith import SquareClass
from .criteria import ClassificationRecord, ConjectureReport, CriterionVerdict, SweepSummary
from .descent import SelmerReport, Theta
from .gf2 import rank_f2
from .graph import ResidueGraph, even_partition_count, is_odd_graph
from .witness import WitnessPoint

__all__ = [
    "SCAN_COLUMNS",
    "record_to_dict",
    "record_json",
    "record_jsonl",
    "record_text",
    "scan_row",
    "scan_csv",
    "scan_text",
    "graph_to_dict",
    "graph_text",
    "graph_csv",
    "selmer_to_dict",
    "selmer_text",
    "selmer_csv",
    "witness_to_dict",
    "witness_text",
    "verify_to_dict",
    "verify_text",
    "verify_csv",
    "dump_json",
]

SCAN_COLUMNS = (
    "n",
    "n_mod_24",
    "s_rank_pi_3",
    "s_rank_2pi_3",
    "non_pi3_cn",
    "non_2pi3_cn",
    "non_tn",
    "fired",
)

_SAFE = 1 << 53


def _int(k: int) -> Any:
    return k if -_SAFE <= k <= _SAFE else str(k)


def _frac(q) -> str:
    return str(q)


def _classes(ds: Iterable[SquareClass]) -> list:
    return [_int(d.representative()) for d in ds]


def dump_json(obj: Any, *, pretty: bool = True) -> str:
    if pretty:
        return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n"


def _to_csv(header: Iterable[str], rows: Iterable[Iterable[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------- selmer


def selmer_to_dict(r: SelmerReport) -> dict:
    return {
        "s_prime": _classes(r.s_prime),
        "s": _classes(r.s),
        "rk2_s_prime": r.rk2_s_prime,
        "rk2_s": r.rk2_s,
        "s_rank": r.s_rank,
    }


def selmer_text(r: SelmerReport) -> str:
    sp = ", ".join(str(d.representative()) for d in r.s_prime)
    s = ", ".join(str(d.representative()) for d in r.s)
    return (
        f"{r.curve}\n"
        f"  S'     = {{{sp}}}  (rank {r.rk2_s_prime})\n"
        f"  S      = {{{s}}}  (rank {r.rk2_s})\n"
        f"  s-rank = {r.s_rank}\n"
    )


def selmer_csv(r: SelmerReport) -> str:
    rows = [("s_prime", d.representative()) for d in r.s_prime]
    rows += [("s", d.representative()) for d in r.s]
    return _to_csv(("group", "class"), rows)


# ---------------------------------------------------------------- witness


def witness_to_dict(w: Optional[WitnessPoint]) -> Optional[dict]:
    if w is None:
        return None
    return {"theta": w.curve.theta.value, "x": _frac(w.x), "y": _frac(w.y)}


def witness_text(w: Optional[WitnessPoint], height: int) -> str:
    if w is None:
        return f"no point up to height {height}\n"
    return f"{w}\n"


# ---------------------------------------------------------------- records


def _verdict_to_dict(v: CriterionVerdict) -> dict:
    return {
        "id": v.id.value,
        "kind": v.kind.value,
        "graph_prediction": v.graph_prediction,
        "descent_truth": v.descent_truth,
        "agree": v.agree,
        "reading": v.reading.value if v.reading else None,
    }


def record_to_dict(rec: ClassificationRecord) -> dict:
    return {
        "n": _int(rec.n),
        "factors": [_int(p) for p in rec.factors],
        "n_mod_24": rec.n_mod_24,
        "curves": {t.value: selmer_to_dict(rec.reports[t]) for t in Theta},
        "non_pi3_cn": rec.non_pi3_cn,
        "non_2pi3_cn": rec.non_2pi3_cn,
        "non_tn": rec.non_tn,
        "tn_witness": witness_to_dict(rec.tn_witness),
        "criteria": [_verdict_to_dict(v) for v in rec.criteria],
    }


def record_json(rec: ClassificationRecord) -> str:
    return dump_json(record_to_dict(rec))


def record_jsonl(rec: ClassificationRecord) -> str:
    return dump_json(record_to_dict(rec), pretty=False)


def record_text(rec: ClassificationRecord) -> str:
    factors = " * ".join(str(p) for p in rec.factors)
    lines = [f"n = {rec.n} = {factors}   (n mod 24 = {rec.n_mod_24})"]
    for t in Theta:
        r = rec.reports[t]
        lines.append(
            f"  {r.curve}: rk2 S' = {r.rk2_s_prime}, rk2 S = {r.rk2_s}, s-rank = {r.s_rank}"
        )
    lines.append(f"  non-pi/3-congruent:  {rec.non_pi3_cn}")
    lines.append(f"  non-2pi/3-congruent: {rec.non_2pi3_cn}")
    lines.append(f"  non-tiling:          {rec.non_tn}")
    w = rec.tn_witness
    if w is not None:
        lines.append(f"  tiling witness: ({w.x}, +-{abs(w.y)}) on {w.curve}")
    elif rec.non_tn != "certified" and rec.witness_height > 0:
        lines.append(f"  tiling witness: none up to height {rec.witness_height}")
    if rec.fired:
        lines.append("  graph criteria fired: " + ", ".join(c.value for c in rec.fired))
    bad = [v for v in rec.criteria if not v.agree]
    for v in bad:
        lines.append(
            f"  DISAGREEMENT {v.id.value}: graph={v.graph_prediction} descent={v.descent_truth}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- scan


def scan_row(rec: ClassificationRecord) -> tuple:
    return (
        rec.n,
        rec.n_mod_24,
        rec.reports[Theta.PI_3].s_rank,
        rec.reports[Theta.TWO_PI_3].s_rank,
        rec.non_pi3_cn,
        rec.non_2pi3_cn,
        rec.non_tn,
        ";".join(c.value for c in rec.fired),
    )


def scan_csv(recs: Iterable[ClassificationRecord], header: bool = True) -> str:
    rows = [scan_row(r) for r in recs]
    text = _to_csv(SCAN_COLUMNS, rows)
    return text if header else text.split("\n", 1)[1]


def scan_text(recs: Iterable[ClassificationRecord]) -> str:
    rows = [tuple(str(x) for x in scan_row(r)) for r in recs]
    widths = [max([len(c)] + [len(row[i]) for row in rows]) for i, c in enumerate(SCAN_COLUMNS)]
    out = ["  ".join(c.ljust(w) for c, w in zip(SCAN_COLUMNS, widths)).rstrip()]
    for row in rows:
        out.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- graphs


def graph_to_dict(g: ResidueGraph) -> dict:
    return {
        "graph": g.source,
        "vertices": list(g.labels),
        "arcs": [list(a) for a in g.arcs()],
        "laplace_rank": rank_f2(g.laplacian()),
        "odd": is_odd_graph(g),
        "even_partitions": even_partition_count(g),
    }


def graph_text(g: ResidueGraph) -> str:
    d = graph_to_dict(g)
    arcs = ", ".join(f"{a}->{b}" for a, b in d["arcs"]) or "none"
    return (
        f"{d['graph']}\n"
        f"  vertices: {', '.join(str(v) for v in d['vertices'])}\n"
        f"  arcs: {arcs}\n"
        f"  Laplace rank over F2: {d['laplace_rank']} of {g.size}\n"
        f"  odd: {'yes' if d['odd'] else 'no'}\n"
        f"  even partitions: {d['even_partitions']}\n"
    )


def graph_csv(g: ResidueGraph) -> str:
    return _to_csv(("source", "target"), g.arcs())


# ---------------------------------------------------------------- verify


def verify_to_dict(s: SweepSummary, conj: ConjectureReport) -> dict:
    ids = sorted(s.applicable, key=lambda c: list(type(c)).index(c))
    return {
        "lo": s.lo,
        "hi": s.hi,
        "ok": s.ok,
        "criteria": [
            {"id": c.value, "applicable": s.applicable[c], "agree": s.agree[c]} for c in ids
        ],
        "disagreements": [
            {
                "n": d.n,
                "id": d.id.value,
                "kind": d.kind.value,
                "graph_prediction": d.graph_prediction,
                "descent_truth": d.descent_truth,
            }
            for d in s.disagreements
        ],
        "readings": [
            {
                "id": cid.value,
                "reading": r.value,
                "applicable": s.reading_applicable[(cid, r)],
                "disagreements": len(s.reading_disagreements.get((cid, r), [])),
            }
            for cid, r in sorted(s.reading_applicable, key=lambda k: (k[0].value, k[1].value))
        ],
        "conjecture": {
            "non_pi3_cn": len(conj.non_pi3),
            "non_2pi3_cn": len(conj.non_2pi3),
            "non_tn": len(conj.non_tn),
            "anomalies_pi3": list(conj.anomalies_pi3),
            "anomalies_2pi3": list(conj.anomalies_2pi3),
        },
    }


def verify_text(s: SweepSummary, conj: ConjectureReport, max_listed: int = 20) -> str:
    d = verify_to_dict(s, conj)
    out = [f"verify {s.lo}..{s.hi}"]
    for row in d["criteria"]:
        mark = "" if row["applicable"] == row["agree"] else "   <-- disagreements"
        out.append(f"  {row['id']:<12} applicable={row['applicable']:<5} agree={row['agree']}{mark}")
    if d["readings"]:
        out.append("  readings:")
        for row in d["readings"]:
            out.append(
                f"    {row['id']:<12} {row['reading']:<9} applicable={row['applicable']:<5}"
                f" disagreements={row['disagreements']}"
            )
    if s.disagreements:
        out.append(f"  {len(s.disagreements)} disagreement(s):")
        for x in d["disagreements"][:max_listed]:
            out.append(
                f"    n={x['n']} {x['id']} graph={x['graph_prediction']} descent={x['descent_truth']}"
            )
        if len(s.disagreements) > max_listed:
            out.append(f"    ... {len(s.disagreements) - max_listed} more")
    c = d["conjecture"]
    out.append(
        f"  certified: non-pi/3-CN {c['non_pi3_cn']}, non-2pi/3-CN {c['non_2pi3_cn']},"
        f" non-TN {c['non_tn']}"
    )
    out.append(
        f"  conjecture anomalies: pi/3 {c['anomalies_pi3'] or 'none'}, 2pi/3 {c['anomalies_2pi3'] or 'none'}"
    )
    out.append("  result: " + ("OK" if s.ok else "DISAGREEMENT"))
    return "\n".join(out) + "\n"


def verify_csv(s: SweepSummary) -> str:
    ids = sorted(s.applicable, key=lambda c: list(type(c)).index(c))
    return _to_csv(("criterion", "applicable", "agree"), ((c.value, s.applicable[c], s.agree[c]) for c in ids))
