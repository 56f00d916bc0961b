"""Serialization helpers: stable JSON/CSV text and atomic file writes."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from hiermotif.hierarchy import GraphTopology
from hiermotif.sampling import DecorationRealization

SCHEMA_VERSION = 1

GRAPH_CSV_COLUMNS = ("u", "v", "kind", "creation_level")
SAMPLE_CSV_COLUMNS = ("u", "v", "kind")
DEGREE_CSV_COLUMNS = ("degree", "empirical_prob", "model_prob")
STRUCTURE_CSV_COLUMNS = ("k", "Q_k", "diam", "boundary_ratio")
TRAJECTORY_CSV_COLUMNS = ("k", "x", "dobrushin_S", "diameter_Y")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return obj


def to_json(doc: dict) -> str:
    body = {"schema_version": SCHEMA_VERSION, **doc}
    return json.dumps(_clean(body), indent=2, sort_keys=False) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def to_csv(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def write_atomic(path, text: str) -> Path:
    """Write via a temporary sibling file and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    try:
        with open(tmp, "x", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    return path


# ---------------------------------------------------------------------------
# documents

def graph_document(g: GraphTopology) -> dict:
    return {
        "motif": g.motif.id.value,
        "k": g.k,
        "node_count": g.node_count,
        "nodes": [
            {
                "id": i,
                "level_class": int(g.level_class[i]),
                "external": bool(g.external_index[i] > 0),
            }
            for i in range(g.node_count)
        ],
        "basic_edges": g.basic_edges.tolist(),
        "slots": [
            {"endpoints": [int(u), int(v)], "creation_level": int(lv)}
            for (u, v), lv in zip(g.slots, g.slot_level)
        ],
    }


def graph_rows(g: GraphTopology) -> list[dict]:
    rows = [{"u": int(u), "v": int(v), "kind": "basic"} for u, v in g.basic_edges]
    rows += [
        {"u": int(u), "v": int(v), "kind": "decoration", "creation_level": int(lv)}
        for (u, v), lv in zip(g.slots, g.slot_level)
    ]
    return rows


def realization_rows(g: GraphTopology, real: DecorationRealization) -> list[dict]:
    rows = [{"u": int(u), "v": int(v), "kind": "basic"} for u, v in g.basic_edges]
    rows += [{"u": int(u), "v": int(v), "kind": "decoration"} for u, v in g.slots[real.active]]
    return rows


def realization_document(g: GraphTopology, real: DecorationRealization) -> dict:
    return {
        "motif": g.motif.id.value,
        "k": g.k,
        "p": real.p,
        "seed": real.seed,
        "n_slots": g.n_slots,
        "n_active": real.n_active,
        "edges": [[r["u"], r["v"], r["kind"]] for r in realization_rows(g, real)],
    }
