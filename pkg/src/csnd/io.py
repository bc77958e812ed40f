"""File formats: kernel JSON/CSV, point configurations, edge lists, presentations.

JSON output is canonical: sorted keys and floats rounded to 12 significant
digits, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .embedding import PointConfig
from .errors import InvariantViolation
from .graphs import Graph
from .groups import INF, GroupPresentation
from .kernels import KernelMatrix


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        if x == 0:
            return 0.0
        return float(f"{x:.12g}")
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def _read(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


# kernels


def kernel_to_dict(K: KernelMatrix) -> dict:
    rows = K.int_rows() if K.is_integral else K.entries.tolist()
    return {"labels": list(K.labels), "matrix": rows}


def kernel_from_dict(obj: dict) -> KernelMatrix:
    try:
        labels, matrix = obj["labels"], obj["matrix"]
    except (KeyError, TypeError):
        raise InvariantViolation('kernel JSON needs "labels" and "matrix"') from None
    return KernelMatrix(tuple(labels), np.asarray(matrix, dtype=float))


def kernel_from_csv(text: str) -> KernelMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise InvariantViolation("empty CSV kernel")
    labels = [c.strip() for c in rows[0]]
    matrix = [[float(c) for c in r] for r in rows[1:]]
    return KernelMatrix(tuple(labels), np.asarray(matrix, dtype=float))


def kernel_to_csv(K: KernelMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(K.labels)
    for row in kernel_to_dict(K)["matrix"]:
        w.writerow(row)
    return buf.getvalue()


def load_kernel(path: str | Path) -> KernelMatrix:
    text = _read(path)
    if str(path).lower().endswith(".csv"):
        return kernel_from_csv(text)
    return kernel_from_dict(json.loads(text))


# point configurations


def points_to_dict(P: PointConfig) -> dict:
    return {"labels": list(P.labels), "coords": P.coords.tolist()}


def points_from_dict(obj: dict) -> PointConfig:
    try:
        labels, coords = obj["labels"], obj["coords"]
    except (KeyError, TypeError):
        raise InvariantViolation('point JSON needs "labels" and "coords"') from None
    c = np.asarray(coords, dtype=float)
    if c.size == 0:
        c = c.reshape(len(labels), 0)
    return PointConfig(tuple(labels), c)


def load_points(path: str | Path) -> PointConfig:
    return points_from_dict(json.loads(_read(path)))


# edge lists


def write_edge_list(G: Graph) -> str:
    """``u v [weight]`` per line; ``!base u`` header; ``!vertex u`` for isolated vertices."""
    lines = []
    if G.basepoint is not None:
        lines.append(f"!base {G.basepoint}")
    touched = set()
    for u, v, w in G.edges:
        touched.update((u, v))
        lines.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {w:.12g}")
    for v in G.vertices:
        if v not in touched:
            lines.append(f"!vertex {v}")
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> Graph:
    base = None
    vertices: list[str] = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "!base" and len(parts) == 2:
            base = parts[1]
        elif parts[0] == "!vertex" and len(parts) == 2:
            vertices.append(parts[1])
        elif len(parts) in (2, 3) and not parts[0].startswith("!"):
            w = float(parts[2]) if len(parts) == 3 else 1.0
            edges.append((parts[0], parts[1], w))
        else:
            raise InvariantViolation(f"line {lineno}: cannot parse {raw!r}")
    order: dict[str, None] = {}
    for u, v, _ in edges:
        order.setdefault(u, None)
        order.setdefault(v, None)
    for v in vertices:
        order.setdefault(v, None)
    if base is not None:
        order.setdefault(base, None)
    return Graph(tuple(order), tuple(edges), base)


def load_edge_list(path: str | Path) -> Graph:
    return read_edge_list(_read(path))


# presentations


def presentation_from_dict(obj: dict) -> GroupPresentation:
    def coef(x):
        if isinstance(x, str):
            if x.strip().lower() in ("inf", "infinity", "∞"):
                return INF
            return float(x)
        return INF if x is None else float(x)

    gens = obj["generators"]
    m = obj["m"]
    table = tuple(tuple(coef(x) for x in row) for row in m)
    return GroupPresentation(tuple(gens), table, obj.get("kind", "coxeter"))


def load_presentation(path: str | Path) -> GroupPresentation:
    return presentation_from_dict(json.loads(_read(path)))


def load_circle(path: str | Path) -> tuple[list[float], float]:
    obj = json.loads(_read(path))
    return [float(a) for a in obj["angles"]], float(obj["L"])
