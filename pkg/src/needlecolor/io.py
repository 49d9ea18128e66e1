"""JSON and CSV formats for colorings, graphs, estimates and sweeps.

Coloring documents::

    {"lattice": {"u": [ux, uy], "v": [vx, vy]}, "k": 3,
     "tiles": [{"polygon": [[x, y], ...], "color": 0}, ...]}     # polygonal
    {"lattice": {"u": [R, 0], "v": [0, R]}, "k": 2,
     "cells": [[c00, c01, ...], ...]}                             # grid, cells[iy][ix]

Graph documents: ``{"vertices": [[x, y], ...], "edges": [[i, j], ...]}``;
vertices may have any common dimension.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .colorings import (
    ConstantColoring,
    GridColoring,
    Hex3Coloring,
    PolygonalColoring,
    StripeColoring,
)
from .estimator import Estimate
from .exceptions import InvalidArgumentError
from .geometry import PeriodLattice
from .graphs import EmbeddedGraph

SWEEP_HEADER = ("parameter", "p_hat", "stderr", "n", "seed")


def coloring_from_dict(doc: dict):
    kind = doc.get("type")
    if kind is None:
        kind = "polygonal" if "tiles" in doc else "grid" if "cells" in doc else None
    try:
        if kind == "stripe":
            return StripeColoring(float(doc["width"]))
        if kind == "hex3":
            return Hex3Coloring(float(doc["edge"]))
        if kind == "constant":
            return ConstantColoring(int(doc.get("k", 1)))
        lattice = PeriodLattice(doc["lattice"]["u"], doc["lattice"]["v"])
        k = int(doc["k"])
        if kind == "grid":
            (ux, uy), (vx, vy) = lattice.u, lattice.v
            if uy != 0 or vx != 0 or ux != vy or ux <= 0:
                raise InvalidArgumentError("grid lattice must be u=(R, 0), v=(0, R) with R > 0")
            return GridColoring(ux, doc["cells"], k)
        if kind == "polygonal":
            tiles = [(t["polygon"], t["color"]) for t in doc["tiles"]]
            return PolygonalColoring(lattice, tuple(tiles), k)
    except KeyError as exc:
        raise InvalidArgumentError(f"coloring document is missing {exc}") from exc
    raise InvalidArgumentError(f"cannot tell the coloring type of document with keys {sorted(doc)}")


def load_coloring(path):
    with open(path) as fh:
        return coloring_from_dict(json.load(fh))


def save_coloring(coloring, path):
    Path(path).write_text(json.dumps(coloring.to_dict(), indent=2) + "\n")


def graph_from_dict(doc: dict) -> EmbeddedGraph:
    try:
        return EmbeddedGraph(doc["vertices"], tuple(tuple(e) for e in doc["edges"]))
    except KeyError as exc:
        raise InvalidArgumentError(f"graph document is missing {exc}") from exc


def load_graph(path) -> EmbeddedGraph:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))


def save_graph(graph: EmbeddedGraph, path):
    Path(path).write_text(json.dumps(graph.to_dict(), indent=2) + "\n")


def dumps(obj) -> str:
    """Stable JSON text for reports; identical input gives identical bytes."""
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    return json.dumps(obj, indent=2) + "\n"


def load_estimate(path) -> Estimate:
    with open(path) as fh:
        return Estimate.from_dict(json.load(fh))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def emit_sweep_csv(points, path):
    """Write sweep points as CSV, one row per point, 17 significant digits."""
    points = list(points)
    if not points:
        raise InvalidArgumentError("no sweep points to write")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for p in points:
            e = p.estimate
            writer.writerow([_fmt(p.parameter), _fmt(e.p_hat), _fmt(e.stderr), e.n, e.seed])


def read_sweep_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        {"parameter": float(r["parameter"]), "p_hat": float(r["p_hat"]),
         "stderr": float(r["stderr"]), "n": int(r["n"]), "seed": int(r["seed"])}
        for r in rows
    ]
