"""Finite unit-distance graphs and the exact minimum monochromatic-edge fraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import InvalidArgumentError, ResourceLimitError

SQRT3 = math.sqrt(3.0)

#: Default cap on search-tree nodes, matching an exhaustive budget of 10^8 states.
MAX_NODES = 10**8


@dataclass(frozen=True, eq=False)
class EmbeddedGraph:
    """Vertex coordinates (any dimension) plus an undirected edge list.

    Edges are stored as ``(i, j)`` with ``i < j``. Edge ``(i, j)`` read as a
    needle starts at vertex ``i`` and ends at vertex ``j``.
    """

    vertices: np.ndarray
    edges: tuple

    def __post_init__(self):
        verts = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if verts.size == 0 or not np.all(np.isfinite(verts)):
            raise InvalidArgumentError("vertices must be a non-empty finite array")
        nv = len(verts)
        edges = []
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidArgumentError(f"self-loop at vertex {i}")
            if not (0 <= i < nv and 0 <= j < nv):
                raise InvalidArgumentError(f"edge ({i}, {j}) out of range for {nv} vertices")
            edges.append((min(i, j), max(i, j)))
        if len(set(edges)) != len(edges):
            raise InvalidArgumentError("duplicate edges")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    def edge_lengths(self) -> np.ndarray:
        e = self.edge_array
        return np.linalg.norm(self.vertices[e[:, 1]] - self.vertices[e[:, 0]], axis=1)

    @property
    def edge_angles(self) -> np.ndarray:
        """Direction angle of each planar edge, from its first to its second vertex."""
        if self.dim != 2:
            raise InvalidArgumentError("edge angles are only defined for planar graphs")
        e = self.edge_array
        d = self.vertices[e[:, 1]] - self.vertices[e[:, 0]]
        return np.arctan2(d[:, 1], d[:, 0])

    def relabel(self, perm) -> "EmbeddedGraph":
        """Graph with vertex ``i`` moved to position ``perm[i]``."""
        perm = np.asarray(perm)
        verts = np.empty_like(self.vertices)
        verts[perm] = self.vertices
        return EmbeddedGraph(verts, tuple((perm[i], perm[j]) for i, j in self.edges))

    def to_dict(self) -> dict:
        return {"vertices": self.vertices.tolist(), "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class MkResult:
    value: Fraction
    witness: tuple
    monochromatic_edges: int
    n_edges: int

    def __str__(self):
        return f"{self.value} ({float(self.value):.10g})"

    def to_dict(self) -> dict:
        return {
            "value": str(self.value),
            "numerator": self.value.numerator,
            "denominator": self.value.denominator,
            "decimal": float(self.value),
            "monochromatic_edges": self.monochromatic_edges,
            "n_edges": self.n_edges,
            "witness": list(self.witness),
        }


def verify_unit_embedding(g: EmbeddedGraph, tol: float = 1e-9) -> bool:
    if not tol > 0:
        raise InvalidArgumentError("tolerance must be positive")
    if g.n_edges == 0:
        return True
    return bool(np.all(np.abs(g.edge_lengths() - 1.0) <= tol))


def monochromatic_count(g: EmbeddedGraph, colors) -> int:
    colors = list(colors)
    if len(colors) != g.n_vertices:
        raise InvalidArgumentError(
            f"assignment has {len(colors)} colors for {g.n_vertices} vertices"
        )
    return sum(1 for i, j in g.edges if colors[i] == colors[j])


def solve_mk(g: EmbeddedGraph, k: int, max_nodes: int = MAX_NODES) -> MkResult:
    """Exact minimum over all k-colorings of the fraction of monochromatic edges.

    Depth-first branch and bound over vertices in index order. A partial
    assignment is cut once its monochromatic count reaches the best complete
    count found so far. Colorings are explored in canonical form (vertex 0
    gets color 0, a new color is at most one more than the largest used), which
    keeps the lexicographically smallest optimal witness reachable; that is the
    witness returned.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    nv, ne = g.n_vertices, g.n_edges
    if ne == 0:
        return MkResult(Fraction(0), (0,) * nv, 0, 0)
    # edges to earlier vertices, indexed by the later endpoint
    back = [[] for _ in range(nv)]
    for i, j in g.edges:
        back[j].append(i)

    colors = [0] * nv
    best = [ne + 1, None]
    nodes = 0

    def search(v, mono, used):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise ResourceLimitError(
                f"branch and bound exceeded {max_nodes} nodes "
                f"({nv} vertices, k={k}); raise max_nodes to continue"
            )
        if v == nv:
            if mono < best[0]:
                best[0], best[1] = mono, tuple(colors)
            return
        for c in range(min(used + 1, k)):
            add = sum(1 for u in back[v] if colors[u] == c)
            if mono + add >= best[0]:
                continue
            colors[v] = c
            search(v + 1, mono + add, max(used, c + 1))
            if best[0] == 0:
                return

    search(0, 0, 0)
    mono, witness = best
    return MkResult(Fraction(mono, ne), witness, mono, ne)


class MkSolver(BaseEstimator):
    """Estimator-style wrapper around :func:`solve_mk`.

    ``fit(graph)`` stores ``result_``, ``value_`` and ``witness_``.
    """

    def __init__(self, k=3, max_nodes=MAX_NODES):
        self.k = k
        self.max_nodes = max_nodes

    def fit(self, graph, y=None):
        self.result_ = solve_mk(graph, self.k, self.max_nodes)
        self.value_ = self.result_.value
        self.witness_ = self.result_.witness
        return self


def _polar(r, angle):
    return (r * math.cos(angle), r * math.sin(angle))


def triangle() -> EmbeddedGraph:
    return EmbeddedGraph([(0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2)], ((0, 1), (0, 2), (1, 2)))


def moser_spindle() -> EmbeddedGraph:
    """Seven vertices, eleven unit edges, chromatic number 4.

    Two rhombi, each made of two unit equilateral triangles, share the apex at
    the origin. The second is rotated against the first by
    ``2*asin(1/(2*sqrt(3)))`` so that their far tips, both at distance
    ``sqrt(3)`` from the apex, are exactly one unit apart.
    """
    delta = 2.0 * math.asin(1.0 / (2.0 * SQRT3))
    verts = [(0.0, 0.0)]
    edges = []
    for phi in (0.0, delta):
        base = len(verts)
        verts += [_polar(1.0, phi - math.pi / 6), _polar(1.0, phi + math.pi / 6), _polar(SQRT3, phi)]
        a, b, tip = base, base + 1, base + 2
        edges += [(0, a), (0, b), (a, b), (a, tip), (b, tip)]
    edges.append((3, 6))
    return EmbeddedGraph(verts, tuple(edges))


def rhombus() -> EmbeddedGraph:
    """Two unit equilateral triangles glued along an edge."""
    verts = [(0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2), (0.5, -SQRT3 / 2)]
    return EmbeddedGraph(verts, ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3)))


def hexagonal_wheel() -> EmbeddedGraph:
    """Unit regular hexagon with its center joined to every corner."""
    verts = [(0.0, 0.0)] + [_polar(1.0, i * math.pi / 3) for i in range(6)]
    edges = [(0, i) for i in range(1, 7)] + [(i, i % 6 + 1) for i in range(1, 7)]
    return EmbeddedGraph(verts, tuple(edges))


def regular_pentagon() -> EmbeddedGraph:
    """Unit-side regular pentagon (the 5-cycle)."""
    r = 1.0 / (2.0 * math.sin(math.pi / 5))
    verts = [_polar(r, 2 * math.pi * i / 5) for i in range(5)]
    return EmbeddedGraph(verts, tuple((i, (i + 1) % 5) for i in range(5)))


_CATALOG = {
    "triangle": triangle,
    "moser_spindle": moser_spindle,
    "rhombus": rhombus,
    "hexagonal_wheel": hexagonal_wheel,
    "regular_pentagon": regular_pentagon,
}

GRAPH_NAMES = tuple(_CATALOG)


def catalog() -> list[tuple[str, EmbeddedGraph]]:
    return [(name, build()) for name, build in _CATALOG.items()]


def get_graph(name: str) -> EmbeddedGraph:
    try:
        return _CATALOG[name]()
    except KeyError:
        raise InvalidArgumentError(
            f"unknown graph {name!r}; available: {', '.join(GRAPH_NAMES)}"
        ) from None
