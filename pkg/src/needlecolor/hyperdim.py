"""Needle processes in dimension d: sphere and rotation sampling, slab colorings,
regular simplices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._rng import child_stream
from .estimator import Estimate, run_chunks, _check_n, _resolve_seed
from .exceptions import InvalidArgumentError
from .graphs import EmbeddedGraph, solve_mk


def sample_sphere(d: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Uniform point(s) on the unit sphere in R^d by normalizing Gaussian vectors."""
    if d < 2:
        raise InvalidArgumentError(f"dimension must be >= 2, got {d}")
    shape = (d,) if size is None else (size, d)
    v = rng.standard_normal(shape)
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    while np.any(norm == 0):
        bad = (norm == 0).reshape(-1)
        v.reshape(-1, d)[bad] = rng.standard_normal((int(bad.sum()), d))
        norm = np.linalg.norm(v, axis=-1, keepdims=True)
    return v / norm


def sample_rotation(d: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed rotation(s) in SO(d).

    QR of a Gaussian matrix, with columns of Q flipped so that R has a
    positive diagonal (this makes Q Haar on O(d)); then the last column is
    negated where the determinant is -1.
    """
    if d < 2:
        raise InvalidArgumentError(f"dimension must be >= 2, got {d}")
    shape = (d, d) if size is None else (size, d, d)
    q, r = np.linalg.qr(rng.standard_normal(shape))
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    q = q * signs[..., None, :]
    det = np.linalg.det(q)
    q[..., :, -1] *= np.where(det < 0, -1.0, 1.0)[..., None]
    return q


@dataclass(frozen=True, eq=False)
class SlabColoring:
    """Alternating slabs ``[j*l, (j+1)*l)`` along a normal direction in R^d.

    ``normal`` is an axis index or a vector (normalized on construction). The
    period cell is spanned by ``2l * normal`` and an orthonormal basis of the
    complement, which for an axis normal is the unit box times the slab period.
    """

    d: int
    width: float
    normal: object = 0
    k: int = 2

    def __post_init__(self):
        if self.d < 2:
            raise InvalidArgumentError(f"dimension must be >= 2, got {self.d}")
        if not self.width > 0:
            raise InvalidArgumentError(f"slab width must be positive, got {self.width}")
        if self.k not in (1, 2):
            raise InvalidArgumentError("slab colorings use 2 colors, or 1 for the constant case")
        if isinstance(self.normal, (int, np.integer)):
            if not 0 <= self.normal < self.d:
                raise InvalidArgumentError(f"axis {self.normal} out of range")
            vec = np.eye(self.d)[int(self.normal)]
        else:
            vec = np.asarray(self.normal, dtype=float)
            if vec.shape != (self.d,) or not np.linalg.norm(vec) > 0:
                raise InvalidArgumentError("normal must be a non-zero vector of length d")
            vec = vec / np.linalg.norm(vec)
        object.__setattr__(self, "_unit_normal", vec)

    @property
    def unit_normal(self) -> np.ndarray:
        return self._unit_normal

    @property
    def cell_basis(self) -> np.ndarray:
        """Rows span the period cell; the first row is ``2l * normal``."""
        n = self.unit_normal
        # complete n to an orthonormal basis; the sign of the first column is irrelevant
        q, _ = np.linalg.qr(np.column_stack([n, np.eye(self.d)]))
        rest = q[:, 1:self.d].T
        return np.vstack([2.0 * self.width * n, rest])

    def colors(self, points: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return np.zeros(len(points), dtype=np.int64)
        h = points @ self.unit_normal
        return np.mod(np.floor(h / self.width), 2).astype(np.int64)

    predict = colors

    def to_dict(self) -> dict:
        return {"type": "slab", "d": self.d, "width": self.width,
                "normal": self.unit_normal.tolist(), "k": self.k}


def _base_points(c: SlabColoring, rng, size):
    return rng.random((size, c.d)) @ c.cell_basis


def estimate_p_per_d(c: SlabColoring, n: int, seed=None, n_threads: int = 1) -> Estimate:
    """Process 1 in R^d: base point uniform in the cell, offset uniform on the sphere."""
    n = _check_n(n)
    seed = _resolve_seed(seed)

    def work(i, size):
        rng = child_stream(seed, i)
        a = _base_points(c, rng, size)
        b = a + sample_sphere(c.d, rng, size)
        return int(np.count_nonzero(c.colors(a) == c.colors(b)))

    return Estimate.from_counts(sum(run_chunks(work, n, n_threads)), n, seed, "needle", dim=c.d)


def estimate_graph_throw_d(c: SlabColoring, g: EmbeddedGraph, n: int, seed=None,
                           n_threads: int = 1) -> Estimate:
    """Process 2 in R^d: Haar rotation of the graph, uniform offset, uniform edge."""
    if g.dim != c.d:
        raise InvalidArgumentError(f"graph lives in R^{g.dim}, coloring in R^{c.d}")
    if g.n_edges == 0 or not np.all(np.abs(g.edge_lengths() - 1.0) <= 1e-9):
        raise InvalidArgumentError("graph is not a unit-distance embedding")
    n = _check_n(n)
    seed = _resolve_seed(seed)
    e = g.edge_array
    start, end = g.vertices[e[:, 0]], g.vertices[e[:, 1]]

    def work(i, size):
        rng = child_stream(seed, i)
        a0 = _base_points(c, rng, size)
        rot = sample_rotation(c.d, rng, size)
        j = rng.integers(0, g.n_edges, size)
        a = a0 + np.einsum("nij,nj->ni", rot, start[j])
        b = a0 + np.einsum("nij,nj->ni", rot, end[j])
        return int(np.count_nonzero(c.colors(a) == c.colors(b)))

    return Estimate.from_counts(sum(run_chunks(work, n, n_threads)), n, seed, "graph_throw",
                                dim=c.d)


def regular_simplex(k: int) -> EmbeddedGraph:
    """Complete graph on ``k + 1`` points of R^k at pairwise distance 1.

    Starts from the scaled basis ``e_i / sqrt(2)`` of R^(k+1), centers it and
    expresses it in an orthonormal basis of the hyperplane it spans.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    pts = np.eye(k + 1) / math.sqrt(2.0)
    pts -= pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts)
    coords = pts @ vt[:k].T
    edges = tuple((i, j) for i in range(k + 1) for j in range(i + 1, k + 1))
    return EmbeddedGraph(coords, edges)


def simplex_bound(k: int, check: bool = True) -> Fraction:
    """Lower bound ``1 / C(k+1, 2)`` for k colors in dimension k.

    With ``check`` the value is confirmed against the exact solver on the
    regular simplex (only attempted for ``k <= 6``).
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    value = Fraction(1, math.comb(k + 1, 2))
    if check and k <= 6:
        solved = solve_mk(regular_simplex(k), k).value
        if solved != value:
            raise AssertionError(f"solver gives {solved} on the {k}-simplex, expected {value}")
    return value
