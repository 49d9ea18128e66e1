"""Periodic k-colorings of the plane.

Each coloring maps points to color indices ``0..k-1``. ``predict`` takes an
``(n, 2)`` array of points and returns an integer array, so a coloring can be
used wherever a fitted classifier is expected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.utils import check_array

from .exceptions import InvalidArgumentError, InvalidConstructionError
from .geometry import PeriodLattice, Point2

SQRT3 = math.sqrt(3.0)


class Coloring:
    """Base class. Subclasses implement ``_colors(x, y)`` on float arrays."""

    k: int
    lattice: PeriodLattice | None

    def _colors(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def colors(self, x, y) -> np.ndarray:
        """Colors of the points ``(x[i], y[i])``; no validation."""
        return self._colors(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def predict(self, X) -> np.ndarray:
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != 2:
            raise InvalidArgumentError(f"expected points of shape (n, 2), got {X.shape}")
        return self._colors(X[:, 0], X[:, 1]).astype(np.int64)

    def color_at(self, p) -> int:
        x, y = p
        return int(self._colors(np.array([float(x)]), np.array([float(y)]))[0])

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantColoring(Coloring):
    """Everything gets color 0. Period lattice is the unit square."""

    k: int = 1

    @property
    def lattice(self) -> PeriodLattice:
        return PeriodLattice((1.0, 0.0), (0.0, 1.0))

    def _colors(self, x, y):
        return np.zeros(np.shape(x), dtype=np.int64)

    def to_dict(self) -> dict:
        return {"type": "constant", "k": self.k}


@dataclass(frozen=True)
class StripeColoring(Coloring):
    """Horizontal stripes of width ``width``; stripe ``j`` is ``[j*l, (j+1)*l)``.

    Each stripe contains its lower edge and not its upper one. Colors alternate,
    so the coloring is periodic with ``u = (1, 0)`` and ``v = (0, 2l)``.
    """

    width: float
    k: int = field(default=2, init=False)

    def __post_init__(self):
        if not self.width > 0:
            raise InvalidArgumentError(f"stripe width must be positive, got {self.width}")

    @property
    def lattice(self) -> PeriodLattice:
        return PeriodLattice((1.0, 0.0), (0.0, 2.0 * self.width))

    def _colors(self, x, y):
        return np.mod(np.floor(y / self.width), 2).astype(np.int64)

    def to_dict(self) -> dict:
        return {"type": "stripe", "width": self.width, "k": 2}


@dataclass(frozen=True)
class Hex3Coloring(Coloring):
    """Proper 3-coloring of the regular flat-top hexagonal tiling.

    Hexagon centers are ``q*a1 + r*a2`` with ``a1 = (3s/2, sqrt(3)s/2)`` and
    ``a2 = (0, sqrt(3)s)``; the hexagon at ``(q, r)`` gets color ``(q - r) mod 3``.
    Every neighbor offset changes ``q - r`` by 1 or 2, so adjacent hexagons
    differ. Points go to the nearest center; exact ties go to the center that
    is smallest in (x, y) lexicographic order.
    """

    edge: float
    k: int = field(default=3, init=False)

    def __post_init__(self):
        if not self.edge > 0:
            raise InvalidArgumentError(f"hexagon edge must be positive, got {self.edge}")

    @property
    def lattice(self) -> PeriodLattice:
        s = self.edge
        return PeriodLattice((3.0 * s, 0.0), (1.5 * s, 1.5 * SQRT3 * s))

    def center(self, q, r):
        s = self.edge
        return 1.5 * s * q, 0.5 * SQRT3 * s * q + SQRT3 * s * r

    def hex_index(self, x, y):
        """Axial ``(q, r)`` of the hexagon containing each point."""
        s = self.edge
        qf = np.floor(x / (1.5 * s))
        rf = np.floor((y - 0.5 * SQRT3 * s * (x / (1.5 * s))) / (SQRT3 * s))
        # nearest center is a corner of the enclosing 60-degree rhombus
        best_d = best_x = best_y = best_q = best_r = None
        for dq, dr in ((0, 0), (1, 0), (0, 1), (1, 1)):
            cq, cr = qf + dq, rf + dr
            cx, cy = self.center(cq, cr)
            d = (x - cx) ** 2 + (y - cy) ** 2
            if best_d is None:
                best_d, best_x, best_y, best_q, best_r = d, cx, cy, cq, cr
                continue
            better = (d < best_d) | (
                (d == best_d) & ((cx < best_x) | ((cx == best_x) & (cy < best_y)))
            )
            best_d = np.where(better, d, best_d)
            best_x = np.where(better, cx, best_x)
            best_y = np.where(better, cy, best_y)
            best_q = np.where(better, cq, best_q)
            best_r = np.where(better, cr, best_r)
        return best_q.astype(np.int64), best_r.astype(np.int64)

    def _colors(self, x, y):
        q, r = self.hex_index(x, y)
        return np.mod(q - r, 3)

    def to_dict(self) -> dict:
        return {"type": "hex3", "edge": self.edge, "k": 3}


@dataclass(frozen=True, eq=False)
class GridColoring(Coloring):
    """``n x n`` grid of square cells of side ``R/n`` repeated with period ``R``.

    ``cells[iy][ix]`` is the color of the cell ``[ix*R/n, (ix+1)*R/n) x
    [iy*R/n, (iy+1)*R/n)``.
    """

    period: float
    cells: np.ndarray
    k: int

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1] or cells.size == 0:
            raise InvalidArgumentError(f"cells must be a non-empty square matrix, got {cells.shape}")
        if not self.period > 0:
            raise InvalidArgumentError(f"period must be positive, got {self.period}")
        if self.k < 1 or cells.min() < 0 or cells.max() >= self.k:
            raise InvalidArgumentError(f"cell colors must lie in [0, {self.k})")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def cell_side(self) -> float:
        return self.period / self.n

    @property
    def lattice(self) -> PeriodLattice:
        return PeriodLattice((self.period, 0.0), (0.0, self.period))

    def cell_index(self, x, y):
        n, R = self.n, self.period
        ix = np.minimum(np.floor(np.mod(x, R) * (n / R)), n - 1).astype(np.int64)
        iy = np.minimum(np.floor(np.mod(y, R) * (n / R)), n - 1).astype(np.int64)
        return ix, iy

    def _colors(self, x, y):
        ix, iy = self.cell_index(x, y)
        return self.cells[iy, ix]

    def to_dict(self) -> dict:
        return {
            "type": "grid",
            "lattice": self.lattice.to_dict(),
            "k": self.k,
            "cells": self.cells.tolist(),
        }


@dataclass(frozen=True, eq=False)
class PolygonalColoring(Coloring):
    """Periodic coloring given by colored polygons tiling the fundamental cell.

    Points are first reduced into the cell. A point belongs to the first tile
    whose crossing-number test succeeds (half-open edges); points on an
    untiled sliver go to the nearest tile.
    """

    lattice: PeriodLattice
    tiles: tuple
    k: int
    coverage_tol: float = 1e-6

    def __post_init__(self):
        tiles = []
        for poly, color in self.tiles:
            poly = np.asarray(poly, dtype=float)
            if poly.ndim != 2 or poly.shape[1] != 2 or len(poly) < 3:
                raise InvalidArgumentError("each tile needs at least 3 vertices (x, y)")
            if not 0 <= int(color) < self.k:
                raise InvalidArgumentError(f"tile color {color} outside [0, {self.k})")
            poly.setflags(write=False)
            tiles.append((poly, int(color)))
        if not tiles:
            raise InvalidArgumentError("at least one tile is required")
        object.__setattr__(self, "tiles", tuple(tiles))
        self._check_partition()

    def _check_partition(self):
        from shapely.geometry import Polygon
        from shapely.ops import unary_union

        polys = [Polygon(p) for p, _ in self.tiles]
        if not all(p.is_valid for p in polys):
            raise InvalidConstructionError("tiles must be simple polygons")
        cell_area = self.lattice.area
        total = sum(p.area for p in polys)
        union = unary_union(polys).area
        tol = self.coverage_tol * cell_area
        if abs(total - union) > tol:
            raise InvalidConstructionError(f"tiles overlap with area {total - union:.3g}")
        if abs(union - cell_area) > tol:
            raise InvalidConstructionError(
                f"tiles cover area {union:.9g} but the cell has area {cell_area:.9g}"
            )

    @staticmethod
    def _inside(poly, x, y):
        inside = np.zeros(x.shape, dtype=bool)
        xj, yj = poly[-1]
        for xi, yi in poly:
            crosses = (yi > y) != (yj > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = (xj - xi) * (y - yi) / (yj - yi) + xi
            inside ^= crosses & (x < xint)
            xj, yj = xi, yi
        return inside

    @staticmethod
    def _distance(poly, x, y):
        best = np.full(x.shape, np.inf)
        xj, yj = poly[-1]
        for xi, yi in poly:
            dx, dy = xi - xj, yi - yj
            seg2 = dx * dx + dy * dy
            t = np.clip(((x - xj) * dx + (y - yj) * dy) / seg2, 0.0, 1.0) if seg2 else 0.0
            best = np.minimum(best, np.hypot(x - (xj + t * dx), y - (yj + t * dy)))
            xj, yj = xi, yi
        return best

    def _colors(self, x, y):
        x, y = self.lattice.reduce(x, y)
        out = np.full(x.shape, -1, dtype=np.int64)
        for poly, color in self.tiles:
            todo = out < 0
            if not todo.any():
                break
            hit = np.zeros(x.shape, dtype=bool)
            hit[todo] = self._inside(poly, x[todo], y[todo])
            out[hit] = color
        missing = out < 0
        if missing.any():
            xm, ym = x[missing], y[missing]
            dists = np.stack([self._distance(p, xm, ym) for p, _ in self.tiles])
            colors = np.array([c for _, c in self.tiles])
            out[missing] = colors[np.argmin(dists, axis=0)]
        return out

    def to_dict(self) -> dict:
        return {
            "type": "polygonal",
            "lattice": self.lattice.to_dict(),
            "k": self.k,
            "tiles": [{"polygon": p.tolist(), "color": c} for p, c in self.tiles],
        }


def make_random_grid(R: float, n: int, k: int, rng: np.random.Generator) -> GridColoring:
    """Random grid coloring with i.i.d. uniform cell colors.

    Requires ``R/n < 1/sqrt(2)`` (cell diagonal shorter than a needle) and
    ``R > 2`` (a needle never reaches a periodic copy of its own cell).
    """
    if n < 1 or k < 1:
        raise InvalidConstructionError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if not R / n < 1 / math.sqrt(2):
        raise InvalidConstructionError(
            f"cell side R/n = {R / n:.6g} must be < 1/sqrt(2) so needle endpoints fall in distinct cells"
        )
    if not R > 2:
        raise InvalidConstructionError(f"period R = {R} must exceed 2")
    cells = rng.integers(0, k, size=(n, n))
    return GridColoring(float(R), cells, int(k))


@dataclass(frozen=True)
class PeriodicityReport:
    samples: int
    violations: dict

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    @property
    def ok(self) -> bool:
        return self.total_violations == 0


def verify_periodicity(c: Coloring, samples: int, rng: np.random.Generator) -> PeriodicityReport:
    """Compare colors at random points with colors at the points shifted by u, v, u+v."""
    lat = c.lattice
    if lat is None:
        raise InvalidArgumentError("coloring declares no period lattice")
    span = 10.0 * max(math.hypot(*lat.u), math.hypot(*lat.v))
    x = rng.uniform(-span, span, samples)
    y = rng.uniform(-span, span, samples)
    base = c.colors(x, y)
    (ux, uy), (vx, vy) = lat.u, lat.v
    shifts = {"u": (ux, uy), "v": (vx, vy), "u+v": (ux + vx, uy + vy)}
    violations = {
        name: int(np.count_nonzero(c.colors(x + dx, y + dy) != base))
        for name, (dx, dy) in shifts.items()
    }
    return PeriodicityReport(int(samples), violations)


def parse_coloring(text: str) -> Coloring:
    """Build a coloring from ``stripe:<w>``, ``hex3:<s>``, ``grid:<R>:<n>:<k>:<seed>``,
    ``constant`` or ``file:<path>``."""
    from ._rng import make_stream
    from .io import load_coloring

    name, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    try:
        if name == "stripe" and len(args) == 1:
            return StripeColoring(float(args[0]))
        if name == "hex3" and len(args) == 1:
            return Hex3Coloring(float(args[0]))
        if name == "constant" and not args:
            return ConstantColoring()
        if name == "grid" and len(args) == 4:
            R, n, k, seed = float(args[0]), int(args[1]), int(args[2]), int(args[3])
            return make_random_grid(R, n, k, make_stream(seed))
        if name == "file" and rest:
            return load_coloring(rest)
    except ValueError as exc:
        raise InvalidArgumentError(f"bad coloring {text!r}: {exc}") from exc
    raise InvalidArgumentError(
        f"unknown coloring {text!r}; available: {', '.join(COLORING_SYNTAX)}"
    )


COLORING_SYNTAX = (
    "stripe:<width>",
    "hex3:<edge>",
    "grid:<R>:<n>:<k>:<seed>",
    "constant",
    "file:<path>",
)


__all__ = [
    "Coloring",
    "ConstantColoring",
    "StripeColoring",
    "Hex3Coloring",
    "GridColoring",
    "PolygonalColoring",
    "PeriodicityReport",
    "make_random_grid",
    "verify_periodicity",
    "parse_coloring",
    "Point2",
]
