"""Planar primitives: period lattices, needles, tables and border areas."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgumentError, InvalidLatticeError

LATTICE_TOL = 1e-12


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidArgumentError(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class PeriodLattice:
    """Two independent period vectors ``u`` and ``v``.

    The fundamental cell is the half-open parallelogram
    ``{t*u + s*v : 0 <= t, s < 1}``.
    """

    u: tuple[float, float]
    v: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(float(c) for c in self.u))
        object.__setattr__(self, "v", tuple(float(c) for c in self.v))
        if len(self.u) != 2 or len(self.v) != 2:
            raise InvalidLatticeError("period vectors must be 2-dimensional")
        scale = max(math.hypot(*self.u) * math.hypot(*self.v), 1.0)
        if not abs(self.cross) > LATTICE_TOL * scale:
            raise InvalidLatticeError(f"degenerate lattice u={self.u}, v={self.v}")

    @property
    def cross(self) -> float:
        return self.u[0] * self.v[1] - self.u[1] * self.v[0]

    @property
    def area(self) -> float:
        return abs(self.cross)

    @property
    def basis(self) -> np.ndarray:
        """Rows are ``u`` and ``v``."""
        return np.array([self.u, self.v])

    def to_lattice_coords(self, x, y):
        """Solve ``(x, y) = t*u + s*v`` for ``(t, s)``; works on arrays."""
        (ux, uy), (vx, vy) = self.u, self.v
        det = self.cross
        t = (x * vy - y * vx) / det
        s = (ux * y - uy * x) / det
        return t, s

    def reduce(self, x, y):
        """Vectorised :func:`reduce_to_cell` on coordinate arrays."""
        (ux, uy), (vx, vy) = self.u, self.v
        # second pass catches results rounded onto the far edge of the cell
        for _ in range(2):
            t, s = self.to_lattice_coords(x, y)
            ft, fs = np.floor(t), np.floor(s)
            x, y = x - (ft * ux + fs * vx), y - (ft * uy + fs * vy)
        return x, y

    def to_dict(self) -> dict:
        return {"u": list(self.u), "v": list(self.v)}


@dataclass(frozen=True)
class Rect:
    """The square table ``[-R, R]^2``."""

    half_width: float

    def __post_init__(self):
        if not self.half_width > 1:
            raise InvalidArgumentError(
                f"table half-width must exceed 1 to hold a needle, got {self.half_width}"
            )

    @property
    def side(self) -> float:
        return 2.0 * self.half_width

    @property
    def area(self) -> float:
        return self.side**2

    def contains(self, x, y):
        r = self.half_width
        return (x >= -r) & (x <= r) & (y >= -r) & (y <= r)


@dataclass(frozen=True)
class Needle:
    a: Point2
    theta: float
    b: Point2

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


def reduce_to_cell(lattice: PeriodLattice, p) -> Point2:
    """Translate ``p`` by lattice vectors into the fundamental cell."""
    x, y = p
    rx, ry = lattice.reduce(np.float64(x), np.float64(y))
    return Point2(float(rx), float(ry))


def parallelogram_area(lattice: PeriodLattice) -> float:
    return lattice.area


def sample_needles(lattice: PeriodLattice, rng: np.random.Generator, size: int):
    """Draw ``size`` needles of Process 1 as arrays ``(ax, ay, theta, bx, by)``.

    The base point is ``t*u + s*v`` with ``t, s`` uniform on ``[0, 1)`` and the
    direction angle is uniform on ``[0, 2*pi)``. Draw order is t, s, theta.
    """
    t = rng.random(size)
    s = rng.random(size)
    theta = rng.random(size) * (2.0 * math.pi)
    (ux, uy), (vx, vy) = lattice.u, lattice.v
    ax = t * ux + s * vx
    ay = t * uy + s * vy
    return ax, ay, theta, ax + np.cos(theta), ay + np.sin(theta)


def sample_needle(lattice: PeriodLattice, rng: np.random.Generator) -> Needle:
    ax, ay, theta, bx, by = sample_needles(lattice, rng, 1)
    return Needle(Point2(float(ax[0]), float(ay[0])), float(theta[0]),
                  Point2(float(bx[0]), float(by[0])))


def inner_border_area(rect: Rect, r: float) -> float:
    """Area of the points of the table lying within ``r`` of its complement."""
    if not r > 0:
        raise InvalidArgumentError(f"border width must be positive, got {r}")
    a = rect.side
    if 2 * r >= a:
        return a * a
    return a * a - (a - 2 * r) ** 2
