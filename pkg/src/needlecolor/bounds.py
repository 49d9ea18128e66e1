"""Two-sided bounds on the smallest achievable monochromatic needle probability."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._rng import child_stream, derive_seed, make_stream
from .colorings import Hex3Coloring, StripeColoring, make_random_grid
from .estimator import Estimate, estimate_p_per, run_chunks
from .exceptions import InvalidArgumentError, InvalidConstructionError, NoInformationError
from .geometry import Rect, inner_border_area
from .graphs import catalog, solve_mk

#: Constant of the finite-table correction. Known to work; not claimed optimal.
KAPPA = 2.0


@dataclass(frozen=True)
class SweepPoint:
    parameter: float
    estimate: Estimate

    def __post_init__(self):
        if not self.parameter > 0:
            raise InvalidArgumentError("sweep parameter must be positive")


@dataclass(frozen=True)
class GridConstruction:
    """Outcome of the random-grid upper-bound construction.

    ``estimate`` is the needle probability of the kept realization
    ``coloring``; ``averaged`` estimates the same probability with the cell
    colors redrawn for every needle, i.e. averaged over the random coloring.
    """

    coloring: object
    estimate: Estimate
    averaged: Estimate
    attempts: int


@dataclass
class BoundsReport:
    k: int
    lower: Fraction
    lower_witness: str
    upper: float
    upper_witness: dict
    upper_estimate: Estimate
    candidates: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return float(self.lower) <= self.upper + 4.0 * self.upper_estimate.stderr

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "lower": {
                "value": str(self.lower),
                "decimal": float(self.lower),
                "witness": self.lower_witness,
            },
            "upper": {
                "value": self.upper,
                "witness": self.upper_witness,
                "estimate": self.upper_estimate.to_dict(),
            },
            "candidates": [
                {"witness": w, "estimate": e.to_dict()} for w, e in self.candidates
            ],
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


def lower_bound(k: int) -> tuple[Fraction, str]:
    """Largest m_k over the graph catalog; ties keep the earlier entry."""
    best, witness = None, None
    for name, g in catalog():
        value = solve_mk(g, k).value
        if best is None or value > best:
            best, witness = value, name
    return best, witness


def estimate_random_grid_average(R: float, n: int, k: int, samples: int, seed: int,
                                 n_threads: int = 1) -> Estimate:
    """Needle probability averaged over the random grid coloring itself.

    For each needle only the colors of the cells holding its two endpoints
    matter; they are drawn fresh, and shared when both endpoints fall in the
    same cell (after periodic wrapping).
    """
    side = R / n

    def work(i, size):
        rng = child_stream(seed, i)
        ax = rng.random(size) * R
        ay = rng.random(size) * R
        theta = rng.random(size) * (2.0 * math.pi)
        ca = rng.integers(0, k, size)
        cb = rng.integers(0, k, size)
        bx, by = ax + np.cos(theta), ay + np.sin(theta)
        cell = lambda x, y: (np.minimum(np.floor(np.mod(x, R) / side), n - 1),
                             np.minimum(np.floor(np.mod(y, R) / side), n - 1))
        (ix, iy), (jx, jy) = cell(ax, ay), cell(bx, by)
        same = (ix == jx) & (iy == jy)
        return int(np.count_nonzero(same | (ca == cb)))

    successes = sum(run_chunks(work, samples, n_threads))
    return Estimate.from_counts(successes, samples, seed, "needle")


def upper_bound_construction(k: int, R: float = 8.0, n: int = 16, samples: int = 1_000_000,
                             seed: int = 0, n_threads: int = 1,
                             max_attempts: int = 50) -> GridConstruction:
    """Random grid coloring whose needle probability is at most about ``1/k``.

    Realizations are drawn with seeds derived from ``seed`` until one has
    ``p_hat <= 1/k + 4*stderr``.
    """
    if k < 1:
        raise InvalidConstructionError(f"k must be >= 1, got {k}")
    # validates R and n before any sampling
    make_random_grid(R, n, k, make_stream(seed))
    averaged = estimate_random_grid_average(R, n, k, samples, derive_seed(seed, 0), n_threads)
    for attempt in range(1, max_attempts + 1):
        grid = make_random_grid(R, n, k, make_stream(derive_seed(seed, attempt, 0)))
        est = estimate_p_per(grid, samples, derive_seed(seed, attempt, 1), n_threads)
        if est.p_hat <= 1.0 / k + 4.0 * est.stderr:
            return GridConstruction(grid, est, averaged, attempt)
    raise InvalidConstructionError(
        f"no realization reached 1/{k} within {max_attempts} attempts"
    )


def table_bound_gap(table) -> float:
    """Bound on ``|p_per - p_table|`` for the square table ``[-R, R]^2``."""
    table = table if isinstance(table, Rect) else Rect(float(table))
    return KAPPA * inner_border_area(table, 1.0) / table.area


def min_edges_non_k_colorable(p: Estimate) -> int:
    """Fewest edges any non-k-colorable unit-distance graph can have, given ``p``.

    A non-k-colorable graph with ``m`` edges forces every k-coloring of the
    plane to have probability at least ``1/m``. Using the upper edge
    ``p_hat + 4*stderr`` of the estimate, every ``m`` with ``1/m`` above it is
    excluded; the smallest surviving ``m`` is returned.
    """
    upper = p.upper
    if not upper < 1.0:
        raise NoInformationError(
            f"estimate upper edge {upper:.6g} does not exclude any graph size"
        )
    if upper <= 0.0:
        raise NoInformationError("a zero estimate excludes every graph size; nothing to report")
    m = max(1, math.ceil(1.0 / upper))
    while m > 1 and 1.0 / (m - 1) <= upper:
        m -= 1
    while 1.0 / m > upper:
        m += 1
    return m


def _seed_for(seed: int, s: float) -> int:
    (bits,) = struct.unpack("<Q", struct.pack("<d", float(s)))
    return derive_seed(seed, bits >> 32, bits & 0xFFFFFFFF)


@dataclass(frozen=True)
class HexOptimization:
    s_star: float
    points: list

    @property
    def best(self) -> SweepPoint:
        return next(p for p in self.points if p.parameter == self.s_star)

    @property
    def sweep(self) -> list:
        return sorted(self.points, key=lambda p: p.parameter)


INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def optimize_hex_edge(s_min: float, s_max: float, budget: int = 25, samples: int = 1_000_000,
                      seed: int = 0, family=Hex3Coloring, refine_steps: int = 12,
                      n_threads: int = 1) -> HexOptimization:
    """Minimize the needle probability over the edge length of ``family``.

    A log-spaced sweep of ``budget`` points locates the best bracket, then
    golden-section steps refine inside it. Each evaluation uses a seed derived
    from ``(seed, s)``, so the objective is a fixed function of ``s``.
    """
    if not 0 < s_min < s_max:
        raise InvalidArgumentError(f"need 0 < s_min < s_max, got {s_min}, {s_max}")
    if budget < 3:
        raise InvalidArgumentError(f"budget must be >= 3, got {budget}")
    cache: dict[float, SweepPoint] = {}

    def f(s):
        s = float(s)
        if s not in cache:
            est = estimate_p_per(family(s), samples, _seed_for(seed, s), n_threads)
            cache[s] = SweepPoint(s, est)
        return cache[s].estimate.p_hat

    grid = np.geomspace(s_min, s_max, budget)
    grid[0], grid[-1] = s_min, s_max
    values = [f(s) for s in grid]
    i = int(np.argmin(values))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, budget - 1)]

    x1, x2 = b - INV_PHI * (b - a), a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(refine_steps):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)

    points = list(cache.values())
    best = min(points, key=lambda p: (p.estimate.p_hat, p.parameter))
    return HexOptimization(best.parameter, points)


def build_bounds_report(k: int, samples: int = 1_000_000, seed: int = 0, R: float = 8.0,
                        n: int = 16, n_threads: int = 1) -> BoundsReport:
    """Lower bound from the graph catalog, upper bound from the best known coloring."""
    lower, lower_name = lower_bound(k)
    construction = upper_bound_construction(k, R, n, samples, seed, n_threads)
    candidates = [(
        {"type": "random_grid", "R": R, "n": n, "k": k, "attempts": construction.attempts},
        construction.estimate,
    )]
    notes = [
        f"lower bound: m_{k} of catalog graph {lower_name!r}",
        f"random grid averaged over colorings: p_hat={construction.averaged.p_hat:.6f}",
    ]
    named = {2: StripeColoring(math.sqrt(3.0) / 2.0), 3: Hex3Coloring(0.61)}
    if k in named:
        c = named[k]
        candidates.append((c.to_dict(), estimate_p_per(c, samples, derive_seed(seed, 99), n_threads)))
    witness, est = min(candidates, key=lambda we: we[1].p_hat)
    return BoundsReport(k, lower, lower_name, est.p_hat, witness, est, candidates, notes)
