"""Monte Carlo needle estimators and exact stripe quadrature.

All estimators split the work into fixed-size chunks. Chunk ``i`` draws from
its own stream derived from ``(seed, i)`` and reports integer counts, so the
result is bit-identical for any ``n_threads``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from sklearn.base import BaseEstimator

from ._rng import CHUNK_SIZE, child_stream, chunk_sizes, fresh_seed
from .exceptions import InvalidArgumentError
from .geometry import Rect, sample_needles
from .graphs import EmbeddedGraph, verify_unit_embedding

PROCESSES = ("needle", "graph_throw", "table")
Z95 = 1.959963984540054


@dataclass(frozen=True)
class Estimate:
    p_hat: float
    n: int
    stderr: float
    ci95: tuple[float, float]
    seed: int
    process: str
    successes: int
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_counts(cls, successes: int, n: int, seed: int, process: str, **extra) -> "Estimate":
        if n < 1:
            raise InvalidArgumentError("an estimate needs at least one sample")
        p = successes / n
        se = math.sqrt(p * (1.0 - p) / n)
        ci = (max(0.0, p - Z95 * se), min(1.0, p + Z95 * se))
        return cls(p, int(n), se, ci, int(seed), process, int(successes), dict(extra))

    @property
    def upper(self) -> float:
        """Conservative upper edge ``p_hat + 4 * stderr``."""
        return self.p_hat + 4.0 * self.stderr

    def to_dict(self) -> dict:
        out = {
            "p_hat": self.p_hat,
            "n": self.n,
            "stderr": self.stderr,
            "ci95": list(self.ci95),
            "seed": self.seed,
            "process": self.process,
            "successes": self.successes,
        }
        out.update(self.extra)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Estimate":
        known = {"p_hat", "n", "stderr", "ci95", "seed", "process", "successes"}
        return cls(
            float(d["p_hat"]), int(d["n"]), float(d["stderr"]), tuple(d["ci95"]),
            int(d["seed"]), d["process"], int(d.get("successes", round(d["p_hat"] * d["n"]))),
            {k: v for k, v in d.items() if k not in known},
        )


@dataclass(frozen=True)
class JointDistribution:
    """Counts of ``(color(A), color(B))`` pairs; ``counts[c1, c2]``."""

    counts: np.ndarray
    seed: int

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / self.n

    @property
    def diagonal_sum(self) -> float:
        return float(np.trace(self.counts)) / self.n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "seed": self.seed,
            "counts": self.counts.tolist(),
            "probabilities": self.probabilities.tolist(),
        }


def combined_stderr(a: Estimate, b: Estimate) -> float:
    return math.hypot(a.stderr, b.stderr)


def run_chunks(work, n: int, n_threads: int = 1, chunk: int = CHUNK_SIZE) -> list:
    """Apply ``work(index, size)`` to every chunk of ``n`` samples, in index order."""
    jobs = list(enumerate(chunk_sizes(n, chunk)))
    if n_threads is None or n_threads <= 1 or len(jobs) == 1:
        return [work(i, size) for i, size in jobs]
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        return list(pool.map(lambda job: work(*job), jobs))


def _pair_counts(c, ax, ay, bx, by) -> np.ndarray:
    k = c.k
    ca = c.colors(ax, ay)
    cb = c.colors(bx, by)
    return np.bincount(ca * k + cb, minlength=k * k).reshape(k, k)


def _resolve_seed(seed):
    return fresh_seed() if seed is None else int(seed)


def _check_n(n):
    if int(n) < 1:
        raise InvalidArgumentError(f"sample count must be >= 1, got {n}")
    return int(n)


class NeedleEstimator(BaseEstimator):
    """Process 1: base point uniform in the period cell, direction uniform.

    ``fit(coloring)`` sets ``estimate_`` (monochromatic probability),
    ``joint_`` (joint distribution of endpoint colors) and ``seed_``.
    """

    def __init__(self, n_samples=1_000_000, seed=None, n_threads=1):
        self.n_samples = n_samples
        self.seed = seed
        self.n_threads = n_threads

    def fit(self, coloring, y=None):
        n = _check_n(self.n_samples)
        seed = _resolve_seed(self.seed)
        lattice = coloring.lattice

        def work(i, size):
            ax, ay, _, bx, by = sample_needles(lattice, child_stream(seed, i), size)
            return _pair_counts(coloring, ax, ay, bx, by)

        counts = sum(run_chunks(work, n, self.n_threads))
        self.seed_ = seed
        self.joint_ = JointDistribution(counts, seed)
        self.estimate_ = Estimate.from_counts(int(np.trace(counts)), n, seed, "needle")
        return self


class GraphThrowEstimator(BaseEstimator):
    """Process 2: throw a rotated copy of a unit-distance graph, pick one edge.

    Per sample: offset ``A0`` uniform in the cell, rotation angle uniform, edge
    index uniform. The needle runs from the rotated first endpoint of the edge
    to its rotated second endpoint, both shifted by ``A0``.
    """

    def __init__(self, graph=None, n_samples=1_000_000, seed=None, n_threads=1):
        self.graph = graph
        self.n_samples = n_samples
        self.seed = seed
        self.n_threads = n_threads

    def fit(self, coloring, y=None):
        g = self.graph
        if not isinstance(g, EmbeddedGraph) or g.dim != 2 or g.n_edges == 0:
            raise InvalidArgumentError("graph throwing needs a planar graph with edges")
        if not verify_unit_embedding(g):
            raise InvalidArgumentError("graph is not a unit-distance embedding")
        n = _check_n(self.n_samples)
        seed = _resolve_seed(self.seed)
        (ux, uy), (vx, vy) = coloring.lattice.u, coloring.lattice.v
        e = g.edge_array
        start, end = g.vertices[e[:, 0]], g.vertices[e[:, 1]]

        def work(i, size):
            rng = child_stream(seed, i)
            t = rng.random(size)
            s = rng.random(size)
            theta = rng.random(size) * (2.0 * math.pi)
            j = rng.integers(0, g.n_edges, size)
            x0, y0 = t * ux + s * vx, t * uy + s * vy
            cos, sin = np.cos(theta), np.sin(theta)
            z, w = start[j], end[j]
            ax = x0 + cos * z[:, 0] - sin * z[:, 1]
            ay = y0 + sin * z[:, 0] + cos * z[:, 1]
            bx = x0 + cos * w[:, 0] - sin * w[:, 1]
            by = y0 + sin * w[:, 0] + cos * w[:, 1]
            return _pair_counts(coloring, ax, ay, bx, by)

        counts = sum(run_chunks(work, n, self.n_threads))
        self.seed_ = seed
        self.joint_ = JointDistribution(counts, seed)
        self.estimate_ = Estimate.from_counts(int(np.trace(counts)), n, seed, "graph_throw")
        return self


class TableEstimator(BaseEstimator):
    """Process 3 on the table ``[-R, R]^2`` by rejection sampling.

    Draws ``(A, theta)`` with ``A`` uniform on the table and keeps the needle
    only if its far end lands on the table too. ``n_samples`` counts accepted
    needles; the number of draws used is reported alongside.
    """

    def __init__(self, half_width=10.0, n_samples=1_000_000, seed=None, n_threads=1):
        self.half_width = half_width
        self.n_samples = n_samples
        self.seed = seed
        self.n_threads = n_threads

    def fit(self, coloring, y=None):
        table = self.half_width if isinstance(self.half_width, Rect) else Rect(float(self.half_width))
        R = table.half_width
        n = _check_n(self.n_samples)
        seed = _resolve_seed(self.seed)

        def work(i):
            rng = child_stream(seed, i)
            ax = rng.uniform(-R, R, CHUNK_SIZE)
            ay = rng.uniform(-R, R, CHUNK_SIZE)
            theta = rng.random(CHUNK_SIZE) * (2.0 * math.pi)
            bx, by = ax + np.cos(theta), ay + np.sin(theta)
            keep = table.contains(bx, by)
            mono = coloring.colors(ax[keep], ay[keep]) == coloring.colors(bx[keep], by[keep])
            return np.flatnonzero(keep), mono

        wave = max(1, int(self.n_threads or 1))
        pool = ThreadPoolExecutor(max_workers=wave) if wave > 1 else None
        accepted = successes = draws = 0
        index = 0
        try:
            while accepted < n:
                ids = range(index, index + wave)
                results = list(pool.map(work, ids)) if pool else [work(i) for i in ids]
                index += wave
                for positions, mono in results:
                    need = n - accepted
                    if len(mono) >= need:
                        successes += int(np.count_nonzero(mono[:need]))
                        draws += int(positions[need - 1]) + 1
                        accepted = n
                        break
                    successes += int(np.count_nonzero(mono))
                    accepted += len(mono)
                    draws += CHUNK_SIZE
        finally:
            if pool:
                pool.shutdown()
        self.seed_ = seed
        self.draws_ = draws
        self.acceptance_rate_ = n / draws
        self.estimate_ = Estimate.from_counts(
            successes, n, seed, "table",
            half_width=R, draws=draws, acceptance_rate=self.acceptance_rate_,
        )
        return self


def estimate_p_per(c, n: int, seed=None, n_threads: int = 1) -> Estimate:
    return NeedleEstimator(n, seed, n_threads).fit(c).estimate_


def joint_distribution(c, n: int, seed=None, n_threads: int = 1) -> JointDistribution:
    return NeedleEstimator(n, seed, n_threads).fit(c).joint_


def estimate_via_graph_throw(c, g: EmbeddedGraph, n: int, seed=None, n_threads: int = 1) -> Estimate:
    return GraphThrowEstimator(g, n, seed, n_threads).fit(c).estimate_


def estimate_p_table(c, table, n: int, seed=None, n_threads: int = 1) -> Estimate:
    return TableEstimator(table, n, seed, n_threads).fit(c).estimate_


def stripe_disagreement(delta, width):
    """Probability that two points ``delta`` apart vertically get different
    stripe colors, for a uniformly placed pair."""
    d = np.mod(delta, 2.0 * width) / width
    return np.where(d <= 1.0, d, 2.0 - d)


def exact_stripe_p(width: float) -> float:
    """Monochromatic needle probability for alternating stripes of ``width``.

    Integrates the disagreement probability over the needle's vertical extent
    ``|sin(theta)|``, splitting at every kink ``sin(theta) = j * width``.
    """
    if not width > 0:
        raise InvalidArgumentError(f"stripe width must be positive, got {width}")
    cuts = [0.0]
    j = 1
    while j * width < 1.0:
        cuts.append(math.asin(j * width))
        j += 1
    cuts.append(math.pi / 2)

    def f(theta):
        return float(stripe_disagreement(math.sin(theta), width))

    total = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        val, _ = integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=200)
        total += val
    return 1.0 - total * 2.0 / math.pi
