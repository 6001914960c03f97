"""Deterministic chunked Monte Carlo.

Every chunk draws from its own ``SeedSequence(seed, spawn_key=key)`` stream and
partial sums are reduced in task order, so an estimate is a pure function of
``(seed, samples, chunk)`` and never of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import TailDominates


@dataclass(frozen=True)
class McConfig:
    seed: int = 42
    samples: int = 10**6
    chunk: int = 10**5
    # Not part of the reproducibility key: outputs are invariant to it.
    workers: int = field(default=1, compare=False)

    def __post_init__(self):
        if self.samples < 1000:
            raise ValueError(f"samples must be >= 1000, got {self.samples}")
        if self.chunk <= 0 or self.samples % self.chunk:
            raise ValueError(f"chunk {self.chunk} must divide samples {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    @classmethod
    def make(cls, samples: int, seed: int = 42, workers: int = 1, max_chunk: int = 10**5):
        """Config with the largest chunk size <= ``max_chunk`` dividing ``samples``."""
        samples = int(samples)
        chunk = min(samples, max_chunk)
        while samples % chunk:
            chunk -= 1
        return cls(seed=seed, samples=samples, chunk=chunk, workers=workers)

    def with_samples(self, samples: int) -> "McConfig":
        return McConfig.make(samples, seed=self.seed, workers=self.workers, max_chunk=self.chunk)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    tail: float | None = None

    @property
    def total(self) -> float:
        return self.mean + (self.tail or 0.0)

    def scaled(self, factor: float) -> "McEstimate":
        tail = None if self.tail is None else self.tail * factor
        return McEstimate(self.mean * factor, self.stderr * abs(factor), self.samples, self.seed, tail)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "tail": self.tail,
        }


@dataclass(frozen=True)
class ChunkStats:
    n: int
    total: float
    total_sq: float


Kernel = Callable[[np.random.Generator, int], np.ndarray]


def rng_for(seed: int, key: Sequence[int]) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))


def run_tasks(kernel: Callable[[np.random.Generator, int, tuple], np.ndarray],
              tasks: Sequence[tuple[tuple, int]], seed: int, workers: int = 1) -> list[ChunkStats]:
    """Evaluate ``kernel(rng, n, key)`` for every ``(key, n)`` task.

    The kernel returns one value per sample; only sums are kept.
    """

    def one(task):
        key, n = task
        values = np.asarray(kernel(rng_for(seed, key), n, key), dtype=float)
        if values.shape != (n,):
            raise ValueError(f"kernel returned shape {values.shape}, expected ({n},)")
        return ChunkStats(n, math.fsum(values), math.fsum(values * values))

    if workers <= 1 or len(tasks) <= 1:
        return [one(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, tasks))


def pooled(stats: Sequence[ChunkStats]) -> tuple[float, float, int]:
    """Mean, standard error of the mean, and count from ordered chunk sums."""
    n = sum(s.n for s in stats)
    total = math.fsum(s.total for s in stats)
    total_sq = math.fsum(s.total_sq for s in stats)
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0) * n / max(n - 1, 1)
    return mean, math.sqrt(var / n), n


def mean_estimate(kernel: Kernel, cfg: McConfig, stream: int = 0) -> McEstimate:
    """Plain (unstratified) Monte Carlo mean of ``kernel`` samples."""
    n_chunks = cfg.samples // cfg.chunk
    tasks = [((stream, i), cfg.chunk) for i in range(n_chunks)]
    stats = run_tasks(lambda rng, n, key: kernel(rng, n), tasks, cfg.seed, cfg.workers)
    mean, se, n = pooled(stats)
    return McEstimate(mean, se, n, cfg.seed)


# -- radial stratification -------------------------------------------------


def ball_volume(radius, dim: int):
    return (4.0 / 3.0 * np.pi * radius**3) if dim == 3 else (np.pi * radius**2)


def shell_edges(r_inner: float, r_trunc: float, per_octave: int = 2) -> np.ndarray:
    """Radii ``0 < r_inner <= ... < r_trunc/2 < r_trunc``, geometric above ``r_inner``.

    ``r_trunc/2`` is always an edge so the outermost octave is a union of strata.
    """
    if r_trunc <= 2.0 * r_inner:
        raise ValueError("r_trunc must exceed twice the inner radius")
    ratio = 2.0 ** (1.0 / per_octave)
    edges = [r_trunc]
    while edges[-1] / ratio > r_inner * (1 + 1e-12):
        edges.append(edges[-1] / ratio)
    edges.append(r_inner)
    return np.array([0.0] + edges[::-1])


def allocate(weights: np.ndarray, total: int, floor_frac: float = 0.02) -> np.ndarray:
    """Largest-remainder split of ``total`` proportional to ``weights`` with a floor."""
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    w = np.maximum(w, floor_frac)
    w = w / w.sum()
    raw = w * total
    counts = np.floor(raw).astype(int)
    short = total - counts.sum()
    order = np.argsort(-(raw - counts), kind="stable")
    counts[order[:short]] += 1
    return counts


def sample_radial(rng: np.random.Generator, n: int, a: float, b: float, dim: int):
    """Points uniform in the shell ``a <= |x| <= b`` of R^dim; returns (radii, unit dirs)."""
    u = rng.random(n)
    r = (a**dim + u * (b**dim - a**dim)) ** (1.0 / dim)
    g = rng.standard_normal((n, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return r, g


def radial_integral(f: Callable[[np.random.Generator, np.ndarray, np.ndarray], np.ndarray],
                    dim: int, r_inner: float, r_trunc: float, cfg: McConfig,
                    decay: float, stream: int = 0, tail_limit: float = 0.1) -> McEstimate:
    """Stratified estimate of ``\\int_{|x| < r_trunc} f(x) dx`` plus a power-law tail.

    ``f(rng, r, dirs)`` evaluates the integrand at points ``r * dirs`` (relative to
    the stratification centre). ``decay`` is the exponent ``q`` of the radial
    density, i.e. ``\\int_{shell} f ~ r^{-q} dr``; the tail beyond ``r_trunc`` is
    extrapolated from the outermost octave as ``octave / (2**(q-1) - 1)``.
    """
    if decay <= 1:
        raise ValueError("radial density must decay faster than 1/r")
    edges = shell_edges(r_inner, r_trunc)
    lo, hi = edges[:-1], edges[1:]
    vols = ball_volume(hi, dim) - ball_volume(lo, dim)
    # Neyman-style allocation against the expected |f| scale: flat inside, power law outside.
    scale = np.minimum(1.0, (r_inner / np.maximum(lo, r_inner)) ** (decay + dim - 1))
    counts = allocate(vols * scale, cfg.samples)

    tasks = []
    for k, n_k in enumerate(counts):
        for j, start in enumerate(range(0, int(n_k), cfg.chunk)):
            tasks.append(((stream, k, j), min(cfg.chunk, int(n_k) - start)))

    def kernel(rng, n, key):
        k = key[1]
        r, dirs = sample_radial(rng, n, lo[k], hi[k], dim)
        return f(rng, r, dirs)

    stats = run_tasks(kernel, tasks, cfg.seed, cfg.workers)
    per_stratum: dict[int, list[ChunkStats]] = {}
    for (key, _), s in zip(tasks, stats):
        per_stratum.setdefault(key[1], []).append(s)

    means = np.zeros(len(counts))
    variances = np.zeros(len(counts))
    for k, group in per_stratum.items():
        m, se, _ = pooled(group)
        means[k] = vols[k] * m
        variances[k] = (vols[k] * se) ** 2

    outer = lo >= r_trunc / 2 * (1 - 1e-12)
    octave = means[outer].sum()
    tail = octave / (2.0 ** (decay - 1) - 1)
    inner_octave = (lo >= r_trunc / 4 * (1 - 1e-12)) & ~outer
    previous = means[inner_octave].sum()
    mean = float(means.sum())
    stderr = float(np.sqrt(variances.sum()))
    if octave > 0 and previous >= 0 and octave > previous + 3 * np.sqrt(variances[outer | inner_octave].sum()):
        raise TailDominates("integrand does not decay over the outermost octaves")
    if abs(tail) > tail_limit * abs(mean):
        raise TailDominates(f"tail {tail:.4g} exceeds {tail_limit:.0%} of estimate {mean:.4g}")
    return McEstimate(mean, stderr, int(counts.sum()), cfg.seed, float(tail))
