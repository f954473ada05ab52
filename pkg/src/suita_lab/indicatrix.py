"""
Indicatrix volumes and comparisons.

The indicatrix of a metric oracle is ``I = {v : tau(v) < 1}``.  Its volume
is estimated by hit-or-miss Monte Carlo in a Euclidean ball of radius
``R`` known to contain ``I``.  Samples come from a counter-based Philox
stream keyed by ``(seed, shard)``, so a run is reproducible bit for bit
given ``(seed, N, shard_size)`` no matter how many worker threads evaluate
the shards.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import SuitaLabError
from .metrics import Ellipsoid2C, MetricOracle

__all__ = [
    "VolumeEstimate",
    "shard_generator",
    "unit_directions",
    "sample_ball",
    "bounding_radius",
    "mc_volume",
    "ellipsoid_volume",
    "hermitian_volume",
    "exact_volume",
    "radial_distance",
    "sandwich_check",
    "flip_fraction",
    "near_boundary_fraction",
    "default_workers",
    "UnboundedIndicatrixError",
]

DEFAULT_SHARD_SIZE = 1 << 17
DEFAULT_SAFETY = 1.25


class UnboundedIndicatrixError(SuitaLabError, ValueError):
    """The metric vanishes in some direction."""


@dataclass(frozen=True)
class VolumeEstimate:
    value: float
    std_error: float
    samples: int
    seed: int
    bounding_radius: float

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "VolumeEstimate":
        return cls(**json.loads(text))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SUITA_LAB_THREADS", "1")))
    except ValueError:
        return 1


def shard_generator(seed: int, shard: int) -> np.random.Generator:
    """Independent Philox stream for shard ``shard`` of run ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(shard,))))


def unit_directions(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniform unit vectors in C^n."""
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, :n] + 1j * g[:, n:]


def sample_ball(n: int, count: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of the ball of ``radius`` in C^n (= R^{2n})."""
    d = unit_directions(n, count, rng)
    r = radius * rng.random(count) ** (1.0 / (2 * n))
    return d * r[:, None]


def _probe_directions(n: int, n_dirs: int, seed: int) -> np.ndarray:
    axes = np.eye(n, dtype=complex)
    return np.concatenate([axes, unit_directions(n, n_dirs, shard_generator(seed, 2 ** 31))])


def bounding_radius(oracle: MetricOracle, n_dirs: int = 4096, safety: float = DEFAULT_SAFETY,
                    seed: int = 0) -> float:
    """``safety / min tau(omega)`` over sampled unit directions (and the axes)."""
    dirs = _probe_directions(oracle.n, n_dirs, seed)
    vals = np.asarray(oracle(dirs), dtype=float)
    m = float(np.min(vals))
    if not m > 0:
        raise UnboundedIndicatrixError("metric vanishes in a sampled direction")
    return safety / m


def _count_shard(oracle, n, radius, seed, shard, size):
    pts = sample_ball(n, size, radius, shard_generator(seed, shard))
    return int(np.count_nonzero(np.asarray(oracle(pts)) < 1.0))


def _ball_volume(n, radius):
    return math.pi ** n / math.factorial(n) * radius ** (2 * n)


def mc_volume(oracle: MetricOracle, N: int, seed: int, radius: float | None = None,
              shard_size: int = DEFAULT_SHARD_SIZE, workers: int | None = None,
              n_dirs: int = 4096) -> VolumeEstimate:
    """Hit-or-miss volume of the indicatrix of ``oracle``.

    The estimate is ``hits/N * vol(B_R)`` with binomial standard error.
    Shards are counted independently and summed in shard order.
    """
    if N <= 0:
        raise ValueError("N must be positive")
    if radius is None:
        radius = bounding_radius(oracle, n_dirs=n_dirs, seed=seed)
    n = oracle.n
    sizes = [shard_size] * (N // shard_size)
    if N % shard_size:
        sizes.append(N % shard_size)
    workers = default_workers() if workers is None else workers
    jobs = [(oracle, n, radius, seed, i, s) for i, s in enumerate(sizes)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            counts = list(ex.map(lambda a: _count_shard(*a), jobs))
    else:
        counts = [_count_shard(*a) for a in jobs]
    hits = sum(counts)
    box = _ball_volume(n, radius)
    f = hits / N
    return VolumeEstimate(f * box, box * math.sqrt(f * (1 - f) / N), N, seed, radius)


def ellipsoid_volume(E: Ellipsoid2C) -> float:
    """``(pi^2/2) A B``."""
    if not (E.A > 0 and E.B > 0):
        raise ValueError("ellipsoid axes must be positive")
    return 0.5 * math.pi ** 2 * E.A * E.B


def hermitian_volume(G) -> float:
    """Volume of ``{v^* G v < 1}`` in C^n: ``pi^n / n! / det G``."""
    G = np.asarray(G, dtype=complex)
    n = G.shape[0]
    det = np.linalg.det(G).real
    if not det > 0:
        raise ValueError("Hermitian form must be positive definite")
    return math.pi ** n / math.factorial(n) / det


def exact_volume(oracle: MetricOracle) -> float | None:
    """Closed-form indicatrix volume when the oracle is a Hermitian form."""
    if oracle.hermitian is None:
        return None
    return hermitian_volume(oracle.hermitian)


def radial_distance(o1: MetricOracle, o2: MetricOracle, n_dirs: int = 4096, seed: int = 0) -> float:
    """``sup |1/tau1(w) - 1/tau2(w)|`` over sampled unit directions.

    The radial functions of balanced indicatrices; for convex ones this
    lower-bounds their Hausdorff distance.
    """
    dirs = _probe_directions(o1.n, n_dirs, seed)
    t1 = np.asarray(o1(dirs), dtype=float)
    t2 = np.asarray(o2(dirs), dtype=float)
    if np.any(t1 <= 0) or np.any(t2 <= 0):
        raise UnboundedIndicatrixError("metric vanishes in a sampled direction")
    return float(np.max(np.abs(1.0 / t1 - 1.0 / t2)))


def sandwich_check(inner: Ellipsoid2C, mc: VolumeEstimate, outer: Ellipsoid2C, k: float = 3.0) -> bool:
    """Whether an MC volume is compatible with lying between two ellipsoids."""
    lo, hi = ellipsoid_volume(inner), ellipsoid_volume(outer)
    if lo > hi:
        return False
    return lo <= mc.value + k * mc.std_error and mc.value - k * mc.std_error <= hi


def flip_fraction(o1: MetricOracle, o2: MetricOracle, N: int, seed: int, radius: float) -> float:
    """Fraction of uniform points of ``B_R`` whose indicatrix membership differs."""
    pts = sample_ball(o1.n, N, radius, shard_generator(seed, 0))
    return float(np.mean((np.asarray(o1(pts)) < 1) != (np.asarray(o2(pts)) < 1)))


def near_boundary_fraction(oracle: MetricOracle, N: int, seed: int, radius: float | None = None,
                           eps: float = 1e-6) -> float:
    """Fraction of samples with ``|tau - 1| < eps``."""
    if radius is None:
        radius = bounding_radius(oracle, seed=seed)
    pts = sample_ball(oracle.n, N, radius, shard_generator(seed, 0))
    return float(np.mean(np.abs(np.asarray(oracle(pts)) - 1.0) < eps))
