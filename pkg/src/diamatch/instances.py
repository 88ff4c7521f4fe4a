"""Seeded random instances.

Every generator draws from ``numpy.random.Generator(PCG64)`` seeded with
``SeedSequence([seed, n, distribution code])``, so a (seed, n, distribution)
triple names the same instance on every platform.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .matching import Instance

DISTRIBUTIONS = ("uniform", "clustered", "collinear", "axis")
_CODES = {name: i for i, name in enumerate(DISTRIBUTIONS)}

CLUSTER_SPREAD = 0.03
COLLINEAR_NOISE = 1e-6


def rng_for(seed: int, *extra: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, extra)])))


def n_for_seed(seed: int, n_min: int, n_max: int) -> int:
    """Instance size used for ``seed`` when a campaign spans n_min..n_max."""
    return n_min + seed % (n_max - n_min + 1)


def random_points(rng: np.random.Generator, count: int, dist: str) -> np.ndarray:
    if dist == "uniform":
        return rng.random((count, 2))
    if dist == "clustered":
        k = max(1, count // 8)
        centers = rng.random((k, 2))
        which = rng.integers(0, k, size=count)
        return centers[which] + rng.normal(0.0, CLUSTER_SPREAD, size=(count, 2))
    if dist in ("collinear", "axis"):
        t = rng.uniform(-0.5, 0.5, size=count)
        if dist == "axis":
            return np.stack([t, np.zeros(count)], axis=1)
        base = rng.random(2)
        ang = rng.uniform(0, np.pi)
        u = np.array([np.cos(ang), np.sin(ang)])
        off = rng.normal(0.0, COLLINEAR_NOISE, size=count)
        return base + t[:, None] * u + off[:, None] * np.array([-u[1], u[0]])
    raise ValidationError(f"unknown distribution {dist!r}; choose from {DISTRIBUTIONS}")


def generate_instance(n: int, seed: int, dist: str = "uniform") -> Instance:
    if n < 1:
        raise ValidationError("n must be positive")
    if dist not in _CODES:
        raise ValidationError(f"unknown distribution {dist!r}; choose from {DISTRIBUTIONS}")
    pts = random_points(rng_for(seed, n, _CODES[dist]), 2 * n, dist)
    return Instance(tuple(map(tuple, pts[:n].tolist())), tuple(map(tuple, pts[n:].tolist())),
                    name=f"{dist}-n{n}-s{seed}")
