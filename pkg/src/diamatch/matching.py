"""Maximum squared-distance red/blue matchings.

A matching is stored as a permutation ``perm`` with red ``i`` paired to blue
``perm[i]``.  Weights are sums of squared Euclidean distances, accumulated
in red-index order so that every routine here produces bit-identical sums
for the same permutation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import SizeGuardError, ValidationError
from .geom import Point2, Tolerance, as_point

BRUTE_FORCE_MAX_N = 8


@dataclass(frozen=True)
class Instance:
    reds: Tuple[Point2, ...]
    blues: Tuple[Point2, ...]
    allow_duplicates: bool = False
    name: Optional[str] = None

    def __post_init__(self):
        reds = tuple(as_point(p) for p in self.reds)
        blues = tuple(as_point(p) for p in self.blues)
        object.__setattr__(self, "reds", reds)
        object.__setattr__(self, "blues", blues)
        if len(reds) != len(blues):
            raise ValidationError(
                f"|R| = {len(reds)} but |B| = {len(blues)}: colour classes must have equal size")
        if not reds:
            raise ValidationError("instance must contain at least one red and one blue point")
        shared = set(reds) & set(blues)
        if shared:
            raise ValidationError(f"point {sorted(shared)[0]} is both red and blue")
        if not self.allow_duplicates:
            for label, pts in (("red", reds), ("blue", blues)):
                if len(set(pts)) != len(pts):
                    raise ValidationError(f"duplicate {label} point")

    @property
    def n(self) -> int:
        return len(self.reds)

    def arrays(self):
        return np.asarray(self.reds, dtype=float), np.asarray(self.blues, dtype=float)

    def diameter(self) -> float:
        pts = np.asarray(self.reds + self.blues, dtype=float)
        diff = pts[:, None, :] - pts[None, :, :]
        return float(np.sqrt((diff ** 2).sum(-1).max()))

    def transformed(self, fn) -> "Instance":
        return Instance(tuple(fn(p) for p in self.reds), tuple(fn(p) for p in self.blues),
                        self.allow_duplicates, self.name)


@dataclass(frozen=True)
class Matching:
    perm: Tuple[int, ...]
    weight: float

    def pairs(self, instance: Instance):
        return [(instance.reds[i], instance.blues[j]) for i, j in enumerate(self.perm)]


def weight_matrix(instance: Instance) -> np.ndarray:
    """``W[i, j]`` = squared distance from red ``i`` to blue ``j``."""
    r, b = instance.arrays()
    dx = r[:, None, 0] - b[None, :, 0]
    dy = r[:, None, 1] - b[None, :, 1]
    return dx * dx + dy * dy


def permutation_weight(W: np.ndarray, perm: Sequence[int]) -> float:
    total = float(W[0, perm[0]])
    for i in range(1, len(perm)):
        total += float(W[i, perm[i]])
    return total


def make_matching(instance: Instance, perm: Sequence[int]) -> Matching:
    perm = tuple(int(j) for j in perm)
    if sorted(perm) != list(range(instance.n)):
        raise ValidationError(f"{perm} is not a permutation of 0..{instance.n - 1}")
    return Matching(perm, permutation_weight(weight_matrix(instance), perm))


# -- assignment solver ------------------------------------------------------

def solve_assignment(cost: np.ndarray):
    """Minimum-cost assignment by the O(n^3) shortest-augmenting-path method.

    Returns ``(perm, u, v)`` where row ``i`` is assigned column ``perm[i]``
    and the potentials satisfy ``u[i] + v[j] <= cost[i, j]`` with equality
    on assigned cells.
    """
    cost = np.asarray(cost, dtype=float)
    n = cost.shape[0]
    if cost.shape != (n, n):
        raise ValidationError("cost matrix must be square")
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    owner = np.zeros(n + 1, dtype=np.int64)  # owner[j]: 1-based row holding column j
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = owner[j0]
            free = ~used[1:]
            cur = cost[i0 - 1] - u[i0] - v[1:]
            better = free & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            masked = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            cols = np.flatnonzero(used)
            u[owner[cols]] += delta
            v[cols] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    perm = np.empty(n, dtype=np.int64)
    perm[owner[1:] - 1] = np.arange(n)
    return perm, u[1:], v[1:]


def _perfect_matching(allowed: np.ndarray):
    """Any perfect matching in a boolean bipartite adjacency, or None."""
    n = allowed.shape[0]
    match_col = [-1] * n
    adj = [np.flatnonzero(allowed[i]).tolist() for i in range(n)]

    def augment(i, seen):
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_col[j] < 0 or augment(match_col[j], seen):
                    match_col[j] = i
                    return True
        return False

    for i in range(n):
        if not augment(i, [False] * n):
            return None
    perm = [0] * n
    for j, i in enumerate(match_col):
        perm[i] = j
    return perm


def _completion_cost(r: np.ndarray, budget: float) -> bool:
    """True iff the square reduced-cost block has an assignment of cost <= budget."""
    if r.shape[0] == 0:
        return budget >= 0
    if budget < 0:
        return False
    found = _perfect_matching(r <= budget)
    if found is None:
        return False
    if sum(r[i, j] for i, j in enumerate(found)) <= budget:
        return True
    perm, _, _ = solve_assignment(r)
    return float(r[np.arange(len(perm)), perm].sum()) <= budget


def _lex_smallest_within(r: np.ndarray, budget: float):
    """Lexicographically smallest permutation whose reduced-cost sum is <= budget."""
    n = r.shape[0]
    rows = list(range(n))
    free = list(range(n))
    perm = []
    remaining = budget
    for i in rows:
        for j in sorted(free):
            cij = r[i, j]
            if cij > remaining:
                continue
            rest_cols = [c for c in free if c != j]
            sub = r[np.ix_(rows[i + 1:], rest_cols)]
            if _completion_cost(sub, remaining - cij):
                perm.append(j)
                free.remove(j)
                remaining -= cij
                break
        else:  # pragma: no cover - the optimal permutation always completes
            raise RuntimeError("tie-break search lost the optimal permutation")
    return perm


def max_matching(instance: Instance, tol: Optional[Tolerance] = None) -> Matching:
    """Maximum-weight perfect matching under squared distances.

    Among permutations within ``tol.rel * W*`` of the optimum ``W*`` the
    lexicographically smallest one is returned.
    """
    tol = tol or Tolerance()
    W = weight_matrix(instance)
    perm, u, v = solve_assignment(-W)
    best = permutation_weight(W, perm)
    reduced = np.maximum(-W - u[:, None] - v[None, :], 0.0)
    perm = _lex_smallest_within(reduced, tol.rel * abs(best))
    return Matching(tuple(int(j) for j in perm), permutation_weight(W, perm))


def min_matching(instance: Instance) -> Matching:
    """Minimum squared-distance perfect matching (experiment baseline)."""
    W = weight_matrix(instance)
    perm, _, _ = solve_assignment(W)
    return Matching(tuple(int(j) for j in perm), permutation_weight(W, perm))


def brute_force_max_matching(instance: Instance, tol: Optional[Tolerance] = None) -> Matching:
    """Exhaustive maximum over all n! permutations (n <= 8)."""
    tol = tol or Tolerance()
    n = instance.n
    if n > BRUTE_FORCE_MAX_N:
        raise SizeGuardError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    W = weight_matrix(instance)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    acc = W[0, perms[:, 0]].copy()
    for i in range(1, n):
        acc += W[i, perms[:, i]]
    top = acc.max()
    idx = int(np.flatnonzero(acc >= top - tol.rel * abs(top))[0])
    return Matching(tuple(int(j) for j in perms[idx]), float(acc[idx]))


# -- subset optimality ------------------------------------------------------

@dataclass(frozen=True)
class SubsetCheck:
    ok: bool
    subset: Optional[Tuple[int, ...]] = None
    improved_blues: Optional[Tuple[int, ...]] = None
    gain: float = 0.0

    def __bool__(self):
        return self.ok


def is_k_subset_maximum(instance: Instance, m: Matching, k: int,
                        tol: Optional[Tolerance] = None) -> SubsetCheck:
    """Check that every k pairs of ``m`` are a maximum matching of their points.

    On failure the first offending subset (lexicographic in red indices) is
    returned with the blue assignment that improves it.
    """
    tol = tol or Tolerance()
    if k not in (2, 3):
        raise ValidationError("k must be 2 or 3")
    n = instance.n
    if len(m.perm) != n:
        raise ValidationError("matching size does not match instance")
    if n < k:
        return SubsetCheck(True)
    W = weight_matrix(instance)
    perm = np.asarray(m.perm)
    combos = np.array(list(itertools.combinations(range(n), k)), dtype=np.int64)
    blues = perm[combos]
    current = W[combos[:, 0], blues[:, 0]].copy()
    for c in range(1, k):
        current += W[combos[:, c], blues[:, c]]
    limit = current + tol.rel * np.abs(current)
    first = None
    for sigma in itertools.permutations(range(k)):
        if sigma == tuple(range(k)):
            continue
        alt = W[combos[:, 0], blues[:, sigma[0]]].copy()
        for c in range(1, k):
            alt += W[combos[:, c], blues[:, sigma[c]]]
        bad = np.flatnonzero(alt > limit)
        if bad.size:
            b = int(bad[0])
            if first is None or b < first[0]:
                first = (b, sigma, float(alt[b] - current[b]))
    if first is None:
        return SubsetCheck(True)
    b, sigma, gain = first
    return SubsetCheck(False, tuple(int(i) for i in combos[b]),
                       tuple(int(blues[b, s]) for s in sigma), gain)


def local_search_2swap(instance: Instance, start: Matching, rng_seed=0,
                       tol: Optional[Tolerance] = None) -> Matching:
    """Swap partners of two pairs while that raises the weight.

    The scan order over pair-of-pairs is shuffled by ``rng_seed``; a swap is
    accepted only if it beats the two pairs' current sum by more than
    ``tol.rel`` relative, so the result passes ``is_k_subset_maximum(k=2)``.
    """
    tol = tol or Tolerance()
    W = weight_matrix(instance)
    perm = list(start.perm)
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    pairs = list(itertools.combinations(range(instance.n), 2))
    improved = True
    while improved:
        improved = False
        for idx in rng.permutation(len(pairs)):
            i, j = pairs[idx]
            cur = W[i, perm[i]] + W[j, perm[j]]
            alt = W[i, perm[j]] + W[j, perm[i]]
            if alt > cur + tol.rel * abs(cur):
                perm[i], perm[j] = perm[j], perm[i]
                improved = True
    return Matching(tuple(perm), permutation_weight(W, perm))


def greedy_matching(instance: Instance) -> Matching:
    """Repeatedly match the farthest remaining red/blue pair."""
    W = weight_matrix(instance)
    n = instance.n
    order = np.lexsort((np.tile(np.arange(n), n), np.repeat(np.arange(n), n), -W.ravel()))
    perm = [-1] * n
    used = [False] * n
    for flat in order:
        i, j = divmod(int(flat), n)
        if perm[i] < 0 and not used[j]:
            perm[i] = j
            used[j] = True
    return Matching(tuple(perm), permutation_weight(W, perm))


def random_matching(instance: Instance, rng_seed=0) -> Matching:
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    perm = [int(j) for j in rng.permutation(instance.n)]
    return Matching(tuple(perm), permutation_weight(weight_matrix(instance), perm))
