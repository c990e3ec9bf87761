"""Iterative clustering heuristic for the multi-coverage problem.

Step 0 shuffles the points, Step 1 clusters them with k-means and wraps
every cluster in its minimum enclosing disk, Step 2 repairs coverage level
by level, Step 3 shrinks disks whose boundary points are overcovered.
Budgets larger than the point count take a separate zero-cost route.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .geometry import TOL, Disk, Point, min_enclosing_disk
from .instance import Instance, InfeasibleInstanceError

KMEANS_MAX_ITER = 50


class HeuristicError(RuntimeError):
    pass


@dataclass(frozen=True)
class Solution:
    disks: tuple[Disk, ...]
    assignment: tuple[tuple[int, ...], ...]
    meta: dict = field(default_factory=dict, compare=False)
    method: str = "heuristic"

    @property
    def objective(self) -> float:
        return math.pi * sum(d.radius * d.radius for d in self.disks)

    @property
    def max_radius(self) -> float:
        return max((d.radius for d in self.disks), default=0.0)

    def to_dict(self, instance: Instance | None = None, timing: bool = False) -> dict:
        meta = {k: v for k, v in self.meta.items() if timing or k != "elapsed"}
        if instance is not None:
            meta.update(instance=instance.name, n=instance.n, ell=instance.ell)
        return {
            "method": self.method,
            "objective": self.objective,
            "disks": [{"x": d.center.x, "y": d.center.y, "r": d.radius} for d in self.disks],
            "meta": meta,
        }

    def to_json(self, instance: Instance | None = None, timing: bool = False) -> str:
        return json.dumps(self.to_dict(instance, timing), indent=1) + "\n"


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _inside_matrix(xy: np.ndarray, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    d = np.hypot(xy[:, None, 0] - centers[None, :, 0], xy[:, None, 1] - centers[None, :, 1])
    return d <= radii[None, :] + TOL


def _arrays(disks):
    centers = np.array([[d.center.x, d.center.y] for d in disks], dtype=np.float64).reshape(-1, 2)
    radii = np.array([d.radius for d in disks], dtype=np.float64)
    return centers, radii


def coverage(xy: np.ndarray, disks) -> np.ndarray:
    """Number of disks containing each point (tolerance-inclusive)."""
    if not disks:
        return np.zeros(len(xy), dtype=np.int64)
    centers, radii = _arrays(disks)
    return _inside_matrix(xy, centers, radii).sum(axis=1)


def kmeans(xy: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Cluster labels from k-means++ seeding and at most 50 Lloyd steps.

    Every returned cluster is non-empty as long as ``k <= len(xy)``.
    """
    n = len(xy)
    centers = np.empty((k, 2))
    first = int(rng.integers(n))
    centers[0] = xy[first]
    d2 = ((xy - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            pick = int(rng.choice(n, p=d2 / total))
        else:
            pick = int(rng.integers(n))
        centers[c] = xy[pick]
        d2 = np.minimum(d2, ((xy - centers[c]) ** 2).sum(axis=1))

    labels = np.full(n, -1)
    for _ in range(KMEANS_MAX_ITER):
        dist2 = ((xy[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new = np.argmin(dist2, axis=1)
        # reseed empty clusters with the point farthest from its own center
        for c in range(k):
            if np.any(new == c):
                continue
            own = dist2[np.arange(n), new]
            sizes = np.bincount(new, minlength=k)
            own = np.where(sizes[new] > 1, own, -1.0)
            far = int(np.argmax(own))
            if own[far] < 0:
                break
            new[far] = c
            centers[c] = xy[far]
        if np.array_equal(new, labels):
            break
        labels = new
        for c in range(k):
            pts = xy[labels == c]
            if len(pts):
                centers[c] = pts.mean(axis=0)
    return labels


def _mec(xy: np.ndarray, members) -> Disk:
    return min_enclosing_disk(xy[sorted(members)])


def _repair(xy, kappa, members: list[set], disks: list[Disk], cap: int) -> int:
    """Step 2: raise coverage one redundancy level at a time.

    Each undercovered point joins the i-th closest disk (by center distance,
    lower index on ties) that does not already contain it; the touched disks
    are refitted. A refit can uncover points that were only incidentally
    inside a disk, so the level sweep repeats until it assigns nothing.
    Returns the number of passes used.
    """
    passes, changed = 0, True
    while changed:
        passes, changed = _repair_sweep(xy, kappa, members, disks, cap, passes)
    return passes


def _repair_sweep(xy, kappa, members, disks, cap, passes):
    """One sweep over all levels; returns the pass count and whether anything moved."""
    changed = False
    for level in range(1, int(kappa.max()) + 1):
        while True:
            centers, radii = _arrays(disks)
            inside = _inside_matrix(xy, centers, radii)
            cov = inside.sum(axis=1)
            under = np.nonzero((kappa >= level) & (cov < level))[0]
            if len(under) == 0:
                break
            passes += 1
            changed = True
            if passes > cap:
                raise HeuristicError(f"coverage repair did not converge within {cap} passes")
            touched = set()
            for p in under:
                d = np.hypot(centers[:, 0] - xy[p, 0], centers[:, 1] - xy[p, 1])
                order = np.lexsort((np.arange(len(d)), d))
                free = [int(c) for c in order if not inside[p, c] and p not in members[c]]
                if not free:
                    raise HeuristicError(f"point {p} cannot reach coverage {level}")
                ranked = [int(c) for c in order[level - 1:] if int(c) in set(free)]
                c = ranked[0] if ranked else free[0]
                members[c].add(int(p))
                touched.add(c)
            for c in touched:
                disks[c] = _mec(xy, members[c])
    return passes, changed


def _finish(inst: Instance, disks: list[Disk], meta: dict) -> Solution:
    # disks are geometric, so the Step 0 shuffle vanishes once assignments
    # are recomputed against the original point order
    sol = _make_solution(inst.xy(), disks, meta)
    sol = shrink_overcovered(sol, inst)
    return Solution(sol.disks, sol.assignment, meta)


def _make_solution(xy, disks, meta) -> Solution:
    if disks:
        centers, radii = _arrays(disks)
        inside = _inside_matrix(xy, centers, radii)
        assignment = tuple(tuple(int(j) for j in np.nonzero(inside[:, c])[0]) for c in range(len(disks)))
    else:
        assignment = ()
    return Solution(tuple(disks), assignment, meta)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def solve_heuristic(inst: Instance, seed: int = 0) -> Solution:
    """Feasible cover with at most ``m`` disks; deterministic per ``seed``."""
    if not inst.gmc_feasible:
        raise InfeasibleInstanceError(f"m = {inst.m} < max kappa = {inst.kappa_max}")
    if inst.m > inst.n:
        return special_case_m_exceeds_n(inst, seed)
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(inst.n)                       # Step 0
    xy = inst.xy()[perm]
    kappa = np.asarray(inst.kappa)[perm]
    labels = kmeans(xy, inst.m, rng)                    # Step 1
    members = [set(np.nonzero(labels == c)[0].tolist()) for c in range(inst.m)]
    members = [s for s in members if s]
    disks = [_mec(xy, s) for s in members]
    cap = 10 * inst.kappa_max * inst.m
    passes = _repair(xy, kappa, members, disks, cap)     # Step 2
    meta = {"method": "heuristic", "seed": seed, "iterations": passes}
    sol = _finish(inst, disks, meta)               # Step 3
    sol.meta["elapsed"] = time.perf_counter() - t0
    return sol


def special_case_m_exceeds_n(inst: Instance, seed: int = 0) -> Solution:
    """Route for ``m > n``: zero disks first, clustering only for the leftover demand."""
    if not inst.gmc_feasible:
        raise InfeasibleInstanceError(f"m = {inst.m} < max kappa = {inst.kappa_max}")
    if inst.m <= inst.n:
        raise ValueError("special case requires m > n")
    t0 = time.perf_counter()
    xy_orig = inst.xy()
    if sum(inst.kappa) <= inst.m:
        disks = [Disk(p, 0.0) for p, k in zip(inst.points, inst.kappa) for _ in range(k)]
        meta = {"method": "heuristic", "seed": seed, "iterations": 0, "elapsed": time.perf_counter() - t0}
        return _make_solution(xy_orig, disks, meta)

    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(inst.n)
    xy = xy_orig[perm]
    kappa = np.asarray(inst.kappa)[perm]
    members = [{j} for j in range(inst.n)]
    disks = [Disk(Point(float(x), float(y)), 0.0) for x, y in xy]
    budget = inst.m - inst.n
    rounds = 0
    while budget > 0:
        cov = coverage(xy, disks)
        under = np.nonzero(cov < kappa)[0]
        if len(under) == 0:
            break
        k = min(budget, len(under))
        labels = kmeans(xy[under], k, rng)
        for c in range(k):
            grp = under[labels == c]
            if len(grp):
                members.append(set(grp.tolist()))
                disks.append(_mec(xy, members[-1]))
                budget -= 1
        rounds += 1
    passes = _repair(xy, kappa, members, disks, 10 * inst.kappa_max * inst.m)
    meta = {"method": "heuristic", "seed": seed, "iterations": rounds + passes}
    sol = _finish(inst, disks, meta)
    sol.meta["elapsed"] = time.perf_counter() - t0
    return sol


def shrink_overcovered(sol: Solution, inst: Instance) -> Solution:
    """Step 3: drop boundary points from disks while coverage stays feasible.

    Each disk is first tightened to the enclosing disk of the points it
    covers. Disks are then visited largest first; a boundary point is
    released when the refitted disk is strictly smaller and every point
    keeps its required coverage. Repeats until a full pass changes nothing.
    """
    xy = inst.xy()
    kappa = np.asarray(inst.kappa)
    members = [set(a) for a in sol.assignment]
    disks = [(_mec(xy, s) if s else d) for s, d in zip(members, sol.disks)]
    centers, radii = _arrays(disks)
    inside = _inside_matrix(xy, centers, radii) if disks else np.zeros((len(xy), 0), bool)
    # a disk is responsible for every point it geometrically contains
    members = [set(np.nonzero(inside[:, c])[0].tolist()) for c in range(len(disks))]
    cov = inside.sum(axis=1)
    changed = True
    while changed:
        changed = False
        order = sorted(range(len(disks)), key=lambda c: (-disks[c].radius, c))
        for c in order:
            improved = True
            while improved and len(members[c]) >= 2:
                improved = False
                d = disks[c]
                cand = sorted(
                    (j for j in members[c]
                     if math.hypot(xy[j, 0] - d.center.x, xy[j, 1] - d.center.y) >= d.radius - 1e-7),
                    key=lambda j: (-math.hypot(xy[j, 0] - d.center.x, xy[j, 1] - d.center.y), j),
                )
                for j in cand:
                    rest = members[c] - {j}
                    nd = _mec(xy, rest)
                    if nd.radius >= d.radius - 1e-12:
                        continue
                    col = np.hypot(xy[:, 0] - nd.center.x, xy[:, 1] - nd.center.y) <= nd.radius + TOL
                    new_cov = cov - inside[:, c] + col
                    if np.any(new_cov < kappa):
                        continue
                    members[c] = set(np.nonzero(col)[0].tolist())
                    disks[c] = nd
                    inside[:, c] = col
                    cov = new_cov
                    improved = changed = True
                    break
    return _make_solution(xy, disks, dict(sol.meta))
