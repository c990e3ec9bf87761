"""Candidate disk sets for the covering integer programs."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist

from . import kernels
from .geometry import TOL, Disk, Point, SpatialIndex

ORIGINS = ("singleton", "pair", "triple", "kgon")
DEDUP_GRID = 1e-9
# triples with a circumradius this many times the point-set diameter are noise
DEGENERATE_FACTOR = 1e4


@dataclass(frozen=True)
class CandidateSet:
    centers: np.ndarray          # (k, 2)
    radii: np.ndarray            # (k,)
    covers: tuple[tuple[int, ...], ...]
    origin: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.radii)

    @property
    def disks(self) -> list[Disk]:
        return [Disk(Point(float(c[0]), float(c[1])), float(r)) for c, r in zip(self.centers, self.radii)]

    def disk(self, i: int) -> Disk:
        return Disk(Point(float(self.centers[i, 0]), float(self.centers[i, 1])), float(self.radii[i]))

    def areas(self) -> np.ndarray:
        return math.pi * self.radii ** 2

    def subset(self, keep: Sequence[int]) -> "CandidateSet":
        keep = np.asarray(keep, dtype=np.int64)
        return CandidateSet(
            self.centers[keep].copy(),
            self.radii[keep].copy(),
            tuple(self.covers[i] for i in keep),
            tuple(self.origin[i] for i in keep),
        )

    def to_json(self) -> str:
        rows = [
            {"x": float(c[0]), "y": float(c[1]), "r": float(r), "origin": o, "covers": list(cv)}
            for c, r, o, cv in zip(self.centers, self.radii, self.origin, self.covers)
        ]
        return json.dumps({"disks": rows}, indent=1) + "\n"


def _keys(centers, radii):
    return np.round(np.column_stack([centers, radii]) / DEDUP_GRID).astype(np.int64)


def _assemble(index: SpatialIndex, centers, radii, origin, existing: CandidateSet | None = None) -> CandidateSet:
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
    radii = np.asarray(radii, dtype=np.float64)
    n_old = 0 if existing is None else len(existing)
    keys = _keys(centers, radii)
    if existing is not None:
        keys = np.vstack([_keys(existing.centers, existing.radii), keys])
    # first occurrence wins; existing candidates always take precedence
    _, first = np.unique(keys, axis=0, return_index=True)
    keep = np.sort(first[first >= n_old]) - n_old
    centers = centers[keep]
    radii = radii[keep]
    origin = [origin[t] for t in keep]
    covers = tuple(index.query_many(centers, radii, TOL))
    if existing is None:
        return CandidateSet(centers, radii, covers, tuple(origin))
    return CandidateSet(
        np.vstack([existing.centers, centers]),
        np.concatenate([existing.radii, radii]),
        existing.covers + covers,
        existing.origin + tuple(origin),
    )


def enumerate_gmc(points: Sequence) -> CandidateSet:
    """Singleton, pair and acute-triple disks of ``points`` (deduplicated).

    Order is singletons, then pairs (i < j), then triples (i < j < k).
    """
    xy = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = len(xy)
    if n < 1:
        raise ValueError("enumerate_gmc needs at least one point")
    centers = [xy]
    radii = [np.zeros(n)]
    origin = ["singleton"] * n
    if n >= 2:
        ii, jj = np.triu_indices(n, 1)
        centers.append(0.5 * (xy[ii] + xy[jj]))
        radii.append(0.5 * np.hypot(xy[ii, 0] - xy[jj, 0], xy[ii, 1] - xy[jj, 1]))
        origin += ["pair"] * len(ii)
    if n >= 3:
        diameter = float(pdist(xy).max())
        _, tri = kernels.acute_triples(xy[:, 0], xy[:, 1], DEGENERATE_FACTOR * diameter)
        centers.append(tri[:, :2])
        radii.append(tri[:, 2])
        origin += ["triple"] * len(tri)
    return _assemble(SpatialIndex(xy), np.vstack(centers), np.concatenate(radii), origin)


def kgon_disks(p, k: int, ell: float) -> list[Disk]:
    """Disks centred on a regular k-gon of side ``ell`` around ``p``, each touching ``p``."""
    radius = ell / (2.0 * math.sin(math.pi / k))
    out = []
    for t in range(k):
        a = 2.0 * math.pi * t / k
        out.append(Disk(Point(p[0] + radius * math.cos(a), p[1] + radius * math.sin(a)), radius))
    return out


def augment_kgons(C: CandidateSet, inst, ell: float) -> CandidateSet:
    if ell <= 0:
        raise ValueError("ell must be positive")
    new = [d for p, k in zip(inst.points, inst.kappa) if k > 1 for d in kgon_disks(p, k, ell)]
    if not new:
        return C
    centers = np.array([[d.center.x, d.center.y] for d in new])
    radii = np.array([d.radius for d in new])
    return _assemble(SpatialIndex(inst.xy()), centers, radii, ["kgon"] * len(new), existing=C)


def prune_by_alpha(C: CandidateSet, gmc_sol, alpha: float) -> CandidateSet:
    """Drop candidates larger than ``alpha`` times the largest radius in ``gmc_sol``.

    ``gmc_sol`` may be a solution object (anything with ``max_radius``) or
    the radius itself.
    """
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if math.isinf(alpha):
        return C
    rmax = float(getattr(gmc_sol, "max_radius", gmc_sol))
    bound = alpha * rmax
    keep = np.nonzero(C.radii <= bound + 1e-12 * max(1.0, bound))[0]
    return C.subset(keep)
