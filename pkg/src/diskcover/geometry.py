"""Planar geometry: points, disks, enclosing disks and a disk-range index."""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import kernels

TOL = 1e-9


class DegenerateTriangleError(ValueError):
    pass


class Point(NamedTuple):
    x: float
    y: float


class Disk(NamedTuple):
    center: Point
    radius: float

    def area(self) -> float:
        return math.pi * self.radius * self.radius


def dist(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def disk_from_two(p, q) -> Disk:
    """Smallest disk with ``p`` and ``q`` on its boundary."""
    return Disk(Point(0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])), 0.5 * dist(p, q))


def _sorted_sq_sides(a, b, c):
    return sorted(
        (
            (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2,
            (a[0] - c[0]) ** 2 + (a[1] - c[1]) ** 2,
            (b[0] - c[0]) ** 2 + (b[1] - c[1]) ** 2,
        )
    )


def is_acute(a, b, c) -> bool:
    """True iff the triangle abc is strictly acute.

    Right, collinear and coincident configurations all count as not acute.
    """
    s0, s1, s2 = _sorted_sq_sides(a, b, c)
    return s0 + s1 > s2


def circumdisk(a, b, c) -> Disk:
    """Disk through three non-collinear points (perpendicular-bisector system)."""
    ax, ay = a[0], a[1]
    bx, by = b[0] - ax, b[1] - ay
    cx, cy = c[0] - ax, c[1] - ay
    det = 2.0 * (bx * cy - by * cx)
    scale = max(bx * bx + by * by, cx * cx + cy * cy)
    if scale == 0.0 or abs(det) <= 1e-14 * scale:
        raise DegenerateTriangleError(f"collinear points {a!r}, {b!r}, {c!r}")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / det
    uy = (bx * c2 - cx * b2) / det
    return Disk(Point(ax + ux, ay + uy), math.hypot(ux, uy))


def heron_circumradius(a, b, c) -> float:
    """Circumradius abc / (4 * area) with the area from Heron's formula."""
    la, lb, lc = sorted((dist(b, c), dist(a, c), dist(a, b)))
    # stable Heron ordering (la <= lb <= lc)
    prod = (lc + (lb + la)) * (la - (lc - lb)) * (la + (lc - lb)) * (lc + (lb - la))
    if prod <= 0.0:
        raise DegenerateTriangleError("zero-area triangle")
    return la * lb * lc / math.sqrt(prod)


def min_enclosing_disk(points: Sequence) -> Disk:
    """Smallest disk containing every point.

    Randomized incremental construction over a fixed-seed permutation, so
    the result does not depend on the caller's point order beyond rounding.
    """
    if len(points) == 0:
        raise ValueError("min_enclosing_disk of an empty point set")
    arr = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if len(arr) == 1:
        return Disk(Point(float(arr[0, 0]), float(arr[0, 1])), 0.0)
    if len(arr) == 2:
        return disk_from_two(arr[0], arr[1])
    order = np.random.default_rng(len(arr)).permutation(len(arr))
    cx, cy, r = kernels.mec(arr[order, 0], arr[order, 1])
    return Disk(Point(cx, cy), r)


def contains(d: Disk, p, tol: float = TOL) -> bool:
    return dist(d.center, p) <= d.radius + tol


class SpatialIndex:
    """Immutable disk-range index over a fixed point list.

    Backed by a k-d tree; every tree hit is re-checked with the exact
    ``contains`` predicate so results match a linear scan bit for bit.
    """

    def __init__(self, points: Sequence):
        self._xy = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        self._tree = cKDTree(self._xy) if len(self._xy) else None

    def __len__(self) -> int:
        return len(self._xy)

    @property
    def points(self) -> np.ndarray:
        return self._xy

    def query_disk(self, d: Disk, tol: float = TOL) -> list[int]:
        if self._tree is None:
            return []
        hits = self._tree.query_ball_point((d.center[0], d.center[1]), d.radius + tol + 1e-9)
        return self._exact(hits, d.center[0], d.center[1], d.radius, tol)

    def query_many(self, centers: np.ndarray, radii: np.ndarray, tol: float = TOL) -> list[tuple[int, ...]]:
        """Batch ``query_disk`` for arrays of centers (k, 2) and radii (k,)."""
        indptr, indices = self.query_many_csr(centers, radii, tol)
        flat = indices.tolist()
        bounds = indptr.tolist()
        return [tuple(flat[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]

    def query_many_csr(self, centers: np.ndarray, radii: np.ndarray, tol: float = TOL):
        """Batch query in CSR form: members of disk t are ``indices[indptr[t]:indptr[t+1]]``."""
        centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
        radii = np.asarray(radii, dtype=np.float64)
        return kernels.disk_covers(self._xy[:, 0], self._xy[:, 1], centers[:, 0], centers[:, 1], radii, tol)

    def _exact(self, hits, cx, cy, r, tol):
        if not hits:
            return []
        h = np.asarray(hits, dtype=np.int64)
        pts = self._xy[h]
        # same arithmetic as contains(): hypot(dx, dy) <= r + tol
        ok = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy) <= r + tol
        return sorted(int(j) for j in h[ok])


def build_index(points: Sequence) -> SpatialIndex:
    return SpatialIndex(points)


def query_disk(idx: SpatialIndex, d: Disk, tol: float = TOL) -> list[int]:
    return idx.query_disk(d, tol)


def obtuse_fraction_estimate(region: str, trials: int, seed: int = 0) -> float:
    """Monte Carlo fraction of random triangles that are not acute.

    Vertices are drawn uniformly from the unit square or the unit disk with
    numpy's PCG64 generator seeded by ``seed``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    if region == "unit-square":
        pts = rng.random((trials, 6))
    elif region == "unit-disk":
        rad = np.sqrt(rng.random((trials, 3)))
        ang = 2.0 * math.pi * rng.random((trials, 3))
        pts = np.empty((trials, 6))
        pts[:, 0::2] = rad * np.cos(ang)
        pts[:, 1::2] = rad * np.sin(ang)
    else:
        raise ValueError(f"unknown region {region!r}; expected 'unit-square' or 'unit-disk'")
    return kernels.count_non_acute(pts) / trials
