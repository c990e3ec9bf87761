"""Hot numeric kernels.

Every kernel exists twice: a loop version compiled with numba and a
numpy (or plain Python) version used when ``DISKCOVER_NO_NUMBA`` is set.
The public wrappers at the bottom pick one and always return the same
array layout, so callers never care which path ran.
"""
import itertools
import math

import numpy as np

from ._accel import NUMBA_ENABLED, jit

# ---------------------------------------------------------------------------
# minimum enclosing disk (iterative incremental construction)
# ---------------------------------------------------------------------------


def _circle_two(ax, ay, bx, by):
    cx = 0.5 * (ax + bx)
    cy = 0.5 * (ay + by)
    return cx, cy, 0.5 * math.hypot(ax - bx, ay - by)


def _circle_three(ax, ay, bx, by, cx, cy):
    # returns r < 0 for (near) collinear input
    bxp = bx - ax
    byp = by - ay
    cxp = cx - ax
    cyp = cy - ay
    d = 2.0 * (bxp * cyp - byp * cxp)
    if d == 0.0:
        return 0.0, 0.0, -1.0
    b2 = bxp * bxp + byp * byp
    c2 = cxp * cxp + cyp * cyp
    ux = (cyp * b2 - byp * c2) / d
    uy = (bxp * c2 - cxp * b2) / d
    return ax + ux, ay + uy, math.hypot(ux, uy)


def _inside(cx, cy, r, px, py, tol):
    return math.hypot(px - cx, py - cy) <= r + tol


def _mec_loop(xs, ys, tol):
    n = xs.shape[0]
    cx = xs[0]
    cy = ys[0]
    r = 0.0
    for i in range(1, n):
        if _inside(cx, cy, r, xs[i], ys[i], tol):
            continue
        cx = xs[i]
        cy = ys[i]
        r = 0.0
        for j in range(i):
            if _inside(cx, cy, r, xs[j], ys[j], tol):
                continue
            cx, cy, r = _circle_two(xs[i], ys[i], xs[j], ys[j])
            for k in range(j):
                if _inside(cx, cy, r, xs[k], ys[k], tol):
                    continue
                tx, ty, tr = _circle_three(xs[i], ys[i], xs[j], ys[j], xs[k], ys[k])
                if tr < 0.0:
                    # collinear: the widest pair spans all three
                    best = _circle_two(xs[i], ys[i], xs[k], ys[k])
                    alt = _circle_two(xs[j], ys[j], xs[k], ys[k])
                    if alt[2] > best[2]:
                        best = alt
                    tx, ty, tr = best
                cx, cy, r = tx, ty, tr
    return cx, cy, r


# ---------------------------------------------------------------------------
# acute-triple circumdisks
# ---------------------------------------------------------------------------


def _acute_triples_loop(xs, ys, max_r):
    n = xs.shape[0]
    cap = 1024
    out_i = np.empty(cap, dtype=np.int64)
    out_j = np.empty(cap, dtype=np.int64)
    out_k = np.empty(cap, dtype=np.int64)
    out_c = np.empty((cap, 3), dtype=np.float64)
    cnt = 0
    for i in range(n):
        for j in range(i + 1, n):
            dij = (xs[i] - xs[j]) ** 2 + (ys[i] - ys[j]) ** 2
            for k in range(j + 1, n):
                dik = (xs[i] - xs[k]) ** 2 + (ys[i] - ys[k]) ** 2
                djk = (xs[j] - xs[k]) ** 2 + (ys[j] - ys[k]) ** 2
                big = max(dij, max(dik, djk))
                if dij + dik + djk - big <= big:
                    continue
                cx, cy, r = _circle_three(xs[i], ys[i], xs[j], ys[j], xs[k], ys[k])
                if r < 0.0 or r > max_r:
                    continue
                if cnt == cap:
                    cap *= 2
                    ni = np.empty(cap, dtype=np.int64)
                    nj = np.empty(cap, dtype=np.int64)
                    nk = np.empty(cap, dtype=np.int64)
                    nc = np.empty((cap, 3), dtype=np.float64)
                    ni[:cnt] = out_i[:cnt]
                    nj[:cnt] = out_j[:cnt]
                    nk[:cnt] = out_k[:cnt]
                    nc[:cnt] = out_c[:cnt]
                    out_i, out_j, out_k, out_c = ni, nj, nk, nc
                out_i[cnt] = i
                out_j[cnt] = j
                out_k[cnt] = k
                out_c[cnt, 0] = cx
                out_c[cnt, 1] = cy
                out_c[cnt, 2] = r
                cnt += 1
    idx = np.empty((cnt, 3), dtype=np.int64)
    idx[:, 0] = out_i[:cnt]
    idx[:, 1] = out_j[:cnt]
    idx[:, 2] = out_k[:cnt]
    return idx, out_c[:cnt].copy()


def _acute_triples_numpy(xs, ys, max_r, chunk=200_000):
    n = xs.shape[0]
    if n < 3:
        return np.empty((0, 3), dtype=np.int64), np.empty((0, 3))
    ii, jj = np.triu_indices(n, 1)
    idx_parts = []
    disk_parts = []
    # expand pairs into triples (i < j < k) chunk by chunk to bound memory
    step = max(1, chunk // n)
    ks = np.arange(n)
    for start in range(0, ii.size, step):
        pi = ii[start:start + step]
        pj = jj[start:start + step]
        mask = ks[None, :] > pj[:, None]
        rows, kk = np.nonzero(mask)
        i, j, k = pi[rows], pj[rows], kk
        if i.size == 0:
            continue
        dij = (xs[i] - xs[j]) ** 2 + (ys[i] - ys[j]) ** 2
        dik = (xs[i] - xs[k]) ** 2 + (ys[i] - ys[k]) ** 2
        djk = (xs[j] - xs[k]) ** 2 + (ys[j] - ys[k]) ** 2
        big = np.maximum(dij, np.maximum(dik, djk))
        acute = dij + dik + djk - big > big
        i, j, k = i[acute], j[acute], k[acute]
        bxp = xs[j] - xs[i]
        byp = ys[j] - ys[i]
        cxp = xs[k] - xs[i]
        cyp = ys[k] - ys[i]
        d = 2.0 * (bxp * cyp - byp * cxp)
        ok = d != 0.0
        i, j, k = i[ok], j[ok], k[ok]
        bxp, byp, cxp, cyp, d = bxp[ok], byp[ok], cxp[ok], cyp[ok], d[ok]
        b2 = bxp * bxp + byp * byp
        c2 = cxp * cxp + cyp * cyp
        ux = (cyp * b2 - byp * c2) / d
        uy = (bxp * c2 - cxp * b2) / d
        r = np.hypot(ux, uy)
        keep = r <= max_r
        idx_parts.append(np.stack([i[keep], j[keep], k[keep]], axis=1))
        disk_parts.append(np.stack([xs[i[keep]] + ux[keep], ys[i[keep]] + uy[keep], r[keep]], axis=1))
    if not idx_parts:
        return np.empty((0, 3), dtype=np.int64), np.empty((0, 3))
    return np.concatenate(idx_parts).astype(np.int64), np.concatenate(disk_parts)


# ---------------------------------------------------------------------------
# non-acute triangle counting for the Monte Carlo estimate
# ---------------------------------------------------------------------------


def _count_non_acute_loop(pts):
    # pts: (trials, 6) = ax ay bx by cx cy
    cnt = 0
    for t in range(pts.shape[0]):
        ab = (pts[t, 0] - pts[t, 2]) ** 2 + (pts[t, 1] - pts[t, 3]) ** 2
        ac = (pts[t, 0] - pts[t, 4]) ** 2 + (pts[t, 1] - pts[t, 5]) ** 2
        bc = (pts[t, 2] - pts[t, 4]) ** 2 + (pts[t, 3] - pts[t, 5]) ** 2
        big = max(ab, max(ac, bc))
        if ab + ac + bc - big <= big:
            cnt += 1
    return cnt


def _count_non_acute_numpy(pts):
    ab = (pts[:, 0] - pts[:, 2]) ** 2 + (pts[:, 1] - pts[:, 3]) ** 2
    ac = (pts[:, 0] - pts[:, 4]) ** 2 + (pts[:, 1] - pts[:, 5]) ** 2
    bc = (pts[:, 2] - pts[:, 4]) ** 2 + (pts[:, 3] - pts[:, 5]) ** 2
    big = np.maximum(ab, np.maximum(ac, bc))
    return int(np.count_nonzero(ab + ac + bc - big <= big))


# ---------------------------------------------------------------------------
# batch disk-range queries (candidate covers)
# ---------------------------------------------------------------------------


def _in_disk(dx, dy, rr):
    # same decision as hypot(dx, dy) <= rr; squared distances settle every
    # case that is not within rounding distance of the boundary
    d2 = dx * dx + dy * dy
    r2 = rr * rr
    if d2 < r2 * (1.0 - 1e-10):
        return True
    if d2 > r2 * (1.0 + 1e-10):
        return False
    return math.hypot(dx, dy) <= rr


def _disk_covers_loop(sx, sy, sidx, cx, cy, r, tol):
    # sx, sy, sidx: points sorted by x; scan the x-window of each disk
    k = cx.shape[0]
    n = sx.shape[0]
    counts = np.zeros(k, dtype=np.int64)
    lo = np.searchsorted(sx, cx - r - tol - 1e-9, side="left")
    hi = np.searchsorted(sx, cx + r + tol + 1e-9, side="right")
    for t in range(k):
        c = 0
        for a in range(lo[t], hi[t]):
            if _in_disk(sx[a] - cx[t], sy[a] - cy[t], r[t] + tol):
                c += 1
        counts[t] = c
    indptr = np.zeros(k + 1, dtype=np.int64)
    for t in range(k):
        indptr[t + 1] = indptr[t] + counts[t]
    indices = np.empty(indptr[k], dtype=np.int64)
    for t in range(k):
        w = indptr[t]
        for a in range(lo[t], hi[t]):
            if _in_disk(sx[a] - cx[t], sy[a] - cy[t], r[t] + tol):
                indices[w] = sidx[a]
                w += 1
        indices[indptr[t]:indptr[t + 1]] = np.sort(indices[indptr[t]:indptr[t + 1]])
    if n == 0:
        indptr[:] = 0
    return indptr, indices


def _disk_covers_numpy(px, py, cx, cy, r, tol):
    from scipy.spatial import cKDTree

    k = len(r)
    tree = cKDTree(np.column_stack([px, py]))
    hits = tree.query_ball_point(np.column_stack([cx, cy]), r + tol + 1e-9, return_sorted=True)
    counts = np.fromiter(map(len, hits), dtype=np.int64, count=k)
    flat = np.fromiter(itertools.chain.from_iterable(hits), dtype=np.int64, count=int(counts.sum()))
    owner = np.repeat(np.arange(k), counts)
    ok = np.hypot(px[flat] - cx[owner], py[flat] - cy[owner]) <= r[owner] + tol
    indptr = np.zeros(k + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner[ok], minlength=k), out=indptr[1:])
    return indptr, flat[ok]


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_circle_two_jit = jit(_circle_two)
_circle_three_jit = jit(_circle_three)
_inside_jit = jit(_inside)
_in_disk_jit = jit(_in_disk)

if NUMBA_ENABLED:
    # compiled kernels resolve helper names through module globals at compile
    # time, so rebind them to their jitted twins before compiling
    _circle_two, _circle_three, _inside = _circle_two_jit, _circle_three_jit, _inside_jit
    _in_disk = _in_disk_jit
    _mec_fast = jit(_mec_loop)
    _triples_fast = jit(_acute_triples_loop)
    _count_fast = jit(_count_non_acute_loop)
    _covers_fast = jit(_disk_covers_loop)
else:
    _mec_fast = _mec_loop
    _triples_fast = None
    _count_fast = None
    _covers_fast = None


def mec(xs, ys, tol=1e-12):
    """Minimum enclosing disk of the given coordinates as ``(cx, cy, r)``.

    Points should already be in random order for the expected linear bound.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    cx, cy, r = _mec_fast(xs, ys, tol)
    return float(cx), float(cy), float(r)


def acute_triples(xs, ys, max_r=math.inf):
    """All index triples ``i < j < k`` forming an acute triangle.

    Returns ``(idx, disks)`` with ``idx`` of shape (t, 3) in lexicographic
    order and ``disks`` rows ``(cx, cy, r)`` of the circumscribed disks.
    Triples whose circumradius exceeds ``max_r`` are dropped.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    if _triples_fast is not None:
        return _triples_fast(xs, ys, float(max_r))
    return _acute_triples_numpy(xs, ys, float(max_r))


def count_non_acute(pts):
    """Number of rows of ``pts`` (``ax ay bx by cx cy``) that are not acute."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    if _count_fast is not None:
        return int(_count_fast(pts))
    return _count_non_acute_numpy(pts)


def disk_covers(px, py, cx, cy, r, tol):
    """Points inside each disk, in CSR form ``(indptr, indices)``.

    Members of disk ``t`` are ``indices[indptr[t]:indptr[t + 1]]`` in
    ascending order; a point is inside when ``hypot(dx, dy) <= r + tol``.
    """
    px = np.ascontiguousarray(px, dtype=np.float64)
    py = np.ascontiguousarray(py, dtype=np.float64)
    cx = np.ascontiguousarray(cx, dtype=np.float64)
    cy = np.ascontiguousarray(cy, dtype=np.float64)
    r = np.ascontiguousarray(r, dtype=np.float64)
    if len(r) == 0 or len(px) == 0:
        return np.zeros(len(r) + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    if _covers_fast is not None:
        order = np.argsort(px, kind="stable")
        return _covers_fast(px[order], py[order], order.astype(np.int64), cx, cy, r, float(tol))
    return _disk_covers_numpy(px, py, cx, cy, r, float(tol))
