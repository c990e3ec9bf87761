"""Shared test utilities: independent recounts and random instance builders."""
import math

import numpy as np

from diskcover.instance import Instance


def recount(points, disks, tol=1e-9):
    """Coverage per point by a plain double loop over (point, disk)."""
    out = []
    for p in points:
        c = 0
        for d in disks:
            if math.hypot(p[0] - d.center[0], p[1] - d.center[1]) <= d.radius + tol:
                c += 1
        out.append(c)
    return out


def is_feasible(inst, disks, tol=1e-9):
    if len(disks) > inst.m:
        return False
    return all(c >= k for c, k in zip(recount(inst.points, disks, tol), inst.kappa))


def random_instance(rng, n, m, kappas=(1, 2), size=10.0, ell=None, name="rand"):
    pts = [tuple(v) for v in rng.uniform(0.0, size, size=(n, 2))]
    kap = [int(k) for k in rng.choice(kappas, size=n)]
    return Instance(pts, kap, m, ell, name)
