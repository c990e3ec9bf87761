"""Integer-program model and result types for the covering problems."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse

from ..candidates import CandidateSet
from ..geometry import Disk

OPTIMAL = "optimal"
FEASIBLE = "feasible"        # limit hit with an incumbent
INFEASIBLE = "infeasible"
TIMEOUT = "timeout"          # limit hit without any incumbent


@dataclass
class CoverModel:
    """min sum(cost_i x_i) s.t. coverage >= kappa, sum(x) <= m, separation rows <= 1."""

    candidates: CandidateSet
    costs: np.ndarray
    kappa: np.ndarray
    m: int
    upper: int
    cover_matrix: sparse.csr_matrix          # (n, |C|) 0/1
    sep_rows: list = field(default_factory=list)   # [(kind, tuple of candidate indices)]
    heuristic_note: Optional[list] = None    # disks of a start solution, exported as comments

    @property
    def n_vars(self) -> int:
        return len(self.costs)

    @property
    def n_points(self) -> int:
        return len(self.kappa)

    @property
    def binary(self) -> bool:
        return self.upper == 1

    def binarize(self) -> "CoverModel":
        return CoverModel(self.candidates, self.costs, self.kappa, self.m, 1,
                          self.cover_matrix, list(self.sep_rows), self.heuristic_note)

    def objective(self, counts: dict[int, int]) -> float:
        return math.pi * sum(c * float(self.candidates.radii[i]) ** 2 for i, c in sorted(counts.items()))

    def violated_rows(self, counts: dict[int, int]) -> list[str]:
        """Names of model rows (and bounds) the assignment breaks."""
        bad = []
        x = np.zeros(self.n_vars)
        for i, c in counts.items():
            if not 0 <= i < self.n_vars:
                bad.append(f"x{i}: unknown variable")
                continue
            x[i] = c
            if c < 0 or c > self.upper or c != int(c):
                bad.append(f"x{i}: bound 0..{self.upper} integer")
        cov = self.cover_matrix @ x
        for j in np.nonzero(cov < self.kappa - 1e-9)[0]:
            bad.append(f"cov{j}")
        if x.sum() > self.m + 1e-9:
            bad.append("card")
        for r, (_, idx) in enumerate(self.sep_rows):
            if x[list(idx)].sum() > 1 + 1e-9:
                bad.append(f"sep{r}")
        return bad


def build_gmc_model(C: CandidateSet, inst) -> CoverModel:
    """GMC model over ``C``: one integer variable per candidate with bounds 0..m."""
    k = len(C)
    rows, cols = [], []
    for i, cov in enumerate(C.covers):
        rows.extend(cov)
        cols.extend([i] * len(cov))
    A = sparse.csr_matrix(
        (np.ones(len(rows)), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(inst.n, k),
    )
    return CoverModel(
        candidates=C,
        costs=C.areas(),
        kappa=np.asarray(inst.kappa, dtype=np.float64),
        m=inst.m,
        upper=inst.m,
        cover_matrix=A,
    )


@dataclass
class SolveResult:
    status: str
    counts: dict[int, int]
    objective: float
    lower_bound: float
    stats: dict
    candidates: Optional[CandidateSet] = None
    method: str = "gmc-ip"

    @property
    def selected(self) -> list[tuple[Disk, int]]:
        if self.candidates is None:
            return []
        return [(self.candidates.disk(i), c) for i, c in sorted(self.counts.items())]

    @property
    def disks(self) -> list[Disk]:
        return [d for d, c in self.selected for _ in range(c)]

    @property
    def max_radius(self) -> float:
        return max((d.radius for d, _ in self.selected), default=0.0)

    @property
    def feasible(self) -> bool:
        return self.status in (OPTIMAL, FEASIBLE)

    def to_dict(self, instance=None, timing: bool = False) -> dict:
        stats = dict(self.stats)
        if not timing:
            stats.pop("wall_time", None)
        meta = {"status": self.status}
        if instance is not None:
            meta["instance"] = instance.name
            meta["n"] = instance.n
            meta["ell"] = instance.ell
        return {
            "method": self.method,
            "objective": self.objective if self.feasible else None,
            "disks": [{"x": d.center.x, "y": d.center.y, "r": d.radius} for d in self.disks],
            "lower_bound": self.lower_bound,
            "stats": stats,
            "meta": meta,
        }
