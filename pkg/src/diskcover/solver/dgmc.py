"""GMC pipeline, separation cuts and the lazy DGMC loop."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

from scipy.spatial import cKDTree

from ..instance import InfeasibleInstanceError  # noqa: F401  (re-export)
from ..candidates import CandidateSet, augment_kgons, enumerate_gmc, prune_by_alpha
from .exact import solve_exact
from .model import FEASIBLE, INFEASIBLE, OPTIMAL, TIMEOUT, CoverModel, SolveResult, build_gmc_model

SEP_TOL = 1e-9
MAX_ROUNDS = 200
DEFAULT_ALPHA = 1.2


def solve_gmc(inst, time_limit: Optional[float] = None, node_limit: Optional[int] = None,
              backend: str = "auto") -> SolveResult:
    """Optimal GMC cover: candidate enumeration, model build, exact solve."""
    if not inst.gmc_feasible:
        return SolveResult(INFEASIBLE, {}, math.inf, math.inf, {"nodes": 0}, method="gmc-ip")
    t0 = time.perf_counter()
    C = enumerate_gmc(inst.points)
    res = solve_exact(build_gmc_model(C, inst), time_limit, node_limit, backend)
    res.method = "gmc-ip"
    res.stats["candidates"] = len(C)
    res.stats["wall_time"] = time.perf_counter() - t0
    return res


def separation_violations(selected, ell: float) -> list[tuple[tuple[int, int], float]]:
    """Pairs of selected disks whose centers are closer than ``ell``.

    Distance exactly ``ell`` is allowed; a pair violates only when its
    distance is below ``ell - 1e-9``.
    """
    if ell <= 0:
        raise ValueError("ell must be positive")
    out = []
    for a in range(len(selected)):
        ca = selected[a].center
        for b in range(a + 1, len(selected)):
            cb = selected[b].center
            dd = math.hypot(ca[0] - cb[0], ca[1] - cb[1])
            if dd < ell - SEP_TOL:
                out.append(((a, b), dd))
    return out


@dataclass
class CliqueState:
    """Centers of candidates that already own a clique row."""

    centers: list = field(default_factory=list)
    enabled: bool = True

    def near(self, c, radius: float) -> bool:
        return any(math.hypot(c[0] - q[0], c[1] - q[1]) < radius for q in self.centers)


def add_separation_cuts(model: CoverModel, C: CandidateSet, violations, ell: float,
                        clique_state: CliqueState) -> int:
    """Append separation rows for each violating pair of candidate indices.

    ``violations`` holds ``((i, j), distance)`` with candidate indices. A pair
    closer than ``ell / 2`` gets a clique row around ``i`` unless some clique
    center already lies within ``ell / 2`` of ``i``; every other pair gets a
    plain pair row.
    """
    if not model.binary:
        raise ValueError("separation cuts need a binary model")
    half = 0.5 * ell
    tree = None
    added = 0
    for (i, j), dd in violations:
        ci = C.centers[i]
        if clique_state.enabled and dd < half and not clique_state.near(ci, half):
            if tree is None:
                tree = cKDTree(C.centers)
            hood = tree.query_ball_point(ci, half + 1e-9)
            hood = sorted(t for t in hood
                          if math.hypot(C.centers[t, 0] - ci[0], C.centers[t, 1] - ci[1]) < half)
            model.sep_rows.append(("clique", tuple(hood)))
            clique_state.centers.append((float(ci[0]), float(ci[1])))
        else:
            model.sep_rows.append(("pair", (min(i, j), max(i, j))))
        added += 1
    return added


def solve_dgmc(inst, ell: Optional[float] = None, alpha: float = DEFAULT_ALPHA,
               time_limit: Optional[float] = None, node_limit: Optional[int] = None,
               cliques: bool = True, augment: bool = True, backend: str = "auto",
               max_rounds: int = MAX_ROUNDS) -> SolveResult:
    """Discretized DGMC with lazily added separation rows.

    The GMC optimum supplies the lower bound and the radius scale for
    ``alpha`` pruning. The time limit applies to each solve in the loop.
    """
    ell = inst.ell if ell is None else ell
    if ell is None or ell <= 0:
        raise ValueError("DGMC needs a positive separation distance ell")
    t0 = time.perf_counter()
    gmc = solve_gmc(inst, time_limit, node_limit, backend)
    stats = {"gmc_status": gmc.status, "rounds": 0, "constraints_added": 0,
             "clique_rows": 0, "pair_rows": 0, "nodes": 0}
    if not gmc.feasible:
        stats["wall_time"] = time.perf_counter() - t0
        return SolveResult(INFEASIBLE, {}, math.inf, math.inf, stats, method="dgmc-ip")

    # prune before augmenting: k-gon disks are exempt from the alpha bound,
    # otherwise a zero-radius GMC optimum would discard all of them
    C = prune_by_alpha(enumerate_gmc(inst.points), gmc, alpha)
    if augment:
        C = augment_kgons(C, inst, ell)
    model = build_gmc_model(C, inst).binarize()
    stats["candidates"] = len(C)
    state = CliqueState(enabled=cliques)
    lb = gmc.lower_bound
    while True:
        res = solve_exact(model, time_limit, node_limit, backend)
        stats["nodes"] += res.stats.get("nodes", 0)
        stats["rounds"] += 1
        if not res.feasible:
            status, counts = res.status, {}
            break
        chosen = sorted(res.counts)
        viol = separation_violations([C.disk(i) for i in chosen], ell)
        if not viol:
            status, counts = res.status, res.counts
            break
        if stats["rounds"] >= max_rounds:
            # the incumbent still violates separation, so it is no DGMC solution
            status, counts = TIMEOUT, {}
            break
        stats["constraints_added"] += add_separation_cuts(
            model, C, [((chosen[a], chosen[b]), dd) for (a, b), dd in viol], ell, state)
    stats["clique_rows"] = sum(1 for kind, _ in model.sep_rows if kind == "clique")
    stats["pair_rows"] = sum(1 for kind, _ in model.sep_rows if kind == "pair")
    stats["wall_time"] = time.perf_counter() - t0
    objective = model.objective(counts) if counts or status in (OPTIMAL, FEASIBLE) else math.inf
    return SolveResult(status, counts, objective, lb, stats, C, method="dgmc-ip")


def compute_gap(alg_objective: float, ref_objective: float) -> float:
    """Relative gap ``(alg - ref) / alg``; zero when both objectives are zero."""
    if alg_objective < ref_objective - 1e-6:
        raise ValueError(f"reference {ref_objective} exceeds objective {alg_objective}")
    if alg_objective <= 0.0:
        return 0.0
    return max(0.0, (alg_objective - ref_objective) / alg_objective)
