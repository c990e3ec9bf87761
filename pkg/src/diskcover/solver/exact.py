"""Exact solvers for a CoverModel.

Two backends share one result type:

* ``bnb``  - combinatorial best-first branch-and-bound, no LP machinery.
  Exact, deterministic, with lexicographic tie-breaking; meant for small
  models.
* ``highs`` - the HiGHS MIP solver through ``scipy.optimize.milp``; used
  for everything the branch-and-bound cannot finish quickly.

``backend="auto"`` picks ``bnb`` when the multiset search space is small.
"""
from __future__ import annotations

import heapq
import math
import time
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from .model import FEASIBLE, INFEASIBLE, OPTIMAL, TIMEOUT, CoverModel, SolveResult

BNB_SPACE_LIMIT = 200_000
EPS = 1e-9


def _search_space(model: CoverModel) -> int:
    return math.comb(model.n_vars + model.m, model.m)


def solve_exact(model: CoverModel, time_limit: Optional[float] = None,
                node_limit: Optional[int] = None, backend: str = "auto") -> SolveResult:
    if backend == "auto":
        backend = "bnb" if _search_space(model) <= BNB_SPACE_LIMIT else "highs"
    if backend == "bnb":
        return solve_bnb(model, time_limit, node_limit)
    if backend == "highs":
        return solve_highs(model, time_limit, node_limit)
    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# branch-and-bound
# ---------------------------------------------------------------------------


def solve_bnb(model: CoverModel, time_limit: Optional[float] = None,
              node_limit: Optional[int] = None) -> SolveResult:
    """Best-first branch-and-bound over multisets of candidates.

    Branches on the point with the largest remaining deficit (lowest index on
    ties); children add one candidate covering that point, cheapest first.
    Node bound: cost so far plus, over all points, the largest
    ``deficit * cheapest covering cost``.
    """
    t0 = time.perf_counter()
    n, k = model.n_points, model.n_vars
    costs = model.costs
    kappa = model.kappa.astype(np.int64)
    A = model.cover_matrix.tocsc()
    covers_of_var = [A.indices[A.indptr[i]:A.indptr[i + 1]] for i in range(k)]
    Ar = model.cover_matrix.tocsr()
    vars_of_point = []
    for j in range(n):
        v = Ar.indices[Ar.indptr[j]:Ar.indptr[j + 1]]
        vars_of_point.append(v[np.lexsort((v, costs[v]))])
    min_cost = np.array([costs[v].min() if len(v) else math.inf for v in vars_of_point])
    rows_of_var: list[list[int]] = [[] for _ in range(k)]
    for r, (_, idx) in enumerate(model.sep_rows):
        for i in idx:
            rows_of_var[i].append(r)
    sep_sets = [set(idx) for _, idx in model.sep_rows]

    def bound(cost, deficit):
        pos = deficit > 0
        if not pos.any():
            return cost
        return cost + float(np.max(deficit[pos] * min_cost[pos]))

    root_def = kappa.copy()
    if np.any(np.isinf(min_cost[root_def > 0])) or root_def.max() > model.m:
        return _result(model, INFEASIBLE, {}, math.inf, math.inf, 0, t0, "bnb")

    heap = [(bound(0.0, root_def), (), 0.0)]
    seen = {()}
    best_cost, best_sel = math.inf, None
    nodes = 0
    hit_limit = False
    while heap:
        b, sel, cost = heapq.heappop(heap)
        if b > best_cost + EPS * max(1.0, best_cost):
            break
        if (node_limit is not None and nodes >= node_limit) or (
                time_limit is not None and time.perf_counter() - t0 > time_limit):
            heapq.heappush(heap, (b, sel, cost))
            hit_limit = True
            break
        nodes += 1
        deficit = kappa.copy()
        counts: dict[int, int] = {}
        for i in sel:
            counts[i] = counts.get(i, 0) + 1
            deficit[covers_of_var[i]] -= 1
        if deficit.max() <= 0:
            if best_sel is None or cost < best_cost - EPS * max(1.0, best_cost) or (
                    abs(cost - best_cost) <= EPS * max(1.0, best_cost) and sel < best_sel):
                best_cost, best_sel = cost, sel
            continue
        if len(sel) + deficit.max() > model.m:
            continue
        # most deficient point, lowest index on ties
        j = int(np.argmax(deficit))
        for i in vars_of_point[j]:
            i = int(i)
            if counts.get(i, 0) >= model.upper:
                continue
            if rows_of_var[i] and any(
                    any(counts.get(t) for t in sep_sets[r]) for r in rows_of_var[i]):
                continue
            child = tuple(sorted(sel + (i,)))
            if child in seen:
                continue
            seen.add(child)
            c_cost = cost + float(costs[i])
            c_def = deficit.copy()
            c_def[covers_of_var[i]] -= 1
            c_b = bound(c_cost, c_def)
            if c_b > best_cost + EPS * max(1.0, best_cost):
                continue
            heapq.heappush(heap, (c_b, child, c_cost))

    if best_sel is None:
        status = TIMEOUT if hit_limit else INFEASIBLE
        lb = heap[0][0] if (hit_limit and heap) else math.inf
        return _result(model, status, {}, math.inf, lb, nodes, t0, "bnb")
    counts = {}
    for i in best_sel:
        counts[i] = counts.get(i, 0) + 1
    if hit_limit:
        lb = min(best_cost, heap[0][0]) if heap else best_cost
        return _result(model, FEASIBLE, counts, None, lb, nodes, t0, "bnb")
    return _result(model, OPTIMAL, counts, None, None, nodes, t0, "bnb")


# ---------------------------------------------------------------------------
# HiGHS
# ---------------------------------------------------------------------------


def _constraint_matrix(model: CoverModel):
    k = model.n_vars
    blocks = [model.cover_matrix, sparse.csr_matrix(np.ones((1, k)))]
    lo = [model.kappa, [0.0]]
    hi = [np.full(model.n_points, np.inf), [float(model.m)]]
    if model.sep_rows:
        rows, cols = [], []
        for r, (_, idx) in enumerate(model.sep_rows):
            rows.extend([r] * len(idx))
            cols.extend(idx)
        S = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(model.sep_rows), k))
        blocks.append(S)
        lo.append(np.zeros(len(model.sep_rows)))
        hi.append(np.ones(len(model.sep_rows)))
    return sparse.vstack(blocks, format="csr"), np.concatenate(lo), np.concatenate(hi)


def solve_highs(model: CoverModel, time_limit: Optional[float] = None,
                node_limit: Optional[int] = None) -> SolveResult:
    t0 = time.perf_counter()
    M, lo, hi = _constraint_matrix(model)
    # presolve spends seconds on dominated-column search without shrinking these models
    options = {"disp": False, "mip_rel_gap": 0.0, "presolve": False}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    if node_limit is not None:
        options["node_limit"] = int(node_limit)
    res = milp(
        c=model.costs,
        constraints=LinearConstraint(M, lo, hi),
        integrality=np.ones(model.n_vars),
        bounds=Bounds(0, model.upper),
        options=options,
    )
    nodes = int(getattr(res, "mip_node_count", 0) or 0)
    dual = getattr(res, "mip_dual_bound", None)
    if res.x is None:
        status = INFEASIBLE if res.status == 2 else TIMEOUT
        lb = math.inf if status == INFEASIBLE else (dual if dual is not None else 0.0)
        return _result(model, status, {}, math.inf, lb, nodes, t0, "highs")
    x = np.rint(res.x).astype(np.int64)
    counts = {int(i): int(x[i]) for i in np.nonzero(x)[0]}
    lb = float(dual) if dual is not None and math.isfinite(dual) else None
    if res.status == 0:
        return _result(model, OPTIMAL, counts, None, lb, nodes, t0, "highs")
    lb = 0.0 if lb is None else lb
    return _result(model, FEASIBLE, counts, None, lb, nodes, t0, "highs")


def _result(model, status, counts, objective, lower_bound, nodes, t0, backend) -> SolveResult:
    if objective is None:
        objective = model.objective(counts)
    if lower_bound is None or (status == OPTIMAL and
                               abs(objective - lower_bound) <= EPS * max(1.0, objective)):
        lower_bound = objective
    return SolveResult(
        status=status,
        counts=counts,
        objective=objective,
        lower_bound=min(lower_bound, objective),
        stats={"backend": backend, "nodes": nodes, "wall_time": time.perf_counter() - t0},
        candidates=model.candidates,
    )
