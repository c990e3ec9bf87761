"""Acceptance criteria, one test per criterion.

Each test appends a PASS/FAIL line to the summary printed at the end of the
pytest run (see ``conftest.py``) and also prints it for ``-s`` runs.
"""
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from diskcover.candidates import CandidateSet, enumerate_gmc
from diskcover.cli import main
from diskcover.geometry import dist, obtuse_fraction_estimate
from diskcover.heuristic import solve_heuristic
from diskcover.instance import GeneratorConfig, Instance, generate
from diskcover.solver import (
    INFEASIBLE,
    brute_force_oracle,
    build_gmc_model,
    compute_gap,
    solve_dgmc,
    solve_exact,
    solve_gmc,
)

from helpers import is_feasible, recount

ROOT = Path(__file__).resolve().parents[1]


def report(number, ok, detail):
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def small_instances(count=200, seed=20240601):
    """Random instances with n in 3..7, m in 1..3 and kappa in {1, 2} on a 10 m square."""
    rng = np.random.default_rng(seed)
    out = []
    for t in range(count):
        n = int(rng.integers(3, 8))
        m = int(rng.integers(1, 4))
        pts = rng.uniform(0, 10, size=(n, 2))
        kap = rng.integers(1, 3, size=n)
        out.append(Instance([tuple(p) for p in pts], kap.tolist(), m, name=f"small{t}"))
    return out


# -------------------------------------------------------------------------- 1

def test_criterion_1_oracle_equivalence():
    insts = small_instances()
    t0 = time.perf_counter()
    worst, mismatches, infeasible = 0.0, 0, 0
    for inst in insts:
        res = solve_gmc(inst)
        ref = brute_force_oracle(enumerate_gmc(inst.points), inst)
        if ref is None:
            infeasible += 1
            mismatches += res.status != INFEASIBLE
            continue
        err = abs(res.objective - ref)
        worst = max(worst, err)
        mismatches += err > 1e-9
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 60
    report(1, ok, f"{len(insts)} instances ({infeasible} infeasible), {mismatches} mismatches, "
                  f"max |ip - oracle| = {worst:.2e} (tol 1e-9), {elapsed:.1f} s (limit 60 s)")
    assert mismatches == 0
    assert elapsed < 60


# -------------------------------------------------------------------------- 2

def _widened_optimum(inst, C, rng, extra=10_000):
    """Exact optimum over C plus ``extra`` random disks.

    Disks with the same covered set are interchangeable in any cover, so
    only the cheapest disk per covered set is kept; this shrinks the model
    without changing its optimum.
    """
    xy = inst.xy()
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    diam = max(float(np.hypot(*(hi - lo))), 1e-9)
    centers = rng.uniform(lo - 0.25 * diam, hi + 0.25 * diam, size=(extra, 2))
    radii = rng.uniform(0, diam, size=extra)
    # a fraction of extras sit on input points, mimicking candidate structure
    on = rng.integers(0, len(xy), size=extra // 4)
    centers[: len(on)] = xy[on] + rng.normal(0, 0.05 * diam, size=(len(on), 2))
    inside = np.hypot(xy[:, None, 0] - centers[None, :, 0], xy[:, None, 1] - centers[None, :, 1]) \
        <= radii[None, :] + 1e-9
    all_c = np.vstack([C.centers, centers])
    all_r = np.concatenate([C.radii, radii])
    all_in = np.hstack([np.array([[j in cov for cov in C.covers] for j in range(inst.n)]), inside])
    best = {}
    for t in range(len(all_r)):
        key = all_in[:, t].tobytes()
        if key not in best or all_r[t] < all_r[best[key]]:
            best[key] = t
    keep = sorted(best.values())
    W = CandidateSet(all_c[keep], all_r[keep],
                     tuple(tuple(np.nonzero(all_in[:, t])[0].tolist()) for t in keep),
                     tuple("extra" for _ in keep))
    return solve_exact(build_gmc_model(W, inst), backend="highs")


def test_criterion_2_candidate_sufficiency():
    insts = small_instances()
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    improved, worst = 0, 0.0
    for inst in insts:
        base = solve_gmc(inst)
        if not base.feasible:
            continue
        wide = _widened_optimum(inst, enumerate_gmc(inst.points), rng)
        diff = base.objective - wide.objective
        worst = max(worst, diff)
        improved += diff > 1e-9
    elapsed = time.perf_counter() - t0
    report(2, improved == 0, f"{len(insts)} instances x 10^4 random extra disks: {improved} improved, "
                             f"largest improvement {worst:.2e} (tol 1e-9), {elapsed:.1f} s")
    assert improved == 0


# -------------------------------------------------------------------------- 3

def test_criterion_3_heuristic_gap():
    t0 = time.perf_counter()
    gaps, infeasible = [], 0
    for t in range(25):
        n = (20, 40, 60)[t % 3]
        inst = generate(n, 20, GeneratorConfig(seed=1000 + t))
        sol = solve_heuristic(inst, seed=t)
        if not is_feasible(inst, sol.disks):
            infeasible += 1
        opt = solve_gmc(inst)
        assert opt.status == "optimal"
        gaps.append(compute_gap(sol.objective, opt.objective))
    elapsed = time.perf_counter() - t0
    mean = float(np.mean(gaps))
    ok = infeasible == 0 and 0.10 <= mean <= 0.45 and elapsed < 300
    report(3, ok, f"25 instances (n in 20/40/60, m=20): {infeasible} infeasible, mean gap {mean:.3f} "
                  f"(band [0.10, 0.45]), min {min(gaps):.3f}, max {max(gaps):.3f}, {elapsed:.1f} s (limit 300 s)")
    assert infeasible == 0
    assert 0.10 <= mean <= 0.45
    assert elapsed < 300


# -------------------------------------------------------------------------- 4 and 5

_DGMC_CACHE = {}


def dgmc_suite():
    """50 random instances (n <= 15, m <= 5) whose discretized DGMC at ell = 5 is feasible."""
    if "suite" in _DGMC_CACHE:
        return _DGMC_CACHE["suite"]
    rng = np.random.default_rng(99)
    suite, tried = [], 0
    while len(suite) < 50:
        tried += 1
        n = int(rng.integers(3, 16))
        m = int(rng.integers(2, 6))
        pts = rng.uniform(0, 30, size=(n, 2))
        kap = rng.integers(1, 3, size=n)
        inst = Instance([tuple(p) for p in pts], kap.tolist(), m, 5.0, f"dgmc{tried}")
        res = solve_dgmc(inst, 5.0, cliques=True)
        if res.feasible:
            suite.append((inst, res))
    _DGMC_CACHE["suite"] = suite
    _DGMC_CACHE["tried"] = tried
    return suite


def test_criterion_4_dgmc_correctness():
    suite = dgmc_suite()
    bad = []
    for inst, res in suite:
        ds = res.disks
        sep_ok = all(dist(ds[a].center, ds[b].center) >= 5.0 - 1e-9
                     for a in range(len(ds)) for b in range(a + 1, len(ds)))
        cov_ok = len(ds) <= inst.m and all(c >= k for c, k in zip(recount(inst.points, ds), inst.kappa))
        lb_ok = res.objective >= solve_gmc(inst).objective - 1e-9
        if not (sep_ok and cov_ok and lb_ok):
            bad.append(inst.name)
    iso = solve_dgmc(Instance([(0, 0)], [2], 2), ell=4.0)
    iso_err = abs(iso.objective - 8 * math.pi)
    ok = not bad and iso_err <= 1e-6
    report(4, ok, f"{len(suite)} feasible instances (of {_DGMC_CACHE['tried']} drawn): {len(bad)} violate "
                  f"separation/coverage/lower bound; isolated point objective {iso.objective:.6f} "
                  f"vs 8*pi (err {iso_err:.1e}, tol 1e-6)")
    assert not bad
    assert iso_err <= 1e-6


def test_criterion_5_clique_conservative():
    suite = dgmc_suite()
    diff, nodes_on, nodes_off, rounds_on, rounds_off, rows_on, rows_off = 0, 0, 0, 0, 0, 0, 0
    for inst, on in suite:
        off = solve_dgmc(inst, 5.0, cliques=False)
        if off.status != on.status or abs(off.objective - on.objective) > 1e-6:
            diff += 1
        nodes_on += on.stats["nodes"]
        nodes_off += off.stats["nodes"]
        rounds_on += on.stats["rounds"]
        rounds_off += off.stats["rounds"]
        rows_on += on.stats["constraints_added"]
        rows_off += off.stats["constraints_added"]
    report(5, diff == 0, f"{len(suite)} instances: {diff} differ in status/objective (tol 1e-6); "
                         f"cliques on: {rounds_on} rounds, {rows_on} rows, {nodes_on} nodes; "
                         f"off: {rounds_off} rounds, {rows_off} rows, {nodes_off} nodes")
    assert diff == 0


# -------------------------------------------------------------------------- 6

def test_criterion_6_obtuse_probability():
    t0 = time.perf_counter()
    targets = {"unit-square": 0.725206, "unit-disk": 0.719715}
    means = {r: float(np.mean([obtuse_fraction_estimate(r, 10**6, seed=s) for s in range(5)]))
             for r in targets}
    elapsed = time.perf_counter() - t0
    errs = {r: abs(means[r] - targets[r]) for r in targets}
    ok = all(e <= 0.003 for e in errs.values()) and elapsed < 30
    report(6, ok, f"square mean {means['unit-square']:.6f} (target 0.725206, err {errs['unit-square']:.1e}), "
                  f"disk mean {means['unit-disk']:.6f} (target 0.719715, err {errs['unit-disk']:.1e}), "
                  f"tol 0.003, {elapsed:.1f} s (limit 30 s)")
    assert all(e <= 0.003 for e in errs.values())
    assert elapsed < 30


# -------------------------------------------------------------------------- 7

def _cli_artifacts(d: Path) -> dict:
    def run(*argv):
        assert main([str(a) for a in argv]) == 0

    run("generate", "--n", 20, "--m", 6, "--seed", 11, "-o", d / "inst.json")
    for method in ("heuristic", "gmc-ip", "dgmc-ip"):
        run("solve", "--method", method, "--seed", 2, d / "inst.json", "-o", d / f"{method}.json")
    run("render", d / "inst.json", d / "dgmc-ip.json", "--ell", 5, "-o", d / "dgmc.svg")
    run("render", d / "inst.json", d / "heuristic.json", "-o", d / "heur.svg")
    run("generate", "--family", "uni_sm", "--scale", "small", "--seed", 4, "-o", d / "suite")
    man = json.loads((d / "suite" / "manifest.json").read_text())
    man["instances"] = man["instances"][:5]
    man["count"] = 5
    (d / "suite" / "manifest.json").write_text(json.dumps(man))
    run("benchmark", d / "suite", "--methods", "heuristic,gmc-ip,dgmc-ip", "--jobs", 2, "-o", d / "bench.csv")
    run("export-lp", d / "inst.json", "--heuristic-seed", 1, "-o", d / "model.lp")
    return {str(p.relative_to(d)): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}


def test_criterion_7_determinism(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    a = _cli_artifacts(tmp_path / "a")
    b = _cli_artifacts(tmp_path / "b")
    differing = sorted(k for k in a if a[k] != b.get(k))
    ok = set(a) == set(b) and not differing
    report(7, ok, f"{len(a)} artifacts from generate/solve/benchmark/render/export-lp repeated: "
                  f"{len(differing)} differ")
    assert ok


# -------------------------------------------------------------------------- 8

def test_criterion_8_documented_limits():
    readme = (ROOT / "README.md").read_text(encoding="utf-8").lower()
    topics = ["runtime", "memory", "0.7%", "122.93", "140.66"]
    missing = [t for t in topics if t not in readme]
    report(8, not missing, "not reproducible at desk scale (absolute runtimes, large-suite memory profile, "
                           "sub-0.7% DGMC gaps at n~300, published figure objectives); "
                           f"README section present, missing topics: {missing or 'none'}")
    assert not missing
