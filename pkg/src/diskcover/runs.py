"""Run records, CSV tables and the suite benchmark driver."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from . import instance as inst_mod
from .heuristic import solve_heuristic
from .solver import compute_gap, solve_dgmc, solve_gmc

SCHEMA = "runs/1"
COLUMNS = ("schema", "instance", "n", "m", "ell", "method", "objective", "lower_bound",
           "gap", "wall_time", "status", "seed")
METHODS = ("heuristic", "gmc-ip", "dgmc-ip")


@dataclass
class RunRecord:
    instance: str
    n: int
    m: int
    ell: Optional[float]
    method: str
    objective: Optional[float]
    lower_bound: Optional[float]
    gap: Optional[float]
    wall_time: Optional[float]
    status: str
    seed: Optional[int]

    def to_row(self) -> dict:
        row = {"schema": SCHEMA}
        for f in fields(self):
            v = getattr(self, f.name)
            row[f.name] = "" if v is None else (repr(v) if isinstance(v, float) else str(v))
        return row

    @classmethod
    def from_row(cls, row: dict) -> "RunRecord":
        if row.get("schema") != SCHEMA:
            raise ValueError(f"unsupported run table schema {row.get('schema')!r}")

        def opt(key, conv):
            return None if row[key] == "" else conv(row[key])

        return cls(
            instance=row["instance"], n=int(row["n"]), m=int(row["m"]), ell=opt("ell", float),
            method=row["method"], objective=opt("objective", float),
            lower_bound=opt("lower_bound", float), gap=opt("gap", float),
            wall_time=opt("wall_time", float), status=row["status"], seed=opt("seed", int),
        )


def write_csv(records, fh) -> None:
    w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.to_row())


def records_to_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def read_csv(text: str) -> list[RunRecord]:
    return [RunRecord.from_row(r) for r in csv.DictReader(io.StringIO(text))]


def append_record(path, rec: RunRecord) -> None:
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        if new:
            w.writeheader()
        w.writerow(rec.to_row())


def _finite(v):
    return v if v is not None and math.isfinite(v) else None


def run_method(inst, method: str, *, seed: int = 0, ell: Optional[float] = None,
               alpha: float = 1.2, cliques: bool = True, time_limit: Optional[float] = 900.0,
               backend: str = "auto", reference: Optional[float] = None, timing: bool = False):
    """Solve ``inst`` with one method; returns ``(solution dict, RunRecord)``."""
    t0 = time.perf_counter()
    used_ell = None
    if method == "heuristic":
        if inst.gmc_feasible:
            sol = solve_heuristic(inst, seed)
            payload = sol.to_dict(inst, timing)
            objective, lower, status = sol.objective, reference, "feasible"
        else:
            payload = {"method": "heuristic", "objective": None, "disks": [],
                       "meta": {"status": "infeasible", "instance": inst.name, "n": inst.n, "ell": inst.ell}}
            objective, lower, status = None, None, "infeasible"
    elif method == "gmc-ip":
        res = solve_gmc(inst, time_limit=time_limit, backend=backend)
        payload = res.to_dict(inst, timing)
        objective, lower, status = _finite(res.objective), _finite(res.lower_bound), res.status
    elif method == "dgmc-ip":
        used_ell = inst.ell if ell is None else ell
        res = solve_dgmc(inst, used_ell, alpha, time_limit=time_limit, cliques=cliques, backend=backend)
        payload = res.to_dict(inst.with_ell(used_ell), timing)
        objective, lower, status = _finite(res.objective), _finite(res.lower_bound), res.status
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    elapsed = time.perf_counter() - t0
    gap = None
    if objective is not None and lower is not None:
        gap = compute_gap(objective, lower)
    rec = RunRecord(inst.name, inst.n, inst.m, used_ell, method, objective, lower, gap,
                    elapsed if timing else None, status, seed if method == "heuristic" else None)
    return payload, rec


def _bench_one(args):
    path, methods, opts = args
    try:
        inst = inst_mod.load(path)
    except (OSError, inst_mod.InstanceError) as exc:
        return [RunRecord(Path(path).stem, 0, 0, None, m, None, None, None, None,
                          f"error: {exc}", None) for m in methods]
    rows = {}
    # the exact GMC value serves as the heuristic's reference when available
    order = sorted(methods, key=lambda m: 0 if m == "gmc-ip" else 1)
    ref = None
    for m in order:
        try:
            _, rec = run_method(inst, m, reference=ref if m == "heuristic" else None, **opts)
            if m == "gmc-ip" and rec.status == "optimal":
                ref = rec.objective
        except Exception as exc:  # recorded per row; the run continues
            rec = RunRecord(inst.name, inst.n, inst.m, None, m, None, None, None, None,
                            f"error: {type(exc).__name__}: {exc}", None)
        rows[m] = rec
    return [rows[m] for m in methods]


def load_manifest(suite_dir) -> list[Path]:
    suite_dir = Path(suite_dir)
    man = suite_dir / "manifest.json"
    if man.exists():
        entries = json.loads(man.read_text(encoding="utf-8"))["instances"]
        files = [suite_dir / e["file"] for e in entries]
    else:
        files = sorted(p for p in suite_dir.glob("*.json") if p.name != "manifest.json")
    if not files:
        raise FileNotFoundError(f"no instances in {suite_dir}")
    return files


def benchmark(suite_dir, methods=("heuristic", "gmc-ip"), jobs: int = 1, **opts) -> list[RunRecord]:
    """One record per (instance, method), in manifest order."""
    files = load_manifest(suite_dir)
    tasks = [(str(f), tuple(methods), opts) for f in files]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_bench_one, tasks))
    else:
        results = [_bench_one(t) for t in tasks]
    return [rec for rows in results for rec in rows]


def write_suite(instances, out_dir, family: str, base_seed: int, scale: str) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for inst in instances:
        fname = f"{inst.name}.json"
        inst_mod.save(inst, out_dir / fname)
        entries.append({"file": fname, "name": inst.name, "n": inst.n, "m": inst.m, "seed": inst.seed})
    manifest = {"family": family, "base_seed": base_seed, "scale": scale,
                "count": len(entries), "instances": entries}
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1) + "\n", encoding="utf-8")
    return path


__all__ = ["COLUMNS", "METHODS", "RunRecord", "append_record", "benchmark", "load_manifest",
           "read_csv", "records_to_csv", "run_method", "write_csv", "write_suite"]
