"""Time the hot kernels with numba and with the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--n 120] [--trials 1000000] [--repeat 3]

Each mode runs in a fresh interpreter because DISKCOVER_NO_NUMBA is read at
import time. Numba timings exclude the first (compiling) call.
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from diskcover import kernels
from diskcover._accel import NUMBA_ENABLED
from diskcover.candidates import enumerate_gmc
from diskcover.geometry import obtuse_fraction_estimate

n, trials, repeat = int(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3])
rng = np.random.default_rng(0)
xy = rng.random((n, 2)) * 100
clusters = [rng.random((k, 2)) * 10 for k in rng.integers(3, 12, size=2000)]

def best(fn):
    fn()  # warm-up / compile
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

out = {
    "numba": NUMBA_ENABLED,
    "acute_triples": best(lambda: kernels.acute_triples(xy[:, 0], xy[:, 1])),
    "enumerate_gmc": best(lambda: enumerate_gmc(xy)),
    "mec_2000_clusters": best(lambda: [kernels.mec(c[:, 0], c[:, 1]) for c in clusters]),
    "obtuse_fraction": best(lambda: obtuse_fraction_estimate("unit-square", trials, 1)),
}
print(json.dumps(out))
"""


def run(mode_env, args):
    env = dict(os.environ)
    env.update(mode_env)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(args.n), str(args.trials), str(args.repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=120)
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run({"DISKCOVER_NO_NUMBA": "0"}, args)
    slow = run({"DISKCOVER_NO_NUMBA": "1"}, args)
    print(f"{'kernel':<22}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for key in ("acute_triples", "enumerate_gmc", "mec_2000_clusters", "obtuse_fraction"):
        print(f"{key:<22}{fast[key]:>12.4f}{slow[key]:>12.4f}{slow[key] / fast[key]:>10.1f}x")
    if not fast["numba"]:
        print("note: numba unavailable, both columns ran the fallback path")


if __name__ == "__main__":
    main()
