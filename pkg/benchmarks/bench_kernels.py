"""Time the numba kernels against the numpy fallback.

Each backend runs in its own interpreter because the choice is made at
import time from DIMERCONTRACT_NO_NUMBA.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import numpy as np
from dimercontract import _kernels, fixtures
from dimercontract.generate import random_instance
from dimercontract.quiver import face_transversals
from dimercontract.cycle_algebra import Bounds, generators

quivers = [random_instance(s, splits=3) for s in range(30)] + [fixtures.FIG3_SEQ, fixtures.FIG1_Q]

def cover():
    for q in quivers:
        face_transversals(q)

def cycles():
    for q in quivers[:8]:
        generators(q, Bounds(14))

def reach():
    for q in quivers:
        ptr, arr = q.out_csr
        w = np.zeros(q.n_arrows, dtype=np.int64); w[0] = 1
        for v in range(q.n_vertices):
            _kernels.nonzero_cycle_exists(ptr, arr, q.heads, q.tails, w, v, 2 * q.n_arrows)

out = {"backend": _kernels.BACKEND}
for name, fn in (("exact_cover", cover), ("state_expansion", cycles), ("cycle_reach", reach)):
    fn()  # warm-up, includes compilation
    best = float("inf")
    for _ in range(REPEAT):
        t = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t)
    out[name] = best
print(json.dumps(out))
"""


def run(no_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["DIMERCONTRACT_NO_NUMBA"] = "1"
    else:
        env.pop("DIMERCONTRACT_NO_NUMBA", None)
    code = WORKLOAD.replace("REPEAT", str(repeat))
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    nb, np_ = run(False, args.repeat), run(True, args.repeat)
    print(f"{'kernel':<16} {nb['backend']:>10} {np_['backend']:>10} {'speedup':>8}")
    for k in ("exact_cover", "state_expansion", "cycle_reach"):
        print(f"{k:<16} {nb[k]:>9.4f}s {np_[k]:>9.4f}s {np_[k] / nb[k]:>7.1f}x")


if __name__ == "__main__":
    main()
