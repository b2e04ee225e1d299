"""Benchmark the compiled kernels against the pure-numpy fallback.

Runs the same continuation workloads in two subprocesses, one per backend
(SCHWARZ_ATLAS_NO_NUMBA toggles the fallback), so first-call compilation can be
isolated from steady-state throughput.

    python benchmarks/bench_kernels.py [--loops N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = """
import json
import time
import numpy as np
from fractions import Fraction as F
from schwarz_atlas import _kernels
from schwarz_atlas import gauss, roots, torus

loops = {loops}

t0 = time.perf_counter()
p = gauss.GaussParams(F(1, 84), F(13, 84), F(1, 2))
gauss.monodromy_at(p, 0)
a2 = roots.build(roots.RootSystemType("A", 2))
torus.mirror_monodromy(a2, F(1, 4), np.array([1, 0]))
warmup = time.perf_counter() - t0

t0 = time.perf_counter()
for _ in range(loops):
    for s in (0, 1, "inf"):
        gauss.monodromy_at(p, s)
gauss_time = (time.perf_counter() - t0) / loops

d4 = roots.build(roots.RootSystemType("D", 4))
t0 = time.perf_counter()
for _ in range(loops):
    torus.mirror_monodromy(d4, F(1, 4), np.array([1, 0, 0, 0]))
torus_time = (time.perf_counter() - t0) / loops

print(json.dumps({{
    "backend": "numba" if _kernels.USING_NUMBA else "numpy",
    "warmup_s": warmup,
    "gauss_loop_triple_s": gauss_time,
    "d4_mirror_loop_s": torus_time,
}}))
"""


def run_backend(disable_numba, loops):
    env = dict(os.environ)
    if disable_numba:
        env["SCHWARZ_ATLAS_NO_NUMBA"] = "1"
    else:
        env.pop("SCHWARZ_ATLAS_NO_NUMBA", None)
    proc = subprocess.run(
        [sys.executable, "-c", WORKLOAD.format(loops=loops)],
        env=env, capture_output=True, text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(proc.stderr)
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--loops", type=int, default=5)
    args = parser.parse_args()
    rows = [run_backend(False, args.loops), run_backend(True, args.loops)]
    print(f"{'backend':<8} {'warmup':>10} {'gauss 3-loop':>14} {'D4 mirror loop':>16}")
    for r in rows:
        print(f"{r['backend']:<8} {r['warmup_s']:>9.2f}s "
              f"{r['gauss_loop_triple_s'] * 1e3:>12.1f}ms "
              f"{r['d4_mirror_loop_s'] * 1e3:>14.1f}ms")
    if rows[1]["gauss_loop_triple_s"] > 0:
        print(f"speedup: gauss x{rows[1]['gauss_loop_triple_s'] / rows[0]['gauss_loop_triple_s']:.1f}, "
              f"torus x{rows[1]['d4_mirror_loop_s'] / rows[0]['d4_mirror_loop_s']:.1f}")


if __name__ == "__main__":
    main()
