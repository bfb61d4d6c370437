"""Compare the numba kernels with the pure numpy/Python fallback.

Each backend runs in a fresh interpreter (the backend is fixed at import
time by PSL2GEN_DISABLE_NUMBA).  Numba timings exclude the first,
compiling call.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "quads p=11 (length-4 census)": "enumerate_irredundant_sets(11, 4, (2, 3), keep_sets=False)",
    "quads p=19 (length-4 census)": "enumerate_irredundant_sets(19, 4, (2, 3), keep_sets=False)",
    "triples p=13 (iota_3)": "iota_with_certificates(13, 3)",
    "naive quads p=7 (oracle)": "brute_force_sets(7, 4, None)",
    "todd-coxeter A5 x 50": "[todd_coxeter(library('A5'), max_cosets=1000) for _ in range(50)]",
    "todd-coxeter affine A3, cap 1e5": "todd_coxeter(coxeter_presentation(AFFINE_A3), max_cosets=10**5, strategy='felsch')",
}

CHILD = r"""
import json, sys, time
from psl2gen._accel import backend
from psl2gen.genseq import enumerate_irredundant_sets, iota_with_certificates, brute_force_sets
from psl2gen.subgroups import maximal_subgroups
from psl2gen.fpgroups.todd_coxeter import todd_coxeter
from psl2gen.fpgroups.presentation import library
from psl2gen.fpgroups.coxeter import coxeter_presentation, AFFINE_A3
stmt, repeat = sys.argv[1], int(sys.argv[2])
for p in (7, 11, 13, 19):
    maximal_subgroups(p)
eval(stmt)  # warm-up (compiles under numba)
best = float("inf")
for _ in range(repeat):
    t = time.perf_counter()
    eval(stmt)
    best = min(best, time.perf_counter() - t)
print(json.dumps({"backend": backend(), "seconds": best}))
"""


def run(stmt, disable, repeat):
    env = dict(os.environ, PSL2GEN_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", CHILD, stmt, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--only", help="substring filter on workload names")
    a = ap.parse_args()
    print(f"{'workload':36s} {'numba s':>10s} {'fallback s':>11s} {'speedup':>8s}")
    for name, stmt in WORKLOADS.items():
        if a.only and a.only not in name:
            continue
        fast = run(stmt, False, a.repeat)["seconds"]
        slow = run(stmt, True, a.repeat)["seconds"]
        print(f"{name:36s} {fast:10.4f} {slow:11.4f} {slow / fast:7.1f}x")


if __name__ == "__main__":
    main()
