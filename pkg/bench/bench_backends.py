"""Benchmark the jitted radial kernels against the pure-numpy fallback.

The backend is fixed at import time by the TUMORSPEC_BACKEND environment
variable, so each measurement runs in a fresh subprocess. Run as

    python bench/bench_backends.py

Timings are wall-clock for warm repeated calls; the first call of each worker
is discarded so numba compilation / cache loading is not counted.
"""

import argparse
import json
import os
import subprocess
import sys
import time


CASES = ["solve_U", "boundary_ratios", "build_table"]


def run_case(name, repeats):
    from tumorspec.models import identity_model
    from tumorspec.radial import boundary_ratio, solve_U
    from tumorspec.spectrum import ModelParameters, build_table

    model = identity_model()

    if name == "solve_U":
        def body():
            solve_U(4.0, model)
    elif name == "boundary_ratios":
        v0 = solve_U(1.0, model)

        def body():
            for k in range(9):
                boundary_ratio(k, 1.0, v0, model)
    elif name == "build_table":
        params = ModelParameters(A=0.5, G=2.0, model=model)

        def body():
            build_table(params, k_max=16)
    else:
        raise ValueError(name)

    body()  # warm-up: compilation, cache load, first allocations
    t0 = time.perf_counter()
    for _ in range(repeats):
        body()
    return (time.perf_counter() - t0) / repeats


def worker(repeats):
    from tumorspec.backend import BACKEND
    out = {"backend": BACKEND,
           "times": {name: run_case(name, repeats) for name in CASES}}
    print(json.dumps(out))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        worker(args.repeats)
        return

    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, TUMORSPEC_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__),
             "--worker", "--repeats", str(args.repeats)],
            env=env, capture_output=True, text=True, check=True)
        data = json.loads(proc.stdout.strip().splitlines()[-1])
        results[data["backend"]] = data["times"]

    width = max(len(c) for c in CASES)
    print(f"{'case'.ljust(width)}  {'numba':>12}  {'numpy':>12}  {'speedup':>8}")
    for case in CASES:
        tb, tp = results["numba"][case], results["numpy"][case]
        print(f"{case.ljust(width)}  {tb * 1e3:>10.2f}ms  {tp * 1e3:>10.2f}ms"
              f"  {tp / tb:>7.1f}x")


if __name__ == "__main__":
    main()
