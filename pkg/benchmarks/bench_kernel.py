"""Time the compiled and pure-Python traversal kernels on the gallery scenarios.

    python3 benchmarks/bench_kernel.py [--repeat N] [--dt DT]
"""
import argparse
import timeit

import numpy as np

from pipeclimb import DriveMode, load_scenario, run_scenario
from pipeclimb._kernel import BACKENDS

SCENARIOS = ("reference", "reference_roll90", "elbow_nps10_lr")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dt", type=float, default=None, help="override the scenario time step")
    args = ap.parse_args(argv)

    backends = sorted(BACKENDS)
    print(f"{'scenario':<18} {'mode':<12} {'steps':>7} " + " ".join(f"{b + ' ms':>12}" for b in backends)
          + f" {'speedup':>8}  identical")
    for name in SCENARIOS:
        sc = load_scenario(name)
        dt = args.dt or sc.dt
        for mode in DriveMode:
            best, traces = {}, {}
            for b in backends:
                call = lambda: run_scenario(sc.network, sc.robot, mode, dt, roll=sc.roll, backend=b)  # noqa: E731
                traces[b] = call()
                best[b] = min(timeit.repeat(call, number=1, repeat=args.repeat)) * 1e3
            ref = traces[backends[0]]
            same = all(np.array_equal(ref.commanded, t.commanded) and np.array_equal(ref.spring, t.spring)
                       for t in traces.values())
            speedup = best["python"] / best["cython"] if "cython" in best else float("nan")
            print(f"{name:<18} {mode.value:<12} {len(ref):>7} " + " ".join(f"{best[b]:>12.3f}" for b in backends)
                  + f" {speedup:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
