"""Wall-clock comparison of the compiled and pure-Python simulation kernels.

    python benchmarks/bench_backends.py --repeat 3
"""
import argparse
import statistics
import time

import numpy as np

from windloiter import _backend
from windloiter.scenarios import builtin_catalog


def bench(spec, backend, repeat):
    times = []
    traj = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        traj = spec.run(backend=backend)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), traj


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _backend.HAVE_COMPILED:
        print("compiled kernel not built; only the Python backend is available")
    print(f"{'scenario':<20}{'mode':<12}{'python [s]':>12}{'compiled [s]':>14}{'speedup':>10}  identical")
    for spec in builtin_catalog():
        for mode in spec.modes:
            s = spec.with_mode(mode)
            tp, a = bench(s, "python", args.repeat)
            if _backend.HAVE_COMPILED:
                tc, b = bench(s, "compiled", args.repeat)
                same = np.array_equal(a.data, b.data)
                print(f"{s.name:<20}{mode:<12}{tp:>12.4f}{tc:>14.4f}{tp / tc:>10.1f}  {same}")
            else:
                print(f"{s.name:<20}{mode:<12}{tp:>12.4f}{'-':>14}{'-':>10}  -")


if __name__ == "__main__":
    main()
