"""Compare the compiled and pure-numpy grid-scan backends.

Usage: python benchmarks/bench_scan.py [--step 0.05] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cdpr import ScanRegion, Variant, expand_planar, load_table1_preset
from cdpr import _kernels as kernels


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--step", type=float, default=0.05)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--t5", type=float, default=3000.0)
    args = parser.parse_args()

    geom = expand_planar(load_table1_preset(), Variant.A)
    base = geom.scan
    region = ScanRegion(base.x_min, base.x_max, base.y_min, base.y_max, args.step)
    xs, ys = region.x_values(), region.y_values()
    common = dict(
        anchors=geom.anchors,
        attachments=geom.attachments,
        cb_fixed=geom.cb_pulleys_fixed,
        cb_platform=geom.cb_pulleys_platform,
        tmin=geom.tension_min[: geom.n],
        tmax=geom.tension_max[: geom.n],
        t5=args.t5,
        weight=geom.platform_mass * geom.gravity,
    )

    backends = ["numpy"]
    if kernels.numba_available():
        backends.insert(0, "numba")
    else:
        print("numba unavailable or disabled; timing numpy only")

    results = {}
    reference = None
    for backend in backends:
        # warm-up run absorbs JIT compilation
        kernels.scan_cells(xs, ys, backend=backend, **common)
        best = np.inf
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            feasible, gamma, tensions = kernels.scan_cells(xs, ys, backend=backend, **common)
            best = min(best, time.perf_counter() - t0)
        results[backend] = best
        if reference is None:
            reference = (feasible, gamma)
        else:
            assert np.array_equal(reference[0], feasible), "backends disagree on feasibility"
            assert np.allclose(
                np.nan_to_num(reference[1]), np.nan_to_num(gamma), rtol=1e-9, atol=1e-6
            ), "backends disagree on cost"

    print(f"grid: {region.nx} x {region.ny} cells, step {args.step} m, T5 = {args.t5} N")
    for backend, secs in results.items():
        cells_per_s = region.nx * region.ny / secs
        print(f"  {backend:6s}: {secs * 1e3:9.1f} ms  ({cells_per_s / 1e6:.2f} Mcell/s)")
    if len(results) == 2:
        print(f"  speedup: {results['numpy'] / results['numba']:.1f}x")


if __name__ == "__main__":
    main()
