"""Compare the compiled eigensolver kernel against the pure-Python fallback.

Times the full dense pipeline (reduction + tridiagonalization + implicit-shift
QL + back-transform) on operators of increasing size. Run from the repo root:

    python3 benchmarks/bench_backends.py [--sizes 320,640,1280]
"""

import argparse
import time

import numpy as np

from nyqmodes import Scheme, SechFamily, assemble, make_grid, to_dense
from nyqmodes._kernels import available_backends, import_backend


def solve_with(kernel, a, b):
    a = a.copy()
    if b is not None:
        l = kernel.cholesky_lower(b)
        c = kernel.reduce_spd(a, l)
    else:
        l, c = None, a
    d, vt = kernel.tridiag_eigh(c, 30 * a.shape[0])
    if l is not None:
        kernel.back_transform_rows(l, vt)
    return d, vt


def bench(n, scheme, repeats):
    g = make_grid(-16.0, 32.0, 32.0 / n)
    op = assemble(scheme, SechFamily(A=3.0, w=0.5), g)
    a, b = to_dense(op)
    results = {}
    for name in available_backends():
        kernel = import_backend(name)
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            d, _ = solve_with(kernel, a, b)
            best = min(best, time.perf_counter() - t0)
        results[name] = (best, float(np.sort(d)[-1]))
    return results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="320,640,1280")
    ap.add_argument("--scheme", default="cd", choices=["cd", "numerov"])
    ap.add_argument("--repeats", type=int, default=2)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    scheme = Scheme(args.scheme)

    names = available_backends()
    print(f"backends: {', '.join(names)}   scheme: {scheme.value}")
    header = f"{'N':>6}" + "".join(f"{n:>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for n in sizes:
        res = bench(n, scheme, args.repeats)
        times = [res[name][0] for name in names]
        lams = {res[name][1] for name in names}
        line = f"{n:>6}" + "".join(f"{t:>13.3f}s" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:>9.1f}x"
        print(line)
        if len(lams) > 1 and max(lams) - min(lams) > 1e-9 * max(lams):
            print("  WARNING: backends disagree on the top eigenvalue:", lams)


if __name__ == "__main__":
    main()
