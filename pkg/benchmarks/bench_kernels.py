"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--points 2000]

Prints the best wall time per kernel and backend, and the speedup.
"""
import argparse
import timeit

import numpy as np

from deltashell import kernels

CASES = {
    "channel_det N=2 l=0": ("channel_det", (1.0, 2.0), (-3.0, -3.0), 0),
    "channel_det N=4 l=3": ("channel_det", (1.0, 1.7, 2.9, 4.0), (-6.0, 2.0, -4.0, -5.0), 3),
    "mismatch N=2 l=0": ("mismatch", (1.0, 2.0), (-3.0, -3.0), 0),
    "mismatch N=4 l=3": ("mismatch", (1.0, 1.7, 2.9, 4.0), (-6.0, 2.0, -4.0, -5.0), 3),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=2000)
    args = ap.parse_args()
    k = np.geomspace(1e-6, 20.0, args.points)
    names = [n for n in ("numpy", "cython") if n in kernels.AVAILABLE]
    print(f"grid of {args.points} kappas, best of {args.repeat}")
    print(f"{'kernel':24s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    jobs = dict(CASES)
    jobs["s_wave"] = ("s_wave", None, None, None)
    for label, (fn, R, al, ell) in jobs.items():
        times = []
        for n in names:
            mod = kernels.get(n)
            if fn == "s_wave":
                call = lambda mod=mod: mod.s_wave(1.0, 1.0, -3.0, -3.0, k)  # noqa: E731
            else:
                call = lambda mod=mod, fn=fn, R=R, al=al, ell=ell: getattr(mod, fn)(R, al, ell, k)  # noqa: E731
            number = 3
            times.append(min(timeit.repeat(call, number=number, repeat=args.repeat)) / number)
        row = f"{label:24s}" + "".join(f"{t * 1e3:10.3f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
