"""Time the compiled kernels against the pure-Python reference.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--size 20000] [--json out.json]
"""
import argparse
import json
import sys
import timeit

import numpy as np

from orlicz_kit import _pycore

try:
    from orlicz_kit import _core
except ImportError:
    _core = None

KIND = _pycore.KIND_XLOG1


def cases(size):
    rng = np.random.default_rng(0)
    v = np.ascontiguousarray(rng.lognormal(0.0, 1.5, size))
    w = np.ascontiguousarray(rng.uniform(0.1, 1.0, size))
    steps = max(1000, size)

    def lux(m):
        total = m.modular_sum(KIND, 0.0, v, w, 1.0)
        hi = float(v.max()) * max(1.0, total)
        return m.luxemburg_bisect(KIND, 0.0, v, w, 1e-12, hi * 10, 1e-10, 400)

    return {
        "psi_values": lambda m: m.psi_values(KIND, 0.0, v),
        "modular_sum": lambda m: m.modular_sum(KIND, 0.0, v, w, 0.5),
        "luxemburg_bisect": lux,
        "integrate_inverse": lambda m: m.integrate_density(_pycore.KIND_COSH, 0.0, 0.0, 10.0,
                                                           1e-10, 1e-14, True, 1e-12),
        "rk4_carleman": lambda m: m.rk4_run(_pycore.MODEL_CARLEMAN, [1.5, 0.5], 1e-3, steps),
    }


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--size", type=int, default=20000, help="cells per density")
    p.add_argument("--json", help="also write results here")
    args = p.parse_args(argv)
    if _core is None:
        print("compiled extension not built; run `python setup.py build_ext --inplace`",
              file=sys.stderr)
    rows = []
    print(f"{'kernel':<20}{'python [s]':>12}{'compiled [s]':>14}{'speedup':>10}")
    for name, fn in cases(args.size).items():
        slow = best_time(lambda: fn(_pycore), max(1, args.repeat // 2))
        fast = best_time(lambda: fn(_core), args.repeat) if _core else float("nan")
        rows.append({"kernel": name, "python_s": slow, "compiled_s": fast, "speedup": slow / fast})
        print(f"{name:<20}{slow:>12.4g}{fast:>14.4g}{slow / fast:>10.1f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"size": args.size, "repeat": args.repeat, "results": rows}, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
