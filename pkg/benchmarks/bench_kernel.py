"""Time the simulator's iteration loop on the compiled and pure-Python backends.

    python benchmarks/bench_kernel.py --n 64,256 --reps 200
"""
import argparse
import json
import random
import sys
import timeit

from modsram.arith import FieldElement, Modulus
from modsram.engines import ENGINES
from modsram.sim import available_backends, sim_modmul


def bench(fn, reps):
    # best of 3 runs, per call
    return min(timeit.repeat(fn, number=reps, repeat=3)) / reps


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="64,256", help="comma-separated bit widths")
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    backends = available_backends()
    rows = []
    for n in (int(x) for x in args.n.split(",")):
        rng = random.Random(f"{args.seed}/{n}")
        m = Modulus(rng.getrandbits(n) | 1 << (n - 1) | 1)
        a, b = (FieldElement(rng.randrange(m.p), m) for _ in range(2))
        row = {"n": n}
        want = sim_modmul(a, b, backend="python")[0]
        for be in backends:
            assert sim_modmul(a, b, backend=be)[0] == want
            row[f"sim_{be}_us"] = bench(lambda: sim_modmul(a, b, backend=be), args.reps) * 1e6
        for name in ("interleaved", "radix4", "r4csa"):
            fn = ENGINES[name]
            row[f"{name}_us"] = bench(lambda: fn(a, b), args.reps) * 1e6
        if "cython" in backends:
            row["speedup"] = row["sim_python_us"] / row["sim_cython_us"]
        rows.append(row)

    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        print()
        return 0
    if "cython" not in backends:
        print("compiled kernel not built; only the Python backend was timed")
    for row in rows:
        parts = [f"n={row['n']}"] + [f"{k}={v:.1f}" for k, v in row.items() if k != "n"]
        print("  ".join(parts))
    return 0


if __name__ == "__main__":
    sys.exit(main())
