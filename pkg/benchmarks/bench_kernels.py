"""Compare the numba and numpy limb kernels.

Each backend runs in its own interpreter because the choice is made at
import time (MPARITH_DISABLE_NUMBA). Usage:

    python3 benchmarks/bench_kernels.py [--sizes 1024 4096 16384] [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit


def worker(sizes, repeat):
    import random

    from mparith import _kernels as K
    from mparith import mulkernel as mk

    rng = random.Random(7)
    rows = []
    for bits in sizes:
        u = rng.getrandbits(bits) | (1 << (bits - 1))
        v = rng.getrandbits(bits) | (1 << (bits - 1))
        # warm up (includes numba compilation)
        mk.int_mul_karatsuba(u, v)
        mk.int_mul_school(u, v)
        for op, fn in (("school", mk.int_mul_school), ("karatsuba", mk.int_mul_karatsuba)):
            t = min(timeit.repeat(lambda: fn(u, v), number=1, repeat=repeat))
            rows.append({"backend": K.BACKEND, "bits": bits, "op": op, "seconds": t})
    print(json.dumps(rows))


def run_backend(disable, sizes, repeat):
    env = dict(os.environ)
    env["MPARITH_DISABLE_NUMBA"] = "1" if disable else "0"
    cmd = [sys.executable, __file__, "--worker", "--repeat", str(repeat), "--sizes"] + [str(s) for s in sizes]
    out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout
    return json.loads(out.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[1024, 4096, 16384, 65536])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--worker", action="store_true")
    args = ap.parse_args()
    if args.worker:
        worker(args.sizes, args.repeat)
        return
    fast = run_backend(False, args.sizes, args.repeat)
    slow = run_backend(True, args.sizes, args.repeat)
    print("bits,op,%s_s,%s_s,speedup" % (fast[0]["backend"], slow[0]["backend"]))
    for a, b in zip(fast, slow):
        print("%d,%s,%.6f,%.6f,%.1f" % (a["bits"], a["op"], a["seconds"], b["seconds"], b["seconds"] / a["seconds"]))


if __name__ == "__main__":
    main()
