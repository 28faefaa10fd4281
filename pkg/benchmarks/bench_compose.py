"""Compare the compiled series kernel against the numpy fallback.

Runs the same workload — Nottingham composition and power-series products at
precision N — under both implementations, checks the outputs byte-identical,
and prints a timing table.

Usage: python3 benchmarks/bench_compose.py [--prec 512] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, random, sys, time
from hkgtower import kernels
from hkgtower.field import field_make
from hkgtower.nottingham import build_phi
from hkgtower.series import LaurentSeries

prec = int(sys.argv[1])
repeat = int(sys.argv[2])

def bench(fn):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out

field = field_make(5)
f25 = field_make(5, 2)
rng = random.Random(0)

def compose_run():
    lhs = build_phi(field, 1, 13, prec)
    rhs = build_phi(field, 2, 13, prec)
    return (lhs * rhs).series

def mul_run():
    a = LaurentSeries.from_terms(
        f25, {i: f25.random_element(rng) for i in range(prec)}, prec)
    b = LaurentSeries.from_terms(
        f25, {i: f25.random_element(rng) for i in range(prec)}, prec)
    acc = a
    for _ in range(10):
        acc = acc * b
    return acc

results = {"impl": kernels.IMPL}
for name, fn in (("compose", compose_run), ("mul10", mul_run)):
    seconds, out = bench(fn)
    results[name] = {"seconds": seconds, "digest": str(out.to_json())}
print(json.dumps(results))
"""


def run_variant(pure, prec, repeat):
    env = dict(os.environ, HKGTOWER_PURE="1" if pure else "0")
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(prec), str(repeat)],
        capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prec", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    compiled = run_variant(False, args.prec, args.repeat)
    fallback = run_variant(True, args.prec, args.repeat)

    print(f"precision N = {args.prec}, best of {args.repeat}")
    print(f"{'workload':<10} {'impl=' + compiled['impl']:>14} "
          f"{'impl=' + fallback['impl']:>14} {'speedup':>9}")
    identical = True
    for name in ("compose", "mul10"):
        c, f = compiled[name], fallback[name]
        same = c["digest"] == f["digest"]
        identical = identical and same
        ratio = f["seconds"] / c["seconds"] if c["seconds"] else float("inf")
        print(f"{name:<10} {c['seconds']:>13.4f}s {f['seconds']:>13.4f}s "
              f"{ratio:>8.2f}x  {'ok' if same else 'MISMATCH'}")
    if compiled["impl"] == fallback["impl"]:
        print("note: compiled kernel unavailable; both runs used the fallback")
    if not identical:
        print("ERROR: implementations disagree", file=sys.stderr)
        return 1
    print("outputs byte-identical across implementations")
    return 0


if __name__ == "__main__":
    sys.exit(main())
