"""Compare the numba kernels with the numpy fallback.

Each backend runs in its own subprocess because the choice is fixed at import
time. Prints one line per (backend, workload) with the median wall time.

    python3 benchmarks/bench_backends.py --sizes 1000 2000 --repeat 5
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, statistics, sys, time
from fractions import Fraction
import fairpart as f
from fairpart import _accel

sizes, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
p = f.FairnessParams(16, Fraction(1, 4), Fraction(3, 4))
f.dp_solve(f.gen_clustered(200, 32, 64, 0).instance, p)  # warm-up and JIT
rows = []
for n in sizes:
    x = f.gen_clustered(n, 32, 64, n).instance
    res = f.dp_solve(x, p, verify=False)
    part = res.partition if res.feasible else f.Partition.from_sizes([16] * (n // 16) + ([n % 16] if n % 16 else []))
    for name, fn in (("dp_solve", lambda: f.dp_solve(x, p, verify=False)),
                     ("audit", lambda: f.audit(x, part, p))):
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        rows.append({"backend": _accel.backend(), "op": name, "n": n,
                     "median_s": statistics.median(times)})
print(json.dumps(rows))
"""


def run_backend(name, sizes, repeat):
    env = {k: v for k, v in os.environ.items() if not k.startswith("FAIRPART_")}
    env["FAIRPART_BACKEND"] = name
    proc = subprocess.run([sys.executable, "-c", WORKER, json.dumps(sizes), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 2000, 4000])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    results = {b: run_backend(b, args.sizes, args.repeat) for b in ("numba", "numpy")}
    print(f"{'op':<10}{'n':>7}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for a, b in zip(results["numba"], results["numpy"]):
        print(f"{a['op']:<10}{a['n']:>7}{a['median_s']:>12.4f}{b['median_s']:>12.4f}"
              f"{b['median_s'] / a['median_s']:>10.1f}")


if __name__ == "__main__":
    main()
