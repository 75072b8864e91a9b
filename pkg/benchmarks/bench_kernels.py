"""Compare the numba cycle-search kernel with its pure-numpy fallback.

Runs each workload through both code paths in-process, checks that they agree,
and then times one end-to-end solver call in two subprocesses, with and
without DLCHS_NO_NUMBA=1.

    python benchmarks/bench_kernels.py --repeats 5
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from dlchs import _kernels
from dlchs.cycles import _csr
from dlchs.generators import random_gnp
from dlchs.graph import Digraph


def bidirected_tree(n: int, rng) -> Digraph:
    arcs = []
    for v in range(1, n):
        u = int(rng.integers(0, v))
        arcs += [(u, v), (v, u)]
    return Digraph(n, arcs)


def workloads(seed: int):
    rng = np.random.default_rng(seed)
    # (name, graph, lo, hi): search for a cycle with lo < length < hi
    yield "tree n=2000, no long cycle", bidirected_tree(2000, rng), 2, 2001
    yield "gnp n=14 p=0.3, long cycle", random_gnp(14, 0.3, rng), 6, 15
    yield "gnp n=40 p=0.05, range (3, 12)", random_gnp(40, 0.05, rng), 3, 12


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


SOLVER_SNIPPET = """
import time
from dlchs.graph import Digraph
from dlchs.pipeline import compression_step
n = 130
arcs = [(i, (i + 1) % n) for i in range(n)] + [((i + 1) % n, i) for i in range(n)]
G = Digraph(n, arcs)
compression_step(Digraph(3, [(0, 1), (1, 2), (2, 0)]), {0, 1}, 1, 2)  # warm-up compiles
t0 = time.perf_counter()
compression_step(G, {0, 65}, 1, 2)
print(time.perf_counter() - t0)
"""


def solver_seconds(no_numba: bool) -> float:
    env = dict(os.environ)
    env.pop("DLCHS_NO_NUMBA", None)
    if no_numba:
        env["DLCHS_NO_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", SOLVER_SNIPPET], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--skip-solver", action="store_true", help="only time the kernel in-process")
    args = p.parse_args(argv)

    if not _kernels.NUMBA_ENABLED:
        print("numba disabled (DLCHS_NO_NUMBA set or numba missing); both columns use the fallback")
    print(f"{'workload':34s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, G, lo, hi in workloads(args.seed):
        arrays = _csr(G)
        fast = _kernels.cycle_search(*arrays, lo, hi)  # also triggers compilation
        slow = _kernels._cycle_search_py(*arrays, lo, hi)
        if not np.array_equal(fast, slow):
            print(f"{name}: kernels disagree", file=sys.stderr)
            return 1
        t_fast = best_of(lambda: _kernels.cycle_search(*arrays, lo, hi), args.repeats)
        t_slow = best_of(lambda: _kernels._cycle_search_py(*arrays, lo, hi), args.repeats)
        print(f"{name:34s} {t_fast:10.4f} {t_slow:10.4f} {t_slow / max(t_fast, 1e-9):8.1f}x")

    if not args.skip_solver:
        with_numba = solver_seconds(False)
        without = solver_seconds(True)
        print(f"{'compression, bidirected C130':34s} {with_numba:10.4f} {without:10.4f} {without / with_numba:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
