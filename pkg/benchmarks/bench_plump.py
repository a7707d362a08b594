"""Timing comparison of the two order kernels on identical workloads.

Generates one pool of random index trees, interns it into a fresh arena per
kernel, then times a cold pass (every comparison fills the memo) and a warm
pass (every comparison hits it).  Run from the repository root:

    python3 benchmarks/bench_plump.py [--trees N] [--height H] [--pairs P]
"""

import argparse
import random
import time

from muiter._kernel import KERNEL_IMPL, TreeArena
from muiter._plump_py import PlumpKernel as PurePlumpKernel
from muiter.signature import Signature
from muiter.size import kappa_sigma

try:
    from muiter._plumpcore import PlumpKernel as CompiledPlumpKernel
except ImportError:
    CompiledPlumpKernel = None

BIN = Signature.of(0, 2, labels=["leaf", "node"])


def sample_pool(trees: int, height: int, pair_count: int, seed: int):
    rng = random.Random(seed)
    backend = kappa_sigma(BIN)
    pool = backend.sample_indices(rng, trees, height)
    pairs = [(rng.choice(pool), rng.choice(pool)) for _ in range(pair_count)]
    return pool, pairs


def run_kernel(label, factory, pool, pairs):
    arena = TreeArena(kernel_factory=factory)
    t0 = time.perf_counter()
    for tree in pool:
        arena.intern(tree)
    t1 = time.perf_counter()
    # compare on integer ids so the timing isolates the kernel itself
    kernel = arena._kernel
    id_pairs = [(arena.intern(s), arena.intern(t)) for s, t in pairs]
    hits = 0
    t2 = time.perf_counter()
    for a, b in id_pairs:
        if kernel.lt(a, b):
            hits += 1
        if kernel.leq(a, b):
            hits += 1
    t3 = time.perf_counter()
    for a, b in id_pairs:
        kernel.lt(a, b)
        kernel.leq(a, b)
    t4 = time.perf_counter()
    return {
        "label": label,
        "nodes": len(arena),
        "hits": hits,
        "intern": t1 - t0,
        "cold": t3 - t2,
        "warm": t4 - t3,
    }


def report(rows):
    head = f"{'kernel':<10} {'nodes':>7} {'intern ms':>10} {'cold ms':>9} {'warm ms':>9}"
    print(head)
    print("-" * len(head))
    for r in rows:
        print(
            f"{r['label']:<10} {r['nodes']:>7} {r['intern'] * 1e3:>10.2f} "
            f"{r['cold'] * 1e3:>9.2f} {r['warm'] * 1e3:>9.2f}"
        )
    if len(rows) == 2:
        base, fast = rows[0], rows[1]
        for phase in ("cold", "warm"):
            if fast[phase] > 0:
                print(f"{phase} speedup: {base[phase] / fast[phase]:.1f}x")
        if base["hits"] != fast["hits"]:
            raise SystemExit("kernels disagree on comparison results")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trees", type=int, default=300)
    parser.add_argument("--height", type=int, default=5)
    parser.add_argument("--pairs", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"active kernel at import time: {KERNEL_IMPL}")
    pool, pairs = sample_pool(args.trees, args.height, args.pairs, args.seed)
    rows = [run_kernel("pure", PurePlumpKernel, pool, pairs)]
    if CompiledPlumpKernel is None:
        print("compiled kernel not built; timing the pure kernel only")
    else:
        rows.append(run_kernel("compiled", CompiledPlumpKernel, pool, pairs))
    report(rows)
