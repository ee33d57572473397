"""Compare the compiled walk kernel against the pure-Python fallback.

Builds a synthetic graph, runs identical walk workloads through both
kernels, checks the outputs are bit-identical, and reports steps/second.

    python benchmarks/walk_benchmark.py [--nodes 20000] [--walks 20000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ideamap import _walk_py
from ideamap.graph import RawEdge, build_graph

try:
    from ideamap import _walk_core
except ImportError:
    _walk_core = None


def synthetic_graph(n: int, extra_per_node: int = 6, seed: int = 1):
    rng = np.random.default_rng(seed)
    width = len(str(n))
    name = lambda i: f"c{i:0{width}d}"
    edges = [RawEdge(name(i), name((i + 1) % n), float(rng.uniform(0.5, 3.0)))
             for i in range(n)]
    for i in range(n):
        for j in rng.integers(0, n, size=extra_per_node):
            if int(j) != i:
                edges.append(RawEdge(name(i), name(int(j)), float(rng.uniform(0.5, 3.0))))
    return build_graph(edges)


def run(kernel, g, starts, uniforms, length, p, q):
    out = np.empty(length + 1, dtype=np.int64)
    terminals = np.empty(len(starts), dtype=np.int64)
    t0 = time.perf_counter()
    for i, start in enumerate(starts):
        kernel.walk(g.indptr, g.indices, g.weights, int(start), -1, p, q,
                    uniforms[i], out)
        terminals[i] = out[length]
    return time.perf_counter() - t0, terminals


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--nodes", type=int, default=20_000)
    parser.add_argument("--walks", type=int, default=20_000)
    parser.add_argument("--length", type=int, default=3)
    args = parser.parse_args()

    print(f"building graph: {args.nodes} nodes ...")
    g = synthetic_graph(args.nodes)
    print(f"  {g.num_nodes} nodes, {g.num_edges} edges")

    rng = np.random.default_rng(9)
    starts = rng.integers(0, g.num_nodes, size=args.walks)
    uniforms = rng.random((args.walks, args.length))
    total_steps = args.walks * args.length

    py_time, py_terms = run(_walk_py, g, starts, uniforms, args.length, 2.0, 0.5)
    print(f"pure python : {py_time:8.3f} s   {total_steps / py_time:12,.0f} steps/s")

    if _walk_core is None:
        print("compiled    : not built (pip install -e . with a C toolchain)")
        return 0

    cy_time, cy_terms = run(_walk_core, g, starts, uniforms, args.length, 2.0, 0.5)
    print(f"compiled    : {cy_time:8.3f} s   {total_steps / cy_time:12,.0f} steps/s")
    print(f"speedup     : {py_time / cy_time:8.1f} x")

    if not np.array_equal(py_terms, cy_terms):
        print("ERROR: kernels disagree on identical inputs")
        return 1
    print("outputs bit-identical across kernels")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
